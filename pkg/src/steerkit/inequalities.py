"""Setting-dependent evaluation of the steering and Bell functionals.

Four functionals: the n-setting correlation functional F_n (|sum of
correlators|/sqrt(n), Bob's directions orthonormal), its CHSH-like
two-setting steering variant, the CHSH Bell expectation, and the
three-setting Bell-3322 combination I_3322.

The ``*_batch`` kernels accept any number of leading axes on the
direction arrays; the scalar operations wrap them, so the optimizer and
the Monte Carlo harness run exactly the same arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SettingConstraintViolated
from .states import FanoForm

#: Tolerance on unit norms and orthogonality of measurement directions.
UNIT_TOL = 1e-12


def _check_units(vs: np.ndarray, label: str) -> None:
    norm_gap = float(np.abs(np.linalg.norm(vs, axis=-1) - 1.0).max())
    if norm_gap > UNIT_TOL:
        raise SettingConstraintViolated(f"{label} vectors not unit: |norm - 1| = {norm_gap:.3e}")


@dataclass(frozen=True, eq=False)
class SteeringSetting:
    """Alice directions u_i and Bob directions v_i, n = 2 or 3 per side.

    The v_i must be pairwise orthogonal unit vectors; for n = 2 this is
    exactly the mutually-unbiased constraint of the CHSH-like steering
    scenario, so one type serves both modes.
    """

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        if u.ndim != 2 or u.shape[1] != 3 or u.shape[0] not in (2, 3):
            raise SettingConstraintViolated(f"u must be (n, 3) with n in {{2, 3}}, got {u.shape}")
        if v.shape != u.shape:
            raise SettingConstraintViolated(f"v shape {v.shape} does not match u shape {u.shape}")
        _check_units(u, "Alice")
        _check_units(v, "Bob")
        gram = v @ v.T
        off = float(np.abs(gram - np.eye(u.shape[0])).max())
        if off > UNIT_TOL:
            raise SettingConstraintViolated(f"Bob directions not orthonormal: max Gram deviation {off:.3e}")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def to_dict(self) -> dict:
        return {"u": self.u.tolist(), "v": self.v.tolist()}


@dataclass(frozen=True, eq=False)
class BellSetting:
    """Alice directions x_i and Bob directions y_j; unit norms only."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != 3 or x.shape[0] not in (2, 3):
            raise SettingConstraintViolated(f"x must be (n, 3) with n in {{2, 3}}, got {x.shape}")
        if y.shape != x.shape:
            raise SettingConstraintViolated(f"y shape {y.shape} does not match x shape {x.shape}")
        _check_units(x, "Alice")
        _check_units(y, "Bob")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def to_dict(self) -> dict:
        return {"x": self.x.tolist(), "y": self.y.tolist()}


# -- batch kernels ------------------------------------------------------------


def cjwr_batch(t: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """F_n = |sum_i u_i^t T v_i| / sqrt(n); u, v of shape (..., n, 3)."""
    n = u.shape[-2]
    total = np.einsum("...ni,ij,...nj->...", u, t, v)
    return np.abs(total) / np.sqrt(n)


def chsh_steer_batch(t: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """CHSH-like steering value (sqrt(f+) + sqrt(f-))/2 with
    f_pm = <(A1 pm A2) B1>^2 + <(A1 pm A2) B2>^2; u, v of shape (..., 2, 3)."""
    c = np.einsum("...ni,ij,...mj->...nm", u, t, v)
    fp = (c[..., 0, 0] + c[..., 1, 0]) ** 2 + (c[..., 0, 1] + c[..., 1, 1]) ** 2
    fm = (c[..., 0, 0] - c[..., 1, 0]) ** 2 + (c[..., 0, 1] - c[..., 1, 1]) ** 2
    return 0.5 * (np.sqrt(fp) + np.sqrt(fm))


def chsh_bell_batch(t: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Signed CHSH expectation x1^t T (y1+y2) + x2^t T (y1-y2)."""
    yp = y[..., 0, :] + y[..., 1, :]
    ym = y[..., 0, :] - y[..., 1, :]
    return np.einsum("...i,ij,...j->...", x[..., 0, :], t, yp) + np.einsum(
        "...i,ij,...j->...", x[..., 1, :], t, ym
    )


def i3322_batch(a: np.ndarray, b: np.ndarray, t: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """I_3322 from the Fano form; u = Alice triad, v = Bob triad (..., 3, 3).

    Joint probabilities p(A_i B_j) = (1 + u_i.a + v_j.b + u_i^t T v_j)/4
    and marginals p(A_k) = (1 + u_k.a)/2, p(B_k) = (1 + v_k.b)/2; the
    local-hidden-variable bound of the combination is 0.
    """
    ua = np.einsum("...ni,i->...n", u, a)
    vb = np.einsum("...ni,i->...n", v, b)
    c = np.einsum("...ni,ij,...mj->...nm", u, t, v)
    joint = 0.25 * (1.0 + ua[..., :, None] + vb[..., None, :] + c)
    pa = 0.5 * (1.0 + ua)
    pb = 0.5 * (1.0 + vb)
    return (
        joint[..., 0, 0]
        + joint[..., 1, 0]
        + joint[..., 2, 0]
        + joint[..., 0, 1]
        + joint[..., 1, 1]
        - joint[..., 2, 1]
        + joint[..., 0, 2]
        - joint[..., 1, 2]
        - pa[..., 0]
        - pb[..., 1]
        - 2.0 * pb[..., 0]
    )


# -- scalar operations ---------------------------------------------------------


def correlator(f: FanoForm, u, v) -> float:
    """<(u.sigma) x (v.sigma)> = u^t T v for unit vectors u, v."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    return float(u @ f.T @ v)


def f_cjwr(f: FanoForm, s: SteeringSetting) -> float:
    """The n-setting correlation steering functional; unsteerable states stay <= 1."""
    return float(cjwr_batch(f.T, s.u, s.v))


def f_chsh_steering(f: FanoForm, s: SteeringSetting) -> float:
    """CHSH-like steering functional; requires the two-setting scenario."""
    if s.n != 2:
        raise SettingConstraintViolated(f"CHSH-like steering needs n=2 settings, got n={s.n}")
    return float(chsh_steer_batch(f.T, s.u, s.v))


def chsh_bell_value(f: FanoForm, s: BellSetting) -> float:
    """Signed CHSH Bell expectation; local states obey |value| <= 2."""
    if s.n != 2:
        raise SettingConstraintViolated(f"CHSH needs 2+2 directions, got n={s.n}")
    return float(chsh_bell_batch(f.T, s.x, s.y))


def i3322_value(f: FanoForm, s: BellSetting) -> float:
    """Bell-3322 combination; local states obey value <= 0."""
    if s.n != 3:
        raise SettingConstraintViolated(f"I3322 needs 3+3 directions, got n={s.n}")
    return float(i3322_batch(f.a, f.b, f.T, s.x, s.y))
