"""Derivative-free maximization of the functionals over measurement settings.

Settings are parametrized without constraints: each free unit vector by
spherical angles (theta, phi) and each orthonormal pair/triad by an
axis-angle rotation vector applied to the canonical basis.  A compass
(pattern) search with geometric step shrinking runs over the flattened
angle vector; random restarts are drawn from the uniform sphere /
uniform rotation measure, each from its own counter-based stream, so
runs are deterministic and restart trajectories are independent of
execution order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidFunctionalForScenario, TightnessViolation
from .inequalities import (
    BellSetting,
    SteeringSetting,
    chsh_bell_batch,
    chsh_steer_batch,
    cjwr_batch,
    i3322_batch,
)
from .measures import f2_from_sigma, f3_from_sigma
from .states import FanoForm
from .sampling import OPT_STREAM, stream

FUNCTIONALS = ("cjwr2", "cjwr3", "chsh_steer", "chsh_bell", "i3322")

#: Numerical soundness margin: a found value may exceed its closed-form
#: bound by at most this much before we declare an implementation bug.
BOUND_TOL = 1e-9


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iters: int = 500
    init_step: float = 0.5
    shrink: float = 0.6
    tol: float = 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if self.init_step <= 0.0 or self.tol <= 0.0:
            raise ValueError("init_step and tol must be positive")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError(f"shrink must lie in (0, 1), got {self.shrink}")


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """Best value and setting found, with the gap to the closed form.

    ``gap_to_oracle`` is best_value - closed_form (None when no closed
    form exists, i.e. for i3322); a positive gap beyond BOUND_TOL means
    one side is wrong and raises TightnessViolation immediately.
    """

    best_value: float
    best_setting: SteeringSetting | BellSetting
    evaluations: int
    converged: bool
    gap_to_oracle: float | None

    def __post_init__(self):
        if self.gap_to_oracle is not None and self.gap_to_oracle > BOUND_TOL:
            raise TightnessViolation(
                f"found {self.best_value!r} exceeds closed form by {self.gap_to_oracle:.3e}"
            )

    def to_dict(self) -> dict:
        return {
            "best_value": self.best_value,
            "best_setting": self.best_setting.to_dict(),
            "evaluations": self.evaluations,
            "converged": self.converged,
            "gap_to_oracle": self.gap_to_oracle,
        }


# -- angle parametrization ----------------------------------------------------

# per functional: (number of free vectors, columns of the rotation block)
_PARAM_SHAPE = {
    "cjwr2": (2, 2),
    "cjwr3": (3, 3),
    "chsh_steer": (2, 2),
    "chsh_bell": (4, 0),
    "i3322": (6, 0),
}


def _dim(kind: str) -> int:
    free, cols = _PARAM_SHAPE[kind]
    return 2 * free + (3 if cols else 0)


def _angles_to_unit(tp: np.ndarray) -> np.ndarray:
    """(..., 2) spherical angles -> (..., 3) unit vectors."""
    theta, phi = tp[..., 0], tp[..., 1]
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _rotvec_to_matrix(r: np.ndarray) -> np.ndarray:
    """Rodrigues map (..., 3) -> (..., 3, 3), stable at small angles."""
    theta = np.linalg.norm(r, axis=-1)
    a = np.sinc(theta / np.pi)                      # sin(t)/t
    b = 0.5 * np.sinc(theta / (2.0 * np.pi)) ** 2   # (1-cos(t))/t^2
    zeros = np.zeros_like(theta)
    rx, ry, rz = r[..., 0], r[..., 1], r[..., 2]
    k = np.stack(
        [
            np.stack([zeros, -rz, ry], axis=-1),
            np.stack([rz, zeros, -rx], axis=-1),
            np.stack([-ry, rx, zeros], axis=-1),
        ],
        axis=-2,
    )
    eye = np.broadcast_to(np.eye(3), k.shape)
    return eye + a[..., None, None] * k + b[..., None, None] * (k @ k)


def _decode(kind: str, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flattened angles (..., d) -> (alice, bob) direction arrays."""
    free, cols = _PARAM_SHAPE[kind]
    vecs = _angles_to_unit(x[..., : 2 * free].reshape(x.shape[:-1] + (free, 2)))
    if cols:
        rot = _rotvec_to_matrix(x[..., 2 * free :])
        bob = np.swapaxes(rot[..., :, :cols], -1, -2)
        return vecs, bob
    half = free // 2
    return vecs[..., :half, :], vecs[..., half:, :]


def _eval(kind: str, f: FanoForm, x: np.ndarray) -> np.ndarray:
    alice, bob = _decode(kind, x)
    if kind in ("cjwr2", "cjwr3"):
        return cjwr_batch(f.T, alice, bob)
    if kind == "chsh_steer":
        return chsh_steer_batch(f.T, alice, bob)
    if kind == "chsh_bell":
        # optimize |<B>|: sign flips of x1 map one branch onto the other
        return np.abs(chsh_bell_batch(f.T, alice, bob))
    return i3322_batch(f.a, f.b, f.T, alice, bob)


def _quaternion_to_rotvec(q: np.ndarray) -> np.ndarray:
    q = q / np.linalg.norm(q)
    if q[0] < 0.0:
        q = -q
    vec_norm = float(np.linalg.norm(q[1:]))
    if vec_norm < 1e-12:
        return np.zeros(3)
    angle = 2.0 * np.arctan2(vec_norm, float(q[0]))
    return (q[1:] / vec_norm) * angle


def _initial_angles(kind: str, cfg: OptimizerConfig) -> np.ndarray:
    """One uniform-random starting point per restart, stream (seed, restart)."""
    free, cols = _PARAM_SHAPE[kind]
    x0 = np.empty((cfg.restarts, _dim(kind)))
    for i in range(cfg.restarts):
        rng = stream(cfg.seed, i, OPT_STREAM)
        g = rng.standard_normal((free, 3))
        g /= np.linalg.norm(g, axis=-1, keepdims=True)
        theta = np.arccos(np.clip(g[:, 2], -1.0, 1.0))
        phi = np.arctan2(g[:, 1], g[:, 0])
        x0[i, : 2 * free] = np.stack([theta, phi], axis=-1).ravel()
        if cols:
            x0[i, 2 * free :] = _quaternion_to_rotvec(rng.standard_normal(4))
    return x0


def _search(kind: str, f: FanoForm, cfg: OptimizerConfig) -> tuple[np.ndarray, np.ndarray, int, bool]:
    """Compass search across all restarts in lockstep.

    Each restart keeps its own step size and shrinks it only after a full
    sweep without improvement; restarts whose step fell below tol freeze.
    Row i's trajectory depends only on (seed, i), giving the prefix
    property in the number of restarts.
    """
    d = _dim(kind)
    x = _initial_angles(kind, cfg)
    fx = _eval(kind, f, x)
    step = np.full(cfg.restarts, cfg.init_step)
    active = step >= cfg.tol
    evaluations = cfg.restarts
    for _ in range(cfg.max_iters):
        if not active.any():
            break
        improved = np.zeros(cfg.restarts, dtype=bool)
        for j in range(d):
            for sign in (1.0, -1.0):
                xc = x.copy()
                xc[:, j] += sign * step
                fc = _eval(kind, f, xc)
                evaluations += int(active.sum())
                accept = active & (fc > fx)
                x[accept, j] = xc[accept, j]
                fx[accept] = fc[accept]
                improved |= accept
        stalled = active & ~improved
        step[stalled] *= cfg.shrink
        active = step >= cfg.tol
    converged = bool((step < cfg.tol).all())
    return x, fx, evaluations, converged


def _closed_form(kind: str, f: FanoForm) -> float | None:
    sigma = np.linalg.svd(f.T, compute_uv=False)
    if kind in ("cjwr2", "chsh_steer"):
        return float(f2_from_sigma(sigma))
    if kind == "cjwr3":
        return float(f3_from_sigma(sigma))
    if kind == "chsh_bell":
        return float(2.0 * f2_from_sigma(sigma))
    return None


def maximize(functional: str, f: FanoForm, cfg: OptimizerConfig) -> OptimizationResult:
    """Maximize one functional over measurement settings.

    Deterministic given (functional, f, cfg.seed); the best value over
    all restarts is returned together with the decoded setting.
    """
    if functional not in FUNCTIONALS:
        raise InvalidFunctionalForScenario(
            f"unknown functional {functional!r}; expected one of {FUNCTIONALS}"
        )
    x, fx, evaluations, converged = _search(functional, f, cfg)
    best = int(np.argmax(fx))
    alice, bob = _decode(functional, x[best])
    if functional in ("cjwr2", "cjwr3", "chsh_steer"):
        setting = SteeringSetting(u=alice, v=bob)
    else:
        setting = BellSetting(x=alice, y=bob)
    closed = _closed_form(functional, f)
    best_value = float(fx[best])
    gap = None if closed is None else best_value - closed
    return OptimizationResult(
        best_value=best_value,
        best_setting=setting,
        evaluations=evaluations,
        converged=converged,
        gap_to_oracle=gap,
    )


def certify_tightness(f: FanoForm, cfg: OptimizerConfig) -> dict[str, dict[str, float]]:
    """Check numerically that the closed forms are the true maxima.

    Runs the optimizer for every functional with a closed-form oracle and
    reports {closed, found, gap} with gap = closed - found (the reach
    shortfall).  A found value above closed + BOUND_TOL raises
    TightnessViolation via the result invariant.
    """
    out = {}
    for kind in ("cjwr2", "cjwr3", "chsh_steer", "chsh_bell"):
        res = maximize(kind, f, cfg)
        closed = _closed_form(kind, f)
        out[kind] = {
            "closed": closed,
            "found": res.best_value,
            "gap": closed - res.best_value,
        }
    return out
