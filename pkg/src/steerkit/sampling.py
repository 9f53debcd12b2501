"""Seeded, counter-based random generation of states and settings.

Every sample is a pure function of (seed, index): each index gets its
own Philox stream keyed by (seed, index), so parallel campaigns produce
output identical to serial ones and streams for different indices are
independent by construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExhaustedRejection
from .inequalities import BellSetting, SteeringSetting
from .states import EPS, DensityMatrix, validate_density, _fano_matrix

KINDS = ("pure_haar", "ginibre_mixed", "bell_diagonal", "x_state", "werner_grid")
SCENARIOS = ("cjwr2", "cjwr3", "chsh_steer", "chsh_bell", "bell3322")

_MASK64 = (1 << 64) - 1

# Distinct stream tags keep state draws, setting draws and optimizer
# seeding independent even when a campaign reuses one seed everywhere.
STATE_STREAM = 0
SETTING_STREAM = 1
OPT_STREAM = 2

_REJECTION_LIMIT = 1000


@dataclass(frozen=True)
class SamplerSpec:
    """Which ensemble to draw from, and the (seed, count) that define it."""

    kind: str
    seed: int
    count: int
    rank: int = 4

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown sampler kind {self.kind!r}; expected one of {KINDS}")
        if self.count < 1:
            raise DomainError(f"count must be >= 1, got {self.count}")
        if self.rank not in (1, 2, 3, 4):
            raise DomainError(f"rank must be in 1..4, got {self.rank}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "count": self.count, "rank": self.rank}


def stream(seed: int, index: int, tag: int = STATE_STREAM) -> np.random.Generator:
    """Philox generator keyed by (seed, index); ``tag`` separates purposes."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, 0, tag], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return re + 1j * im


def _rejection(draw, accept, what: str):
    for _ in range(_REJECTION_LIMIT):
        x = draw()
        if accept(x):
            return x
    raise ExhaustedRejection(f"no acceptable {what} after {_REJECTION_LIMIT} attempts")


def _state_matrix(spec: SamplerSpec, index: int) -> np.ndarray:
    """Raw matrix for sample ``index``; deterministic in (spec.seed, index)."""
    rng = stream(spec.seed, index, STATE_STREAM)
    if spec.kind == "pure_haar":
        z = _complex_normal(rng, 4)
        z /= np.linalg.norm(z)
        return np.outer(z, z.conj())
    if spec.kind == "ginibre_mixed":
        g = _complex_normal(rng, (4, spec.rank))
        m = g @ g.conj().T
        return m / m.trace().real
    if spec.kind == "bell_diagonal":
        def draw():
            c = rng.uniform(-1.0, 1.0, size=3)
            return _fano_matrix(np.zeros(3), np.zeros(3), np.diag(c))

        def accept(m):
            return float(np.linalg.eigvalsh(m)[0]) >= -EPS

        return _rejection(draw, accept, "Bell-diagonal correlation vector")
    if spec.kind == "x_state":
        # Two PSD 2x2 blocks (outer: span{|00>,|11>}, inner: span{|01>,|10>})
        # normalized to unit total trace; PSD by construction.
        ga = _complex_normal(rng, (2, 2))
        gb = _complex_normal(rng, (2, 2))
        blk_a = ga @ ga.conj().T
        blk_b = gb @ gb.conj().T
        total = blk_a.trace().real + blk_b.trace().real
        blk_a /= total
        blk_b /= total
        m = np.zeros((4, 4), dtype=np.complex128)
        m[np.ix_([0, 3], [0, 3])] = blk_a
        m[np.ix_([1, 2], [1, 2])] = blk_b
        return m
    # werner_grid: evenly spaced w in [0, 1] (w = 0 when count == 1).
    w = index / (spec.count - 1) if spec.count > 1 else 0.0
    psi = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    return w * np.outer(psi, psi) + (1.0 - w) * np.eye(4) / 4.0


def sample_state(spec: SamplerSpec, index: int) -> DensityMatrix:
    """Draw sample ``index`` of the ensemble; valid and deterministic."""
    if not 0 <= index < spec.count:
        raise IndexError(f"index {index} outside [0, {spec.count})")
    return validate_density(_state_matrix(spec, index))


# -- measurement settings ----------------------------------------------------


def _sphere(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform unit vectors of shape (..., 3) via normalized Gaussians."""
    g = rng.standard_normal(shape + (3,))
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def _rotations(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform random rotation matrices (..., 3, 3) from unit quaternions."""
    q = rng.standard_normal(shape + (4,))
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    r = np.empty(shape + (3, 3))
    r[..., 0, 0] = 1 - 2 * (y * y + z * z)
    r[..., 0, 1] = 2 * (x * y - z * w)
    r[..., 0, 2] = 2 * (x * z + y * w)
    r[..., 1, 0] = 2 * (x * y + z * w)
    r[..., 1, 1] = 1 - 2 * (x * x + z * z)
    r[..., 1, 2] = 2 * (y * z - x * w)
    r[..., 2, 0] = 2 * (x * z - y * w)
    r[..., 2, 1] = 2 * (y * z + x * w)
    r[..., 2, 2] = 1 - 2 * (x * x + y * y)
    return r


def sample_setting_arrays(scenario: str, rng: np.random.Generator, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``m`` settings at once: (m, n, 3) Alice and Bob direction arrays.

    Bob's directions for the steering scenarios are the first n columns
    of uniform random rotations, hence orthonormal to machine precision.
    """
    if scenario in ("cjwr2", "chsh_steer"):
        u = _sphere(rng, (m, 2))
        v = np.swapaxes(_rotations(rng, (m,))[..., :, :2], -1, -2)
    elif scenario == "cjwr3":
        u = _sphere(rng, (m, 3))
        v = np.swapaxes(_rotations(rng, (m,)), -1, -2)
    elif scenario == "chsh_bell":
        u = _sphere(rng, (m, 2))
        v = _sphere(rng, (m, 2))
    elif scenario == "bell3322":
        u = _sphere(rng, (m, 3))
        v = _sphere(rng, (m, 3))
    else:
        raise DomainError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    return u, v


def sample_setting(scenario: str, seed: int, index: int):
    """Draw one measurement setting, deterministic in (seed, index)."""
    rng = stream(seed, index, SETTING_STREAM)
    u, v = sample_setting_arrays(scenario, rng, 1)
    if scenario in ("cjwr2", "cjwr3", "chsh_steer"):
        return SteeringSetting(u=u[0], v=v[0])
    return BellSetting(x=u[0], y=v[0])
