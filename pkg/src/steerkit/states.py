"""Validated two-qubit states and their Pauli (Fano) decomposition.

Conventions, fixed package-wide: computational basis ordered
|00>, |01>, |10>, |11>; Pauli matrices sigma_1 = X, sigma_2 = Y,
sigma_3 = Z.  All matrices are complex128; a single physicality
tolerance EPS covers Hermiticity, trace and positivity checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotHermitian, NotPositive, NotXState, TraceNotOne

#: Single physicality tolerance used by all state validation.
EPS = 1e-9

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)
ID2 = np.eye(2, dtype=np.complex128)

# Pauli operator stacks in the fixed basis: A_k = sigma_k (x) 1,
# B_k = 1 (x) sigma_k, AB_kl = sigma_k (x) sigma_l.
_A_OPS = np.stack([np.kron(s, ID2) for s in PAULI])
_B_OPS = np.stack([np.kron(ID2, s) for s in PAULI])
_AB_OPS = np.stack([np.stack([np.kron(si, sj) for sj in PAULI]) for si in PAULI])

# X pattern: main diagonal plus anti-diagonal.
_X_MASK = np.zeros((4, 4), dtype=bool)
_X_MASK[np.arange(4), np.arange(4)] = True
_X_MASK[np.arange(4), 3 - np.arange(4)] = True


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated 4x4 two-qubit density matrix.

    The constructor checks the raw input against the physicality
    tolerance EPS and stores the exactly Hermitian, trace-normalized
    part.  Eigenvalues may still sit up to EPS below zero; use
    :func:`validate_density` to clamp them away first.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        herm_gap = float(np.abs(m - m.conj().T).max())
        if herm_gap > EPS:
            raise NotHermitian(f"max |M - M^dag| = {herm_gap:.3e} exceeds {EPS:.0e}")
        trace_gap = abs(complex(m.trace()) - 1.0)
        if trace_gap > EPS:
            raise TraceNotOne(f"|Tr(M) - 1| = {trace_gap:.3e} exceeds {EPS:.0e}")
        h = (m + m.conj().T) / 2.0
        lo = float(np.linalg.eigvalsh(h)[0])
        if lo < -EPS:
            raise NotPositive(f"min eigenvalue {lo:.3e} below -{EPS:.0e}")
        h = h / h.trace().real
        h.setflags(write=False)
        object.__setattr__(self, "matrix", h)


@dataclass(frozen=True, eq=False)
class FanoForm:
    """Local Bloch vectors a, b and the 3x3 correlation matrix T."""

    a: np.ndarray
    b: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        t = np.asarray(self.T, dtype=np.float64)
        if a.shape != (3,) or b.shape != (3,) or t.shape != (3, 3):
            raise ValueError("FanoForm needs a, b of shape (3,) and T of shape (3, 3)")
        na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
        if na > 1.0 + EPS or nb > 1.0 + EPS:
            raise ValueError(f"Bloch vector norm exceeds 1: |a|={na:.6f}, |b|={nb:.6f}")
        total = na * na + nb * nb + float((t * t).sum())
        if total > 3.0 + EPS:
            raise ValueError(f"a^2 + b^2 + |T|_F^2 = {total:.6f} exceeds 3")
        for arr in (a, b, t):
            arr.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "T", t)


@dataclass(frozen=True, eq=False)
class CanonicalCoefficients:
    """Descending singular values of T plus the derived c^2 and c_min."""

    sigma: np.ndarray
    c_sq: float
    c_min: float

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=np.float64)
        if s.shape != (3,):
            raise ValueError("sigma must have shape (3,)")
        if not (s[0] >= s[1] >= s[2] >= 0.0):
            raise ValueError(f"singular values not sorted descending: {s}")
        if s[0] > 1.0 + EPS:
            raise ValueError(f"largest singular value {s[0]:.6f} exceeds 1")
        if self.c_sq > 3.0 + EPS:
            raise ValueError(f"c_sq = {self.c_sq:.6f} exceeds 3")
        if abs(self.c_sq - float(s @ s)) > 1e-9 or abs(self.c_min - float(s[2])) > 1e-12:
            raise ValueError("c_sq / c_min inconsistent with sigma")
        s.setflags(write=False)
        object.__setattr__(self, "sigma", s)


@dataclass(frozen=True, eq=False)
class XStateParams:
    """Diagonal entries and anti-diagonal moduli of an X-shaped state."""

    d: np.ndarray
    r14: float
    r23: float

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64)
        if d.shape != (4,):
            raise ValueError("d must have shape (4,)")
        if abs(float(d.sum()) - 1.0) > EPS:
            raise ValueError(f"diagonal entries sum to {d.sum():.9f}, not 1")
        if float(d.min()) < -EPS:
            raise ValueError(f"negative diagonal entry {d.min():.3e}")
        if self.r14 < 0.0 or self.r23 < 0.0:
            raise ValueError("anti-diagonal moduli must be non-negative")
        if self.r14 > np.sqrt(max(d[0], 0.0) * max(d[3], 0.0)) + EPS:
            raise ValueError("r14 exceeds sqrt(d1*d4): X block not PSD")
        if self.r23 > np.sqrt(max(d[1], 0.0) * max(d[2], 0.0)) + EPS:
            raise ValueError("r23 exceeds sqrt(d2*d3): X block not PSD")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)


def validate_density(raw) -> DensityMatrix:
    """Validate a raw 4x4 complex matrix as a physical two-qubit state.

    Eigenvalues in [-EPS, 0) are clamped to zero and the trace is
    renormalized; anything worse raises NotHermitian, TraceNotOne or
    NotPositive naming the offending magnitude.
    """
    m = np.asarray(raw, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    herm_gap = float(np.abs(m - m.conj().T).max())
    if herm_gap > EPS:
        raise NotHermitian(f"max |M - M^dag| = {herm_gap:.3e} exceeds {EPS:.0e}")
    trace_gap = abs(complex(m.trace()) - 1.0)
    if trace_gap > EPS:
        raise TraceNotOne(f"|Tr(M) - 1| = {trace_gap:.3e} exceeds {EPS:.0e}")
    h = (m + m.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    if float(w[0]) < -EPS:
        raise NotPositive(f"min eigenvalue {float(w[0]):.3e} below -{EPS:.0e}")
    if float(w[0]) < 0.0:
        w = np.clip(w, 0.0, None)
        h = (v * w) @ v.conj().T
    return DensityMatrix(h)


def fano_decompose(rho: DensityMatrix) -> FanoForm:
    """Pauli decomposition: a_i = Tr(rho sig_i x 1), t_ij = Tr(rho sig_i x sig_j)."""
    m = rho.matrix
    # Tr(rho K) for each stacked operator; imaginary parts are rounding
    # noise (< 1e-12) because the stored matrix is exactly Hermitian.
    a = np.einsum("ab,kba->k", m, _A_OPS).real
    b = np.einsum("ab,kba->k", m, _B_OPS).real
    t = np.einsum("ab,klba->kl", m, _AB_OPS).real
    return FanoForm(a=a, b=b, T=t)


def _fano_matrix(a, b, t) -> np.ndarray:
    """Raw (unvalidated) matrix of the Fano expansion with coefficients (a, b, T)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    m = np.eye(4, dtype=np.complex128)
    m += np.einsum("k,kab->ab", a, _A_OPS)
    m += np.einsum("k,kab->ab", b, _B_OPS)
    m += np.einsum("kl,klab->ab", t, _AB_OPS)
    return 0.25 * m


def fano_compose(f: FanoForm) -> DensityMatrix:
    """Inverse of :func:`fano_decompose`; raises NotPositive if unphysical."""
    return validate_density(_fano_matrix(f.a, f.b, f.T))


def canonical_coefficients(f: FanoForm) -> CanonicalCoefficients:
    """Singular values of T (descending) with c^2 = sum sigma_i^2, c_min = sigma_3.

    The closed-form measures depend only on c^2 and c_min^2, which are
    invariant under local unitaries, so no sign convention is needed.
    """
    sigma = np.linalg.svd(f.T, compute_uv=False)
    return CanonicalCoefficients(sigma=sigma, c_sq=float(sigma @ sigma), c_min=float(sigma[2]))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), in [1/4, 1] for two qubits."""
    m = rho.matrix
    return float((m.real**2 + m.imag**2).sum())


def eigvals_hermitian(rho: DensityMatrix) -> np.ndarray:
    """Real eigenvalues sorted descending; they sum to 1."""
    return np.linalg.eigvalsh(rho.matrix)[::-1].copy()


def x_reduce(rho: DensityMatrix, tol: float = EPS) -> XStateParams:
    """Reduce an X-shaped state to its five real parameters.

    The anti-diagonal phases are removable by the local unitary
    exp(-i phi_+ sig_z) (x) exp(-i phi_- sig_z) with
    phi_pm = (phi_14 pm phi_23)/4, which fixes every quantum correlation,
    so only the moduli |rho_14|, |rho_23| are kept.

    Raises NotXState if any entry outside the X pattern exceeds ``tol``.
    """
    m = rho.matrix
    off = np.abs(m[~_X_MASK])
    worst = float(off.max())
    if worst > tol:
        raise NotXState(f"off-X entry with magnitude {worst:.3e} exceeds tol={tol:.0e}")
    d = np.real(np.diag(m)).copy()
    return XStateParams(d=d, r14=float(abs(m[0, 3])), r23=float(abs(m[1, 2])))


# -- named states -----------------------------------------------------------

_BELL_KETS = {
    "phi+": np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0),
    "phi-": np.array([1.0, 0.0, 0.0, -1.0]) / np.sqrt(2.0),
    "psi+": np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0),
    "psi-": np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0),
}


def bell_state(name: str) -> DensityMatrix:
    """One of the four Bell projectors: 'phi+', 'phi-', 'psi+', 'psi-'."""
    try:
        ket = _BELL_KETS[name]
    except KeyError:
        raise ValueError(f"unknown Bell state {name!r}; expected one of {sorted(_BELL_KETS)}") from None
    return DensityMatrix(np.outer(ket, ket.conj()))


def werner_state(w: float) -> DensityMatrix:
    """w |psi-><psi-| + (1-w) 1/4 for w in [0, 1]."""
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"Werner parameter w={w} outside [0, 1]")
    ket = _BELL_KETS["psi-"]
    m = w * np.outer(ket, ket.conj()) + (1.0 - w) * np.eye(4) / 4.0
    return DensityMatrix(m)


def maximally_mixed() -> DensityMatrix:
    """The two-qubit maximally mixed state 1/4."""
    return DensityMatrix(np.eye(4) / 4.0)


# -- stacked helpers (used by the campaign harness) -------------------------


def fano_many(ms: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized Fano decomposition of a stack of matrices (..., 4, 4)."""
    a = np.einsum("...ab,kba->...k", ms, _A_OPS).real
    b = np.einsum("...ab,kba->...k", ms, _B_OPS).real
    t = np.einsum("...ab,klba->...kl", ms, _AB_OPS).real
    return a, b, t
