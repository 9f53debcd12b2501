"""Closed-form quantifiers for two-qubit states.

Steering in the two- and three-measurement scenarios, CHSH nonlocality,
the Horodecki criterion, concurrence in its general, X-state and
canonical-X variants, and the full Werner-state analytics.  All steering
and nonlocality formulas consume only the singular values of the
correlation matrix T.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotPositive, SpectrumNotReal, Unphysical
from .states import (
    SIGMA_Y,
    CanonicalCoefficients,
    DensityMatrix,
    FanoForm,
    XStateParams,
    canonical_coefficients,
    fano_compose,
    fano_decompose,
    purity,
)

SQRT2 = float(np.sqrt(2.0))
SQRT3 = float(np.sqrt(3.0))

_YY = np.kron(SIGMA_Y, SIGMA_Y).real  # spin-flip operator, real in this basis

# Tolerance for the eigenvalues of rho * rho~ in the concurrence; the
# product has a real non-negative spectrum in exact arithmetic.
_SPECTRUM_TOL = 1e-8


# -- array kernels -----------------------------------------------------------
#
# The public operations wrap these; the Monte Carlo harness calls them
# directly on stacked inputs so both paths run the same arithmetic.


def f2_from_sigma(sigma: np.ndarray) -> np.ndarray:
    """F_2 = sqrt(sigma_1^2 + sigma_2^2) from (..., 3) singular values."""
    return np.sqrt(sigma[..., 0] ** 2 + sigma[..., 1] ** 2)


def f3_from_sigma(sigma: np.ndarray) -> np.ndarray:
    """F_3 = c = sqrt(sum sigma_i^2); shares the partial sum with F_2 so
    that F_3 >= F_2 holds exactly in floating point."""
    p = sigma[..., 0] ** 2 + sigma[..., 1] ** 2
    return np.sqrt(p + sigma[..., 2] ** 2)


def s2_from_sigma(sigma: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, (f2_from_sigma(sigma) - 1.0) / (SQRT2 - 1.0))


def s3_from_sigma(sigma: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, (f3_from_sigma(sigma) - 1.0) / (SQRT3 - 1.0))


def concurrence_many(ms: np.ndarray) -> np.ndarray:
    """Concurrence of a stack of density matrices (..., 4, 4).

    Eigenvalues of rho (sig_y x sig_y) rho* (sig_y x sig_y) are taken
    with a general eigensolver; imaginary parts within _SPECTRUM_TOL are
    discarded and small negatives clamped before the square roots.
    """
    mt = _YY @ ms.conj() @ _YY
    lam = np.linalg.eigvals(ms @ mt)
    worst_imag = float(np.abs(lam.imag).max())
    if worst_imag > _SPECTRUM_TOL:
        raise SpectrumNotReal(f"eigenvalue imaginary part {worst_imag:.3e} exceeds {_SPECTRUM_TOL:.0e}")
    lam = lam.real
    worst_neg = float(lam.min())
    if worst_neg < -_SPECTRUM_TOL:
        raise SpectrumNotReal(f"eigenvalue {worst_neg:.3e} below -{_SPECTRUM_TOL:.0e}")
    lam = np.sort(np.clip(lam, 0.0, None), axis=-1)[..., ::-1]
    root = np.sqrt(lam)
    return np.maximum(0.0, root[..., 0] - root[..., 1] - root[..., 2] - root[..., 3])


# -- closed-form operations --------------------------------------------------


def f2_closed(c: CanonicalCoefficients) -> float:
    """Maximal two-setting steering functional sqrt(c^2 - c_min^2)."""
    return float(f2_from_sigma(c.sigma))


def f3_closed(c: CanonicalCoefficients) -> float:
    """Maximal three-setting steering functional c."""
    return float(f3_from_sigma(c.sigma))


def steering_s2(c: CanonicalCoefficients) -> float:
    """S_2 = max{0, (F_2 - 1)/(sqrt(2) - 1)}, in [0, 1]."""
    return float(s2_from_sigma(c.sigma))


def steering_s3(c: CanonicalCoefficients) -> float:
    """S_3 = max{0, (F_3 - 1)/(sqrt(3) - 1)}, in [0, 1]."""
    return float(s3_from_sigma(c.sigma))


def nonlocality_n2(c: CanonicalCoefficients) -> float:
    """Normalized maximal CHSH violation; identical to S_2 by construction."""
    return steering_s2(c)


def horodecki_m(f: FanoForm) -> float:
    """Sum of the two largest eigenvalues of T^t T (= sigma_1^2 + sigma_2^2).

    Computed from T^t T directly so it is correct for non-symmetric
    correlation matrices, not just the canonical diagonal form.
    """
    w = np.linalg.eigvalsh(f.T.T @ f.T)
    return float(w[2] + w[1])


def bell_chsh_max(f: FanoForm) -> float:
    """Maximal CHSH expectation 2 sqrt(M_T); violation iff > 2."""
    return 2.0 * float(np.sqrt(max(horodecki_m(f), 0.0)))


def concurrence(rho: DensityMatrix) -> float:
    """Concurrence E = max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}."""
    return float(concurrence_many(rho.matrix))


def x_concurrence(x: XStateParams) -> float:
    """Concurrence of an X state: 2 max{0, r23 - sqrt(d1 d4), r14 - sqrt(d2 d3)}."""
    d = x.d
    inner = x.r23 - float(np.sqrt(max(d[0], 0.0) * max(d[3], 0.0)))
    outer = x.r14 - float(np.sqrt(max(d[1], 0.0) * max(d[2], 0.0)))
    return 2.0 * max(0.0, inner, outer)


def canonical_x_concurrence(a3: float, b3: float, c) -> float:
    """Concurrence of the canonical X state with Bloch z-components a3, b3
    and signed diagonal correlations c = (c1, c2, c3).

    E = max{0, chi_+, chi_-}/2 with
    chi_pm = |c1 pm c2| - sqrt((1 pm c3)^2 - (a3 pm b3)^2).

    Raises Unphysical when a radicand is negative or the composed matrix
    is not a valid state.
    """
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (3,):
        raise ValueError("c must be a 3-vector of signed correlations")
    rad_p = (1.0 + c[2]) ** 2 - (a3 + b3) ** 2
    rad_m = (1.0 - c[2]) ** 2 - (a3 - b3) ** 2
    if rad_p < 0.0 or rad_m < 0.0:
        raise Unphysical(f"(1 pm c3)^2 < (a3 pm b3)^2 for a3={a3}, b3={b3}, c3={c[2]}")
    try:
        fano_compose(FanoForm(a=(0.0, 0.0, a3), b=(0.0, 0.0, b3), T=np.diag(c)))
    except (NotPositive, ValueError) as exc:
        raise Unphysical(f"parameters do not compose to a physical state: {exc}") from exc
    chi_p = abs(c[0] + c[1]) - float(np.sqrt(rad_p))
    chi_m = abs(c[0] - c[1]) - float(np.sqrt(rad_m))
    return 0.5 * max(0.0, chi_p, chi_m)


def bell_diagonal_concurrence(lambda1: float) -> float:
    """E = max{0, 2 lambda_1 - 1} from the largest Bell-diagonal eigenvalue."""
    if not 0.25 - 1e-9 <= lambda1 <= 1.0 + 1e-9:
        raise DomainError(f"lambda1={lambda1} outside [1/4, 1]")
    return max(0.0, 2.0 * lambda1 - 1.0)


def s3_from_purity(p: float) -> float:
    """S_3 of a Bell-diagonal state from its purity:
    max{0, (sqrt(4P - 1) - 1)/(sqrt(3) - 1)}; positive only for P > 1/2."""
    if not 0.25 - 1e-12 <= p <= 1.0 + 1e-12:
        raise DomainError(f"purity P={p} outside [1/4, 1]")
    s = (np.sqrt(max(4.0 * p - 1.0, 0.0)) - 1.0) / (SQRT3 - 1.0)
    return float(max(0.0, s))


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class MeasureReport:
    """All closed-form quantifiers of one state."""

    f2: float
    f3: float
    s2: float
    s3: float
    n2: float
    m_horodecki: float
    b_max: float
    concurrence: float
    purity: float

    def to_dict(self) -> dict:
        return {
            "f2": self.f2,
            "f3": self.f3,
            "s2": self.s2,
            "s3": self.s3,
            "n2": self.n2,
            "m_horodecki": self.m_horodecki,
            "b_max": self.b_max,
            "concurrence": self.concurrence,
            "purity": self.purity,
        }


@dataclass(frozen=True)
class WernerReport:
    """Closed-form analytics of the Werner state w |psi-><psi-| + (1-w)/4."""

    w: float
    e: float
    s3: float
    s2: float
    n2: float
    n3: float
    purity: float
    lambda1: float

    def to_dict(self) -> dict:
        return {
            "w": self.w,
            "e": self.e,
            "s3": self.s3,
            "s2": self.s2,
            "n2": self.n2,
            "n3": self.n3,
            "purity": self.purity,
            "lambda1": self.lambda1,
        }


def werner_report(w: float) -> WernerReport:
    """All Werner-state quantifiers in closed form.

    e = max{0, (3w-1)/2}, s3 = max{0, (w sqrt(3)-1)/(sqrt(3)-1)},
    s2 = n2 = max{0, (w sqrt(2)-1)/(sqrt(2)-1)}, n3 = max{0, 5w-4},
    P = (1+3w^2)/4, lambda_1 = (1+3w)/4.  Thresholds sit at w = 1/3,
    1/sqrt(3), 1/sqrt(2) and 4/5 respectively.
    """
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"Werner parameter w={w} outside [0, 1]")
    s2 = max(0.0, (w * SQRT2 - 1.0) / (SQRT2 - 1.0))
    return WernerReport(
        w=float(w),
        e=max(0.0, (3.0 * w - 1.0) / 2.0),
        s3=max(0.0, (w * SQRT3 - 1.0) / (SQRT3 - 1.0)),
        s2=s2,
        n2=s2,
        n3=max(0.0, 5.0 * w - 4.0),
        purity=(1.0 + 3.0 * w * w) / 4.0,
        lambda1=(1.0 + 3.0 * w) / 4.0,
    )


def analyze(rho: DensityMatrix) -> MeasureReport:
    """Aggregate every closed-form quantifier for one state."""
    f = fano_decompose(rho)
    c = canonical_coefficients(f)
    s2 = steering_s2(c)
    m = horodecki_m(f)
    return MeasureReport(
        f2=f2_closed(c),
        f3=f3_closed(c),
        s2=s2,
        s3=steering_s3(c),
        n2=s2,
        m_horodecki=m,
        b_max=2.0 * float(np.sqrt(max(m, 0.0))),
        concurrence=concurrence(rho),
        purity=purity(rho),
    )
