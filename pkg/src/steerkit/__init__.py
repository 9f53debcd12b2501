"""steerkit: closed-form EPR-steering, Bell-nonlocality and entanglement
measures for two-qubit states, with numerical certification campaigns."""

from .errors import (
    CampaignFailed,
    DomainError,
    ExhaustedRejection,
    InvalidFunctionalForScenario,
    NotHermitian,
    NotPositive,
    NotXState,
    SettingConstraintViolated,
    SpectrumNotReal,
    StateValidationError,
    SteerkitError,
    TightnessViolation,
    TraceNotOne,
    Unphysical,
)
from .harness import (
    CampaignReport,
    hierarchy_campaign,
    i3322_envelope_campaign,
    tightness_campaign,
    werner_scan,
    werner_scan_csv,
)
from .inequalities import (
    BellSetting,
    SteeringSetting,
    chsh_bell_value,
    correlator,
    f_chsh_steering,
    f_cjwr,
    i3322_value,
)
from .measures import (
    MeasureReport,
    WernerReport,
    analyze,
    bell_chsh_max,
    bell_diagonal_concurrence,
    canonical_x_concurrence,
    concurrence,
    f2_closed,
    f3_closed,
    horodecki_m,
    nonlocality_n2,
    s3_from_purity,
    steering_s2,
    steering_s3,
    werner_report,
    x_concurrence,
)
from .optimize import OptimizationResult, OptimizerConfig, certify_tightness, maximize
from .sampling import SamplerSpec, sample_setting, sample_state
from .statedoc import state_from_document, state_to_document
from .states import (
    CanonicalCoefficients,
    DensityMatrix,
    FanoForm,
    XStateParams,
    bell_state,
    canonical_coefficients,
    eigvals_hermitian,
    fano_compose,
    fano_decompose,
    maximally_mixed,
    purity,
    validate_density,
    werner_state,
    x_reduce,
)

__version__ = "0.1.0"
