"""Loss-induced decay of Wigner negativity and the pre-squeezing that slows it."""

from .errors import (
    BlurUnderResolved,
    DegenerateFlat,
    GridTooSmall,
    KernelExceedsGrid,
    NumericalError,
    OrderTooLarge,
    ResolutionBudget,
    TruncationBudget,
    UnboundedSqueeze,
)
from .loss import apply_loss, check_eta, decay_rate, lossy_grid, negativity_derivative
from .negativity import NegativityResult, negativity_curve, negativity_volume, taylor_estimate
from .optimize import OptimizeConfig, OptimumRecord, optimal_r_curve, optimize_squeeze_at_loss
from .phase_space import (
    PhaseGrid,
    WignerField,
    auto_grid,
    convolve_gaussian,
    integrate,
    laplacian,
    resample_scaled,
)
from .squeeze import (
    DCoefficients,
    SqueezedState,
    SqueezeParams,
    VulnerabilityReport,
    apply_squeeze,
    d_coefficients,
    optimal_squeeze,
    squeezed_vulnerability,
    vulnerability,
    vulnerability_report,
)
from .states import (
    Banana,
    Cat,
    Coherent,
    Fock,
    FockSuperposition,
    StateSpec,
    Vacuum,
    banana_wigner,
    build_field,
    cat_wigner,
    fock_wigner,
)

__version__ = "0.1.0"
