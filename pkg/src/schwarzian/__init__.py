"""Schwarzian derivatives, valence bounds, and minimal-surface lift checks
for analytic and harmonic mappings of the unit disk."""

from .analytic import (
    NEHARI_CONSTANT,
    NEHARI_QUADRATIC,
    POKORNYI,
    PROFILES,
    GridSpec,
    NehariProfile,
    NehariReport,
    NormEstimate,
    check_profile,
    composition_residual,
    nehari_check,
    schwarzian,
    schwarzian_norm_estimate,
    uniform_bound_from_radius,
)
from .errors import (
    BranchCutError,
    CriticalPointError,
    DomainError,
    EvalDomainError,
    ExprSyntaxError,
    IntegrationError,
    MobiusDegenerateError,
    NormEstimationError,
    PoleError,
    RootIsolationError,
    ToolkitError,
    UnknownIdentifierError,
    ValenceCountError,
)
from .expr import (
    Expr,
    eval_jet,
    eval_value,
    identity,
    koebe,
    mobius,
    parse,
    tan_scaled,
    to_source,
)
from .geometry import (
    GeodesicRectangleSpec,
    MobiusSelfMap,
    PseudoDisk,
    geodesic_length,
    geodesic_rectangle,
    hyp_dist,
    pseudo_disk,
    rectangle_count,
    rho,
)
from .harmonic import (
    HarmonicMap,
    LiftSample,
    SigmaJet,
    convexity_floor,
    convexity_indicator,
    curvature_density,
    harmonic_composition_residual,
    harmonic_norm_estimate,
    harmonic_preimages,
    harmonic_schwarzian,
    lift,
    lift_criterion_report,
    lift_criterion_value,
    mu,
    pommerenke_bound,
    schwarz_transform_coefficient,
    shear_koebe,
    sigma_jet,
)
from .jets import Jet
from .legendre import legendre_ode_residual, legendre_poly
from .sturm import (
    DEFAULT_SEED,
    DisconjugacyReport,
    SegmentPath,
    SegmentSolution,
    ZeroRecord,
    disconjugacy_check,
    find_zeros,
    integrate_segment,
    legendre_lower_bound,
    modulus_convexity_residual,
    profile_solution_zero_count,
    zero_separation_check,
)
from .valence import (
    BoundBreakdown,
    BoundConfig,
    PackingCheck,
    ValenceReport,
    annulus_packing_bound,
    breakdown_sweep,
    count_valence,
    integral_estimates,
    next_radius,
    packing_check,
    phi_step,
    separation_bound,
    sweep_rows,
    sweep_to_csv,
    tan_zero_census,
    valence_bound_cap,
    valence_bound_const,
    valence_breakdown,
)

__version__ = "0.1.0"
