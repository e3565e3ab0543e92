"""Boolean probability on the real line for finitely atomic measures."""

from .certify import (
    InequalitySlack,
    certify_pair,
    certify_single,
    lemma_discrete_slack,
    random_symmetric_measure,
)
from .errors import (
    BooleanInfoError,
    CapacityError,
    DomainError,
    IndeterminateError,
    InputError,
    NotACauchyTransform,
    SymmetryError,
)
from .experiments import (
    CltRow,
    clt_table,
    de_bruijn_residual,
    entropic_rate_scan,
    exp_decay_scan,
    monotonicity_scan,
)
from .functionals import (
    FunctionalReport,
    entropy,
    fisher,
    fisher_asymmetric,
    nm_fisher,
    nm_fisher_heatflow,
    relative_report,
    w2_to_b,
    wasserstein,
)
from .measure import (
    AtomicMeasure,
    CumulantVector,
    boolean_cumulants,
    dilate,
    moment,
    parse_measure,
    rademacher,
    square_pushforward,
    symmetric_sqrt_pullback,
    symmetrize,
)
from .rational import Polynomial, RationalFn, cauchy_transform, k_transform, recover_measure
from .transform import (
    SelfEnergy,
    boolean_convolve,
    boolean_power,
    clt_measure,
    continuous_sq_power,
    heat_flow,
    ou_flow,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "boolean_convolve",
    "boolean_cumulants",
    "boolean_power",
    "BooleanInfoError",
    "CapacityError",
    "cauchy_transform",
    "certify_pair",
    "certify_single",
    "clt_measure",
    "clt_table",
    "CltRow",
    "continuous_sq_power",
    "CumulantVector",
    "de_bruijn_residual",
    "dilate",
    "DomainError",
    "entropic_rate_scan",
    "entropy",
    "exp_decay_scan",
    "fisher",
    "fisher_asymmetric",
    "FunctionalReport",
    "heat_flow",
    "IndeterminateError",
    "InequalitySlack",
    "InputError",
    "k_transform",
    "lemma_discrete_slack",
    "moment",
    "monotonicity_scan",
    "nm_fisher",
    "nm_fisher_heatflow",
    "NotACauchyTransform",
    "ou_flow",
    "parse_measure",
    "Polynomial",
    "rademacher",
    "random_symmetric_measure",
    "RationalFn",
    "recover_measure",
    "relative_report",
    "SelfEnergy",
    "square_pushforward",
    "symmetric_sqrt_pullback",
    "symmetrize",
    "SymmetryError",
    "w2_to_b",
    "wasserstein",
]
