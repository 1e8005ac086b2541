"""Exact Fourier analysis of Boolean functions, inequality verification, and
membership-query sparse Fourier learning."""
from ._validation import coords_from_mask, mask_from_coords, set_max_n
from .core import (
    BooleanFunction,
    EntropyReport,
    InfluenceProfile,
    RealFunction,
    Spectrum,
    cross_influence,
    derivative,
    entropy_report,
    generalized_influence,
    influence_profile,
    inner,
    restrict,
    spectrum,
    truncate_degree,
)
from .exceptions import (
    BoolFourierError,
    BudgetExceededError,
    InputError,
    ParseError,
    ResourceError,
)

from ._version import __version__
from .headline import entropy_bound_fit, min_entropy_witness, witness_report
from .learning import (
    MembershipOracle,
    NoisyOracle,
    SparsePolynomial,
    TableOracle,
    agnostic_learn,
    build_sparse_approx,
    km_search,
)
from .symmetry import GroupSpec, a_parameter, bk_check, orbit
from .estimators import SparseFourierClassifier, WalshHadamardTransformer
from .suites import SuiteConfig, run_suite
