"""Exact Lazard correspondence between finite post-Lie rings and skew braces.

Everything is integer-exact: rational scalars act through modular
inverses and any division by the ambient prime raises instead of
rounding.  See the README for the module map and the CLI.
"""

from .common import (
    CapabilityError,
    CapExceededError,
    FailedTheoremError,
    IdealLevel,
    LazbraceError,
    NotLazardError,
    ParseError,
)
from .modarith import (
    AbelianBasis,
    Endo,
    ModArithError,
    PShape,
    PVec,
    abelian_decompose,
    endo_exp,
    endo_log,
    root_of_unity,
)
from .freelie import (
    FreeLieElem,
    GroupWord,
    LyndonBasis,
    bch_series,
    derive_inverse_words,
    evaluate_group_word,
    get_basis,
)
from .liering import (
    FinGroup,
    Filtration,
    LieRingSC,
    LieRingTable,
    SeriesResult,
    bch_eval,
    canonical_filtration,
    canonical_group_filtration,
    group_root,
    is_lazard,
    laz,
    laz_inv,
    laz_of_table,
    lower_central_series,
    verify_lie,
)
from .postlie import (
    PostLieRing,
    adjoint_filtration,
    circ_ring,
    ideal_type,
    is_square_free,
    l_mul,
    l_nilpotency_decomposition,
    l_series,
    right_nilpotent,
    substructures,
    verify_post_lie,
)
from .skewbrace import (
    SkewBrace,
    adjoint_group_filtration,
    holomorph_plus,
    circ_nilpotency_bound,
    enumerate_braces,
    ideal_type_brace,
    l_series_brace,
    lambda_and_star,
    nilpotency_decomposition_brace,
    power_set_ideals,
    regular_subgroups,
    substructures_brace,
    verify_skew_brace,
)
from .lazcorr import (
    FlowResult,
    LogResult,
    brace_to_post_lie,
    homogeneous_component,
    lambda_derivative,
    omega_map,
    post_lie_to_brace,
    transfer_report,
    u_eval,
    v_eval,
    w_map,
)

__version__ = "0.1.0"
