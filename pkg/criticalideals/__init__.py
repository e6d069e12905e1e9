from .abelian import (
    GroupSummary,
    SnfResult,
    adjacency_matrix,
    critical_group,
    evaluation_bridge,
    gcd_minors,
    laplacian_matrix,
    smith_group,
    smith_normal_form,
)
from .critical import (
    CensusReport,
    CriticalIdealReport,
    ForbiddenFamily,
    GammaCache,
    algebraic_corank,
    census,
    critical_ideal_gens,
    critical_ideal_report,
    forbidden_family,
    generalized_laplacian,
    is_f_free,
    is_gamma_critical,
)
from .digraph import (
    CanonicalForm,
    Digraph,
    canonical_form,
    contains_induced,
    emit_digraph6,
    enumerate_connected,
    from_arcs,
    induced,
    is_connected,
    is_isomorphic,
    parse_digraph6,
)
from .ideals import GroebnerBasis, ideals_equal, is_trivial, reduce, strong_groebner
from .lambda_family import (
    LambdaParams,
    build_lambda,
    corollary7_predicate,
    corollary9_predicate,
    lambda_outdegrees,
    lemma3_ideal,
    recognize_lambda,
    theorem5_row,
)

import logging
from logging import NullHandler

logging.getLogger(__name__).addHandler(NullHandler())
