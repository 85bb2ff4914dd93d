"""Exact symbolic engine for the central-extension structure of q-deformed
affine sl2: rational-function scalars in q, normal-ordering rewrite engine,
Hopf structure maps, the quantum 2-cocycle and twisted extension on
CZ (x) loop, and the R-matrix token calculus."""

from .bicross import (
    CZElement,
    ExtElement,
    ExtTensor,
    chi_conv_inverse,
    coaction_beta,
    cocycle_chi,
    ext_coproduct,
    ext_counit,
    ext_product,
    grade,
    j_conv_inverse,
    phi,
    project_loop,
    section_j,
    verify_cocycle_condition,
    verify_ext_compatibility,
    verify_isomorphism,
)
from .errors import (
    ConsistencyError,
    ParseError,
    QaffineError,
    SearchExhaustedError,
    StructureError,
)
from .hopf import (
    TensorPoly,
    antipode,
    coproduct,
    counit,
    derive_antipode,
    iterated_coproduct,
    verify_hopf,
)
from .ncalg import (
    GeneratorSymbol,
    NCPoly,
    Presentation,
    local_confluence_report,
    serre_ideal_membership,
    word_degree,
)
from .parser import parse_expression, parse_scalar
from .presentations import (
    builtin_presentation,
    change_generators,
    derive_mixed_swap_factors,
    export_presentation,
    load_presentation,
    original_relators,
)
from .qscalar import LaurentPoly, QScalar, normalize, qbinom, qint
from .rcalc import (
    MToken,
    RCElement,
    RToken,
    m_word,
    rc_antipode,
    rc_beta,
    rc_canonicalize,
    rc_cocycle_closed,
    rc_cocycle_direct,
    rc_j,
    rc_normal_order,
)
from .reports import Report

__version__ = "0.1.0"

__all__ = [
    "CZElement", "ExtElement", "ExtTensor", "chi_conv_inverse", "coaction_beta",
    "cocycle_chi", "ext_coproduct", "ext_counit", "ext_product", "grade",
    "j_conv_inverse", "phi", "project_loop", "section_j",
    "verify_cocycle_condition", "verify_ext_compatibility", "verify_isomorphism",
    "ConsistencyError", "ParseError", "QaffineError", "SearchExhaustedError",
    "StructureError", "TensorPoly", "antipode", "coproduct", "counit",
    "derive_antipode", "iterated_coproduct", "verify_hopf", "GeneratorSymbol",
    "NCPoly", "Presentation", "local_confluence_report", "serre_ideal_membership",
    "word_degree", "parse_expression", "parse_scalar", "builtin_presentation",
    "change_generators", "derive_mixed_swap_factors", "export_presentation",
    "load_presentation", "original_relators", "LaurentPoly", "QScalar",
    "normalize", "qbinom", "qint", "MToken", "RCElement", "RToken", "m_word",
    "rc_antipode", "rc_beta", "rc_canonicalize", "rc_cocycle_closed",
    "rc_cocycle_direct", "rc_j", "rc_normal_order", "Report",
]
