"""Symbolic-numeric exterior calculus for contact pairs.

A contact pair of type ``(h, k)`` is a pair of 1-forms ``(alpha, eta)`` on a
manifold of dimension ``2h + 2k + 2`` with ``(d alpha)^(h+1) = 0``,
``(d eta)^(k+1) = 0`` and ``alpha ^ (d alpha)^h ^ eta ^ (d eta)^k``
nowhere zero.  The package verifies such pairs on coordinate charts,
computes their Reeb fields and characteristic distributions, handles
left-invariant pairs on Lie groups, and builds torus-invariant pairs on
T^2-bundles over T^2.
"""

__version__ = "0.1.0"

from .scalar import (  # noqa: E402
    Chart,
    ExpressionClassError,
    IncompleteNormalFormWarning,
    Point,
    ScalarExpr,
    TorusIntegral,
    differentiate,
    evaluate,
    integrate_torus,
    is_zero,
    normalize,
)
from .parse import ParseError, parse  # noqa: E402
from .forms import (  # noqa: E402
    ChartMap,
    CurveSpec,
    DifferentialForm,
    VectorField,
    evaluate_form,
    exterior_derivative,
    form_power,
    interior_product,
    lie_bracket,
    lie_derivative,
    one_form,
    pullback,
    wedge,
)
from .report import Condition, VerificationReport  # noqa: E402
from .pair import (  # noqa: E402
    ContactPair,
    ReebPair,
    characteristic_distribution,
    check_reeb_properties,
    darboux_pair,
    function_bracket,
    hamiltonian_field,
    involutivity_check,
    legendrian_check,
    reeb_fields,
    verify,
)
from .lie import (  # noqa: E402
    InvariantForm,
    LieAlgebra,
    ce_differential,
    check_jacobi,
    invariant_cp_check,
    is_nilpotent,
)
from .lie import catalog as lie_catalog  # noqa: E402
from .bundle import (  # noqa: E402
    BundleData,
    SingularSetSpec,
    assemble_trivial_bundle_pair,
    check_conditions,
    construct_sigma_circles,
    construct_sigma_empty,
    construct_sigma_full,
    fourier_primitive,
    lemma_volume_pair,
    singular_function,
)
from .invariance import pullback_check  # noqa: E402

__all__ = [
    "Chart",
    "ExpressionClassError",
    "IncompleteNormalFormWarning",
    "Point",
    "ScalarExpr",
    "TorusIntegral",
    "differentiate",
    "evaluate",
    "integrate_torus",
    "is_zero",
    "normalize",
    "ChartMap",
    "CurveSpec",
    "DifferentialForm",
    "VectorField",
    "evaluate_form",
    "exterior_derivative",
    "form_power",
    "interior_product",
    "lie_bracket",
    "lie_derivative",
    "one_form",
    "pullback",
    "wedge",
    "ContactPair",
    "ReebPair",
    "characteristic_distribution",
    "check_reeb_properties",
    "darboux_pair",
    "function_bracket",
    "hamiltonian_field",
    "involutivity_check",
    "legendrian_check",
    "reeb_fields",
    "verify",
    "InvariantForm",
    "LieAlgebra",
    "ce_differential",
    "check_jacobi",
    "invariant_cp_check",
    "is_nilpotent",
    "BundleData",
    "SingularSetSpec",
    "assemble_trivial_bundle_pair",
    "check_conditions",
    "construct_sigma_circles",
    "construct_sigma_empty",
    "construct_sigma_full",
    "fourier_primitive",
    "lemma_volume_pair",
    "singular_function",
    "ParseError",
    "parse",
    "Condition",
    "VerificationReport",
    "lie_catalog",
    "pullback_check",
    "__version__",
]
