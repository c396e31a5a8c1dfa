"""combquad: exact construction, classification and combination of quadrature rules.

Rules live on [-1,1] with exact rational (or quadratic-surd) nodes and
rational weights.  The package classifies rules by degree and defect sign,
combines equal-degree pairs into higher-degree rules, builds degree-(2k+1)
rules from k+1 degree-1 rules with rational (optionally pseudorandom) nodes,
and evaluates composite forms at arbitrary decimal precision.
"""

from .builder import (
    BaseRule,
    BuilderInput,
    BuiltRule,
    build_combined,
    legendre_roots,
    random_rational_nodes,
    rationalize,
)
from .combine import (
    CombineReport,
    LinearCombination,
    combine_pair,
    flatten,
    least_squares_coeffs,
    mean_rule,
)
from .composite import (
    CompositeJob,
    ErrorReport,
    NumericContext,
    TransportedRule,
    composite_apply,
    error_report,
    pi_reference,
    transform,
)
from .errors import (
    CombquadError,
    DomainError,
    EvaluationError,
    ExactnessError,
    ExprSyntaxError,
    IndeterminateSignError,
    InternalError,
    NumericError,
    RepresentationError,
)
from .exact import ExactScalar, Rational, scalar_pow, surd_canonicalize
from .expr import eval_exact, eval_float, parse, unparse
from .families import (
    Family,
    RasterSpec,
    RegionLabel,
    gauss3,
    region_raster,
    three_point_sign,
    three_point_weights,
    two_point_classify,
    two_point_rule,
)
from .rules import (
    QuadRule,
    RuleClassification,
    Sign,
    apply_monomial,
    classify,
    is_companion,
    load_rule,
    midpoint,
    moment,
    open_newton_cotes5,
    rule_from_jsonable,
    rule_to_jsonable,
    save_rule,
    simpson,
    trapezoid,
)

__version__ = "0.1.0"

__all__ = [
    "BaseRule",
    "BuilderInput",
    "BuiltRule",
    "CombineReport",
    "CombquadError",
    "CompositeJob",
    "DomainError",
    "ErrorReport",
    "EvaluationError",
    "ExactScalar",
    "ExactnessError",
    "ExprSyntaxError",
    "Family",
    "IndeterminateSignError",
    "InternalError",
    "LinearCombination",
    "NumericContext",
    "NumericError",
    "QuadRule",
    "RasterSpec",
    "Rational",
    "RegionLabel",
    "RepresentationError",
    "RuleClassification",
    "Sign",
    "TransportedRule",
    "apply_monomial",
    "build_combined",
    "classify",
    "combine_pair",
    "composite_apply",
    "error_report",
    "eval_exact",
    "eval_float",
    "flatten",
    "gauss3",
    "is_companion",
    "least_squares_coeffs",
    "legendre_roots",
    "load_rule",
    "mean_rule",
    "midpoint",
    "moment",
    "open_newton_cotes5",
    "parse",
    "pi_reference",
    "random_rational_nodes",
    "rationalize",
    "region_raster",
    "rule_from_jsonable",
    "rule_to_jsonable",
    "save_rule",
    "scalar_pow",
    "simpson",
    "surd_canonicalize",
    "three_point_sign",
    "three_point_weights",
    "transform",
    "trapezoid",
    "two_point_classify",
    "two_point_rule",
    "unparse",
]
