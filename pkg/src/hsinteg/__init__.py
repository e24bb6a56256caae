"""Exact arithmetic for higher derivations on polynomial quotient rings.

The package decides, level by level, whether every derivation of
k[x_1..x_d]/I lifts to a higher derivation of the next length, and produces
certificates (explicit liftings) or obstruction witnesses either way.
Coefficients live in a prime field, the rationals, or the integers.
"""

from .coeffring import RingSpec, Fp, QQ, ZZ
from .errors import (InternalCheckError, ParseError, ResourceLimitError,
                     UsageError)
from .gbase import (GroebnerBasis, Guards, ModuleOrder, ModuleVector,
                    groebner, ideal_membership, ideal_quotient,
                    jacobian_ideal, syzygies, wrap_poly)
from .hsd import HSDerivation, is_logarithmic, sparse_assemble, verify_leibniz
from .integ import (FREE, JACOBIAN, IntegrabilityReport, IntegrationOutcome,
                    LogDerivation, Problem, check_equality, euler_integral,
                    extend_one_step, hypothesis_established,
                    integrate_derivation, log_derivations, rho)
from .jet import TruncatedSeries, substitute, unit_inverse
from .poly import (MonomialOrder, Polynomial, PolyRing, VariableSet,
                   parse_polynomial)

__version__ = "0.1.0"

__all__ = [
    "RingSpec", "Fp", "QQ", "ZZ",
    "UsageError", "ParseError", "ResourceLimitError", "InternalCheckError",
    "Polynomial", "PolyRing", "VariableSet", "MonomialOrder", "parse_polynomial",
    "TruncatedSeries", "substitute", "unit_inverse",
    "Guards", "ModuleOrder", "ModuleVector", "GroebnerBasis", "groebner",
    "syzygies", "ideal_membership", "ideal_quotient", "jacobian_ideal",
    "wrap_poly",
    "HSDerivation", "verify_leibniz", "is_logarithmic", "sparse_assemble",
    "Problem", "LogDerivation", "log_derivations", "extend_one_step",
    "check_equality", "integrate_derivation", "euler_integral",
    "hypothesis_established", "rho", "FREE", "JACOBIAN",
    "IntegrabilityReport", "IntegrationOutcome",
    "__version__",
]
