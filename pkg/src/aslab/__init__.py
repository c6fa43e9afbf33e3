"""Exact computer algebra for generalized Artin-Schreier polynomials.

The package decides, with exact arithmetic over GF(p), GF(p^n) and rational
function fields K(Z):

  * when the commutator operator B -> AB - BA of a matrix A has eigenvalues
    forming a subfield, and how to reconstruct A from that data
    (:mod:`aslab.ad_analyzer`);
  * how tensor products of Jordan blocks decompose in characteristic p
    (:mod:`aslab.tensor`);
  * explicit primitive elements, via Dickson invariants, for every
    intermediate field of the splitting extension of X^(p^n) - X - a
    (:mod:`aslab.dickson`);
  * irreducibility of X^(p^(n+e)) - X^(p^e) - g(Z^r) over K(Z), checked both
    by criterion and by an independent bivariate search oracle
    (:mod:`aslab.irred`).

Everything is deterministic: fixed pivot rules, fixed enumeration orders and
seeded sampling make repeated runs byte-identical.
"""

from .errors import AslabError, CapExceededError, ConsistencyError, InputError
from .fields import (
    FieldDescriptor,
    FieldElement,
    embed_subfield,
    enumerate_elements,
    frobenius,
    is_pth_power_coeffs,
    make_field,
)
from .poly import (
    MINUS_INFINITY,
    Poly,
    SeparableDecomposition,
    factor_finite,
    gcd,
    is_irreducible_finite,
    min_poly_in_quotient,
    separable_part,
)

__version__ = "0.1.0"

__all__ = [
    "AslabError",
    "CapExceededError",
    "ConsistencyError",
    "InputError",
    "FieldDescriptor",
    "FieldElement",
    "embed_subfield",
    "enumerate_elements",
    "frobenius",
    "is_pth_power_coeffs",
    "make_field",
    "MINUS_INFINITY",
    "Poly",
    "SeparableDecomposition",
    "factor_finite",
    "gcd",
    "is_irreducible_finite",
    "min_poly_in_quotient",
    "separable_part",
    "__version__",
]
