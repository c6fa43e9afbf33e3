"""Two-way analysis of the commutator operator ad A : B -> AB - BA.

analyze(A) tests three conditions over the base field F:

  c1  every eigenvalue of ad A lies in F (the characteristic polynomial of
      ad A splits into linear factors over F, certified through the
      invariant factors);
  c2  the eigenvalues form a subfield of F (contain 0 and 1, closed under
      subtraction and multiplication);
  c3  the centralizer of A is a field (A is cyclic and its minimal
      polynomial is irreducible).

When all three hold the analyzer recovers the defining data: the minimal
polynomial h of A, its separable part q = X^(p^n) - X - a with maximal
exponent e, and certifies the full expected structure -- the eigenvalue set
is the subfield of p^n elements, every eigenspace of ad A has dimension
p^(n+e), the invariant factors of ad A are p^(n+e) copies of
X^(p^(n+e)) - X^(p^e), ad A is diagonalizable exactly when e = 0, and every
eigenvector of ad A is invertible.  Any certification failure raises
ConsistencyError since it would contradict a proven statement.

build_gas_companion goes the other way: from (p, n, e, a) it constructs the
companion matrix of X^(p^(n+e)) - X^(p^e) - a.
"""

import random

from . import _ringops as rp
from .errors import CapExceededError, ConsistencyError, InputError
from .fields import FieldElement
from .irred import rational_poly_irreducible
from .linalg import (
    Matrix,
    ad_matrix,
    companion,
    eigenspace,
    invariant_factors,
    similar,
)
from .poly import Poly, is_irreducible_finite, separable_part

MAX_DIM_FINITE = 32
MAX_DIM_RATIONAL = 9
_ROOT_CANDIDATE_CAP = 4096


class InvertibilityVerdict:
    """Outcome of the eigenvector invertibility sweep."""

    __slots__ = ("all_invertible", "checked", "sampled", "failures")

    def __init__(self, all_invertible, checked, sampled, failures):
        self.all_invertible = all_invertible
        self.checked = checked
        self.sampled = sampled
        self.failures = failures

    def to_json_dict(self):
        return {
            "all_invertible": self.all_invertible,
            "checked": self.checked,
            "sampled": self.sampled,
            "failures": list(self.failures),
        }


class AdReport:
    """Structured verdict of the ad-operator analysis."""

    __slots__ = (
        "field",
        "size",
        "c1",
        "c2",
        "c3",
        "eigenvalues",
        "eigenvalue_set_is_subfield",
        "eigenspace_dims",
        "invariant_factors",
        "diagonalizable",
        "recovered",
        "eigenvector_invertibility",
        "failures",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    def passed(self):
        return self.c1 and self.c2 and self.c3

    def to_json_dict(self):
        rec = None
        if self.recovered is not None:
            rec = {
                "p": self.recovered["p"],
                "n": self.recovered["n"],
                "e": self.recovered["e"],
                "a": str(self.recovered["a"]),
                "q": str(self.recovered["q"]),
                "h": str(self.recovered["h"]),
            }
        return {
            "field": self.field.spec_string(),
            "size": self.size,
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "eigenvalues": [str(v) for v in self.eigenvalues],
            "eigenvalue_set_is_subfield": self.eigenvalue_set_is_subfield,
            "eigenspace_dims": [[str(v), d] for v, d in self.eigenspace_dims],
            "invariant_factors": [str(f) for f in self.invariant_factors],
            "diagonalizable": self.diagonalizable,
            "recovered": rec,
            "eigenvector_invertibility": (
                None
                if self.eigenvector_invertibility is None
                else self.eigenvector_invertibility.to_json_dict()
            ),
            "failures": list(self.failures),
        }


def _poly_roots_in_field(f: Poly):
    """Roots of f in its coefficient field, with multiplicities."""
    field = f.field
    if field.order is not None:
        from .poly import roots_in_finite_field

        return roots_in_finite_field(f)
    return _rational_roots(f)


def _rational_roots(f: Poly):
    """Roots in K(Z) of a polynomial over K(Z), by bounded divisor search."""
    F = f.field
    k = F.base
    roots = []
    work = f
    # constants first: every element of K is a cheap candidate
    for cpay in k.enumerate_payloads():
        cand = F.constant(FieldElement(k, cpay))
        mult = 0
        while work.degree() >= 1:
            quo, remdr = divmod(work, Poly(F, [-cand, 1]))
            if not remdr.is_zero():
                break
            work = quo
            mult += 1
        if mult:
            roots.append((cand, mult))
    if work.degree() >= 1:
        roots.extend(_nonconstant_rational_roots(work))
    return roots


def _nonconstant_rational_roots(f: Poly):
    """Non-constant K(Z) roots via divisors of the cleared constant and lead."""
    F = f.field
    k = F.base
    common = (k.one,)
    for num, den in f.raw:
        if len(den) > 1:
            common = rp.mul(k, common, rp.divmod_(k, den, rp.gcd(k, common, den))[0])
    cols = [rp.mul(k, num, rp.divmod_(k, common, den)[0]) for num, den in f.raw]
    const, lead = cols[0], cols[-1]
    if not const:
        raise ConsistencyError("zero root should have been removed already")
    num_divs = _monic_divisors(k, const)
    den_divs = _monic_divisors(k, lead)
    if len(num_divs) * len(den_divs) * (k.order - 1) > _ROOT_CANDIDATE_CAP:
        raise CapExceededError("root candidate count exceeds the search cap")
    units = [u for u in k.enumerate_payloads() if u != k.zero]
    roots = []
    work = f
    for nd in num_divs:
        for dd in den_divs:
            if len(nd) == 1 and len(dd) == 1:
                continue  # constant candidates were already scanned
            for u in units:
                cand = F.fraction(rp.scale(k, nd, u), dd)
                mult = 0
                while work.degree() >= 1:
                    quo, remdr = divmod(work, Poly(F, [-cand, 1]))
                    if not remdr.is_zero():
                        break
                    work = quo
                    mult += 1
                if mult:
                    roots.append((cand, mult))
    return roots


def _monic_divisors(k, a):
    """All monic divisors of a nonzero raw polynomial over a finite field."""
    from .poly import _factor_raw

    factors = _factor_raw(k, rp.monic(k, a))
    divisors = [(k.one,)]
    for piece, mult in factors:
        grown = []
        for d in divisors:
            cur = d
            for _ in range(mult + 1):
                grown.append(cur)
                cur = rp.mul(k, cur, piece)
        divisors = grown
    # dedupe (repeated factors produce duplicates) and fix the order
    return sorted(set(divisors), key=lambda d: (len(d), tuple(k.sort_key(c) for c in d)))


def _root_multiplicity(f: Poly, root):
    mult = 0
    lin = Poly(f.field, [-root, 1])
    while f.degree() >= 1:
        quo, remdr = divmod(f, lin)
        if not remdr.is_zero():
            break
        f = quo
        mult += 1
    return mult


def _subfield_check(values):
    """Is this finite set of field elements a subfield?  Returns (bool, witness)."""
    if not values:
        return False, "empty eigenvalue set"
    field = values[0].field
    have = {v.payload for v in values}
    if field.one not in have:
        return False, "eigenvalue set does not contain 1"
    if field.zero not in have:
        return False, "eigenvalue set does not contain 0"
    for x in values:
        for y in values:
            if (x - y).payload not in have:
                return False, f"not closed under subtraction: ({x}) - ({y}) missing"
            if (x * y).payload not in have:
                return False, f"not closed under multiplication: ({x}) * ({y}) missing"
    return True, None


def _check_caps(a: Matrix):
    if not a.is_square():
        raise InputError("analysis needs a square matrix")
    if a.field.kind == "rational-function":
        if a.nrows > MAX_DIM_RATIONAL:
            raise CapExceededError(f"matrix size exceeds cap {MAX_DIM_RATIONAL} over K(Z)")
    elif a.nrows > MAX_DIM_FINITE:
        raise CapExceededError(f"matrix size exceeds cap {MAX_DIM_FINITE}")


def analyze(a: Matrix, seed: int = 0) -> AdReport:
    """Full ad-operator analysis of a square matrix over F finite or K(Z)."""
    _check_caps(a)
    field = a.field
    m = a.nrows
    ad = ad_matrix(a)
    inv_ad = invariant_factors(ad)

    mu_ad = inv_ad.minimal_polynomial()
    roots = _poly_roots_in_field(mu_ad)
    eigenvalues = sorted((r for r, _ in roots), key=lambda v: v.sort_key())

    accounted = 0
    for f in inv_ad:
        for r, _ in roots:
            accounted += _root_multiplicity(f, r)
    c1 = accounted == m * m

    c2, c2_witness = _subfield_check(eigenvalues)

    inv_a = invariant_factors(a)
    cyclic = len(inv_a) == 1
    mu_a = inv_a.minimal_polynomial()
    if cyclic:
        if field.order is not None:
            mu_irreducible = is_irreducible_finite(mu_a)
        else:
            mu_irreducible = rational_poly_irreducible(mu_a)
        c3 = mu_irreducible
    else:
        c3 = False

    dims = [(v, len(eigenspace(ad, v))) for v in eigenvalues]
    diagonalizable = sum(d for _, d in dims) == m * m

    failures = []
    if not c1:
        failures.append(
            f"c1: characteristic polynomial of ad A accounts for degree "
            f"{accounted} of {m * m} over the base field"
        )
    if not c2:
        failures.append(f"c2: {c2_witness}")
    if not c3:
        if not cyclic:
            failures.append(f"c3: matrix is not cyclic ({len(inv_a)} invariant factors)")
        else:
            failures.append(f"c3: minimal polynomial {mu_a} is reducible")

    recovered = None
    invertibility = None
    if c1 and c2 and c3:
        recovered = _recover_and_certify(
            a, field, m, mu_a, eigenvalues, dims, inv_ad, diagonalizable
        )
        invertibility = check_eigenvector_invertibility(a, eigenvalues=eigenvalues, seed=seed)
        if not invertibility.all_invertible:
            raise ConsistencyError(
                "certified matrix has a non-invertible ad eigenvector: "
                + "; ".join(invertibility.failures)
            )

    return AdReport(
        field=field,
        size=m,
        c1=c1,
        c2=c2,
        c3=c3,
        eigenvalues=tuple(eigenvalues),
        eigenvalue_set_is_subfield=c2,
        eigenspace_dims=tuple(dims),
        invariant_factors=inv_ad,
        diagonalizable=diagonalizable,
        recovered=recovered,
        eigenvector_invertibility=invertibility,
        failures=failures,
    )


def _recover_and_certify(a, field, m, mu_a, eigenvalues, dims, inv_ad, diagonalizable):
    p = field.char
    if mu_a.degree() != m:
        raise ConsistencyError("cyclic matrix whose minimal polynomial degree differs from its size")
    sep = separable_part(mu_a)
    q, e = sep.q, sep.e
    deg_q = q.degree()
    n = 0
    t = 1
    while t < deg_q:
        t *= p
        n += 1
    if t != deg_q or n < 1:
        raise ConsistencyError(f"separable part has degree {deg_q}, not a power of {p}")
    # q must be X^(p^n) - X - a
    expected_shape = Poly.x_power(field, deg_q) - Poly.x(field)
    diff = expected_shape - q
    if diff.degree() not in (0, float("-inf")):
        raise ConsistencyError(f"separable part {q} is not of the form X^(p^n) - X - a")
    a_const = -q.coeff(0)
    if len(eigenvalues) != deg_q:
        raise ConsistencyError(
            f"eigenvalue count {len(eigenvalues)} differs from p^n = {deg_q}"
        )
    for v in eigenvalues:
        if v ** deg_q != v:
            raise ConsistencyError(f"eigenvalue {v} lies outside the subfield of {deg_q} elements")
    pne = p ** (n + e)
    for v, d in dims:
        if d != pne:
            raise ConsistencyError(f"eigenspace at {v} has dimension {d}, expected {pne}")
    expected_factor = Poly.x_power(field, pne) - Poly.x_power(field, p**e)
    if len(inv_ad) != pne or any(f != expected_factor for f in inv_ad):
        raise ConsistencyError("invariant factors of ad A differ from the certified shape")
    if diagonalizable != (e == 0):
        raise ConsistencyError("diagonalizability disagrees with the separability exponent")
    if field.order is not None:
        q_irred = is_irreducible_finite(q)
    else:
        q_irred = rational_poly_irreducible(q)
    if not q_irred:
        raise ConsistencyError(f"recovered polynomial {q} is reducible")
    return {"p": p, "n": n, "e": e, "a": a_const, "q": q, "h": mu_a}


def check_eigenvector_invertibility(
    a: Matrix, report: AdReport = None, eigenvalues=None, seed: int = 0
) -> InvertibilityVerdict:
    """Reshape every ad-eigenvector to an m x m matrix and test invertibility.

    Checks each basis vector of every eigenspace plus 10 seeded random
    nonzero combinations per eigenvalue; failures are reported as witnesses,
    never raised, so the reducible cases can be inspected too.
    """
    _check_caps(a)
    field = a.field
    m = a.nrows
    ad = ad_matrix(a)
    if eigenvalues is None:
        if report is not None:
            eigenvalues = report.eigenvalues
        else:
            mu = invariant_factors(ad).minimal_polynomial()
            eigenvalues = [r for r, _ in _poly_roots_in_field(mu)]
    rng = random.Random(seed)
    failures = []
    checked = 0
    sampled = 0
    for v in eigenvalues:
        basis = eigenspace(ad, v)
        for idx, vec in enumerate(basis):
            checked += 1
            if not _reshape(field, m, vec).is_invertible():
                failures.append(f"basis vector {idx} at eigenvalue {v} is singular")
        for _ in range(10):
            if not basis:
                break
            coeffs = [FieldElement(field, field.random_payload(rng)) for _ in basis]
            if all(c.payload == field.zero for c in coeffs):
                coeffs[0] = field.one_element()
            combo = [field.zero_element()] * (m * m)
            for c, vec in zip(coeffs, basis):
                combo = [acc + c * x for acc, x in zip(combo, vec)]
            if all(x.payload == field.zero for x in combo):
                continue
            sampled += 1
            if not _reshape(field, m, combo).is_invertible():
                failures.append(f"sampled combination at eigenvalue {v} is singular")
    return InvertibilityVerdict(not failures, checked, sampled, failures)


def _reshape(field, m, vec):
    return Matrix(field, [[vec[i * m + j] for j in range(m)] for i in range(m)])


def check_similarity_shift(a: Matrix, b) -> bool:
    """Whether A is similar to A + b*I.

    Equal invariant factors decide this outright, so no precondition on the
    minimal polynomial is needed; when mu_A(X) != mu_A(X+b) the answer is
    False for free.
    """
    if not a.is_square():
        raise InputError("similarity shift needs a square matrix")
    return similar(a, a.scalar_shift(a.field.element(b)))


def contains_subfield(field, n) -> bool:
    """Whether GF(p^n) embeds in the field, by splitting X^(p^n) - X."""
    p = field.char
    target = p**n
    if field.order is not None:
        count = sum(
            1
            for c in field.enumerate_payloads()
            if field.pow_int(c, target) == c
        )
        return count == target
    base = field.base
    count = sum(1 for c in base.enumerate_payloads() if base.pow_int(c, target) == c)
    return count == target


def build_gas_companion(field, n: int, e: int, a) -> Matrix:
    """Companion matrix of X^(p^(n+e)) - X^(p^e) - a over the given field."""
    if n < 1 or e < 0:
        raise InputError("need n >= 1 and e >= 0")
    if not contains_subfield(field, n):
        raise InputError(
            f"{field.spec_string()} does not contain the subfield of {field.char}^{n} elements"
        )
    a = field.element(a)
    p = field.char
    h = (
        Poly.x_power(field, p ** (n + e))
        - Poly.x_power(field, p**e)
        - Poly.constant(field, a)
    )
    return companion(h)
