"""Univariate polynomials over any supported field, plus the characteristic-p
structure operations: separable decomposition, complete factorization over
finite fields, and minimal polynomials in quotient rings.

The zero polynomial has degree MINUS_INFINITY (a genuine minus infinity, so
degree comparisons behave), never -1.
"""

import itertools

from . import _ringops as rp
from ._exprparse import parse_expression
from .errors import CapExceededError, ConsistencyError, InputError
from .fields import FieldElement, _raw_poly_str

MINUS_INFINITY = float("-inf")

FACTOR_MAX_FIELD = 729
FACTOR_MAX_DEGREE = 64
# beyond this many candidates, exhaustive equal-degree search hands over to
# the deterministic Berlekamp sweep
_EXHAUSTIVE_LIMIT = 50_000


class Poly:
    """Dense univariate polynomial; coefficients live in a single field."""

    __slots__ = ("field", "raw")

    def __init__(self, field, coeffs):
        payloads = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise InputError("coefficient from a different field")
                payloads.append(c.payload)
            elif isinstance(c, int):
                payloads.append(field.from_int(c))
            else:
                payloads.append(field.validate_payload(c))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "raw", rp.trim(field, payloads))

    def __setattr__(self, *args):
        raise AttributeError("Poly is immutable")

    @classmethod
    def from_raw(cls, field, raw):
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "raw", rp.trim(field, raw))
        return obj

    @classmethod
    def zero(cls, field):
        return cls.from_raw(field, ())

    @classmethod
    def one(cls, field):
        return cls.from_raw(field, (field.one,))

    @classmethod
    def x(cls, field):
        return cls.from_raw(field, (field.zero, field.one))

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def x_power(cls, field, n):
        return cls.from_raw(field, (field.zero,) * n + (field.one,))

    @classmethod
    def from_string(cls, field, s, var="X"):
        atoms = {var: cls.x(field)}
        if field.kind == "rational-function":
            atoms["Z"] = cls.constant(field, field.gen())
            if field.base.kind == "extension":
                atoms["t"] = cls.constant(field, field.constant(field.base.gen()))
        elif field.kind == "extension":
            atoms["t"] = cls.constant(field, field.gen())
        if var in ("Z", "t"):
            atoms[var] = cls.x(field)
        value = parse_expression(s, atoms, lambda i: cls(field, [i]))
        if isinstance(value, FieldElement):
            value = cls(field, [value])
        return value

    @property
    def coeffs(self):
        return tuple(FieldElement(self.field, c) for c in self.raw)

    def coeff(self, i):
        if i < len(self.raw):
            return FieldElement(self.field, self.raw[i])
        return FieldElement(self.field, self.field.zero)

    def degree(self):
        return len(self.raw) - 1 if self.raw else MINUS_INFINITY

    def is_zero(self):
        return not self.raw

    def is_monic(self):
        return bool(self.raw) and self.raw[-1] == self.field.one

    def leading_coeff(self):
        if not self.raw:
            raise InputError("zero polynomial has no leading coefficient")
        return FieldElement(self.field, self.raw[-1])

    def monic(self):
        if not self.raw:
            raise InputError("cannot normalize the zero polynomial")
        return Poly.from_raw(self.field, rp.monic(self.field, self.raw))

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise InputError("polynomials over different fields do not mix")
            return other.raw
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InputError("coefficient from a different field")
            return rp.trim(self.field, (other.payload,))
        if isinstance(other, int):
            return rp.trim(self.field, (self.field.from_int(other),))
        return None

    def __add__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return Poly.from_raw(self.field, rp.add(self.field, self.raw, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return Poly.from_raw(self.field, rp.sub(self.field, self.raw, r))

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return Poly.from_raw(self.field, rp.sub(self.field, r, self.raw))

    def __mul__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return Poly.from_raw(self.field, rp.mul(self.field, self.raw, r))

    __rmul__ = __mul__

    def __neg__(self):
        return Poly.from_raw(self.field, rp.neg(self.field, self.raw))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        q, m = rp.divmod_(self.field, self.raw, r)
        return Poly.from_raw(self.field, q), Poly.from_raw(self.field, m)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        """Exact division; raises if the division leaves a remainder."""
        q, r = divmod(self, other)
        if not r.is_zero():
            raise InputError("division is not exact")
        return q

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.raw == other.raw
        if isinstance(other, (FieldElement, int)):
            return self.raw == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return bool(self.raw)

    def evaluate(self, x):
        if isinstance(x, FieldElement):
            if x.field != self.field:
                raise InputError("evaluation point from a different field")
            return FieldElement(self.field, rp.evaluate(self.field, self.raw, x.payload))
        if isinstance(x, int):
            return self.evaluate(FieldElement(self.field, self.field.from_int(x)))
        raise InputError("can only evaluate at a field element")

    def __call__(self, x):
        return self.evaluate(x)

    def compose(self, other):
        """self(other(X))."""
        r = self._coerce(other)
        if r is None:
            raise InputError("cannot compose with this operand")
        return Poly.from_raw(self.field, rp.compose(self.field, self.raw, r))

    def shifted(self, b):
        """self(X + b)."""
        if isinstance(b, int):
            b = FieldElement(self.field, self.field.from_int(b))
        return self.compose(Poly(self.field, [b, 1]))

    def derivative(self):
        return Poly.from_raw(self.field, rp.derivative(self.field, self.raw))

    def substitute_x_power(self, k):
        """self(X^k)."""
        if not self.raw:
            return self
        out = [self.field.zero] * ((len(self.raw) - 1) * k + 1)
        for i, c in enumerate(self.raw):
            out[i * k] = c
        return Poly.from_raw(self.field, out)

    def pow_mod(self, n, modulus):
        r = self._coerce(modulus)
        return Poly.from_raw(self.field, rp.pow_mod(self.field, self.raw, n, r))

    def sort_key(self):
        return (len(self.raw), tuple(self.field.sort_key(c) for c in self.raw))

    def to_string(self, var="X"):
        return _raw_poly_str(self.field, self.raw, var)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Poly({self.field.spec_string()}, {self})"


def gcd(a: Poly, b: Poly) -> Poly:
    if a.field != b.field:
        raise InputError("polynomials over different fields do not mix")
    return Poly.from_raw(a.field, rp.gcd(a.field, a.raw, b.raw))


class SeparableDecomposition:
    """Separable q and exponent e with h(X) = q(X^(p^e))."""

    __slots__ = ("q", "e")

    def __init__(self, q, e):
        self.q = q
        self.e = e

    def recompose(self):
        p = self.q.field.char
        return self.q.substitute_x_power(p**self.e)

    def __repr__(self):
        return f"SeparableDecomposition(q={self.q}, e={self.e})"


def separable_part(h: Poly) -> SeparableDecomposition:
    """Maximal e and separable q with h(X) = q(X^(p^e)).

    The contraction replaces exponents i*p^e by i and keeps coefficients
    untouched, so no coefficient roots are ever extracted.  Raises if the
    fully contracted polynomial still has repeated roots, in which case no
    such decomposition exists.
    """
    if not h.is_monic():
        raise InputError("separable_part expects a monic polynomial")
    if h.degree() < 1:
        raise InputError("separable_part expects degree >= 1")
    p = h.field.char
    field = h.field
    raw = h.raw
    e = 0
    while len(raw) > p and all(
        c == field.zero for i, c in enumerate(raw) if i % p != 0
    ):
        raw = tuple(raw[i] for i in range(0, len(raw), p))
        e += 1
    q = Poly.from_raw(field, raw)
    if rp.gcd(field, raw, rp.derivative(field, raw)) != (field.one,):
        raise InputError("polynomial is not of the form q(X^(p^e)) with q separable")
    return SeparableDecomposition(q, e)


def is_irreducible_finite(f: Poly) -> bool:
    """Deterministic irreducibility test over a finite field."""
    field = f.field
    if field.order is None:
        raise InputError("irreducibility test requires a finite field")
    n = f.degree()
    if n is MINUS_INFINITY or n == 0:
        return False
    if n == 1:
        return True
    q = field.order
    raw = rp.monic(field, f.raw)
    x = (field.zero, field.one)
    if rp.pow_mod(field, x, q**n, raw) != rp.rem(field, x, raw):
        return False
    for ell in range(2, n + 1):
        if n % ell == 0 and _small_prime(ell):
            xd = rp.pow_mod(field, x, q ** (n // ell), raw)
            if rp.gcd(field, rp.sub(field, xd, x), raw) != (field.one,):
                return False
    return True


def _small_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def factor_finite(f: Poly):
    """Complete factorization over a finite field.

    Returns a list of (monic irreducible Poly, multiplicity) pairs in a
    canonical deterministic order.  The product of the factors times the
    leading coefficient of f reconstructs f.
    """
    field = f.field
    if field.order is None:
        raise InputError("factor_finite requires a finite field")
    if field.order > FACTOR_MAX_FIELD:
        raise CapExceededError(f"field size {field.order} exceeds cap {FACTOR_MAX_FIELD}")
    if f.is_zero():
        raise InputError("cannot factor the zero polynomial")
    if f.degree() > FACTOR_MAX_DEGREE:
        raise CapExceededError(f"degree {f.degree()} exceeds cap {FACTOR_MAX_DEGREE}")
    return [
        (Poly.from_raw(field, g), m)
        for g, m in _factor_raw(field, rp.monic(field, f.raw))
    ]


def _factor_raw(field, m):
    """(raw monic irreducible, multiplicity) pairs, canonically sorted."""
    q = field.order
    found = []
    d = 1
    x = (field.zero, field.one)
    xq = None
    while len(m) - 1 > 0:
        if 2 * d > len(m) - 1:
            found.append((m, 1))
            break
        # maintain x^(q^d) mod m incrementally; recompute after m shrinks
        if xq is None:
            xq = rp.pow_mod(field, x, q**d, m)
        else:
            xq = rp.pow_mod(field, xq, q, m)
        g = rp.gcd(field, rp.sub(field, xq, x), m)
        if len(g) > 1:
            for piece in _equal_degree_split(field, g, d):
                mult = 0
                while True:
                    quo, remdr = rp.divmod_(field, m, piece)
                    if remdr:
                        break
                    m = quo
                    mult += 1
                found.append((piece, mult))
        d += 1
    found.sort(key=lambda fm: (len(fm[0]), tuple(field.sort_key(c) for c in fm[0])))
    return found


def _equal_degree_split(field, g, d):
    """Split a squarefree product of degree-d irreducibles into its factors."""
    if len(g) - 1 == d:
        return [g]
    if d == 1:
        roots = [
            a for a in field.enumerate_payloads()
            if rp.evaluate(field, g, a) == field.zero
        ]
        return [(field.neg(a), field.one) for a in roots]
    if field.order**d <= _EXHAUSTIVE_LIMIT and field.order <= 81:
        return _equal_degree_exhaustive(field, g, d)
    return _berlekamp_split(field, g, d)


def _equal_degree_exhaustive(field, g, d):
    out = []
    count = (len(g) - 1) // d
    for tail in itertools.product(field.enumerate_payloads(), repeat=d):
        cand = rp.trim(field, tail + (field.one,))
        quo, remdr = rp.divmod_(field, g, cand)
        if not remdr:
            out.append(cand)
            g = quo
            if len(out) == count:
                break
    if len(out) != count:
        raise ConsistencyError("equal-degree search lost a factor")
    return out


def _berlekamp_split(field, g, d):
    """Deterministic Berlekamp splitting: sweep gcd(g, b - s) over all s."""
    n = len(g) - 1
    q = field.order
    # rows of the Frobenius-minus-identity matrix acting on F_q[X]/(g)
    xq = rp.pow_mod(field, (field.zero, field.one), q, g)
    rows = []
    xi = (field.one,)
    for i in range(n):
        row = list(xi) + [field.zero] * (n - len(xi))
        row[i] = field.sub(row[i], field.one)
        rows.append(row)
        xi = rp.rem(field, rp.mul(field, xi, xq), g)
    basis = _null_space(field, rows, n)
    pieces = [g]
    for b in basis:
        if len(rp.trim(field, b)) <= 1:
            continue  # constants do not split anything
        btrim = rp.trim(field, b)
        # the useful shift values s are the roots of the minimal polynomial
        # of b in F_q[X]/(g); scan only those instead of the whole field
        shifts = _element_residues(field, btrim, g)
        next_pieces = []
        for piece in pieces:
            if len(piece) - 1 == d:
                next_pieces.append(piece)
                continue
            remaining = piece
            for s in shifts:
                h = rp.gcd(field, rp.sub(field, btrim, (s,)), remaining)
                if 1 < len(h) <= len(remaining):
                    if len(h) < len(remaining):
                        next_pieces.append(h)
                        remaining = rp.divmod_(field, remaining, h)[0]
                if len(remaining) == 1:
                    break
            if len(remaining) > 1:
                next_pieces.append(remaining)
        pieces = next_pieces
        if all(len(piece) - 1 == d for piece in pieces):
            return pieces
    raise ConsistencyError("Berlekamp sweep failed to separate equal-degree factors")


def _element_residues(field, b, g):
    """Roots in F_q of the minimal polynomial of b modulo g, in order."""
    n = len(g) - 1
    echelon = []
    power = (field.one,)
    combo_poly = None
    for j in range(n + 1):
        vec = list(power) + [field.zero] * (n - len(power))
        combo = [field.zero] * (j + 1)
        combo[j] = field.one
        for evec, piv, ecombo in echelon:
            c = vec[piv]
            if c != field.zero:
                vec = [field.sub(x, field.mul(c, y)) for x, y in zip(vec, evec)]
                for i, y in enumerate(ecombo):
                    combo[i] = field.sub(combo[i], field.mul(c, y))
        piv = next((i for i, c in enumerate(vec) if c != field.zero), None)
        if piv is None:
            combo_poly = rp.trim(field, combo)
            break
        inv = field.inv(vec[piv])
        echelon.append((
            [field.mul(c, inv) for c in vec],
            piv,
            [field.mul(c, inv) for c in combo],
        ))
        power = rp.rem(field, rp.mul(field, power, b), g)
    if combo_poly is None:
        raise ConsistencyError("no dependence found for a subalgebra element")
    return [
        s for s in field.enumerate_payloads()
        if rp.evaluate(field, combo_poly, s) == field.zero
    ]


def _null_space(field, rows, n):
    """Null space basis of the matrix whose i-th ROW is the image of e_i."""
    # transpose so columns are images; then standard kernel computation
    mat = [[rows[j][i] for j in range(n)] for i in range(n)]
    pivots = {}
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, n):
            if mat[i][c] != field.zero:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [field.mul(v, inv) for v in mat[r]]
        for i in range(n):
            if i != r and mat[i][c] != field.zero:
                factor = mat[i][c]
                mat[i] = [
                    field.sub(v, field.mul(factor, w)) for v, w in zip(mat[i], mat[r])
                ]
        pivots[c] = r
        r += 1
    basis = []
    for c in range(n):
        if c in pivots:
            continue
        vec = [field.zero] * n
        vec[c] = field.one
        for pc, prow in pivots.items():
            vec[pc] = field.neg(mat[prow][c])
        basis.append(tuple(vec))
    return basis


def roots_in_finite_field(f: Poly):
    """Roots with multiplicities over a finite coefficient field, by scan."""
    field = f.field
    if field.order is None:
        raise InputError("root scan requires a finite field")
    out = []
    for a in field.enumerate_payloads():
        if rp.evaluate(field, f.raw, a) == field.zero:
            elem = FieldElement(field, a)
            mult = 0
            g = f
            lin = Poly(field, [field.neg(a), 1])
            while True:
                quo, remdr = divmod(g, lin)
                if not remdr.is_zero():
                    break
                g = quo
                mult += 1
            out.append((elem, mult))
    return out


def min_poly_in_quotient(u: Poly, q: Poly) -> Poly:
    """Monic minimal polynomial over F of the class of u in F[X]/(q).

    Found as the first linear dependence among 1, u, u^2, ... reduced mod q,
    by incremental Gaussian elimination with exact arithmetic.
    """
    if not q.is_monic() or q.degree() < 1:
        raise InputError("quotient modulus must be monic of degree >= 1")
    if u.field != q.field:
        raise InputError("u and q must live over the same field")
    field = q.field
    n = q.degree()
    uraw = rp.rem(field, u.raw, q.raw)
    # echelon rows: (vector, pivot, combo) with combo tracking powers of u
    echelon = []
    power = (field.one,)
    for j in range(n + 1):
        vec = list(power) + [field.zero] * (n - len(power))
        combo = [field.zero] * (j + 1)
        combo[j] = field.one
        for evec, piv, ecombo in echelon:
            c = vec[piv]
            if c != field.zero:
                vec = [field.sub(a, field.mul(c, b)) for a, b in zip(vec, evec)]
                for i, b in enumerate(ecombo):
                    combo[i] = field.sub(combo[i], field.mul(c, b))
        piv = next((i for i, c in enumerate(vec) if c != field.zero), None)
        if piv is None:
            return Poly.from_raw(field, combo).monic()
        inv = field.inv(vec[piv])
        vec = [field.mul(c, inv) for c in vec]
        combo = [field.mul(c, inv) for c in combo]
        echelon.append((vec, piv, combo))
        power = rp.rem(field, rp.mul(field, power, uraw), q.raw)
    raise ConsistencyError("no linear dependence found within the dimension bound")
