"""Exact arithmetic for GF(p), GF(p^n) and rational function fields K(Z).

A field is described by a FieldDescriptor; elements are immutable
FieldElement wrappers around canonical payloads:

  * GF(p)      -- integers in [0, p)
  * GF(p^n)    -- length-n tuples of integers, coefficients of the residue
                  class modulo a fixed monic irreducible, low degree first
  * K(Z)       -- reduced fractions (num, den) of coefficient tuples over the
                  finite base field K, denominator monic, gcd(num, den) = 1

Two descriptors denote the same field exactly when they are structurally
equal (same p, n, modulus, base), and elements of structurally different
fields never mix.  Field specs are parsed from strings such as "GF(2)",
"GF(4)", "GF(2^3; mod=t^3+t^2+1)" and "GF(3)(Z)"; when the modulus is
omitted it defaults to the lexicographically smallest monic irreducible
(coefficient vectors compared low-degree-first), so a given spec always
produces the same field on every machine.

Finite fields are capped at 3^6 = 729 elements.
"""

import itertools
import re
import threading

from . import _ringops as rp
from ._exprparse import parse_expression
from .errors import CapExceededError, InputError

MAX_FIELD_SIZE = 729


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _needs_parens(s):
    return "+" in s or "-" in s or "/" in s


def _raw_poly_str(k, a, var):
    """Render a trimmed coefficient tuple over descriptor k."""
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == k.zero:
            continue
        if i == 0:
            parts.append(k.payload_str(c))
            continue
        xpart = var if i == 1 else f"{var}^{i}"
        if c == k.one:
            parts.append(xpart)
        else:
            cs = k.payload_str(c)
            if _needs_parens(cs):
                cs = "(" + cs + ")"
            parts.append(cs + "*" + xpart)
    return "+".join(parts)


class FieldElement:
    """Immutable element of a field, supporting the usual operators."""

    __slots__ = ("field", "payload")

    def __init__(self, field, payload):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "payload", payload)

    def __setattr__(self, *args):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InputError("elements of structurally different fields do not mix")
            return other.payload
        if isinstance(other, int):
            return self.field.from_int(other)
        return None

    def __add__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.payload, p))

    __radd__ = __add__

    def __sub__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.payload, p))

    def __rsub__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(p, self.payload))

    def __mul__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.payload, p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.payload, p))

    def __rtruediv__(self, other):
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(p, self.payload))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.payload))

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return FieldElement(self.field, self.field.pow_int(self.payload, n))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.payload == other.payload
        if isinstance(other, int):
            return self.payload == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.payload))

    def __bool__(self):
        return self.payload != self.field.zero

    def __str__(self):
        return self.field.payload_str(self.payload)

    def __repr__(self):
        return f"{self.field.spec_string()}:{self}"

    def sort_key(self):
        return self.field.sort_key(self.payload)


class FieldDescriptor:
    """Base class; concrete kinds are prime, extension and rational-function."""

    kind = None

    def element(self, value):
        """Build an element from a payload, int, string or FieldElement."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise InputError("element belongs to a different field")
            return value
        if isinstance(value, str):
            return self.parse_element(value)
        if isinstance(value, int):
            return FieldElement(self, self.from_int(value))
        return FieldElement(self, self.validate_payload(value))

    def __call__(self, value):
        return self.element(value)

    def zero_element(self):
        return FieldElement(self, self.zero)

    def one_element(self):
        return FieldElement(self, self.one)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_int(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def __repr__(self):
        return self.spec_string()


class PrimeField(FieldDescriptor):
    kind = "prime"

    def __init__(self, p):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if p > MAX_FIELD_SIZE:
            raise CapExceededError(f"field size {p} exceeds cap {MAX_FIELD_SIZE}")
        self.p = p
        self.n = 1
        self.order = p
        self.char = p
        self.zero = 0
        self.one = 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def from_int(self, i):
        return i % self.p

    def validate_payload(self, a):
        if not isinstance(a, int) or not 0 <= a < self.p:
            raise InputError(f"invalid GF({self.p}) payload {a!r}")
        return a

    def frobenius(self, a):
        return a

    def pth_root(self, a):
        return a

    def enumerate_payloads(self):
        return range(self.p)

    def random_payload(self, rng):
        return rng.randrange(self.p)

    def sort_key(self, a):
        return (a,)

    def payload_str(self, a):
        return str(a)

    def parse_element(self, s):
        return parse_expression(s, {}, lambda i: FieldElement(self, i % self.p))

    def spec_string(self):
        return f"GF({self.p})"


def _fp_is_irreducible(p, f):
    """Irreducibility over GF(p) via x^(p^d) == x tests on the degree divisors."""
    k = PrimeField(p)
    n = len(f) - 1
    if n <= 0:
        return False
    x = (0, 1)
    xq = rp.pow_mod(k, x, p**n, f)
    if xq != rp.rem(k, x, f):
        return False
    for ell in range(2, n + 1):
        if n % ell == 0 and is_prime(ell):
            xd = rp.pow_mod(k, x, p ** (n // ell), f)
            if rp.gcd(k, rp.sub(k, xd, x), f) != (1,):
                return False
    return True


_modulus_cache = {}


def default_modulus(p, n):
    """Lexicographically smallest monic irreducible of degree n over GF(p)."""
    key = (p, n)
    if key not in _modulus_cache:
        for tail in itertools.product(range(p), repeat=n):
            f = rp.trim(PrimeField(p), tail + (1,))
            if _fp_is_irreducible(p, f):
                _modulus_cache[key] = f
                break
    return _modulus_cache[key]


class ExtensionField(FieldDescriptor):
    kind = "extension"

    def __init__(self, p, n, modulus=None):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if n < 2:
            raise InputError("extension degree must be at least 2; use GF(p) for n=1")
        if p**n > MAX_FIELD_SIZE:
            raise CapExceededError(f"field size {p}^{n} exceeds cap {MAX_FIELD_SIZE}")
        self.p = p
        self.n = n
        self.base = PrimeField(p)
        if modulus is None:
            modulus = default_modulus(p, n)
        else:
            modulus = rp.trim(self.base, tuple(c % p for c in modulus))
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise InputError("modulus must be monic of the stated degree")
            if not _fp_is_irreducible(p, modulus):
                raise InputError("modulus is reducible over the prime field")
        self.modulus = modulus
        self.order = p**n
        self.char = p
        self.zero = (0,) * n
        self.one = (1,) + (0,) * (n - 1)

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.n == self.n
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("extension", self.p, self.n, self.modulus))

    def _pad(self, a):
        return tuple(a) + (0,) * (self.n - len(a))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        prod = rp.mul(self.base, rp.trim(self.base, a), rp.trim(self.base, b))
        return self._pad(rp.rem(self.base, prod, self.modulus))

    def inv(self, a):
        at = rp.trim(self.base, a)
        if not at:
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = rp.xgcd(self.base, at, self.modulus)
        if g != (1,):
            raise ZeroDivisionError("modulus not irreducible")
        return self._pad(s)

    def from_int(self, i):
        return (i % self.p,) + (0,) * (self.n - 1)

    def validate_payload(self, a):
        a = tuple(a)
        if len(a) != self.n or not all(isinstance(c, int) and 0 <= c < self.p for c in a):
            raise InputError(f"invalid GF({self.p}^{self.n}) payload {a!r}")
        return a

    def frobenius(self, a):
        return self.pow_int(a, self.p)

    def pth_root(self, a):
        # Frobenius is bijective: the inverse is x -> x^(p^(n-1)).
        return self.pow_int(a, self.p ** (self.n - 1))

    def gen(self):
        return FieldElement(self, self._pad((0, 1)))

    def enumerate_payloads(self):
        for i in range(self.order):
            digits = []
            v = i
            for _ in range(self.n):
                v, r = divmod(v, self.p)
                digits.append(r)
            yield tuple(digits)

    def random_payload(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.n))

    def sort_key(self, a):
        # consistent with enumeration order (low coefficient least significant)
        return tuple(reversed(a))

    def payload_str(self, a):
        return _raw_poly_str(self.base, rp.trim(self.base, a), "t")

    def parse_element(self, s):
        return parse_expression(
            s, {"t": self.gen()}, lambda i: FieldElement(self, self.from_int(i))
        )

    def spec_string(self):
        if self.modulus == default_modulus(self.p, self.n):
            return f"GF({self.order})"
        return f"GF({self.p}^{self.n}; mod={_raw_poly_str(self.base, self.modulus, 't')})"


class RationalFunctionField(FieldDescriptor):
    kind = "rational-function"

    def __init__(self, base):
        if base.kind == "rational-function":
            raise InputError("nested rational function fields are not supported")
        self.base = base
        self.p = base.p
        self.n = base.n
        self.char = base.char
        self.order = None
        self.zero = ((), (base.one,))
        self.one = ((base.one,), (base.one,))

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.base == self.base

    def __hash__(self):
        return hash(("rational-function", self.base))

    def _canon(self, num, den):
        k = self.base
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return ((), (k.one,))
        if len(den) == 1:
            if den[0] != k.one:
                num = rp.scale(k, num, k.inv(den[0]))
            return (num, (k.one,))
        g = rp.gcd(k, num, den)
        if len(g) > 1:
            num = rp.divmod_(k, num, g)[0]
            den = rp.divmod_(k, den, g)[0]
        lead = den[-1]
        if lead != k.one:
            c = k.inv(lead)
            num = rp.scale(k, num, c)
            den = rp.scale(k, den, c)
        return (num, den)

    def fraction(self, num, den):
        """Element from raw coefficient tuples over the base field."""
        k = self.base
        return FieldElement(self, self._canon(rp.trim(k, num), rp.trim(k, den)))

    def add(self, a, b):
        k = self.base
        an, ad = a
        bn, bd = b
        if len(ad) == 1 and len(bd) == 1:
            return (rp.add(k, an, bn), (k.one,))
        return self._canon(
            rp.add(k, rp.mul(k, an, bd), rp.mul(k, bn, ad)), rp.mul(k, ad, bd)
        )

    def neg(self, a):
        return (rp.neg(self.base, a[0]), a[1])

    def mul(self, a, b):
        k = self.base
        an, ad = a
        bn, bd = b
        if not an or not bn:
            return self.zero
        if len(ad) == 1 and len(bd) == 1:
            return (rp.mul(k, an, bn), (k.one,))
        return self._canon(rp.mul(k, an, bn), rp.mul(k, ad, bd))

    def inv(self, a):
        an, ad = a
        if not an:
            raise ZeroDivisionError("inverse of zero")
        return self._canon(ad, an)

    def from_int(self, i):
        v = self.base.from_int(i)
        num = () if v == self.base.zero else (v,)
        return (num, (self.base.one,))

    def validate_payload(self, a):
        num, den = a
        k = self.base
        num = tuple(k.validate_payload(c) for c in num)
        den = tuple(k.validate_payload(c) for c in den)
        canon = self._canon(rp.trim(k, num), rp.trim(k, den))
        if canon != (num, den):
            raise InputError("fraction payload is not in reduced canonical form")
        return canon

    def constant(self, value):
        """Embed an element (or payload) of the base field as a constant."""
        if isinstance(value, FieldElement):
            if value.field != self.base:
                raise InputError("constant must come from the base field")
            value = value.payload
        num = rp.trim(self.base, (value,))
        return FieldElement(self, (num, (self.base.one,)))

    def gen(self):
        k = self.base
        return FieldElement(self, ((k.zero, k.one), (k.one,)))

    def random_payload(self, rng):
        k = self.base
        num = rp.trim(k, tuple(k.random_payload(rng) for _ in range(rng.randrange(1, 4))))
        den = ()
        while not den:
            den = rp.trim(k, tuple(k.random_payload(rng) for _ in range(rng.randrange(1, 3))))
        return self._canon(num, den)

    def sort_key(self, a):
        num, den = a
        return (
            tuple(self.base.sort_key(c) for c in num),
            tuple(self.base.sort_key(c) for c in den),
        )

    def payload_str(self, a):
        num, den = a
        ns = _raw_poly_str(self.base, num, "Z")
        if den == (self.base.one,):
            return ns
        ds = _raw_poly_str(self.base, den, "Z")
        if _needs_parens(ns):
            ns = "(" + ns + ")"
        if _needs_parens(ds) or "*" in ds or "^" in ds:
            ds = "(" + ds + ")"
        return f"{ns}/{ds}"

    def parse_element(self, s):
        atoms = {"Z": self.gen()}
        if self.base.kind == "extension":
            atoms["t"] = self.constant(self.base.gen())
        return parse_expression(s, atoms, lambda i: FieldElement(self, self.from_int(i)))

    def spec_string(self):
        return self.base.spec_string() + "(Z)"


_FIELD_RE = re.compile(r"^GF\(\s*(\d+)(?:\s*\^\s*(\d+))?\s*(?:;\s*mod\s*=\s*([^)]+))?\)$")


def make_field(spec):
    """Build a field descriptor from a spec string.

    Accepted forms: "GF(p)", "GF(q)" for a prime power q, "GF(p^n)",
    "GF(p^n; mod=<monic irreducible in t>)" and any of those followed by
    "(Z)" for the rational function field over it.
    """
    spec = spec.strip()
    if spec.endswith("(Z)"):
        return RationalFunctionField(make_field(spec[:-3]))
    m = _FIELD_RE.match(spec)
    if not m:
        raise InputError(f"malformed field spec {spec!r}")
    q = int(m.group(1))
    n = int(m.group(2)) if m.group(2) else None
    modstr = m.group(3)
    if n is None:
        # "GF(q)": factor q as p^n
        p, n = _prime_power(q)
    else:
        p = q
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
    if n == 1:
        if modstr is not None:
            raise InputError("prime fields take no modulus")
        return PrimeField(p)
    modulus = None
    if modstr is not None:
        k1 = PrimeField(p)
        val = parse_expression(
            modstr,
            {"t": _RawPoly((k1.zero, k1.one), k1)},
            lambda i: _RawPoly((i % p,) if i % p else (), k1),
        )
        modulus = val.coeffs
    return ExtensionField(p, n, modulus)


def _prime_power(q):
    if q < 2:
        raise InputError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            while q % p == 0:
                q //= p
                n += 1
            if q != 1:
                raise InputError("field order is not a prime power")
            if not is_prime(p):
                raise InputError(f"{p} is not prime")
            return p, n
    raise InputError(f"{q} is not a prime power")


class _RawPoly:
    """Minimal polynomial-over-GF(p) value for parsing modulus strings."""

    __slots__ = ("coeffs", "k")

    def __init__(self, coeffs, k):
        self.coeffs = rp.trim(k, coeffs)
        self.k = k

    def __add__(self, other):
        return _RawPoly(rp.add(self.k, self.coeffs, other.coeffs), self.k)

    def __sub__(self, other):
        return _RawPoly(rp.sub(self.k, self.coeffs, other.coeffs), self.k)

    def __mul__(self, other):
        return _RawPoly(rp.mul(self.k, self.coeffs, other.coeffs), self.k)

    def __neg__(self):
        return _RawPoly(rp.neg(self.k, self.coeffs), self.k)

    def __pow__(self, n):
        out = _RawPoly((self.k.one,), self.k)
        for _ in range(n):
            out = out * self
        return out


def frobenius(x: FieldElement) -> FieldElement:
    """x -> x^p on a finite field."""
    if x.field.kind == "rational-function":
        raise InputError("frobenius is restricted to finite fields")
    return FieldElement(x.field, x.field.frobenius(x.payload))


def enumerate_elements(field):
    """All elements of a finite field, lexicographic in coefficient vectors."""
    if field.order is None:
        raise InputError("cannot enumerate an infinite field")
    return [FieldElement(field, p) for p in field.enumerate_payloads()]


def is_pth_power_coeffs(g) -> bool:
    """Whether every coefficient of g lies in K^p (K the coefficient field).

    Over a finite field the Frobenius is onto, so the answer is always True;
    each root is recomputed and verified so the check stays meaningful if an
    imperfect coefficient ring is ever added.
    """
    field = g.field
    if field.kind == "rational-function":
        raise InputError("is_pth_power_coeffs expects a polynomial over a finite field")
    for c in g.coeffs:
        root = field.pth_root(c.payload)
        if field.pow_int(root, field.char) != c.payload:
            return False
    return True


_embedding_cache = {}
_embedding_lock = threading.Lock()


def embed_subfield(small, big):
    """Embedding GF(p^m) -> GF(p^n) for m | n, as a callable on elements.

    Realized by locating the first root (in enumeration order) of the small
    field's modulus inside the big field; the choice is cached per descriptor
    pair, so repeated calls commute with each other.
    """
    if small.kind == "rational-function" or big.kind == "rational-function":
        raise InputError("subfield embeddings are defined for finite fields only")
    if small.char != big.char or big.n % small.n != 0:
        raise InputError(f"{small.spec_string()} does not embed in {big.spec_string()}")
    key = (small, big)
    with _embedding_lock:
        powers = _embedding_cache.get(key)
    if powers is None:
        if small.kind == "prime":
            powers = [big.one]
        else:
            root = None
            modulus = small.modulus
            for cand in big.enumerate_payloads():
                acc = big.zero
                for c in reversed(modulus):
                    acc = big.add(big.mul(acc, cand), big.from_int(c))
                if acc == big.zero:
                    root = cand
                    break
            if root is None:
                raise InputError("modulus has no root in the big field")
            powers = [big.one]
            for _ in range(small.n - 1):
                powers.append(big.mul(powers[-1], root))
        with _embedding_lock:
            _embedding_cache[key] = powers

    def embed(x):
        if isinstance(x, FieldElement):
            if x.field != small:
                raise InputError("element does not belong to the small field")
            x = x.payload
        if small.kind == "prime":
            return FieldElement(big, big.from_int(x))
        acc = big.zero
        for c, w in zip(x, powers):
            if c:
                acc = big.add(acc, big.mul(big.from_int(c), w))
        return FieldElement(big, acc)

    return embed
