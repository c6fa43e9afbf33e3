"""Irreducibility of X^(p^(n+e)) - X^(p^e) - g(Z^r) over K(Z), K finite.

gas_irreducible decides by criterion: the polynomial is irreducible exactly
when p does not divide r, or e = 0, or g has a coefficient outside K^p.
When all three fail it is a p-th power, and the p-th root is produced and
verified as a witness.

bivariate_irreducible_oracle is the independent check: an exhaustive search
for a monic-in-X factor in K[Z][X].  Candidate factors are reconstructed by
Chinese remaindering from complete univariate factorizations of the input
at enough irreducible moduli m(Z), then confirmed by exact bivariate
division; a factor exists in K(Z)[X] iff one is found this way (Gauss's
lemma, the input being primitive with unit leading coefficient).  Caps:
|K| <= 9 and total degree <= 12.
"""

from . import _ringops as rp
from .errors import CapExceededError, ConsistencyError, InputError
from .fields import FieldElement, RationalFunctionField
from .poly import Poly, _factor_raw, is_irreducible_finite

ORACLE_MAX_FIELD = 9
ORACLE_MAX_TOTAL_DEGREE = 12
_POINT_FIELD_LIMIT = 729
_COMBINATION_LIMIT = 500_000


class GasInstance:
    """Parameters (K, n, e, r, g) of the polynomial X^(p^(n+e)) - X^(p^e) - g(Z^r)."""

    __slots__ = ("K", "p", "n", "e", "r", "g")

    def __init__(self, K, n, e, r, g):
        if K.order is None:
            raise InputError("K must be a finite field")
        if n < 1 or e < 0 or r < 1:
            raise InputError("need n >= 1, e >= 0, r >= 1")
        if isinstance(g, str):
            g = Poly.from_string(K, g, var="Z")
        if g.field != K:
            raise InputError("g must be a polynomial over K")
        d = g.degree()
        if d < 1:
            raise InputError("g must have degree >= 1 (constant g is univariate territory)")
        if d % K.char == 0:
            raise InputError("the degree of g must be coprime to the characteristic")
        self.K = K
        self.p = K.char
        self.n = n
        self.e = e
        self.r = r
        self.g = g

    def r_decomposition(self):
        """r = r0 * p^s with p not dividing r0."""
        r0, s = self.r, 0
        while r0 % self.p == 0:
            r0 //= self.p
            s += 1
        return r0, s

    def rational_field(self):
        return RationalFunctionField(self.K)

    def build_h(self) -> Poly:
        """The polynomial X^(p^(n+e)) - X^(p^e) - g(Z^r) over K(Z)."""
        F = self.rational_field()
        gzr = self.g.substitute_x_power(self.r)  # g(Z^r) as a poly in Z over K
        const = F.fraction(gzr.raw, (self.K.one,))
        h = (
            Poly.x_power(F, self.p ** (self.n + self.e))
            - Poly.x_power(F, self.p**self.e)
            - Poly.constant(F, const)
        )
        return h

    def __repr__(self):
        return (
            f"GasInstance(K={self.K.spec_string()}, n={self.n}, e={self.e}, "
            f"r={self.r}, g={self.g.to_string('Z')})"
        )


class GasIrreducibility:
    """Criterion verdict with the satisfied condition or a p-th power witness."""

    __slots__ = ("irreducible", "condition", "reason", "witness", "r0", "s")

    def __init__(self, irreducible, condition, reason, witness, r0, s):
        self.irreducible = irreducible
        self.condition = condition
        self.reason = reason
        self.witness = witness
        self.r0 = r0
        self.s = s

    def __bool__(self):
        return self.irreducible

    def __repr__(self):
        return f"GasIrreducibility({self.irreducible}, {self.condition!r})"


def gas_irreducible(inst: GasInstance) -> GasIrreducibility:
    """Decide irreducibility of X^(p^(n+e)) - X^(p^e) - g(Z^r) over K(Z)."""
    p = inst.p
    r0, s = inst.r_decomposition()
    if s == 0:
        return GasIrreducibility(
            True,
            "r-coprime-to-p",
            f"p = {p} does not divide r = {inst.r} (r0 = {r0}, s = 0)",
            None,
            r0,
            s,
        )
    if inst.e == 0:
        return GasIrreducibility(
            True,
            "separable-exponent-zero",
            f"e = 0 while r = {r0} * {p}^{s}",
            None,
            r0,
            s,
        )
    K = inst.K
    roots = []
    for c in inst.g.raw:
        root = K.pth_root(c)
        if K.pow_int(root, p) != c:
            return GasIrreducibility(
                True,
                "coefficients-not-pth-powers",
                f"a coefficient of g lies outside K^{p} (r = {r0} * {p}^{s}, e = {inst.e})",
                None,
                r0,
                s,
            )
        roots.append(root)
    # all conditions fail: h = Q^p with Q built from p-th roots of g
    F = inst.rational_field()
    qg = [K.zero] * ((len(inst.g.raw) - 1) * r0 * p ** (s - 1) + 1)
    for kidx, root in enumerate(roots):
        qg[kidx * r0 * p ** (s - 1)] = root
    qg_const = F.fraction(qg, (K.one,))
    witness = (
        Poly.x_power(F, p ** (inst.n + inst.e - 1))
        - Poly.x_power(F, p ** (inst.e - 1))
        - Poly.constant(F, qg_const)
    )
    if witness**p != inst.build_h():
        raise ConsistencyError("constructed p-th root does not recompose the input")
    return GasIrreducibility(
        False,
        "pth-power",
        f"r = {r0} * {p}^{s} with s >= 1, e = {inst.e} >= 1, and g has all "
        f"coefficients in K^{p}: the polynomial is a {p}-th power",
        witness,
        r0,
        s,
    )


class _QuotientFieldOps:
    """Payload-level field ops for K[Z]/(m), m irreducible over finite K."""

    kind = "quotient"

    def __init__(self, base, modulus):
        self.base = base
        self.modulus = modulus
        self.deg = len(modulus) - 1
        self.order = base.order**self.deg
        self.char = base.char
        self.zero = ()
        self.one = (base.one,)

    def add(self, a, b):
        return rp.add(self.base, a, b)

    def sub(self, a, b):
        return rp.sub(self.base, a, b)

    def neg(self, a):
        return rp.neg(self.base, a)

    def mul(self, a, b):
        return rp.rem(self.base, rp.mul(self.base, a, b), self.modulus)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = rp.xgcd(self.base, a, self.modulus)
        if g != (self.base.one,):
            raise ConsistencyError("quotient modulus is not irreducible")
        return s

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, i):
        v = self.base.from_int(i)
        return (v,) if v != self.base.zero else ()

    def enumerate_payloads(self):
        basepays = list(self.base.enumerate_payloads())
        for i in range(self.order):
            digits = []
            v = i
            for _ in range(self.deg):
                v, rdig = divmod(v, self.base.order)
                digits.append(basepays[rdig])
            yield rp.trim(self.base, digits)

    def sort_key(self, a):
        padded = tuple(a) + (self.base.zero,) * (self.deg - len(a))
        return tuple(self.base.sort_key(c) for c in padded)


def _clear_denominators(h: Poly):
    """Poly over K(Z) -> (columns of raw K[Z] polys, base field K)."""
    F = h.field
    if F.kind != "rational-function":
        raise InputError("expected a polynomial over a rational function field")
    k = F.base
    common = (k.one,)
    for num, den in h.raw:
        common = rp.mul(k, common, rp.divmod_(k, den, rp.gcd(k, common, den))[0]) \
            if len(den) > 1 else common
    cols = []
    for num, den in h.raw:
        scaled = rp.mul(k, num, rp.divmod_(k, common, den)[0])
        cols.append(scaled)
    return cols, k


_irreducible_cache = {}


def _monic_irreducibles(k, degree, count):
    """First `count` monic irreducible raw polys of the degree, in order."""
    import itertools

    key = (k, degree)
    cached = _irreducible_cache.get(key, [])
    if len(cached) >= count:
        return cached[:count]
    out = []
    for tail in itertools.product(k.enumerate_payloads(), repeat=degree):
        cand = rp.trim(k, tuple(tail) + (k.one,))
        if len(cand) != degree + 1:
            continue
        if _raw_irreducible(k, cand):
            out.append(cand)
            if len(out) >= count:
                break
    _irreducible_cache[key] = out
    return out


def _raw_irreducible(k, f):
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    q = k.order
    x = (k.zero, k.one)
    if rp.pow_mod(k, x, q**n, f) != rp.rem(k, x, f):
        return False
    for ell in range(2, n + 1):
        if n % ell == 0 and all(ell % d for d in range(2, ell)):
            xd = rp.pow_mod(k, x, q ** (n // ell), f)
            if rp.gcd(k, rp.sub(k, xd, x), f) != (k.one,):
                return False
    return True


def _divisor_products(quot, factors, k):
    """All monic degree-k divisors of a factored polynomial over quot.

    Polynomials in X over the quotient field are tuples of payloads, low
    degree first; factors is the (piece, multiplicity) list of the complete
    factorization.
    """
    results = {}

    def walk(idx, deg_left, acc):
        if deg_left == 0:
            results.setdefault(acc, None)
            return
        if idx == len(factors):
            return
        piece, mult = factors[idx]
        d = len(piece) - 1
        cur = acc
        for take in range(mult + 1):
            walk(idx + 1, deg_left - d * take, cur)
            if take < mult and d * (take + 1) <= deg_left:
                cur = _xpoly_mul(quot, cur, piece)
            else:
                break

    walk(0, k, (quot.one,))
    return list(results)


def _xpoly_mul(quot, a, b):
    """Multiply polynomials in X with coefficients in the quotient field."""
    if not a or not b:
        return ()
    out = [quot.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == quot.zero:
            continue
        for j, y in enumerate(b):
            if y != quot.zero:
                out[i + j] = quot.add(out[i + j], quot.mul(x, y))
    while out and out[-1] == quot.zero:
        out.pop()
    return tuple(out)


def _bivariate_divides(k, num_cols, div_cols):
    """Exact division test in K[Z][X] by a monic-in-X divisor."""
    num = [list(c) for c in num_cols]
    nd = len(num) - 1
    dd = len(div_cols) - 1
    if dd > nd:
        return False
    for i in range(nd - dd, -1, -1):
        c = rp.trim(k, num[i + dd])
        if not c:
            continue
        for j in range(dd + 1):
            if div_cols[j]:
                num[i + j] = list(rp.sub(k, rp.trim(k, num[i + j]), rp.mul(k, c, div_cols[j])))
    return all(not rp.trim(k, col) for col in num)


def bivariate_irreducible_oracle(h: Poly, return_factor=False):
    """Exhaustive irreducibility check for h in K[Z][X], monic-unit lead in X.

    Independent of the criterion: factors the input at irreducible moduli
    m(Z) with degrees summing past deg_Z(h), stitches candidate divisors by
    Chinese remaindering, and trial-divides.  Returns a bool, or with
    return_factor=True a (bool, factor Poly or None) pair.
    """
    cols, k = _clear_denominators(h)
    if k.order > ORACLE_MAX_FIELD:
        raise CapExceededError(f"oracle supports |K| <= {ORACLE_MAX_FIELD}")
    degx = len(cols) - 1
    if degx < 1:
        raise InputError("oracle expects positive degree in X")
    lead = cols[-1]
    substituted_lead = None
    if len(lead) != 1:
        # monicize by the substitution X -> Y / lead: the coefficient of Y^j
        # becomes c_j * lead^(degx-1-j), a polynomial, and irreducibility
        # over K(Z) is unchanged
        substituted_lead = lead
        newcols = []
        for j in range(degx):
            power = (k.one,)
            for _ in range(degx - 1 - j):
                power = rp.mul(k, power, lead)
            newcols.append(rp.mul(k, cols[j], power))
        newcols.append((k.one,))
        cols = newcols
    elif lead[0] != k.one:
        c = k.inv(lead[0])
        cols = [rp.scale(k, col, c) for col in cols]
    # monic in X, hence primitive in K[Z]
    degz = max(len(col) - 1 for col in cols if col)
    if degx + degz > ORACLE_MAX_TOTAL_DEGREE:
        raise CapExceededError(
            f"total degree {degx + degz} exceeds cap {ORACLE_MAX_TOTAL_DEGREE}"
        )
    if degx == 1:
        return (True, None) if return_factor else True
    if degz == 0:
        f_univ = Poly.from_raw(k, tuple(col[0] if col else k.zero for col in cols))
        verdict = is_irreducible_finite(f_univ)
        if verdict or not return_factor:
            return (verdict, None) if return_factor else verdict
        piece = _factor_raw(k, f_univ.raw)[0][0]
        cand = [(c,) if c != k.zero else () for c in piece]
        return False, _lift_factor(h.field, k, cand, substituted_lead)

    # choose moduli: degrees as large as the point-field cap allows
    dmax = 1
    while k.order ** (dmax + 1) <= _POINT_FIELD_LIMIT:
        dmax += 1
    need = degz + 1
    degrees = []
    while need > 0:
        d = min(dmax, need)
        degrees.append(d)
        need -= d
    pools = {d: _monic_irreducibles(k, d, degrees.count(d)) for d in set(degrees)}
    used = {d: 0 for d in set(degrees)}
    moduli = []
    for d in degrees:
        moduli.append(pools[d][used[d]])
        used[d] += 1

    points = []
    for m in moduli:
        quot = _QuotientFieldOps(k, m)
        himg = tuple(rp.rem(k, col, m) for col in cols)
        factors = _factor_raw(quot, himg)
        points.append((quot, m, factors))

    # CRT scaffolding over K[Z]
    big_m = (k.one,)
    for m in moduli:
        big_m = rp.mul(k, big_m, m)
    crt_basis = []
    for m in moduli:
        mi = rp.divmod_(k, big_m, m)[0]
        _, inv_mi, _ = rp.xgcd(k, rp.rem(k, mi, m), m)
        crt_basis.append(rp.rem(k, rp.mul(k, mi, inv_mi), big_m))

    for kdeg in range(1, degx // 2 + 1):
        options = []
        total = 1
        for quot, m, factors in points:
            divs = _divisor_products(quot, factors, kdeg)
            options.append(divs)
            total *= len(divs)
        if total > _COMBINATION_LIMIT:
            raise CapExceededError("candidate combination count exceeds the oracle cap")
        for combo in _cartesian(options):
            cand_cols = []
            ok = True
            for j in range(kdeg + 1):
                acc = ()
                for basis, divc in zip(crt_basis, combo):
                    coeff = divc[j] if j < len(divc) else ()
                    if coeff:
                        acc = rp.add(k, acc, rp.mul(k, coeff, basis))
                acc = rp.rem(k, acc, big_m)
                if len(acc) - 1 > degz:
                    ok = False
                    break
                cand_cols.append(acc)
            if not ok:
                continue
            if cand_cols[-1] != (k.one,):
                continue
            if _bivariate_divides(k, cols, cand_cols):
                if return_factor:
                    return False, _lift_factor(h.field, k, cand_cols, substituted_lead)
                return False
    return (True, None) if return_factor else True


def _lift_factor(F, k, cand_cols, substituted_lead):
    """Map a monic factor of the (possibly monicized) polynomial back to F[X]."""
    if substituted_lead is None:
        return Poly(F, [F.fraction(c, (k.one,)) for c in cand_cols])
    # undo Y = lead * X: the monic factor in X has coefficient
    # cand[j] * lead^(j - kdeg) at X^j
    kdeg = len(cand_cols) - 1
    den = (k.one,)
    for _ in range(kdeg):
        den = rp.mul(k, den, substituted_lead)
    coeffs = []
    power = (k.one,)
    for j in range(kdeg + 1):
        coeffs.append(F.fraction(rp.mul(k, cand_cols[j], power), den))
        power = rp.mul(k, power, substituted_lead)
    return Poly(F, coeffs)


def _cartesian(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _cartesian(lists[1:]):
            yield (head,) + tail


def rational_poly_irreducible(f: Poly) -> bool:
    """Irreducibility over K(Z) for a polynomial with unit X-lead, via the oracle."""
    return bivariate_irreducible_oracle(f)


def coprime_difference_irreducible(f: Poly, g: Poly) -> bool:
    """Oracle verdict for f(X) - g(Z) when gcd(deg f, deg g) = 1.

    The classical criterion promises irreducibility; the caller asserts the
    returned verdict, keeping criterion and search independent.
    """
    if f.field != g.field or f.field.order is None:
        raise InputError("f and g must be polynomials over one finite field")
    from math import gcd as igcd

    if igcd(f.degree(), g.degree()) != 1:
        raise InputError("degrees of f and g must be coprime")
    K = f.field
    F = RationalFunctionField(K)
    h = Poly(F, [F.constant(FieldElement(K, c)) for c in f.raw])
    gz = F.fraction(g.raw, (K.one,))
    h = h - Poly.constant(F, gz)
    return bivariate_irreducible_oracle(h)
