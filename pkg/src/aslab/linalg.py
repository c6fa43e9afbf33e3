"""Dense exact linear algebra over the supported fields.

Provides companion / Kronecker / Pascal constructors, kernels and
eigenspaces by Gaussian elimination, invariant factors through the Smith
normal form of XI - M over F[X], similarity testing, and Jordan types of
nilpotent matrices from rank sequences.  All pivot choices are fixed, so
every function is deterministic.

Size caps: 100x100 over rational function fields (entry growth), 1024x1024
over finite fields.
"""

import math

from . import _ringops as rp
from .errors import CapExceededError, ConsistencyError, InputError
from .fields import FieldElement
from .poly import Poly, factor_finite

MAX_FINITE_DIM = 1024
MAX_RATIONAL_DIM = 100


class Matrix:
    """Immutable dense matrix with entries in one field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows):
        grid = []
        width = None
        for row in rows:
            converted = []
            for v in row:
                if isinstance(v, FieldElement):
                    if v.field != field:
                        raise InputError("entry from a different field")
                    converted.append(v.payload)
                elif isinstance(v, int):
                    converted.append(field.from_int(v))
                elif isinstance(v, str):
                    converted.append(field.parse_element(v).payload)
                else:
                    converted.append(field.validate_payload(v))
            if width is None:
                width = len(converted)
            elif len(converted) != width:
                raise InputError("ragged matrix rows")
            grid.append(tuple(converted))
        if not grid or width == 0:
            raise InputError("matrix must be nonempty")
        cap = MAX_RATIONAL_DIM if field.kind == "rational-function" else MAX_FINITE_DIM
        if len(grid) > cap or width > cap:
            raise CapExceededError(f"matrix size exceeds cap {cap}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", tuple(grid))
        object.__setattr__(self, "nrows", len(grid))
        object.__setattr__(self, "ncols", width)

    def __setattr__(self, *args):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, field, n, m=None):
        m = n if m is None else m
        z = field.zero
        return cls(field, [[z] * m for _ in range(n)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    def entry(self, i, j):
        return FieldElement(self.field, self.rows[i][j])

    def is_square(self):
        return self.nrows == self.ncols

    def is_zero(self):
        z = self.field.zero
        return all(v == z for row in self.rows for v in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash((self.field, self.rows))

    def __add__(self, other):
        self._check_same_shape(other)
        k = self.field
        return Matrix(
            k,
            [
                [k.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
        )

    def __sub__(self, other):
        self._check_same_shape(other)
        k = self.field
        return Matrix(
            k,
            [
                [k.sub(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
        )

    def __neg__(self):
        k = self.field
        return Matrix(k, [[k.neg(v) for v in row] for row in self.rows])

    def _check_same_shape(self, other):
        if not isinstance(other, Matrix) or other.field != self.field:
            raise InputError("matrix operands must share the field")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InputError("matrix shapes differ")

    def __mul__(self, other):
        k = self.field
        if isinstance(other, Matrix):
            if other.field != k:
                raise InputError("matrix operands must share the field")
            if self.ncols != other.nrows:
                raise InputError("inner dimensions differ")
            bt = list(zip(*other.rows))
            out = []
            zero = k.zero
            for row in self.rows:
                orow = []
                for col in bt:
                    acc = zero
                    for a, b in zip(row, col):
                        if a != zero and b != zero:
                            acc = k.add(acc, k.mul(a, b))
                    orow.append(acc)
                out.append(orow)
            return Matrix(k, out)
        if isinstance(other, (FieldElement, int)):
            c = other.payload if isinstance(other, FieldElement) else k.from_int(other)
            return Matrix(k, [[k.mul(v, c) for v in row] for row in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (FieldElement, int)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if not self.is_square():
            raise InputError("matrix power needs a square matrix")
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def transpose(self):
        return Matrix(self.field, list(zip(*self.rows)))

    def scalar_shift(self, c):
        """self + c*I."""
        if not self.is_square():
            raise InputError("scalar shift needs a square matrix")
        k = self.field
        c = c.payload if isinstance(c, FieldElement) else k.from_int(c)
        out = [list(row) for row in self.rows]
        for i in range(self.nrows):
            out[i][i] = k.add(out[i][i], c)
        return Matrix(k, out)

    def rank(self):
        return len(_row_echelon(self.field, [list(r) for r in self.rows])[1])

    def det(self):
        if not self.is_square():
            raise InputError("determinant needs a square matrix")
        k = self.field
        mat = [list(r) for r in self.rows]
        n = self.nrows
        detval = k.one
        for c in range(n):
            piv = next((i for i in range(c, n) if mat[i][c] != k.zero), None)
            if piv is None:
                return FieldElement(k, k.zero)
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                detval = k.neg(detval)
            detval = k.mul(detval, mat[c][c])
            inv = k.inv(mat[c][c])
            for i in range(c + 1, n):
                if mat[i][c] != k.zero:
                    f = k.mul(mat[i][c], inv)
                    mat[i] = [k.sub(a, k.mul(f, b)) for a, b in zip(mat[i], mat[c])]
        return FieldElement(k, detval)

    def is_invertible(self):
        return self.is_square() and self.rank() == self.nrows

    def kernel_basis(self):
        """Canonical kernel basis (one vector per free column of the RREF)."""
        k = self.field
        mat, pivots = _row_echelon(k, [list(r) for r in self.rows], reduced=True)
        pivot_cols = {c: r for r, c in enumerate(pivots)}
        basis = []
        for c in range(self.ncols):
            if c in pivot_cols:
                continue
            vec = [k.zero] * self.ncols
            vec[c] = k.one
            for pc, prow in pivot_cols.items():
                vec[pc] = k.neg(mat[prow][c])
            basis.append(tuple(FieldElement(k, v) for v in vec))
        return basis

    def to_json_dict(self):
        return {
            "field": self.field.spec_string(),
            "entries": [[self.field.payload_str(v) for v in row] for row in self.rows],
        }

    @classmethod
    def from_json_dict(cls, data, field=None):
        from .fields import make_field

        if field is None:
            field = make_field(data["field"])
        return cls(field, data["entries"])

    def __str__(self):
        return "[" + "; ".join(
            ", ".join(self.field.payload_str(v) for v in row) for row in self.rows
        ) + "]"

    def __repr__(self):
        return f"Matrix({self.field.spec_string()}, {self.nrows}x{self.ncols})"


def _row_echelon(k, mat, reduced=False):
    """In-place echelon form; returns (matrix, pivot column list)."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][c] != k.zero), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = k.inv(mat[r][c])
        mat[r] = [k.mul(v, inv) for v in mat[r]]
        rng = range(nrows) if reduced else range(r + 1, nrows)
        for i in rng:
            if i != r and mat[i][c] != k.zero:
                f = mat[i][c]
                mat[i] = [k.sub(a, k.mul(f, b)) for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def companion(f: Poly) -> Matrix:
    """Companion matrix: ones on the subdiagonal, negated coefficients of f
    in the last column."""
    if not f.is_monic():
        raise InputError("companion matrix needs a monic polynomial")
    m = f.degree()
    if m < 1:
        raise InputError("companion matrix needs degree >= 1")
    k = f.field
    rows = [[k.zero] * m for _ in range(m)]
    for i in range(1, m):
        rows[i][i - 1] = k.one
    for i in range(m):
        rows[i][m - 1] = k.neg(f.raw[i] if i < len(f.raw) else k.zero)
    return Matrix(k, rows)


def direct_sum(*mats) -> Matrix:
    if not mats:
        raise InputError("direct sum of nothing")
    k = mats[0].field
    n = sum(m.nrows for m in mats)
    c = sum(m.ncols for m in mats)
    out = [[k.zero] * c for _ in range(n)]
    ro = co = 0
    for m in mats:
        if m.field != k:
            raise InputError("direct sum over mixed fields")
        for i, row in enumerate(m.rows):
            for j, v in enumerate(row):
                out[ro + i][co + j] = v
        ro += m.nrows
        co += m.ncols
    return Matrix(k, out)


def kron(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise InputError("Kronecker product over mixed fields")
    k = a.field
    out = []
    for i in range(a.nrows):
        for ib in range(b.nrows):
            row = []
            for j in range(a.ncols):
                av = a.rows[i][j]
                row.extend(
                    k.mul(av, bv) if av != k.zero else k.zero for bv in b.rows[ib]
                )
            out.append(row)
    return Matrix(k, out)


def jordan_block(field, eigenvalue, size) -> Matrix:
    """Upper triangular Jordan block."""
    lam = field.element(eigenvalue).payload
    rows = [[field.zero] * size for _ in range(size)]
    for i in range(size):
        rows[i][i] = lam
        if i + 1 < size:
            rows[i][i + 1] = field.one
    return Matrix(field, rows)


def poly_at_matrix(f: Poly, m: Matrix) -> Matrix:
    if f.field != m.field:
        raise InputError("polynomial and matrix fields differ")
    if not m.is_square():
        raise InputError("polynomial evaluation needs a square matrix")
    k = m.field
    result = Matrix.zeros(k, m.nrows)
    for c in reversed(f.raw):
        result = result * m
        if c != k.zero:
            result = result.scalar_shift(FieldElement(k, c))
    return result


def ad_matrix(a: Matrix) -> Matrix:
    """Matrix of B -> AB - BA on matrix units, row-major ordering."""
    if not a.is_square():
        raise InputError("ad is defined for square matrices")
    k = a.field
    m = a.nrows
    z = k.zero
    n2 = m * m
    out = [[z] * n2 for _ in range(n2)]
    for i in range(m):
        for j in range(m):
            r = i * m + j
            for kk in range(m):
                # term A[i][kk] * E_(kk j): column index (kk, j) contributes to row (i, j)
                if a.rows[i][kk] != z:
                    out[r][kk * m + j] = k.add(out[r][kk * m + j], a.rows[i][kk])
                # term -E_(i kk) * A accounts for column (i, kk)
                if a.rows[kk][j] != z:
                    c = i * m + kk
                    out[r][c] = k.sub(out[r][c], a.rows[kk][j])
    return Matrix(k, out)


def eigenspace(m: Matrix, lam) -> list:
    """Basis of ker(M - lam*I); empty when lam is not an eigenvalue."""
    if not m.is_square():
        raise InputError("eigenspace needs a square matrix")
    lam = m.field.element(lam)
    return m.scalar_shift(-lam).kernel_basis()


class InvariantFactorList:
    """Nontrivial invariant factors, each monic, each dividing the next."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        factors = tuple(factors)
        for a, b in zip(factors, factors[1:]):
            if not (b % a).is_zero():
                raise ConsistencyError("invariant factor chain broken")
        self.factors = factors

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def __eq__(self, other):
        if not isinstance(other, InvariantFactorList):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def minimal_polynomial(self):
        return self.factors[-1]

    def characteristic_degree(self):
        return sum(f.degree() for f in self.factors)

    def __repr__(self):
        return "[" + ", ".join(str(f) for f in self.factors) + "]"


def invariant_factors(m: Matrix) -> InvariantFactorList:
    """Invariant factors of m via the Smith normal form of XI - m over F[X].

    Pivot rule: smallest degree, then leftmost column, then topmost row;
    diagonal entries are normalized monic at the end.
    """
    if not m.is_square():
        raise InputError("invariant factors need a square matrix")
    k = m.field
    n = m.nrows
    grid = []
    for i in range(n):
        row = []
        for j in range(n):
            a = k.neg(m.rows[i][j])
            if i == j:
                row.append(rp.trim(k, (a, k.one)))
            else:
                row.append(rp.trim(k, (a,)))
        grid.append(row)
    diag = _smith_diagonal(k, grid)
    nontrivial = [Poly.from_raw(k, d) for d in diag if len(d) > 1]
    total = sum(f.degree() for f in nontrivial)
    if total != n:
        raise ConsistencyError("Smith normal form degrees do not sum to the size")
    return InvariantFactorList(nontrivial)


def _smith_diagonal(k, grid):
    """Smith normal form diagonal of a square polynomial matrix, monic."""
    n = len(grid)
    diag = []
    for s in range(n):
        while True:
            # locate minimal-degree nonzero pivot in the trailing block
            best = None
            for j in range(s, n):
                for i in range(s, n):
                    e = grid[i][j]
                    if e and (best is None or len(e) < len(grid[best[0]][best[1]])):
                        best = (i, j)
                if best is not None and len(grid[best[0]][best[1]]) == 1:
                    break
            if best is None:
                diag.append(())
                break
            bi, bj = best
            if bi != s:
                grid[s], grid[bi] = grid[bi], grid[s]
            if bj != s:
                for row in grid:
                    row[s], row[bj] = row[bj], row[s]
            # clear row s and column s
            dirty = False
            for i in range(s + 1, n):
                if grid[i][s]:
                    q, r = rp.divmod_(k, grid[i][s], grid[s][s])
                    if q:
                        for j in range(s, n):
                            if grid[s][j]:
                                grid[i][j] = rp.sub(k, grid[i][j], rp.mul(k, q, grid[s][j]))
                    if grid[i][s]:
                        dirty = True
            for j in range(s + 1, n):
                if grid[s][j]:
                    q, r = rp.divmod_(k, grid[s][j], grid[s][s])
                    if q:
                        for i in range(s, n):
                            if grid[i][s]:
                                grid[i][j] = rp.sub(k, grid[i][j], rp.mul(k, q, grid[i][s]))
                    if grid[s][j]:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block
            offender = None
            for i in range(s + 1, n):
                for j in range(s + 1, n):
                    if grid[i][j] and rp.rem(k, grid[i][j], grid[s][s]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                diag.append(rp.monic(k, grid[s][s]))
                break
            for j in range(s, n):
                grid[s][j] = rp.add(k, grid[s][j], grid[offender][j])
    return diag


def similar(a: Matrix, b: Matrix) -> bool:
    """Similarity over the common field, decided by invariant factors."""
    if a.field != b.field:
        raise InputError("similarity needs matrices over the same field")
    if not (a.is_square() and b.is_square()) or a.nrows != b.nrows:
        raise InputError("similarity needs square matrices of equal size")
    return invariant_factors(a) == invariant_factors(b)


def pascal_similarity(f: Poly, b) -> Matrix:
    """Upper triangular Pascal matrix S with S^(-1) (C_{f(X+b)} + bI) S = C_f.

    The displayed identity is verified by direct multiplication; a failure
    would mean the companion convention and the Pascal matrix disagree, so it
    raises ConsistencyError.
    """
    if not f.is_monic() or f.degree() < 1:
        raise InputError("needs a monic polynomial of degree >= 1")
    k = f.field
    b = k.element(b)
    m = f.degree()
    rows = [[k.zero] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            rows[i][j] = (k.element(math.comb(j, i)) * b ** (j - i)).payload
    s = Matrix(k, rows)
    lhs = companion(f.shifted(b)).scalar_shift(b) * s
    rhs = s * companion(f)
    if lhs != rhs:
        raise ConsistencyError("Pascal similarity identity failed")
    return s


def verify_companion_composition(f: Poly, g: Poly) -> bool:
    """Whether g evaluated at the companion of lead(g)^(-deg f) * f(g(X)) is
    similar to deg(g) diagonal copies of the companion of f."""
    if not f.is_monic() or f.degree() < 1:
        raise InputError("f must be monic of degree >= 1")
    if g.degree() < 1:
        raise InputError("g must have degree >= 1")
    if f.field != g.field:
        raise InputError("f and g must share a field")
    m = f.degree()
    d = g.degree()
    a = g.leading_coeff()
    composed = (f.compose(g) * (a ** (-m))).monic()
    c = companion(composed)
    gc = poly_at_matrix(g, c)
    blocks = direct_sum(*[companion(f) for _ in range(d)])
    return similar(gc, blocks)


class JordanType:
    """Multiset of (eigenvalue, block size) pairs."""

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        blocks = [(ev, int(sz)) for ev, sz in blocks]
        if any(sz < 1 for _, sz in blocks):
            raise InputError("Jordan block sizes must be positive")
        blocks.sort(key=lambda b: (-b[1], b[0].sort_key()))
        self.blocks = tuple(blocks)

    def sizes(self):
        return [sz for _, sz in self.blocks]

    def dimension(self):
        return sum(self.sizes())

    def __eq__(self, other):
        if not isinstance(other, JordanType):
            return NotImplemented
        return self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __repr__(self):
        return "JordanType[" + ", ".join(f"J_{sz}({ev})" for ev, sz in self.blocks) + "]"


def nilpotent_jordan_type(n: Matrix) -> JordanType:
    """Block sizes of a nilpotent matrix from its rank sequence."""
    if not n.is_square():
        raise InputError("Jordan type needs a square matrix")
    dim = n.nrows
    ranks = [dim]
    power = n
    while True:
        r = power.rank()
        ranks.append(r)
        if r == 0:
            break
        if len(ranks) > dim + 1:
            raise InputError("matrix is not nilpotent")
        power = power * n
    zero = n.field.zero_element()
    sizes = []
    for k_ in range(1, len(ranks)):
        at_least_k = ranks[k_ - 1] - ranks[k_]
        at_least_k1 = ranks[k_] - ranks[k_ + 1] if k_ + 1 < len(ranks) else 0
        sizes.extend([k_] * (at_least_k - at_least_k1))
    return JordanType([(zero, sz) for sz in sizes])


def elementary_divisors_from_invariant(inv: InvariantFactorList):
    """Prime-power decomposition of the invariant factors (finite fields).

    Returns a sorted list of ((prime Poly, exponent), multiplicity).
    """
    counts = {}
    order = {}
    for f in inv:
        for prime, mult in factor_finite(f):
            key = (prime, mult)
            counts[key] = counts.get(key, 0) + 1
            order[key] = (prime.degree(), prime.sort_key(), mult)
    return sorted(counts.items(), key=lambda it: order[it[0]])


def invariant_factors_from_elementary(divisors) -> InvariantFactorList:
    """Rebuild the invariant factor chain from ((prime, exponent), mult)."""
    per_prime = {}
    for (prime, exp), mult in divisors:
        per_prime.setdefault(prime, []).extend([exp] * mult)
    depth = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for i in range(depth):
        f = None
        for prime, exps in per_prime.items():
            exps_sorted = sorted(exps, reverse=True)
            if i < len(exps_sorted):
                term = prime ** exps_sorted[i]
                f = term if f is None else f * term
        factors.append(f)
    return InvariantFactorList(list(reversed(factors)))
