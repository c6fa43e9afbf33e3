import random

import pytest

from aslab.errors import CapExceededError, InputError
from aslab.fields import enumerate_elements, make_field
from aslab.linalg import (
    InvariantFactorList,
    Matrix,
    ad_matrix,
    companion,
    direct_sum,
    eigenspace,
    elementary_divisors_from_invariant,
    invariant_factors,
    invariant_factors_from_elementary,
    jordan_block,
    kron,
    nilpotent_jordan_type,
    pascal_similarity,
    poly_at_matrix,
    similar,
    verify_companion_composition,
)
from aslab.poly import Poly, roots_in_finite_field


def random_matrix(field, size, rng):
    return Matrix(
        field, [[field.random_payload(rng) for _ in range(size)] for _ in range(size)]
    )


def random_monic(field, deg, rng):
    return Poly.from_raw(
        field, tuple(field.random_payload(rng) for _ in range(deg)) + (field.one,)
    )


# ---------------------------------------------------------------------------
# companion matrices

def test_companion_1x1():
    f5 = make_field("GF(5)")
    c = companion(Poly.from_string(f5, "X-3"))
    assert c.nrows == 1 and c.entry(0, 0) == 3


def test_companion_convention_example():
    f2z = make_field("GF(2)(Z)")
    c = companion(Poly.from_string(f2z, "X^2-X-Z"))
    assert c.entry(0, 0) == 0 and c.entry(0, 1) == f2z.element("Z")
    assert c.entry(1, 0) == 1 and c.entry(1, 1) == 1


def test_companion_characteristic_polynomial_seeded():
    # defining property: the only nontrivial invariant factor of C_f is f
    rng = random.Random(31)
    for spec in ("GF(2)", "GF(5)", "GF(9)"):
        field = make_field(spec)
        for _ in range(10):
            f = random_monic(field, rng.randrange(1, 5), rng)
            inv = invariant_factors(companion(f))
            assert len(inv) == 1 and inv[0] == f


def test_companion_rejects_non_monic():
    f3 = make_field("GF(3)")
    with pytest.raises(InputError):
        companion(Poly.from_string(f3, "2*X+1"))


# ---------------------------------------------------------------------------
# the ad operator

def test_ad_of_zero_and_identity():
    f3 = make_field("GF(3)")
    assert ad_matrix(Matrix.zeros(f3, 2)).is_zero()
    assert ad_matrix(Matrix.identity(f3, 3)).is_zero()


def test_ad_of_nilpotent_jordan_block_rank():
    # ad of the 2x2 nilpotent block: kernel is spanned by I and the block
    # itself, so the rank of the 4x4 operator matrix is exactly 2
    f2 = make_field("GF(2)")
    j = jordan_block(f2, 0, 2)
    assert ad_matrix(j).rank() == 2


def test_ad_matches_bracket_on_matrix_units():
    f3 = make_field("GF(3)")
    rng = random.Random(41)
    a = random_matrix(f3, 3, rng)
    ad = ad_matrix(a)
    m = 3
    for k in range(m):
        for l in range(m):
            unit = Matrix(f3, [[1 if (i, j) == (k, l) else 0 for j in range(m)] for i in range(m)])
            bracket = a * unit - unit * a
            col = k * m + l
            for i in range(m):
                for j in range(m):
                    assert ad.entry(i * m + j, col) == bracket.entry(i, j)


# ---------------------------------------------------------------------------
# eigenspaces

def test_eigenspace_identity():
    f2 = make_field("GF(2)")
    basis = eigenspace(Matrix.identity(f2, 3), 1)
    assert len(basis) == 3


def test_eigenspace_jordan_block():
    f3 = make_field("GF(3)")
    basis = eigenspace(jordan_block(f3, 0, 2), 0)
    assert len(basis) == 1


def test_eigenspace_of_ad_on_artin_schreier_companion():
    f2z = make_field("GF(2)(Z)")
    m = ad_matrix(companion(Poly.from_string(f2z, "X^2-X-Z")))
    assert len(eigenspace(m, f2z.element(1))) == 2


def test_eigenspace_vectors_are_actual_eigenvectors():
    rng = random.Random(43)
    f5 = make_field("GF(5)")
    a = random_matrix(f5, 4, rng)
    for lam in enumerate_elements(f5):
        shifted = a.scalar_shift(-lam)
        for vec in eigenspace(a, lam):
            image = [
                sum((shifted.entry(i, j) * vec[j] for j in range(4)), f5.zero_element())
                for i in range(4)
            ]
            assert all(x == 0 for x in image)


# ---------------------------------------------------------------------------
# invariant factors

def test_invariant_factors_jordan_sum():
    f2 = make_field("GF(2)")
    m = direct_sum(jordan_block(f2, 0, 2), jordan_block(f2, 0, 1))
    inv = invariant_factors(m)
    assert [str(f) for f in inv] == ["X", "X^2"]


def test_invariant_factors_of_ad_on_artin_schreier_companion():
    f2z = make_field("GF(2)(Z)")
    m = ad_matrix(companion(Poly.from_string(f2z, "X^2-X-Z")))
    inv = invariant_factors(m)
    expected = Poly.from_string(f2z, "X^2-X")
    assert len(inv) == 2 and all(f == expected for f in inv)


def test_invariant_factor_chain_and_degree_sum_seeded():
    rng = random.Random(47)
    for spec in ("GF(2)", "GF(3)", "GF(4)"):
        field = make_field(spec)
        for _ in range(15):
            size = rng.randrange(2, 6)
            a = random_matrix(field, size, rng)
            inv = invariant_factors(a)
            assert inv.characteristic_degree() == size
            for f, g in zip(inv, inv.factors[1:]):
                assert (g % f).is_zero()
            assert all(f.is_monic() for f in inv)


def test_invariant_factor_list_validates_chain():
    f2 = make_field("GF(2)")
    with pytest.raises(Exception):
        InvariantFactorList([Poly.from_string(f2, "X+1"), Poly.from_string(f2, "X^2+X+1")])


def _krylov_min_poly(field, a):
    """Independent minimal polynomial: first dependence among I, A, A^2, ..."""
    n = a.nrows
    p = field.char
    flat = lambda m: [int(str(m.entry(i, j))) for i in range(n) for j in range(n)]
    powers = [Matrix.identity(field, n)]
    while True:
        vecs = [flat(m) for m in powers]
        count = len(vecs)
        ncols = n * n
        aug = [v[:] + [1 if i == j else 0 for j in range(count)] for i, v in enumerate(vecs)]
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, count) if aug[i][c] % p), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            inv = pow(aug[r][c], p - 2, p)
            aug[r] = [(v * inv) % p for v in aug[r]]
            for i in range(count):
                if i != r and aug[i][c] % p:
                    f = aug[i][c]
                    aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
            r += 1
        if r < count:
            for i in range(count):
                if all(v % p == 0 for v in aug[i][:ncols]):
                    combo = aug[i][ncols:]
                    deg = max(j for j, c in enumerate(combo) if c % p)
                    inv = pow(combo[deg], p - 2, p)
                    return Poly(field, [(c * inv) % p for c in combo[: deg + 1]])
        powers.append(powers[-1] * a)


def test_minimal_polynomial_matches_independent_krylov_computation():
    rng = random.Random(2024)
    for spec in ("GF(2)", "GF(3)", "GF(5)"):
        field = make_field(spec)
        for _ in range(8):
            size = rng.randrange(2, 6)
            a = random_matrix(field, size, rng)
            assert invariant_factors(a).minimal_polynomial() == _krylov_min_poly(field, a)


# ---------------------------------------------------------------------------
# similarity

def test_similar_reflexive_and_shift_lemma():
    rng = random.Random(53)
    for spec in ("GF(3)", "GF(5)", "GF(2)(Z)"):
        field = make_field(spec)
        for _ in range(8):
            f = random_monic(field, rng.randrange(1, 4), rng)
            a = companion(f)
            assert similar(a, a)
            b = field.element(field.random_payload(rng))
            assert similar(a, companion(f.shifted(b)).scalar_shift(b))


def test_similar_distinguishes_jordan_from_zero():
    f2 = make_field("GF(2)")
    assert not similar(jordan_block(f2, 0, 2), Matrix.zeros(f2, 2))


def test_similar_is_an_equivalence_on_seeded_triples():
    rng = random.Random(59)
    f3 = make_field("GF(3)")
    mats = [random_matrix(f3, 3, rng) for _ in range(6)]
    for a in mats:
        for b in mats:
            assert similar(a, b) == similar(b, a)
            for c in mats:
                if similar(a, b) and similar(b, c):
                    assert similar(a, c)


# ---------------------------------------------------------------------------
# Pascal similarity and compositions

def test_pascal_matrix_example():
    f5 = make_field("GF(5)")
    s = pascal_similarity(Poly.from_string(f5, "X^3"), 1)
    assert [[int(str(s.entry(i, j))) for j in range(3)] for i in range(3)] == [
        [1, 1, 1],
        [0, 1, 2],
        [0, 0, 1],
    ]


def test_pascal_identity_with_zero_shift_is_identity():
    f3 = make_field("GF(3)")
    s = pascal_similarity(Poly.from_string(f3, "X^4+X+1"), 0)
    assert s == Matrix.identity(f3, 4)


def test_pascal_identity_seeded():
    rng = random.Random(61)
    for spec in ("GF(5)", "GF(9)", "GF(2)(Z)"):
        field = make_field(spec)
        for _ in range(5):
            f = random_monic(field, rng.randrange(1, 5), rng)
            b = field.element(field.random_payload(rng))
            s = pascal_similarity(f, b)  # verifies the identity internally
            assert s.nrows == f.degree()


def test_companion_composition_similarity():
    f5 = make_field("GF(5)")
    assert verify_companion_composition(
        Poly.from_string(f5, "X^2+1"), Poly.from_string(f5, "X^2")
    )
    # degree-1 outer polynomial reduces to plain similarity of companions
    assert verify_companion_composition(
        Poly.from_string(f5, "X^3+X+1"), Poly.from_string(f5, "X")
    )
    f2z = make_field("GF(2)(Z)")
    assert verify_companion_composition(
        Poly.from_string(f2z, "X^2-X-Z"), Poly.from_string(f2z, "X^2")
    )


# ---------------------------------------------------------------------------
# nilpotent Jordan types

def test_nilpotent_jordan_type_zero_and_single_block():
    f2 = make_field("GF(2)")
    assert nilpotent_jordan_type(Matrix.zeros(f2, 3)).sizes() == [1, 1, 1]
    assert nilpotent_jordan_type(jordan_block(f2, 0, 4)).sizes() == [4]


def _independent_rank_mod_p(rows, p):
    rows = [r[:] for r in rows]
    n = len(rows)
    m = len(rows[0])
    rank = 0
    for c in range(m):
        piv = next((i for i in range(rank, n) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(n):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_jordan_type_of_kronecker_action_vs_independent_oracle():
    # independent computation with plain integer arithmetic mod 2
    p = 2
    n, m = 2, 3
    big = [[0] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(m):
            row = i * m + j
            if i + 1 < n:
                big[row][(i + 1) * m + j] ^= 1
            if j + 1 < m:
                big[row][i * m + (j + 1)] ^= 1
    ranks = [n * m]
    power = [r[:] for r in big]
    while True:
        r = _independent_rank_mod_p(power, p)
        ranks.append(r)
        if r == 0:
            break
        power = [
            [sum(power[i][k] * big[k][j] for k in range(n * m)) % p for j in range(n * m)]
            for i in range(n * m)
        ]
    sizes = []
    for k in range(1, len(ranks)):
        ge_k = ranks[k - 1] - ranks[k]
        ge_k1 = ranks[k] - ranks[k + 1] if k + 1 < len(ranks) else 0
        sizes += [k] * (ge_k - ge_k1)
    assert sorted(sizes, reverse=True) == [4, 2]

    f2 = make_field("GF(2)")
    op = kron(jordan_block(f2, 0, 2), Matrix.identity(f2, 3)) + kron(
        Matrix.identity(f2, 2), jordan_block(f2, 0, 3)
    )
    assert nilpotent_jordan_type(op).sizes() == [4, 2]


def test_nilpotent_jordan_type_rejects_non_nilpotent():
    f2 = make_field("GF(2)")
    with pytest.raises(InputError):
        nilpotent_jordan_type(Matrix.identity(f2, 2))


# ---------------------------------------------------------------------------
# structural facts about ad

def test_centralizer_dimension_equals_zero_eigenspace_of_ad():
    # for a cyclic matrix the centralizer is F[A], of dimension m
    rng = random.Random(67)
    for spec in ("GF(2)", "GF(3)"):
        field = make_field(spec)
        for _ in range(8):
            f = random_monic(field, rng.randrange(2, 5), rng)
            a = companion(f)
            assert len(eigenspace(ad_matrix(a), 0)) == f.degree()


def test_eigenvalue_difference_law_over_finite_fields():
    # when the characteristic polynomial of A splits, the eigenvalues of
    # ad A are exactly the pairwise differences of those of A
    rng = random.Random(71)
    for spec in ("GF(2)", "GF(3)"):
        field = make_field(spec)
        checked = 0
        while checked < 6:
            size = rng.randrange(2, 5)
            a = random_matrix(field, size, rng)
            inv = invariant_factors(a)
            chi = Poly.one(field)
            for f in inv:
                chi = chi * f
            roots = roots_in_finite_field(chi)
            if sum(mult for _, mult in roots) != size:
                continue  # does not split; law not applicable
            checked += 1
            s_a = {r.sort_key() for r, _ in roots}
            ad = ad_matrix(a)
            ad_inv = invariant_factors(ad)
            ad_chi = Poly.one(field)
            for f in ad_inv:
                ad_chi = ad_chi * f
            ad_roots = {r.sort_key() for r, _ in roots_in_finite_field(ad_chi)}
            elems = {x.sort_key(): x for x in enumerate_elements(field)}
            diffs = {
                (elems[x] - elems[y]).sort_key() for x in s_a for y in s_a
            }
            assert ad_roots == diffs


# ---------------------------------------------------------------------------
# conversions and plumbing

def test_elementary_divisors_roundtrip():
    f3 = make_field("GF(3)")
    m = direct_sum(
        jordan_block(f3, 1, 2), jordan_block(f3, 0, 2), jordan_block(f3, 1, 1)
    )
    inv = invariant_factors(m)
    ed = elementary_divisors_from_invariant(inv)
    assert invariant_factors_from_elementary(ed) == inv


def test_poly_at_matrix():
    f5 = make_field("GF(5)")
    f = Poly.from_string(f5, "X^2+1")
    c = companion(f)
    assert poly_at_matrix(f, c).is_zero()  # Cayley-Hamilton for companions


def test_matrix_json_roundtrip():
    f4z = make_field("GF(4)(Z)")
    m = companion(Poly.from_string(f4z, "X^2+t*X+Z"))
    again = Matrix.from_json_dict(m.to_json_dict())
    assert again == m


def test_matrix_size_caps():
    f2z = make_field("GF(2)(Z)")
    with pytest.raises(CapExceededError):
        Matrix.zeros(f2z, 101)


def test_kron_shapes_and_values():
    f3 = make_field("GF(3)")
    a = Matrix(f3, [[1, 2], [0, 1]])
    b = Matrix(f3, [[2]])
    k = kron(a, b)
    assert k.nrows == 2 and k.entry(0, 1) == 1  # 2*2 = 4 = 1 mod 3
