import itertools

import pytest
from hypothesis import given, strategies as st

from cogredient.localring import (
    GALOIS,
    TRUNC,
    ZMOD,
    NotASquareError,
    NotAUnitError,
    RingMismatchError,
    RingSpecError,
    add,
    canonical_nonsquare,
    decompose_nonsquare,
    inv,
    is_irreducible_mod_p,
    is_square_unit,
    is_unit,
    make_ring,
    mul,
    neg,
    scale_to,
    smallest_irreducible,
    sqrt_unit,
    sub,
)

from conftest import SMALL_RINGS


def el(spec, x):
    return make_ring(spec).element(x)


# --- independent oracles -----------------------------------------------------


def poly_mul_oracle(a, b, f, q):
    """Schoolbook product followed by long division by the monic ``x^r + f``."""
    r = len(f)
    prod = [0] * (len(a) + len(b) - 1)
    for i, j in itertools.product(range(len(a)), range(len(b))):
        prod[i + j] += a[i] * b[j]
    monic = list(f) + [1]
    while len(prod) > r:
        lead = prod.pop()
        shift = len(prod) - r
        for k in range(r):
            prod[shift + k] -= lead * monic[k]
    return tuple(c % q for c in prod)


def trunc_mul_oracle(a, b, f, p, m):
    """Dict of monomials t^i x^j, reduced by t^m = 0 and then x^r + f = 0."""
    r = len(f)
    acc = {}
    for i, j in itertools.product(range(m), range(m)):
        if i + j >= m:
            continue
        for k, l in itertools.product(range(r), range(r)):
            acc[(i + j, k + l)] = acc.get((i + j, k + l), 0) + a[i][k] * b[j][l]
    out = []
    for t in range(m):
        coeffs = [acc.get((t, d), 0) for d in range(2 * r - 1)]
        out.append(poly_mul_oracle(coeffs, [1], f, p) if r > 1 else (coeffs[0] % p,))
    return tuple(out)


def has_factor_brute(coeffs, p):
    """Trial division by every monic polynomial of degree 1 .. r//2."""
    r = len(coeffs)
    f = list(coeffs) + [1]
    for d in range(1, r // 2 + 1):
        for g in itertools.product(range(p), repeat=d):
            g = list(g) + [1]
            rem = f[:]
            while len(rem) >= len(g):
                lead = rem[-1]
                shift = len(rem) - len(g)
                for k, gc in enumerate(g):
                    rem[shift + k] = (rem[shift + k] - lead * gc) % p
                rem.pop()
            if not any(rem):
                return True
    return False


# --- make_ring ---------------------------------------------------------------


def test_make_ring_zmod9():
    R = make_ring("zmod:3^2")
    assert (R.family, R.card_R, R.card_M, R.card_units) == (ZMOD, 9, 3, 6)


def test_make_ring_gr_9_2():
    R = make_ring("gr:3^2:2")
    assert (R.family, R.card_R, R.card_M, R.card_units) == (GALOIS, 81, 9, 72)


def test_make_ring_trunc():
    R = make_ring("trunc:3:2:3")
    assert (R.family, R.card_R, R.card_M, R.card_units) == (TRUNC, 3**6, 3**4, 3**6 - 3**4)


@pytest.mark.parametrize(
    "spec",
    ["zmod:2^3", "zmod:9^1", "zmod:1^1", "gr:3^0:2", "gr:3^2:2:2,0", "gr:3^2:2:1", "trunc:3:1:0", "zmod3", "", "gr:2^1:2"],
)
def test_make_ring_errors(spec):
    with pytest.raises(RingSpecError):
        make_ring(spec)


def test_explicit_polynomial():
    R = make_ring("gr:3^2:2:2,2")  # x^2 + 2x + 2 is irreducible mod 3
    assert R.defining_poly == (2, 2)
    assert R.spec == "gr:3^2:2:2,2"
    assert R != make_ring("gr:3^2:2")
    # x * x = -2 - 2x
    assert R.mul((0, 1), (0, 1)) == (7, 7)


def test_spec_canonical_round_trip():
    for spec in SMALL_RINGS:
        R = make_ring(spec)
        assert make_ring(R.spec) == R


def test_context_is_immutable():
    R = make_ring("zmod:3")
    with pytest.raises(AttributeError):
        R.p = 5


@pytest.mark.parametrize("p,r", [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)])
def test_irreducibility_against_trial_division(p, r):
    for coeffs in itertools.product(range(p), repeat=r):
        assert is_irreducible_mod_p(coeffs, p) == (not has_factor_brute(coeffs, p))


def test_default_polynomials():
    # x^2 + 1 is the first irreducible quadratic over F_3 (x^2, x^2 + x, x^2 + 2x all have root 0)
    assert smallest_irreducible(3, 2) == (1, 0)
    # over F_5: x^2 + 1 splits (-1 = 2^2), x^2 + x + 1 has non-square discriminant -3
    assert smallest_irreducible(5, 2) == (1, 1)
    assert smallest_irreducible(3, 1) == (0,)


# --- arithmetic --------------------------------------------------------------


def test_zmod_examples():
    assert el("zmod:3^2", 5) + el("zmod:3^2", 7) == el("zmod:3^2", 3)
    assert mul(el("zmod:3^2", 5), el("zmod:3^2", 7)) == el("zmod:3^2", 8)
    assert sub(el("zmod:3^2", 2), el("zmod:3^2", 5)) == el("zmod:3^2", 6)
    assert neg(el("zmod:3^2", 1)) == el("zmod:3^2", 8)


def test_gr_x_squared():
    R = make_ring("gr:3^2:2")
    x = R.element([0, 1])
    assert (x * x).value == poly_mul_oracle((0, 1), (0, 1), R.defining_poly, 9) == (8, 0)


@pytest.mark.parametrize("spec", ["gr:3^2:2", "gr:5^2:2", "gr:3^1:3", "gr:3^2:3", "gr:3^2:2:2,2"])
def test_gr_mul_matches_polynomial_oracle(spec):
    R = make_ring(spec)
    els = list(R.elements())
    for a in els[:: max(1, len(els) // 40)]:
        for b in els[:: max(1, len(els) // 37)]:
            assert R.mul(a, b) == poly_mul_oracle(a, b, R.defining_poly, R.q)


@pytest.mark.parametrize("spec", ["trunc:3:1:2", "trunc:3:2:2", "trunc:5:1:3", "trunc:3:2:3"])
def test_trunc_mul_matches_monomial_oracle(spec):
    R = make_ring(spec)
    els = list(R.elements())
    for a in els[:: max(1, len(els) // 30)]:
        for b in els[:: max(1, len(els) // 29)]:
            assert R.mul(a, b) == trunc_mul_oracle(a, b, R.defining_poly, R.p, R.m)


def test_mismatched_rings():
    with pytest.raises(RingMismatchError):
        add(el("zmod:3", 1), el("zmod:5", 1))
    with pytest.raises(RingMismatchError):
        mul(el("zmod:3", 1), el("zmod:3^2", 1))


@st.composite
def ring_and_elements(draw, k=3):
    R = make_ring(draw(st.sampled_from(SMALL_RINGS)))
    els = list(R.elements())
    return (R,) + tuple(R.element(draw(st.sampled_from(els))) for _ in range(k))


@given(ring_and_elements())
def test_ring_axioms(args):
    R, a, b, c = args
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + neg(a) == R.element(R.zero) == a - a
    assert a * R.element(R.one) == a


@given(ring_and_elements(k=2))
def test_table_arithmetic_agrees_with_direct(args):
    R, a, b = args
    if R.family == ZMOD:
        return
    direct = type(R).mul
    assert R.mul(a.value, b.value) == direct(R, a.value, b.value)
    assert R.add(a.value, b.value) == type(R).add(R, a.value, b.value)


# --- units and squares -------------------------------------------------------


@pytest.mark.parametrize("x,expected", [(2, True), (3, False), (0, False), (1, True), (6, False)])
def test_is_unit_zmod9(x, expected):
    assert is_unit(el("zmod:3^2", x)) is expected


def test_is_unit_gcd_oracle():
    from math import gcd

    R = make_ring("zmod:3^3")
    for a in R.elements():
        assert R.is_unit(a) == (gcd(a, 27) == 1)


def test_unit_iff_residue_nonzero(ring):
    units = set(ring.units())
    # units are exactly the elements with a multiplicative inverse
    brute = {a for a in ring.elements() if any(ring.mul(a, b) == ring.one for b in ring.elements())}
    assert units == brute
    assert len(units) == ring.card_units


def test_inv_examples():
    assert inv(el("zmod:3^2", 2)) == el("zmod:3^2", 5)
    assert inv(el("zmod:3^2", 7)) == el("zmod:3^2", 4)
    for spec in SMALL_RINGS:
        R = make_ring(spec)
        assert inv(R.element(R.one)).value == R.one


def test_inv_brute_force(ring):
    for u in ring.units():
        c = ring.inv(u)
        assert ring.mul(u, c) == ring.one
        assert [b for b in ring.elements() if ring.mul(u, b) == ring.one] == [c]


def test_inv_non_unit():
    with pytest.raises(NotAUnitError):
        inv(el("zmod:3^2", 3))


def test_is_square_examples():
    assert is_square_unit(el("zmod:3^2", 4))
    assert not is_square_unit(el("zmod:3^2", 2))
    assert {a for a in range(9) if a % 3 and is_square_unit(el("zmod:3^2", a))} == {1, 4, 7}
    with pytest.raises(NotAUnitError):
        is_square_unit(el("zmod:3^2", 3))


def test_square_membership_exhaustive(ring):
    squares = {ring.mul(u, u) for u in ring.units()}
    assert 2 * len(squares) == ring.card_units
    for u in ring.units():
        assert ring.is_square_unit(u) == (u in squares)


def test_kernel_of_squaring_is_plus_minus_one(ring):
    roots = [u for u in ring.units() if ring.mul(u, u) == ring.one]
    assert sorted(roots) == sorted([ring.one, ring.neg(ring.one)])


def test_unit_plus_maximal_is_unit(ring):
    units = list(ring.units())
    ideal = [a for a in ring.elements() if not ring.is_unit(a)]
    assert len(ideal) == ring.card_M
    for u in units[:50]:
        for a in ideal:
            assert ring.is_unit(ring.add(u, a))


def test_sqrt_examples():
    assert sqrt_unit(el("zmod:3^2", 7)) == el("zmod:3^2", 4)
    assert sqrt_unit(el("zmod:5", 4)) == el("zmod:5", 2)
    for spec in SMALL_RINGS:
        R = make_ring(spec)
        assert R.sqrt(R.one) == R.one
    with pytest.raises(NotASquareError):
        sqrt_unit(el("zmod:3^2", 2))


def test_sqrt_is_smallest_root(ring):
    for u in ring.units():
        if ring.is_square_unit(u):
            roots = [w for w in ring.units() if ring.mul(w, w) == u]
            assert len(roots) == 2
            assert ring.sqrt(u) == min(roots)


@pytest.mark.parametrize("spec", ["zmod:3^6", "zmod:13^3", "gr:5^3:2", "trunc:7:2:3", "zmod:17^2"])
def test_sqrt_large_rings_randomized(spec):
    import random

    R = make_ring(spec)
    rng = random.Random(spec)
    els = list(R.elements()) if R.card_R < 10**5 else None
    for _ in range(200):
        w = rng.choice(els) if els else R.from_int(rng.randrange(R.card_R))
        if not R.is_unit(w):
            continue
        s = R.sqrt(R.mul(w, w))
        assert R.mul(s, s) == R.mul(w, w)
        assert s in (w, R.neg(w))


def test_canonical_nonsquare_examples():
    assert canonical_nonsquare(make_ring("zmod:3")).value == 2
    assert canonical_nonsquare(make_ring("zmod:3^2")).value == 2
    assert canonical_nonsquare(make_ring("zmod:5")).value == 2
    assert canonical_nonsquare(make_ring("zmod:7")).value == 3


def test_canonical_nonsquare_is_first(ring):
    squares = {ring.mul(u, u) for u in ring.units()}
    first = next(u for u in ring.elements() if ring.is_unit(u) and u not in squares)
    assert ring.z == first


# --- constructive propositions -----------------------------------------------


def test_scale_to_examples():
    R = make_ring("zmod:3^2")
    assert scale_to(R.element(1), R.element(3)) == R.element(4)
    assert scale_to(R.element(2), R.element(3)) == R.element(7)
    assert scale_to(R.element(5), R.element(0)) == R.element(1)


def test_scale_to_contract(ring):
    ideal = [a for a in ring.elements() if not ring.is_unit(a)]
    for u in list(ring.units())[:40]:
        for a in ideal[:20]:
            U, A = ring.element(u), ring.element(a)
            c = scale_to(U, A)
            assert is_unit(c)
            assert c * c * (U + A) == U


def test_scale_to_errors():
    R = make_ring("zmod:3^2")
    with pytest.raises(NotAUnitError):
        scale_to(R.element(3), R.element(3))
    with pytest.raises(ValueError):
        scale_to(R.element(1), R.element(1))


def test_one_plus_square_is_unit_when_minus_one_nonsquare(ring):
    if ring.minus_one_is_square:
        pytest.skip("-1 is a square")
    for u in ring.units():
        assert ring.is_unit(ring.add(ring.one, ring.mul(u, u)))


def test_decompose_examples():
    assert decompose_nonsquare(el("zmod:3", 2)) == (el("zmod:3", 1), el("zmod:3", 1))
    assert decompose_nonsquare(el("zmod:3^2", 2)) == (el("zmod:3^2", 1), el("zmod:3^2", 1))
    assert decompose_nonsquare(el("zmod:3^2", 5)) == (el("zmod:3^2", 1), el("zmod:3^2", 4))


def test_decompose_contract(ring):
    if ring.minus_one_is_square:
        with pytest.raises(ValueError):
            decompose_nonsquare(ring.element(ring.z))
        return
    for z in ring.units():
        if ring.is_square_unit(z):
            with pytest.raises(NotASquareError):
                decompose_nonsquare(ring.element(z))
            continue
        Z = ring.element(z)
        x, y = decompose_nonsquare(Z)
        assert is_unit(x) and is_unit(y)
        assert (1 + x * x) * y * y == Z


def test_determinism_within_process():
    for spec in SMALL_RINGS:
        a, b = make_ring(spec), make_ring(spec)
        assert a.z == b.z
        assert [a.sqrt(a.mul(u, u)) for u in a.units()] == [b.sqrt(b.mul(u, u)) for u in b.units()]
