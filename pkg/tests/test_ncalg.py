"""Free layer: alphabet order, words, parser, maps, tensors."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpqg import coeff as C
from mpqg.cartan import build_datum
from mpqg.ncalg import (
    E_KIND,
    F_KIND,
    K_KIND,
    L_KIND,
    Alphabet,
    FreeAlgebra,
    Tensor2,
    Tensor3,
    extend_algebra_antihom,
    extend_algebra_hom,
    free_mul,
    parse_expr,
    poly_name,
    word_name,
)

A2 = build_datum("A2")
A3 = build_datum("A3")
B2 = build_datum("B2")
RF = C.RingDescriptor(A2, "generic", "formal")
FA = FreeAlgebra(A2, RF)
AB = FA.alphabet


# -- alphabet layout -----------------------------------------------------------


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "A3"])
def test_letter_blocks_are_ordered_f_l_k_e(name):
    datum = build_datum(name)
    ab = Alphabet(datum)
    N, t = ab.nroots, datum.theta
    assert ab.size == 2 * N + 4 * t
    kinds = [ab.kind(l) for l in range(ab.size)]
    assert kinds == [F_KIND] * N + [L_KIND] * 2 * t + [K_KIND] * 2 * t + [E_KIND] * N
    # F block descends the convex order, E block ascends it
    assert [ab.index(ab.F(r)) for r in range(N)] == list(range(N))
    assert [ab.index(l) for l in range(N)] == list(reversed(range(N)))
    assert [ab.index(ab.E(r)) for r in range(N)] == list(range(N))


def test_letter_names_and_inverses():
    assert AB.letter_name(AB.E_simple(0)) == "E1"
    assert AB.letter_name(AB.F_simple(1)) == "F2"
    assert AB.letter_name(AB.K(0, 1)) == "K1"
    assert AB.letter_name(AB.L(1, -1)) == "L2^-1"
    comp = next(r for r in range(AB.nroots) if not AB.roots[r].is_simple)
    assert AB.letter_name(AB.E(comp)) == f"Eroot({comp + 1})"
    for i in range(A2.theta):
        for s in (1, -1):
            assert AB.inverse_toral(AB.K(i, s)) == AB.K(i, -s)
            assert AB.inverse_toral(AB.L(i, s)) == AB.L(i, -s)
    with pytest.raises(ValueError):
        AB.inverse_toral(AB.E(0))


def test_degrees_and_toral_gamma():
    w = (AB.F_simple(0), AB.K(0, 1), AB.E_simple(1), AB.E_simple(1))
    assert AB.q_degree(w) == (-1, 2)
    eta, etap = AB.bidegree(w)
    assert eta == (1 + 1, 0) and etap == (1, 2)
    assert AB.toral_gamma(w) is None
    tw = (AB.K(0, 1), AB.K(0, 1), AB.L(1, -1))
    assert AB.toral_gamma(tw) == ((2, 0), (0, -1))


# -- the straightening order ---------------------------------------------------


def small_words(ab, max_len=3):
    letters = list(range(ab.size))
    out = [()]
    for L in range(1, max_len + 1):
        out.extend(itertools.product(letters[:: max(1, ab.size // 6)], repeat=L))
    return out


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_word_key_is_a_monoid_order(name):
    ab = Alphabet(build_datum(name))
    words = small_words(ab)
    keys = {w: ab.word_key(w) for w in words}
    # total: distinct words get distinct keys
    assert len(set(keys.values())) == len(words)
    # compatible with concatenation on both sides
    probes = words[:: max(1, len(words) // 25)]
    ctxs = [(), (0,), (ab.size - 1,), (ab.K(0, 1),)]
    for u in probes:
        for v in probes:
            if keys[u] < keys[v]:
                for a in ctxs:
                    for b in ctxs:
                        assert ab.word_key(a + u + b) < ab.word_key(a + v + b)


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_word_key_orients_descending_pairs(name):
    # every out-of-order two-letter word must sit above its sorted swap;
    # this is what lets the rewriting layer point all rules the same way
    ab = Alphabet(build_datum(name))
    for a in range(ab.size):
        for b in range(a):
            assert ab.word_key((a, b)) > ab.word_key((b, a))


def test_word_key_a3_bracket_regression():
    # F_{a2} . F_{a1+a2+a3}: the bracket expansion of the composite letter
    # begins with a larger letter than F_{a2}, so a lex reading of the
    # expansion ranks the sorted word higher; the inversion count must not
    ab = Alphabet(A3)
    comp = next(
        r for r in range(ab.nroots) if ab.roots[r].height == 3
    )
    simple = next(
        r for r in range(ab.nroots)
        if ab.roots[r].is_simple and ab.F(r) > ab.F(comp)
    )
    desc = (ab.F(simple), ab.F(comp))
    assert desc[0] > desc[1]
    assert ab.word_key(desc) > ab.word_key((desc[1], desc[0]))


# -- free polynomials ----------------------------------------------------------


def test_free_multiplication_concatenates():
    p = FA.E(0) * FA.F(1) * FA.K(0)
    assert p.support() == {(AB.E_simple(0), AB.F_simple(1), AB.K(0, 1))}
    assert (FA.one() * p - p).is_zero()
    assert (p * FA.zero()).is_zero()


def test_scalar_and_power_arithmetic():
    q = RF.q()
    p = FA.E(0).scale(q) + FA.E(0)
    assert p.coeff_of((AB.E_simple(0),)) == q + 1
    assert (FA.K(0) ** -2) == FA.word((AB.K(0, -1), AB.K(0, -1)))
    with pytest.raises(ValueError):
        FA.E(0) ** -1
    assert FA.scalar(3).as_scalar() == RF.from_scalar(3)
    with pytest.raises(ValueError):
        FA.E(0).as_scalar()


coeff_st = st.integers(min_value=-4, max_value=4)
word_st = st.lists(
    st.integers(min_value=0, max_value=AB.size - 1), max_size=3
).map(tuple)
poly_st = st.dictionaries(word_st, coeff_st, max_size=3).map(
    lambda d: FA.zero() + sum((FA.word(w, c) for w, c in d.items()), FA.zero())
)


@given(poly_st, poly_st, poly_st)
@settings(max_examples=40, deadline=None)
def test_free_algebra_axioms(p, r, s):
    assert ((p * r) * s - p * (r * s)).is_zero()
    assert (p * (r + s) - p * r - p * s).is_zero()
    assert ((p + r) * s - p * s - r * s).is_zero()


# -- parser and printer --------------------------------------------------------


def test_parse_generators_and_relations_text():
    p = parse_expr(FA, "E1*F1 - F1*E1")
    e, f = AB.E_simple(0), AB.F_simple(0)
    assert p.coeff_of((e, f)) == RF.one()
    assert p.coeff_of((f, e)) == -RF.one()


def test_parse_coefficient_variables():
    p = parse_expr(FA, "q^2*E1 - q12*E1")
    assert p.coeff_of((AB.E_simple(0),)) == RF.q(2) - RF.qij(0, 1)
    h = parse_expr(FA, "q^(1/2)*K1")
    assert h.coeff_of((AB.K(0, 1),)) == RF.q_half_power(1)


def test_parse_divided_powers_and_binomials():
    q11 = RF.qij(0, 0)
    p = parse_expr(FA, "divE(1,3)")
    assert p == FA.E(0) ** 3 / C.q_int_factorial(3, q11)
    b = parse_expr(FA, "binK(2,0,2)")
    assert b == FA.toral_binomial(K_KIND, 1, 0, 2)
    r = parse_expr(FA, "Eroot(2)")
    assert r == FA.E_root(1)


def test_parse_rejects_bad_input():
    for text in ("E9", "divE(1)", "E1 +", "q^^2"):
        with pytest.raises((ValueError, IndexError)):
            parse_expr(FA, text)


def test_poly_name_round_trips():
    q = RF.q()
    samples = [
        FA.one(),
        FA.zero(),
        FA.E(0) * FA.F(1) - FA.K(0).scale(q ** -1),
        FA.L(1, -1) * FA.L(1, -1) * FA.E(1),
        FA.word((AB.E_simple(0),) * 3, q - 1),
    ]
    for p in samples:
        assert parse_expr(FA, poly_name(p)) == p


def test_word_name_groups_powers():
    e = AB.E_simple(0)
    assert word_name(AB, (e, e, e)) == "E1^3"
    assert word_name(AB, (AB.K(0, -1), AB.K(0, -1))) == "K1^-2"
    assert word_name(AB, ()) == "1"


# -- algebra maps ----------------------------------------------------------------


def test_extend_hom_is_multiplicative():
    # a diagonal rescaling of the generators extends to an algebra map
    q = RF.q()
    images = {l: FA.gen(l).scale(q ** (l % 3)) for l in range(AB.size)}
    p = FA.E(0) * FA.F(1) + FA.K(0) * 2
    r = FA.L(1) * FA.E(1)
    lhs = extend_algebra_hom(free_mul(p, r), FA, images)
    rhs = free_mul(extend_algebra_hom(p, FA, images), extend_algebra_hom(r, FA, images))
    assert (lhs - rhs).is_zero()


def test_extend_antihom_reverses_words():
    images = {l: FA.gen(l) for l in range(AB.size)}
    w = (AB.E_simple(0), AB.F_simple(1), AB.K(1, 1))
    p = extend_algebra_antihom(FA.word(w), FA, images)
    assert p.support() == {tuple(reversed(w))}
    # and is an antihomomorphism on products
    a, b = FA.E(0) + FA.F(0), FA.K(0) * FA.E(1)
    lhs = extend_algebra_antihom(free_mul(a, b), FA, images)
    rhs = free_mul(
        extend_algebra_antihom(b, FA, images), extend_algebra_antihom(a, FA, images)
    )
    assert (lhs - rhs).is_zero()


def test_coeff_map_applies_to_coefficients():
    q = RF.q()
    images = {l: FA.gen(l) for l in range(AB.size)}
    p = FA.E(0).scale(q)
    out = extend_algebra_hom(p, FA, images, coeff_map=lambda c: c * c)
    assert out.coeff_of((AB.E_simple(0),)) == q ** 2


# -- tensors ---------------------------------------------------------------------


def test_tensor2_componentwise_product():
    x = Tensor2.pure(FA.E(0), FA.one())
    y = Tensor2.pure(FA.K(0), FA.E(1))
    xy = x * y
    assert xy.terms == Tensor2.pure(FA.E(0) * FA.K(0), FA.E(1)).terms
    assert (x * y - y * x).terms != {}
    assert x.flip().terms == Tensor2.pure(FA.one(), FA.E(0)).terms


def test_tensor2_transform_expands_linearly():
    x = Tensor2.pure(FA.E(0) + FA.F(0), FA.K(0))
    doubled = x.transform(lambda w: FA.word(w, 2), lambda w: FA.word(w))
    assert doubled.terms == x.scale(2).terms


def test_tensor3_assembly():
    t = Tensor3.pure(FA.E(0), FA.K(0), FA.one())
    s = Tensor3.pure(FA.E(0), FA.K(0), FA.one())
    assert (t - s).is_zero()
    moved = t.transform(
        lambda w: FA.word(w), lambda w: FA.word(w), lambda w: FA.K(1)
    )
    assert moved == Tensor3.pure(FA.E(0), FA.K(0), FA.K(1))
