from fractions import Fraction

import pytest

from lazbrace import freelie
from lazbrace.freelie import (
    GroupWord,
    bch_series,
    derive_inverse_words,
    dump_tables,
    evaluate_group_word,
    get_basis,
    inverse_words,
    load_tables,
    parse_tree,
    render_tree,
    tree_degree,
)

X, Y = (0,), (1,)


def _necklace_dim(n: int) -> int:
    # Witt's formula on two letters: (1/n) sum_{d|n} mu(d) 2^(n/d)
    def mobius(m):
        out, d = 1, 2
        while d * d <= m:
            if m % d == 0:
                m //= d
                if m % d == 0:
                    return 0
                out = -out
            d += 1
        return -out if m > 1 else out

    total = sum(mobius(d) * 2 ** (n // d) for d in range(1, n + 1) if n % d == 0)
    assert total % n == 0
    return total // n


def test_basis_dimensions_match_necklace_counts():
    basis = get_basis(6)
    dims = [basis.dim(d) for d in range(1, 7)]
    assert dims == [2, 1, 2, 3, 6, 9]
    assert dims == [_necklace_dim(d) for d in range(1, 7)]


def test_basis_bracketings():
    basis = get_basis(3)
    assert basis.tree[(0, 1)] == (0, 1)
    assert basis.tree[(0, 0, 1)] == (0, (0, 1))
    assert basis.tree[(0, 1, 1)] == ((0, 1), 1)


def test_bracket_antisymmetric_and_jacobi_exhaustive_c5():
    basis = get_basis(5)
    elems = {w: freelie.FreeLieElem(basis, {w: Fraction(1)}) for w in basis.words}
    for w1 in basis.words:
        for w2 in basis.words:
            if len(w1) + len(w2) > 5:
                continue
            assert elems[w1].bracket(elems[w2]) == -(elems[w2].bracket(elems[w1]))
    words = basis.words
    for a in words:
        for b in words:
            for c in words:
                if len(a) + len(b) + len(c) > 5:
                    continue
                ea, eb, ec = elems[a], elems[b], elems[c]
                j = ea.bracket(eb.bracket(ec)) + eb.bracket(ec.bracket(ea)) + ec.bracket(ea.bracket(eb))
                assert j.is_zero, (a, b, c)


def test_bch_low_degree_golden_values():
    b = bch_series(4)
    basis = get_basis(4)
    assert b.coefficient(X) == 1 and b.coefficient(Y) == 1
    assert b.coefficient((0, 1)) == Fraction(1, 2)
    assert b.coefficient((0, 0, 1)) == Fraction(1, 12)
    # the displayed term on [y,[y,x]] is the Lyndon element [[x,y],y] exactly
    assert basis.elem_of_tree((1, (1, 0))) == freelie.FreeLieElem(basis, {(0, 1, 1): Fraction(1)})
    assert b.coefficient((0, 1, 1)) == Fraction(1, 12)
    # [y,[x,[x,y]]] rewrites to -[x,[[x,y],y]], so its displayed -1/24 lands
    # as +1/24 on the Lyndon word xxyy
    assert basis.elem_of_tree((1, (0, (0, 1)))) == freelie.FreeLieElem(
        basis, {(0, 0, 1, 1): Fraction(-1)}
    )
    assert b.coefficient((0, 0, 1, 1)) == Fraction(1, 24)
    assert b.coefficient((0, 0, 0, 1)) == 0
    assert b.coefficient((0, 1, 1, 1)) == 0


def test_bch_matches_associative_log_oracle():
    # independent route: log(exp(x) exp(y)) in the free associative algebra
    for c in (3, 4, 5, 6):
        basis = get_basis(c)
        g = freelie.GroupSeries.exp(basis.gen(0))
        h = freelie.GroupSeries.exp(basis.gen(1))
        assert g.mul(h).log() == bch_series(c)


def test_bch_symbolic_identities():
    basis = get_basis(5)
    x = basis.gen(0)
    word = GroupWord(((0, Fraction(1)), (1, Fraction(1))))
    assert evaluate_group_word(word, 5, x, -x).is_zero
    assert evaluate_group_word(word, 5, x, x) == x.scale(2)


def test_bch_denominator_prime_bound():
    b = bch_series(7)
    for w, coeff in b.coeffs.items():
        n = coeff.denominator
        d = 2
        while d * d <= n:
            while n % d == 0:
                assert d <= len(w)
                n //= d
            d += 1
        if n > 1:
            assert n <= len(w)


def test_bch_truncation_consistency():
    b6 = bch_series(6)
    for c in (2, 3, 4, 5):
        assert {w: v for w, v in b6.coeffs.items() if len(w) <= c} == bch_series(c).coeffs


def _lyndon_exponents(word: GroupWord) -> dict:
    return {freelie.tree_word(t): q for t, q in word.factors}


def test_inverse_word_golden_values_sum():
    """Exponents of the displayed degree <= 4 factors, after normalizing the
    words to the Lyndon orientation (outer swaps flip the exponent sign;
    nested rewrites go through the exact bracket evaluation)."""
    P, Q = derive_inverse_words(4)
    p_exp = _lyndon_exponents(P)
    q_exp = _lyndon_exponents(Q)
    basis = get_basis(4)

    def norm(tree_text, letters=("g", "h")):
        # returns (lyndon word, sign) of a displayed bracket word
        tree = parse_tree(tree_text, letters)
        elem = basis.elem_of_tree(tree)
        assert len(elem.coeffs) == 1
        ((w, c),) = elem.coeffs.items()
        assert abs(c) == 1
        return w, c

    # the sum word: g h [g,h]^(-1/2) ... [g,[g,[g,h]]]^(-1/24) [h,[h,[g,h]]]^(1/24)
    assert p_exp[(0,)] == 1 and p_exp[(1,)] == 1
    assert p_exp[(0, 1)] == Fraction(-1, 2)
    w, s = norm("[g,[g,[g,h]]]")
    assert p_exp[w] == Fraction(-1, 24) * s
    w, s = norm("[h,[h,[g,h]]]")
    assert p_exp[w] == Fraction(1, 24) * s
    # the two degree-3 factors carry -1/12 and -1/12 in Lyndon orientation;
    # rendered right-normed they read [g,[g,h]]^(-1/12) [h,[g,h]]^(+1/12),
    # so the displayed magnitude 1/12 appears at degree 3
    assert p_exp[(0, 0, 1)] == Fraction(-1, 12)
    assert p_exp[(0, 1, 1)] == Fraction(-1, 12)
    w, s = norm("[h,[g,h]]")
    assert p_exp[w] * s == Fraction(1, 12)
    # no other degree <= 4 factors
    assert set(p_exp) == {(0,), (1,), (0, 1), (0, 0, 1), (0, 1, 1), (0, 0, 0, 1), (0, 1, 1, 1)}


def test_inverse_word_golden_values_bracket():
    """The bracket word matches its display exactly: [g,h] [g,[g,h]]^(1/2)
    [h,[g,h]]^(1/2) [g,[g,[g,h]]]^(1/3) [h,[g,[g,h]]]^(1/4) [h,[h,[g,h]]]^(1/3)."""
    _, Q = derive_inverse_words(4)
    q_exp = _lyndon_exponents(Q)
    basis = get_basis(4)

    def norm(tree_text):
        tree = parse_tree(tree_text, ("g", "h"))
        elem = basis.elem_of_tree(tree)
        ((w, c),) = elem.coeffs.items()
        assert abs(c) == 1
        return w, c

    displayed = [
        ("[g,h]", Fraction(1)),
        ("[g,[g,h]]", Fraction(1, 2)),
        ("[h,[g,h]]", Fraction(1, 2)),
        ("[g,[g,[g,h]]]", Fraction(1, 3)),
        ("[h,[g,[g,h]]]", Fraction(1, 4)),
        ("[h,[h,[g,h]]]", Fraction(1, 3)),
    ]
    seen = set()
    for text, q in displayed:
        w, s = norm(text)
        assert q_exp[w] == q * s, text
        seen.add(w)
    assert set(q_exp) == seen


def test_inverse_words_self_inversion():
    for c in (2, 3, 4, 5):
        P, Q = derive_inverse_words(c)
        basis = get_basis(c)
        assert evaluate_group_word(P, c) == basis.gen(0) + basis.gen(1)
        assert evaluate_group_word(Q, c) == basis.gen(0).bracket(basis.gen(1))


def test_inverse_word_exponent_denominators():
    P, Q = derive_inverse_words(6)
    for word in (P, Q):
        for t, q in word.factors:
            n = Fraction(q).denominator
            d = 2
            while d * d <= n:
                while n % d == 0:
                    assert d <= tree_degree(t)
                    n //= d
                d += 1
            if n > 1:
                assert n <= tree_degree(t)


def test_factor_order_non_decreasing_degree():
    P, Q = derive_inverse_words(5)
    for word in (P, Q):
        degs = [tree_degree(t) for t, _ in word.factors]
        assert degs == sorted(degs)


def test_table_serialization_round_trip():
    text = dump_tables(5)
    c, bch, P, Q = load_tables(text)
    assert c == 5
    assert bch == bch_series(5)
    assert P == derive_inverse_words(5)[0]
    assert Q == derive_inverse_words(5)[1]
    assert dump_tables(5) == text  # bit-exact round trip


def test_packaged_table_matches_fresh_derivation():
    for c in (2, 4, 6):
        P, Q = inverse_words(c)
        Pd, Qd = derive_inverse_words(c)
        assert P == Pd and Q == Qd


def test_render_and_parse_trees():
    t = (0, ((0, 1), 1))
    assert render_tree(t, ("g", "h")) == "[g,[[g,h],h]]"
    assert parse_tree("[g,[[g,h],h]]", ("g", "h")) == t
    with pytest.raises(ValueError):
        parse_tree("[g,", ("g", "h"))


def test_class_bounds_enforced():
    with pytest.raises(ValueError):
        get_basis(9)
    with pytest.raises(ValueError):
        derive_inverse_words(7)
