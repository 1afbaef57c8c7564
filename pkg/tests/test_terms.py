import pytest
from hypothesis import given, strategies as st
import numpy as np

from boolgen.errors import DimensionError, DomainError, GenerationError, TermSyntaxError
from boolgen.genset import construct_genset
from boolgen.lattice import LatticeElement, join, leq, meet
from boolgen.terms import (
    Join,
    Meet,
    SizeParams,
    TermVector,
    Var,
    eval_vector,
    evaluate,
    fold_meet,
    format_term,
    node_count,
    parse_term,
    random_term,
    random_term_vector,
)


def E(s):
    return LatticeElement.from_bitstring(s)


def set_eval(t, h):
    """Independent evaluator on sets of atom indices."""
    if isinstance(t, Var):
        return set(h[t.index - 1].atom_indices())
    left, right = set_eval(t.left, h), set_eval(t.right, h)
    return left & right if isinstance(t, Meet) else left | right


# evaluation

def test_eval_meet():
    assert evaluate(Meet(Var(1), Var(2)), (E("11"), E("01"))) == E("01")


def test_eval_projection():
    h = (E("101"), E("011"), E("000"))
    for i in range(1, 4):
        assert evaluate(Var(i), h) == h[i - 1]


def test_eval_hand_example():
    t = Join(Meet(Var(1), Var(2)), Meet(Var(1), Var(3)))
    h = (E("110"), E("011"), E("101"))
    assert set_eval(t, h) == {1, 2}
    assert evaluate(t, h) == E("110")


def test_eval_errors():
    with pytest.raises(DomainError):
        evaluate(Var(3), (E("1"), E("0")))
    with pytest.raises(DimensionError):
        evaluate(Meet(Var(1), Var(2)), (E("1"), E("01")))


def test_eval_vector():
    a, c = E("1100"), E("0110")
    assert eval_vector(TermVector(2, (Var(1), Var(2))), (a, c)) == (a, c)
    t = Meet(Var(1), Var(2))
    assert eval_vector(TermVector(2, (t,)), (a, c)) == (evaluate(t, (a, c)),)
    out = eval_vector(TermVector(2, (t, Var(2), t)), (a, c))
    assert out[0] == out[2]
    with pytest.raises(DomainError):
        eval_vector(TermVector(3, (Var(3),)), (a, c))


# syntax

def test_parse_examples():
    assert parse_term("(& x1 x2)") == Meet(Var(1), Var(2))
    assert parse_term("(| (& x1 x2) x3)") == Join(Meet(Var(1), Var(2)), Var(3))
    assert parse_term("  x7 ") == Var(7)


def test_parse_unbalanced():
    with pytest.raises(TermSyntaxError) as info:
        parse_term("(& x1")
    assert info.value.position == 5
    assert "end of input" in str(info.value)


@pytest.mark.parametrize(
    "text, position",
    [("(& x1 x2))", 9), ("(+ x1 x2)", 1), ("(& x1)", 1), ("x0", 0), ("(& x1 y)", 6), ("", 0), ("()", 1)],
)
def test_parse_errors_carry_position(text, position):
    with pytest.raises(TermSyntaxError) as info:
        parse_term(text)
    assert info.value.position == position


def test_parse_arity():
    assert parse_term("(& x1 x3)", arity=3) == Meet(Var(1), Var(3))
    with pytest.raises(TermSyntaxError):
        parse_term("(& x1 x4)", arity=3)


def test_nary_folds_left():
    assert parse_term("(| x1 x2 x3 x4)") == Join(Join(Join(Var(1), Var(2)), Var(3)), Var(4))
    assert fold_meet([Var(1), Var(2), Var(3)]) == Meet(Meet(Var(1), Var(2)), Var(3))
    assert format_term(parse_term("(& x1   x2\n x3)")) == "(& (& x1 x2) x3)"


def terms(k, max_leaves=12):
    return st.recursive(
        st.integers(1, k).map(Var),
        lambda sub: st.one_of(st.builds(Meet, sub, sub), st.builds(Join, sub, sub)),
        max_leaves=max_leaves,
    )


@given(terms(9))
def test_print_parse_round_trip(t):
    assert parse_term(format_term(t)) == t


def test_round_trip_1000_random_terms():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        t = random_term(20, int(rng.integers(0, 30)) * 2 + 1, 0.5, rng)
        text = format_term(t)
        assert parse_term(text) == t
        assert format_term(parse_term(text)) == text


# algebraic properties

def vectors(n, k):
    return st.lists(st.integers(0, 2**n - 1), min_size=k, max_size=k).map(
        lambda bs: tuple(LatticeElement(n, b) for b in bs)
    )


@given(terms(4), terms(4), vectors(16, 4))
def test_homomorphism(s, t, h):
    assert evaluate(Meet(s, t), h) == meet(evaluate(s, h), evaluate(t, h))
    assert evaluate(Join(s, t), h) == join(evaluate(s, h), evaluate(t, h))


@given(terms(4), vectors(16, 4), vectors(16, 4))
def test_terms_are_monotone(t, h, extra):
    bigger = tuple(join(a, b) for a, b in zip(h, extra))
    assert leq(evaluate(t, h), evaluate(t, bigger))


@given(terms(5), st.integers(0, 2**10 - 1))
def test_idempotent_on_constant_vectors(t, c):
    x = LatticeElement(10, c)
    assert evaluate(t, (x,) * 5) == x


@given(terms(4), vectors(12, 4))
def test_eval_matches_set_oracle(t, h):
    assert set(evaluate(t, h).atom_indices()) == set_eval(t, h)


# term vectors

def test_termvec_text_round_trip():
    p = TermVector(3, (parse_term("(& x1 x2)"), Var(3)))
    text = p.to_text()
    assert text == "termvec k=3 b=2\n(& x1 x2)\nx3\n"
    assert TermVector.from_text(text) == p


def test_termvec_validation():
    with pytest.raises(DomainError):
        TermVector(2, (Var(3),))
    with pytest.raises(DomainError):
        TermVector(2, ())
    with pytest.raises(DomainError):
        TermVector.from_text("termvec k=2 b=2\nx1\n")
    with pytest.raises(TermSyntaxError):
        TermVector.from_text("vec k=2 b=1\nx1\n")


# random generation

def test_single_node_terms_are_variables():
    p = random_term_vector(2, 3, SizeParams(1, 1, 0.5), seed=4)
    assert all(isinstance(t, Var) and 1 <= t.index <= 3 for t in p)


def test_random_term_vector_reproducible():
    a = random_term_vector(20, 7, seed=99)
    assert a == random_term_vector(20, 7, seed=99)
    assert a != random_term_vector(20, 7, seed=100)


def test_random_sizes_within_bounds():
    params = SizeParams(5, 11, 0.3)
    p = random_term_vector(200, 6, params, seed=1)
    sizes = {node_count(t) for t in p}
    assert sizes <= {5, 7, 9, 11}
    assert len(sizes) == 4


def test_join_bias_extremes():
    p = random_term_vector(30, 4, SizeParams(9, 9, 1.0), seed=2)
    assert "&" not in p.to_text()
    p = random_term_vector(30, 4, SizeParams(9, 9, 0.0), seed=2)
    assert "|" not in p.to_text()


def test_rejection_rule_with_master_key():
    h = construct_genset(6)
    p = random_term_vector(50, 4, SizeParams(5, 9, 0.5), seed=8, h=h.components)
    forbidden = set(h.components)
    for value in eval_vector(p, h.components):
        assert value not in forbidden


def test_rejection_rule_large():
    from boolgen.protocol import MasterKey

    key = MasterKey.random(200, 40, seed=1)
    p = random_term_vector(100, 40, seed=3, h=key.h.components)
    assert not set(eval_vector(p, key.h.components)) & set(key.h.components)


def test_retry_budget_exhausted():
    # with one variable every term evaluates to h_1 itself
    with pytest.raises(GenerationError):
        random_term_vector(1, 1, seed=0, h=(E("10"),), retries=50)


def test_size_params_validation():
    with pytest.raises(DomainError):
        SizeParams(4, 4, 0.5)
    with pytest.raises(DomainError):
        SizeParams(5, 3, 0.5)
    with pytest.raises(DomainError):
        SizeParams(1, 3, 1.5)
