import math

import pytest
from hypothesis import given, settings, strategies as st

from lietransport.fieldexpr import (
    Binary,
    Const,
    EvaluationError,
    ParseError,
    Unary,
    Var,
    compile_expr,
    evaluate,
    parse,
    pretty,
    same_structure,
)

from corpus import GOLDEN, HAND, PARAMS, POINTS, oracle


def ev(src, t=0.0, x=(0.0, 0.0, 0.0), params=PARAMS):
    return evaluate(parse(src, params), t, x, params)


def test_precedence_and_spec_examples():
    assert ev("1+2*3") == 7
    assert ev("gam*x2", x=(0, 1, 0), params={"gam": 2.0}) == 2
    assert abs(ev("sin(t)^2+cos(t)^2", t=0.37) - 1.0) <= 1e-15
    assert ev("3.5") == 3.5
    assert ev("exp(-3*a*t)", t=math.log(2), params={"a": 1.0}) == pytest.approx(0.125, abs=1e-15)


def test_unbalanced_paren_error_position():
    with pytest.raises(ParseError) as info:
        parse("x1*(2+")
    assert info.value.position == 6
    assert "number" in info.value.expected


@pytest.mark.parametrize(
    "src, pos",
    [
        ("", 0),
        ("   ", 0),
        ("x1 +", 4),
        ("foo*2", 0),
        ("x1 x2", 3),
        ("(x1", 3),
        ("x1)", 2),
        ("sin x1", 4),
        ("2 # 3", 2),
        ("1e999", 0),
        ("*3", 0),
    ],
)
def test_parse_errors_are_positioned(src, pos):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.position == pos
    assert 0 <= info.value.position <= len(src) + 1


def test_tree_shape():
    e = parse("-2^2")
    assert e == Unary("neg", Binary("^", Const(2.0, 1), Const(2.0, 3), 2), 0)
    e = parse("2^3^2")
    assert isinstance(e.right, Binary) and e.right.op == "^"
    e = parse("x1-x2-x3")
    assert isinstance(e.left, Binary) and e.left.op == "-"
    assert parse("gam", ["gam"]) == Var("gam", 0)


@pytest.mark.parametrize("src, t, x, expected", HAND)
def test_hand_computed_values(src, t, x, expected):
    assert ev(src, t, x) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("src", GOLDEN)
def test_golden_corpus_matches_python(src):
    e = parse(src, PARAMS)
    f = compile_expr(e, PARAMS)
    for t, x in POINTS:
        want = oracle(src, t, x)
        assert evaluate(e, t, x, PARAMS) == want
        assert f(t, x) == want


@pytest.mark.parametrize("src", GOLDEN)
def test_pretty_round_trip(src):
    e = parse(src, PARAMS)
    again = parse(pretty(e), PARAMS)
    assert same_structure(e, again)


def test_corpus_size():
    assert len(GOLDEN) == 50
    assert len(HAND) == 20


@pytest.mark.parametrize(
    "src, x",
    [
        ("log(x1)", (-1.0, 0, 0)),
        ("log(x1)", (0.0, 0, 0)),
        ("sqrt(x1)", (-1.0, 0, 0)),
        ("1/x1", (0.0, 0, 0)),
        ("x1^(-1)", (0.0, 0, 0)),
        ("x1^0.5", (-2.0, 0, 0)),
        ("exp(x1)", (1000.0, 0, 0)),
        ("x1^x1", (1e10, 0, 0)),
    ],
)
def test_domain_violations_raise(src, x):
    e = parse(src)
    with pytest.raises(EvaluationError):
        evaluate(e, 0.0, x)
    with pytest.raises(EvaluationError):
        compile_expr(e)(0.0, x)


def test_domain_error_carries_node_position():
    with pytest.raises(EvaluationError) as info:
        evaluate(parse("1 + log(x1)"), 0.0, (-1.0, 0, 0))
    assert info.value.position == 4


def test_unbound_parameter():
    e = parse("gam*x1", ["gam"])
    with pytest.raises(EvaluationError):
        evaluate(e, 0.0, (1, 0, 0), {})
    with pytest.raises(EvaluationError):
        compile_expr(e, {})


def test_params_cannot_shadow_builtins():
    with pytest.raises(ValueError):
        parse("t", ["t"])


def test_deep_nesting_is_an_error_not_a_crash():
    src = "(" * 300 + "1" + ")" * 300
    with pytest.raises(ParseError):
        parse(src)
    with pytest.raises(ParseError):
        parse("-" * 300 + "1")
    assert ev("(" * 40 + "1" + ")" * 40) == 1.0


ALPHABET = "0123456789.eE+-*/^() x123tgamsincoexplqrtbp_,#"


@settings(max_examples=2000, deadline=None)
@given(st.text(alphabet=ALPHABET, max_size=256))
def test_fuzz_only_positioned_parse_errors(src):
    try:
        e = parse(src, ["gam"])
    except ParseError as exc:
        assert 0 <= exc.position <= len(src) + 1
        return
    # anything that parses must also survive a round trip
    assert same_structure(e, parse(pretty(e), ["gam"]))


@settings(max_examples=300, deadline=None)
@given(
    st.floats(-5, 5, allow_nan=False),
    st.floats(-5, 5, allow_nan=False),
    st.floats(-5, 5, allow_nan=False),
)
def test_compiled_matches_tree_walk(x1, x2, t):
    for src in GOLDEN:
        e = parse(src, PARAMS)
        try:
            want = evaluate(e, t, (x1, x2, 0.5), PARAMS)
        except EvaluationError:
            with pytest.raises(EvaluationError):
                compile_expr(e, PARAMS)(t, (x1, x2, 0.5))
            continue
        assert compile_expr(e, PARAMS)(t, (x1, x2, 0.5)) == want
