import random

import pytest
from hypothesis import given, settings, strategies as st

from srgraph.safe_recursion import (EXAMPLE_PROGRAM, UNDEFINED, CompileError, DSLError,
                                    StepLimitExceeded, Stuck, agrees, compile_program,
                                    compile_source, direct_interpreter, evaluate,
                                    example_program, format_program, parse_program,
                                    random_program, random_value, unary)
from srgraph.terms import parse_term
from srgraph.verification import classify_finite_rule

HEADER = "constructors eps/0 0/0 c/2 s/1\n"


def cp_of(body):
    return compile_source(HEADER + body)


def term(cp, text):
    return parse_term(text, cp.signature)


# --- parsing ------------------------------------------------------------------

def test_parse_example_program():
    prog = parse_program(EXAMPLE_PROGRAM)
    assert prog.main == "f"
    assert [c.name for c in prog.constructors] == ["eps", "0", "c", "s"]
    assert prog.defs["g"].k == 1 and prog.defs["g"].l == 1
    assert parse_program(format_program(prog)) == prog


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6))
def test_random_programs_round_trip(seed):
    prog = random_program(random.Random(seed))
    again = parse_program(format_program(prog))
    assert again == prog
    assert format_program(again) == format_program(prog)


@pytest.mark.parametrize("text, where", [
    ("def f(x;) = bogus", (2, 13)),
    ("def f(x;) = proj q", (2, 18)),
    ("def f(x, x;) = proj x", (2, None)),
    ("nonsense", (2, 1)),
])
def test_dsl_errors_carry_position(text, where):
    with pytest.raises(DSLError) as e:
        parse_program(HEADER + text)
    assert e.value.line == where[0]
    if where[1] is not None:
        assert e.value.col == where[1]
    assert f"line {where[0]}" in str(e.value)


@pytest.mark.parametrize("body, msg", [
    ("def f(x;) = const s", "not a constant"),
    ("def f(x;) = proj 3", "out of range"),
    ("def p(x;) = pred s 1", "one safe parameter"),
    ("def q(; y) = pred s 2", "out of range"),
    ("def g(; y) = cond", "cond needs"),
    ("def i(; z) = proj z\ndef h(x; z) = comp i(x; i)", "takes 0 normal"),
    ("def i(; z) = proj z\ndef h(x; z) = comp i(; h)", "unknown or later"),
    ("def e(;) = const eps\ndef r(; z) = gen_rec { eps -> e }", "normal recursion"),
    ("def i(x; z) = proj z\ndef r(x; z) = gen_rec { eps -> i }", "must take"),
    ("def r(x;) = gen_rec { eps -> c }", "must take"),
    ("def i(; z) = proj z\ndef h(x; z) = comp nope(; i)", "unknown or later"),
    ("def f(x;) = const eps\nmain nope", "main"),
])
def test_compile_errors(body, msg):
    with pytest.raises(CompileError, match=msg):
        cp_of(body)


# --- compilation ----------------------------------------------------------------

def test_example_compiles_to_expected_shape():
    cp = example_program()
    names = {s.f.name for s in cp.provider.families}
    assert names == {"g", "f"}
    finite = {r.name for r in cp.provider.rules}
    assert finite == {"id", "l4", "l5", "h0", "k3", "h1", "e"}
    for rule in cp.provider.rules:
        kind, problems = classify_finite_rule(rule)
        assert kind in ("case1", "case2") and not problems
        assert rule.rhs_size() <= cp.d
    assert cp.d == 8
    p = cp.precedence
    for hi, lo in [("f", "h1"), ("f", "e"), ("h1", "g"), ("h1", "k3"), ("g", "id"),
                   ("g", "h0"), ("h0", "c"), ("h0", "l4"), ("h0", "l5"), ("f", "s"),
                   ("f", "0"), ("g", "eps"), ("g", "c"), ("e", "eps")]:
        assert p.gt(hi, lo), (hi, lo)
    assert cp.precedence.check_constructors_minimal(cp.signature) == []


def test_pred_is_case_one_and_cond_selects():
    cp = cp_of("def p(; x) = pred c 2\n"
               "def sel(; x, a, b, cc, d) = cond\n"
               "main sel")
    assert evaluate(cp, [], [term(cp, "c(eps, s(0))")], name="p") is term(cp, "s(0)")
    args = [term(cp, t) for t in ("0", "eps", "s(0)", "c(0, 0)")]
    for scrut, expect in [("eps", 0), ("0", 1), ("c(0, eps)", 2), ("s(s(0))", 3)]:
        got = evaluate(cp, [], [term(cp, scrut)] + args)
        assert got is args[expect]
    kinds = {r.name: classify_finite_rule(r)[0] for r in cp.provider.rules}
    assert kinds["p"] == "case1" and all(v == "case1" for v in kinds.values())


def test_pred_mismatch_is_stuck():
    cp = cp_of("def p(; x) = pred c 2")
    with pytest.raises(Stuck):
        evaluate(cp, [], [term(cp, "s(0)")])
    assert direct_interpreter(cp, [], [term(cp, "s(0)")]) is UNDEFINED


def test_const_program():
    cp = cp_of("def k(x; y) = const eps")
    assert evaluate(cp, [term(cp, "0")], [term(cp, "s(0)")]) is term(cp, "eps")
    alias = cp_of("def z(;) = const 0")
    assert evaluate(alias, [], []) is term(alias, "0")


def test_constructor_function():
    cp = cp_of("def pair(; a, b) = ctor c")
    assert evaluate(cp, [], [term(cp, "0"), term(cp, "eps")]) is term(cp, "c(0, eps)")


def test_safe_composition():
    cp = cp_of("def i1(x; y) = proj x\n"
               "def i2(x; y) = proj y\n"
               "def pair(; a, b) = ctor c\n"
               "def sw(x; y) = comp pair(; i2, i1)")
    got = evaluate(cp, [term(cp, "s(0)")], [term(cp, "eps")])
    assert got is term(cp, "c(eps, s(0))")


def test_example_evaluations():
    cp = example_program()
    y = term(cp, "c(eps, eps)")
    assert evaluate(cp, [y], [term(cp, "eps")], name="g") is y
    two = evaluate(cp, [term(cp, "s(s(0))"), y])
    assert two is term(cp, "c(c(eps, eps), c(eps, eps))")
    assert two is direct_interpreter(cp, [term(cp, "s(s(0))"), y])
    assert evaluate(cp, [term(cp, "0"), y]) is term(cp, "eps")


def test_example_output_is_exponential():
    cp = example_program()
    s, z = cp.symbol("s"), cp.symbol("0")
    y = term(cp, "c(eps, eps)")
    for m in range(1, 8):
        t = direct_interpreter(cp, [unary(m, s, z), y])
        assert t.size == 2 ** (m + 1) - 1
        assert t is evaluate(cp, [unary(m, s, z), y])


def test_step_limit():
    cp = example_program()
    s, z = cp.symbol("s"), cp.symbol("0")
    with pytest.raises(StepLimitExceeded) as e:
        evaluate(cp, [unary(3, s, z), term(cp, "c(eps, eps)")], step_limit=5)
    assert e.value.reduction is not None


def test_lazy_oracle_ignores_unused_undefined():
    # k discards its safe argument, which would be undefined
    cp = cp_of("def p(; x) = pred c 1\n"
               "def i(x; y) = proj x\n"
               "def pp(x; y) = comp p(; i)\n"
               "def k(x; y) = comp i(x; pp)")
    assert direct_interpreter(cp, [term(cp, "s(0)")], [term(cp, "eps")]) is term(cp, "s(0)")
    assert evaluate(cp, [term(cp, "s(0)")], [term(cp, "eps")]) is term(cp, "s(0)")


@settings(max_examples=80)
@given(st.integers(0, 10 ** 6))
def test_random_programs_agree_with_oracle(seed):
    rng = random.Random(seed)
    prog = random_program(rng)
    cp = compile_program(prog)
    main = prog.defs[prog.main]
    for _ in range(3):
        normals = [random_value(rng, prog.constructors, 5) for _ in range(main.k)]
        safes = [random_value(rng, prog.constructors, 5) for _ in range(main.l)]
        assert agrees(cp, normals, safes)


def test_random_value_sizes():
    rng = random.Random(3)
    cons = example_program().constructors
    for size in range(1, 12):
        t = random_value(rng, cons, size)
        assert t.is_constructor_term() and t.size <= size
