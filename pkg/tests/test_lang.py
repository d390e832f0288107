"""Surface language: parsing, typing, compilation, golden programs."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from impcirc.errors import ParseError, TypingError
from impcirc.lang import (
    BOOL,
    BoolT,
    Flip,
    If,
    Knight,
    Let,
    Observe,
    Pair,
    ProdT,
    Snd,
    Var,
    compile_program,
    copy_context,
    format_run_result,
    mux,
    parse_program,
    run,
    run_result_json,
    type_width,
    typecheck,
)
from impcirc.semantics import evaluate
from impcirc.stoch import bits_to_index, index_to_bits
from impcirc.terms import Profile, infer_profile

F = Fraction
PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


# ---------------------------------------------------------------- parsing

def test_parse_basic_forms():
    assert parse_program("flip 1/3") == Flip(F(1, 3))
    assert parse_program("flip 0.5") == Flip(F(1, 2))
    assert parse_program("knight") == Knight()
    assert parse_program("(knight, flip 1)") == Pair(Knight(), Flip(F(1)))
    assert parse_program("snd (knight, flip 1)") == Snd(Pair(Knight(), Flip(F(1))))
    assert parse_program("let x = knight in x") == Let("x", Knight(), Var("x"))
    assert parse_program("if knight then flip 1 else flip 0") == If(
        Knight(), Flip(F(1)), Flip(F(0))
    )
    assert parse_program("observe (if knight then x else y)") == Observe(
        If(Knight(), Var("x"), Var("y"))
    )
    assert parse_program("# only a comment\nknight") == Knight()


def test_wildcard_binders_are_fresh():
    e = parse_program("let _ = knight in let _ = knight in flip 1")
    assert isinstance(e, Let) and isinstance(e.body, Let)
    assert e.name != e.body.name
    assert e.name.startswith("_%")  # cannot collide with source identifiers


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse_program("let x = flip 1/2 in\n  x x")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_program("flip 2")  # bias above one
    with pytest.raises(ParseError):
        parse_program("flip 2.5/3")  # malformed literal
    with pytest.raises(ParseError):
        parse_program("let = knight in flip 1")
    with pytest.raises(ParseError):
        parse_program("observe")
    with pytest.raises(ParseError):
        parse_program("if knight then flip 1")
    with pytest.raises(ParseError):
        parse_program("knight $")


# ----------------------------------------------------------------- typing

def test_types_and_grades():
    te = typecheck(parse_program("(knight, (flip 1/2, knight))"))
    assert te.type == ProdT(BOOL, ProdT(BOOL, BOOL))
    assert te.grade == 2
    assert type_width(te.type) == 3
    te = typecheck(parse_program("if knight then knight else flip 1"))
    assert te.grade == 2
    te = typecheck(parse_program("let x = knight in observe x"))
    assert te.grade == 1 and te.type == BOOL


def test_typing_errors():
    with pytest.raises(TypingError):
        typecheck(parse_program("x"))
    with pytest.raises(TypingError):
        typecheck(parse_program("let x = flip 1 in let x = flip 0 in x"))
    with pytest.raises(TypingError):
        typecheck(parse_program("if (knight, knight) then flip 1 else flip 0"))
    with pytest.raises(TypingError):
        typecheck(parse_program("if knight then flip 1 else (flip 0, flip 0)"))
    with pytest.raises(TypingError):
        typecheck(parse_program("fst knight"))


# ------------------------------------------------------------ compilation

def test_mux_truth_table():
    for n in (1, 2):
        m = evaluate(mux(n)).matrix
        assert m.in_wires == 2 * n + 1 and m.out_wires == n
        for col in range(1 << (2 * n + 1)):
            bits = index_to_bits(2 * n + 1, col)
            g, x, y = bits[0], bits[1 : n + 1], bits[n + 1 :]
            want = bits_to_index(x if g else y)
            assert m.rows[want][col] == 1


def test_mux_on_equal_bundles_is_discard():
    # when both data bundles agree the guard is irrelevant
    m = evaluate(mux(1)).matrix
    for g in (0, 1):
        for v in (0, 1):
            col = bits_to_index((g, v, v))
            assert m.rows[bits_to_index((v,))][col] == 1


def test_copy_context_duplicates():
    for k in (0, 1, 2, 3):
        m = evaluate(copy_context(k)).matrix
        for col in range(1 << k):
            bits = index_to_bits(k, col)
            assert m.rows[bits_to_index(bits + bits)][col] == 1


def test_compile_profiles():
    te, term = compile_program("let x = knight in (x, observe x)")
    assert infer_profile(term) == Profile(0, 2, 1)
    assert te.grade == 1
    te, term = compile_program("if knight then knight else flip 1/2")
    assert infer_profile(term) == Profile(0, 1, 2)


def test_observe_conditions_variable():
    res = run("let x = flip 1/3 in let _ = observe x in x")
    (b,) = res.branches
    assert b.dist == {"1": F(1, 3), "0": 0}
    assert b.mass == F(1, 3)
    assert b.normalized == {"1": 1, "0": 0}


def test_observe_dead_branch():
    res = run("let x = flip 0 in observe x")
    (b,) = res.branches
    assert b.mass == 0 and b.normalized is None


def test_if_makes_branches_not_mixtures():
    res = run("if knight then flip 1 else flip 1/2")
    assert res.grade == 1
    one, zero = res.branches
    assert one.bits == "1" and one.dist == {"1": 1, "0": 0}
    assert zero.bits == "0" and zero.dist == {"1": F(1, 2), "0": F(1, 2)}


# ---------------------------------------------------------------- goldens

def test_golden_single_witness():
    res = run((PROGRAMS / "boy_or_girl_1.imp").read_text())
    assert res.grade == 0
    (b,) = res.branches
    assert b.dist == {"11": F(1, 4), "10": F(1, 4), "01": F(1, 4), "00": 0}
    assert b.mass == F(3, 4)
    assert b.normalized == {"11": F(1, 3), "10": F(1, 3), "01": F(1, 3), "00": 0}


def test_golden_nondeterministic_witness():
    res = run((PROGRAMS / "boy_or_girl_2.imp").read_text())
    assert res.grade == 1
    older, younger = res.branches
    assert older.bits == "1"
    assert older.dist == {"11": F(1, 4), "10": F(1, 4), "01": 0, "00": 0}
    assert older.normalized == {"11": F(1, 2), "10": F(1, 2), "01": 0, "00": 0}
    assert younger.bits == "0"
    assert younger.dist == {"11": F(1, 4), "10": 0, "01": F(1, 4), "00": 0}
    assert younger.normalized == {"11": F(1, 2), "10": 0, "01": F(1, 2), "00": 0}


def test_golden_guarded_coin():
    res = run((PROGRAMS / "guarded_coin.imp").read_text())
    one, zero = res.branches
    assert one.dist == {"1": 1, "0": 0}
    assert zero.dist == {"1": F(1, 2), "0": F(1, 2)}
    te, term = compile_program((PROGRAMS / "guarded_coin.imp").read_text())
    assert evaluate(term).matrix.rows == ((F(1), F(1, 2)), (F(0), F(1, 2)))


# ------------------------------------------------------------------ output

def test_run_result_json_is_stable():
    src = (PROGRAMS / "guarded_coin.imp").read_text()
    a = json.dumps(run_result_json(run(src)), sort_keys=True)
    b = json.dumps(run_result_json(run(src)), sort_keys=True)
    assert a == b
    assert a == (
        '{"branches": [{"bits": "1", "dist": {"0": "0", "1": "1"}, "mass": "1",'
        ' "normalized": {"0": "0", "1": "1"}},'
        ' {"bits": "0", "dist": {"0": "1/2", "1": "1/2"}, "mass": "1",'
        ' "normalized": {"0": "1/2", "1": "1/2"}}],'
        ' "grade": 1, "type": "B"}'
    )


def test_format_run_result_grade_zero_label():
    text = format_run_result(run("flip 1/2"))
    assert "branch -:" in text
    assert "type: B" in text
