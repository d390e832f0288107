"""DOT output and the CSV + figure report."""

from fractions import Fraction
from pathlib import Path

from impcirc.lang import compile_program, run
from impcirc.render import count_boxes, term_to_dot, write_report
from impcirc.terms import parse_term

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def test_knight_box_and_grade_port():
    dot = term_to_dot(parse_term("knight"))
    assert count_boxes(dot, "knight") == 1
    assert "grade0 [shape=point" in dot
    assert "[style=dashed]" in dot
    assert 'label="arity 0, coarity 1, grade 1"' in dot


def test_discarded_knight_dot():
    dot = term_to_dot(parse_term("(seq knight del)"))
    assert count_boxes(dot, "knight") == 1
    assert count_boxes(dot, "del") == 1
    # the knight's output feeds the del box; no boundary output ports
    assert "out0" not in dot


def test_regrade_draws_a_reindexing_box():
    dot = term_to_dot(parse_term("(regrade (inj 2->1 [0]) knight)"))
    assert count_boxes(dot, "inj 2->1 [0]") == 1
    assert "grade0" in dot and "grade1" in dot


def test_wiring_only_terms_have_no_boxes():
    dot = term_to_dot(parse_term("(swap 2 1)"))
    assert count_boxes(dot, "swap") == 0
    assert dot.count("shape=point") == 6  # three inputs, three outputs
    assert dot.count(" -> ") == 3  # one edge per wire, no boxes in between


def test_program_box_counts():
    _, term = compile_program((PROGRAMS / "boy_or_girl_2.imp").read_text())
    dot = term_to_dot(term)
    assert count_boxes(dot, "knight") == 1
    assert count_boxes(dot, "cond") == 1


def test_parameter_in_box_label():
    dot = term_to_dot(parse_term("(flip 1/3)"))
    assert count_boxes(dot, "state 1/3") == 1


def test_write_report_files(tmp_path):
    res = run((PROGRAMS / "guarded_coin.imp").read_text())
    paths = write_report(res, tmp_path, "coin")
    assert [p.name for p in paths] == ["coin_branches.csv", "coin_distribution.png"]
    csv_text = paths[0].read_text().splitlines()
    assert csv_text[0] == "branch,outcome,weight,normalized"
    assert "1,1,1,1" in csv_text
    assert "0,1,1/2,1/2" in csv_text
    assert paths[1].read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_write_report_grade_zero(tmp_path):
    res = run("observe (flip 1/2)")
    paths = write_report(res, tmp_path, "cond")
    rows = paths[0].read_text().splitlines()
    assert rows[1].startswith("-,1,1/2,1")
    assert rows[2].startswith("-,0,0,0")
