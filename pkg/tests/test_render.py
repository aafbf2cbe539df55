import pytest

from codezoom.errors import RangeError
from codezoom.grammar import (
    For,
    LineRange,
    RenderOptions,
    parse,
    render,
    render_text,
    slice_range,
    splice,
)
from conftest import read_fixture


def test_canonical_layout_of_for_block():
    program = parse("GOAL: Run a 2048 game; STEPS: for (Each possible move direction;) "
                    "{ Simulate move in current direction and get score gain; }")
    text, line_map = render(program)
    assert text == (
        "GOAL: Run a 2048 game;\n"
        "STEPS:\n"
        "for (Each possible move direction;) {\n"
        "  Simulate move in current direction and get score gain;\n"
        "}\n"
    )
    assert line_map.line_count == 5


def test_indent_width_option():
    program = parse("GOAL: X; STEPS: if (A;) { B; }")
    text = render_text(program, RenderOptions(indent_width=4))
    assert "    B;" in text


def test_line_numbers_option():
    program = parse(read_fixture("pseudocode", "game_overview.pseudo"))
    text = render_text(program, RenderOptions(with_line_numbers=True))
    lines = text.split("\n")[:-1]
    assert lines[0] == " 1  GOAL: Run a 2048 game with AI support;"
    assert lines[6] == " 7    AI mode plays automatically using simple heuristic;"


def test_render_is_idempotent_through_parse():
    text = read_fixture("pseudocode", "game_expanded.pseudo")
    once = render_text(parse(text))
    assert render_text(parse(once)) == once


def test_line_map_is_total_and_consecutive():
    program = parse(read_fixture("pseudocode", "chat_cli.pseudo"))
    text, line_map = render(program)
    assert [e.line for e in line_map.entries] == list(range(1, text.count("\n") + 1))
    kinds = {e.kind for e in line_map.entries}
    assert kinds <= {"goal-header", "steps-header", "simple", "block-open",
                     "elif-open", "else-open", "block-close"}


def test_line_map_open_lines_map_one_node_each():
    program = parse(read_fixture("pseudocode", "game_expanded.pseudo"))
    _, line_map = render(program)
    opens = [e for e in line_map.entries if e.kind in ("simple", "block-open")]
    # one statement per open/simple line: paths of those entries are unique
    paths = [e.path for e in opens]
    assert len(paths) == len(set(paths))


# --- slice ---------------------------------------------------------------


def expanded():
    program = parse(read_fixture("pseudocode", "game_expanded.pseudo"))
    return (program, *render(program))


def test_slice_for_block_lines():
    program, _, line_map = expanded()
    selection = slice_range(program, line_map, LineRange(8, 10))
    assert len(selection.statements) == 1
    assert isinstance(selection.statements[0], For)
    assert selection.line_range == LineRange(8, 10)
    assert not selection.widened


def test_slice_single_simple_line():
    program, _, line_map = expanded()
    selection = slice_range(program, line_map, LineRange(9, 9))
    assert len(selection.statements) == 1
    assert selection.statements[0].description.text == \
        "Simulate move in current direction and get score gain"


def test_slice_widens_cut_block():
    program, _, line_map = expanded()
    # line 8 opens the for block without its close: widen to the whole for
    selection = slice_range(program, line_map, LineRange(8, 9))
    assert selection.widened
    assert selection.line_range == LineRange(8, 10)
    assert isinstance(selection.statements[0], For)


def test_slice_header_only_is_an_error():
    program, _, line_map = expanded()
    with pytest.raises(RangeError):
        slice_range(program, line_map, LineRange(1, 2))


def test_slice_out_of_document_is_an_error():
    program, _, line_map = expanded()
    with pytest.raises(RangeError):
        slice_range(program, line_map, LineRange(1, 99))
    with pytest.raises(RangeError):
        LineRange(0, 3)


def test_splice_replaces_selection_in_place():
    program, _, line_map = expanded()
    selection = slice_range(program, line_map, LineRange(8, 10))
    replacement = parse("GOAL: X; STEPS: Ask LLM API for the best move;").steps
    new_program = splice(program, selection, replacement)
    text = render_text(new_program)
    assert "    Ask LLM API for the best move;" in text
    assert "for (Each possible move direction;) {" not in text
    # everything outside the selection is untouched
    assert render_text(program).split("\n")[:7] == text.split("\n")[:7]
