import pytest

from domain.errors import ExpressionSyntaxError
from domain.exppoly import ONE_EXP, ZERO_EXP, ExpPoly, Poly
from domain.grammar import parse_exppoly
from sim.amalgam import EMPTY_WORD, Letter, Word
from sim.osgroup import O1_TAG, O2_TAG, O1Element, o1_letter, o2_letter
from sim.samplers import random_word
from sim.wordfile import format_letter, format_word, load_word, parse_word_text, save_word


def test_parse_letters_and_comments() -> None:
    text = """
    # a shear followed by an overshear in the second factor
    O1{g=1} * O2{f=x; g=exp(x)}
    O1{f=1}   # trailing comment
    """
    word = parse_word_text(text)
    assert word.tags() == (O1_TAG, O2_TAG, O1_TAG)
    assert word.letters[0] == o1_letter(Poly(), ONE_EXP)
    assert word.letters[1] == o2_letter(Poly.x(), parse_exppoly("exp(x)"))
    assert word.letters[2] == o1_letter(Poly.from_ints(1), ZERO_EXP)


def test_empty_file_is_identity() -> None:
    assert parse_word_text("# nothing here\n\n") == EMPTY_WORD


def test_xg_field_keeps_translation() -> None:
    word = parse_word_text("O1{xg=exp(x) - 1}")
    element = word.first.elem
    assert isinstance(element, O1Element)
    assert element.shift == parse_exppoly("exp(x) - 1")
    assert format_letter(word.first) == "O1{xg=-1 + exp(x)}"


def test_format_letter() -> None:
    assert format_letter(o1_letter(Poly(), ZERO_EXP)) == "O1{f=0; g=0}"
    assert format_letter(o2_letter(Poly.from_ints(0, 2), parse_exppoly("1 + x"))) == "O2{f=2*x; g=1 + x}"


def test_error_positions() -> None:
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_word_text("O1{g=1}\nO1{g=1 + * x}")
    assert excinfo.value.line == 2
    assert excinfo.value.column == 10

    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_word_text("O1{g=1} O3{g=1}")
    assert (excinfo.value.line, excinfo.value.column) == (1, 9)


def test_rejected_fields() -> None:
    for text in ("O1{h=1}", "O1{g=1; g=2}", "O1{g=1; xg=x}", "O1{f=exp(x)}", "O1{xg=1}", "O1{g=exp(1)}"):
        with pytest.raises(ExpressionSyntaxError):
            parse_word_text(text)


def test_constant_term_reported_with_column() -> None:
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_word_text("O2{g=exp(2 + x)}")
    assert excinfo.value.column == 10


def test_save_and_load(tmp_path, rng) -> None:
    for _ in range(10):
        word = random_word(rng, 5, 2)
        path = tmp_path / "word.txt"
        save_word(word, path)
        assert load_word(path) == word


def test_format_word_separator() -> None:
    word = Word((o1_letter(Poly(), ONE_EXP), o2_letter(Poly(), ONE_EXP)))
    assert format_word(word) == "O1{g=1} * O2{g=1}"
    assert parse_word_text(format_word(word)) == word
    assert format_word(EMPTY_WORD) == ""


def test_translation_not_divisible_round_trips() -> None:
    element = O1Element(Poly(), ExpPoly.from_poly(Poly.x()) + parse_exppoly("exp(x) - 1"))
    word = Word((Letter(O1_TAG, element),))
    assert parse_word_text(format_word(word)) == word
