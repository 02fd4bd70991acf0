"""Text format for overshear words.

One or more letters per line, ``O1{f=<poly>; g=<expr>}`` or ``O2{...}``, read left to
right as a product. ``xg=<expr>`` may replace ``g=`` to give the z-translation
directly. Blank lines and ``#`` comments are ignored; ``*`` between letters is
optional.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Dict, List, Tuple

from domain.errors import ConstantTermError, ExpressionSyntaxError, InvalidElementError
from domain.exppoly import ZERO_EXP, ExpPoly, ep_as_poly
from domain.grammar import format_exppoly, format_poly, parse_exppoly
from sim.amalgam import Letter, Word
from sim.osgroup import O1_TAG, O2_TAG, O1Element, O2Element, o1_element

LOGGER = logging.getLogger("sim.wordfile")

_LETTER = re.compile(r"(?P<tag>O[12])\s*\{(?P<body>[^{}]*)\}")
_SEPARATOR = re.compile(r"[\s*]*")
_FIELDS = ("f", "g", "xg")


def _syntax_error(message: str, line: int, column: int) -> ExpressionSyntaxError:
    return ExpressionSyntaxError(message, position=column - 1, line=line, column=column)


def _parse_body(body: str, line: int, body_column: int) -> O1Element:
    values: Dict[str, Tuple[str, int]] = {}
    offset = 0
    for chunk in body.split(";"):
        chunk_column = body_column + offset
        column = chunk_column + (len(chunk) - len(chunk.lstrip()))
        offset += len(chunk) + 1
        if not chunk.strip():
            continue
        name, sep, text = chunk.partition("=")
        key = name.strip()
        if not sep or key not in _FIELDS:
            raise _syntax_error(f"expected one of f=, g=, xg=, found {chunk.strip()!r}", line, column)
        if key in values:
            raise _syntax_error(f"duplicate field {key!r}", line, column)
        values[key] = (text, chunk_column + len(name) + 1)
    if "g" in values and "xg" in values:
        raise _syntax_error("give either g= or xg=, not both", line, body_column)

    parsed: Dict[str, ExpPoly] = {}
    for key, (text, column) in values.items():
        try:
            parsed[key] = parse_exppoly(text)
        except ExpressionSyntaxError as exc:
            raise _syntax_error(exc.message, line, column + exc.position) from exc
        except ConstantTermError as exc:
            position = exc.position if exc.position is not None else 0
            raise _syntax_error(str(exc), line, column + position) from exc

    f_value = parsed.get("f", ZERO_EXP)
    f_poly = ep_as_poly(f_value)
    if f_poly is None:
        raise _syntax_error("f must be a polynomial in x", line, values["f"][1])
    if "xg" in parsed:
        try:
            return O1Element(f_poly, parsed["xg"])
        except InvalidElementError as exc:
            raise _syntax_error(str(exc), line, values["xg"][1]) from exc
    return o1_element(f_poly, parsed.get("g", ZERO_EXP))


def parse_word_text(text: str) -> Word:
    letters: List[Letter] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        index = 0
        while True:
            index = _SEPARATOR.match(content, index).end()
            if index >= len(content):
                break
            match = _LETTER.match(content, index)
            if match is None:
                raise _syntax_error(
                    f"expected O1{{...}} or O2{{...}}, found {content[index:].strip()!r}",
                    line_number,
                    index + 1,
                )
            element = _parse_body(match.group("body"), line_number, match.start("body") + 1)
            tag = match.group("tag")
            letters.append(Letter(tag, element if tag == O1_TAG else O2Element(element)))
            index = match.end()
    LOGGER.debug("parsed word with %d letters", len(letters))
    return Word(tuple(letters))


def load_word(path: Path | str) -> Word:
    return parse_word_text(Path(path).read_text(encoding="utf-8"))


def _format_element(element: O1Element) -> str:
    parts = []
    if not element.f.is_zero:
        parts.append(f"f={format_poly(element.f, 'x')}")
    if element.has_g:
        if not element.shift.is_zero:
            parts.append(f"g={format_exppoly(element.g)}")
    else:
        parts.append(f"xg={format_exppoly(element.shift)}")
    return "; ".join(parts) if parts else "f=0; g=0"


def format_letter(letter: Letter) -> str:
    if letter.tag == O1_TAG and isinstance(letter.elem, O1Element):
        return f"O1{{{_format_element(letter.elem)}}}"
    if letter.tag == O2_TAG and isinstance(letter.elem, O2Element):
        return f"O2{{{_format_element(letter.elem.inner)}}}"
    raise InvalidElementError(f"cannot format letter with tag {letter.tag!r}")


def format_word(word: Word, separator: str = " * ") -> str:
    return separator.join(format_letter(letter) for letter in word.letters)


def save_word(word: Word, path: Path | str) -> None:
    Path(path).write_text(format_word(word, "\n") + "\n", encoding="utf-8")


__all__ = [
    "parse_word_text",
    "load_word",
    "save_word",
    "format_letter",
    "format_word",
]
