import re
from fractions import Fraction

from src.floyd.errors import ParseError

_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")
_LETTERS_RE = re.compile(r"^\d+(?:,\d+)*$")


def parse_rational(value: str) -> Fraction:
    text = (value or "").strip()
    match = _RATIONAL_RE.match(text)
    if not match:
        raise ParseError(f"Not a rational p/q: {value!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2) or 1)
    if denominator == 0:
        raise ParseError(f"Zero denominator: {value!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_letters(value: str) -> tuple[int, ...]:
    """Comma-separated letters; empty string or `-` is the empty word."""
    text = re.sub(r"\s+", "", value or "")
    if text in ("", "-"):
        return ()
    if not _LETTERS_RE.match(text):
        raise ParseError(f"Not a letter sequence: {value!r}")
    return tuple(int(part) for part in text.split(","))


def format_letters(letters) -> str:
    return ",".join(str(letter) for letter in letters)
