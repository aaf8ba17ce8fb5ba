"""Line-oriented pulse program text format.

One event per line::

    # comment
    pulse X 2 3 angle=pi
    pulse Y 0 2 angle=pi/2 phase=-pi/2
    grad
    delay 1e-6

Keywords are case-insensitive.  Angles are either rational multiples of pi
(``pi``, ``-pi``, ``2pi``, ``3pi/4``) kept exact, or decimal radians.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .pulses import Angle, Delay, Gradient, PulseSequence, PulseSpec, ZERO

_PI_RE = re.compile(r"^(?P<sign>[+-]?)(?P<num>\d+)?\*?pi(?:/(?P<den>\d+))?$", re.IGNORECASE)
_DEC_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")
_TOKEN_RE = re.compile(r"\S+")


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class AngleSyntaxError(ValueError):
    pass


def parse_angle(text: str) -> Angle:
    m = _PI_RE.match(text)
    if m:
        num = int(m["num"]) if m["num"] else 1
        den = int(m["den"]) if m["den"] else 1
        if den == 0:
            raise AngleSyntaxError(f"zero denominator in angle {text!r}")
        q = Fraction(num, den)
        return Angle.pi(-q if m["sign"] == "-" else q)
    if _DEC_RE.match(text):
        return Angle(float(text))
    raise AngleSyntaxError(f"malformed angle {text!r}")


def format_angle(a: Angle) -> str:
    if a.pi_multiple is None:
        return repr(float(a.radians))
    q = a.pi_multiple
    sign = "-" if q < 0 else ""
    num = abs(q.numerator)
    s = f"{sign}{'' if num == 1 else num}pi"
    if q.denominator != 1:
        s += f"/{q.denominator}"
    return s


@dataclass(frozen=True)
class _Tok:
    text: str
    col: int


def _tokens(line: str) -> list[_Tok]:
    return [_Tok(m.group(), m.start() + 1) for m in _TOKEN_RE.finditer(line)]


def _level(tok: _Tok, lineno: int) -> int:
    if not re.fullmatch(r"\d+", tok.text) or int(tok.text) > 3:
        raise ParseError(lineno, tok.col, f"bad level index {tok.text!r} (expected 0..3)")
    return int(tok.text)


def _parse_pulse(toks: list[_Tok], lineno: int, end_col: int) -> PulseSpec:
    if len(toks) < 4:
        col = toks[-1].col + len(toks[-1].text) if toks else end_col
        raise ParseError(lineno, col, "expected: pulse <X|Y> <m> <n> angle=<angle> [phase=<angle>]")
    axis_t, m_t, n_t = toks[1:4]
    if axis_t.text.upper() not in ("X", "Y"):
        raise ParseError(lineno, axis_t.col, f"unknown axis {axis_t.text!r} (expected X or Y)")
    m, n = _level(m_t, lineno), _level(n_t, lineno)
    if m >= n:
        raise ParseError(lineno, m_t.col, f"transition must be written with m < n, got {m} {n}")
    kw: dict[str, Angle] = {}
    for tok in toks[4:]:
        key, eq, value = tok.text.partition("=")
        key = key.lower()
        if not eq or key not in ("angle", "phase"):
            raise ParseError(lineno, tok.col, f"unexpected argument {tok.text!r}")
        if key in kw:
            raise ParseError(lineno, tok.col, f"duplicate {key}=")
        try:
            kw[key] = parse_angle(value)
        except AngleSyntaxError as exc:
            raise ParseError(lineno, tok.col + len(key) + 1, str(exc)) from None
    if "angle" not in kw:
        raise ParseError(lineno, end_col, "missing angle=")
    return PulseSpec(axis_t.text.upper(), m, n, kw["angle"], kw.get("phase", ZERO))


@dataclass(frozen=True)
class ParsedProgram:
    sequence: PulseSequence
    line_numbers: tuple[int, ...]


def parse_program(text: str) -> ParsedProgram:
    events, lines = [], []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw[:-1] if raw.endswith("\r") else raw
        line = line.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head = toks[0].text.lower()
        end_col = len(line.rstrip()) + 1
        if head == "pulse":
            ev = _parse_pulse(toks, lineno, end_col)
        elif head == "grad":
            if len(toks) > 1:
                raise ParseError(lineno, toks[1].col, "grad takes no arguments")
            ev = Gradient()
        elif head == "delay":
            if len(toks) != 2:
                raise ParseError(lineno, toks[0].col, "expected: delay <seconds>")
            if not _DEC_RE.match(toks[1].text) or float(toks[1].text) < 0:
                raise ParseError(lineno, toks[1].col, f"bad delay duration {toks[1].text!r}")
            ev = Delay(float(toks[1].text))
        else:
            raise ParseError(lineno, toks[0].col, f"unknown keyword {toks[0].text!r}")
        events.append(ev)
        lines.append(lineno)
    return ParsedProgram(PulseSequence(tuple(events)), tuple(lines))


def parse(text: str) -> PulseSequence:
    return parse_program(text).sequence


def format_event(ev) -> str:
    if isinstance(ev, PulseSpec):
        s = f"pulse {ev.axis} {ev.m} {ev.n} angle={format_angle(ev.angle)}"
        if ev.phase != ZERO:
            s += f" phase={format_angle(ev.phase)}"
        return s
    if isinstance(ev, Gradient):
        return "grad"
    if isinstance(ev, Delay):
        return f"delay {float(ev.duration)!r}"
    raise TypeError(f"not a sequence event: {ev!r}")


def serialize(seq) -> str:
    """Canonical program text (LF line endings, trailing newline)."""
    return "".join(format_event(ev) + "\n" for ev in seq)


def canonicalize(text: str) -> str:
    return serialize(parse(text))
