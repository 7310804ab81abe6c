"""NMR-style pulse-program parsing and compilation to 4x4 unitaries.

Program text format (UTF-8, ``#`` starts a comment to end of line,
tokens separated by whitespace):

    program := pulse*
    pulse   := AXIS TARGET '(' expr ')'        e.g.  XB(pi)   YA(phi_p + phi_m)
             | 'JAB' '(' expr ')'              scalar-coupling evolution
    AXIS    := X | Y | Z          TARGET := A | B
    expr    := numeric literals, `pi`, named parameters, binary + - * /,
               unary minus and parentheses, conventional precedence

Pulses are listed in temporal order: the first pulse in the program acts
first, so the compiled matrix is the right-to-left product of the
per-pulse matrices.

A rotation pulse compiles to exp(-i * sign_axis * (angle/2) * sigma_axis)
on its target spin and JAB(phi) to exp(-i * sign_j * (phi/2) * sigma_z^B
sigma_z^A).  The per-axis signs live in :class:`FrameConvention` because
spectrometer rotating frames disagree about them.  ``DEFAULT_FRAME``
(sign_x=-1, sign_y=+1, sign_z=+1, sign_j=-1) is the unique assignment
under which the bundled ``SPLIT_MARK_PROGRAM`` maps |00> to the marked
two-path superposition and ``PHASE_MERGE_PROGRAM`` reproduces the
phase-shift/beam-merge operator, both exactly.

Coupling angles are dimensionless accumulated phases; the conversion to
seconds, t = phi / (pi * J), lives in :mod:`whichway.measurement` where
the coupling constant is known.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace

import numpy as np

from .quantum import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, tensor

__all__ = [
    "PulseError",
    "PulseSyntaxError",
    "UnboundParameterError",
    "AngleExpr",
    "Num",
    "Param",
    "Neg",
    "BinOp",
    "Pulse",
    "PulseSequence",
    "FrameConvention",
    "DEFAULT_FRAME",
    "parse",
    "parse_angle_expr",
    "evaluate_angle",
    "pulse_matrix",
    "compile_sequence",
    "equivalent_up_to_phase",
    "u2_pulse_params",
    "SPLIT_MARK_PROGRAM",
    "PHASE_MERGE_PROGRAM",
]


class PulseError(Exception):
    """Base class for pulse-program errors."""


class PulseSyntaxError(PulseError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.pos = pos
        self.line = line
        self.column = col


class UnboundParameterError(PulseError):
    def __init__(self, name: str):
        super().__init__(f"parameter {name!r} is not bound")
        self.name = name


# ---------------------------------------------------------------------------
# angle expressions


class AngleExpr:
    """Base class for angle-expression nodes."""

    def params(self) -> frozenset[str]:
        raise NotImplementedError

    def evaluate(self, bindings: dict[str, float]) -> float:
        raise NotImplementedError

    def render(self, inner: bool = False) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Num(AngleExpr):
    value: float

    def params(self):
        return frozenset()

    def evaluate(self, bindings):
        return self.value

    def render(self, inner: bool = False):
        return repr(self.value)


@dataclass(frozen=True)
class Param(AngleExpr):
    name: str

    def params(self):
        return frozenset({self.name})

    def evaluate(self, bindings):
        try:
            return float(bindings[self.name])
        except KeyError:
            raise UnboundParameterError(self.name) from None

    def render(self, inner: bool = False):
        return self.name


@dataclass(frozen=True)
class Neg(AngleExpr):
    operand: AngleExpr

    def params(self):
        return self.operand.params()

    def evaluate(self, bindings):
        return -self.operand.evaluate(bindings)

    def render(self, inner: bool = False):
        text = f"-{self.operand.render(inner=True)}"
        return f"({text})" if inner else text


_OPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
}


@dataclass(frozen=True)
class BinOp(AngleExpr):
    op: str
    left: AngleExpr
    right: AngleExpr

    def params(self):
        return self.left.params() | self.right.params()

    def evaluate(self, bindings):
        return _OPS[self.op](self.left.evaluate(bindings), self.right.evaluate(bindings))

    def render(self, inner: bool = False):
        text = f"{self.left.render(inner=True)} {self.op} {self.right.render(inner=True)}"
        return f"({text})" if inner else text


def _as_expr(angle) -> AngleExpr:
    if isinstance(angle, AngleExpr):
        return angle
    if isinstance(angle, str):
        return parse_angle_expr(angle)
    return Num(float(angle))


# ---------------------------------------------------------------------------
# pulses and sequences


@dataclass(frozen=True)
class Pulse:
    kind: str  # "rotation" | "coupling"
    angle: AngleExpr
    axis: str | None = None  # X | Y | Z, rotations only
    target: str | None = None  # A | B, rotations only

    @classmethod
    def rotation(cls, axis: str, target: str, angle) -> "Pulse":
        if axis not in ("X", "Y", "Z"):
            raise ValueError(f"unknown axis {axis!r}")
        if target not in ("A", "B"):
            raise ValueError(f"unknown target {target!r}")
        return cls(kind="rotation", angle=_as_expr(angle), axis=axis, target=target)

    @classmethod
    def coupling(cls, angle) -> "Pulse":
        return cls(kind="coupling", angle=_as_expr(angle))

    def render(self) -> str:
        if self.kind == "coupling":
            return f"JAB({self.angle.render()})"
        return f"{self.axis}{self.target}({self.angle.render()})"


@dataclass(frozen=True)
class PulseSequence:
    pulses: tuple[Pulse, ...]
    params: dict[str, float] = field(default_factory=dict)

    def bind(self, **values: float) -> "PulseSequence":
        return replace(self, params={**self.params, **values})

    def free_params(self) -> frozenset[str]:
        names: frozenset[str] = frozenset()
        for pulse in self.pulses:
            names |= pulse.angle.params()
        return names - frozenset(self.params)

    def render(self) -> str:
        return " ".join(pulse.render() for pulse in self.pulses)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        return PulseSequence(self.pulses + other.pulses, {**self.params, **other.params})


# ---------------------------------------------------------------------------
# lexer / parser

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+|\#[^\n]*)
      | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_]\w*)
      | (?P<op>[()+\-*/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise PulseSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if match.lastgroup != "ws":
            tokens.append(_Token(match.lastgroup, match.group(), pos))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.idx = 0

    def _peek(self) -> _Token | None:
        return self.tokens[self.idx] if self.idx < len(self.tokens) else None

    def _next(self, expect: str) -> _Token:
        token = self._peek()
        if token is None:
            raise PulseSyntaxError(f"unexpected end of input, expected {expect}", self.text, len(self.text))
        self.idx += 1
        return token

    def _expect_op(self, char: str) -> None:
        token = self._next(f"'{char}'")
        if token.kind != "op" or token.text != char:
            raise PulseSyntaxError(f"expected '{char}', got {token.text!r}", self.text, token.pos)

    def parse_program(self) -> tuple[Pulse, ...]:
        pulses = []
        while self._peek() is not None:
            pulses.append(self._parse_pulse())
        return tuple(pulses)

    def _parse_pulse(self) -> Pulse:
        token = self._next("a pulse name")
        if token.kind != "name":
            raise PulseSyntaxError(f"expected a pulse name, got {token.text!r}", self.text, token.pos)
        name = token.text
        if name == "JAB":
            kind, axis, target = "coupling", None, None
        elif len(name) == 2:
            axis, target = name[0], name[1]
            if axis not in ("X", "Y", "Z"):
                raise PulseSyntaxError(f"unknown axis {axis!r}", self.text, token.pos)
            if target not in ("A", "B"):
                raise PulseSyntaxError(f"unknown target {target!r}", self.text, token.pos)
            kind = "rotation"
        else:
            raise PulseSyntaxError(f"unknown pulse {name!r}", self.text, token.pos)
        self._expect_op("(")
        angle = self.parse_expr()
        self._expect_op(")")
        return Pulse(kind=kind, angle=angle, axis=axis, target=target)

    def parse_expr(self) -> AngleExpr:
        node = self._parse_term()
        while True:
            token = self._peek()
            if token is None or token.kind != "op" or token.text not in ("+", "-"):
                return node
            self.idx += 1
            node = self._fold_binop(token, node, self._parse_term())

    def _parse_term(self) -> AngleExpr:
        node = self._parse_factor()
        while True:
            token = self._peek()
            if token is None or token.kind != "op" or token.text not in ("*", "/"):
                return node
            self.idx += 1
            node = self._fold_binop(token, node, self._parse_factor())

    def _parse_factor(self) -> AngleExpr:
        token = self._next("an expression")
        if token.kind == "op" and token.text == "-":
            operand = self._parse_factor()
            if isinstance(operand, Num):
                return Num(-operand.value)
            return Neg(operand)
        if token.kind == "op" and token.text == "(":
            node = self.parse_expr()
            self._expect_op(")")
            return node
        if token.kind == "num":
            return Num(float(token.text))
        if token.kind == "name":
            if token.text == "pi":
                return Num(math.pi)
            return Param(token.text)
        raise PulseSyntaxError(f"malformed expression at {token.text!r}", self.text, token.pos)

    def _fold_binop(self, op_token: _Token, left: AngleExpr, right: AngleExpr) -> AngleExpr:
        # literal subexpressions are reduced at parse time
        if isinstance(left, Num) and isinstance(right, Num):
            try:
                return Num(_OPS[op_token.text](left.value, right.value))
            except ZeroDivisionError:
                raise PulseSyntaxError("division by zero in angle expression", self.text, op_token.pos) from None
        return BinOp(op_token.text, left, right)


def parse(text: str) -> PulseSequence:
    """Parse pulse-program text; pulses keep their source order."""
    return PulseSequence(_Parser(text).parse_program())


def parse_angle_expr(text: str) -> AngleExpr:
    parser = _Parser(text)
    node = parser.parse_expr()
    trailing = parser._peek()
    if trailing is not None:
        raise PulseSyntaxError(f"unexpected trailing input {trailing.text!r}", text, trailing.pos)
    return node


def evaluate_angle(text: str, bindings: dict[str, float] | None = None) -> float:
    """Evaluate a standalone angle expression such as "5*pi/4"."""
    return parse_angle_expr(text).evaluate(bindings or {})


# ---------------------------------------------------------------------------
# compilation


@dataclass(frozen=True)
class FrameConvention:
    """Per-axis generator signs of the spectrometer rotating frame."""

    sign_x: int = 1
    sign_y: int = 1
    sign_z: int = 1
    sign_j: int = 1

    def __post_init__(self):
        for name in ("sign_x", "sign_y", "sign_z", "sign_j"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1")


#: Calibrated default: the unique sign assignment under which the bundled
#: programs reproduce their analytic targets (see module docstring).
DEFAULT_FRAME = FrameConvention(sign_x=-1, sign_y=1, sign_z=1, sign_j=-1)

_AXIS_SIGMA = {"X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


def pulse_matrix(pulse: Pulse, angle: float, frame: FrameConvention = DEFAULT_FRAME) -> np.ndarray:
    """4x4 matrix of a single pulse with its angle already resolved."""
    if pulse.kind == "coupling":
        p = np.exp(-0.5j * frame.sign_j * angle)
        return np.diag([p, p.conjugate(), p.conjugate(), p])
    sign = {"X": frame.sign_x, "Y": frame.sign_y, "Z": frame.sign_z}[pulse.axis]
    r = math.cos(angle / 2) * I2 - 1j * sign * math.sin(angle / 2) * _AXIS_SIGMA[pulse.axis]
    return tensor(r, I2) if pulse.target == "B" else tensor(I2, r)


def compile_sequence(seq: PulseSequence, frame: FrameConvention = DEFAULT_FRAME) -> np.ndarray:
    """Compile to the 4x4 unitary with the first-listed pulse applied first."""
    u = np.eye(4, dtype=complex)
    for pulse in seq.pulses:
        angle = pulse.angle.evaluate(seq.params)
        u = pulse_matrix(pulse, angle, frame) @ u
    return u


def equivalent_up_to_phase(u: np.ndarray, v: np.ndarray) -> float:
    """|Tr(U^dag V)| / dim: equals 1 exactly when U = exp(i a) V."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(abs(np.trace(u.conj().T @ v)) / u.shape[0])


# ---------------------------------------------------------------------------
# bundled programs

#: Beam-splitter plus path-marker preparation, listed in temporal order:
#: the two observed-spin pulses fire first (they realize the beam splitter),
#: then the coupling and marker-spin pulses label the two paths with marker
#: states at angles phi_p and phi_m.  Applied to |00> this produces
#: (|0>_B |m+>_A + |1>_B |m->_A) / sqrt(2).
SPLIT_MARK_PROGRAM = "YB(pi/2) XB(pi) XA(-pi/2) JAB(phi_m - phi_p) XA(pi/2) YA(phi_p + phi_m)"

#: Phase-shift plus beam-merge on the observed spin.  Binds theta1 and
#: theta2; use :func:`u2_pulse_params` to derive them from the
#: interferometer phase.
PHASE_MERGE_PROGRAM = "XB(-theta1) YB(theta2) XB(-theta1)"


def u2_pulse_params(phase: float) -> dict[str, float]:
    """Tip angles realizing the phase-shift/beam-merge operator at ``phase``."""
    return {
        "theta1": math.atan(-math.sin(phase)),
        "theta2": 2.0 * math.asin(-math.cos(phase) / math.sqrt(2.0)),
    }
