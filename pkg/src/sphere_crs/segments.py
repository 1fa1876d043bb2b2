"""Segment kinds of an extremal path and their control values."""

from enum import Enum
import math


class SegmentKind(str, Enum):
    """The eight constant-control pieces: G (great circle), C (tight turn), T (turn in place).

    ``L``/``R`` mean u_g = +U_max / -U_max; the superscript is the sign of v.
    """

    G_PLUS = "G+"
    G_MINUS = "G-"
    L_PLUS = "L+"
    L_MINUS = "L-"
    R_PLUS = "R+"
    R_MINUS = "R-"
    L_ZERO = "L0"
    R_ZERO = "R0"

    def __str__(self):
        return self.value

    @property
    def v(self) -> int:
        s = self.value[1]
        return {"+": 1, "-": -1, "0": 0}[s]

    @property
    def turn(self) -> int:
        """+1 for L, -1 for R, 0 for G."""
        return {"L": 1, "R": -1, "G": 0}[self.value[0]]

    @property
    def family(self) -> str:
        if self.value[0] == "G":
            return "G"
        return "T" if self.v == 0 else "C"

    def u_g(self, u_max: float) -> float:
        return self.turn * u_max

    def controls(self, u_max: float) -> tuple[float, float]:
        return float(self.v), self.turn * float(u_max)

    def omega(self, u_max: float) -> float:
        """Angular frequency sqrt(v^2 + u_g^2) of the piece."""
        return math.sqrt(self.v**2 + (self.turn * u_max) ** 2)

    @property
    def inverse(self) -> "SegmentKind":
        """Kind whose matrix is the transpose of this one (same angle)."""
        return _INVERSE[self]

    @classmethod
    def from_controls(cls, v: int, turn: int) -> "SegmentKind":
        letter = {1: "L", -1: "R", 0: "G"}[turn]
        sign = {1: "+", -1: "-", 0: "0"}[v]
        return cls(letter + sign)


_INVERSE = {
    SegmentKind.G_PLUS: SegmentKind.G_MINUS,
    SegmentKind.G_MINUS: SegmentKind.G_PLUS,
    SegmentKind.L_PLUS: SegmentKind.R_MINUS,
    SegmentKind.R_MINUS: SegmentKind.L_PLUS,
    SegmentKind.R_PLUS: SegmentKind.L_MINUS,
    SegmentKind.L_MINUS: SegmentKind.R_PLUS,
    SegmentKind.L_ZERO: SegmentKind.R_ZERO,
    SegmentKind.R_ZERO: SegmentKind.L_ZERO,
}

ALL_KINDS = tuple(SegmentKind)


def as_kind(kind) -> SegmentKind:
    return kind if isinstance(kind, SegmentKind) else SegmentKind(kind)
