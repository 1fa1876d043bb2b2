"""Catalog of candidate path types and their sign-resolved expansions.

Abstract types are written with ASCII tokens: ``C``, ``G``, ``T`` for the
segment families, ``|`` for a cusp, and a suffix on a position for its angle
class: ``_b`` fixed at beta, ``_p`` a shared angle psi in (0, beta], ``_m`` a
shared angle mu in (0, beta). Unsuffixed positions carry free angles.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .adjoint import beta
from .errors import UnsupportedRegime
from .segments import SegmentKind

FREE, BETA, PSI, MU = "free", "beta", "psi", "mu"
_SUFFIX = {"b": BETA, "p": PSI, "m": MU}
_SUFFIX_INV = {v: k for k, v in _SUFFIX.items()}
_GREEK = {BETA: "β", PSI: "ψ", MU: "μ"}

BASE_FORMS = (
    "C", "G", "T", "CC", "GC", "C|C", "TC", "CC_p|C", "CGC", "C|C_bG", "CTC",
    "C|C_pC_p|C", "CGC_b|C", "CC_m|C_mC", "C|C_bGC_b|C", "C|C_mC_m|C_mC",
    "CC_m|C_mC_m|C_mC",
)

# lower bound below which an angle counts as zero (the path is then a shorter type)
ZERO_ANGLE = 1e-9
CLOSED_SLACK = 1e-9


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = True

    def contains(self, x, slack=CLOSED_SLACK):
        if self.lo == self.hi:  # fixed angle
            return abs(x - self.lo) <= slack
        lo_ok = x >= self.lo - slack if self.lo_closed else x > self.lo + ZERO_ANGLE
        hi_ok = x <= self.hi + slack if self.hi_closed else x < self.hi
        return lo_ok and hi_ok

    def __str__(self):
        if self.lo == self.hi:
            return f"{{{self.lo:.6f}}}"
        return (("[" if self.lo_closed else "(") + f"{self.lo:.6f}, {self.hi:.6f}"
                + ("]" if self.hi_closed else ")"))


def parse_form(text):
    """Split a form like 'CC_m|C_mC' into (letters, classes, cusps)."""
    letters, classes, cusps = [], [], []
    i, pending_cusp = 0, False
    while i < len(text):
        ch = text[i]
        if ch == "|":
            if not letters or pending_cusp:
                raise ValueError(f"misplaced cusp in {text!r}")
            pending_cusp = True
            i += 1
            continue
        if ch not in "CGT":
            raise ValueError(f"bad token {ch!r} in {text!r}")
        if letters:
            cusps.append(pending_cusp)
        pending_cusp = False
        letters.append(ch)
        cls = FREE
        if text[i + 1:i + 2] == "_":
            cls = _SUFFIX[text[i + 2]]
            i += 2
        classes.append(cls)
        i += 1
    if pending_cusp:
        raise ValueError(f"trailing cusp in {text!r}")
    return tuple(letters), tuple(classes), tuple(cusps)


def format_form(letters, classes, cusps, greek=False):
    out = []
    for i, (ch, cls) in enumerate(zip(letters, classes)):
        if i and cusps[i - 1]:
            out.append("|")
        out.append(ch)
        if cls != FREE:
            out.append(_GREEK[cls] if greek else "_" + _SUFFIX_INV[cls])
    return "".join(out)


@dataclass(frozen=True)
class AbstractPathType:
    letters: tuple
    classes: tuple
    cusps: tuple
    u_max: float

    @classmethod
    def from_form(cls, text, u_max):
        return cls(*parse_form(text), float(u_max))

    @property
    def form(self):
        return format_form(self.letters, self.classes, self.cusps)

    @property
    def label(self):
        return format_form(self.letters, self.classes, self.cusps, greek=True)

    def __len__(self):
        return len(self.letters)

    def reversed(self):
        return AbstractPathType(self.letters[::-1], self.classes[::-1], self.cusps[::-1], self.u_max)

    @property
    def shared_class(self):
        for c in self.classes:
            if c in (PSI, MU):
                return c
        return None


@dataclass(frozen=True)
class ConcreteCandidate:
    abstract: AbstractPathType
    kinds: tuple

    @property
    def word(self):
        return "".join(k.value for k in self.kinds)

    @property
    def label(self):
        out = []
        for i, k in enumerate(self.kinds):
            if i and self.abstract.cusps[i - 1]:
                out.append("|")
            out.append(k.value)
        return "".join(out)

    @property
    def classes(self):
        return self.abstract.classes

    @property
    def u_max(self):
        return self.abstract.u_max

    def shared_groups(self):
        """Positions sharing one unknown angle, e.g. ((1, 2),) for CC_m|C_mC."""
        groups = []
        for cls in (PSI, MU):
            pos = tuple(i for i, c in enumerate(self.classes) if c == cls)
            if pos:
                groups.append(pos)
        return tuple(groups)

    def domain(self, position):
        return angle_domain(self.abstract, position)

    def __len__(self):
        return len(self.kinds)


def sufficient_list(u_max):
    """The 23 abstract path types (listed forms plus their reversals)."""
    if not u_max >= 1.0:
        raise UnsupportedRegime(f"U_max = {u_max} < 1: no sufficient list is available", u_max=u_max)
    seen, out = set(), []
    for form in BASE_FORMS:
        t = AbstractPathType.from_form(form, u_max)
        for cand in (t, t.reversed()):
            key = (cand.letters, cand.classes, cand.cusps)
            if key not in seen:
                seen.add(key)
                out.append(cand)
    return out


_FAMILY_KINDS = {
    "C": (SegmentKind.L_PLUS, SegmentKind.L_MINUS, SegmentKind.R_PLUS, SegmentKind.R_MINUS),
    "G": (SegmentKind.G_PLUS, SegmentKind.G_MINUS),
    "T": (SegmentKind.L_ZERO, SegmentKind.R_ZERO),
}


def junction_ok(a, b, cusp):
    """Admissible kind pair across one junction."""
    fa, fb = a.family, b.family
    if fa == "C" and fb == "C":
        if cusp:
            return a.turn == b.turn and a.v == -b.v
        return a.turn == -b.turn and a.v == b.v
    if cusp:
        return False
    if "G" in (fa, fb):
        return fa != fb and "T" not in (fa, fb) and a.v == b.v
    if "T" in (fa, fb):
        return fa != fb and a.turn == b.turn
    return False


def expand_concrete(t):
    """All sign assignments of an abstract type that respect the junction rules."""
    out = []
    for kinds in itertools.product(*(_FAMILY_KINDS[ch] for ch in t.letters)):
        if all(junction_ok(kinds[i], kinds[i + 1], t.cusps[i]) for i in range(len(kinds) - 1)):
            out.append(ConcreteCandidate(t, kinds))
    return out


@lru_cache(maxsize=None)
def _class_interval(cls, letter, u_max):
    b = beta(u_max)
    if cls == BETA:
        return Interval(b, b, True, True)
    if cls == PSI:
        return Interval(0.0, b, False, True)
    if cls == MU:
        return Interval(0.0, b, False, False)
    if letter == "G":
        return Interval(0.0, 2.0 * math.pi, False, False)
    return Interval(0.0, math.pi, False, True)


def angle_domain(t, position):
    """Admissible interval of the angle at ``position``; shared positions return one object."""
    return _class_interval(t.classes[position], t.letters[position], t.u_max)


@lru_cache(maxsize=32)
def concrete_candidates(u_max):
    """Every concrete candidate for this U_max, in catalog order."""
    return tuple(c for t in sufficient_list(u_max) for c in expand_concrete(t))
