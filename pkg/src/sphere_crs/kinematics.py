"""Forward kinematics of extremal paths and a numeric integrator of the state ODE."""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError
from .segments import ALL_KINDS, SegmentKind, as_kind
from .so3 import segment_matrix, turn_radius

__all__ = [
    "SegmentKind", "ALL_KINDS", "Segment", "PathInstance", "forward_kinematics",
    "sample_path", "integrate_state", "duration", "path_schedule",
    "parse_path", "write_samples_csv",
]


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "kind", as_kind(self.kind))
        if self.phi < 0:
            raise DomainError(f"segment angle must be non-negative, got {self.phi}")

    def duration(self, u_max):
        return self.phi / self.kind.omega(u_max)

    def matrix(self, u_max):
        return segment_matrix(self.kind, turn_radius(u_max), self.phi)


@dataclass(frozen=True)
class PathInstance:
    segments: tuple = field(default_factory=tuple)
    u_max: float = 1.0

    def __post_init__(self):
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        object.__setattr__(self, "segments", segs)
        if not self.u_max >= 1.0:
            raise DomainError(f"U_max must be >= 1, got {self.u_max}")

    @classmethod
    def from_word(cls, kinds, angles, u_max):
        return cls(tuple(Segment(k, a) for k, a in zip(kinds, angles)), u_max)

    @property
    def word(self):
        return "".join(str(s.kind) for s in self.segments)

    @property
    def total_time(self):
        return duration(self)

    def __len__(self):
        return len(self.segments)


def duration(path):
    """Total time sum(phi / omega)."""
    return float(sum(s.duration(path.u_max) for s in path.segments))


def forward_kinematics(r0, path):
    """r0 times the product of the segment matrices, left to right."""
    r = turn_radius(path.u_max)
    out = np.array(r0, dtype=float)
    for s in path.segments:
        out = out @ segment_matrix(s.kind, r, s.phi)
    return out


def sample_path(r0, path, n_per_segment):
    """Samples (t, R) along the path: r0 first, then n equal-angle steps per segment."""
    if n_per_segment < 1:
        raise DomainError("n_per_segment must be >= 1")
    r = turn_radius(path.u_max)
    cur = np.array(r0, dtype=float)
    t0 = 0.0
    out = [(0.0, cur.copy())]
    for s in path.segments:
        w = s.kind.omega(path.u_max)
        for i in range(1, n_per_segment + 1):
            a = s.phi * i / n_per_segment
            out.append((t0 + a / w, cur @ segment_matrix(s.kind, r, a)))
        cur = out[-1][1]
        t0 += s.phi / w
    return out


def path_schedule(path):
    """Piecewise-constant control schedule [(v, u_g, duration), ...] of a path."""
    return [(*s.kind.controls(path.u_max), s.duration(path.u_max)) for s in path.segments]


def integrate_state(r0, controls, dt=1e-4, u_max=None, backend=None):
    """RK4 integration of dR/dt = R Omega(v, u_g) over a schedule of (v, u_g, duration)."""
    if dt <= 0:
        raise DomainError("dt must be positive")
    out = np.array(r0, dtype=float)
    for v, u, dur in controls:
        if abs(v) > 1.0 + 1e-12 or (u_max is not None and abs(u) > u_max + 1e-12):
            raise DomainError(f"control ({v}, {u}) outside the admissible box")
        if dur < 0:
            raise DomainError("negative duration in schedule")
        out = kernels.rk4_rotation(out, v, u, dur, dt, backend=backend)
    return out


def parse_path(text):
    """Parse 'L-:0.1122,R-:1.4896' into a list of Segment.

    Raises ValueError naming the 1-based item position of the first bad token.
    """
    text = text.strip()
    if not text:
        return []
    segs = []
    for i, item in enumerate(text.split(","), start=1):
        kind, sep, ang = item.strip().partition(":")
        if not sep:
            raise ValueError(f"path item {i} ({item!r}): expected KIND:angle")
        try:
            k = SegmentKind(kind.strip())
        except ValueError:
            raise ValueError(f"path item {i} ({item!r}): unknown segment kind {kind!r}") from None
        try:
            a = float(ang)
        except ValueError:
            raise ValueError(f"path item {i} ({item!r}): bad angle {ang!r}") from None
        if not math.isfinite(a) or a < 0:
            raise ValueError(f"path item {i} ({item!r}): angle must be finite and >= 0")
        segs.append(Segment(k, a))
    return segs


CSV_HEADER = ["t", "Xv_x", "Xv_y", "Xv_z", "Tv_x", "Tv_y", "Tv_z", "Nv_x", "Nv_y", "Nv_z"]


def write_samples_csv(samples, fh):
    """Write (t, R) samples; columns are the frame vectors X_v, T_v, N_v."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for t, m in samples:
        w.writerow([repr(float(t))] + [repr(float(m[i, j])) for j in range(3) for i in range(3)])
