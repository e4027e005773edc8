"""Ultimately-periodic plane colorings and certificate checking.

The membership of a state pair's plane is stored as a monotone threshold
staircase: for every Spoiler counter n the least Duplicator counter f(n)
that is related (OMEGA when the column is empty).  Beyond an explicit column
range the staircase repeats along a period direction, which makes the whole
certificate finite.  The derived (A, P) point sets of the classical
base/period representation are views computed from the staircase.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Direction, c_above, c_below
from .nets import OMEGA, NetDescription

__all__ = [
    "PlaneColoring",
    "RepresentationSet",
    "GridCertificate",
    "check_yes_certificate",
    "one_step_holds",
]


@dataclass(frozen=True)
class PlaneColoring:
    """Coloring of one pair's plane: explicit staircase plus period rule.

    `period` is a positive integer vector (not necessarily primitive), or
    None for vertical belts where every column past the explicit range is
    empty.
    """

    pair: tuple
    width: int                      # the belt margin C
    explicit: tuple                 # thresholds for columns 0..len-1
    period: "tuple | None"
    gamma_up: "Direction | None" = None
    beta_down: "Direction | None" = None

    def threshold(self, n):
        last = len(self.explicit) - 1
        if n <= last:
            return self.explicit[n]
        if self.period is None or self.period[0] == 0:
            return OMEGA
        rho, rho2 = self.period
        k = -(-(n - last) // rho)
        base = self.explicit[n - k * rho]
        if base is OMEGA:
            return OMEGA
        return base + k * rho2

    def member(self, n, n2):
        t = self.threshold(n)
        return t is not OMEGA and n2 >= t

    @property
    def cut_rows(self):
        """(n1', n2'): coloring above n2' repeats the band [n1', n2')."""
        finite = [v for v in self.explicit if v is not OMEGA]
        n1 = (max(finite) + 1) if finite else 0
        rho2 = 0 if self.period is None else self.period[1]
        return n1, n1 + max(1, rho2)

    def _band_points(self, lo, hi):
        pts = []
        last = len(self.explicit) - 1
        rho = self.period[0] if self.period is not None else 0
        rho2 = self.period[1] if self.period is not None else 0
        n = 0
        while True:
            t = self.threshold(n)
            if n > last:
                # staircases are monotone, so these tails never return
                if t is OMEGA or (t is not OMEGA and t >= hi):
                    break
                if rho2 == 0 and n > last + rho + 1:
                    break
            if t is not OMEGA and t < hi:
                for n2 in range(max(t, lo), hi):
                    if self._in_band_region(n, n2):
                        pts.append((n, n2))
            n += 1
        return pts

    def _in_band_region(self, n, n2):
        # only points inside the belt strip; the trivial regions stay implicit
        if self.gamma_up is not None and c_above((n, n2), self.gamma_up,
                                                 self.width):
            return False
        if self.beta_down is not None and c_below((n, n2), self.beta_down,
                                                  self.width):
            return False
        return True

    def a_points(self):
        """In-belt points below the first cut row."""
        n1, _ = self.cut_rows
        return self._band_points(0, n1)

    def p_points(self):
        """In-belt points in the repeating band [n1', n2')."""
        n1, n2 = self.cut_rows
        return self._band_points(n1, n2)

    def to_json(self, max_points=2000):
        enc = ["w" if v is OMEGA else int(v) for v in self.explicit]
        n1, n2 = self.cut_rows
        data = {
            "pair": list(self.pair),
            "width": self.width,
            "thresholds": enc,
            "period": None if self.period is None else list(self.period),
            "gamma_up": None if self.gamma_up is None else
                        [self.gamma_up.x, self.gamma_up.y],
            "beta_down": None if self.beta_down is None else
                         [self.beta_down.x, self.beta_down.y],
            "cut_rows": [n1, n2],
        }
        a, p = self.a_points(), self.p_points()
        if len(a) + len(p) <= max_points:
            data["base_points"] = [list(x) for x in a]
            data["periodic_points"] = [list(x) for x in p]
        else:
            data["base_point_count"] = len(a)
            data["periodic_point_count"] = len(p)
        return data


class RepresentationSet:
    """Colorings for every state pair of a normalized net pair."""

    def __init__(self, left, right, colorings):
        self.left = left
        self.right = right
        self.colorings = dict(colorings)

    def member(self, pair, n, n2):
        return self.colorings[pair].member(n, n2)

    def to_json(self):
        return {
            "left": self.left.name,
            "right": self.right.name,
            "planes": [self.colorings[p].to_json()
                       for p in sorted(self.colorings)],
        }


class GridCertificate:
    """Finite staircase on a bounded column range, from oracle survivor sets.

    Membership past the last column falls back to an optional resolver
    (typically belt classification through a representation); without one it
    is out, which only certifies regions that close up within the grid.
    """

    def __init__(self, left, right, thresholds, resolver=None):
        self.left = left
        self.right = right
        self.thresholds = {p: list(v) for p, v in thresholds.items()}
        self.resolver = resolver

    def member(self, pair, n, n2):
        col = self.thresholds.get(pair)
        if col is not None and n < len(col):
            t = col[n]
            return t is not OMEGA and n2 >= t
        if self.resolver is not None:
            return bool(self.resolver(pair, n, n2))
        return False

    def window_points(self, pair):
        pts = []
        for n, t in enumerate(self.thresholds[pair]):
            if t is OMEGA:
                continue
            for n2 in range(t, t + 3):
                pts.append((n, n2))
        return pts


def one_step_holds(left, right, member, pair, n, n2):
    """Simulation condition at one point, successors resolved via `member`."""
    q, q2 = pair
    replies = {}
    for t2 in right.transitions:
        if t2.source == q2:
            replies.setdefault(t2.label, []).append(t2)
    for t in left.transitions:
        if t.source != q or n + t.effect < 0:
            continue
        ok = False
        for t2 in replies.get(t.label, ()):
            m2 = n2 + t2.effect
            if m2 < 0:
                continue
            if member((t.target, t2.target), n + t.effect, m2):
                ok = True
                break
        if not ok:
            return False
    return True


def _rep_window_points(pc):
    last = len(pc.explicit) - 1
    rho = 0 if pc.period is None else pc.period[0]
    rho2 = 0 if pc.period is None else pc.period[1]
    pts = []
    for n in range(last + rho + 1):
        t = pc.threshold(n)
        if t is OMEGA:
            continue
        for n2 in range(t, t + rho2 + 3):
            pts.append((n, n2))
    return pts


def check_yes_certificate(rep, nets=None, exclude=frozenset()):
    """Locally verify a representation: True implies its in-points simulate.

    Checks every represented in-point of the explicit range plus one period
    beyond; columns further out reduce to checked ones by the period shift,
    and rows above the checked band inherit the checked replies because the
    staircases are monotone (a reply valid at the column edge stays valid,
    and keeps its target in-set, at every higher Duplicator counter).
    """
    if nets is not None:
        left, right = nets
    else:
        left, right = rep.left, rep.right

    def member(pair, n, n2):
        if (pair, n, n2) in exclude:
            return False
        return rep.member(pair, n, n2)

    if isinstance(rep, GridCertificate):
        items = [(p, rep.window_points(p)) for p in sorted(rep.thresholds)]
    else:
        for pair, pc in rep.colorings.items():
            prev = None
            for v in pc.explicit:
                if prev is not None and _lt(v, prev):
                    return False  # staircase must be monotone
                prev = v
        items = [(p, _rep_window_points(rep.colorings[p]))
                 for p in sorted(rep.colorings)]

    for pair, pts in items:
        for (n, n2) in pts:
            if (pair, n, n2) in exclude:
                continue
            if not one_step_holds(left, right, member, pair, n, n2):
                return False
    return True


def _lt(a, b):
    if a is OMEGA:
        return False
    if b is OMEGA:
        return True
    return a < b
