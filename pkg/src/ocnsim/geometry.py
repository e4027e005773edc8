"""Exact integer vector predicates for slope games and belts.

Everything here is integer determinant / cross-multiplication arithmetic;
boundary cases (determinant zero) decide game outcomes, so no floats appear.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

__all__ = [
    "Direction",
    "direction",
    "det",
    "behind",
    "is_positive",
    "steeper",
    "c_above",
    "c_below",
    "first_row_above",
    "first_row_not_below",
    "subsumes",
    "candidate_directions",
    "probe_sequence",
    "sector_index",
]


def det(v, w):
    """Cross product v.x*w.y - v.y*w.x; sign gives orientation."""
    return v[0] * w[1] - v[1] * w[0]


def is_positive(v):
    return v[0] >= 0 and v[1] >= 0 and (v[0] != 0 or v[1] != 0)


def behind(v, w):
    """Is w behind v: clockwise angle from v to w strictly inside (0, 180)?

    The zero vector and collinear vectors are not behind anything.
    """
    if v == (0, 0):
        raise ValueError("reference vector must be non-zero")
    if w == (0, 0):
        return False
    return det(v, w) < 0


@dataclass(frozen=True)
class Direction:
    """Primitive non-negative integer vector (rho, rho') != (0, 0)."""

    x: int
    y: int

    def __post_init__(self):
        if not is_positive((self.x, self.y)):
            raise ValueError(f"not a positive vector: ({self.x},{self.y})")
        if math.gcd(self.x, self.y) != 1:
            raise ValueError(f"not primitive: ({self.x},{self.y})")

    def as_tuple(self):
        return (self.x, self.y)

    def __repr__(self):
        return f"{self.x}/{self.y}"


def direction(x, y):
    """Primitive Direction for the positive vector (x, y)."""
    if not is_positive((x, y)):
        raise ValueError(f"not a positive vector: ({x},{y})")
    g = math.gcd(x, y)
    return Direction(x // g, y // g)


def steeper(a, b):
    """a << b: is b steeper than a (a is behind b)?"""
    return behind(b.as_tuple(), a.as_tuple())


def c_above(point, d, c):
    """Is `point` on the steep side of direction `d` with margin `c`?

    Exact rational test for: exists r > 0 with n < r*rho - c and
    n' > r*rho' + c.
    """
    n, n2 = point
    rho, rho2 = d.as_tuple()
    if rho == 0:
        return False
    if rho2 == 0:
        return n2 > c
    return rho2 * (n + c) < rho * (n2 - c)


def c_below(point, d, c):
    """Mirror of c_above: point on the flat side of `d` with margin `c`."""
    n, n2 = point
    rho, rho2 = d.as_tuple()
    if rho2 == 0:
        return False
    if rho == 0:
        return n > c
    return rho * (n2 + c) < rho2 * (n - c)


def first_row_above(n, d, c):
    """Least n' with (n, n') c-above d, or None when no row qualifies."""
    rho, rho2 = d.as_tuple()
    if rho == 0:
        return None
    if rho2 == 0:
        return c + 1
    return (rho2 * (n + c)) // rho + c + 1


def first_row_not_below(n, d, c):
    """Least n' with (n, n') not c-below d, or None when every row is below."""
    rho, rho2 = d.as_tuple()
    if rho2 == 0:
        return 0
    if rho == 0:
        return 0 if n <= c else None
    # not c_below: rho*(n'+c) >= rho2*(n-c)
    need = rho2 * (n - c) - rho * c
    if need <= 0:
        return 0
    return -(-need // rho)


def subsumes(a, b, vectors):
    """Does `a` subsume `b`: every v in `vectors` behind b is behind a?"""
    at, bt = a.as_tuple(), b.as_tuple()
    return all(behind(at, v) for v in vectors if behind(bt, v))


def _cmp_steep_first(a, b):
    d = det(a.as_tuple(), b.as_tuple())
    if d < 0:
        return -1
    if d > 0:
        return 1
    return 0


def candidate_directions(bound):
    """All primitive directions in [0..bound]^2, steepest (0,1) first."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    dirs = set()
    for x in range(bound + 1):
        for y in range(bound + 1):
            if is_positive((x, y)):
                dirs.add(direction(x, y))
    return sorted(dirs, key=functools.cmp_to_key(_cmp_steep_first))


def probe_sequence(bound):
    """Candidates interleaved with mediants of angular neighbors.

    The mediant of two consecutive candidates lies strictly inside the open
    sector between them, so probing it settles the whole sector.
    """
    cands = candidate_directions(bound)
    probes = []
    for i, d in enumerate(cands):
        probes.append(d)
        if i + 1 < len(cands):
            e = cands[i + 1]
            probes.append(direction(d.x + e.x, d.y + e.y))
    return probes


def sector_index(d, candidates):
    """Position of `d` in the angular order of `candidates`.

    Even value 2*i: equal to candidates[i]; odd value 2*i+1: strictly between
    candidates[i] and candidates[i+1].  Directions steeper than the first
    candidate map to -1, flatter than the last to 2*len-1.
    """
    lo, hi = 0, len(candidates) - 1
    dt = d.as_tuple()
    if det(candidates[0].as_tuple(), dt) > 0:
        return -1
    if det(candidates[-1].as_tuple(), dt) < 0:
        return 2 * len(candidates) - 1
    # invariant: candidates[lo] is steeper-or-equal, candidates[hi] flatter-or-equal
    while lo <= hi:
        mid = (lo + hi) // 2
        s = det(candidates[mid].as_tuple(), dt)
        if s == 0:
            return 2 * mid
        if s < 0:  # d behind candidates[mid]: d is flatter
            lo = mid + 1
        else:
            hi = mid - 1
    return 2 * hi + 1
