"""Finitary slope games: phase recursion and winner computation.

A phase builds an acyclic product path until it closes into a lasso; the
cycle effect is then compared against the phase slope.  The phase either
ends the game or restarts with the cycle effect as a strictly flatter slope,
which bounds every game by (K+1)^2 phases.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .geometry import (
    Direction,
    behind,
    candidate_directions,
    direction,
    is_positive,
    sector_index,
)
from .nets import IndexedNet, NetError, is_complete, is_non_blocking

__all__ = [
    "SPOILER",
    "DUPLICATOR",
    "PhaseOutcome",
    "SlopeGameResult",
    "NotNormalFormError",
    "evaluate_lasso",
    "SlopeGameSolver",
    "solve_slope_game",
]

SPOILER = "Spoiler"
DUPLICATOR = "Duplicator"

DUPLICATOR_IMMEDIATE = "duplicator-immediate"
SPOILER_IMMEDIATE = "spoiler-immediate"
CONTINUE = "continue"


class NotNormalFormError(NetError):
    """Slope games are only defined on pairs in normal form."""


@dataclass(frozen=True)
class PhaseOutcome:
    kind: str
    next_slope: "Direction | None" = None


@dataclass(frozen=True)
class SlopeGameResult:
    winner: str
    phases_used: int
    trace: "tuple | None" = None


def evaluate_lasso(cycle_effect, slope):
    """Classify a closed phase by its cycle effect against the slope."""
    if not behind(slope.as_tuple(), cycle_effect):
        return PhaseOutcome(DUPLICATOR_IMMEDIATE)
    if not is_positive(cycle_effect):
        return PhaseOutcome(SPOILER_IMMEDIATE)
    return PhaseOutcome(CONTINUE, direction(*cycle_effect))


class SlopeGameSolver:
    """Solves slope games on one product, memoizing winners per slope sector.

    The memo key is (pair, sector): two slopes inside one sector of the
    candidate-direction fan see the same behind-pattern on all cycle effects,
    so they have the same winner.
    """

    def __init__(self, product, bound=None):
        self.product = product
        self.left = IndexedNet(product.left)
        self.right = IndexedNet(product.right)
        if not is_non_blocking(product.left):
            raise NotNormalFormError("Spoiler net is not non-blocking")
        if not is_complete(product.right, product.left.alphabet):
            raise NotNormalFormError("Duplicator net is not complete")
        self.K = product.node_count
        self.bound = bound if bound is not None else max(1, self.K)
        self.candidates = candidate_directions(self.bound)
        self.max_phases = (self.K + 1) ** 2
        self._memo = {}
        self.games_solved = 0

    def solve(self, start_pair, slope):
        q, q2 = start_pair
        if not self.product.left.has_state(q):
            raise NetError(f"unknown state {q!r}")
        if not self.product.right.has_state(q2):
            raise NetError(f"unknown state {q2!r}")
        limit = sys.getrecursionlimit()
        want = 4 * self.max_phases * (self.K + 4) + 10000
        if limit < want:
            sys.setrecursionlimit(want)
        winner, depth = self._solve(self.left.state_id[q],
                                    self.right.state_id[q2], slope)
        self.games_solved += 1
        assert depth <= self.max_phases, "phase bound exceeded"
        return SlopeGameResult(winner, depth)

    def _solve(self, q, q2, slope):
        key = (q, q2, sector_index(slope, self.candidates))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = self._phase([(q, q2)], {(q, q2): 0}, [(0, 0)], slope)
        self._memo[key] = result
        return result

    def _phase(self, path, pos, effects, slope):
        """Alternating search inside one phase; returns (winner, phase depth)."""
        q, q2 = path[-1]
        moves = self.left.out[q]
        if not moves:
            raise NotNormalFormError(f"Spoiler stuck at {self.left.states[q]}")
        assert len(path) <= self.K + 1, "phase exceeded K rounds"
        cur = effects[-1]
        best_depth = 1
        for (a, d, _g, tgt) in moves:
            replies = self.right.by_label[q2].get(a)
            if not replies:
                raise NotNormalFormError(
                    f"Duplicator stuck at {self.right.states[q2]} on label "
                    f"{self.left.labels[a]!r}")
            move_wins = True
            for (d2, _g2, tgt2) in replies:
                node = (tgt, tgt2)
                eff = (cur[0] + d, cur[1] + d2)
                if node in pos:
                    i = pos[node]
                    cyc = (eff[0] - effects[i][0], eff[1] - effects[i][1])
                    outcome = evaluate_lasso(cyc, slope)
                    if outcome.kind == DUPLICATOR_IMMEDIATE:
                        winner, depth = DUPLICATOR, 1
                    elif outcome.kind == SPOILER_IMMEDIATE:
                        winner, depth = SPOILER, 1
                    else:
                        winner, sub = self._solve(tgt, tgt2,
                                                  outcome.next_slope)
                        depth = sub + 1
                else:
                    path.append(node)
                    pos[node] = len(path) - 1
                    effects.append(eff)
                    winner, depth = self._phase(path, pos, effects, slope)
                    path.pop()
                    del pos[node]
                    effects.pop()
                if depth > best_depth:
                    best_depth = depth
                if winner == DUPLICATOR:
                    move_wins = False
                    break
            if move_wins:
                return SPOILER, best_depth
        return DUPLICATOR, best_depth


def solve_slope_game(start_pair, slope, product):
    """One-shot wrapper; reuse a SlopeGameSolver for repeated queries."""
    return SlopeGameSolver(product).solve(start_pair, slope)
