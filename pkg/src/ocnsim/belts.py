"""Belts, point classification, sufficient values and periodic extraction.

The engine normalizes its net pair once, then answers point queries in three
tiers: classification against the query pair's belt (pure arithmetic),
a threshold sandwich (matching optimistic/pessimistic fixpoints), and for
Simulated answers a validated ultimately-periodic representation.

Belts come from slope games, which explore acyclic product paths and are
only tractable on small products; past `belt_node_limit` the engine falls
back to the sandwich alone (boundaries resolved optimistically or
pessimistically instead of by belt classification).
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass

from .certificates import PlaneColoring, RepresentationSet, check_yes_certificate
from .geometry import (
    Direction,
    c_above,
    c_below,
    direction,
    first_row_above,
    first_row_not_below,
    probe_sequence,
)
from .nets import OMEGA, Config, NetError, normalize_pair, product_graph
from .slopegame import DUPLICATOR, SPOILER, SlopeGameSolver
from .thresholds import (
    OMEGA_CUT,
    OMEGA_VAL,
    OPTIMISTIC,
    PESSIMISTIC,
    build_pair_space,
    solve_thresholds,
)
from .verdicts import NOT_SIMULATED, SIMULATED, UNKNOWN, Budget, Verdict

__all__ = [
    "BeltSpec",
    "StrongEngine",
    "compute_C",
    "compute_belt",
    "decide_strong",
    "compute_suff",
    "extract_periodic",
]

_VERTICAL = direction(0, 1)
_FLAT = direction(1, 0)

SIM = "sim"
NOTSIM = "notsim"


@dataclass(frozen=True)
class BeltSpec:
    """Two-sided belt: flattest Duplicator-winning and steepest
    Spoiler-winning probe directions, with margin `width`."""

    pair: tuple
    gamma_up: "Direction | None"
    beta_down: "Direction | None"
    width: int

    @property
    def vertical(self):
        """No point is ever C-above: Duplicator wins at most at (0,1)."""
        return self.gamma_up is None or self.gamma_up == _VERTICAL

    def classify(self, n, n2):
        if self.gamma_up is not None and c_above((n, n2), self.gamma_up,
                                                 self.width):
            return SIM
        if self.beta_down is not None and c_below((n, n2), self.beta_down,
                                                  self.width):
            return NOTSIM
        return None


def compute_C(product):
    """Safe belt margin: the product node count bounds 1 + any acyclic path."""
    return product.node_count


def compute_belt(pair, product, width, solver=None):
    """Binary-search the winner switch over the angular probe sequence."""
    solver = solver or SlopeGameSolver(product, bound=width)
    probes = probe_sequence(width)

    def spoiler_wins(i):
        return solver.solve(pair, probes[i]).winner == SPOILER

    # Duplicator wins a (possibly empty) steep prefix, Spoiler the flat rest.
    if spoiler_wins(0):
        return BeltSpec(pair, None, probes[0], width)
    if not spoiler_wins(len(probes) - 1):
        return BeltSpec(pair, probes[-1], None, width)
    lo, hi = 0, len(probes) - 1      # lo: Duplicator wins, hi: Spoiler wins
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if spoiler_wins(mid):
            hi = mid
        else:
            lo = mid
    return BeltSpec(pair, probes[lo], probes[hi], width)


class _Sandwich:
    """Matched optimistic/pessimistic threshold runs over one pair space."""

    def __init__(self, space, ncols, sat, pins):
        self.space = space
        self.ncols = ncols
        self.sat = sat
        lower, upper, b_opt, b_pess = pins
        self.f_opt, self.taint = solve_thresholds(
            space, ncols, OPTIMISTIC, sat, boundary=b_opt, lower=lower,
            upper=upper)
        self.f_pess, _ = solve_thresholds(
            space, ncols, PESSIMISTIC, sat, boundary=b_pess, lower=lower,
            upper=upper)

    def verdict(self, pid, n, n2):
        if n >= self.ncols:
            return None
        if n2 < int(self.f_opt[pid][n]):
            return NOTSIM  # optimistic values never exceed true thresholds
        fp = int(self.f_pess[pid][n])
        if fp < OMEGA_CUT and n2 >= fp:
            return SIM
        return None

    def opt_converged(self, pid, n):
        """Untainted finite values are exact fixpoint values."""
        return int(self.f_opt[pid][n]) < OMEGA_CUT \
            and not self.taint[pid][n]

    def agreed_threshold(self, pid, n):
        """Exact threshold when both fixpoints agree, else None."""
        if n >= self.ncols:
            return None
        fo, fp = int(self.f_opt[pid][n]), int(self.f_pess[pid][n])
        if fo >= OMEGA_CUT and fp >= OMEGA_CUT:
            return OMEGA
        if fo == fp and self.opt_converged(pid, n):
            return fo
        return None


class StrongEngine:
    """Strong-simulation decision engine for one pair of plain nets."""

    def __init__(self, lhs, rhs, budget=None, belt_node_limit=48):
        self.budget = budget or Budget()
        self.left, self.right = normalize_pair(lhs, rhs)
        self.product = product_graph(self.left, self.right)
        self.K = self.product.node_count
        self.C = compute_C(self.product)
        self.use_belts = self.K <= belt_node_limit
        self._solver = None
        self._belts = {}
        self._spaces = {}
        self._sandwiches = {}
        self._reps = {}
        self._reps_failed = set()
        self.stats = {"belts_computed": 0, "slope_games": 0,
                      "sandwich_runs": 0, "max_cols": 0, "max_sat": 0}

    # -- belts ------------------------------------------------------------

    @property
    def solver(self):
        if self._solver is None:
            self._solver = SlopeGameSolver(self.product, bound=self.C)
        return self._solver

    def belt(self, pair):
        if not self.use_belts:
            raise NetError("product too large for slope games; sandwich only")
        spec = self._belts.get(pair)
        if spec is None:
            spec = compute_belt(pair, self.product, self.C, self.solver)
            self._belts[pair] = spec
            self.stats["belts_computed"] += 1
            self.stats["slope_games"] = self.solver.games_solved
        return spec

    # -- sandwich ---------------------------------------------------------

    def _space(self, pair):
        if self.use_belts:
            key = "full"
            roots = [(q, q2) for q in self.left.states
                     for q2 in self.right.states]
        else:
            key = pair
            roots = [pair]
        space = self._spaces.get(key)
        if space is None:
            space = build_pair_space(self.left, self.right, roots)
            self._spaces[key] = space
        return space

    def scan_bound(self, pair):
        """Upper bound for 1 + longest acyclic product path, scan-sized."""
        if self.use_belts:
            return self.C
        return self._space(pair).scan_bound

    def _pins(self, space, ncols):
        n = space.n_pairs
        lower = np.zeros((n, ncols), dtype=np.int64)
        upper = np.full((n, ncols), OMEGA_VAL, dtype=np.int64)
        b_opt = np.zeros(n, dtype=np.int64)
        b_pess = np.full(n, OMEGA_VAL, dtype=np.int64)
        if not self.use_belts:
            return lower, upper, b_opt, b_pess
        for pid, (qid, q2id) in enumerate(space.pairs):
            pair = (space.left.states[qid], space.right.states[q2id])
            belt = self.belt(pair)
            for col in range(ncols + 1):
                lo = 0
                if belt.beta_down is not None:
                    lo = first_row_not_below(col, belt.beta_down, self.C)
                    lo = OMEGA_VAL if lo is None else lo
                up = OMEGA_VAL
                if belt.gamma_up is not None:
                    row = first_row_above(col, belt.gamma_up, self.C)
                    if row is not None:
                        up = row
                if col < ncols:
                    lower[pid][col] = lo
                    upper[pid][col] = min(np.int64(up), OMEGA_VAL)
                else:
                    b_opt[pid] = lo
                    b_pess[pid] = min(np.int64(up), OMEGA_VAL)
        return lower, upper, b_opt, b_pess

    def _sandwich(self, pair, ncols, sat):
        space = self._space(pair)
        key = ("full" if self.use_belts else pair, ncols, sat)
        sw = self._sandwiches.get(key)
        if sw is None:
            sw = _Sandwich(space, ncols, sat, self._pins(space, ncols))
            self._sandwiches[key] = sw
            self.stats["sandwich_runs"] += 1
            self.stats["max_cols"] = max(self.stats["max_cols"], ncols)
            self.stats["max_sat"] = max(self.stats["max_sat"], sat)
        return sw

    def _pair_id(self, space, pair):
        qid = space.left.state_id[pair[0]]
        q2id = space.right.state_id[pair[1]]
        return space.pair_id[(qid, q2id)]

    def _escalations(self, pair, n, n2):
        """Yield sandwiches of doubling size within budget."""
        b = self.scan_bound(pair)
        ncols = max(n + 2 * b + 2, b + 3)
        sat = max(n2 + 2 * b + 2, 4 * b, 16)
        for _ in range(self.budget.escalations):
            ncols = min(ncols, self.budget.max_cols)
            sat = min(sat, self.budget.max_value)
            yield self._sandwich(pair, ncols, sat)
            if ncols == self.budget.max_cols and sat == self.budget.max_value:
                return
            ncols, sat = 2 * ncols, 4 * sat

    def classify_point(self, pair, n, n2):
        """Three-valued point classification: SIM, NOTSIM or None (budget)."""
        if self.use_belts:
            hit = self.belt(pair).classify(n, n2)
            if hit is not None:
                return hit
        rep = self.representation(pair)
        if rep is not None:
            # validated representations are exact on finite columns
            t = rep.colorings[pair].threshold(n)
            if t is not OMEGA:
                return SIM if n2 >= t else NOTSIM
            # empty column: only the optimistic run can bound its death
        for sw in self._escalations(pair, n, n2):
            v = sw.verdict(self._pair_id(sw.space, pair), n, n2)
            if v is not None:
                return v
        return None

    # -- public operations --------------------------------------------------

    def decide(self, lhs, rhs):
        """Strong simulation point query, as a Verdict with evidence."""
        self._check_query(lhs, rhs)
        pair = (lhs.state, rhs.state)
        outcome = self.classify_point(pair, lhs.counter, rhs.counter)
        stats = dict(self.stats)
        if outcome == SIM:
            cert = self.representation(pair)
            if cert is not None and not cert.member(pair, lhs.counter,
                                                    rhs.counter):
                cert = None
            if cert is None and self.use_belts:
                return Verdict(UNKNOWN, budget_report=self._report(
                    "periodic representation not found within budget"),
                    stats=stats)
            return Verdict(SIMULATED, certificate=cert, stats=stats)
        if outcome == NOTSIM:
            return Verdict(NOT_SIMULATED, witness=self._witness(lhs, rhs),
                           stats=stats)
        return Verdict(UNKNOWN, budget_report=self._report(
            "sandwich fixpoints did not agree at the query"), stats=stats)

    def _check_query(self, lhs, rhs):
        if not self.left.has_state(lhs.state):
            raise NetError(f"unknown state {lhs.state!r}")
        if not self.right.has_state(rhs.state):
            raise NetError(f"unknown state {rhs.state!r}")

    def _report(self, reason):
        return {"reason": reason,
                "max_cols": self.budget.max_cols,
                "max_value": self.budget.max_value,
                "escalations": self.budget.escalations}

    def _witness(self, lhs, rhs):
        from .oracle import PESSIMISTIC_MODE, spoiler_wins_within
        rounds = 4
        while rounds <= self.budget.oracle_rounds:
            cap = min(max(lhs.counter, rhs.counter) + rounds + 2,
                      self.budget.oracle_grid)
            if spoiler_wins_within(self.left, self.right, lhs, rhs, rounds,
                                   cap, PESSIMISTIC_MODE):
                return {"kind": "oracle", "rounds": rounds, "grid": cap,
                        "root": [lhs.state, lhs.counter,
                                 rhs.state, rhs.counter]}
            rounds *= 2
        return {"kind": "belt" if self.use_belts else "sandwich",
                "root": [lhs.state, lhs.counter, rhs.state, rhs.counter]}

    # -- sufficient values ---------------------------------------------------

    def compute_suff(self, pair):
        """Least Spoiler counter that defeats every Duplicator counter."""
        if not self.left.has_state(pair[0]) or not self.right.has_state(pair[1]):
            raise NetError(f"unknown pair {pair!r}")
        bound = self.scan_bound(pair)
        if self.use_belts:
            # probe point is C-above every non-vertical belt direction
            belt = self.belt(pair)
            probe = (self.C + 1, 2 * (self.C + 1) ** 2)
            if belt.classify(*probe) == SIM:
                return OMEGA
            assert belt.vertical, "probe must decide unless the belt is vertical"
        rep = self.representation(pair)
        if rep is not None:
            explicit = rep.colorings[pair].explicit
            if any(v is OMEGA for v in explicit):
                return explicit.index(OMEGA)
            return OMEGA  # a validated all-alive staircase has no dead column
        suff = self._scan_dead_columns(pair, bound)
        if suff is None:
            raise NetError(f"suff scan inconclusive for {pair} under budget")
        return suff

    def _scan_dead_columns(self, pair, bound):
        """First column whose verdicts are NotSimulated at stabilized rows."""
        for sw in self._escalations(pair, bound + 1, 16 * bound + 16):
            pid = self._pair_id(sw.space, pair)
            level = max(2 * bound + 2, 16)
            prev = None
            while level < sw.sat:
                vec = tuple(sw.verdict(pid, n, level)
                            for n in range(bound + 1))
                if any(v is None for v in vec):
                    break
                if vec == prev:
                    first = next((n for n, v in enumerate(vec)
                                  if v == NOTSIM), None)
                    if first is None:
                        return OMEGA
                    assert all(v == NOTSIM for v in vec[first:]), \
                        "dead columns must be upward closed"
                    return first
                prev = vec
                level *= 2
        return None

    # -- periodic representation ---------------------------------------------

    def representation(self, pair=None):
        """Validated ultimately-periodic coloring of the relevant planes.

        The candidate staircases come from the optimistic fixpoint, which
        over-approximates the true relation; the local certificate check
        proves the candidate is itself a simulation, so a validated
        representation is exact wherever it has finite thresholds.  With
        belts the representation covers every pair of control states;
        without them it covers the pairs reachable from the queried one.
        """
        if self.use_belts:
            key, space_key = "full", ("", "")
            if pair is None:
                pair = ("", "")
        else:
            if pair is None:
                raise NetError("representation needs a root pair without belts")
            key = space_key = pair
        if key in self._reps:
            return self._reps[key]
        if key in self._reps_failed:
            return None
        space = self._space(pair)
        bound = self.C if self.use_belts else space.scan_bound
        ncols = 4 * bound + 6
        sat = 2 * (bound + 2) * ncols
        planes = [(space.left.states[q], space.right.states[q2])
                  for (q, q2) in space.pairs]
        rep = None
        for _ in range(self.budget.escalations):
            ncols = min(ncols, self.budget.max_cols)
            sat = min(sat, self.budget.max_value)
            sw = self._sandwich(space_key, ncols, sat)
            colorings = {}
            for plane in planes:
                pc = self._extract_pair(sw, plane)
                if pc is None:
                    colorings = None
                    break
                colorings[plane] = pc
            if colorings is not None:
                cand = RepresentationSet(self.left, self.right, colorings)
                if check_yes_certificate(cand):
                    rep = cand
                    break
            if ncols == self.budget.max_cols and sat == self.budget.max_value:
                break
            ncols, sat = 2 * ncols, 2 * sat
        if rep is None:
            self._reps_failed.add(key)
        else:
            self._reps[key] = rep
        return rep

    def _extract_pair(self, sw, pair):
        belt = self.belt(pair) if self.use_belts else None
        pid = self._pair_id(sw.space, pair)
        gamma = belt.gamma_up if belt else None
        beta = belt.beta_down if belt else None
        width = belt.width if belt else sw.space.scan_bound

        # Columns of the optimistic staircase; dead columns converge only in
        # the limit (the optimistic run freezes at its saturation value), so
        # fill them as empty when the pessimistic run agrees they are dead.
        # The filled candidate is validated as a whole before any use.
        vals = []
        omega_tail = False
        for n in range(sw.ncols):
            v = int(sw.f_opt[pid][n])
            if v >= OMEGA_CUT:
                omega_tail = True
                break
            if not sw.opt_converged(pid, n):
                if int(sw.f_pess[pid][n]) >= OMEGA_CUT:
                    omega_tail = True
                    break
                return None  # unconverged but possibly alive: larger grid
            vals.append(v)

        if omega_tail:
            if belt is not None and not belt.vertical:
                return None  # non-vertical belts have no dead columns
            return PlaneColoring(pair, width, tuple(vals) + (OMEGA,), None,
                                 gamma, beta)

        candidates = []
        if belt is not None:
            for d in (belt.gamma_up, belt.beta_down):
                if d is not None and d.as_tuple() not in candidates:
                    candidates.append(d.as_tuple())
        found = self._detect_period(vals, candidates)
        if found is None:
            return None
        rho, rho2, start = found
        return PlaneColoring(pair, width, tuple(vals[:start + rho]),
                             (rho, rho2), gamma, beta)

    def _detect_period(self, vals, candidates):
        """Smallest (rho, rho2, start) with vals[n+rho] = vals[n]+rho2 on a
        long enough suffix; belt directions are tried alongside the shifts
        read off the data."""
        L = len(vals)
        options = list(candidates)
        for rho in range(1, min(16, L // 3) + 1):
            rho2 = vals[L - 1] - vals[L - 1 - rho]
            if rho2 >= 0:
                options.append((rho, rho2))
        best = None
        for (rho, rho2) in sorted(set(options)):
            if rho <= 0 or rho2 < 0:
                continue
            start = self._periodic_start(vals, rho, rho2)
            if start is not None and start + 3 * rho <= L:
                if best is None or (rho, start) < (best[0], best[2]):
                    best = (rho, rho2, start)
        return best

    @staticmethod
    def _periodic_start(vals, rho, rho2):
        """Least w with vals[n + rho] = vals[n] + rho2 for all n >= w."""
        n = len(vals) - rho - 1
        last_bad = -1
        while n >= 0:
            if vals[n + rho] != vals[n] + rho2:
                last_bad = n
                break
            n -= 1
        start = last_bad + 1
        if len(vals) - start < 2 * rho + 1:
            return None
        return start


# ---------------------------------------------------------------------------
# Module-level convenience wrappers


def decide_strong(lhs_net, rhs_net, lhs, rhs, budget=None):
    """One-shot strong simulation query; build a StrongEngine to batch."""
    return StrongEngine(lhs_net, rhs_net, budget).decide(lhs, rhs)


def compute_suff(pair, lhs_net, rhs_net, budget=None):
    return StrongEngine(lhs_net, rhs_net, budget).compute_suff(pair)


def extract_periodic(pair, lhs_net, rhs_net, budget=None):
    engine = StrongEngine(lhs_net, rhs_net, budget)
    rep = engine.representation()
    if rep is None:
        raise NetError("no validated periodic representation within budget")
    return rep.colorings[pair]
