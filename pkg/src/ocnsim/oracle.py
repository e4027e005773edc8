"""Brute-force bounded simulation games on finite counter grids.

This module is the verification oracle for everything else: a direct
backward induction over game rounds on dense boolean grids, independent of
belts, slope games and threshold fixpoints.  Off-grid positions are resolved
by a BoundaryMode; with pessimistic (or belt-resolved) resolution a reported
Spoiler win is sound for the true game.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass

from .certificates import GridCertificate, check_yes_certificate
from .nets import OMEGA, IndexedNet, NetError, OCN
from .verdicts import NOT_SIMULATED, SIMULATED, UNKNOWN, Verdict

__all__ = [
    "BoundaryMode",
    "OPTIMISTIC_MODE",
    "PESSIMISTIC_MODE",
    "belt_resolved",
    "GridVerdict",
    "spoiler_wins_within",
    "weak_spoiler_wins_within",
    "bounded_game_verdict",
    "sandwich_decide",
]


@dataclass(frozen=True)
class BoundaryMode:
    """Resolution of positions outside the grid.

    `classify(pair, n, n2)` may return "sim", "notsim" or None; unresolved
    cells fall back to the mode kind.  `column_alive(pair, n)` answers
    whether some arbitrarily high Duplicator counter survives in column n
    (symbolic omega replies and silent pumping past the cap).
    """

    kind: str
    classify: "object | None" = None
    column_alive: "object | None" = None

    def spoiler_winning(self, pair, n, n2):
        if self.classify is not None:
            hit = self.classify(pair, n, n2)
            if hit == "sim":
                return False
            if hit == "notsim":
                return True
        return self.kind == "pessimistic"

    def high_reply_survives(self, pair, n):
        if self.column_alive is not None:
            return bool(self.column_alive(pair, n))
        return self.kind != "pessimistic"


OPTIMISTIC_MODE = BoundaryMode("optimistic")
PESSIMISTIC_MODE = BoundaryMode("pessimistic")


def belt_resolved(classify, column_alive=None):
    """Boundary resolved through a belt table; unknown cells favor Duplicator."""
    return BoundaryMode("belt", classify, column_alive)


@dataclass(frozen=True)
class GridVerdict:
    kind: str          # "spoiler-wins" | "duplicator-survives" | "inconclusive"
    rounds: int
    mode: str


class _GridGame:
    """Shared state for one bounded-game computation."""

    def __init__(self, left_net, right_net, root, cap, mode, weak=False,
                 full_omega_enum=False):
        if left_net.kind != OCN:
            raise NetError("Spoiler side must be a plain one-counter net")
        if weak and right_net.kind != OCN:
            raise NetError("weak games expect plain nets on both sides")
        self.left = IndexedNet(left_net)
        self.right = IndexedNet(right_net)
        self.cap = cap
        self.size = cap + 1
        self.mode = mode
        self.weak = weak
        self.full_omega_enum = full_omega_enum
        self.pairs = []
        self.pair_id = {}
        self._state_targets_cache = {}
        self.root = (self.left.state_id[root[0]], self.right.state_id[root[1]])
        self._discover()
        if weak:
            self._weak_tables()

    # -- reachable state pairs ----------------------------------------------

    def _discover(self):
        frontier = [self.root]
        self.pair_id[self.root] = 0
        self.pairs.append(self.root)
        while frontier:
            q, q2 = frontier.pop(0)
            for (a, _d, _g, tgt) in self.left.out[q]:
                label = self.left.labels[a]
                if self.weak:
                    targets2 = self._weak_target_states(q2, label)
                else:
                    rid = self.right.label_id.get(label)
                    targets2 = {t2 for (_d2, _g2, t2)
                                in self.right.by_label[q2].get(rid, [])} \
                        if rid is not None else set()
                for t2 in sorted(targets2):
                    p = (tgt, t2)
                    if p not in self.pair_id:
                        self.pair_id[p] = len(self.pairs)
                        self.pairs.append(p)
                        frontier.append(p)

    def _weak_target_states(self, q2, label):
        # state-level over-approximation, counters ignored
        silent = self._silent_reach_states(q2)
        out = set()
        if label == "tau":
            out.update(silent)
        rid = self.right.label_id.get(label)
        if rid is not None:
            for s in silent:
                for (_d2, _g2, t2) in self.right.by_label[s].get(rid, []):
                    out.update(self._silent_reach_states(t2))
        return out

    def _silent_reach_states(self, q2):
        rid = self.right.label_id.get("tau")
        seen = {q2}
        stack = [q2]
        while stack and rid is not None:
            s = stack.pop()
            for (_d2, _g2, t2) in self.right.by_label[s].get(rid, []):
                if t2 not in seen:
                    seen.add(t2)
                    stack.append(t2)
        return seen

    # -- weak reply tables ----------------------------------------------------

    def _weak_tables(self):
        size = self.size
        ns = self.right.n_states
        cells = ns * size

        def cell(s, n):
            return s * size + n

        silent = np.zeros((cells, cells), dtype=bool)
        exceed = np.zeros(cells, dtype=bool)
        rid = self.right.label_id.get("tau")
        rows_by_state = [self.right.by_label[s].get(rid, [])
                         if rid is not None else [] for s in range(ns)]
        for s in range(ns):
            for n in range(size):
                for (d2, _g2, t2) in rows_by_state[s]:
                    m = n + d2
                    if m < 0:
                        continue
                    if m > self.cap:
                        exceed[cell(s, n)] = True
                    else:
                        silent[cell(s, n)][cell(t2, m)] = True
        closure = np.eye(cells, dtype=bool)
        while True:
            nxt = closure | ((closure.astype(np.uint8) @
                              silent.astype(np.uint8)) > 0)
            if np.array_equal(nxt, closure):
                break
            closure = nxt
        self._closure = closure
        self._exceed_reach = (closure.astype(np.uint8) @
                              exceed.astype(np.uint8)) > 0
        self._weak_step = {}
        self._post_exceed = {}
        for a in range(len(self.right.labels)):
            if self.right.labels[a] == "tau":
                self._weak_step[a] = closure
                self._post_exceed[a] = np.zeros(cells, dtype=bool)
                continue
            step = np.zeros((cells, cells), dtype=bool)
            for s in range(ns):
                for (d2, _g2, t2) in self.right.by_label[s].get(a, []):
                    for n in range(size):
                        m = n + d2
                        if 0 <= m <= self.cap:
                            step[cell(s, n)][cell(t2, m)] = True
            pre = (closure.astype(np.uint8) @ step.astype(np.uint8)) > 0
            full = (pre.astype(np.uint8) @ closure.astype(np.uint8)) > 0
            self._weak_step[a] = full
            self._post_exceed[a] = (pre.astype(np.uint8) @
                                    self._exceed_reach.astype(np.uint8)) > 0
        self._cells = cells

    # -- induction -------------------------------------------------------------

    def run(self, rounds, until_stable=False):
        win = {pid: np.zeros((self.size, self.size), dtype=bool)
               for pid in range(len(self.pairs))}
        done = 0
        for _ in range(rounds):
            changed = False
            new = {}
            for pid, (q, q2) in enumerate(self.pairs):
                acc = win[pid].copy()
                for (a, d, _g, tgt) in self.left.out[q]:
                    acc |= self._move_kill(win, q2, a, d, tgt)
                if not np.array_equal(acc, win[pid]):
                    changed = True
                new[pid] = acc
            win = new
            done += 1
            if not changed:
                return win, done, True
        return win, done, False

    def _move_kill(self, win, q2, a, d, tgt):
        """Cells where Spoiler's move (label a, effect d) defeats every reply."""
        label = self.left.labels[a]
        if self.weak:
            surv = self._weak_survival(win, q2, label, d, tgt)
        else:
            surv = np.zeros((self.size, self.size), dtype=bool)
            rid = self.right.label_id.get(label)
            replies = self.right.by_label[q2].get(rid, []) \
                if rid is not None else []
            for (d2, _g2, t2) in replies:
                surv |= self._reply_survival(win, d, tgt, d2, t2)
        kill = ~surv
        if d == -1:
            kill[0, :] = False          # move unavailable at counter 0
        if d == 1:
            # Spoiler's own counter walks off the grid: resolve by mode,
            # Duplicator-favored unless pessimistic (keeps wins sound)
            kill[self.cap, :] = self.mode.kind == "pessimistic"
        return kill

    def _reply_survival(self, win, d, tgt, d2, t2):
        """Cells (n, n2) where the reply leads to a non-winning position."""
        size = self.size
        out = np.zeros((size, size), dtype=bool)
        pid = self.pair_id.get((tgt, t2))
        pair_name = (self.left.states[tgt], self.right.states[t2])
        if d2 is OMEGA:
            for n in range(size):
                nn = n + d
                if nn < 0 or nn > self.cap:
                    continue
                high = self.mode.high_reply_survives(pair_name, nn)
                if self.full_omega_enum and pid is not None:
                    col = ~win[pid][nn]
                    alive_after = np.zeros(size + 1, dtype=bool)
                    alive_after[:size] = col
                    for m in range(size - 1, -1, -1):
                        alive_after[m] |= alive_after[m + 1]
                    for n2 in range(size):
                        out[n, n2] = high or (n2 + 1 < size
                                              and alive_after[n2 + 1])
                else:
                    # the largest on-grid reply dominates (monotonicity)
                    base = (not win[pid][nn][self.cap]) if pid is not None \
                        else True
                    out[n, :self.cap] = high or base
                    out[n, self.cap] = high
            return out
        if pid is None:
            return out
        tw = win[pid]
        nlo, nhi = max(0, -d), size - max(0, d)
        mlo, mhi = max(0, -d2), size - max(0, d2)
        out[nlo:nhi, mlo:mhi] = ~tw[nlo + d:nhi + d or None,
                                    mlo + d2:mhi + d2 or None]
        if d2 == 1:
            for n in range(size):
                nn = n + d
                if 0 <= nn <= self.cap:
                    out[n, self.cap] |= not self.mode.spoiler_winning(
                        pair_name, nn, self.cap + 1)
        return out

    def _weak_survival(self, win, q2, label, d, tgt):
        size = self.size
        out = np.zeros((size, size), dtype=bool)
        a = self.right.label_id.get(label)
        if a is None and label != "tau":
            return out
        table = self._weak_step[a] if a is not None else self._closure
        notwin = np.zeros((size, self._cells), dtype=bool)
        for r2 in range(self.right.n_states):
            pid = self.pair_id.get((tgt, r2))
            alive = np.ones((size, size), dtype=bool) if pid is None \
                else ~win[pid]
            notwin[:, r2 * size:(r2 + 1) * size] = alive
        shifted = np.zeros((size, self._cells), dtype=bool)
        if d == 0:
            shifted = notwin
        elif d == 1:
            shifted[:size - 1] = notwin[1:]
            shifted[size - 1] = self.mode.kind != "pessimistic"
        else:
            shifted[1:] = notwin[:size - 1]
        post_exc = self._post_exceed.get(a)
        for n2 in range(size):
            c = q2 * size + n2
            row = table[c]
            if row.any():
                out[:, n2] = shifted[:, row].any(axis=1)
            overflow = bool(self._exceed_reach[c]) or \
                (post_exc is not None and bool(post_exc[c]))
            if overflow:
                self._overflow_survival(out, n2, q2, label, d, tgt)
        return out

    def _overflow_survival(self, out, n2, q2, label, d, tgt):
        """Resolve replies that pump the counter past the cap."""
        size = self.size
        if self.mode.kind == "pessimistic":
            return
        if self.mode.column_alive is None:
            out[:, n2] = True       # Duplicator-favored default
            return
        targets = self._state_targets_cache.setdefault(
            (q2, label), sorted(self._weak_target_states(q2, label)))
        for n in range(size):
            nn = n + d
            if nn < 0 or nn > self.cap:
                continue
            for r2 in targets:
                pair = (self.left.states[tgt], self.right.states[r2])
                if self.mode.column_alive(pair, nn):
                    out[n, n2] = True
                    break


def _check_query(lhs, rhs, rounds, grid_cap):
    # zero rounds is a valid (vacuously false) query; negatives are not
    if rounds < 0 or grid_cap <= 0:
        raise NetError("round and grid limits must not be negative or zero")
    if lhs.counter > grid_cap or rhs.counter > grid_cap:
        raise NetError("query counters exceed the grid cap")


def spoiler_wins_within(left_net, right_net, lhs, rhs, rounds, grid_cap,
                        mode, full_omega_enum=False):
    """Backward induction: can Spoiler force a win within `rounds`?"""
    _check_query(lhs, rhs, rounds, grid_cap)
    game = _GridGame(left_net, right_net, (lhs.state, rhs.state), grid_cap,
                     mode, weak=False, full_omega_enum=full_omega_enum)
    win, _, _ = game.run(rounds)
    return bool(win[game.pair_id[game.root]][lhs.counter][rhs.counter])


def weak_spoiler_wins_within(left_net, right_net, lhs, rhs, rounds, grid_cap,
                             mode):
    """Bounded weak game: Duplicator replies along tau* a tau* steps."""
    _check_query(lhs, rhs, rounds, grid_cap)
    game = _GridGame(left_net, right_net, (lhs.state, rhs.state), grid_cap,
                     mode, weak=True)
    win, _, _ = game.run(rounds)
    return bool(win[game.pair_id[game.root]][lhs.counter][rhs.counter])


def bounded_game_verdict(left_net, right_net, lhs, rhs, rounds, grid_cap,
                         mode, weak=False):
    fn = weak_spoiler_wins_within if weak else spoiler_wins_within
    if fn(left_net, right_net, lhs, rhs, rounds, grid_cap, mode):
        return GridVerdict("spoiler-wins", rounds, mode.kind)
    if mode.kind == "optimistic":
        return GridVerdict("inconclusive", rounds, mode.kind)
    return GridVerdict("duplicator-survives", rounds, mode.kind)


def sandwich_decide(left_net, right_net, lhs, rhs, schedule, resolver=None,
                    column_alive=None, weak=False):
    """Escalating optimistic/pessimistic bracket around the true game.

    NotSimulated comes from a pessimistic-side Spoiler win (sound).
    Simulated comes from Duplicator surviving the pessimistic game until it
    stabilizes (the grid then contains a complete winning strategy), or for
    strong games from an optimistic survivor staircase that passes the
    certificate check with off-grid cells resolved through `resolver`.
    """
    # Claims need opposite boundary polarities: a Spoiler win is sound when
    # unknowns favored Duplicator; survival is sound when they favored
    # Spoiler.  Belt-resolved cells are exact and help either claim.
    dup_favored = belt_resolved(resolver, column_alive) if resolver \
        else OPTIMISTIC_MODE
    query_pair = (lhs.state, rhs.state)
    for (rounds, cap) in schedule:
        if max(lhs.counter, rhs.counter) > cap:
            continue
        game = _GridGame(left_net, right_net, query_pair, cap, dup_favored,
                         weak=weak)
        win, used, _ = game.run(rounds, until_stable=True)
        if win[game.pair_id[game.root]][lhs.counter][rhs.counter]:
            return Verdict(NOT_SIMULATED,
                           witness={"kind": "oracle", "rounds": used,
                                    "grid": cap, "mode": dup_favored.kind},
                           stats={"rounds": used, "grid": cap})
        pg = _GridGame(left_net, right_net, query_pair, cap,
                       PESSIMISTIC_MODE, weak=weak)
        pwin, used, stable = pg.run(rounds, until_stable=True)
        if stable and not pwin[pg.pair_id[pg.root]][lhs.counter][rhs.counter]:
            # pessimistic fixpoint reached: survivors form a simulation
            return Verdict(SIMULATED, stats={"rounds": used, "grid": cap,
                                             "closed": True})
        if weak:
            continue
        og = _GridGame(left_net, right_net, query_pair, cap,
                       OPTIMISTIC_MODE, weak=False)
        owin, _, _ = og.run(rounds, until_stable=True)
        thresholds = {}
        for opid, (q, q2) in enumerate(og.pairs):
            pair = (og.left.states[q], og.right.states[q2])
            col = []
            for n in range(cap + 1):
                alive = np.flatnonzero(~owin[opid][n])
                col.append(int(alive[0]) if alive.size else OMEGA)
            thresholds[pair] = col
        cert = GridCertificate(left_net, right_net, thresholds, resolver)
        if cert.member(query_pair, lhs.counter, rhs.counter) \
                and check_yes_certificate(cert, (left_net, right_net)):
            return Verdict(SIMULATED, certificate=cert,
                           stats={"rounds": rounds, "grid": cap})
    return Verdict(UNKNOWN, budget_report={"schedule": list(schedule)})
