"""Threshold-staircase fixpoints for simulation games on counter grids.

For each state pair the engine keeps, per Spoiler counter n, the least
Duplicator counter from which Duplicator currently survives (possibly the
OMEGA sentinel).  Monotonicity of one-counter nets makes this staircase view
exact, and it replaces dense 2-d grids: columns are explicit, rows are
implicit.  The open top edge of the classical grid corresponds to the
saturation value `sat`; the open right edge to the per-pair boundary value
used for column `ncols`.

Two modes bracket the true game:

* ``opt``  - over-approximation: unknown regions count as Duplicator wins.
  Every value it ever holds is at most the true threshold, so refutations
  (point below threshold) and OMEGA columns are sound at any stage.
* ``pess`` - under-approximation: unknown regions count as Spoiler wins;
  its fixpoint values are at least the true thresholds, so confirmations
  (point at or above threshold) are sound.

The optimistic run additionally tracks a taint plane: a cell is tainted
when its value derives from the saturation clamp, from an accelerated
(frozen) cell, or from an inexact grid boundary.  Untainted finite values
are genuine fixpoint values independent of the grid size.
"""

from __future__ import annotations

import numpy as np

from .nets import OMEGA, IndexedNet, NetError

__all__ = [
    "OMEGA_VAL",
    "OMEGA_CUT",
    "OPTIMISTIC",
    "PESSIMISTIC",
    "PairSpace",
    "build_pair_space",
    "solve_thresholds",
]

OMEGA_VAL = np.int64(1) << 62
OMEGA_CUT = np.int64(1) << 61

OPTIMISTIC = "opt"
PESSIMISTIC = "pess"


class PairSpace:
    """Reachable label-matched state pairs of a product, with move tables."""

    def __init__(self, left, right, pairs, moves, root_ids):
        self.left = left
        self.right = right
        self.pairs = pairs                      # list of (qid, q2id)
        self.pair_id = {p: i for i, p in enumerate(pairs)}
        self.moves = moves                      # per pair: [(d, [(d2, tpid)])]
        self.root_ids = root_ids
        self.scc_order, self.scc_of, self.scan_bound = self._analyze()

    @property
    def n_pairs(self):
        return len(self.pairs)

    def _analyze(self):
        n = len(self.pairs)
        succ = [set() for _ in range(n)]
        for pid, mvs in enumerate(self.moves):
            for _d, replies in mvs:
                for _d2, tp in replies:
                    succ[pid].add(tp)
        scc_of = _tarjan(succ)
        n_scc = max(scc_of) + 1 if n else 0
        members = [[] for _ in range(n_scc)]
        for pid, s in enumerate(scc_of):
            members[s].append(pid)
        dag = [set() for _ in range(n_scc)]
        for pid in range(n):
            for tp in succ[pid]:
                if scc_of[pid] != scc_of[tp]:
                    dag[scc_of[pid]].add(scc_of[tp])
        topo = _topo_order(dag)
        # process dependencies (successors) first
        order = [members[s] for s in reversed(topo)]
        # node-weighted longest DAG path bounds 1 + longest acyclic path
        weight = [0] * n_scc
        for s in reversed(topo):
            best = 0
            for t in dag[s]:
                best = max(best, weight[t])
            weight[s] = len(members[s]) + best
        bound = max(weight, default=1)
        return order, scc_of, max(1, bound)


def _tarjan(succ):
    """Iterative Tarjan SCC; returns component id per node."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(sorted(succ[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(sorted(succ[w]))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return comp


def _topo_order(dag):
    n = len(dag)
    indeg = [0] * n
    for s in range(n):
        for t in dag[s]:
            indeg[t] += 1
    queue = [s for s in range(n) if indeg[s] == 0]
    order = []
    while queue:
        queue.sort()
        s = queue.pop(0)
        order.append(s)
        for t in sorted(dag[s]):
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    return order


def build_pair_space(left_net, right_net, roots):
    """Pairs reachable from `roots` through label-matched plain steps."""
    left = IndexedNet(left_net)
    right = IndexedNet(right_net)
    for t in left_net.transitions + right_net.transitions:
        if t.effect is OMEGA or t.guard != 0:
            raise NetError("threshold solver expects plain one-counter nets")

    root_pairs = []
    for (q, q2) in roots:
        root_pairs.append((left.state_id[q], right.state_id[q2]))
    pairs = []
    pair_id = {}
    frontier = []
    for p in root_pairs:
        if p not in pair_id:
            pair_id[p] = len(pairs)
            pairs.append(p)
            frontier.append(p)
    raw_moves = {}
    while frontier:
        q, q2 = frontier.pop(0)
        mvs = []
        for (a, d, _g, tgt) in left.out[q]:
            label = left.labels[a]
            replies = []
            for (d2, _g2, tgt2) in right.by_label[q2].get(
                    right.label_id.get(label, -1), []):
                tp = (tgt, tgt2)
                if tp not in pair_id:
                    pair_id[tp] = len(pairs)
                    pairs.append(tp)
                    frontier.append(tp)
                replies.append((d2, tp))
            mvs.append((d, replies))
        raw_moves[(q, q2)] = mvs

    moves = []
    for p in pairs:
        mvs = []
        for (d, replies) in raw_moves[p]:
            seen = set()
            rep = []
            for (d2, tp) in replies:
                key = (d2, pair_id[tp])
                if key not in seen:
                    seen.add(key)
                    rep.append(key)
            mvs.append((d, rep))
        moves.append(mvs)
    root_ids = [pair_id[p] for p in root_pairs]
    return PairSpace(left, right, pairs, moves, root_ids)


def solve_thresholds(space, ncols, mode, sat, boundary=None, lower=None,
                     upper=None, boundary_exact=False, max_sweeps=None):
    """Iterate the staircase operator to its fixpoint.

    boundary: per-pair value used for the off-grid column `ncols`
    lower:    per-pair x column floor (known-out region, e.g. below a belt)
    upper:    per-pair x column ceiling (known-in region, e.g. above a belt)

    Returns (thresholds, taint).  Cells climbing in lockstep for too many
    sweeps get accelerated: pessimistic risers jump to OMEGA (raising the
    floor keeps the fixpoint an over-estimate, the sound direction for that
    mode); optimistic risers are frozen at their current value and tainted.
    """
    n = space.n_pairs
    opt = mode == OPTIMISTIC
    if boundary is None:
        fill = np.int64(0) if opt else OMEGA_VAL
        boundary = np.full(n, fill, dtype=np.int64)
    if lower is None:
        lower = np.zeros((n, ncols), dtype=np.int64)
    else:
        lower = lower.copy()
    if upper is None:
        upper = np.full((n, ncols), OMEGA_VAL, dtype=np.int64)
    sat = np.int64(sat)
    b_taint = not boundary_exact

    f = np.minimum(lower, upper)
    frozen = np.zeros((n, ncols), dtype=bool)
    streak_cap = max(48, ncols)

    def shifted(tp, d, plane):
        col = plane[tp]
        if d == 0:
            return col
        out = np.empty(ncols, dtype=col.dtype)
        if d == 1:
            out[:ncols - 1] = col[1:]
            out[ncols - 1] = boundary[tp] if plane is f else b_taint
        else:
            out[1:] = col[:ncols - 1]
            out[0] = 0 if plane is f else False
        return out

    def sweep(pid):
        acc = lower[pid].copy()
        for (d, replies) in space.moves[pid]:
            if replies:
                req = None
                for (d2, tp) in replies:
                    vals = shifted(tp, d, f)
                    g = np.maximum(np.int64(-d2), vals - np.int64(d2))
                    g = np.where(vals >= OMEGA_CUT, OMEGA_VAL, g)
                    req = g if req is None else np.minimum(req, g)
            else:
                req = np.full(ncols, OMEGA_VAL, dtype=np.int64)
            if d == -1:
                req[0] = 0
            np.maximum(acc, req, out=acc)
        if opt:
            acc = np.where(acc >= OMEGA_CUT, OMEGA_VAL,
                           np.minimum(acc, sat))
        else:
            acc = np.where(acc > sat, OMEGA_VAL, acc)
        np.minimum(acc, upper[pid], out=acc)
        return np.where(frozen[pid], f[pid], acc)

    def accelerate(members, masks):
        for pid in members:
            rising = masks[pid] & (f[pid] < OMEGA_CUT)
            if not rising.any():
                continue
            if opt:
                frozen[pid][rising] = True
            else:
                lower[pid][rising] = OMEGA_VAL
                f[pid][rising] = OMEGA_VAL

    sweeps = 0
    hard_cap = 4 * streak_cap + 256
    for members in space.scc_order:
        stable = False
        streak = 0
        scc_sweeps = 0
        history = []      # last two delta maps, for period-1/2 climbs
        while not stable:
            stable = True
            deltas = {}
            for pid in members:
                new = sweep(pid)
                delta = new - f[pid]
                if delta.any():
                    stable = False
                deltas[pid] = delta
                f[pid] = new
            sweeps += 1
            scc_sweeps += 1
            if max_sweeps is not None and sweeps > max_sweeps:
                raise RuntimeError("threshold fixpoint exceeded sweep budget")
            if stable:
                break
            uniform = any(
                all(np.array_equal(deltas[pid], old[pid])
                    and (deltas[pid] >= 0).all() for pid in members)
                for old in history)
            streak = streak + 1 if uniform else 0
            history = (history + [deltas])[-2:]
            if streak >= streak_cap or scc_sweeps >= hard_cap:
                accelerate(members,
                           {pid: deltas[pid] != 0 for pid in members})
                streak = 0
                scc_sweeps = 0
                history = []

    if not opt:
        return f, frozen.copy()

    # Taint phase: with values fixed, mark cells whose value derives from
    # the saturation clamp, a frozen cell, or an inexact boundary.  The
    # transfer is monotone in the taints, so iterating from all-false
    # terminates at the least taint assignment.
    taint = frozen.copy()

    def taint_sweep(pid):
        acc = lower[pid].copy()
        acc_t = np.zeros(ncols, dtype=bool)
        for (d, replies) in space.moves[pid]:
            if replies:
                req = None
                req_t = None
                for (d2, tp) in replies:
                    vals = shifted(tp, d, f)
                    vt = shifted(tp, d, taint)
                    g = np.maximum(np.int64(-d2), vals - np.int64(d2))
                    g = np.where(vals >= OMEGA_CUT, OMEGA_VAL, g)
                    gt = vt & (g != np.int64(-d2))
                    if req is None:
                        req, req_t = g, gt
                    else:
                        merged = np.minimum(req, g)
                        req_t = (req_t & (req == merged)) | \
                                (gt & (g == merged))
                        req = merged
            else:
                req = np.full(ncols, OMEGA_VAL, dtype=np.int64)
                req_t = np.zeros(ncols, dtype=bool)
            if d == -1:
                req[0] = 0
                req_t[0] = False
            merged = np.maximum(acc, req)
            acc_t = (acc_t & (acc == merged)) | (req_t & (req == merged))
            acc = merged
        acc_t |= (acc > sat) & (acc < OMEGA_CUT)   # clamped by saturation
        acc_t &= ~(acc > upper[pid])               # belt ceilings are exact
        return acc_t | frozen[pid]

    for members in space.scc_order:
        stable = False
        while not stable:
            stable = True
            for pid in members:
                new_t = taint_sweep(pid)
                if (new_t != taint[pid]).any():
                    stable = False
                    taint[pid] = new_t
    return f, taint
