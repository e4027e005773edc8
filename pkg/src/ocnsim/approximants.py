"""Finite approximant iteration for OCN-vs-omega-net strong simulation.

Each omega-transition of the Duplicator net is replaced by a defender's
forcing script into a test chain whose length is the sufficient Spoiler
counter value of the previous level.  Chain lengths shrink monotonically,
the Duplicator-side net is constant from level one on, and the iteration
stabilizes at a finite level, at which point plain strong simulation on the
constructed pair coincides with the omega-net game.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .belts import StrongEngine
from .nets import (
    OCN,
    OMEGA,
    OMEGA_NET,
    Config,
    NetDescription,
    NetError,
    Transition,
    make_net,
)
from .reduction import reduce_weak
from .verdicts import Budget, Verdict

__all__ = [
    "TestChainSpec",
    "ApproxNets",
    "ApproximantCapError",
    "build_test_chain",
    "build_Sk",
    "iterate_approximants",
    "decide_weak",
]

E_ACTION = "$e"
F_ACTION = "$f"
WIN_STATE = "$W"


class ApproximantCapError(NetError):
    """Approximant iteration failed to stabilize within its level cap."""

    def __init__(self, history):
        super().__init__(f"no stabilization after {len(history) - 1} levels")
        self.history = history


@dataclass(frozen=True)
class TestChainSpec:
    """Gadget pair deciding 'Spoiler counter >= value' in a continued game."""

    value: "int | object"
    spoiler_net: NetDescription
    duplicator_net: NetDescription
    spoiler_start: str
    duplicator_start: str


def build_test_chain(value, e="e", f="f", prefix="t"):
    """Counter-decreasing e-chain of the given length against an e-loop."""
    dup_state = prefix + "d"
    dup = make_net(prefix + "-dup", OCN,
                   [Transition(dup_state, e, 0, dup_state)])
    if value is OMEGA:
        state = prefix + "w"
        spoiler = make_net(prefix + "-spo", OCN,
                           [Transition(state, e, 0, state)],
                           extra_actions=(f,))
        return TestChainSpec(OMEGA, spoiler, dup, state, dup_state)
    if value < 0:
        raise NetError("chain length must be a natural number")
    states = [f"{prefix}{j}" for j in range(value + 1)]
    trans = [Transition(states[j], e, -1, states[j + 1])
             for j in range(value)]
    trans.append(Transition(states[-1], f, 0, states[-1]))
    spoiler = make_net(prefix + "-spo", OCN, trans, extra_states=states)
    return TestChainSpec(value, spoiler, dup, states[0], dup_state)


@dataclass(frozen=True)
class ApproxNets:
    level: int
    left: NetDescription          # Spoiler side S_k
    right: NetDescription         # Duplicator side S'_k
    pairs: tuple                  # materialized forcing pairs (p, q')
    suff: dict = field(compare=False)
    chain_starts: dict = field(compare=False)


def _pair_action(p, q2):
    return f"$pa:{p}|{q2}"


def _forcing_pairs(left, right, roots):
    """Pairs that can occur right after an omega-step from a reachable pair."""
    omega_edges = [t for t in right.transitions if t.effect is OMEGA]
    by_label = {}
    for t2 in right.transitions:
        by_label.setdefault((t2.source, t2.label), []).append(t2)
    reach = set(roots)
    frontier = list(roots)
    materialized = set()
    while frontier:
        q, q2 = frontier.pop(0)
        for t in left.transitions:
            if t.source != q:
                continue
            for t2 in by_label.get((q2, t.label), ()):
                if t2.effect is OMEGA:
                    materialized.add((t.target, t2.target))
                p = (t.target, t2.target)
                if p not in reach:
                    reach.add(p)
                    frontier.append(p)
    del omega_edges
    return tuple(sorted(materialized))


def build_Sk(left, right, prev_suff, level=1, pairs=None, roots=None):
    """One approximant level: forcing scripts plus per-pair test chains."""
    if left.kind != OCN or right.kind != OMEGA_NET:
        raise NetError("build_Sk expects (ocn, omega-net)")
    if pairs is None:
        if roots is None:
            roots = [(q, q2) for q in left.states for q2 in right.states]
        pairs = _forcing_pairs(left, right, roots)
    pair_actions = {pq: _pair_action(*pq) for pq in pairs}
    suff = {pq: prev_suff.get(pq, OMEGA) for pq in pairs}

    chain_starts = {}
    s_states = list(left.states)
    s_trans = list(left.transitions)
    d_states = list(right.states)
    d_trans = [t for t in right.transitions if t.effect is not OMEGA]

    for idx, pq in enumerate(pairs):
        value = suff[pq]
        spec = build_test_chain(value, e=E_ACTION, f=F_ACTION,
                                prefix=f"$t:{idx}:")
        rename = {s: s for s in spec.spoiler_net.states}
        s_states += [rename[s] for s in spec.spoiler_net.states]
        s_trans += list(spec.spoiler_net.transitions)
        dup_state = f"$u:{idx}"
        d_states.append(dup_state)
        d_trans.append(Transition(dup_state, E_ACTION, 0, dup_state))
        chain_starts[pq] = (spec.spoiler_start, dup_state)
        # Spoiler escape into the chain
        s_trans.append(Transition(pq[0], pair_actions[pq], 0,
                                  chain_starts[pq][0]))

    win = WIN_STATE
    d_states.append(win)
    # forcing moves replacing omega-steps
    for t2 in right.transitions:
        if t2.effect is not OMEGA:
            continue
        for pq in pairs:
            if pq[1] == t2.target:
                d_trans.append(Transition(t2.source, t2.label, 0,
                                          f"$u:{pairs.index(pq)}"))
    # punish a pair-action played while Duplicator is still in the main net
    for q2 in right.states:
        for pq in pairs:
            d_trans.append(Transition(q2, pair_actions[pq], 0, win))
    # chain-side rules
    for idx, pq in enumerate(pairs):
        dup_state = f"$u:{idx}"
        d_trans.append(Transition(dup_state, pair_actions[pq], 0, dup_state))
        for other in pairs:
            if other[0] == pq[0] and other[1] != pq[1]:
                d_trans.append(Transition(dup_state, pair_actions[other], 0,
                                          win))
        for a in right.alphabet:
            d_trans.append(Transition(dup_state, a, 0, win))
    # the universal state answers the whole extended alphabet
    extended = list(dict.fromkeys(
        list(right.alphabet) + [E_ACTION, F_ACTION] +
        [pair_actions[pq] for pq in pairs]))
    for a in extended:
        d_trans.append(Transition(win, a, 0, win))

    s_alphabet = list(dict.fromkeys(
        list(left.alphabet) + [E_ACTION, F_ACTION] +
        [pair_actions[pq] for pq in pairs]))
    s_net = NetDescription(f"{left.name}-S{level}", OCN,
                           tuple(dict.fromkeys(s_states)), tuple(s_alphabet),
                           tuple(s_trans))
    d_net = NetDescription(f"{right.name}-S{level}", OCN,
                           tuple(dict.fromkeys(d_states)), tuple(extended),
                           tuple(d_trans))
    return ApproxNets(level, s_net, d_net, pairs, suff, chain_starts)


def iterate_approximants(left, right, cap=None, budget=None, roots=None,
                         track_pairs=None):
    """Iterate levels until the sufficient-value table repeats.

    The table ranges over the forcing pairs (which parameterize the chains)
    plus any `track_pairs` the caller wants recorded, e.g. original state
    pairs.  Returns (stable_level, history, nets, engine): `engine` decides
    strong simulation on the stabilized pair, which equals the omega-net
    game for original states.
    """
    budget = budget or Budget()
    if left.kind != OCN or right.kind != OMEGA_NET:
        raise NetError("iterate_approximants expects (ocn, omega-net)")
    if roots is None:
        roots = [(q, q2) for q in left.states for q2 in right.states]
    pairs = _forcing_pairs(left, right, roots)
    tracked = list(pairs)
    for pq in track_pairs or ():
        if pq not in tracked:
            tracked.append(pq)
    table = {pq: OMEGA for pq in tracked}
    history = [dict(table)]
    derived_cap = None
    level = 0
    prev_shape = None
    while True:
        level += 1
        if cap is not None and level > cap:
            raise ApproximantCapError(history)
        if derived_cap is not None and level > derived_cap:
            raise ApproximantCapError(history)
        nets = build_Sk(left, right, table, level=level, pairs=pairs)
        if prev_shape is not None:
            assert _shape_key(nets.right) == prev_shape, \
                "Duplicator approximant net must stay constant from level 1"
        prev_shape = _shape_key(nets.right)
        engine = StrongEngine(nets.left, nets.right, budget,
                              belt_node_limit=0)
        new_table = {}
        for pq in tracked:
            new_table[pq] = engine.compute_suff(pq)
        for pq in tracked:
            assert not _suff_lt(table[pq], new_table[pq]), \
                "sufficient values must not increase across levels"
        history.append(dict(new_table))
        if derived_cap is None:
            c1 = max((engine.scan_bound(pq) for pq in pairs), default=1)
            derived_cap = len(tracked) * (c1 + 1) + 2
            derived_cap = min(derived_cap, budget.max_levels) \
                if budget.max_levels else derived_cap
        if new_table == table:
            return level, history, nets, engine
        table = new_table


def _shape_key(net):
    return (tuple(sorted(net.states)), tuple(sorted(net.alphabet)),
            tuple(sorted(net.transitions, key=repr)))


def _suff_lt(a, b):
    if a is OMEGA:
        return False
    if b is OMEGA:
        return True
    return a < b


def decide_weak(lhs_net, rhs_net, lhs, rhs, budget=None):
    """Weak simulation point query via reduction plus approximant iteration."""
    budget = budget or Budget()
    if not lhs_net.has_state(lhs.state):
        raise NetError(f"unknown state {lhs.state!r}")
    if not rhs_net.has_state(rhs.state):
        raise NetError(f"unknown state {rhs.state!r}")
    left, right = reduce_weak(lhs_net, rhs_net)
    level, history, nets, engine = iterate_approximants(
        left, right, budget=budget, roots=[(lhs.state, rhs.state)])
    verdict = engine.decide(lhs, rhs)
    verdict.stats.update({
        "approximant_levels": level,
        "forcing_pairs": len(nets.pairs),
        "spoiler_states": len(nets.left.states),
        "duplicator_states": len(nets.right.states),
        "suff_history": [
            sorted((f"{p}|{q2}", "w" if v is OMEGA else int(v))
                   for (p, q2), v in tbl.items())
            for tbl in history],
    })
    return verdict
