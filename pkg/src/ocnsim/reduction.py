"""Reduction of weak simulation to strong simulation against an omega-net.

Silent pumping cycles of the Duplicator net become omega-transitions of a
guarded intermediate net; guards and large effects are then compiled away by
expanding every game round into a fixed number of unit-effect rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nets import (
    GUARDED_OMEGA_NET,
    OCN,
    OMEGA,
    OMEGA_NET,
    NetDescription,
    NetError,
    RESERVED_PREFIX,
    Transition,
    make_net,
)

__all__ = [
    "SilentPathSummary",
    "ExpansionParams",
    "PathOracle",
    "silent_direct_paths",
    "build_guarded_omega",
    "normalize_effects",
    "reduce_weak",
    "DEFAULT_STATE_LIMIT",
]

#: Acyclic-path enumeration is exponential in the state count; refuse larger
#: inputs instead of hanging.
DEFAULT_STATE_LIMIT = 12

BRIDGE = "$b"


@dataclass(frozen=True)
class SilentPathSummary:
    """(guard, effect) summaries of direct paths between two states."""

    source: str
    target: str
    direct: tuple            # all direct paths
    silent_direct: tuple     # the silent subset
    positive_silent_cycles: tuple  # (guard, effect>0), only when source==target


@dataclass(frozen=True)
class ExpansionParams:
    gamma_max: int
    delta_max: int
    rounds: int              # k = 2*gamma + delta + 1 (bumped for omega slots)


def _concat(a, b):
    """Guard/effect of a path concatenation from the parts' summaries."""
    (g1, d1), (g2, d2) = a, b
    return (max(g1, g2 - d1), d1 + d2)


class PathOracle:
    """Direct-path summaries for every state pair of one net."""

    def __init__(self, net, state_limit=DEFAULT_STATE_LIMIT):
        if len(net.states) > state_limit:
            raise NetError(
                f"net has {len(net.states)} states; acyclic-path enumeration "
                f"is limited to {state_limit}")
        self.net = net
        self.direct = {(s, t): set() for s in net.states for t in net.states}
        self.silent = {(s, t): set() for s in net.states for t in net.states}
        self.pos_cycles = {s: set() for s in net.states}
        self._enumerate()

    def _enumerate(self):
        out = {s: [t for t in self.net.transitions if t.source == s]
               for s in self.net.states}
        for start in self.net.states:
            self.direct[(start, start)].add((0, 0))
            self.silent[(start, start)].add((0, 0))
            stack = [(start, {start}, 0, 0, True)]
            while stack:
                state, visited, guard, effect, is_silent = stack.pop()
                for t in out[state]:
                    g, d = _concat((guard, effect),
                                   (max(0, -t.effect), t.effect))
                    silent = is_silent and t.label == "tau"
                    if t.target == start:
                        if silent and d > 0:
                            self.pos_cycles[start].add((g, d))
                        continue
                    if t.target in visited:
                        continue
                    self.direct[(start, t.target)].add((g, d))
                    if silent:
                        self.silent[(start, t.target)].add((g, d))
                    stack.append((t.target, visited | {t.target}, g, d,
                                  silent))

    def summary(self, s, t):
        return SilentPathSummary(
            s, t,
            tuple(sorted(self.direct[(s, t)])),
            tuple(sorted(self.silent[(s, t)])),
            tuple(sorted(self.pos_cycles[s])) if s == t else (),
        )


def silent_direct_paths(net, s, t, state_limit=DEFAULT_STATE_LIMIT):
    """Direct and silent-direct path summaries from s to t."""
    if not net.has_state(s) or not net.has_state(t):
        raise NetError(f"unknown state in ({s!r}, {t!r})")
    return PathOracle(net, state_limit).summary(s, t)


def _pareto_finite(entries):
    """Keep (guard, effect) pairs not dominated by lower-guard higher-effect."""
    best = []
    for (g, d) in sorted(entries):
        if not any(g2 <= g and d2 >= d for (g2, d2) in best):
            best = [(g2, d2) for (g2, d2) in best
                    if not (g <= g2 and d >= d2)]
            best.append((g, d))
    return sorted(best)


def build_guarded_omega(net, state_limit=DEFAULT_STATE_LIMIT):
    """Compile weak steps of a plain net into one guarded omega-net step each.

    Every weak step of the input is dominated by some step of the result and
    vice versa, which preserves being simulated from the Duplicator side.
    """
    if net.kind != OCN:
        raise NetError("build_guarded_omega expects a plain one-counter net")
    po = PathOracle(net, state_limit)
    states = net.states
    q_count = len(states)
    finite = {}
    omegas = {}
    gamma_max = 0
    delta_max = 0

    def note(g, d):
        nonlocal gamma_max, delta_max
        gamma_max = max(gamma_max, g)
        if d is not OMEGA:
            delta_max = max(delta_max, abs(d))

    for t in net.transitions:
        tg = (max(0, -t.effect), t.effect)
        for p in states:
            for pre in po.silent[(p, t.source)]:
                head = _concat(pre, tg)
                for q in states:
                    for post in po.silent[(t.target, q)]:
                        g, d = _concat(head, post)
                        note(g, d)
                        finite.setdefault((p, t.label, q), set()).add((g, d))
    # pumping before the visible step
    for pump in states:
        cycles = po.pos_cycles[pump]
        if not cycles:
            continue
        for p in states:
            if not po.silent[(p, pump)]:
                continue
            guards = sorted({max(g1, gc - d1)
                             for (g1, d1) in po.silent[(p, pump)]
                             for (gc, _dc) in cycles})
            g = guards[0]
            for t in net.transitions:
                if not po.silent[(pump, t.source)]:
                    continue
                for q in states:
                    if po.silent[(t.target, q)]:
                        note(g, OMEGA)
                        omegas.setdefault((p, t.label, q), set()).add(g)
    # pumping after the visible step
    for t in net.transitions:
        tg = (max(0, -t.effect), t.effect)
        for pump in states:
            cycles = po.pos_cycles[pump]
            if not cycles or not po.silent[(t.target, pump)]:
                continue
            for p in states:
                for pre in po.silent[(p, t.source)]:
                    head = _concat(pre, tg)
                    for mid in po.silent[(t.target, pump)]:
                        body = _concat(head, mid)
                        for (gc, dc) in cycles:
                            g, _ = _concat(body, (gc, dc))
                            for q in states:
                                if po.silent[(pump, q)]:
                                    note(g, OMEGA)
                                    omegas.setdefault(
                                        (p, t.label, q), set()).add(g)

    transitions = []
    for key in sorted(set(finite) | set(omegas)):
        p, a, q = key
        og = min(omegas[key]) if key in omegas else None
        if og is not None:
            transitions.append(Transition(p, a, OMEGA, q, guard=og))
        for (g, d) in _pareto_finite(finite.get(key, ())):
            transitions.append(Transition(p, a, d, q, guard=g))

    assert gamma_max <= 3 * q_count + 1, "guard bound exceeded"
    assert delta_max <= 2 * q_count + 1, "effect bound exceeded"
    result = NetDescription(net.name + "-gw", GUARDED_OMEGA_NET, net.states,
                            net.alphabet, tuple(transitions))
    return result, ExpansionParams(gamma_max, delta_max,
                                   _round_count(gamma_max, delta_max,
                                                transitions))


def _round_count(gamma_max, delta_max, transitions):
    k = 2 * gamma_max + delta_max + 1
    for t in transitions:
        if t.effect is OMEGA:
            k = max(k, 2 * t.guard + 2)  # the omega slot needs its own round
    return k


def _effect_list(guard, effect, k):
    body = [-1] * guard + [1] * guard
    if effect is OMEGA:
        body.append(OMEGA)
    elif effect >= 0:
        body += [1] * effect
    else:
        body += [-1] * (-effect)
    assert len(body) <= k - 1 or (k == 1 and not body)
    return body + [0] * (k - 1 - len(body))


def normalize_effects(spoiler_net, guarded_net):
    """Expand each game round into k unit-effect rounds, removing guards.

    A step p -a-> q of either original net corresponds exactly to the block
    p -a-> . -b-> ... -b-> q of k steps (one entry plus k-1 bridge steps) in
    its expansion.
    """
    if spoiler_net.kind != OCN or guarded_net.kind != GUARDED_OMEGA_NET:
        raise NetError("normalize_effects expects (ocn, guarded-omega)")
    params = ExpansionParams(
        max((t.guard for t in guarded_net.transitions), default=0),
        max((abs(t.effect) for t in guarded_net.transitions
             if t.effect is not OMEGA), default=0),
        _round_count(
            max((t.guard for t in guarded_net.transitions), default=0),
            max((abs(t.effect) for t in guarded_net.transitions
                 if t.effect is not OMEGA), default=0),
            guarded_net.transitions))
    k = params.rounds

    left_trans = []
    left_states = list(spoiler_net.states)
    if k == 1:
        left_trans = list(spoiler_net.transitions)
    else:
        chain_of = {}
        for q in spoiler_net.states:
            names = [f"$s:{q}:{j}" for j in range(1, k)]
            chain_of[q] = names
            left_states += names
            for j in range(k - 2):
                left_trans.append(Transition(names[j], BRIDGE, 0,
                                             names[j + 1]))
            left_trans.append(Transition(names[-1], BRIDGE, 0, q))
        for t in spoiler_net.transitions:
            left_trans.append(Transition(t.source, t.label, t.effect,
                                         chain_of[t.target][0]))
    left = NetDescription(spoiler_net.name + "-x", OCN, tuple(left_states),
                          spoiler_net.alphabet + (BRIDGE,),
                          tuple(left_trans))

    right_trans = []
    right_states = list(guarded_net.states)
    chain_id = {}
    for t in sorted(guarded_net.transitions,
                    key=lambda t: (t.source, t.label, t.guard,
                                   2 if t.effect is OMEGA else t.effect,
                                   t.target)):
        if k == 1:
            right_trans.append(Transition(t.source, t.label, t.effect,
                                          t.target))
            continue
        body = tuple(_effect_list(t.guard, t.effect, k))
        key = (body, t.target)
        if key not in chain_id:
            idx = len(chain_id)
            chain_id[key] = idx
            names = [f"$c:{idx}:{j}" for j in range(1, k)]
            right_states += names
            for j in range(k - 1):
                src = names[j]
                dst = names[j + 1] if j + 1 < k - 1 else t.target
                right_trans.append(Transition(src, BRIDGE, body[j], dst))
        first = f"$c:{chain_id[key]}:1"
        right_trans.append(Transition(t.source, t.label, 0, first))
    right = NetDescription(guarded_net.name + "-x", OMEGA_NET,
                           tuple(right_states),
                           guarded_net.alphabet + (BRIDGE,),
                           tuple(right_trans))
    assert len(right.states) <= len(guarded_net.states) + \
        k * max(1, len(guarded_net.transitions)), "expansion size bound"
    return left, right


def reduce_weak(lhs, rhs, state_limit=DEFAULT_STATE_LIMIT):
    """Full pipeline: weak simulation on (lhs, rhs) equals strong simulation
    on the result pair, for pairs of original states."""
    if lhs.kind != OCN or rhs.kind != OCN:
        raise NetError("reduce_weak expects two plain one-counter nets")
    for name in lhs.states + rhs.states + lhs.alphabet + rhs.alphabet:
        if name.startswith(RESERVED_PREFIX):
            raise NetError(f"reserved symbol in input: {name!r}")
    guarded, _params = build_guarded_omega(rhs, state_limit)
    return normalize_effects(lhs, guarded)
