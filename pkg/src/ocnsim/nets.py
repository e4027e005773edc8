"""Core data model: one-counter nets, configurations, paths and products.

Nets are immutable after construction; every operation in this module is a
pure function of its inputs, so values can be shared freely across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

__all__ = [
    "OMEGA",
    "Omega",
    "Effect",
    "OCN",
    "OMEGA_NET",
    "GUARDED_OMEGA_NET",
    "RESERVED_PREFIX",
    "DOLLAR",
    "SINK_STATE",
    "NetError",
    "ReservedSymbolError",
    "NotALassoError",
    "Transition",
    "NetDescription",
    "Config",
    "StepSet",
    "Path",
    "ProductGraph",
    "ProductPath",
    "make_net",
    "path_effect",
    "path_guard",
    "enabled_steps",
    "weak_steps",
    "is_non_blocking",
    "is_complete",
    "normalize_pair",
    "product_graph",
    "lasso_split",
    "IndexedNet",
]


class Omega:
    """Extended-integer infinity: larger than every natural, absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA"

    def __eq__(self, other):
        return isinstance(other, Omega)

    def __hash__(self):
        return hash("__omega__")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Omega)

    def __gt__(self, other):
        if isinstance(other, Omega):
            return False
        return True

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("OMEGA has no negation")


OMEGA = Omega()

Effect = "int | Omega"

OCN = "ocn"
OMEGA_NET = "omega"
GUARDED_OMEGA_NET = "guarded-omega"

_KINDS = (OCN, OMEGA_NET, GUARDED_OMEGA_NET)

#: Prefix reserved for symbols introduced by constructions ("$", "$b", "$e",
#: "$f", pair actions, fresh states).  User nets must not use it.
RESERVED_PREFIX = "$"
DOLLAR = "$"
SINK_STATE = "$L"


class NetError(ValueError):
    """Malformed net or invalid operation on a net."""


class ReservedSymbolError(NetError):
    """A user symbol collides with the reserved construction namespace."""


class NotALassoError(NetError):
    """Product path passed to lasso_split has no cycle at its end."""


@dataclass(frozen=True)
class Transition:
    """One transition: guard is 0 for plain nets, effect may be OMEGA."""

    source: str
    label: str
    effect: "int | Omega"
    target: str
    guard: int = 0

    def __repr__(self):
        g = f",g{self.guard}" if self.guard else ""
        return f"({self.source} -{self.label},{self.effect}{g}-> {self.target})"


@dataclass(frozen=True)
class NetDescription:
    """A one-counter net, omega-net or guarded omega-net."""

    name: str
    kind: str
    states: tuple
    alphabet: tuple
    transitions: tuple

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise NetError(f"unknown net kind {self.kind!r}")
        state_set = set(self.states)
        act_set = set(self.alphabet)
        if len(state_set) != len(self.states):
            raise NetError("duplicate states")
        if len(act_set) != len(self.alphabet):
            raise NetError("duplicate actions")
        for t in self.transitions:
            if t.source not in state_set or t.target not in state_set:
                raise NetError(f"transition endpoint not a state: {t}")
            if t.label not in act_set:
                raise NetError(f"transition label not in alphabet: {t}")
            self._check_transition(t)

    def _check_transition(self, t):
        if t.guard < 0:
            raise NetError(f"negative guard: {t}")
        if self.kind == OCN:
            if t.guard != 0:
                raise NetError(f"guard in a plain net: {t}")
            if t.effect not in (-1, 0, 1):
                raise NetError(f"effect out of range for ocn: {t}")
        elif self.kind == OMEGA_NET:
            if t.guard != 0:
                raise NetError(f"guard in an omega-net: {t}")
            if t.effect is not OMEGA and t.effect not in (-1, 0, 1):
                raise NetError(f"effect out of range for omega-net: {t}")
        else:
            if t.effect is not OMEGA and not isinstance(t.effect, int):
                raise NetError(f"bad effect: {t}")

    def out(self, state):
        """All transitions leaving `state`."""
        return tuple(t for t in self.transitions if t.source == state)

    def has_state(self, state):
        return state in self.states

    def with_name(self, name):
        return NetDescription(name, self.kind, self.states, self.alphabet,
                              self.transitions)


def make_net(name, kind, transitions, extra_states=(), extra_actions=()):
    """Build a net, inferring states and alphabet in order of appearance."""
    states, acts = [], []
    seen_s, seen_a = set(), set()

    def add_state(s):
        if s not in seen_s:
            seen_s.add(s)
            states.append(s)

    def add_act(a):
        if a not in seen_a:
            seen_a.add(a)
            acts.append(a)

    for t in transitions:
        add_state(t.source)
        add_act(t.label)
        add_state(t.target)
    for s in extra_states:
        add_state(s)
    for a in extra_actions:
        add_act(a)
    return NetDescription(name, kind, tuple(states), tuple(acts),
                          tuple(transitions))


@dataclass(frozen=True)
class Config:
    """A process: control state plus non-negative counter value."""

    state: str
    counter: int

    def __post_init__(self):
        if self.counter < 0:
            raise NetError(f"negative counter: {self.counter}")

    def __repr__(self):
        return f"{self.state}{self.counter}"


# ---------------------------------------------------------------------------
# Paths


@dataclass(frozen=True)
class Path:
    """Alternating state/transition sequence inside one net."""

    states: tuple
    transitions: tuple

    def __post_init__(self):
        if len(self.states) != len(self.transitions) + 1:
            raise NetError("path shape mismatch")
        for i, t in enumerate(self.transitions):
            if t.source != self.states[i] or t.target != self.states[i + 1]:
                raise NetError(f"path not connected at position {i}")

    @property
    def length(self):
        return len(self.transitions)

    @property
    def source(self):
        return self.states[0]

    @property
    def target(self):
        return self.states[-1]

    def label_word(self):
        return tuple(t.label for t in self.transitions)


def path_effect(path):
    """Sum of effects, saturating to OMEGA as soon as one effect is OMEGA."""
    total = 0
    for t in path.transitions:
        if t.effect is OMEGA:
            return OMEGA
        total += t.effect
    return total


def path_guard(path):
    """Least counter value enabling the path (omega-free prefix for omega-nets)."""
    lowest = 0
    running = 0
    for t in path.transitions:
        if t.effect is OMEGA:
            break
        running += t.effect
        if running < lowest:
            lowest = running
    return -lowest


# ---------------------------------------------------------------------------
# Step semantics


@dataclass(frozen=True)
class StepSet:
    """Enabled steps from a configuration; `unbounded` flags omega steps past cap."""

    steps: tuple
    unbounded: bool = False


def enabled_steps(net, cfg, cap):
    """All steps from `cfg`, enumerating omega successors up to `cap`."""
    if not net.has_state(cfg.state):
        raise NetError(f"unknown state {cfg.state!r} in net {net.name!r}")
    m = cfg.counter
    steps = []
    unbounded = False
    for t in net.out(cfg.state):
        if m < t.guard:
            continue
        if t.effect is OMEGA:
            for n in range(m + 1, cap + 1):
                steps.append((t.label, Config(t.target, n)))
            unbounded = True
        else:
            n = m + t.effect
            if n >= 0:
                steps.append((t.label, Config(t.target, n)))
    return StepSet(tuple(steps), unbounded)


def weak_steps(net, cfg, cap):
    """Weak steps tau* a tau* from `cfg`, counters capped at `cap`.

    Returns (steps, unbounded): `unbounded` is set when a silent positive
    cycle lets the counter exceed the cap.
    """
    silent_reach, silent_unbounded = _tau_closure(net, cfg, cap)
    out = set()
    unbounded = silent_unbounded
    for mid in silent_reach:
        for label, nxt in enabled_steps(net, mid, cap).steps:
            if label == "tau":
                continue
            closure, unb = _tau_closure(net, nxt, cap)
            unbounded = unbounded or unb
            for final in closure:
                out.add((label, final))
    # tau-weak steps: the closure itself
    for final in silent_reach:
        out.add(("tau", final))
    return StepSet(tuple(sorted(out, key=lambda s: (s[0], s[1].state, s[1].counter))),
                   unbounded)


def _tau_closure(net, cfg, cap):
    seen = {cfg}
    frontier = [cfg]
    unbounded = False
    while frontier:
        cur = frontier.pop()
        for t in net.out(cur.state):
            if t.label != "tau" or cur.counter < t.guard:
                continue
            if t.effect is OMEGA:
                unbounded = True
                targets = [Config(t.target, n) for n in range(cur.counter + 1, cap + 1)]
            else:
                n = cur.counter + t.effect
                if n < 0:
                    continue
                if n > cap:
                    unbounded = True
                    continue
                targets = [Config(t.target, n)]
            for nxt in targets:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    return seen, unbounded


# ---------------------------------------------------------------------------
# Normal form


def is_non_blocking(net):
    """Every state has a transition with effect 0 or +1 (no deadlocks)."""
    for s in net.states:
        if not any(t.effect in (0, 1) for t in net.out(s)):
            return False
    return True


def is_complete(net, alphabet=None):
    """Every state has a transition for every action of `alphabet`."""
    acts = net.alphabet if alphabet is None else tuple(alphabet)
    for s in net.states:
        have = {t.label for t in net.out(s)}
        if not set(acts) <= have:
            return False
    return True


def _check_reserved(net):
    # constructions may feed nets that already use the reserved namespace;
    # only the exact symbols added here must be free
    if SINK_STATE in net.states:
        raise ReservedSymbolError(f"state {SINK_STATE!r} already present")
    if DOLLAR in net.alphabet:
        raise ReservedSymbolError(f"action {DOLLAR!r} already present")


def normalize_pair(lhs, rhs):
    """Make the Spoiler net non-blocking and the Duplicator net complete.

    Verdicts for pairs of original states are preserved.  Nets that already
    form a normal-form pair over their shared alphabet are returned with the
    alphabet unified but otherwise untouched.
    """
    if lhs.kind != OCN or rhs.kind != OCN:
        raise NetError("normalize_pair expects two plain one-counter nets")
    shared = list(lhs.alphabet)
    shared += [a for a in rhs.alphabet if a not in lhs.alphabet]

    if is_non_blocking(lhs) and is_complete(rhs, shared):
        left = NetDescription(lhs.name, OCN, lhs.states, tuple(shared),
                              lhs.transitions)
        right = NetDescription(rhs.name, OCN, rhs.states, tuple(shared),
                               rhs.transitions)
        return left, right

    _check_reserved(lhs)
    _check_reserved(rhs)
    full = tuple(shared) + (DOLLAR,)

    left_trans = list(lhs.transitions)
    left_trans += [Transition(s, DOLLAR, 0, s) for s in lhs.states]
    left = NetDescription(lhs.name, OCN, lhs.states, full, tuple(left_trans))

    sink = SINK_STATE
    right_trans = list(rhs.transitions)
    right_trans += [Transition(s, DOLLAR, 0, s) for s in rhs.states]
    right_trans += [Transition(sink, a, -1, sink) for a in full]
    for s in rhs.states:
        have = {t.label for t in rhs.transitions if t.source == s}
        for a in shared:
            if a not in have:
                right_trans.append(Transition(s, a, 0, sink))
    right = NetDescription(rhs.name, OCN, rhs.states + (sink,), full,
                           tuple(right_trans))
    return left, right


# ---------------------------------------------------------------------------
# Product graphs and lassos


@dataclass(frozen=True)
class ProductGraph:
    """Label-synchronized product of two nets' control graphs."""

    left: NetDescription
    right: NetDescription
    nodes: tuple
    edges: tuple  # pairs (t, t') with matching labels

    @property
    def node_count(self):
        return len(self.nodes)

    def out_edges(self, node):
        q, q2 = node
        return tuple((t, t2) for (t, t2) in self.edges
                     if t.source == q and t2.source == q2)


def product_graph(lhs, rhs):
    """Full product: nodes Q x Q', edges all label-matched transition pairs."""
    nodes = tuple(itertools.product(lhs.states, rhs.states))
    by_label = {}
    for t2 in rhs.transitions:
        by_label.setdefault(t2.label, []).append(t2)
    edges = []
    for t in lhs.transitions:
        for t2 in by_label.get(t.label, ()):
            edges.append((t, t2))
    return ProductGraph(lhs, rhs, nodes, tuple(edges))


@dataclass(frozen=True)
class ProductPath:
    """Path in a product graph: node pairs joined by transition pairs."""

    nodes: tuple       # tuples (q, q')
    edges: tuple       # tuples (t, t')

    def __post_init__(self):
        if len(self.nodes) != len(self.edges) + 1:
            raise NetError("product path shape mismatch")
        for i, (t, t2) in enumerate(self.edges):
            if (t.source, t2.source) != self.nodes[i]:
                raise NetError(f"product path not connected at {i}")
            if (t.target, t2.target) != self.nodes[i + 1]:
                raise NetError(f"product path not connected at {i}")
            if t.label != t2.label:
                raise NetError(f"label mismatch at {i}")

    @property
    def length(self):
        return len(self.edges)

    def left_path(self):
        return Path(tuple(n[0] for n in self.nodes),
                    tuple(t for t, _ in self.edges))

    def right_path(self):
        return Path(tuple(n[1] for n in self.nodes),
                    tuple(t2 for _, t2 in self.edges))

    def effects(self):
        return (path_effect(self.left_path()), path_effect(self.right_path()))

    def guards(self):
        return (path_guard(self.left_path()), path_guard(self.right_path()))


def lasso_split(xi):
    """Split a lasso into its acyclic prefix and the cycle closing its end."""
    nodes = xi.nodes
    last = nodes[-1]
    try:
        first = nodes.index(last)
    except ValueError:  # pragma: no cover - index always succeeds on tuples
        raise NotALassoError("path end not found")
    if first == len(nodes) - 1:
        raise NotALassoError("path contains no cycle")
    # the only repetition must close the end
    interior = nodes[:-1]
    if len(set(interior)) != len(interior):
        raise NotALassoError("a strict prefix already contains a cycle")
    prefix = ProductPath(nodes[:first + 1], xi.edges[:first])
    cycle = ProductPath(nodes[first:], xi.edges[first:])
    return prefix, cycle


# ---------------------------------------------------------------------------
# Interning


class IndexedNet:
    """Id-interned view of a net: engines index by ints, not names."""

    def __init__(self, net):
        self.net = net
        self.states = list(net.states)
        self.state_id = {s: i for i, s in enumerate(self.states)}
        self.labels = list(net.alphabet)
        self.label_id = {a: i for i, a in enumerate(self.labels)}
        # out[s] -> list of (label_id, effect, guard, target_id)
        self.out = [[] for _ in self.states]
        for t in net.transitions:
            self.out[self.state_id[t.source]].append(
                (self.label_id[t.label], t.effect, t.guard,
                 self.state_id[t.target]))
        for rows in self.out:
            rows.sort(key=lambda r: (r[0], r[3],
                                     2 if r[1] is OMEGA else r[1], r[2]))
        # by_label[s][a] -> list of (effect, guard, target_id)
        self.by_label = [dict() for _ in self.states]
        for s, rows in enumerate(self.out):
            for (a, d, g, tgt) in rows:
                self.by_label[s].setdefault(a, []).append((d, g, tgt))

    @property
    def n_states(self):
        return len(self.states)
