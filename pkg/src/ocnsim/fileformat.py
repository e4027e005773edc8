"""Textual net files: parsing with located diagnostics, and serialization.

Format::

    net: <name>
    type: ocn | omega
    alphabet: a b tau ...
    # comment
    src action delta dst     (delta in {-1, 0, +1, w}; w only in omega files)

A `reserved: internal` header line lets a file use the construction
namespace (symbols starting with "$"); the serializer emits it for compiled
nets so they round-trip, while hand-written files stay collision-free.
"""

from __future__ import annotations

from .nets import (
    OCN,
    OMEGA,
    OMEGA_NET,
    NetDescription,
    RESERVED_PREFIX,
    Transition,
)

__all__ = ["ParseError", "parse_net", "serialize_net"]


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column else "") \
                + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


_DELTAS = {"-1": -1, "0": 0, "1": 1, "+1": 1, "w": OMEGA}


def _check_symbol(token, what, line, col):
    if token.startswith(RESERVED_PREFIX):
        raise ParseError(
            f"{what} {token!r} uses the reserved '{RESERVED_PREFIX}' prefix",
            line, col)


def parse_net(text):
    """Parse one net description; raises ParseError with a location."""
    name = None
    kind = None
    alphabet = None
    allow_reserved = False
    transitions = []
    states = []
    seen_states = set()

    def note_state(s):
        if s not in seen_states:
            seen_states.add(s)
            states.append(s)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("net:"):
            name = line[4:].strip()
            if not name:
                raise ParseError("empty net name", lineno)
            continue
        if line.startswith("reserved:"):
            if line[9:].strip() != "internal":
                raise ParseError("reserved header must read 'internal'",
                                 lineno)
            allow_reserved = True
            continue
        if line.startswith("type:"):
            value = line[5:].strip()
            if value not in (OCN, OMEGA_NET):
                raise ParseError(f"unknown net type {value!r}", lineno)
            kind = value
            continue
        if line.startswith("alphabet:"):
            alphabet = line[9:].split()
            if not alphabet:
                raise ParseError("empty alphabet", lineno)
            if not allow_reserved:
                for i, a in enumerate(alphabet):
                    _check_symbol(a, "action", lineno, i + 1)
            if len(set(alphabet)) != len(alphabet):
                raise ParseError("duplicate action in alphabet", lineno)
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(
                f"expected 'src action delta dst', got {len(parts)} fields",
                lineno)
        src, action, delta, dst = parts
        if not allow_reserved:
            _check_symbol(src, "state", lineno, 1)
            _check_symbol(dst, "state", lineno, 4)
        if alphabet is None:
            raise ParseError("transition before the alphabet line", lineno)
        if action not in alphabet:
            raise ParseError(f"unknown action {action!r}", lineno, 2)
        if delta not in _DELTAS:
            raise ParseError(f"delta out of range: {delta!r}", lineno, 3)
        effect = _DELTAS[delta]
        if effect is OMEGA and kind != OMEGA_NET:
            raise ParseError("omega effect 'w' needs type: omega", lineno, 3)
        note_state(src)
        note_state(dst)
        transitions.append(Transition(src, action, effect, dst))

    if name is None:
        raise ParseError("missing 'net:' header")
    if kind is None:
        raise ParseError("missing 'type:' header")
    if alphabet is None:
        raise ParseError("missing 'alphabet:' header")
    if not states:
        raise ParseError("net has no states (no transitions)")
    return NetDescription(name, kind, tuple(states), tuple(alphabet),
                          tuple(transitions))


def serialize_net(net):
    """Canonical text form; parse(serialize(parse(x))) == parse(x)."""
    if net.kind not in (OCN, OMEGA_NET):
        raise ValueError("only plain and omega nets have a file form")
    lines = [f"net: {net.name}", f"type: {net.kind}"]
    if any(s.startswith(RESERVED_PREFIX) for s in net.states + net.alphabet):
        lines.append("reserved: internal")
    lines.append("alphabet: " + " ".join(net.alphabet))
    for t in net.transitions:
        delta = "w" if t.effect is OMEGA else str(t.effect)
        lines.append(f"{t.source} {t.label} {delta} {t.target}")
    return "\n".join(lines) + "\n"
