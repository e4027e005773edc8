"""Small net families used throughout the tests and demos."""

from __future__ import annotations

from .nets import OCN, NetDescription, Transition, make_net

__all__ = [
    "pump_drain_net",
    "single_loop_net",
    "drain_loop_net",
    "commit_then_drain_net",
    "ladder_net",
]


def pump_drain_net(name="pump-drain"):
    """One state: a drains the counter, a silent step refills it.

    Strong simulation between its configurations compares counters exactly;
    weak simulation relates everything (the silent loop pumps first).
    """
    return make_net(name, OCN, [
        Transition("p", "a", -1, "p"),
        Transition("p", "tau", 1, "p"),
    ])


def single_loop_net(label="a", state="A", name="loop"):
    """One state looping on one visible action with effect 0."""
    return make_net(name, OCN, [Transition(state, label, 0, state)])


def drain_loop_net(label="a", state="C", name="drain"):
    """One state whose only loop strictly decreases the counter."""
    return make_net(name, OCN, [Transition(state, label, -1, state)])


def commit_then_drain_net(name="commit-drain"):
    """Silent pump at B, then a commits to the draining state C.

    Weakly, B0 eventually loses against a plain a-loop: any pumped value
    drains after finitely many visible steps.
    """
    return make_net(name, OCN, [
        Transition("B", "tau", 1, "B"),
        Transition("B", "a", 0, "C"),
        Transition("C", "a", -1, "C"),
    ])


def ladder_net(k, name=None):
    """k-rung ladder of pump/commit stages; rung i survives omega*i rounds."""
    trans = []
    for i in range(k + 1):
        trans.append(Transition(f"C{i}", "a", -1, f"C{i}"))
        trans.append(Transition(f"B{i}", "tau", 0, f"C{i}"))
        trans.append(Transition(f"B{i}", "tau", 1, f"B{i}"))
        trans.append(Transition(f"C{i + 1}", "tau", 0, f"B{i}"))
    return make_net(name or f"ladder-{k}", OCN, trans)
