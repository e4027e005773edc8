import random

import pytest

from ocnsim.nets import (
    GUARDED_OMEGA_NET,
    OCN,
    OMEGA,
    Config,
    NetDescription,
    NetError,
    Transition,
    enabled_steps,
    make_net,
    weak_steps,
)
from ocnsim.randomnets import random_ocn
from ocnsim.reduction import (
    build_guarded_omega,
    normalize_effects,
    reduce_weak,
    silent_direct_paths,
)

CAP = 12


def guarded_steps(net, cfg, cap):
    return set(enabled_steps(net, cfg, cap).steps), \
        enabled_steps(net, cfg, cap).unbounded


def test_silent_paths_of_commit_drain(commit_drain):
    summary = silent_direct_paths(commit_drain, "B", "B")
    assert summary.silent_direct == ((0, 0),)        # only the empty path
    assert summary.positive_silent_cycles == ((0, 1),)


def test_silent_paths_without_tau(loop):
    assert silent_direct_paths(loop, "A", "A").silent_direct == ((0, 0),)
    two = make_net("two", OCN, [Transition("X", "a", 0, "Y")])
    assert silent_direct_paths(two, "X", "Y").silent_direct == ()


def test_guarded_net_of_commit_drain(commit_drain):
    guarded, params = build_guarded_omega(commit_drain)
    assert guarded.kind == GUARDED_OMEGA_NET
    tuples = {(t.source, t.label, t.guard, t.effect, t.target)
              for t in guarded.transitions}
    assert ("B", "a", 0, OMEGA, "C") in tuples
    assert ("B", "a", 0, 0, "C") in tuples
    # the drain loop carries its enabling guard; steps are unchanged either way
    assert any(t.source == "C" and t.label == "a" and t.effect == -1
               for t in guarded.transitions)
    for m in range(4):
        got, _ = guarded_steps(guarded, Config("C", m), CAP)
        want = {("a", Config("C", m - 1))} if m >= 1 else set()
        assert {s for s in got if s[1].state == "C" and s[1].counter == m - 1} \
            == want


def test_guarded_net_bounds_hold_on_random_nets():
    rng = random.Random(31)
    for i in range(100):
        net = random_ocn(rng, f"n{i}", max_states=6, max_transitions=10,
                         allow_tau=True)
        guarded, params = build_guarded_omega(net)
        q = len(net.states)
        for t in guarded.transitions:
            assert t.guard <= 3 * q + 1
            if t.effect is not OMEGA:
                assert abs(t.effect) <= 2 * q + 1


def test_weak_steps_dominated_both_ways(commit_drain):
    # every weak step is dominated by a guarded step and vice versa
    guarded, _ = build_guarded_omega(commit_drain)
    for state in commit_drain.states:
        for m in range(5):
            weak = weak_steps(commit_drain, Config(state, m), CAP)
            gsteps = enabled_steps(guarded, Config(state, m), CAP)
            for (label, tgt) in weak.steps:
                if label == "tau" and tgt == Config(state, m):
                    continue     # the empty weak step has no transition
                assert any(gl == label and g.state == tgt.state
                           and g.counter >= tgt.counter
                           for (gl, g) in gsteps.steps) or gsteps.unbounded
            for (label, tgt) in gsteps.steps:
                assert any(wl == label and w.state == tgt.state
                           and w.counter >= tgt.counter
                           for (wl, w) in weak.steps) or weak.unbounded


def test_round_count_from_actual_maxima():
    net = make_net("tiny", OCN, [Transition("X", "a", 1, "X")])
    guarded, params = build_guarded_omega(net)
    assert (params.gamma_max, params.delta_max) == (0, 1)
    assert params.rounds == 2
    left, right = normalize_effects(net, guarded)
    # one original step becomes the action then exactly one bridge step
    entry = [t for t in left.transitions if t.label == "a"]
    assert len(entry) == 1 and entry[0].target.startswith("$s:")
    bridges = [t for t in left.transitions if t.label == "$b"]
    assert len(bridges) == 1 and bridges[0].target == "X"


def test_guard_chain_blocks_low_counters():
    guarded = NetDescription("g2", GUARDED_OMEGA_NET, ("P", "Q"), ("a",),
                             (Transition("P", "a", 0, "Q", guard=2),))
    spoiler = make_net("s", OCN, [Transition("S", "a", 0, "S")])
    left, right = normalize_effects(spoiler, guarded)
    # block = a then k-1 bridges; the chain descends twice then ascends twice
    k = 2 * 2 + 0 + 1
    for m in (0, 1, 2, 3):
        cfgs = [Config("P", m)]
        for _ in range(k):
            nxt = []
            for cfg in cfgs:
                for (_l, tgt) in enabled_steps(right, cfg, 20).steps:
                    nxt.append(tgt)
            cfgs = nxt
        reached = {c for c in cfgs if c.state == "Q"}
        if m >= 2:
            assert reached == {Config("Q", m)}
        else:
            assert reached == set()      # stuck mid-chain


def _block_steps(net, cfg, k, cap):
    """Targets of one a-labelled k-step block (entry plus k-1 bridges)."""
    outs = {}
    start = enabled_steps(net, cfg, cap)
    frontier = {}
    for (label, tgt) in start.steps:
        if label in ("$b",):
            continue
        frontier.setdefault(label, set()).add(tgt)
    unbounded = start.unbounded
    for label, cfgs in frontier.items():
        for _ in range(k - 1):
            nxt = set()
            for c in cfgs:
                st = enabled_steps(net, c, cap)
                unbounded = unbounded or st.unbounded
                for (l2, t2) in st.steps:
                    if l2 == "$b":
                        nxt.add(t2)
            cfgs = nxt
        outs[label] = {c for c in cfgs if not c.state.startswith("$")}
    return outs, unbounded


def test_step_correspondence_on_commit_drain(commit_drain):
    guarded, params = build_guarded_omega(commit_drain)
    left, right = normalize_effects(commit_drain, guarded)
    k = params.rounds
    for state in guarded.states:
        for m in range(CAP - 1):
            direct = {}
            gst = enabled_steps(guarded, Config(state, m), CAP)
            for (label, tgt) in gst.steps:
                direct.setdefault(label, set()).add(tgt)
            blocks, unb = _block_steps(right, Config(state, m), k, CAP)
            for label in set(direct) | set(blocks):
                want = {c for c in direct.get(label, set())
                        if c.counter <= CAP - 1}
                got = {c for c in blocks.get(label, set())
                       if c.counter <= CAP - 1}
                assert want == got, (state, m, label)


def test_reduce_weak_rejects_reserved_inputs(pump):
    bad = make_net("bad", OCN, [Transition("$x", "a", 0, "$x")])
    with pytest.raises(NetError):
        reduce_weak(pump, bad)


def test_reduce_weak_keeps_original_states(pump, commit_drain):
    left, right = reduce_weak(pump, commit_drain)
    assert set(pump.states) <= set(left.states)
    assert set(commit_drain.states) <= set(right.states)
    assert left.kind == OCN and right.kind == "omega"


def test_expansion_size_bound(commit_drain):
    guarded, params = build_guarded_omega(commit_drain)
    left, right = normalize_effects(commit_drain, guarded)
    assert len(right.states) <= len(guarded.states) + \
        params.rounds * len(guarded.transitions)
