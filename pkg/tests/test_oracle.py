import random

import pytest

from ocnsim.belts import StrongEngine
from ocnsim.nets import (
    OCN,
    OMEGA,
    OMEGA_NET,
    Config,
    NetError,
    Transition,
    make_net,
)
from ocnsim.oracle import (
    OPTIMISTIC_MODE,
    PESSIMISTIC_MODE,
    belt_resolved,
    bounded_game_verdict,
    sandwich_decide,
    spoiler_wins_within,
    weak_spoiler_wins_within,
)
from ocnsim.randomnets import random_pair


def test_pessimistic_finds_the_drain_win(pump):
    assert spoiler_wins_within(pump, pump, Config("p", 5), Config("p", 3),
                               4, 12, PESSIMISTIC_MODE)


def test_optimistic_finds_no_win_on_true_simulation(pump):
    assert not spoiler_wins_within(pump, pump, Config("p", 3), Config("p", 5),
                                   8, 20, OPTIMISTIC_MODE)


def test_zero_rounds_is_never_a_win(pump):
    assert not spoiler_wins_within(pump, pump, Config("p", 9), Config("p", 0),
                                   0, 12, PESSIMISTIC_MODE)
    assert not weak_spoiler_wins_within(pump, pump, Config("p", 9),
                                        Config("p", 0), 0, 12,
                                        PESSIMISTIC_MODE)


def test_nonpositive_grid_is_rejected(pump):
    with pytest.raises(NetError):
        spoiler_wins_within(pump, pump, Config("p", 0), Config("p", 0),
                            4, 0, PESSIMISTIC_MODE)


def test_win_sets_grow_with_rounds(pump):
    hits = [spoiler_wins_within(pump, pump, Config("p", 3), Config("p", 1),
                                k, 16, PESSIMISTIC_MODE)
            for k in range(1, 8)]
    assert hits == sorted(hits)          # once True, stays True


def test_mode_ordering_on_random_instances():
    rng = random.Random(17)
    for i in range(30):
        lhs, rhs = random_pair(rng, i)
        l0, r0 = lhs.states[0], rhs.states[0]
        n, m = rng.randint(0, 3), rng.randint(0, 3)
        k, cap = 6, 12
        opt = spoiler_wins_within(lhs, rhs, Config(l0, n), Config(r0, m),
                                  k, cap, OPTIMISTIC_MODE)
        pess = spoiler_wins_within(lhs, rhs, Config(l0, n), Config(r0, m),
                                   k, cap, PESSIMISTIC_MODE)
        if opt:
            assert pess


def test_configuration_monotonicity(pump):
    for n in range(4):
        for m in range(4):
            win = spoiler_wins_within(pump, pump, Config("p", n),
                                      Config("p", m), 5, 14,
                                      PESSIMISTIC_MODE)
            if win:
                assert spoiler_wins_within(pump, pump, Config("p", n + 1),
                                           Config("p", m), 5, 14,
                                           PESSIMISTIC_MODE)
            else:
                assert not spoiler_wins_within(pump, pump, Config("p", n),
                                               Config("p", m + 1), 5, 14,
                                               PESSIMISTIC_MODE)


def test_largest_omega_reply_matches_full_enumeration():
    spoiler = make_net("s", OCN, [Transition("s", "a", -1, "s"),
                                  Transition("s", "b", 0, "s")])
    dup = make_net("d", OMEGA_NET, [Transition("B", "a", OMEGA, "C"),
                                    Transition("C", "a", -1, "C"),
                                    Transition("C", "b", 0, "C"),
                                    Transition("B", "b", 0, "B")])
    for n in range(4):
        for m in range(4):
            fast = spoiler_wins_within(spoiler, dup, Config("s", n),
                                       Config("B", m), 6, 10,
                                       PESSIMISTIC_MODE)
            slow = spoiler_wins_within(spoiler, dup, Config("s", n),
                                       Config("B", m), 6, 10,
                                       PESSIMISTIC_MODE,
                                       full_omega_enum=True)
            assert fast == slow


def test_weak_game_pumps_before_answering(pump):
    assert not weak_spoiler_wins_within(pump, pump, Config("p", 9),
                                        Config("p", 0), 6, 30,
                                        PESSIMISTIC_MODE)


def test_weak_game_finds_commit_then_drain_win(loop, commit_drain):
    table = {("A", "C"): "notsim"}

    def classify(pair, n, n2):
        return table.get(pair)

    def column_alive(pair, n):
        return pair != ("A", "C")

    mode = belt_resolved(classify, column_alive)
    assert weak_spoiler_wins_within(loop, commit_drain, Config("A", 0),
                                    Config("B", 0), 14, 12, mode)


def test_sandwich_refutes_test_chain():
    from ocnsim.approximants import build_test_chain
    tc = build_test_chain(2, prefix="c")
    v = sandwich_decide(tc.spoiler_net, tc.duplicator_net,
                        Config(tc.spoiler_start, 2),
                        Config(tc.duplicator_start, 3), [(3, 8)])
    assert v.kind == "NotSimulated"
    assert v.witness["rounds"] <= 3


def test_sandwich_certifies_pump_diagonal(pump, pump_engine):
    rep = pump_engine.representation()

    def resolver(pair, n, n2):
        return "sim" if rep.member(pair, n, n2) else "notsim"

    v = sandwich_decide(pump_engine.left, pump_engine.right,
                        Config("p", 2), Config("p", 2), [(48, 20)],
                        resolver=resolver)
    assert v.kind == "Simulated"
    assert v.certificate is not None


def test_sandwich_with_empty_schedule_is_unknown(pump):
    v = sandwich_decide(pump, pump, Config("p", 0), Config("p", 0), [])
    assert v.kind == "Unknown"


def test_grid_verdict_wrapper(pump):
    gv = bounded_game_verdict(pump, pump, Config("p", 5), Config("p", 0),
                              8, 16, PESSIMISTIC_MODE)
    assert gv.kind == "spoiler-wins"
    gv = bounded_game_verdict(pump, pump, Config("p", 0), Config("p", 5),
                              8, 16, OPTIMISTIC_MODE)
    assert gv.kind == "inconclusive"


def test_oracle_agrees_with_engine_on_random_nets():
    rng = random.Random(23)
    checked = 0
    for i in range(25):
        lhs, rhs = random_pair(rng, i)
        engine = StrongEngine(lhs, rhs)
        q, q2 = lhs.states[0], rhs.states[0]
        for n in range(3):
            for m in range(3):
                got = engine.classify_point((q, q2), n, m)
                if got is None:
                    continue
                if got == "notsim":
                    # the engine's refutations replay in the oracle
                    assert spoiler_wins_within(
                        engine.left, engine.right, Config(q, n),
                        Config(q2, m), 24, 40, PESSIMISTIC_MODE)
                else:
                    assert not spoiler_wins_within(
                        engine.left, engine.right, Config(q, n),
                        Config(q2, m), 12, 40, OPTIMISTIC_MODE)
                checked += 1
    assert checked > 50
