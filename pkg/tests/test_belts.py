import pytest

from ocnsim.belts import StrongEngine, compute_C, compute_belt
from ocnsim.certificates import check_yes_certificate
from ocnsim.geometry import direction
from ocnsim.nets import (
    OCN,
    OMEGA,
    Config,
    NetError,
    Transition,
    make_net,
    normalize_pair,
    product_graph,
)
from ocnsim.approximants import build_test_chain


@pytest.fixture(scope="module")
def chain2_engine():
    tc = build_test_chain(2, prefix="c")
    eng = StrongEngine(tc.spoiler_net, tc.duplicator_net)
    return eng, tc


def test_compute_C_counts_product_nodes(pump):
    assert compute_C(product_graph(pump, pump)) == 1
    two = make_net("two", OCN, [Transition("x", "a", 0, "y"),
                                Transition("y", "a", 0, "x")])
    assert compute_C(product_graph(two, two)) == 4


def test_belt_of_pump_net(pump_engine):
    belt = pump_engine.belt(("p", "p"))
    assert belt.gamma_up == direction(1, 1)
    assert belt.beta_down == direction(2, 1)
    assert not belt.vertical


def test_belt_of_drain_pair_is_vertical(loop, drain):
    eng = StrongEngine(loop, drain)
    belt = eng.belt(("A", "C"))
    assert belt.vertical
    # no point is ever C-above a vertical pair
    assert belt.classify(0, 10 ** 6) != "sim"


def test_belt_of_identical_loops_has_no_spoiler_side(loop):
    other = make_net("loop2", OCN, [Transition("D", "a", 0, "D")])
    eng = StrongEngine(loop, other)
    belt = eng.belt(("A", "D"))
    assert belt.gamma_up == direction(1, 0)
    assert belt.beta_down is None


def test_decide_strong_compares_counters_on_pump(pump_engine):
    assert pump_engine.decide(Config("p", 3), Config("p", 5)).kind == \
        "Simulated"
    assert pump_engine.decide(Config("p", 5), Config("p", 3)).kind == \
        "NotSimulated"


def test_decide_strong_on_test_chain(chain2_engine):
    eng, tc = chain2_engine
    s, d = tc.spoiler_start, tc.duplicator_start
    assert eng.decide(Config(s, 2), Config(d, 7)).kind == "NotSimulated"
    assert eng.decide(Config(s, 1), Config(d, 0)).kind == "Simulated"


def test_decide_strong_on_drain_pair(loop, drain):
    eng = StrongEngine(loop, drain)
    for n in range(5):
        for m in range(5):
            assert eng.decide(Config("A", n), Config("C", m)).kind == \
                "NotSimulated"


def test_decide_strong_rejects_unknown_state(pump_engine):
    with pytest.raises(NetError):
        pump_engine.decide(Config("zzz", 0), Config("p", 0))


def test_suff_of_test_chain_is_its_length(chain2_engine):
    eng, tc = chain2_engine
    assert eng.compute_suff((tc.spoiler_start, tc.duplicator_start)) == 2


def test_suff_of_pump_pair_is_omega(pump_engine):
    assert pump_engine.compute_suff(("p", "p")) is OMEGA


def test_suff_of_drain_pair_is_zero(loop, drain):
    assert StrongEngine(loop, drain).compute_suff(("A", "C")) == 0


def test_suff_finite_implies_bounded_by_width(chain2_engine):
    eng, tc = chain2_engine
    value = eng.compute_suff((tc.spoiler_start, tc.duplicator_start))
    assert value <= eng.C


def test_periodic_representation_of_pump(pump_engine):
    rep = pump_engine.representation()
    pc = rep.colorings[("p", "p")]
    assert pc.period == (1, 1)
    for n in range(30):
        assert pc.threshold(n) == n
    assert check_yes_certificate(rep)


def test_periodic_representation_of_test_chain(chain2_engine):
    eng, tc = chain2_engine
    rep = eng.representation()
    pc = rep.colorings[(tc.spoiler_start, tc.duplicator_start)]
    assert pc.period is None
    for n in range(2):
        assert pc.threshold(n) == 0
    for n in range(2, 10):
        assert pc.threshold(n) is OMEGA


def test_representation_of_universal_pair(loop):
    other = make_net("loop2", OCN, [Transition("D", "a", 0, "D")])
    eng = StrongEngine(loop, other)
    rep = eng.representation()
    pc = rep.colorings[("A", "D")]
    for n in range(10):
        for m in range(4):
            assert pc.member(n, m)
    assert check_yes_certificate(rep)


def test_certificate_check_catches_a_deleted_point(pump_engine):
    rep = pump_engine.representation()
    assert check_yes_certificate(rep)
    assert not check_yes_certificate(rep, exclude={(("p", "p"), 1, 1)})


def test_empty_relation_certifies_vacuously(loop, drain):
    eng = StrongEngine(loop, drain)
    rep = eng.representation()
    pc = rep.colorings[("A", "C")]
    assert all(v is OMEGA for v in pc.explicit)
    assert check_yes_certificate(rep)


def test_simulated_verdicts_carry_checkable_certificates(pump_engine):
    v = pump_engine.decide(Config("p", 2), Config("p", 4))
    assert v.certificate is not None
    assert v.certificate.member(("p", "p"), 2, 4)
    assert check_yes_certificate(v.certificate)


def test_witness_replays_in_the_oracle(pump_engine):
    from ocnsim.oracle import PESSIMISTIC_MODE, spoiler_wins_within
    v = pump_engine.decide(Config("p", 6), Config("p", 1))
    assert v.kind == "NotSimulated"
    w = v.witness
    assert w["kind"] == "oracle"
    assert spoiler_wins_within(pump_engine.left, pump_engine.right,
                               Config("p", 6), Config("p", 1),
                               w["rounds"], w["grid"], PESSIMISTIC_MODE)


def test_compute_belt_standalone(pump):
    left, right = normalize_pair(pump, pump)
    prod = product_graph(left, right)
    belt = compute_belt(("p", "p"), prod, compute_C(prod))
    assert belt.gamma_up == direction(1, 1)
    assert belt.beta_down == direction(2, 1)
