import random

import pytest

from ocnsim.geometry import candidate_directions, direction, sector_index
from ocnsim.nets import OCN, Transition, make_net, normalize_pair, \
    product_graph
from ocnsim.randomnets import random_pair
from ocnsim.slopegame import (
    CONTINUE,
    DUPLICATOR,
    DUPLICATOR_IMMEDIATE,
    NotNormalFormError,
    SPOILER,
    SPOILER_IMMEDIATE,
    SlopeGameSolver,
    evaluate_lasso,
    solve_slope_game,
)


def normalized_product(lhs, rhs):
    left, right = normalize_pair(lhs, rhs)
    return product_graph(left, right)


def test_evaluate_lasso_cases():
    d = direction(1, 1)
    assert evaluate_lasso((0, -1), d).kind == SPOILER_IMMEDIATE
    assert evaluate_lasso((-1, 0), d).kind == DUPLICATOR_IMMEDIATE
    assert evaluate_lasso((0, 0), d).kind == DUPLICATOR_IMMEDIATE
    cont = evaluate_lasso((2, 1), direction(1, 1))
    assert cont.kind == CONTINUE and cont.next_slope == direction(2, 1)


def test_forced_duplicator_drain_loses_everywhere():
    spo = make_net("s", OCN, [Transition("s", "a", 0, "s")])
    dup = make_net("d", OCN, [Transition("d", "a", -1, "d")])
    prod = normalized_product(spo, dup)
    solver = SlopeGameSolver(prod)
    for slope in [direction(1, 3), direction(1, 1), direction(3, 1)]:
        assert solver.solve(("s", "d"), slope).winner == SPOILER


def test_forced_spoiler_drain_wins_nothing():
    spo = make_net("s", OCN, [Transition("s", "a", -1, "s")])
    dup = make_net("d", OCN, [Transition("d", "a", 0, "d")])
    prod = normalized_product(spo, dup)
    solver = SlopeGameSolver(prod)
    for slope in [direction(1, 3), direction(1, 1), direction(3, 1),
                  direction(1, 0)]:
        assert solver.solve(("s", "d"), slope).winner == DUPLICATOR


def test_pump_net_switches_at_the_diagonal(pump):
    prod = normalized_product(pump, pump)
    solver = SlopeGameSolver(prod)
    assert solver.solve(("p", "p"), direction(1, 2)).winner == DUPLICATOR
    assert solver.solve(("p", "p"), direction(1, 1)).winner == DUPLICATOR
    assert solver.solve(("p", "p"), direction(2, 1)).winner == SPOILER


def test_refuses_nets_not_in_normal_form(pump):
    blocked = make_net("b", OCN, [Transition("q", "a", -1, "q")])
    with pytest.raises(NotNormalFormError):
        SlopeGameSolver(product_graph(blocked, pump))


def test_solver_is_deterministic(pump):
    prod = normalized_product(pump, pump)
    first = solve_slope_game(("p", "p"), direction(2, 1), prod)
    second = solve_slope_game(("p", "p"), direction(2, 1), prod)
    assert (first.winner, first.phases_used) == \
        (second.winner, second.phases_used)


def test_random_games_respect_phase_bound_and_monotonicity():
    rng = random.Random(42)
    for i in range(40):
        lhs, rhs = random_pair(rng, i)
        left, right = normalize_pair(lhs, rhs)
        prod = product_graph(left, right)
        solver = SlopeGameSolver(prod)
        probes = [direction(0, 1), direction(1, 2), direction(1, 1),
                  direction(2, 1), direction(1, 0)]
        pair = (left.states[0], right.states[0])
        results = [solver.solve(pair, s) for s in probes]
        for r in results:
            assert r.phases_used <= (prod.node_count + 1) ** 2
        # Spoiler's winning set is closed under flattening
        for i2, r in enumerate(results):
            if r.winner == SPOILER:
                for r2 in results[i2 + 1:]:
                    assert r2.winner == SPOILER


def test_sector_invariance_on_probe_pairs():
    rng = random.Random(99)
    for i in range(25):
        lhs, rhs = random_pair(rng, i)
        left, right = normalize_pair(lhs, rhs)
        prod = product_graph(left, right)
        cands = candidate_directions(prod.node_count)
        pair = (left.states[0], right.states[0])
        for j in range(len(cands) - 1):
            a, b = cands[j], cands[j + 1]
            probe1 = direction(a.x + b.x, a.y + b.y)
            probe2 = direction(2 * a.x + b.x, 2 * a.y + b.y)
            if sector_index(probe1, cands) != sector_index(probe2, cands):
                continue
            # fresh solvers: a shared memo would make this vacuous
            w1 = SlopeGameSolver(prod).solve(pair, probe1).winner
            w2 = SlopeGameSolver(prod).solve(pair, probe2).winner
            assert w1 == w2
