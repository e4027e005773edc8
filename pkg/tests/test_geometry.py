import random

import pytest

from ocnsim.geometry import (
    behind,
    c_above,
    c_below,
    candidate_directions,
    direction,
    probe_sequence,
    sector_index,
    steeper,
    subsumes,
)


def test_behind_examples():
    assert behind((1, 1), (0, -1))
    assert not behind((1, 1), (-1, 0))
    assert not behind((1, 1), (2, 2))      # collinear is never behind


def test_behind_zero_vector_conventions():
    assert not behind((1, 1), (0, 0))
    with pytest.raises(ValueError):
        behind((0, 0), (1, 1))


def test_behind_antisymmetric():
    rng = random.Random(3)
    for _ in range(200):
        v = (rng.randint(-4, 4), rng.randint(-4, 4))
        w = (rng.randint(-4, 4), rng.randint(-4, 4))
        if v == (0, 0) or w == (0, 0):
            continue
        assert not (behind(v, w) and behind(w, v))


def test_steeper_examples():
    assert steeper(direction(1, 0), direction(0, 1))
    assert steeper(direction(1, 1), direction(1, 2))
    assert not steeper(direction(1, 1), direction(1, 1))


def test_steeper_total_order_with_extremes():
    cands = candidate_directions(4)
    assert cands[0] == direction(0, 1)
    assert cands[-1] == direction(1, 0)
    for i, a in enumerate(cands):
        for b in cands[i + 1:]:
            assert steeper(b, a)       # a earlier means a steeper
            assert not steeper(a, b)


def test_c_above_interval_example():
    assert c_above((5, 100), direction(1, 1), 3)
    assert not c_above((100, 5), direction(1, 1), 3)
    assert c_below((100, 5), direction(1, 1), 3)


def test_nothing_is_above_the_vertical():
    rng = random.Random(5)
    for _ in range(100):
        pt = (rng.randint(0, 50), rng.randint(0, 50))
        assert not c_above(pt, direction(0, 1), rng.randint(0, 5))


def test_above_and_below_exclusive():
    rng = random.Random(11)
    dirs = candidate_directions(3)
    for _ in range(300):
        pt = (rng.randint(0, 30), rng.randint(0, 30))
        d = rng.choice(dirs)
        c = rng.randint(0, 4)
        assert not (c_above(pt, d, c) and c_below(pt, d, c))


def test_shift_preserves_side():
    # adding a not-behind vector keeps points above; a behind vector keeps
    # them below
    rng = random.Random(13)
    dirs = candidate_directions(3)
    for _ in range(500):
        pt = (rng.randint(0, 40), rng.randint(0, 40))
        d = rng.choice(dirs)
        c = rng.randint(0, 3)
        step = (rng.randint(-2, 2), rng.randint(-2, 2))
        moved = (pt[0] + step[0], pt[1] + step[1])
        if step == (0, 0):
            continue
        if c_above(pt, d, c) and not behind(d.as_tuple(), step):
            assert c_above(moved, d, c)
        if c_below(pt, d, c) and behind(d.as_tuple(), step):
            assert c_below(moved, d, c)


def test_subsumes_examples():
    assert subsumes(direction(1, 2), direction(2, 1), [])
    assert subsumes(direction(0, 1), direction(1, 2), [(1, 0)])
    assert subsumes(direction(1, 2), direction(2, 1), [(0, -1)])


def test_probe_sequence_interleaves_mediants():
    probes = probe_sequence(1)
    assert [p.as_tuple() for p in probes] == \
        [(0, 1), (1, 2), (1, 1), (2, 1), (1, 0)]


def test_sector_index_distinguishes_candidates_and_gaps():
    cands = candidate_directions(2)
    for i, d in enumerate(cands):
        assert sector_index(d, cands) == 2 * i
    for i in range(len(cands) - 1):
        a, b = cands[i], cands[i + 1]
        mid = direction(a.x + b.x, a.y + b.y)
        assert sector_index(mid, cands) == 2 * i + 1
