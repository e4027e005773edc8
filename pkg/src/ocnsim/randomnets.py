"""Seeded random net generation for self-tests and randomized checks."""

from __future__ import annotations

import random

from .nets import OCN, NetDescription, Transition, make_net

__all__ = ["random_ocn", "random_pair"]


def random_ocn(rng, name, max_states=3, max_transitions=6,
               alphabet=("a", "b"), allow_tau=False, nonempty=True):
    """A random plain net: up to the given states and transitions."""
    n_states = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n_states)]
    labels = list(alphabet) + (["tau"] if allow_tau else [])
    n_trans = rng.randint(1 if nonempty else 0, max_transitions)
    seen = set()
    trans = []
    for _ in range(n_trans):
        t = (rng.choice(states), rng.choice(labels), rng.choice((-1, 0, 1)),
             rng.choice(states))
        if t in seen:
            continue
        seen.add(t)
        trans.append(Transition(*t))
    return make_net(name, OCN, trans, extra_states=states,
                    extra_actions=labels)


def random_pair(rng, index, **kw):
    return (random_ocn(rng, f"L{index}", **kw),
            random_ocn(rng, f"R{index}", **kw))
