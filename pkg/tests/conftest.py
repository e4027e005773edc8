import pytest

from ocnsim.families import (
    commit_then_drain_net,
    drain_loop_net,
    ladder_net,
    pump_drain_net,
    single_loop_net,
)


@pytest.fixture(scope="session")
def pump():
    return pump_drain_net()


@pytest.fixture(scope="session")
def loop():
    return single_loop_net()


@pytest.fixture(scope="session")
def drain():
    return drain_loop_net()


@pytest.fixture(scope="session")
def commit_drain():
    return commit_then_drain_net()


@pytest.fixture(scope="session")
def pump_engine(pump):
    from ocnsim.belts import StrongEngine
    return StrongEngine(pump, pump)
