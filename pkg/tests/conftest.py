import json
from pathlib import Path

import pytest

from cpnets import CPNet, CPTable, MCPNet, m_nowin, net_from_json

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def dinner_raw():
    return json.loads((FIXTURES / "dinner.json").read_text())


@pytest.fixture(scope="session")
def dinner_net(dinner_raw):
    return net_from_json(dinner_raw)


@pytest.fixture(scope="session")
def dinner_path():
    return str(FIXTURES / "dinner.json")


def _net(features, tables):
    return CPNet(
        features=tuple(features),
        tables={
            name: CPTable(feature=name, parents=tuple(parents), rows=dict(rows))
            for name, (parents, rows) in tables.items()
        },
    )


@pytest.fixture(scope="session")
def dinner_profile():
    """Three diners over Main (meat=0, fish=1) and Wine (red=0, white=1).

    Agent 0 is the fixture net: meat always, wine to match the main.
    Agent 1 wants meat and the opposite pairing.
    Agent 2 picks the main to match the wine and always wants red.
    """
    names = ("Main", "Wine")
    a0 = _net(names, {
        "Main": ((), {(): 0}),
        "Wine": (("Main",), {(0,): 0, (1,): 1}),
    })
    a1 = _net(names, {
        "Main": ((), {(): 0}),
        "Wine": (("Main",), {(0,): 1, (1,): 0}),
    })
    a2 = _net(names, {
        "Main": (("Wine",), {(0,): 0, (1,): 1}),
        "Wine": ((), {(): 0}),
    })
    return MCPNet(agents=(a0, a1, a2))


@pytest.fixture(scope="session")
def nowin_profile():
    return m_nowin()
