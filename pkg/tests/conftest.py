import json
from pathlib import Path

import pytest

from octalab import gewirtz, octagon
from octalab.perm import build_group_G, build_group_L34

from oracle import FROZEN


@pytest.fixture(scope="session")
def frozen():
    return json.loads(Path(FROZEN).read_text())


@pytest.fixture(scope="session")
def L34():
    return build_group_L34()


@pytest.fixture(scope="session")
def G():
    return build_group_G()


@pytest.fixture(scope="session")
def octo(G):
    return octagon.build_octagon(G)


@pytest.fixture(scope="session")
def quads(octo):
    return octagon.quads_and_spread(octo)


@pytest.fixture(scope="session")
def gw(L34):
    return gewirtz.build_gewirtz(L=L34)


@pytest.fixture(scope="session")
def eight(gw):
    return gewirtz.special_eight_sets(gw.graph)


@pytest.fixture(scope="session")
def link(octo, eight):
    return gewirtz.link_suite(octo, eight[0])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}: {detail}")
