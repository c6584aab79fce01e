import os
import random

import pytest


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=None, help="seed for randomized property tests")


@pytest.fixture
def rng(request):
    seed = request.config.getoption("--seed")
    if seed is None:
        seed = int(os.environ.get("C2STEENROD_SEED", "0"))
    return random.Random(seed)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("C2STEENROD_SKIP_SLOW") != "1":
        return
    skip = pytest.mark.skip(reason="C2STEENROD_SKIP_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
