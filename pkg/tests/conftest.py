import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from divaudit.dist import DiscreteDist

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F = Fraction


@st.composite
def dists(draw, max_atoms=5, lo=-6, hi=6, den=(1, 2, 3)):
    """Exact finite laws with small rational atoms."""
    d = draw(st.sampled_from(den))
    values = draw(st.lists(st.integers(lo * d, hi * d), min_size=1, max_size=max_atoms, unique=True))
    weights = draw(st.lists(st.integers(1, 6), min_size=len(values), max_size=len(values)))
    total = sum(weights)
    return DiscreteDist.from_atoms([(F(v, d), F(w, total)) for v, w in zip(values, weights)])


def seeded_dist(rng: random.Random, max_atoms=5, lo=-6, hi=6, den=(1, 2)) -> DiscreteDist:
    d = rng.choice(den)
    n = rng.randint(1, max_atoms)
    values = rng.sample(range(lo * d, hi * d + 1), n)
    weights = [rng.randint(1, 6) for _ in values]
    total = sum(weights)
    return DiscreteDist.from_atoms([(F(v, d), F(w, total)) for v, w in zip(values, weights)])


@pytest.fixture
def law_a():
    return DiscreteDist.from_dict({0: F(2, 3), 3: F(1, 3)})


@pytest.fixture
def law_d():
    return DiscreteDist.from_dict({-1: F(1, 2), 1: F(1, 2)})


# -- acceptance summary -----------------------------------------------------------------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.outcome == "failed":
        ok = report.outcome == "passed"
        _CRITERIA[crit] = _CRITERIA.get(crit, True) and ok


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker:
            item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if _CRITERIA[crit] else 'FAIL'}")
