import numpy as np
import pytest

from polydiam import HRepresentation, hypercube, polytope_graph, regular_polygon
from polydiam.cones import FacetTable, estimate_cone_volumes


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], outcome.upper(), props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, outcome, detail in sorted(lines, key=lambda t: int(t[0].split()[0])):
            terminalreporter.write_line(f"criterion {crit}: {outcome} {detail}".rstrip())


@pytest.fixture(scope="session")
def square():
    return polytope_graph(hypercube(2))


@pytest.fixture(scope="session")
def cube():
    return polytope_graph(hypercube(3))


@pytest.fixture(scope="session")
def hexagon():
    return polytope_graph(regular_polygon(6))


@pytest.fixture(scope="session")
def square_mc(square):
    return estimate_cone_volumes(square, 10**6, seed=11), FacetTable(square, 10**5, seed=11)


@pytest.fixture(scope="session")
def cube_mc(cube):
    return estimate_cone_volumes(cube, 10**6, seed=12), FacetTable(cube, 10**5, seed=12)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def slab():
    return HRepresentation.from_arrays([[1, 0], [-1, 0], [0, 1]], [1, 1, 1])
