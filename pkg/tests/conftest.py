import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tensordual.enumerator import random_ribbon_graph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def ribbon_graphs(draw, max_edges=6):
    """Random connected ribbon graph, reproducible from the drawn seed."""
    E = draw(st.integers(min_value=0, max_value=max_edges))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_ribbon_graph(E, random.Random(seed))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
