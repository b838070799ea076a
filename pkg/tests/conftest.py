import os
import sys

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from crux_subdiv import Graph

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=1, max_n=8, min_m=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=min(min_m, len(pairs)))) if pairs else []
    return Graph(n, chosen)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile (or load cached) kernels once so timing-sensitive tests see steady state
    from crux_subdiv import generate
    from crux_subdiv.pipeline import pipeline_find_subdivision

    pipeline_find_subdivision(generate({"kind": "gnp", "n": 40, "p": 0.3, "seed": 0}))


# -- acceptance reporting ---------------------------------------------------------------

ACCEPTANCE = []  # (number, title, passed, seconds, note)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, secs, note in sorted(ACCEPTANCE):
        line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {title} ({secs:.1f}s)"
        terminalreporter.write_line(line + (f" [{note}]" if note else ""))
