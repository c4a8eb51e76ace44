import sys
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from posetfree.family import SetFamily
from posetfree.poset import poset_from_relations

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


@st.composite
def families(draw, min_n=0, max_n=5, max_members=None):
    n = draw(st.integers(min_n, max_n))
    cap = 1 << n
    members = draw(st.sets(st.integers(0, cap - 1), max_size=max_members or cap))
    return SetFamily(n, members)


@st.composite
def posets(draw, max_size=5):
    """Random orders: relations only go from lower to higher index, so no cycles."""
    size = draw(st.integers(0, max_size))
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return poset_from_relations(size, chosen)


def as_frozensets(F):
    return [frozenset(s) for s in F.as_sets()]


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
