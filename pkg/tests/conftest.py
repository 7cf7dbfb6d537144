from __future__ import annotations

from hypothesis import strategies as st

from cographdel.graphs import WeightedGraph

# one line per acceptance criterion, echoed after the test summary so the
# pass/fail verdicts stay visible even when pytest captures stdout
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def weighted_graphs(draw, max_n: int = 8, max_weight: int = 3, min_n: int = 0):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if all_pairs:
        edges = draw(st.sets(st.sampled_from(all_pairs)))
    else:
        edges = set()
    if max_weight > 1:
        weights = draw(st.lists(st.integers(1, max_weight), min_size=n, max_size=n))
    else:
        weights = None
    return WeightedGraph(n, edges, weights)
