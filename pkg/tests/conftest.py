import pytest

from tropwp.graphs import standard_families
from tropwp.weierstrass import count_gwp, covers_for_genus, generic_metric_graph


@pytest.fixture(scope="session")
def g2_covers():
    return covers_for_genus(2)


@pytest.fixture(scope="session")
def g3_covers():
    return covers_for_genus(3)


@pytest.fixture(scope="session")
def g2_report(g2_covers):
    return count_gwp(generic_metric_graph(standard_families("O", 2), 7), g2_covers)


@pytest.fixture(scope="session")
def g3_report(g3_covers):
    return count_gwp(generic_metric_graph(standard_families("O", 3), 7), g3_covers)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS or "test_acceptance" in str(terminalreporter.config.args):
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
        if not any(line.startswith("criterion 8") for line in RESULTS):
            terminalreporter.write_line("criterion 8: SKIPPED  genus 4 run gated behind TROPWP_LONG=1")
