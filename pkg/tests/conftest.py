import pytest

from storage_sharing import CASE_STUDY_TARIFF, CommunityDay, HouseholdDay


@pytest.fixture
def tariff():
    return CASE_STUDY_TARIFF


@pytest.fixture
def pair():
    """Two-household worked example: a seller (X=3, B=5) and a buyer (X=7, B=1)."""
    return CommunityDay(None, (HouseholdDay("1", 3, 0, 5, 0.0), HouseholdDay("2", 7, 0, 1, 0.0)))


@pytest.fixture(scope="session")
def synthetic_year():
    from storage_sharing.pipeline import generate_synthetic

    return generate_synthetic(households=80, days=365, seed=42)


@pytest.fixture(scope="session")
def year_report(synthetic_year):
    from storage_sharing.pipeline import SimulationConfig, simulate

    config = SimulationConfig(CASE_STUDY_TARIFF, synthetic_year.storage, seed=42)
    return simulate(synthetic_year.records, config)


def pytest_terminal_summary(terminalreporter):
    from support import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
