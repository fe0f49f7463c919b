import json
from importlib import resources

import pytest

from medleak.config import load_dictionaries
from medleak.corpus import SCENARIOS, build_fixture_capture, fixture_registry


@pytest.fixture(scope="session")
def dictionaries():
    return load_dictionaries()


@pytest.fixture(scope="session")
def report_schema():
    return json.loads((resources.files("medleak") / "data" / "report.schema.json").read_text())


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """All three fixture scenarios written out as .pcap files."""
    directory = tmp_path_factory.mktemp("fixtures")
    for scenario in SCENARIOS:
        (directory / f"{scenario}.pcap").write_bytes(build_fixture_capture(scenario))
    return directory


@pytest.fixture(scope="session")
def fixture_registries():
    return {scenario: fixture_registry(scenario) for scenario in SCENARIOS}
