import dataclasses

import pytest

from retrofit_lcc.building import (
    BuildingModel,
    DhwSpec,
    HvacSpec,
    InfiltrationSpec,
    InternalLoads,
    Surface,
    ThermostatSchedule,
)
from retrofit_lcc.config import bundled_path, load_scenario_config
from retrofit_lcc.energy import MonthlyWeather
from retrofit_lcc.pipeline import prepare

ALL_ELECTRIC = {
    "space_heating": "electricity",
    "space_cooling": "electricity",
    "dhw": "electricity",
    "lighting": "electricity",
    "plug": "electricity",
    "ventilation_fans": "electricity",
}


def make_building(**overrides) -> BuildingModel:
    """Small two-surface building with every flow and load switched off."""
    kw = dict(
        surfaces=(Surface("wall", 100.0, 0.5), Surface("roof", 50.0, 0.2)),
        infiltration=InfiltrationSpec(0.0, 100.0),
        hvac=HvacSpec(heating_cop=1.0, cooling_cop=3.0, heating_fuel="electricity"),
        dhw=DhwSpec(cop=1.0),
        thermostat=ThermostatSchedule(),
        loads=InternalLoads(0.0, 0.0, 0.0, 100.0),
        fuel_map=ALL_ELECTRIC,
    )
    kw.update(overrides)
    return BuildingModel(**kw)


def flat_weather(temp: float = 8.0, days: int = 30, ghi: float = 0.0) -> MonthlyWeather:
    return MonthlyWeather([temp] * 12, [days] * 12, [ghi] * 12)


@pytest.fixture
def building():
    return make_building()


@pytest.fixture(scope="session")
def ng_config():
    return load_scenario_config(bundled_path("ng_building.toml"))


@pytest.fixture(scope="session")
def e_config():
    return load_scenario_config(bundled_path("e_building.toml"))


@pytest.fixture(scope="session")
def ng_prepared(ng_config):
    return prepare(ng_config)


@pytest.fixture(scope="session")
def e_prepared(e_config):
    return prepare(e_config)


def replace(obj, **kw):
    return dataclasses.replace(obj, **kw)


# -- acceptance summary: one PASS/FAIL line per criterion --------------------

_criteria: dict[int, tuple[str, str]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props or (report.when != "call" and report.passed):
        return
    num, text = props["criterion"]
    verdict = "PASS" if report.passed else "FAIL"
    if _criteria.get(num, (text, "PASS"))[1] == "PASS":
        _criteria[num] = (text, verdict)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        text, verdict = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {verdict}  {text}")
