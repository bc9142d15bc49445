import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retrofit_lcc.building import (
    BuildingValidationError,
    DhwSpec,
    HrvSpec,
    HvacSpec,
    InfiltrationSpec,
    InternalLoads,
    PvSpec,
    Surface,
    ThermostatSchedule,
    convert_r_imperial_to_rsi,
    convert_rsi_to_r_imperial,
    require_valid,
    validate_building,
)

from conftest import make_building


@pytest.mark.parametrize("r, rsi", [(0, 0.0), (16, 2.8176), (28, 4.9308)])
def test_r_to_rsi_examples(r, rsi):
    assert convert_r_imperial_to_rsi(r) == pytest.approx(rsi, rel=1e-12, abs=0)


def test_negative_r_rejected():
    with pytest.raises(ValueError):
        convert_r_imperial_to_rsi(-1.0)


@given(st.floats(min_value=0, max_value=1e6, allow_nan=False, allow_subnormal=False))
def test_r_rsi_round_trip(r):
    back = convert_rsi_to_r_imperial(convert_r_imperial_to_rsi(r))
    assert back == pytest.approx(r, rel=1e-12, abs=0)


def test_bundled_ng_building_is_valid(ng_config):
    assert validate_building(ng_config.building) == []


def test_window_shgc_out_of_range_names_field(building):
    b = make_building(surfaces=(*building.surfaces, Surface("window", 10.0, 3.0, shgc=1.2)))
    v = validate_building(b)
    assert len(v) == 1
    assert v[0].field == "surfaces[2].shgc"


def test_missing_roof_is_one_violation():
    b = make_building(surfaces=(Surface("wall", 100.0, 0.5),))
    v = validate_building(b)
    assert len(v) == 1
    assert "roof" in v[0].reason


def test_opaque_surface_with_shgc_flagged():
    b = make_building(surfaces=(Surface("wall", 100.0, 0.5, shgc=0.3), Surface("roof", 50.0, 0.2)))
    assert [x.field for x in validate_building(b)] == ["surfaces[0].shgc"]


def test_fuel_map_must_cover_every_end_use(building):
    fm = dict(building.fuel_map)
    del fm["dhw"]
    assert [x.field for x in validate_building(make_building(fuel_map=fm))] == ["fuel_map.dhw"]


def test_require_valid_raises_with_violations():
    b = make_building(hvac=HvacSpec(0.0, 3.0, "electricity"))
    with pytest.raises(BuildingValidationError) as exc:
        require_valid(b)
    assert exc.value.violations[0].field == "hvac.heating_cop"


def test_building_is_immutable(building):
    with pytest.raises(AttributeError):
        building.name = "x"
    with pytest.raises(TypeError):
        building.fuel_map["dhw"] = "natural_gas"
    assert hash(building) == hash(make_building())


# Random parameter sets straddling every bound. The oracle below restates
# each bound independently of validate_building.
span = st.floats(min_value=-0.5, max_value=1.5, allow_nan=False)


@st.composite
def parameter_sets(draw):
    return dict(
        wall_area=draw(st.floats(-10, 100)),
        wall_u=draw(st.floats(-1, 5)),
        win_shgc=draw(span),
        rate=draw(st.floats(-0.01, 0.01)),
        ref_area=draw(st.floats(-10, 100)),
        heat_cop=draw(st.floats(-1, 4)),
        cool_cop=draw(st.floats(-1, 4)),
        dhw_cop=draw(st.floats(-1, 4)),
        delivery=draw(st.floats(0, 80)),
        inlet=draw(st.floats(0, 80)),
        hrv_eff=draw(span),
        hrv_flow=draw(st.floats(-1, 2)),
        pv_eff=draw(span),
        pv_pr=draw(span),
        pv_area=draw(st.floats(-10, 100)),
        setpoint=draw(st.floats(15, 25)),
        setback=draw(st.floats(15, 25)),
        sb_frac=draw(span),
        light=draw(st.floats(-1, 10)),
        plug=draw(st.floats(-1, 10)),
        usage=draw(span),
    )


def within_bounds(p) -> bool:
    return (
        p["wall_area"] > 0 and p["wall_u"] > 0 and 0 <= p["win_shgc"] <= 1
        and p["rate"] >= 0 and p["ref_area"] > 0
        and p["heat_cop"] > 0 and p["cool_cop"] > 0
        and p["dhw_cop"] > 0 and p["delivery"] > p["inlet"]
        and 0 <= p["hrv_eff"] <= 1 and p["hrv_flow"] >= 0
        and 0 <= p["pv_eff"] <= 1 and 0 <= p["pv_pr"] <= 1 and p["pv_area"] >= 0
        and p["setback"] <= p["setpoint"] and 0 <= p["sb_frac"] <= 1
        and p["light"] >= 0 and p["plug"] >= 0 and 0 <= p["usage"] <= 1
    )


@settings(max_examples=300)
@given(parameter_sets())
def test_validate_iff_within_bounds(p):
    b = make_building(
        surfaces=(Surface("wall", p["wall_area"], p["wall_u"]), Surface("roof", 50.0, 0.2),
                  Surface("window", 10.0, 2.0, shgc=p["win_shgc"])),
        infiltration=InfiltrationSpec(p["rate"], p["ref_area"]),
        hvac=HvacSpec(p["heat_cop"], p["cool_cop"], "electricity"),
        dhw=DhwSpec(p["dhw_cop"], delivery_temp=p["delivery"], inlet_temp=p["inlet"]),
        hrv=HrvSpec(p["hrv_eff"], p["hrv_flow"]),
        pv=PvSpec(p["pv_area"], p["pv_eff"], p["pv_pr"]),
        thermostat=ThermostatSchedule(p["setpoint"], p["setback"], 26.0, p["sb_frac"]),
        loads=InternalLoads(p["light"], p["plug"], p["usage"], 100.0),
    )
    assert (validate_building(b) == []) == within_bounds(p)


def test_effective_base_blends_setpoint_and_setback():
    t = ThermostatSchedule(22.0, 18.0, 26.0, 0.25)
    assert math.isclose(t.effective_heating_base, 0.75 * 22 + 0.25 * 18)
