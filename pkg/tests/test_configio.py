import pytest

from fracmass import (Ball, Box, Bump, Complement, ConfigError, Constant,
                      Empty, HalfSpace, Indicator, Intersection, NegPart,
                      PairValues, Periodic1D, PeriodicProfile, Polynomial,
                      PosPart, Power, Product, ProfileBump, ProfileConst,
                      ProfileReach, RadialAngular, RadialShells, Scale,
                      Sector, Shift, Sum, TrigPoly, UniformValue, Union,
                      load_config, parse_config, parse_field, parse_region)
from fracmass.configio import field_to_config, region_to_config

REGION_CATALOG = [
    Empty(2),
    Ball((0.5, -1.0), 2.0),
    Box((-1.0,), (1.0,)),
    HalfSpace((1.0, 0.0), 0.25),
    Sector(2, arcs=((0.0, 1.5), (3.0, 0.5))),
    Sector(1, signs=(1,)),
    Sector(3, caps=(((0.0, 0.0, 1.0), 0.7),)),
    RadialShells(2),
    RadialShells(1, pattern="exp_tower", base=6.0),
    Complement(Ball((0.0, 0.0), 1.0)),
    Union((Ball((0.0, 0.0), 1.0), HalfSpace((0.0, 1.0), -1.0))),
    Intersection((Ball((0.0, 0.0), 2.0), Complement(Ball((0.0, 0.0), 1.0)))),
]

FIELD_CATALOG = [
    Constant(2, 2.5),
    Indicator(Ball((0.0, 0.0), 1.0)),
    Polynomial(1, ((1.0, (1,)), (-0.5, (3,)))),
    Bump((0.1, -0.2), 0.7, k=3, scale=2.0),
    RadialAngular(ProfileReach(1.0, 2.0), TrigPoly(0.5, (1.0,), (0.0,))),
    RadialAngular(ProfileConst(1.0), PairValues(0.0, 1.0)),
    RadialAngular(ProfileBump(2.0, 1.5, 3), UniformValue(2, 1.0)),
    Periodic1D(PeriodicProfile(1.0, (0.0, 0.5), (1.0, 0.0))),
    Sum((Constant(1, 1.0), Polynomial(1, ((1.0, (1,)),)))),
    Product((Indicator(Box((-1.0,), (1.0,))), Constant(1, 2.0))),
    Scale(Bump((0.0, 0.0), 1.0), -1.5),
    Shift(Bump((0.0, 0.0), 1.0), (0.5, 0.5)),
    PosPart(Periodic1D(PeriodicProfile(2.0, (0.0, 1.0), (1.0, -1.0)))),
    NegPart(Periodic1D(PeriodicProfile(2.0, (0.0, 1.0), (1.0, -1.0)))),
    Power(Sum((Constant(2, 1.0), Bump((0.0, 0.0), 1.0))), 2),
]


@pytest.mark.parametrize("region", REGION_CATALOG,
                         ids=[type(r).__name__ + str(i)
                              for i, r in enumerate(REGION_CATALOG)])
def test_region_round_trip(region):
    assert parse_region(region_to_config(region)) == region


@pytest.mark.parametrize("f", FIELD_CATALOG,
                         ids=[type(f).__name__ + str(i)
                              for i, f in enumerate(FIELD_CATALOG)])
def test_field_round_trip(f):
    assert parse_field(field_to_config(f)) == f


def test_docstring_shapes_parse():
    om = parse_region({"ball": {"center": [0, 0], "radius": 1}}, "omega")
    assert om == Ball((0.0, 0.0), 1.0)
    f = parse_field({"indicator": {"sector": {"dim": 2,
                                              "arcs": [[0, 1.5707963]]}}})
    assert f == Indicator(Sector(2, arcs=((0.0, 1.5707963),)))


# ---------------------------------------------------------------------------
# error paths carry the offending location


def err(fn, *args):
    with pytest.raises(ConfigError) as info:
        fn(*args)
    return info.value


def test_region_errors_name_the_path():
    e = err(parse_region, {"ball": {"center": [0, 0]}})
    assert e.path == "region.ball" and "missing key 'radius'" in str(e)
    e = err(parse_region, {"blob": {}})
    assert e.path == "region" and "unknown tag 'blob'" in str(e)
    e = err(parse_region, {"ball": {"center": [0, 0], "radius": "wide"}})
    assert e.path == "region.ball.radius"
    # constructor complaints are rephrased at the construction site
    e = err(parse_region, {"ball": {"center": [0, 0], "radius": -1}})
    assert e.path == "region.ball"
    e = err(parse_region, {"union": [{"ball": {"center": [0], "radius": 1}},
                                     {"ball": {"center": [0], "radius": -1}}]})
    assert e.path == "region.union[1].ball"
    e = err(parse_region, {"radial_shells": {"dim": 2, "pattern": "fib"}})
    assert e.path == "region.radial_shells.pattern"
    e = err(parse_region, {"union": [{"empty": {"dim": 1}}]})
    assert "at least two regions" in str(e)


def test_field_errors_name_the_path():
    e = err(parse_field, {"polynomial": {"dim": 1, "terms": [[1.0]]}})
    assert e.path == "field.polynomial.terms[0]"
    e = err(parse_field, {"bump": {"center": [0], "radius": 1, "zoom": 2}})
    assert e.path == "field.bump" and "unknown key 'zoom'" in str(e)
    e = err(parse_field, {"scale": {"field": {"constant": {"dim": 1,
                                                           "value": True}},
                                    "factor": 2}})
    assert e.path == "field.scale.field.constant.value"


# ---------------------------------------------------------------------------
# experiment documents


def test_minimal_config_defaults():
    cfg = parse_config({"command": "alpha", "d": 1})
    assert cfg.command == "alpha" and cfg.d == 1
    assert cfg.field is None and cfg.omega is None and cfg.set_e is None
    assert cfg.p == 2.0 and cfg.s is None and cfg.s_grid is None
    assert cfg.big_r is None and cfg.delta == 0.5
    assert cfg.quad.sample_budget == 160_000
    assert cfg.quad.rng_seed == 0
    assert cfg.quad.batch_count == 40
    assert cfg.out_json is None and cfg.out_csv is None


def test_full_config_parses():
    doc = {
        "command": "seminorm", "d": 1, "p": 2,
        "field": {"constant": {"dim": 1, "value": 1.0}},
        "omega": {"box": {"lo": [-1], "hi": [1]}},
        "e": {"half_space": {"normal": [1]}},
        "s": 0.05, "s_grid": [0.1, 0.01], "R": 12.0, "delta": 0.25,
        "quadrature": {"sample_budget": 20_000, "rng_seed": 7,
                       "target_rel_error": 0.01, "batch_count": 10},
        "output": {"json": "a.json", "csv": "b.csv"},
    }
    cfg = parse_config(doc)
    assert cfg.field == Constant(1, 1.0)
    assert cfg.omega == Box((-1.0,), (1.0,))
    assert cfg.set_e == HalfSpace((1.0,), 0.0)
    assert cfg.s == 0.05 and cfg.s_grid == (0.1, 0.01)
    assert cfg.big_r == 12.0 and cfg.delta == 0.25
    assert cfg.quad.sample_budget == 20_000 and cfg.quad.rng_seed == 7
    assert cfg.out_json == "a.json" and cfg.out_csv == "b.csv"
    assert cfg.raw == doc


def test_config_errors_name_the_path():
    e = err(parse_config, {"d": 1})
    assert e.path == "config" and "missing key 'command'" in str(e)
    e = err(parse_config, {"command": "dance", "d": 1})
    assert e.path == "config.command"
    e = err(parse_config, {"command": "alpha", "d": 4})
    assert str(e) == "config.d: d must be 1, 2 or 3"
    e = err(parse_config, {"command": "alpha", "d": True})
    assert str(e) == "config.d: expected an integer"
    e = err(parse_config, {"command": "alpha", "d": 1, "p": 0.5})
    assert e.path == "config.p"
    e = err(parse_config, {"command": "alpha", "d": 1, "s": 1.5})
    assert str(e) == "config.s: s out of (0,1)"
    e = err(parse_config, {"command": "alpha", "d": 1, "s_grid": [0.5, -0.1]})
    assert str(e) == "config.s_grid[1]: s out of (0,1)"
    e = err(parse_config, {"command": "alpha", "d": 1, "delta": 1.2})
    assert str(e) == "config.delta: delta out of (0,1)"
    e = err(parse_config, {"command": "alpha", "d": 1, "bogus": 3})
    assert str(e) == "config: unknown key 'bogus'"
    e = err(parse_config, {"command": "alpha", "d": 1,
                           "quadrature": {"threads": 2}})
    assert str(e) == "config.quadrature: unknown key 'threads'"
    e = err(parse_config, {"command": "alpha", "d": 1,
                           "quadrature": {"sample_budget": 10}})
    assert e.path == "config.quadrature"
    assert "sample_budget must be at least 1000" in str(e)
    e = err(parse_config, {"command": "alpha", "d": 1,
                           "output": {"json": 7}})
    assert str(e) == "config.output.json: expected a path string"


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "exp.yaml"
    path.write_text(
        "command: alpha\n"
        "d: 2\n"
        "field: {indicator: {sector: {dim: 2, arcs: [[0.0, 1.5707963267948966]]}}}\n"
        "s: 0.01\n"
        "quadrature: {rng_seed: 3}\n")
    cfg = load_config(str(path))
    assert cfg.command == "alpha" and cfg.d == 2
    assert cfg.field == Indicator(Sector(2, arcs=((0.0, 1.5707963267948966),)))
    assert cfg.s == 0.01 and cfg.quad.rng_seed == 3


def test_load_config_failures(tmp_path):
    e = err(load_config, str(tmp_path / "absent.yaml"))
    assert e.path == "config" and "cannot read" in str(e)
    bad = tmp_path / "bad.yaml"
    bad.write_text("command: [unterminated\n")
    e = err(load_config, str(bad))
    assert "invalid YAML" in str(e)
