"""Declarative experiment configs.

A config is one YAML document.  Regions, fields, angular functions and
radial profiles are tagged one-key mappings mirroring the constructor
tree, e.g.

    omega: {ball: {center: [0, 0], radius: 1}}
    field: {indicator: {sector: {dim: 2, arcs: [[0, 1.5707963]]}}}

Validation is strict: unknown keys are rejected, and every error message
names the offending path ("config.s: s out of (0, 1)") so a failing run
points at the line to fix.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Optional

import yaml

from . import fields as flds
from . import geometry as geo
from .quad import QuadratureSpec

COMMANDS = ("alpha", "seminorm", "perimeter", "limit", "hardy", "gauss",
            "sweep", "verify")


class ConfigError(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def _expect_map(doc: Any, path: str, required: tuple[str, ...],
                optional: tuple[str, ...] = ()) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError(path, "expected a mapping")
    for key in doc:
        if key not in required and key not in optional:
            raise ConfigError(path, f"unknown key '{key}'")
    for key in required:
        if key not in doc:
            raise ConfigError(path, f"missing key '{key}'")
    return doc


def _tagged(doc: Any, path: str, kinds: tuple[str, ...]) -> tuple[str, Any]:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise ConfigError(path, "expected a single-tag mapping, one of: "
                          + ", ".join(sorted(kinds)))
    tag, payload = next(iter(doc.items()))
    if tag not in kinds:
        raise ConfigError(path, f"unknown tag '{tag}'; expected one of: "
                          + ", ".join(sorted(kinds)))
    return tag, payload


def _number(doc: Any, path: str) -> float:
    if isinstance(doc, bool) or not isinstance(doc, (int, float)):
        raise ConfigError(path, "expected a number")
    return float(doc)


def _integer(doc: Any, path: str) -> int:
    if isinstance(doc, bool) or not isinstance(doc, int):
        raise ConfigError(path, "expected an integer")
    return doc


def _vector(doc: Any, path: str) -> tuple[float, ...]:
    if not isinstance(doc, (list, tuple)) or not doc:
        raise ConfigError(path, "expected a nonempty list of numbers")
    return tuple(_number(x, f"{path}[{i}]") for i, x in enumerate(doc))


def _wrap(path: str, fn, *args):
    """Run a constructor, rephrasing its ValueError with the config path."""
    try:
        return fn(*args)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


# ---------------------------------------------------------------------------
# regions

_REGION_TAGS = ("empty", "ball", "box", "half_space", "sector",
                "radial_shells", "complement", "union", "intersection")


def parse_region(doc: Any, path: str = "region") -> geo.Region:
    tag, body = _tagged(doc, path, _REGION_TAGS)
    p = f"{path}.{tag}"
    if tag == "empty":
        m = _expect_map(body, p, ("dim",))
        return _wrap(p, geo.Empty, _integer(m["dim"], f"{p}.dim"))
    if tag == "ball":
        m = _expect_map(body, p, ("center", "radius"))
        return _wrap(p, geo.Ball, _vector(m["center"], f"{p}.center"),
                     _number(m["radius"], f"{p}.radius"))
    if tag == "box":
        m = _expect_map(body, p, ("lo", "hi"))
        return _wrap(p, geo.Box, _vector(m["lo"], f"{p}.lo"),
                     _vector(m["hi"], f"{p}.hi"))
    if tag == "half_space":
        m = _expect_map(body, p, ("normal",), ("offset",))
        return _wrap(p, geo.HalfSpace, _vector(m["normal"], f"{p}.normal"),
                     _number(m.get("offset", 0.0), f"{p}.offset"))
    if tag == "sector":
        m = _expect_map(body, p, ("dim",), ("signs", "arcs", "caps"))
        d = _integer(m["dim"], f"{p}.dim")
        signs = tuple(_integer(x, f"{p}.signs[{i}]")
                      for i, x in enumerate(m.get("signs", ())))
        arcs = tuple((_number(a[0], f"{p}.arcs[{i}][0]"),
                      _number(a[1], f"{p}.arcs[{i}][1]"))
                     for i, a in enumerate(m.get("arcs", ())))
        caps = tuple((_vector(c[0], f"{p}.caps[{i}][0]"),
                      _number(c[1], f"{p}.caps[{i}][1]"))
                     for i, c in enumerate(m.get("caps", ())))
        return _wrap(p, geo.Sector, d, signs, arcs, caps)
    if tag == "radial_shells":
        m = _expect_map(body, p, ("dim",), ("pattern", "base"))
        d = _integer(m["dim"], f"{p}.dim")
        pattern = m.get("pattern", "dyadic_tower")
        if pattern not in ("dyadic_tower", "exp_tower"):
            raise ConfigError(f"{p}.pattern",
                              "expected 'dyadic_tower' or 'exp_tower'")
        if "base" in m:
            return _wrap(p, geo.RadialShells, d, pattern,
                         _number(m["base"], f"{p}.base"))
        return _wrap(p, geo.RadialShells, d, pattern)
    if tag == "complement":
        return geo.Complement(parse_region(body, p))
    # union / intersection take a list of member regions
    if not isinstance(body, (list, tuple)) or len(body) < 2:
        raise ConfigError(p, "expected a list of at least two regions")
    members = tuple(parse_region(r, f"{p}[{i}]") for i, r in enumerate(body))
    cls = geo.Union if tag == "union" else geo.Intersection
    return _wrap(p, cls, members)


def region_to_config(region: geo.Region) -> dict:
    if isinstance(region, geo.Empty):
        return {"empty": {"dim": region.dim}}
    if isinstance(region, geo.Ball):
        return {"ball": {"center": list(region.center), "radius": region.radius}}
    if isinstance(region, geo.Box):
        return {"box": {"lo": list(region.lo), "hi": list(region.hi)}}
    if isinstance(region, geo.HalfSpace):
        return {"half_space": {"normal": list(region.normal),
                               "offset": region.offset}}
    if isinstance(region, geo.Sector):
        body: dict[str, Any] = {"dim": region.dim}
        if region.signs:
            body["signs"] = list(region.signs)
        if region.arcs:
            body["arcs"] = [list(a) for a in region.arcs]
        if region.caps:
            body["caps"] = [[list(axis), half] for axis, half in region.caps]
        return {"sector": body}
    if isinstance(region, geo.RadialShells):
        return {"radial_shells": {"dim": region.dim, "pattern": region.pattern,
                                  "base": region.base}}
    if isinstance(region, geo.Complement):
        return {"complement": region_to_config(region.region)}
    if isinstance(region, (geo.Union, geo.Intersection)):
        tag = "union" if isinstance(region, geo.Union) else "intersection"
        return {tag: [region_to_config(r) for r in region.regions]}
    raise ConfigError("region", f"cannot serialize {type(region).__name__}")


# ---------------------------------------------------------------------------
# angular functions and radial profiles (for radial_angular fields)

_ANGULAR_TAGS = ("uniform", "angular_indicator", "pair_values", "trig_poly")


def _parse_angular(doc: Any, path: str) -> flds.AngularFn:
    tag, body = _tagged(doc, path, _ANGULAR_TAGS)
    p = f"{path}.{tag}"
    if tag == "uniform":
        m = _expect_map(body, p, ("dim", "value"))
        return _wrap(p, flds.UniformValue, _integer(m["dim"], f"{p}.dim"),
                     _number(m["value"], f"{p}.value"))
    if tag == "angular_indicator":
        return flds.AngularIndicator(parse_region(body, p))
    if tag == "pair_values":
        m = _expect_map(body, p, ("minus", "plus"))
        return _wrap(p, flds.PairValues, _number(m["minus"], f"{p}.minus"),
                     _number(m["plus"], f"{p}.plus"))
    m = _expect_map(body, p, ("a0",), ("cos", "sin"))
    return _wrap(p, flds.TrigPoly, _number(m["a0"], f"{p}.a0"),
                 _vector(m["cos"], f"{p}.cos") if "cos" in m else (),
                 _vector(m["sin"], f"{p}.sin") if "sin" in m else ())


def _angular_to_config(fn: flds.AngularFn) -> dict:
    if isinstance(fn, flds.UniformValue):
        return {"uniform": {"dim": fn.dim, "value": fn.value}}
    if isinstance(fn, flds.AngularIndicator):
        return {"angular_indicator": region_to_config(fn.region)}
    if isinstance(fn, flds.PairValues):
        return {"pair_values": {"minus": fn.minus, "plus": fn.plus}}
    if isinstance(fn, flds.TrigPoly):
        return {"trig_poly": {"a0": fn.a0, "cos": list(fn.cos_coeffs),
                              "sin": list(fn.sin_coeffs)}}
    raise ConfigError("angular", f"cannot serialize {type(fn).__name__}")


_PROFILE_TAGS = ("const", "reach", "profile_bump")


def _parse_profile(doc: Any, path: str) -> flds.RadialProfile:
    tag, body = _tagged(doc, path, _PROFILE_TAGS)
    p = f"{path}.{tag}"
    if tag == "const":
        m = _expect_map(body, p, ("value",))
        return _wrap(p, flds.ProfileConst, _number(m["value"], f"{p}.value"))
    if tag == "reach":
        m = _expect_map(body, p, ("level", "r0"))
        return _wrap(p, flds.ProfileReach, _number(m["level"], f"{p}.level"),
                     _number(m["r0"], f"{p}.r0"))
    m = _expect_map(body, p, ("scale", "r0"), ("k",))
    return _wrap(p, flds.ProfileBump, _number(m["scale"], f"{p}.scale"),
                 _number(m["r0"], f"{p}.r0"), m.get("k", 2))


def _profile_to_config(pr: flds.RadialProfile) -> dict:
    if isinstance(pr, flds.ProfileConst):
        return {"const": {"value": pr.value}}
    if isinstance(pr, flds.ProfileReach):
        return {"reach": {"level": pr.level, "r0": pr.r0}}
    if isinstance(pr, flds.ProfileBump):
        return {"profile_bump": {"scale": pr.scale, "r0": pr.r0, "k": pr.k}}
    raise ConfigError("profile", f"cannot serialize {type(pr).__name__}")


# ---------------------------------------------------------------------------
# fields

_FIELD_TAGS = ("constant", "indicator", "polynomial", "bump",
               "radial_angular", "periodic", "sum", "product", "scale",
               "shift", "pos_part", "neg_part", "power")


def parse_field(doc: Any, path: str = "field") -> flds.ScalarField:
    tag, body = _tagged(doc, path, _FIELD_TAGS)
    p = f"{path}.{tag}"
    if tag == "constant":
        m = _expect_map(body, p, ("dim", "value"))
        return _wrap(p, flds.Constant, _integer(m["dim"], f"{p}.dim"),
                     _number(m["value"], f"{p}.value"))
    if tag == "indicator":
        return flds.Indicator(parse_region(body, p))
    if tag == "polynomial":
        m = _expect_map(body, p, ("dim", "terms"))
        if not isinstance(m["terms"], (list, tuple)):
            raise ConfigError(f"{p}.terms", "expected a list of [coeff, exponents]")
        terms = []
        for i, t in enumerate(m["terms"]):
            if not isinstance(t, (list, tuple)) or len(t) != 2:
                raise ConfigError(f"{p}.terms[{i}]",
                                  "expected [coeff, [exponents]]")
            expo = tuple(_integer(e, f"{p}.terms[{i}][1][{j}]")
                         for j, e in enumerate(t[1]))
            terms.append((_number(t[0], f"{p}.terms[{i}][0]"), expo))
        return _wrap(p, flds.Polynomial, _integer(m["dim"], f"{p}.dim"),
                     tuple(terms))
    if tag == "bump":
        m = _expect_map(body, p, ("center", "radius"), ("k", "scale"))
        return _wrap(p, flds.Bump, _vector(m["center"], f"{p}.center"),
                     _number(m["radius"], f"{p}.radius"),
                     _integer(m.get("k", 2), f"{p}.k"),
                     _number(m.get("scale", 1.0), f"{p}.scale"))
    if tag == "radial_angular":
        m = _expect_map(body, p, ("profile", "angular"))
        return _wrap(p, flds.RadialAngular,
                     _parse_profile(m["profile"], f"{p}.profile"),
                     _parse_angular(m["angular"], f"{p}.angular"))
    if tag == "periodic":
        m = _expect_map(body, p, ("period", "starts", "levels"))
        prof = _wrap(p, flds.PeriodicProfile,
                     _number(m["period"], f"{p}.period"),
                     _vector(m["starts"], f"{p}.starts"),
                     _vector(m["levels"], f"{p}.levels"))
        return flds.Periodic1D(prof)
    if tag in ("sum", "product"):
        if not isinstance(body, (list, tuple)) or len(body) < 2:
            raise ConfigError(p, "expected a list of at least two fields")
        members = tuple(parse_field(f, f"{p}[{i}]") for i, f in enumerate(body))
        return _wrap(p, flds.Sum if tag == "sum" else flds.Product, members)
    if tag == "scale":
        m = _expect_map(body, p, ("field", "factor"))
        return _wrap(p, flds.Scale, parse_field(m["field"], f"{p}.field"),
                     _number(m["factor"], f"{p}.factor"))
    if tag == "shift":
        m = _expect_map(body, p, ("field", "offset"))
        return _wrap(p, flds.Shift, parse_field(m["field"], f"{p}.field"),
                     _vector(m["offset"], f"{p}.offset"))
    if tag == "pos_part":
        return flds.PosPart(parse_field(body, p))
    if tag == "neg_part":
        return flds.NegPart(parse_field(body, p))
    m = _expect_map(body, p, ("field", "k"))
    return _wrap(p, flds.Power, parse_field(m["field"], f"{p}.field"),
                 _integer(m["k"], f"{p}.k"))


def field_to_config(f: flds.ScalarField) -> dict:
    if isinstance(f, flds.Constant):
        return {"constant": {"dim": f.dim, "value": f.value}}
    if isinstance(f, flds.Indicator):
        return {"indicator": region_to_config(f.region)}
    if isinstance(f, flds.Polynomial):
        return {"polynomial": {"dim": f.dim,
                               "terms": [[c, list(e)] for c, e in f.terms]}}
    if isinstance(f, flds.Bump):
        return {"bump": {"center": list(f.center), "radius": f.radius,
                         "k": f.k, "scale": f.scale}}
    if isinstance(f, flds.RadialAngular):
        return {"radial_angular": {"profile": _profile_to_config(f.profile),
                                   "angular": _angular_to_config(f.angular)}}
    if isinstance(f, flds.Periodic1D):
        pr = f.profile
        return {"periodic": {"period": pr.period, "starts": list(pr.starts),
                             "levels": list(pr.levels)}}
    if isinstance(f, flds.Sum):
        return {"sum": [field_to_config(t) for t in f.terms]}
    if isinstance(f, flds.Product):
        return {"product": [field_to_config(t) for t in f.factors]}
    if isinstance(f, flds.Scale):
        return {"scale": {"field": field_to_config(f.field), "factor": f.factor}}
    if isinstance(f, flds.Shift):
        return {"shift": {"field": field_to_config(f.field),
                          "offset": list(f.offset)}}
    if isinstance(f, flds.PosPart):
        return {"pos_part": field_to_config(f.field)}
    if isinstance(f, flds.NegPart):
        return {"neg_part": field_to_config(f.field)}
    if isinstance(f, flds.Power):
        return {"power": {"field": field_to_config(f.field), "k": f.k}}
    raise ConfigError("field", f"cannot serialize {type(f).__name__}")


# ---------------------------------------------------------------------------
# the experiment document


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    d: int
    field: Optional[flds.ScalarField] = None
    omega: Optional[geo.Region] = None
    set_e: Optional[geo.Region] = None
    p: float = 2.0
    s: Optional[float] = None
    s_grid: Optional[tuple[float, ...]] = None
    big_r: Optional[float] = None
    delta: float = 0.5
    quad: QuadratureSpec = dc_field(default_factory=QuadratureSpec)
    out_json: Optional[str] = None
    out_csv: Optional[str] = None
    raw: dict = dc_field(default_factory=dict)


_TOP_KEYS = ("command", "d", "field", "omega", "e", "p", "s", "s_grid", "R",
             "delta", "quadrature", "output")
_QUAD_KEYS = ("sample_budget", "rng_seed", "target_rel_error", "batch_count")


def parse_config(doc: Any, path: str = "config") -> ExperimentConfig:
    m = _expect_map(doc, path, ("command", "d"), _TOP_KEYS)
    command = m["command"]
    if command not in COMMANDS:
        raise ConfigError(f"{path}.command",
                          "expected one of: " + ", ".join(COMMANDS))
    d = _integer(m["d"], f"{path}.d")
    if d not in (1, 2, 3):
        raise ConfigError(f"{path}.d", "d must be 1, 2 or 3")

    fld = parse_field(m["field"], f"{path}.field") if "field" in m else None
    omega = parse_region(m["omega"], f"{path}.omega") if "omega" in m else None
    set_e = parse_region(m["e"], f"{path}.e") if "e" in m else None

    p = _number(m.get("p", 2.0), f"{path}.p")
    if not p >= 1.0:
        raise ConfigError(f"{path}.p", "p must be at least 1")

    s = None
    if "s" in m:
        s = _number(m["s"], f"{path}.s")
        if not 0.0 < s < 1.0:
            raise ConfigError(f"{path}.s", "s out of (0,1)")
    s_grid = None
    if "s_grid" in m:
        s_grid = _vector(m["s_grid"], f"{path}.s_grid")
        for i, si in enumerate(s_grid):
            if not 0.0 < si < 1.0:
                raise ConfigError(f"{path}.s_grid[{i}]", "s out of (0,1)")

    big_r = _number(m["R"], f"{path}.R") if "R" in m else None
    delta = _number(m.get("delta", 0.5), f"{path}.delta")
    if not 0.0 < delta < 1.0:
        raise ConfigError(f"{path}.delta", "delta out of (0,1)")

    qm = _expect_map(m.get("quadrature", {}), f"{path}.quadrature", (), _QUAD_KEYS)
    quad = _wrap(f"{path}.quadrature", QuadratureSpec,
                 _integer(qm.get("sample_budget", 160_000),
                          f"{path}.quadrature.sample_budget"),
                 _integer(qm.get("rng_seed", 0), f"{path}.quadrature.rng_seed"),
                 _number(qm.get("target_rel_error", 1e-3),
                         f"{path}.quadrature.target_rel_error"),
                 _integer(qm.get("batch_count", 40),
                          f"{path}.quadrature.batch_count"))

    om = _expect_map(m.get("output", {}), f"{path}.output", (), ("json", "csv"))
    out_json = om.get("json")
    out_csv = om.get("csv")
    for name, val in (("json", out_json), ("csv", out_csv)):
        if val is not None and not isinstance(val, str):
            raise ConfigError(f"{path}.output.{name}", "expected a path string")

    return ExperimentConfig(command=command, d=d, field=fld, omega=omega,
                            set_e=set_e, p=p, s=s, s_grid=s_grid, big_r=big_r,
                            delta=delta, quad=quad, out_json=out_json,
                            out_csv=out_csv, raw=m)


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"invalid YAML: {exc}") from exc
    return parse_config(doc)
