"""JSON formats for balleans, vectors, certificates, point maps and subsets.

Rationals are written as ``"p/q"`` in lowest terms and integers without a
denominator.  :func:`canonical_json` sorts keys and uses a fixed layout, so
equal values always serialise to identical bytes.
"""
from __future__ import annotations

import json
import warnings
from fractions import Fraction
from pathlib import Path

from .asymptotics import (And, Everything, Finite, Halfspace, Not, Parity,
                          SubsetSpec, WindowBallean)
from .ballean import (EffectiveEntourage, FiniteMetric, GradedBallean,
                      MetricError, metric_ballean, preset)
from .relations import GroundMismatch, pair_key, sort_points
from .vectors import Decomposition, DiffTerm, FreeVector, IdealBaseParams


class InputError(ValueError):
    """Malformed or schema-violating input; ``where`` is a JSON path."""

    def __init__(self, msg: str, where: str = "$"):
        super().__init__(f"{where}: {msg}")
        self.where = where


def fmt_rational(q) -> str:
    return str(Fraction(q))


def parse_rational(s, where: str = "$") -> Fraction:
    if isinstance(s, bool):
        raise InputError(f"expected a rational, got {s!r}", where)
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise InputError(f"expected a rational string or integer, got {s!r}", where)
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"malformed rational {s!r}", where) from None


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"parse error: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from None


# ---------------------------------------------------------------- balleans

def ballean_from_obj(obj, normalize: bool = True) -> GradedBallean:
    if not isinstance(obj, dict):
        raise InputError("ballean must be an object")
    if "preset" in obj:
        kind, size = obj["preset"], obj.get("size")
        if not isinstance(size, int) or isinstance(size, bool) or size < 1:
            raise InputError("preset size must be a positive integer", "$.size")
        try:
            return preset(kind, size)
        except ValueError as exc:
            raise InputError(str(exc), "$.preset") from None
    if "metric" in obj:
        m = obj["metric"]
        pts = m.get("points") if isinstance(m, dict) else None
        rows = m.get("rows") if isinstance(m, dict) else None
        if not isinstance(pts, list) or not isinstance(rows, list):
            raise InputError("metric needs 'points' and 'rows'", "$.metric")
        parsed = [[parse_rational(v, f"$.metric.rows[{i}][{j}]") for j, v in enumerate(row)]
                  for i, row in enumerate(rows)]
        try:
            return metric_ballean(FiniteMetric.from_rows(pts, parsed))
        except MetricError as exc:
            raise InputError(str(exc), "$.metric") from None
    pts = obj.get("points")
    levels = obj.get("levels")
    if not isinstance(pts, list) or not pts or not isinstance(levels, list) or not levels:
        raise InputError("ballean needs non-empty 'points' and 'levels' (or 'metric' / 'preset')")
    if len(set(pts)) != len(pts) or not all(isinstance(p, str) and p for p in pts):
        raise InputError("points must be distinct non-empty strings", "$.points")
    order = []
    for i, lv in enumerate(levels):
        if not isinstance(lv, dict) or "pairs" not in lv:
            raise InputError("level needs 'pairs'", f"$.levels[{i}]")
        r = lv.get("r", i + 1)
        pairs = lv["pairs"]
        for j, p in enumerate(pairs):
            if not (isinstance(p, list) and len(p) == 2):
                raise InputError("pair must be a 2-element list", f"$.levels[{i}].pairs[{j}]")
        order.append((r, [tuple(p) for p in pairs]))
    rs = [r for r, _ in order]
    if sorted(rs) != list(range(1, len(rs) + 1)):
        raise InputError("level radii must be 1..L", "$.levels")
    order.sort(key=lambda t: t[0])
    try:
        return GradedBallean.from_pairs(pts, [p for _, p in order], normalize=normalize)
    except GroundMismatch as exc:
        raise InputError(str(exc), "$.levels") from None


def parse_ballean_arg(arg: str, normalize: bool = True) -> GradedBallean:
    """A file path, or ``kind:size`` for a preset."""
    if ":" in arg and not Path(arg).exists():
        kind, _, size = arg.partition(":")
        try:
            return preset(kind, int(size))
        except ValueError as exc:
            raise InputError(f"bad preset {arg!r}: {exc}") from None
    return ballean_from_obj(read_json(arg), normalize=normalize)


def ballean_to_obj(b: GradedBallean) -> dict:
    return {"points": list(b.ground),
            "levels": [{"r": r, "pairs": [list(p) for p in rel.sorted_pairs()]}
                       for r, rel in enumerate(b.levels, start=1)]}


def metric_to_obj(m: FiniteMetric) -> dict:
    return {"points": list(m.ground),
            "rows": [[fmt_rational(m(x, y)) for y in m.ground] for x in m.ground]}


# ---------------------------------------------------------------- vectors & certificates

def vector_from_obj(obj) -> FreeVector:
    if not isinstance(obj, dict):
        raise InputError("vector must be an object point -> rational")
    return FreeVector({k: parse_rational(v, f"$.{k}") for k, v in obj.items()})


def vector_to_obj(v: FreeVector) -> dict:
    return {k: fmt_rational(c) for k, c in v.items()}


def entourage_obj(e: EffectiveEntourage) -> dict:
    return {"level": e.level, "power": e.power}


def params_to_obj(p: IdealBaseParams) -> dict:
    return {"n": p.n, "level": p.entourage.level, "power": p.entourage.power, "z": p.z}


def params_from_obj(obj, where="$.params") -> IdealBaseParams:
    if not isinstance(obj, dict):
        raise InputError("params must be an object", where)
    try:
        n, level, power, z = obj["n"], obj["level"], obj.get("power", 1), obj["z"]
    except KeyError as exc:
        raise InputError(f"missing {exc.args[0]!r}", where) from None
    for key, val in (("n", n), ("level", level), ("power", power)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise InputError(f"{key} must be a positive integer", f"{where}.{key}")
    return IdealBaseParams.of(n, level, power, z)


def certificate_to_obj(d: Decomposition) -> dict:
    return {"terms": [[t.x, t.y, fmt_rational(t.coeff)] for t in d.terms],
            "z_coeff": fmt_rational(d.z_coeff),
            "params": params_to_obj(d.params)}


def certificate_from_obj(obj) -> Decomposition:
    if isinstance(obj, dict) and "certificate" in obj and "terms" not in obj:
        obj = obj["certificate"]
    if not isinstance(obj, dict) or "terms" not in obj:
        raise InputError("certificate needs 'terms', 'z_coeff' and 'params'")
    terms = []
    for i, t in enumerate(obj["terms"]):
        if not (isinstance(t, list) and len(t) == 3):
            raise InputError("term must be [x, y, coeff]", f"$.terms[{i}]")
        terms.append(DiffTerm(t[0], t[1], parse_rational(t[2], f"$.terms[{i}][2]")))
    return Decomposition(tuple(terms), parse_rational(obj.get("z_coeff", 0), "$.z_coeff"),
                         params_from_obj(obj.get("params")))


# ---------------------------------------------------------------- maps

def point_map_from_obj(obj) -> dict:
    if not isinstance(obj, dict) or not obj:
        raise InputError("point map must be a non-empty object")
    out = {}
    for k, v in obj.items():
        if isinstance(v, str):
            out[k] = v
        elif isinstance(v, list):
            out[k] = [parse_rational(c, f"$.{k}[{i}]") for i, c in enumerate(v)]
        else:
            raise InputError("image must be a point id or a coordinate list", f"$.{k}")
    kinds = {isinstance(v, str) for v in out.values()}
    if len(kinds) > 1:
        raise InputError("mixed point / coordinate images")
    return out


# ---------------------------------------------------------------- subsets

def _int(v, where):
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError("expected an integer", where)
    return v


def subset_from_obj(obj, where="$") -> SubsetSpec:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputError("subset spec must have exactly one key", where)
    (key, val), = obj.items()
    if key == "finite":
        pts = []
        for i, p in enumerate(val):
            p = [p] if isinstance(p, int) else p
            pts.append(tuple(_int(c, f"{where}.finite[{i}]") for c in p))
        return Finite(tuple(pts))
    if key == "halfspace":
        normal = val.get("normal")
        if not isinstance(normal, list):
            raise InputError("halfspace needs a 'normal' list", f"{where}.halfspace")
        return Halfspace(tuple(_int(c, f"{where}.halfspace.normal") for c in normal),
                         _int(val.get("offset", 0), f"{where}.halfspace.offset"),
                         bool(val.get("strict", False)))
    if key == "parity":
        return Parity(_int(val.get("modulus", 2), f"{where}.parity.modulus"),
                      _int(val.get("residue", 0), f"{where}.parity.residue"),
                      _int(val.get("coord", 0), f"{where}.parity.coord"))
    if key == "and":
        return And(tuple(subset_from_obj(s, f"{where}.and[{i}]") for i, s in enumerate(val)))
    if key == "not":
        return Not(subset_from_obj(val, f"{where}.not"))
    if key == "everything":
        return Everything()
    raise InputError(f"unknown subset kind {key!r}", where)


def subset_to_obj(s: SubsetSpec):
    if isinstance(s, Finite):
        return {"finite": [list(p) for p in s.points]}
    if isinstance(s, Halfspace):
        return {"halfspace": {"normal": list(s.normal), "offset": s.offset, "strict": s.strict}}
    if isinstance(s, Parity):
        return {"parity": {"modulus": s.modulus, "residue": s.residue, "coord": s.coord}}
    if isinstance(s, And):
        return {"and": [subset_to_obj(p) for p in s.parts]}
    if isinstance(s, Not):
        return {"not": subset_to_obj(s.inner)}
    if isinstance(s, Everything):
        return {"everything": {}}
    return {"computed": type(s).__name__}


def parse_subset_arg(arg: str) -> SubsetSpec:
    """Inline JSON (starting with ``{``) or a file path."""
    if arg.lstrip().startswith("{"):
        try:
            obj = json.loads(arg)
        except json.JSONDecodeError as exc:
            raise InputError(f"parse error: {exc.msg}") from None
    else:
        obj = read_json(arg)
    return subset_from_obj(obj)


def lattice_from_obj(obj) -> WindowBallean:
    if isinstance(obj, dict) and "lattice" in obj:
        obj = obj["lattice"]
    if not isinstance(obj, dict):
        raise InputError("lattice config must be an object {dim, W}")
    dim = _int(obj.get("dim", 1), "$.dim")
    W = _int(obj.get("W", 50), "$.W")
    try:
        return WindowBallean(dim, W)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------- generic load

def load(path, normalize: bool = True):
    """Load any supported file, guessing its kind from the schema.

    Returns ``(kind, value, warnings)`` with kind one of ``ballean``,
    ``vector``, ``certificate``, ``map``, ``subset``, ``lattice``.
    """
    obj = read_json(path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        kind, value = _classify(obj, normalize)
    return kind, value, [str(w.message) for w in caught]


def _classify(obj, normalize):
    if not isinstance(obj, dict):
        raise InputError("top level must be an object")
    keys = set(obj)
    if keys & {"preset", "metric", "levels"}:
        return "ballean", ballean_from_obj(obj, normalize)
    if "terms" in keys or "certificate" in keys:
        return "certificate", certificate_from_obj(obj)
    if "lattice" in keys or keys <= {"dim", "W"} and keys:
        return "lattice", lattice_from_obj(obj)
    if len(keys) == 1 and keys <= {"finite", "halfspace", "parity", "and", "not", "everything"}:
        return "subset", subset_from_obj(obj)
    if all(isinstance(v, list) for v in obj.values()):
        return "map", point_map_from_obj(obj)
    if all(isinstance(v, str) and not _looks_rational(v) for v in obj.values()):
        return "map", point_map_from_obj(obj)
    return "vector", vector_from_obj(obj)


def _looks_rational(s: str) -> bool:
    try:
        Fraction(s)
        return True
    except (ValueError, ZeroDivisionError):
        return "/" in s
