"""``freeballean`` command line.

Exit codes: 0 when the check holds / a certificate was found, 1 when it
fails / there is no certificate, 2 on any input error.  The JSON report
goes to ``--out`` (if given); a one-line summary goes to stdout.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import __version__
from .asymptotics import (WindowBallean, WindowError, asymptotic_neighborhood,
                          asymptotically_disjoint, bornology_cof,
                          metric_separator, metrizability_check,
                          split_asymorphism)
from .ballean import (EffectiveEntourage, NotCoarse, ball, check_asymorphism,
                      check_axioms, check_coarse_map, identity_map,
                      is_bounded, product, restrict)
from .io import (InputError, ballean_to_obj, canonical_json,
                 certificate_from_obj, certificate_to_obj, fmt_rational,
                 lattice_from_obj, metric_to_obj, params_to_obj,
                 parse_ballean_arg, parse_subset_arg, point_map_from_obj,
                 read_json, subset_to_obj, vector_from_obj, vector_to_obj)
from .membership import (ReductionError, ideal_axiom_probe, ideal_membership,
                         reduce_to_support, restriction_check)
from .relations import point_key, sort_points
from .universal import (DepthExceeded, StandardVectorBallean,
                        check_linear_coarse, generated_ideal_closure,
                        linear_extension)
from .vectors import (FreeVector, IdealBaseParams, evaluate,
                      verify_decomposition)

DEFAULT_BALLEAN = "line:4"
DEFAULT_SEED = 0


def _e(e: EffectiveEntourage) -> list:
    return [e.level, e.power]


def _points(arg: str) -> list[str]:
    return [p for p in (s.strip() for s in arg.split(",")) if p] if arg else []


def _radii(arg: str) -> list[int]:
    out = []
    for part in arg.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise InputError("empty radius list")
    return out


def _params(args, b) -> IdealBaseParams:
    z = args.z if args.z is not None else b.ground[0]
    if z not in b.ground:
        raise InputError(f"z = {z!r} is not a point of the ballean")
    if not 1 <= args.level <= b.L:
        raise InputError(f"level {args.level} out of range 1..{b.L}")
    if args.n < 1 or args.power < 1:
        raise InputError("n and power must be >= 1")
    return IdealBaseParams.of(args.n, args.level, args.power, z)


def _ballean(arg, normalize=True):
    return parse_ballean_arg(arg, normalize=normalize)


def _lattice(args) -> WindowBallean:
    if getattr(args, "lattice", None):
        return lattice_from_obj(read_json(args.lattice))
    try:
        return WindowBallean(args.dim, args.W)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _verdict_obj(v) -> dict:
    return {"status": v.status, "window": v.window, "radii": list(v.radii),
            "failing_radius": v.failing_radius,
            "witness": None if v.witness is None else _jsonable(v.witness),
            "per_radius": [{"r": x.r, "bounded": x.bounded, "size": x.size,
                            "witness": _jsonable(x.witness)} for x in v.per_radius],
            "note": v.note}


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(c) for c in x]
    if isinstance(x, Fraction):
        return fmt_rational(x)
    return x


# ---------------------------------------------------------------- commands

def cmd_check_axioms(args):
    b = _ballean(args.ballean, normalize=False)
    rep = check_axioms(b)
    res = {"ok": rep.ok,
           "checks": [{"axiom": c.name, "ok": c.ok, "level": c.level,
                       "witness": None if c.witness is None else list(c.witness),
                       "detail": c.detail} for c in rep.checks]}
    f = rep.first_failure
    msg = "all axioms hold" if f is None else f"{f.name} fails at level {f.level}, witness {f.witness}"
    return rep.ok, res, msg


def cmd_ball(args):
    b = _ballean(args.ballean)
    if args.point not in b.ground:
        raise InputError(f"unknown point {args.point!r}")
    if not 1 <= args.level <= b.L or args.power < 1:
        raise InputError("level/power out of range")
    e = EffectiveEntourage(args.level, args.power)
    pts = sorted(ball(b, args.point, e), key=point_key)
    return True, {"center": args.point, "entourage": _e(e), "ball": pts}, f"ball = {pts}"


def cmd_bounded(args):
    b = _ballean(args.ballean)
    ys = _points(args.points)
    if set(ys) - set(b.ground):
        raise InputError("points outside the ground set")
    w = is_bounded(b, ys)
    if w is None:
        return False, {"bounded": False}, "not bounded"
    return True, {"bounded": True, "center": w.center, "entourage": _e(w.entourage)}, \
        f"bounded: inside ball {w.entourage} around {w.center}"


def cmd_restrict(args):
    b = _ballean(args.ballean)
    ys = _points(args.points)
    if not ys or set(ys) - set(b.ground):
        raise InputError("restriction needs a non-empty subset of the ground set")
    sub = restrict(b, ys)
    return True, {"ballean": ballean_to_obj(sub)}, f"subballean on {len(sub.ground)} points"


def cmd_product(args):
    p = product(_ballean(args.ballean), _ballean(args.other))
    return True, {"ballean": ballean_to_obj(p)}, f"product on {p.size} points, {p.L} levels"


def _map_args(args):
    src, tgt = _ballean(args.source), _ballean(args.target)
    f = point_map_from_obj(read_json(args.map))
    if not all(isinstance(v, str) for v in f.values()):
        raise InputError("coarse maps need point images")
    missing = [x for x in src.ground if x not in f]
    if missing or set(f.values()) - set(tgt.ground):
        raise InputError("map must be total on the source and land in the target")
    return src, tgt, f


def cmd_coarse_map(args):
    src, tgt, f = _map_args(args)
    try:
        rho = check_coarse_map(f, src, tgt)
    except NotCoarse as exc:
        return False, {"coarse": False, "counterexample": [exc.point, exc.level]}, str(exc)
    table = {str(r): _e(e) for r, e in rho.levels().items()}
    return True, {"coarse": True, "modulus": table}, f"coarse, modulus {table}"


def cmd_asymorphism(args):
    src, tgt, f = _map_args(args)
    try:
        res = check_asymorphism(f, src, tgt)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {"asymorphism": res.ok, "failure": res.failure,
           "forward": None if res.forward is None else {str(r): _e(e) for r, e in res.forward.levels().items()},
           "backward": None if res.backward is None else {str(r): _e(e) for r, e in res.backward.levels().items()}}
    return res.ok, out, "asymorphism" if res.ok else f"{res.failure} direction is not coarse"


def cmd_metrize(args):
    b = _ballean(args.ballean)
    rep = metrizability_check(b, samples=args.samples, seed=args.seed)
    out = {"metrizable": rep.metrizable, "metric": metric_to_obj(rep.metric),
           "asymorphism": rep.asymorphism_ok, "chain_checked": rep.chain_checked,
           "chain_failures": len(rep.chain_failures)}
    return rep.ok, out, "metrizable; chain metric realises the scale" if rep.ok else "metric realisation failed"


def cmd_membership(args):
    b = _ballean(args.ballean)
    v = vector_from_obj(read_json(args.vector))
    if v.support - set(b.ground):
        raise InputError("vector support leaves the ground set")
    p = _params(args, b)
    cert = ideal_membership(v, p, b)
    base = {"vector": vector_to_obj(v), "params": params_to_obj(p)}
    if cert is None:
        return False, dict(base, member=False, certificate=None), "no certificate"
    if args.cert:
        Path(args.cert).write_text(canonical_json(certificate_to_obj(cert)))
    return True, dict(base, member=True, certificate=certificate_to_obj(cert)), \
        f"member: {len(cert.terms)} terms, z coefficient {fmt_rational(cert.z_coeff)}"


def cmd_verify(args):
    b = _ballean(args.ballean)
    d = certificate_from_obj(read_json(args.certificate))
    ok = verify_decomposition(d, b)
    out = {"valid": ok, "value": vector_to_obj(evaluate(d)), "params": params_to_obj(d.params)}
    if args.vector:
        v = vector_from_obj(read_json(args.vector))
        out["matches_vector"] = evaluate(d) == v
        ok = ok and out["matches_vector"]
    return ok, out, "certificate verifies" if ok else "certificate does not verify"


def cmd_reduce(args):
    b = _ballean(args.ballean)
    d = certificate_from_obj(read_json(args.certificate))
    target = _points(args.target)
    if not verify_decomposition(d, b):
        raise InputError("input certificate does not verify")
    try:
        red, power = reduce_to_support(d, target, b)
    except ReductionError as exc:
        raise InputError(str(exc)) from None
    ok = verify_decomposition(red, b) and evaluate(red) == evaluate(d)
    return ok, {"reduced": certificate_to_obj(red), "achieved_power": power}, \
        f"reduced to {len(red.terms)} terms, achieved power {power}"


def cmd_restriction_check(args):
    b = _ballean(args.ballean)
    for q in (args.x, args.y):
        if q not in b.ground:
            raise InputError(f"unknown point {q!r}")
    p = _params(args, b)
    v = restriction_check(b, args.x, args.y, p.n, p.entourage, p.z)
    out = {"x": v.x, "y": v.y, "params": params_to_obj(p),
           "pair_in_entourage": v.pair_in_entourage, "forward": v.forward,
           "member": v.member, "z_coeff_zero": v.z_coeff_zero,
           "achieved_power": v.achieved_power, "reduced_within_pair": v.reduced_within_pair,
           "converse": v.converse}
    return v.ok, out, f"forward={v.forward} member={v.member} converse={v.converse}"


def cmd_ideal_probe(args):
    b = _ballean(args.ballean)
    p = _params(args, b)
    rep = ideal_axiom_probe(b, samples=args.samples, seed=args.seed, params=p)
    out = {"params": params_to_obj(p), "samples": rep.samples,
           "axioms": {k: {"mode": t.mode, "checked": t.checked, "failures": len(t.failures)}
                      for k, t in rep.axioms.items()}}
    return rep.ok, out, "ideal axioms hold on all samples" if rep.ok else "ideal axiom violated"


def cmd_extend(args):
    f = point_map_from_obj(read_json(args.map))
    h = linear_extension(f)
    v = vector_from_obj(read_json(args.vector))
    if v.support - set(f):
        raise InputError("vector support outside the map's domain")
    img = h(v)
    val = vector_to_obj(img) if h.free_target else [fmt_rational(c) for c in img]
    return True, {"image": val, "vector": vector_to_obj(v)}, f"h(v) = {val}"


def cmd_linear_coarse(args):
    b = _ballean(args.ballean)
    f = point_map_from_obj(read_json(args.map))
    if set(b.ground) - set(f):
        raise InputError("map must be total on the source")
    h = linear_extension(f, b.ground)
    if h.free_target:
        if not args.target:
            raise InputError("point images need --target BALLEAN")
        target = _ballean(args.target)
        if set(f.values()) - set(target.ground):
            raise InputError("map leaves the target ground set")
    else:
        target = StandardVectorBallean(h.dim, args.max_m)
    try:
        rep = check_linear_coarse(h, b, target, n_range=range(1, args.n_max + 1),
                                  r_range=range(1, min(args.r_max, b.L) + 1),
                                  samples=args.samples, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    table = []
    for (n, e), t in sorted(rep.table.items()):
        table.append({"n": n, "entourage": _e(e),
                      "target": t if isinstance(t, int) else params_to_obj(t)})
    out = {"mode": rep.mode, "samples": rep.samples, "table": table,
           "counterexample": None if rep.counterexample is None else
           {"params": [rep.counterexample[0][0], _e(rep.counterexample[0][1])],
            "vector": vector_to_obj(rep.counterexample[1])}}
    return rep.ok, out, "linear extension is coarse on the range" if rep.ok else "escaping element found"


def cmd_closure(args):
    b = _ballean(args.ballean)
    try:
        rep = generated_ideal_closure(b, depth=args.depth, n_max=args.n_max,
                                      samples=args.samples, seed=args.seed)
    except DepthExceeded as exc:
        raise InputError(str(exc)) from None
    desc = [{"copies": d.copies, "bound": d.bound, "level": d.level, "z": d.has_z,
             "depth": dp, "inside": list(rep.upward[d][:2]), "failures": len(rep.upward[d][3])}
            for d, dp in sorted(rep.descriptors.items())]
    obs = [{"n": n, "r": r, "depth": dp} for (n, r), dp in sorted(rep.observed_depth.items())]
    out = {"depth": rep.depth, "descriptors": desc, "observed_depth": obs,
           "downward_checked": rep.downward_checked,
           "downward_failures": len(rep.downward_failures), "mode": "sampled"}
    return rep.ok, out, f"{len(desc)} descriptors; mutual containment {'holds' if rep.ok else 'fails'}"


def cmd_asym_nbhd(args):
    b = _lattice(args)
    A, U = parse_subset_arg(args.A), parse_subset_arg(args.U)
    try:
        v = asymptotic_neighborhood(A, U, b, _radii(args.radii))
    except WindowError as exc:
        raise InputError(str(exc)) from None
    return v.holds, {"A": subset_to_obj(A), "U": subset_to_obj(U), "verdict": _verdict_obj(v)}, \
        f"{v.status} (W={v.window})"


def cmd_asym_disjoint(args):
    b = _lattice(args)
    A, B = parse_subset_arg(args.A), parse_subset_arg(args.B)
    try:
        v = asymptotically_disjoint(A, B, b, _radii(args.radii))
    except WindowError as exc:
        raise InputError(str(exc)) from None
    return v.holds, {"A": subset_to_obj(A), "B": subset_to_obj(B), "verdict": _verdict_obj(v)}, \
        f"{v.status} (W={v.window})"


def cmd_separator(args):
    b = _lattice(args)
    A, B = parse_subset_arg(args.A), parse_subset_arg(args.B)
    try:
        res = metric_separator(A, B, b, _radii(args.radii) if args.radii else None)
    except WindowError as exc:
        raise InputError(str(exc)) from None
    W = b.W
    out = {"ok": res.ok, "window": W, "disjointness": _verdict_obj(res.disjointness)}
    if res.U_A is not None:
        lo = -min(W, 10)
        sample = [list(p) for p in _grid(lo, -lo, b.dim) if res.U_A.contains(p, b.dim)]
        out.update(nbhd_A=_verdict_obj(res.nbhd_A), nbhd_B=_verdict_obj(res.nbhd_B),
                   overlap=res.overlap, U_A_near_origin=sample)
    return res.ok, out, ("separated" if res.ok else "not separated") + f" (W={W})"


def _grid(lo, hi, d):
    from itertools import product as cart
    return cart(range(lo, hi + 1), repeat=d)


def cmd_split(args):
    b = _ballean(args.ballean)
    a = args.a if args.a is not None else b.ground[0]
    if a not in b.ground or b.size < 2:
        raise InputError("split needs a point of a ballean with at least two points")
    sp, rep = split_asymorphism(b, a, vectors=args.vectors, certificates=args.certificates,
                                seed=args.seed)
    maps = []
    for key, val in sorted(rep.param_maps.items(), key=lambda kv: str(kv[0])):
        if key[0] == "forward":
            box, p = val
            maps.append({"direction": "forward", "n": key[1], "entourage": [key[2], key[3]],
                         "box": box, "params": params_to_obj(p)})
        else:
            maps.append({"direction": "backward", "box": key[1], "n": key[2],
                         "entourage": [key[3], key[4]], "params": params_to_obj(val)})
    out = {"a": a, "Y": list(sp.Y), "z_Y": sp.zY, "a_star": sp.a_star,
           "round_trips": rep.round_trips, "round_trip_failures": len(rep.round_trip_failures),
           "forward_checked": rep.forward_checked, "backward_checked": rep.backward_checked,
           "membership_failures": len(rep.membership_failures), "param_maps": maps}
    return rep.ok, out, "splitting validated" if rep.ok else "splitting violated"


def cmd_bornology(args):
    b = _lattice(args) if args.lattice else _ballean(args.ballean)
    rep = bornology_cof(b)
    base = [{"center": _jsonable(c), "entourage": _e(e), "ball": _jsonable(s)} for c, e, s in rep.base]
    out = {"kind": rep.kind, "cof": rep.cof, "base": base}
    if rep.kind == "lattice":
        out["window"] = b.W
    return True, out, f"cof = {rep.cof}"


# ---------------------------------------------------------------- parser

def _add_params(p, need_n=True):
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--z", default=None)


def _add_lattice(p):
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--W", type=int, default=50)
    p.add_argument("--lattice", default=None, help="lattice config file {dim, W}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="write the JSON report here")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    ap = argparse.ArgumentParser(prog="freeballean", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"freeballean {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(fn=fn)
        return p

    def positional_ballean(p):
        p.add_argument("ballean", nargs="?", default=DEFAULT_BALLEAN,
                       help="ballean file or preset kind:size (default line:4)")

    def option_ballean(p):
        p.add_argument("-b", "--ballean", default=DEFAULT_BALLEAN)

    p = add("check-axioms", cmd_check_axioms, "check the ballean axioms of a presentation")
    positional_ballean(p)
    p = add("ball", cmd_ball, "ball eps_r^k[x]")
    positional_ballean(p)
    p.add_argument("--point", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--power", type=int, default=1)
    p = add("bounded", cmd_bounded, "least boundedness witness")
    positional_ballean(p)
    p.add_argument("--points", required=True)
    p = add("restrict", cmd_restrict, "subballean on a subset")
    positional_ballean(p)
    p.add_argument("--points", required=True)
    p = add("product", cmd_product, "product of two balleans")
    p.add_argument("ballean")
    p.add_argument("other")
    for name, fn in (("coarse-map", cmd_coarse_map), ("asymorphism", cmd_asymorphism)):
        p = add(name, fn, f"{name} check with modulus tables")
        p.add_argument("source")
        p.add_argument("target")
        p.add_argument("--map", required=True)
    p = add("metrize", cmd_metrize, "chain metric and countable-base check")
    positional_ballean(p)
    p.add_argument("--samples", type=int, default=50)
    p = add("membership", cmd_membership, "decide v in B(n, (r, k), z)")
    p.add_argument("vector")
    option_ballean(p)
    _add_params(p)
    p.add_argument("--cert", default=None, help="also write the bare certificate here")
    p = add("verify", cmd_verify, "re-verify a certificate")
    p.add_argument("certificate")
    option_ballean(p)
    p.add_argument("--vector", default=None)
    p = add("reduce", cmd_reduce, "eliminate points outside a target set")
    p.add_argument("certificate")
    option_ballean(p)
    p.add_argument("--target", required=True)
    p = add("restriction-check", cmd_restriction_check, "both directions of the restriction theorem")
    positional_ballean(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    _add_params(p)
    p = add("ideal-probe", cmd_ideal_probe, "sampled vector-ideal axioms")
    positional_ballean(p)
    _add_params(p)
    p.add_argument("--samples", type=int, default=20)
    p = add("extend", cmd_extend, "apply the linear extension of a point map")
    p.add_argument("map")
    p.add_argument("--vector", required=True)
    p = add("linear-coarse", cmd_linear_coarse, "parameter table of a linear extension")
    p.add_argument("map")
    option_ballean(p)
    p.add_argument("--target", default=None)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--r-max", type=int, default=3)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--max-m", type=int, default=None)
    p = add("closure", cmd_closure, "generated-ideal closure probe")
    positional_ballean(p)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--samples", type=int, default=3)
    for name, fn, second in (("asym-nbhd", cmd_asym_nbhd, "U"),
                             ("asym-disjoint", cmd_asym_disjoint, "B")):
        p = add(name, fn, f"{name} verdict on a lattice window")
        p.add_argument("--A", required=True)
        p.add_argument(f"--{second}", required=True)
        p.add_argument("--radii", default="1-10")
        _add_lattice(p)
    p = add("separator", cmd_separator, "metric separator of two subsets")
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--radii", default=None)
    _add_lattice(p)
    p = add("split", cmd_split, "V(X) ~ L x V(Y) splitting")
    positional_ballean(p)
    p.add_argument("--a", default=None)
    p.add_argument("--vectors", type=int, default=100)
    p.add_argument("--certificates", type=int, default=50)
    p = add("bornology", cmd_bornology, "base and cofinality of the bornology")
    positional_ballean(p)
    p.add_argument("--lattice", default=None)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            ok, result, summary = args.fn(args)
        except InputError as exc:
            print(f"input error: {exc}", file=sys.stderr)
            return 2
        except (ValueError, KeyError, IndexError, OSError) as exc:
            print(f"input error: {exc}", file=sys.stderr)
            return 2
    report = {"tool": "freeballean", "version": __version__, "command": args.command,
              "seed": args.seed, "status": "holds" if ok else "fails",
              "warnings": sorted({str(w.message) for w in caught}), "result": result}
    text = canonical_json(report)
    if args.out:
        Path(args.out).write_text(text)
    print(f"{args.command}: {summary}")
    return 0 if ok else 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
