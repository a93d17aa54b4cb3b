"""Acceptance criteria 1-9, each at its stated scale and tolerance.

A summary line per criterion is printed at the end of the run.
"""
import random
import time
from fractions import Fraction

import pytest

from freeballean.asymptotics import (FAILS, HOLDS, And, Finite, Halfspace, Parity,
                                     WindowBallean, asymptotically_disjoint,
                                     metric_separator, metrizability_check,
                                     split_asymorphism)
from freeballean.ballean import (E, GradedBallean, check_asymorphism, check_axioms,
                                 check_coarse_map, identity_map, metric_ballean,
                                 metric_from_scale, preset)
from freeballean.cli import run
from freeballean.io import canonical_json, certificate_from_obj, certificate_to_obj, read_json
from freeballean.membership import (ideal_membership, random_certificate, reduce_to_support,
                                    restriction_check)
from freeballean.oracle import brute_force_oracle
from freeballean.relations import Relation
from freeballean.universal import (StandardVectorBallean, check_linear_coarse,
                                   extension_certificate, linear_extension)
from freeballean.vectors import (Decomposition, DiffTerm, FreeVector, IdealBaseParams,
                                 evaluate, verify_decomposition)

from corpus import presentations, random_metric, random_scale

pytestmark = pytest.mark.acceptance


# ---------------------------------------------------------------- 1

def _mutations(b: GradedBallean, rng):
    """Single-axiom mutations of a valid presentation: (axiom, mutant, removed pairs)."""
    g, lv = b.ground, list(b.levels)

    def with_level(r, pairs):
        new = lv[:]
        new[r - 1] = Relation(g, frozenset(pairs))
        return GradedBallean(g, tuple(new))

    r = rng.randint(1, b.L)
    x = rng.choice(g)
    yield "diagonal", with_level(r, lv[r - 1].pairs - {(x, x)}), {(x, x)}
    off = [p for p in lv[-1].sorted_pairs() if p[0] != p[1]]
    if not off:
        return
    p = rng.choice(off)
    yield "symmetry", with_level(b.L, lv[-1].pairs - {p}), {p}
    yield "connectedness", with_level(b.L, lv[-1].pairs - {p, p[::-1]}), {p, p[::-1]}
    lower = [(s, q) for s in range(1, b.L) for q in lv[s - 1].sorted_pairs() if q[0] != q[1]]
    if lower:
        s, q = rng.choice(lower)
        yield "monotonicity", with_level(s + 1, lv[s].pairs - {q, q[::-1]}), {q, q[::-1]}
    stray = Relation(g + ("intruder",), lv[0].pairs | {("intruder", "intruder")})
    yield "ground", GradedBallean(g, (stray,) + tuple(lv[1:])), {("intruder", "intruder")}


def test_criterion_1_axiom_suite(criterion):
    with criterion(1, "axiom suite") as c:
        t0 = time.perf_counter()
        rng = random.Random(1)
        corpus = presentations(seed=1, count=220)
        assert len(corpus) >= 200
        assert all(b.size <= 8 and b.L <= 4 for b in corpus)
        invalid = [b for b in corpus if not check_axioms(b).ok]
        mutants = missed = 0
        for b in corpus:
            for axiom, m, removed in _mutations(b, rng):
                mutants += 1
                rep = check_axioms(m)
                hit = next((ch for ch in rep.checks if ch.name == axiom and not ch.ok), None)
                if hit is None or hit.witness is None:
                    missed += 1
                elif axiom != "monotonicity" and tuple(hit.witness) not in removed:
                    missed += 1
        elapsed = time.perf_counter() - t0
        c.detail = (f"{len(corpus)} presentations, {len(invalid)} invalid; "
                    f"{mutants} mutants, {missed} undetected; {elapsed:.1f}s")
        assert not invalid and not missed and elapsed < 60


# ---------------------------------------------------------------- 2

def _small_balleans(rng):
    fixed = [preset("line", s) for s in range(2, 6)] + [preset("cycle", s) for s in (3, 4, 5)]
    fixed.append(preset("grid", 2))
    while True:
        roll = rng.random()
        if roll < 0.6:
            yield rng.choice(fixed)
        elif roll < 0.8:
            yield metric_ballean(random_metric(rng, rng.randint(2, 5)))
        else:
            yield random_scale(rng, rng.randint(2, 5), rng.randint(2, 4))


def _small_denominators(v: FreeVector) -> bool:
    return all(c.denominator <= 4 for c in v.values())


def test_criterion_2_oracle_equivalence(criterion):
    with criterion(2, "membership oracle equivalence") as c:
        t0 = time.perf_counter()
        rng = random.Random(2)
        gen = _small_balleans(rng)
        instances = agree = members = bad_certs = 0
        while instances < 520:
            b = next(gen)
            p = IdealBaseParams(rng.randint(1, 3), E(rng.randint(1, b.L), rng.randint(1, 2)),
                                rng.choice(b.ground))
            mode = rng.random()
            if mode < 0.4:
                v = evaluate(random_certificate(b, p, rng))
            elif mode < 0.7:
                # member of a larger base set: often outside the tested one
                big = IdealBaseParams(p.n + 1, E(b.L, 2), p.z)
                v = evaluate(random_certificate(b, big, rng))
            else:
                v = FreeVector({x: Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4)))
                                for x in rng.sample(b.ground, rng.randint(1, b.size))})
            if not _small_denominators(v):
                continue
            instances += 1
            got, want = ideal_membership(v, p, b), brute_force_oracle(v, p, b)
            agree += (got is None) == (want is None)
            members += got is not None
            for d in (got, want):
                if d is not None and not (verify_decomposition(d, b) and evaluate(d) == v):
                    bad_certs += 1
        elapsed = time.perf_counter() - t0
        c.detail = (f"{instances} instances ({members} members), {agree} agree, "
                    f"{bad_certs} bad certificates; {elapsed:.1f}s")
        assert agree == instances and not bad_certs and elapsed < 300
        assert 0.2 * instances < members < 0.8 * instances


# ---------------------------------------------------------------- 3

def _restriction_corpus():
    out = [preset("line", s) for s in range(2, 7)] + [preset("cycle", s) for s in range(3, 7)]
    return out + [preset("grid", 2)]


def test_criterion_3_restriction_theorem(criterion):
    with criterion(3, "restriction theorem") as c:
        forward = converse = failures = 0
        for b in _restriction_corpus():
            for r in range(1, b.L + 1):
                for k in (1, 2):
                    for x in b.ground:
                        for y in b.ground:
                            for n in (1, 2, 3):
                                v = restriction_check(b, x, y, n, E(r, k))
                                if v.forward is not None:
                                    forward += 1
                                if v.member:
                                    converse += 1
                                    if not (v.converse and v.z_coeff_zero and v.reduced_within_pair):
                                        failures += 1
                                if v.pair_in_entourage and not v.forward:
                                    failures += 1
        c.detail = f"{forward} forward checks, {converse} converse checks, {failures} failures"
        assert failures == 0 and forward and converse


# ---------------------------------------------------------------- 4

def _routed_decomposition(b, rng):
    """A valid certificate of ``x - y`` whose terms pass through extra points."""
    n = rng.randint(1, 4)
    r = rng.randint(2, b.L)
    k = rng.randint(1, 2)
    rel = b.entourage(E(r, k))
    adj = rel.adjacency()
    while True:
        x = rng.choice(b.ground)
        m = rng.randint(1, n)
        walk = [x]
        for _ in range(m):
            walk.append(rng.choice(sorted(adj[walk[-1]])))
        y = walk[-1]
        if x == y:
            continue
        terms = [DiffTerm(walk[i], walk[i + 1], Fraction(1)) for i in range(m)]
        # fill the remaining slots with cancelling pairs
        while len(terms) + 2 <= n and rng.random() < 0.7:
            u = rng.choice(b.ground)
            w = rng.choice(sorted(adj[u]))
            lam = Fraction(rng.randint(-4 * n, 4 * n), 4)
            terms += [DiffTerm(u, w, lam), DiffTerm(w, u, lam)]
        rng.shuffle(terms)
        d = Decomposition(tuple(terms), Fraction(0), IdealBaseParams(n, E(r, k), rng.choice(b.ground)))
        extra = {q for t in terms for q in (t.x, t.y)} - {x, y}
        if len(extra) <= 3:
            return d, x, y, extra


def test_criterion_4_reduction(criterion):
    with criterion(4, "reduction algorithm") as c:
        rng = random.Random(4)
        corpus = [preset("line", 6), preset("cycle", 6), preset("grid", 2), preset("line", 8),
                  preset("cycle", 8)]
        done = failures = routed = 0
        worst = 0
        while done < 320:
            b = rng.choice(corpus)
            d, x, y, extra = _routed_decomposition(b, rng)
            assert verify_decomposition(d, b) and evaluate(d) == FreeVector.diff(x, y)
            done += 1
            routed += bool(extra)
            red, power = reduce_to_support(d, {x, y}, b)
            e = d.params.entourage
            worst = max(worst, power)
            ok = (len(extra) <= d.params.n                      # one elimination per extra point
                  and evaluate(red) == evaluate(d)
                  and power <= d.params.n
                  and all({t.x, t.y} <= {x, y} for t in red.terms)
                  and all(t.pair in b.power(e.level, e.power * power).pairs for t in red.terms)
                  and verify_decomposition(red, b))
            failures += not ok
        c.detail = f"{done} decompositions ({routed} routed), max achieved power {worst}, {failures} failures"
        assert failures == 0


# ---------------------------------------------------------------- 5

def _point_maps(rng):
    srcs = [preset("line", 4), preset("cycle", 5), preset("grid", 2), preset("line", 3)]
    tgts = [preset("line", 4), preset("line", 8), preset("cycle", 6), preset("grid", 2)]
    maps = []
    for b in srcs:
        maps.append((identity_map(b), b, b))
        for t in tgts:
            maps.append(({x: t.ground[-1] for x in b.ground}, b, t))
    maps.append(({f"p{i}": f"p{2 * i}" for i in range(4)}, srcs[0], tgts[1]))
    maps.append(({f"p{i}": f"p{2 * i}" for i in range(3)}, srcs[3], preset("line", 6)))
    maps.append(({f"p{i}": f"p{(2 * i) % 6}" for i in range(5)}, srcs[1], tgts[2]))
    while len(maps) < 52:
        b, t = rng.choice(srcs), rng.choice(tgts)
        maps.append(({x: rng.choice(t.ground) for x in b.ground}, b, t))
    return maps


def test_criterion_5_universal_property(criterion):
    with criterion(5, "universal property") as c:
        rng = random.Random(5)
        maps = _point_maps(rng)
        violations = checked = 0
        for f, b, t in maps:
            cert = extension_certificate(f, b, t, check_coarse_map(f, b, t), n_range=range(1, 4),
                                         r_range=range(1, 4), samples=100, seed=rng.randrange(10**6))
            checked += cert.checked
            violations += len(cert.violations)
            for (n, e), tp in cert.param_map.items():
                violations += tp != IdealBaseParams(n, cert.modulus.apply(e), f[cert.z])
        box_rows = box_bad = 0
        for size in range(2, 9):
            b = preset("line", size)
            h = linear_extension({f"p{i}": [i] for i in range(size)}, b.ground)
            rep = check_linear_coarse(h, b, StandardVectorBallean(1), n_range=range(1, 4),
                                      r_range=range(1, b.L + 1), samples=20, seed=size)
            for (n, e), m in rep.table.items():
                box_rows += 1
                box_bad += m != max(1, n * n * (e.level - 1))
            box_bad += not rep.ok
        c.detail = (f"{len(maps)} maps, {checked} pushed certificates, {violations} violations; "
                    f"{box_rows} box rows, {box_bad} mismatches")
        assert len(maps) >= 50 and violations == 0 and box_bad == 0


# ---------------------------------------------------------------- 6

def test_criterion_6_splitting(criterion):
    with criterion(6, "splitting asymorphism") as c:
        trips = fwd = bwd = bad = 0
        for i, b in enumerate([preset("line", 4), preset("cycle", 5), preset("grid", 2), preset("line", 6)]):
            for a in (b.ground[0], b.ground[b.size // 2]):
                _, rep = split_asymorphism(b, a, vectors=1000, certificates=200, seed=i)
                trips += rep.round_trips
                fwd += rep.forward_checked
                bwd += rep.backward_checked
                bad += len(rep.round_trip_failures) + len(rep.membership_failures)
        c.detail = f"{trips} round trips, {fwd}+{bwd} certificates, {bad} violations"
        assert bad == 0


# ---------------------------------------------------------------- 7

def test_criterion_7_metric_realisation(criterion):
    with criterion(7, "metric realisation") as c:
        corpus = presentations(seed=1, count=220)
        fails = sum(not check_asymorphism(identity_map(b), b, metric_ballean(metric_from_scale(b))).ok
                    for b in corpus)
        chain = chain_bad = 0
        for lat in (WindowBallean(1, 50), WindowBallean(2, 12)):
            rep = metrizability_check(lat, samples=100, seed=lat.dim)
            chain += rep.chain_checked
            chain_bad += len(rep.chain_failures) + (not rep.ok)
        c.detail = f"{len(corpus)} presentations, {fails} failures; {chain} lattice samples, {chain_bad} failures"
        assert fails == 0 and chain_bad == 0


# ---------------------------------------------------------------- 8

def test_criterion_8_asymptotics(criterion):
    with criterion(8, "asymptotics") as c:
        Z = WindowBallean(1, 50)
        radii = range(1, Z.max_radius + 1)
        pos, neg = Halfspace((1,), 1), Halfspace((-1,), 1)
        nonneg = Halfspace((1,), 0)
        evens, odds = And((nonneg, Parity(2, 0))), And((nonneg, Parity(2, 1)))
        half = asymptotically_disjoint(pos, neg, Z, radii)
        par = asymptotically_disjoint(evens, odds, Z, radii)
        assert half.status == HOLDS
        assert par.status == FAILS and par.failing_radius == 2 and par.witness is not None
        Z2 = WindowBallean(2, 24)
        pairs = [(pos, neg, Z), (Halfspace((1,), 6), Halfspace((-1,), 6), Z),
                 (Finite(((0,), (3,))), neg, Z), (evens, neg, Z),
                 (Halfspace((1, 0), 1) & Halfspace((0, 1), 1),
                  Halfspace((-1, 0), 1) & Halfspace((0, -1), 1), Z2)]
        sep_bad = 0
        for A, B, w in pairs:
            res = metric_separator(A, B, w)
            sep_bad += not (res.ok and res.nbhd_A.holds and res.nbhd_B.holds and res.overlap == 0)
        c.detail = (f"half-lines {half.status}, parity {par.status} at r={par.failing_radius}; "
                    f"{len(pairs)} separators, {sep_bad} failures")
        assert sep_bad == 0


# ---------------------------------------------------------------- 9

def test_criterion_9_cli(criterion, tmp_path, monkeypatch):
    from test_cli import CASES, DATA, GOLDEN
    from freeballean.cli import build_parser
    with criterion(9, "command line") as c:
        monkeypatch.chdir(DATA)
        wrong = golden_bad = reruns_bad = 0
        codes = {}
        for case, argv, code, golden in CASES:
            out1, out2 = tmp_path / f"{case}.1.json", tmp_path / f"{case}.2.json"
            got = run(argv + ["--out", str(out1)])
            codes.setdefault(argv[0], set()).add(got)
            wrong += got != code
            if got == 2:
                continue
            run(argv + ["--out", str(out2)])
            reruns_bad += out1.read_bytes() != out2.read_bytes()
            if golden:
                golden_bad += out1.read_bytes() != (GOLDEN / f"{case}.json").read_bytes()
        sub = next(a for a in build_parser()._actions if a.dest == "command")
        uncovered = [s for s in sub.choices if not ({0, 2} <= codes.get(s, set()))]

        cert = tmp_path / "cert.json"
        run(["membership", "--n", "2", "--level", "2", "--z", "p0", "v31.json", "--cert", str(cert)])
        text = cert.read_text()
        round_trip = (canonical_json(certificate_to_obj(certificate_from_obj(read_json(cert)))) == text
                      and run(["verify", str(cert), "--vector", "v31.json"]) == 0)
        c.detail = (f"{len(CASES)} invocations over {len(sub.choices)} subcommands; {wrong} wrong exit codes, "
                    f"{golden_bad} golden mismatches, {reruns_bad} unstable reruns; "
                    f"exit 1 exercised by {sum(1 in v for v in codes.values())} subcommands")
        assert not wrong and not golden_bad and not reruns_bad and not uncovered and round_trip
