#!/usr/bin/env python
# Balls, bounded sets and coarse maps on the four-point line.
from freeballean import (E, ball, check_asymorphism, check_axioms, check_coarse_map,
                         is_bounded, metric_ballean, metric_from_scale, preset)
from freeballean.ballean import identity_map, line_metric

line = preset("line", 4)          # p0 - p1 - p2 - p3, eps_r = {d < r}
print("levels:", line.L)
print("axioms ok:", check_axioms(line).ok)

# eps_1 is the diagonal, eps_2 joins neighbours
for r in (1, 2, 3):
    print(f"eps_{r}[p1] =", sorted(ball(line, "p1", E(r))))
print("eps_2^3[p0] =", sorted(ball(line, "p0", E(2, 3))))

w = is_bounded(line, ["p0", "p1"])
print("{p0,p1} sits in the", w.entourage, "ball around", w.center)

# doubling p_i -> p_2i into the eight-point line
big = preset("line", 8)
rho = check_coarse_map({f"p{i}": f"p{2 * i}" for i in range(4)}, line, big)
print("doubling modulus:", {r: str(e) for r, e in rho.levels().items()})

# the same points with distances doubled are asymorphic via the identity
doubled = metric_ballean(line_metric(4).scaled(2))
res = check_asymorphism(identity_map(line), line, doubled)
print("forward table:", {r: str(e) for r, e in res.forward.levels().items()})

# rebuild a metric from the scale alone and check it gives the same coarse structure
m = metric_from_scale(line)
print("chain metric d(p0,p3) =", m.d[("p0", "p3")])
print("asymorphic to its chain metric:",
      check_asymorphism(identity_map(line), line, metric_ballean(m)).ok)
