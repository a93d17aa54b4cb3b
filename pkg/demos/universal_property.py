#!/usr/bin/env python
# Linear extensions of point maps and what they do to the base sets.
from freeballean import E, preset
from freeballean.universal import (StandardVectorBallean, check_linear_coarse,
                                   extension_certificate, generated_ideal_closure,
                                   linear_extension)
from freeballean.vectors import FreeVector

line = preset("line", 4)

# p_i -> i on the real line
h = linear_extension({f"p{i}": [i] for i in range(4)}, line.ground)
print("h(p3 - p1) =", [str(c) for c in h(FreeVector.diff("p3", "p1"))])

rep = check_linear_coarse(h, line, StandardVectorBallean(1), r_range=range(1, 5))
print("box containing h(B(n,(r,1),p0)):")
for n in (1, 2, 3):
    print("  n =", n, [rep.table[(n, E(r))] for r in range(1, 5)])

# the same map into the eight-point line, as a point map
cert = extension_certificate({f"p{i}": f"p{2 * i}" for i in range(4)}, line, preset("line", 8),
                             samples=50)
tp = cert.param_map[(2, E(2))]
print(f"B(2,(2,1),p0) -> B'({tp.n},{tp.entourage},{tp.z});", cert.checked, "certificates pushed,",
      len(cert.violations), "violations")

# close {D_eps_r} and {z} under sums, scalings and unions
clo = generated_ideal_closure(line, depth=3, n_max=2, samples=3)
print(len(clo.descriptors), "descriptors; mutually cofinal with the base:", clo.ok)
for (n, r), depth in sorted(clo.observed_depth.items()):
    print(f"  B({n},({r},1),p0) first covered at depth", depth)
