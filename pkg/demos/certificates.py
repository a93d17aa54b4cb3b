#!/usr/bin/env python
# Membership in B(n, (r, k), z) = S_{n, eps} + [-n, n] z, with certificates.
from fractions import Fraction

from freeballean import (Decomposition, FreeVector, IdealBaseParams, brute_force_oracle,
                         ideal_membership, preset, reduce_to_support, verify_decomposition)
from freeballean.vectors import vec

line = preset("line", 4)
P = IdealBaseParams.of
D = FreeVector.diff


def show(label, d):
    if d is None:
        print(f"{label}: not a member")
        return
    terms = " + ".join(f"{t.coeff}({t.x}-{t.y})" for t in d.terms) or "0"
    print(f"{label}: {terms} + {d.z_coeff}*{d.params.z}")


show("p2-p1 in B(1,(2,1),p0)", ideal_membership(D("p2", "p1"), P(1, 2, 1, "p0"), line))
show("p3 in B(1,(4,1),p0)", ideal_membership(vec(p3=1), P(1, 4, 1, "p0"), line))

# p3 - p1 needs two neighbour steps
for n in (1, 2):
    show(f"p3-p1 in B({n},(2,1),p0)", ideal_membership(D("p3", "p1"), P(n, 2, 1, "p0"), line))

# the coefficient bound bites: 3(p2 - p1) is too long for n = 1
v = 3 * D("p2", "p1")
show("3(p2-p1) in B(1,(2,1),p0)", ideal_membership(v, P(1, 2, 1, "p0"), line))
print("oracle agrees:", brute_force_oracle(v, P(1, 2, 1, "p0"), line) is None)

# a half-integer vector
w = Fraction(1, 2) * D("p2", "p0") + vec(p0=Fraction(3, 4))
show("(p2-p0)/2 + 3/4 p0 in B(2,(2,1),p0)", ideal_membership(w, P(2, 2, 1, "p0"), line))

# elimination: route p3 - p0 along the line and collapse the walk
chain = Decomposition.build([(("p3", "p2"), 1), (("p2", "p1"), 1), (("p1", "p0"), 1)], 0,
                            P(3, 2, 1, "p0"))
print("chain verifies:", verify_decomposition(chain, line))
red, power = reduce_to_support(chain, {"p0", "p3"}, line)
show("reduced", red)
print("achieved power:", power, "-> (p3,p0) in eps_2^3:", ("p3", "p0") in line.power(2, 3).pairs)
