#!/usr/bin/env python
# Asymptotic disjointness and separation on Z, seen through a window.
from freeballean.asymptotics import (And, Halfspace, Parity, WindowBallean,
                                     asymptotically_disjoint, bornology_cof,
                                     metric_separator, split_asymorphism)
from freeballean import preset

Z = WindowBallean(1, 50)
radii = range(1, Z.max_radius + 1)
pos, neg = Halfspace((1,), 1), Halfspace((-1,), 1)
nonneg = Halfspace((1,), 0)
evens, odds = And((nonneg, Parity(2, 0))), And((nonneg, Parity(2, 1)))

v = asymptotically_disjoint(pos, neg, Z, radii)
print("i > 0 vs i < 0:", v.status, "W =", v.window)
v = asymptotically_disjoint(evens, odds, Z, radii)
print("evens vs odds:", v.status, "at r =", v.failing_radius, "witness", v.witness)
print(v.note)

sep = metric_separator(pos, neg, Z)
print("separator ok:", sep.ok, "U_A near 0:", [i for i in range(-3, 4) if sep.U_A.contains((i,))])

# V(X) splits as Q a x V(X \ a)
line = preset("line", 4)
sp, rep = split_asymorphism(line, "p0", vectors=200, certificates=50)
print("split off p0: round trips", rep.round_trips, "certificates",
      rep.forward_checked + rep.backward_checked, "ok", rep.ok)
print("bornology of Z:", bornology_cof(Z).cof, "; of line4:", bornology_cof(line).cof)
