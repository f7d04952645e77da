"""
A shift model where the projection is bicontractive
===================================================

E = l_p(Z) + R^k with the integers acting by translation on the first
factor and trivially on the second. Matrix coefficients against the
invariant part vanish, the complement is orthogonal to the invariants,
and the complementary projection has norm exactly one.
"""
import numpy as np

from banachlab import ShiftModel, SparseSeq, opial_gap, theorem1_certificate, wot_limit_check
from banachlab.shift import random_certificate_instance

model = ShiftModel(trivial_dim=2, p=3)
v = model.vector({0: 1.0, 3: -2.0})
w = model.vector(fixed=[1.0, 0.5])
cert = theorem1_certificate(v, w, g_list=[1, 10, 1000, 10**9])
print("c_n (+g):", cert.c_plus)
print("c_n (-g):", cert.c_minus)
print("orthogonal:", cert.bj.orthogonal, " ||I-P|| on a window:", cert.complement_norm)

# translations drift sequence vectors off to infinity: weak limits are zero
chk = wot_limit_check(model.vector({0: 1.0}), model.vector({5: 2.0}), range(0, 12))
print("threshold", chk.threshold, "coefficients", chk.plus)

# a batch of random instances
rng = np.random.default_rng(0)
ok = sum(theorem1_certificate(*random_certificate_instance(rng, 1.2 + 6 * rng.random(), 1 + i % 3),
                              g_list=range(1, 30)).passed for i in range(50))
print("random certificates passed:", ok, "/ 50")

# Opial: a translated bump is closer to the weak limit than to any other point
p = 3
v0 = SparseSeq.from_dict({0: 1.0}, p)
u = SparseSeq.from_dict({0: 2.0, 1: -1.0}, p)
y = SparseSeq.from_dict({0: 0.0, 2: 1.0}, p)
g = opial_gap(v0, u, y)
print("to weak limit", g.lim_to_weak_limit, " to y", g.lim_to_y, " closed form", g.closed_form_to_y)
