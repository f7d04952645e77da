"""
The duality map of l_p
======================

For 1 < p < inf every nonzero v in l_p has exactly one dual vector J(v)
in l_q with <v, J(v)> = ||v||^2 and ||J(v)||_q = ||v||_p.
"""
import numpy as np

from banachlab import DenseVector, duality_map, inverse_duality_map, norm, pair

# a vector in l_3 and its dual partner in l_{3/2}
v = DenseVector([3.0, -4.0], 3)
j = duality_map(v)
print("v      ", v.entries, "p =", v.p)
print("J(v)   ", j.entries, "q =", j.p)
print("<v,J(v)> =", pair(v, j), " ||v||^2 =", norm(v) ** 2)
print("||J(v)||_q =", norm(j), " ||v||_p =", norm(v))

# J is homogeneous, odd, and inverted by the duality map of l_q
print("J(2v) / J(v) =", duality_map(v * 2.0).entries / j.entries)
print("J_q(J_p(v)) =", inverse_duality_map(j).entries)

# at p = 2 it is the identity
print("p = 2:", duality_map(DenseVector([3.0, -4.0], 2)).entries)

# extreme magnitudes stay finite thanks to max-rescaling
big = DenseVector(np.array([1e200, -3e200]), 50)
print("huge entries, p = 50:", duality_map(big).entries)
