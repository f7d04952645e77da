"""
Birkhoff-James orthogonality, two ways
======================================

v is orthogonal to w when no multiple of w shortens v. This can be
decided by the sign of one pairing (Kato's condition) or by minimising
t -> ||v + t w|| directly. The two routes should always agree.
"""
from banachlab import DenseVector, bj_minimize, bj_orthogonal, kato_pairing

p = 3
v = DenseVector([2.0, 1.0], p)

# J(v) = (4, 1)/5^(1/3); w = (1, -4) annihilates it
w = DenseVector([1.0, -4.0], p)
r = bj_orthogonal(v, w)
print("pairing", r.kato_pairing, "minimiser", r.min_lambda, "orthogonal", r.orthogonal)

# the relation is not symmetric away from p = 2
back = bj_orthogonal(w, v)
print("reverse direction orthogonal:", back.orthogonal, "pairing", back.kato_pairing)

# a non-orthogonal pair: the line dips below ||v||
u = DenseVector([1.0, 1.0], p)
e1 = DenseVector([1.0, 0.0], p)
m = bj_minimize(u, e1)
print("||u|| =", bj_orthogonal(u, e1).norm_v, "but min over t is", m.min_value, "at t =", m.min_lambda)
print("Kato pairing", kato_pairing(u, e1), "is nonzero")
