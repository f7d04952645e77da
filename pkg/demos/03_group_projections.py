"""
Averaging over a finite group
=============================

For a signed-permutation representation the average of all group
elements is a projection onto the fixed vectors. On the regular
representation of Z_n it is the mean operator M, and the complementary
projection I - M can have norm close to 2 in l_inf.
"""
import numpy as np

from banachlab import DenseVector, OperatorMatrix, cyclic_group, invariant_projection, regular_representation
from banachlab.groups import SignedPermutation, lemma_equivariance_check, spike_witness

for n in (3, 5, 10):
    rep = regular_representation(cyclic_group(n), "inf")
    pp = invariant_projection(rep)
    A = OperatorMatrix(pp.complement, "inf")
    f = spike_witness(n)
    print(f"n={n:2d}  rank {pp.rank}  ||(I-M)f|| / ||f|| = {A.ratio(f):.6f}  2-2/n = {2 - 2 / n:.6f}")

# isometries commute with the duality map, after passing to the dual side
s = SignedPermutation((2, 0, 1), (1, -1, 1))
v = DenseVector(np.array([0.3, -1.2, 2.0]), 4)
print("equivariance defect:", lemma_equivariance_check(s, v))
