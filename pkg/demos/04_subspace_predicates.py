"""Higher-rank analogue: pairs of k-dimensional subspaces.

For projections of rank k, the Z with P_X + P_Y - P_Z a rank-k projection
always lie between X ∩ Y and X + Y, and they fill that interval exactly
when X and Y are compatible (their projections commute).
"""

import numpy as np

from wignerkit import (
    compatible,
    haar_unitary,
    interval_membership,
    lambda_membership,
    make_rng,
    projector_onto,
    sample_interval,
    subspace_intersection,
    subspace_sum,
)
from wignerkit.suites import incompat_pair

rng = make_rng(5)
W = haar_unitary(4, rng)
pairs = {
    "compatible": (W[:, [0, 1]], W[:, [1, 2]]),
    "adjacent, incompatible": incompat_pair(4, 2, True, rng),
}
for label, (X, Y) in pairs.items():
    M, N = subspace_intersection(X, Y), subspace_sum(X, Y)
    PX, PY = projector_onto(X), projector_onto(Y)
    Zs = [sample_interval(M, N, 2, rng) for _ in range(200)]
    hits = sum(bool(lambda_membership(PX, PY, projector_onto(Z), 2)) for Z in Zs)
    assert all(interval_membership(M, N, Z, 2) for Z in Zs)
    print(f"{label:24s} compatible={compatible(X, Y)!s:5s} dim(X∩Y)={M.shape[1]} dim(X+Y)={N.shape[1]}"
          f"  interval samples in the set: {hits}/200")
