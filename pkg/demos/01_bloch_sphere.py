"""Rank-one projections on C^2 as points of a sphere.

Every unit vector (sqrt(t), sqrt(1-t) e^{i alpha}) gives a projection whose
Pauli coordinates sit at x0 = 1/2 on a sphere of radius 1/2.  Orthogonal
vectors land on antipodal points, and unitaries act by rotations.
"""

import numpy as np

from wignerkit import (
    LineParam,
    antipodal_iff_orthogonal,
    haar_unitary,
    make_rng,
    projection_from_param,
    sphere_point,
    su2_to_o3,
)

print("t     alpha   x0     x1      x2      x3")
for t, alpha in [(1.0, 0.0), (0.5, 0.0), (0.5, np.pi / 2), (0.0, 0.0), (0.8, 1.0)]:
    x = sphere_point(projection_from_param(LineParam(t, alpha)))
    print(f"{t:4.2f}  {alpha:5.2f}  " + "  ".join(f"{c:+.3f}" for c in x))

P = projection_from_param(LineParam(0.3, 0.4))
Q = projection_from_param(LineParam(0.7, 0.4 + np.pi))
print("\nP, Q orthogonal -> antipodal:", antipodal_iff_orthogonal(P, Q))
print("x_P + x_Q =", np.round(sphere_point(P).vec + sphere_point(Q).vec, 15))

U = haar_unitary(2, make_rng(0))
R = su2_to_o3(U)
moved = sphere_point(U @ P.matrix @ U.conj().T).vec
print("\nrotation matrix of a random unitary (det %.3f):" % np.linalg.det(R))
print(np.round(R, 4))
print("U P U* on the sphere matches R x_P:", np.allclose(moved, R @ sphere_point(P).vec))
print("complex conjugation acts as", np.diag(su2_to_o3(np.eye(2), antilinear=True)))
