"""Points Z with P + Q - Z a rank-one projection form a small circle.

For distinct, non-orthogonal P and Q the set is a plane section of the
sphere away from its centre.  Two members of that circle either regenerate
it (their off-diagonal entries cancel) or span a second circle which meets
the first in exactly those two members.
"""

import numpy as np

from wignerkit import (
    LineParam,
    circles_intersection_count,
    lambda_membership,
    projection_from_param,
    sample_circle,
    small_circle,
    sphere_point,
    sum_frame,
)

P = projection_from_param(LineParam(0.9, 0.2))
Q = projection_from_param(LineParam(0.35, 2.0))
frame = sum_frame(P, Q)
circle = small_circle(P, Q)
print(f"t = {frame.t:.4f}; circle centre {np.round(circle.center, 4)}, radius {circle.radius:.4f}")

members = sample_circle(frame, 12)
print("all 12 samples satisfy the membership test:",
      all(lambda_membership(P, Q, Z) for Z in members))
print("all 12 samples lie on the plane section:",
      all(circle.contains(sphere_point(Z)) for Z in members))

S = np.stack([Z.matrix for Z in members])
overlaps = np.real(np.einsum("aij,bji->ab", S, S))
np.fill_diagonal(overlaps, np.inf)
print(f"smallest overlap tr(Z_i Z_j) = {overlaps.min():.4f}, (2t-1)^2 = {(2 * frame.t - 1) ** 2:.4f}")

print("\nopposite members 0 and 6:", circles_intersection_count(frame, members[0], members[6]).name)
print("members 1 and 4:         ", circles_intersection_count(frame, members[1], members[4]).name)
