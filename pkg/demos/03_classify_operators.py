"""Classifying linear maps on Hermitian matrices.

Maps that send rank-one projections to rank-one projections are either
conjugation by a unitary (possibly composed with complex conjugation) or
A -> tr(A) P.  The classifier recovers the unitary or P, and rejects
anything else with a measured defect.
"""

import numpy as np

from wignerkit import (
    classify,
    generate_with_truth,
    make_rng,
    phase_aligned_error,
    superop_from_action,
    verdict_name,
)

rng = make_rng(2024)
for kind in ("isometry", "anti_isometry", "constant"):
    op, truth = generate_with_truth(kind, 4, rng)
    v = classify(op, rng=make_rng(1))
    if kind == "constant":
        err = np.linalg.norm(v.P.matrix - truth["P"])
    else:
        err = phase_aligned_error(v.U, truth["U"])
    print(f"{kind:14s} -> {verdict_name(v):15s} recovery error {err:.1e}")

for eps in (1e-3, 1e-5):
    op, _ = generate_with_truth("perturbed", 4, rng, eps=eps)
    v = classify(op, rng=make_rng(1))
    print(f"perturbed eps={eps:.0e} -> {verdict_name(v):15s} defect {v.defect:.2e}")

transpose = superop_from_action(lambda A: A.T, 3)
v = classify(transpose)
print("\ntranspose is antilinear:", v.antilinear, "with U =")
print(np.round(v.U, 6).real)
