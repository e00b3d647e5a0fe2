"""Rank-one projection preservers on Hermitian matrices.

A linear map on Hermitian n x n matrices that sends rank-one projections to
rank-one projections is either ``A -> U A U*`` (``U`` unitary or
anti-unitary) or ``A -> tr(A) P``.  This package decides which, recovers
``U`` or ``P``, and provides the projective-line geometry behind it.
"""

from .classifier import (
    IsometryInduced,
    NotRankOnePreserving,
    TraceConstant,
    check_preserves_rank1,
    classify,
    generate,
    generate_with_truth,
    phase_aligned_error,
    recover_isometry,
    verdict_name,
)
from .coords import (
    SuperOperator,
    embed_isometry,
    embed_trace_constant,
    from_coords,
    pauli_coords,
    read_operator,
    superop_from_action,
    to_coords,
    write_operator,
)
from .geometry import (
    CircleRelation,
    LineParam,
    adjacent,
    antipodal_iff_orthogonal,
    circles_intersection_count,
    compatible,
    interval_membership,
    lambda_membership,
    projection_from_param,
    sample_circle,
    sample_interval,
    small_circle,
    sphere_point,
    su2_to_o3,
    sum_frame,
)
from .linalg import (
    Projection,
    haar_unitary,
    herm_eig,
    make_rng,
    projector_onto,
    range_basis,
    subspace_intersection,
    subspace_sum,
)

__version__ = "0.1.0"
