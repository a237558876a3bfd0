"""Exact certificates for K3 zeta-function building blocks over finite fields.

The package decides, with no floating point anywhere, whether a rational
polynomial qualifies as the transcendental part of a K3 surface's zeta
numerator in characteristic p (`condition.check_candidate`), constructs
passing witnesses for prescribed invariants (`condition.construct_witness`),
verifies the quadratic-form and lattice computations behind the existence
argument (`qform`, `k3lattice`), and answers (Picard number, slope height)
feasibility queries (`condition.feasibility`).  The `k3cert` console
script exposes all of it.
"""

from .arith import (
    INFINITE_PLACE,
    Place,
    SquareClass,
    companion_prime,
    hilbert,
    is_prime,
    legendre,
    next_progression_prime,
    square_class,
    val_p,
)
from .condition import (
    CandidateReport,
    FeasibilityVerdict,
    check_candidate,
    construct_witness,
    construct_witness_even_h,
    feasibility,
    seed_polynomial,
)
from .k3lattice import (
    LatticeReport,
    LatticeSpec,
    build_picard_lattice,
    k3_ambient_invariants,
    no_minus_two_vector,
    rationalize,
    verify_lattice,
)
from .qform import (
    CMFieldData,
    EmbeddingReport,
    HyperbolicityReport,
    QuadSpace,
    SpaceInvariants,
    complement_invariants,
    embedding_criterion,
    hyperbolic,
    hyperbolicity_check,
    invariants,
)
from .weilpoly import (
    IrreducibilityCertificate,
    NewtonPolygon,
    RatPoly,
    cyclotomic,
    cyclotomic_index_list,
    has_cyclotomic_factor,
    kronecker_certificate,
    newton_polygon,
    parse_poly,
    reciprocal_transform,
    squarefree_decompose,
    strip_cyclotomic,
    sturm_count,
    unit_circle_check,
)

__version__ = "0.1.0"
