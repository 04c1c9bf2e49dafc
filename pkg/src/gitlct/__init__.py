"""Exact torus stability, VGIT walls and lct checks for tuples of hypersurfaces."""

from .forms import (
    DependentGenerators,
    EmptyForm,
    HyperplaneForm,
    HypersurfaceForm,
    ProjectivePoint,
    ProjectiveTransform,
    TuplePoint,
    member,
    plucker_support,
    tuple_of,
)
from .lattice import NormalizedOPS, make_normalized_ops
from .lct import LocalGerm, global_lct, lct_newton, local_lct, tuple_lct_bound
from .opssearch import (
    TorusStatus,
    candidate_lambdas,
    destabilizer_search,
    torus_verdict,
    vgit_scan,
    vgit_walls,
)
from .weights import (
    Classification,
    Mode,
    VGITConfig,
    decompose_omegas,
    omega_hypersurface,
    omega_tuple,
    verdict_for_lambda,
)

__version__ = "0.1.0"
