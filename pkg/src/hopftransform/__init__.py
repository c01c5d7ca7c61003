"""Numerical toolkit for Hopf transforms of square-zero elliptic curves."""

from .bundles import (
    BundleHopfForm,
    BundleTauForm,
    DiophantineReport,
    TorsionVerdict,
    diophantine_report,
    hopf_to_tau,
    inverse_bundle,
    is_torsion,
    pic0_point,
    tau_to_hopf,
)
from .cobordism import (
    CobordismMove,
    CompactificationRecord,
    GraftReport,
    apply_move,
    bundles_equivalent,
    canonical_moves,
    enumerate_cobordant,
    enumerate_hopf_duals,
    minimal_compactifications,
)
from .errors import PreconditionError
from .hopf import (
    HopfClassification,
    HopfSurface,
    SecondaryHopfData,
    classify_hopf,
    complement_bundle,
    isogeny_pullback,
    joint_hopf,
    secondary_quotient,
)
from .surfaces import (
    K0Witness,
    MotivicClass,
    NinePointConfig,
    enumerate_algebraic_structures,
    motivic_class_blowup_p2,
    normal_bundle_class,
    verify_k0an_equality,
)
from .torus import (
    HalfPlanePoint,
    IsogenyCertificate,
    LatticePoint,
    ModularMatrix,
    apply_mobius,
    bounded_isogeny_search,
    j_invariant,
    lattice_distance,
    reduce_to_fundamental_domain,
)

__all__ = [name for name in dir() if not name.startswith("_")]
