"""Finite pointfree topology toolkit.

Builds and validates finite MT-algebras, frames, and Raney extensions;
classifies them against a separation/compactness taxonomy; constructs
Funayama envelopes; and checks the associated correspondence theorems
exhaustively over enumerated corpora of small structures.
"""

from mtkit.order import (
    FinitePoset,
    FiniteLattice,
    LatticeEmbedding,
    NotALattice,
    NotDistributive,
    validate_lattice,
    frame_coframe_flags,
    irreducibles,
    downset_lattice,
    macneille_completion,
    boolean_envelope,
    right_adjoint,
    density_flags,
    is_exact_join,
    completely_join_primes,
)
from mtkit.mt import (
    MTAlgebra,
    AxiomProfile,
    NotATopology,
    build_mt,
    product_mt,
    relativize,
    mt_isomorphic,
)
from mtkit.frames import FrameView, Filter, open_frame, classify
from mtkit.raney import (
    RaneyExtension,
    FunayamaResult,
    validate_raney,
    raney_of_mt,
    funayama_of_frame,
    funayama_of_raney,
    filt_se_extension,
    theorem_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
