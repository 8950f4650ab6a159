"""Frame-level predicates and filter machinery on finite frames.

A FrameView wraps a validated frame, optionally remembering the
MT-algebra whose opens it collects. Filters are enumerated as principal
upsets; the exhaustive subset-quantified enumeration is kept alongside
as the oracle proving that nothing else exists at finite scale.
"""

from __future__ import annotations

from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Optional, Union

from mtkit.order import (
    FiniteLattice,
    OrderError,
    SUBSET_ENUM_LIMIT,
    bits,
    frame_coframe_flags,
    irreducibles,
    lattice_from_masks,
    mask_of,
    subset_fold_table,
)
from mtkit.mt import (
    AxiomProfile,
    MTAlgebra,
    NotOpen,
    compactness_profile,
    nt_profile,
    separation_profile,
    structure_profile,
)

if TYPE_CHECKING:
    pass

DIRECTED_ENUM_LIMIT = 14


class NotAFrame(OrderError):
    pass


class NotAFilter(OrderError):
    pass


class FrameView:
    """A validated finite frame, with optional MT-algebra provenance."""

    def __init__(self, lattice: FiniteLattice, parent: Optional[MTAlgebra] = None,
                 element_masks: Optional[tuple[int, ...]] = None):
        if not frame_coframe_flags(lattice)[0]:
            raise NotAFrame("lattice is not a frame")
        self.lattice = lattice
        self.parent = parent
        self.element_masks = element_masks

    @classmethod
    def ensure(cls, L: Union["FrameView", FiniteLattice]) -> "FrameView":
        return L if isinstance(L, FrameView) else cls(L)

    @property
    def size(self) -> int:
        return self.lattice.size

    @cached_property
    def implication(self) -> tuple[tuple[int, ...], ...]:
        """implication[s][a] = join of {b | s ^ b <= a}."""
        L = self.lattice
        out = []
        for s in range(L.size):
            row = []
            for a in range(L.size):
                row.append(L.join_all(mask_of(
                    b for b in range(L.size) if L.leq(L.meet[s][b], a))))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def pseudocomplement_row(self) -> tuple[int, ...]:
        return tuple(self.implication[u][self.lattice.bottom]
                     for u in range(self.size))

    @cached_property
    def fixed_sets(self) -> tuple[int, ...]:
        """fixed_sets[s] = bitset of {a | s -> a = a}."""
        return tuple(mask_of(a for a in range(self.size)
                             if self.implication[s][a] == a)
                     for s in range(self.size))

    def __repr__(self) -> str:
        return f"FrameView(size={self.size}, from_mt={self.parent is not None})"


def open_frame(M: MTAlgebra) -> FrameView:
    """The opens of M as a standalone frame with provenance."""
    lat = lattice_from_masks(list(M.opens))
    return FrameView(lat, parent=M, element_masks=lat.element_masks)  # type: ignore[attr-defined]


def heyting(frame: Union[FrameView, FiniteLattice], s: int, a: int) -> int:
    """Relative pseudocomplement s -> a."""
    return FrameView.ensure(frame).implication[s][a]


def pseudocomplement(frame: Union[FrameView, FiniteLattice], u: int) -> int:
    return FrameView.ensure(frame).pseudocomplement_row[u]


def pseudocomplement_via_interior(M: MTAlgebra, s: int) -> int:
    """Pseudocomplement of an open computed inside the MT-algebra as the
    interior of the complement; must agree with the frame computation."""
    if not M.is_open(s):
        raise NotOpen(f"element {s} is not open")
    return M.interior[M.full ^ s]


def subfit_failure(frame: Union[FrameView, FiniteLattice]) -> Optional[tuple[int, int]]:
    """Least a !<= b with no c joining a to the top but not b."""
    L = FrameView.ensure(frame).lattice
    for a in range(L.size):
        for b in range(L.size):
            if L.leq(a, b):
                continue
            if not any(L.join[a][c] == L.top and L.join[b][c] != L.top
                       for c in range(L.size)):
                return (a, b)
    return None


def is_subfit(frame: Union[FrameView, FiniteLattice]) -> bool:
    return subfit_failure(frame) is None


def hausdorff_failure(frame: Union[FrameView, FiniteLattice]) -> Optional[int]:
    """Least non-top a that is not the join of its u <= a with u* !<= a."""
    fv = FrameView.ensure(frame)
    L = fv.lattice
    star = fv.pseudocomplement_row
    for a in range(L.size):
        if a == L.top:
            continue
        acc = L.bottom
        for u in range(L.size):
            if L.leq(u, a) and not L.leq(star[u], a):
                acc = L.join[acc][u]
        if acc != a:
            return a
    return None


def is_hausdorff_frame(frame: Union[FrameView, FiniteLattice]) -> bool:
    return hausdorff_failure(frame) is None


class Filter:
    """Nonempty upward-closed meet-closed member set of a lattice."""

    def __init__(self, lattice: FiniteLattice, members: Union[int, Iterable[int]]):
        self.lattice = lattice
        self.members = mask_of(members)
        if self.members == 0:
            raise NotAFilter("a filter is nonempty")
        for a in bits(self.members):
            if lattice.up[a] & ~self.members:
                raise NotAFilter(f"not upward closed at {a}")
            for b in bits(self.members):
                if not self.members >> lattice.meet[a][b] & 1:
                    raise NotAFilter(f"not closed under meet at ({a}, {b})")

    def __contains__(self, a: int) -> bool:
        return bool(self.members >> a & 1)

    def element_ids(self) -> tuple[int, ...]:
        return tuple(bits(self.members))

    @cached_property
    def minimum(self) -> int:
        return self.lattice.meet_all(self.members)

    def is_principal(self) -> bool:
        return self.members >> self.minimum & 1

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Filter) and self.lattice is other.lattice
                and self.members == other.members)

    def __hash__(self) -> int:
        return hash((id(self.lattice), self.members))

    def __repr__(self) -> str:
        return f"Filter({sorted(self.element_ids())})"


def _reverse_inclusion_order(fs: list[Filter]) -> list[Filter]:
    return sorted(fs, key=lambda f: (-bin(f.members).count("1"), f.members))


def filters(frame: Union[FrameView, FiniteLattice]) -> list[Filter]:
    """All filters, as principal upsets; every finite-lattice filter is
    principal, which all_filters_exhaustive recomputes from the axioms."""
    L = FrameView.ensure(frame).lattice
    return _reverse_inclusion_order([Filter(L, L.up[a]) for a in range(L.size)])


def all_filters_exhaustive(frame: Union[FrameView, FiniteLattice]) -> list[Filter]:
    """Every member set satisfying the filter axioms, by subset scan."""
    L = FrameView.ensure(frame).lattice
    if L.size > SUBSET_ENUM_LIMIT:
        raise OrderError(f"exhaustive filter scan needs size <= {SUBSET_ENUM_LIMIT}")
    out = []
    for members in range(1, 1 << L.size):
        try:
            out.append(Filter(L, members))
        except NotAFilter:
            pass
    return _reverse_inclusion_order(out)


def completely_prime_filters(frame: Union[FrameView, FiniteLattice]) -> list[Filter]:
    """CP filters via meet-primes: {a | a !<= m} for each meet-prime m.

    is_completely_prime_filter is the direct-definition cross-check.
    """
    fv = FrameView.ensure(frame)
    L = fv.lattice
    out = []
    for m in irreducibles(L).meet_primes:
        out.append(Filter(L, L.poset.full_mask & ~L.down[m]))
    return _reverse_inclusion_order(out)


def is_completely_prime_filter(frame: Union[FrameView, FiniteLattice],
                               F: Filter) -> bool:
    """Direct definition: every subset whose join lands in F meets F."""
    L = FrameView.ensure(frame).lattice
    if L.size > SUBSET_ENUM_LIMIT:
        raise OrderError(f"exhaustive CP scan needs size <= {SUBSET_ENUM_LIMIT}")
    joins = subset_fold_table(L.join, list(range(L.size)), L.bottom)
    for S in range(1 << L.size):
        if F.members >> joins[S] & 1 and S & F.members == 0:
            return False
    return True


def is_spatial_frame(frame: Union[FrameView, FiniteLattice]) -> bool:
    """Every a !<= b is separated by a completely prime filter."""
    L = FrameView.ensure(frame).lattice
    cps = completely_prime_filters(L)
    for a in range(L.size):
        for b in range(L.size):
            if L.leq(a, b):
                continue
            if not any(a in F and b not in F for F in cps):
                return False
    return True


def dense_elements(frame: Union[FrameView, FiniteLattice]) -> Filter:
    """The filter of elements with zero pseudocomplement."""
    fv = FrameView.ensure(frame)
    L = fv.lattice
    members = mask_of(a for a in range(L.size)
                      if fv.pseudocomplement_row[a] == L.bottom)
    return Filter(L, members)


def is_strongly_exact_meet(frame: Union[FrameView, FiniteLattice],
                           S: Union[int, Iterable[int]]) -> bool:
    """Whether s -> a = a for all s in S forces (meet S) -> a = a."""
    fv = FrameView.ensure(frame)
    L = fv.lattice
    smask = mask_of(S)
    inter = L.poset.full_mask
    for s in bits(smask):
        inter &= fv.fixed_sets[s]
    return inter & ~fv.fixed_sets[L.meet_all(smask)] == 0


def is_strongly_exact_filter(frame: Union[FrameView, FiniteLattice],
                             F: Filter) -> bool:
    """Filter closed under the strongly exact meets of its member subsets.

    Quantifies every member subset while the frame is small enough;
    beyond that a principal filter is closed under all member meets, so
    only the filter's own meet needs checking.
    """
    fv = FrameView.ensure(frame)
    L = fv.lattice
    members = sorted(bits(F.members))
    if L.size > SUBSET_ENUM_LIMIT:
        m = L.meet_all(F.members)
        return not is_strongly_exact_meet(fv, F.members) or m in F
    meets = subset_fold_table(L.meet, members, L.top)
    inters = [L.poset.full_mask] * (1 << len(members))
    for mask in range(1, 1 << len(members)):
        low = mask & -mask
        inters[mask] = inters[mask ^ low] & fv.fixed_sets[members[low.bit_length() - 1]]
    for mask in range(1 << len(members)):
        strongly_exact = inters[mask] & ~fv.fixed_sets[meets[mask]] == 0
        if strongly_exact and not F.members >> meets[mask] & 1:
            return False
    return True


def strongly_exact_filters(frame: Union[FrameView, FiniteLattice]) -> list[Filter]:
    """All strongly exact filters, ordered by reverse inclusion."""
    fv = FrameView.ensure(frame)
    return [F for F in filters(fv) if is_strongly_exact_filter(fv, F)]


def scott_open_filters(frame: Union[FrameView, FiniteLattice]) -> list[Filter]:
    """Filters meeting every directed set whose join they contain.

    The directed-subset scan runs while feasible; beyond the limit every
    nonempty directed set in a finite lattice has a maximum, so every
    filter qualifies (the scan regression-checks this at small size).
    """
    fv = FrameView.ensure(frame)
    L = fv.lattice
    fs = filters(fv)
    if L.size > DIRECTED_ENUM_LIMIT:
        return fs
    ub = [[L.poset.up[a] & L.poset.up[b] for b in range(L.size)]
          for a in range(L.size)]
    directed = []
    for S in range(1, 1 << L.size):
        elems = list(bits(S))
        if all(ub[a][b] & S for a in elems for b in elems):
            directed.append((S, L.join_all(S)))
    out = []
    for F in fs:
        if all(not F.members >> j & 1 or S & F.members
               for S, j in directed):
            out.append(F)
    return out


def classify(M: MTAlgebra) -> AxiomProfile:
    """Compute the full axiom profile of an MT-algebra; every flag comes
    from its defining predicate."""
    sep = separation_profile(M)
    nt = nt_profile(M)
    comp = compactness_profile(M)
    st = structure_profile(M)
    fv = open_frame(M)
    return AxiomProfile(
        t0=sep.t0, t_half=sep.t_half, t1=sep.t1, t2=sep.t2,
        t3=sep.t3, t3half=sep.t3half, t4=sep.t4,
        nt1=nt.nt1, nt2=nt.nt2, nt3=nt.nt3, nt3half=nt.nt3half, nt4=nt.nt4,
        compact=comp.compact, locally_compact=comp.locally_compact,
        n_locally_compact=comp.n_locally_compact,
        spatial=st.spatial, sober=st.sober,
        hausdorff_open_frame=is_hausdorff_frame(fv),
        subfit_open_frame=is_subfit(fv),
    )


def _atom_set(mask: int) -> str:
    return "[" + " ".join(str(i) for i in bits(mask)) + "]"


def profile_witnesses(M: MTAlgebra) -> dict[str, str]:
    """Human-readable witness per failing axiom flag."""
    from mtkit import mt as mtmod

    out: dict[str, str] = {}
    d0, dh, d1, d2 = mtmod.t_class_density_failures(M)
    for name, w in (("t0", d0), ("t_half", dh), ("t1", d1), ("t2", d2)):
        if w is not None:
            out[name] = f"element {_atom_set(w)} is not a join of {name}-elements below it"
    t1 = d1 is None
    for name, fail in (("t3", mtmod.t3_failure), ("t3half", mtmod.t3half_failure)):
        if not t1:
            out[name] = "not a t1-algebra"
        else:
            w = fail(M)
            if w is not None:
                out[name] = f"open {_atom_set(w)} is not the join of opens sufficiently below it"
    if not t1:
        out["t4"] = "not a t1-algebra"
    else:
        w4 = mtmod.t4_failure(M)
        if w4 is not None:
            out["t4"] = (f"closed pair {_atom_set(w4[0])}, {_atom_set(w4[1])} "
                         "has no disjoint open covers")
    for name, fail in (("nt1", mtmod.nt1_failure), ("nt2", mtmod.nt2_failure),
                       ("nt3", mtmod.nt3_failure), ("nt3half", mtmod.nt3half_failure),
                       ("nt4", mtmod.nt4_failure)):
        w = fail(M)
        if w is not None:
            out[name] = f"pair {_atom_set(w[0])}, {_atom_set(w[1])} admits no separator"
    st = structure_profile(M)
    if not st.sober:
        w = mtmod.sober_failure(M)
        if w is not None:
            out["sober"] = f"join-irreducible closed {_atom_set(w)} is no atom closure"
        else:
            out["sober"] = "not a t0-algebra"
    fv = open_frame(M)
    wh = hausdorff_failure(fv)
    if wh is not None:
        out["hausdorff_open_frame"] = f"open frame element {wh} breaks the Hausdorff join"
    ws = subfit_failure(fv)
    if ws is not None:
        out["subfit_open_frame"] = f"open frame pair {ws} admits no subfitness witness"
    return out
