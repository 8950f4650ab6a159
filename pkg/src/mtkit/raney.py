"""Raney extensions and Funayama envelopes, with the correspondence
theorems packaged as executable two-sided checks.

A Raney extension is a coframe C with an embedded frame L that is
join-closed, finite-meet-closed, meet-dense, and whose joins are exact
in C. The Funayama envelope of a frame (or of a Raney pair) is the
MacNeille completion of its boolean envelope, carrying the interior
operator given by the right adjoint of the frame embedding; both steps
are executed even where finiteness would allow shortcuts, and the
derived interior is cross-checked against the largest-open-below table.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

from mtkit.order import (
    FiniteLattice,
    FinitePoset,
    LatticeEmbedding,
    OrderError,
    SUBSET_ENUM_LIMIT,
    bits,
    boolean_envelope,
    completely_join_primes,
    density_flags,
    irreducibles,
    is_exact_join,
    lattice_from_masks,
    macneille_completion,
    mask_of,
    right_adjoint,
    subset_fold_table,
    validate_lattice,
)
from mtkit.mt import MTAlgebra, build_mt, mt_isomorphic
from mtkit.frames import (
    FrameView,
    completely_prime_filters,
    open_frame,
    strongly_exact_filters,
)

EXACTNESS_ENUM_LIMIT = 12


class NotCoframe(OrderError):
    def __init__(self, triple):
        super().__init__(f"codistributivity fails at triple {triple}")
        self.triple = triple


class NotJoinClosed(OrderError):
    def __init__(self, subset: tuple[int, ...], join: int):
        super().__init__(f"join of image subset {subset} lands outside the image at {join}")
        self.subset = subset
        self.join = join


class InexactJoin(OrderError):
    def __init__(self, subset: tuple[int, ...]):
        super().__init__(f"join of image subset {subset} is not exact")
        self.subset = subset


class NotMeetDense(OrderError):
    def __init__(self, element: int):
        super().__init__(f"element {element} is not a meet of image elements")
        self.element = element


class NotCJP(OrderError):
    pass


class RaneyExtension:
    """Validated pair of a coframe C and an embedded frame L."""

    def __init__(self, C: FiniteLattice, embedding: LatticeEmbedding):
        self.C = C
        self.embedding = embedding

    @cached_property
    def frame(self) -> FiniteLattice:
        """The embedded frame as a lattice in its own right."""
        src = self.embedding.source
        if isinstance(src, FiniteLattice):
            return src
        return validate_lattice(src)

    @cached_property
    def image_ids(self) -> tuple[int, ...]:
        return self.embedding.map

    def __repr__(self) -> str:
        return f"RaneyExtension(C={self.C.size}, L={self.frame.size})"


def validate_raney(C: FiniteLattice, L_embed: LatticeEmbedding) -> RaneyExtension:
    """Check the extension axioms, raising a named witness on violation.

    Join closure and exactness quantify every image subset while the
    image is small; larger images use the binary reductions valid in a
    finite lattice, which the suite regression-tests at small size.
    """
    witness = _cocheck(C)
    if witness is not None:
        raise NotCoframe(witness)
    image = list(L_embed.map)
    image_set = set(image)
    if C.bottom not in image_set:
        raise NotJoinClosed((), C.bottom)
    if C.top not in image_set:
        raise NotJoinClosed((), C.top)  # the empty meet
    for a in image:
        for b in image:
            if C.meet[a][b] not in image_set:
                raise NotJoinClosed((a, b), C.meet[a][b])
    if len(image) <= EXACTNESS_ENUM_LIMIT:
        joins = subset_fold_table(C.join, image, C.bottom)
        for mask in range(1 << len(image)):
            if joins[mask] not in image_set:
                raise NotJoinClosed(tuple(image[i] for i in bits(mask)), joins[mask])
        for a in range(C.size):
            # exactness of every image join against a, folded incrementally
            ma = C.meet[a]
            partial = [C.bottom] * (1 << len(image))
            for mask in range(1, 1 << len(image)):
                low = mask & -mask
                partial[mask] = C.join[partial[mask ^ low]][ma[image[low.bit_length() - 1]]]
                if partial[mask] != ma[joins[mask]]:
                    raise InexactJoin(tuple(image[i] for i in bits(mask)))
    else:
        for a in image:
            for b in image:
                if C.join[a][b] not in image_set:
                    raise NotJoinClosed((a, b), C.join[a][b])
                if not is_exact_join(C, mask_of((a, b))):
                    raise InexactJoin((a, b))
    meet_dense = density_flags(C, image)[1]
    if not meet_dense:
        for x in range(C.size):
            if C.meet_all(mask_of(i for i in image if C.leq(x, i))) != x:
                raise NotMeetDense(x)
    return RaneyExtension(C, L_embed)


def _cocheck(C: FiniteLattice):
    n, meet, join = C.size, C.meet, C.join
    for a in range(n):
        for b in range(n):
            for c in range(b, n):
                if join[a][meet[b][c]] != meet[join[a][b]][join[a][c]]:
                    return (a, b, c)
    return None


def raney_of_mt(M: MTAlgebra) -> RaneyExtension:
    """The pair (saturated elements, opens) with the inclusion embedding."""
    C = lattice_from_masks(list(M.saturated_elements))
    sat_index = {m: i for i, m in enumerate(C.element_masks)}  # type: ignore[attr-defined]
    fv = open_frame(M)
    emb = LatticeEmbedding(
        fv.lattice, C,
        tuple(sat_index[u] for u in fv.element_masks))
    ext = validate_raney(C, emb)
    ext.mt_parent = M  # type: ignore[attr-defined]
    return ext


@dataclass(frozen=True)
class FunayamaResult:
    """Envelope algebra plus the unit embedding of the input frame into
    its opens; atom_base_ids[i] is the id, in the lattice the envelope
    was built over, of the least element whose image contains atom i."""

    envelope: MTAlgebra
    unit: LatticeEmbedding
    atom_base_ids: tuple[int, ...]


def _funayama(base: FiniteLattice, open_ids: Sequence[int],
              L: FiniteLattice) -> FunayamaResult:
    """Shared construction: boolean envelope of `base`, MacNeille-completed,
    with opens the images of `open_ids` and interior the right adjoint."""
    B, eb = boolean_envelope(base)
    Bhat, em = macneille_completion(B.poset)
    into = tuple(em.map[eb.map[a]] for a in range(base.size))
    atoms = irreducibles(Bhat).atoms

    def atom_mask(x: int) -> int:
        return mask_of(i for i, at in enumerate(atoms) if Bhat.leq(at, x))

    open_map = tuple(atom_mask(into[a]) for a in open_ids)
    env = build_mt(len(atoms), open_map,
                   max_elements=max(64, 1 << len(atoms)))
    frame_into = tuple(into[a] for a in open_ids)
    adj = right_adjoint(LatticeEmbedding(L, Bhat, frame_into))
    for x in range(Bhat.size):
        if env.interior[atom_mask(x)] != atom_mask(frame_into[adj[x]]):
            raise OrderError("adjoint interior disagrees with largest-open-below")
    unit_map = tuple(env.opens.index(open_map[l]) for l in range(len(open_ids)))
    if len(set(unit_map)) != len(env.opens):
        raise OrderError("unit does not reach every open of the envelope")
    unit = LatticeEmbedding(L, open_frame(env).lattice, unit_map)
    atom_base = []
    for i in range(len(atoms)):
        holders = [a for a in range(base.size) if atom_mask(into[a]) >> i & 1]
        atom_base.append(base.meet_all(mask_of(holders)))
    return FunayamaResult(env, unit, tuple(atom_base))


def funayama_of_frame(L: Union[FrameView, FiniteLattice]) -> FunayamaResult:
    """Envelope of a frame: atoms are its join-irreducibles, opens its
    elements; raises NotDistributive for non-frames."""
    fv = FrameView.ensure(L)
    return _funayama(fv.lattice, range(fv.size), fv.lattice)


def funayama_of_raney(R: RaneyExtension) -> FunayamaResult:
    """Envelope of a Raney pair: built over the coframe, with opens the
    embedded frame and interior its right adjoint."""
    return _funayama(R.C, R.image_ids, R.frame)


def filt_se_extension(L: Union[FrameView, FiniteLattice]) -> RaneyExtension:
    """The strongly exact filters, reverse-inclusion ordered, over the
    frame embedded as principal filters."""
    fv = FrameView.ensure(L)
    se = strongly_exact_filters(fv)
    members = [f.members for f in se]
    n = len(members)
    up = tuple(mask_of(j for j in range(n) if members[j] & ~members[i] == 0)
               for i in range(n))
    C = validate_lattice(FinitePoset(n, up, _validated=True),
                         max_elements=max(64, n))
    emb_map = tuple(members.index(fv.lattice.up[a]) for a in range(fv.size))
    return validate_raney(C, LatticeEmbedding(fv.lattice, C, emb_map))


class RaneyFlags:
    def __init__(self, spatial: bool, sober: bool):
        self.spatial = spatial
        self.sober = sober

    def __iter__(self):
        return iter((self.spatial, self.sober))

    def __repr__(self) -> str:
        return f"RaneyFlags(spatial={self.spatial}, sober={self.sober})"


def raney_flags(R: RaneyExtension) -> RaneyFlags:
    """spatial: C is join-generated by its completely join-primes;
    sober: every completely prime filter of L is the trace of one."""
    cjps = completely_join_primes(R.C)
    spatial = density_flags(R.C, cjps)[0]
    emb = R.embedding.map
    L = R.frame
    sober = True
    for P in completely_prime_filters(L):
        traces = [mask_of(l for l in range(L.size) if R.C.leq(p, emb[l]))
                  for p in cjps]
        if P.members not in traces:
            sober = False
            break
    return RaneyFlags(spatial, sober)


def cjp_to_atom(M: MTAlgebra, p: int) -> int:
    """The element p ^ not-join{u open | p !<= u} for a completely
    join-prime saturated p; raises NotCJP otherwise."""
    sat = M.saturated_elements
    C = lattice_from_masks(list(sat))
    cjp_masks = {C.element_masks[i]  # type: ignore[attr-defined]
                 for i in completely_join_primes(C)}
    if p not in cjp_masks:
        raise NotCJP(f"{p} is not a completely join-prime saturated element")
    blocked = 0
    for u in M.opens:
        if p & ~u:
            blocked |= u
    return p & M.full & ~blocked


@dataclass(frozen=True)
class TheoremCheck:
    """One executed theorem instance with both sides evaluated."""

    name: str
    lhs: bool
    rhs: bool
    holds: bool
    note: str = ""


@dataclass(frozen=True)
class TheoremReport:
    subject: str
    checks: tuple[TheoremCheck, ...]

    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def envelope_isomorphism(M: MTAlgebra, result: FunayamaResult,
                         base_masks: Sequence[int]
                         ) -> tuple[Optional[tuple[int, ...]], str]:
    """Try the canonical atom map (atom to the least base element holding
    it), falling back to isomorphism search; returns (bijection, path)."""
    env = result.envelope
    if M.atom_count == env.atom_count:
        base_of_atom = {bid: i for i, bid in enumerate(result.atom_base_ids)}
        perm: Optional[list[int]] = []
        for b in range(M.atom_count):
            x = 1 << b
            holders = [i for i, m in enumerate(base_masks) if x & ~m == 0]
            inter = M.full
            for i in holders:
                inter &= base_masks[i]
            least = next((i for i in holders if base_masks[i] == inter), None)
            if least is None or least not in base_of_atom:
                perm = None
                break
            perm.append(base_of_atom[least])
        if perm is not None and len(set(perm)) == M.atom_count:
            mapped = {mask_of(perm[i] for i in bits(u)) for u in M.opens}
            if mapped == set(env.opens):
                return tuple(perm), "canonical"
    found = mt_isomorphic(M, env)
    return (found, "search") if found is not None else (None, "none")


def frame_compact(frame: Union[FrameView, FiniteLattice]) -> bool:
    """Every subset joining to the top has a finite subset doing so."""
    L = FrameView.ensure(frame).lattice
    if L.size > SUBSET_ENUM_LIMIT:
        return True  # subsets of a finite frame are their own finite subcovers
    joins = subset_fold_table(L.join, list(range(L.size)), L.bottom)
    for S in range(1 << L.size):
        if joins[S] != L.top:
            continue
        finite_candidate = S  # subsets here are finite sets
        if joins[finite_candidate] != L.top:
            return False
    return True


def theorem_suite(subject: Union[MTAlgebra, FrameView, FiniteLattice]) -> TheoremReport:
    """Evaluate the envelope/spatiality theorems on one structure, each
    side by an independent code path."""
    if isinstance(subject, MTAlgebra):
        return _mt_theorems(subject)
    return _frame_theorems(FrameView.ensure(subject))


def _mt_theorems(M: MTAlgebra) -> TheoremReport:
    from mtkit.mt import separation_profile

    sep = separation_profile(M)
    fv = open_frame(M)
    fres = funayama_of_frame(fv)
    iso_half, path_half = envelope_isomorphism(M, fres, fv.element_masks)
    raney = raney_of_mt(M)
    rres = funayama_of_raney(raney)
    iso_zero, path_zero = envelope_isomorphism(
        M, rres, raney.C.element_masks)  # type: ignore[attr-defined]
    checks = (
        TheoremCheck("t_half iff M is its open-frame envelope",
                     sep.t_half, iso_half is not None,
                     sep.t_half == (iso_half is not None), note=path_half),
        TheoremCheck("t0 iff M is its Raney envelope",
                     sep.t0, iso_zero is not None,
                     sep.t0 == (iso_zero is not None), note=path_zero),
    )
    return TheoremReport("mt-algebra", checks)


def _frame_theorems(fv: FrameView) -> TheoremReport:
    from mtkit.frames import is_spatial_frame, is_subfit
    from mtkit.mt import compactness_profile, separation_profile, structure_profile

    fres = funayama_of_frame(fv)
    env = fres.envelope
    sep = separation_profile(env)
    comp = compactness_profile(env)
    st = structure_profile(env)
    subfit = is_subfit(fv)
    spatial_l = is_spatial_frame(fv)
    compact_l = frame_compact(fv)
    checks = (
        TheoremCheck("envelope is t1 iff the frame is subfit",
                     sep.t1, subfit, sep.t1 == subfit),
        TheoremCheck("envelope is t_half", True, sep.t_half, sep.t_half),
        TheoremCheck("compact subfit frames are spatial",
                     compact_l and subfit, spatial_l,
                     not (compact_l and subfit) or spatial_l),
        TheoremCheck("compact t1 envelopes are spatial",
                     comp.compact and sep.t1, st.spatial,
                     not (comp.compact and sep.t1) or st.spatial),
        TheoremCheck("n-locally compact t1 envelopes are spatial",
                     comp.n_locally_compact and sep.t1, st.spatial,
                     not (comp.n_locally_compact and sep.t1) or st.spatial),
        TheoremCheck("locally compact t_half envelopes are spatial",
                     comp.locally_compact and sep.t_half, st.spatial,
                     not (comp.locally_compact and sep.t_half) or st.spatial),
    )
    return TheoremReport("frame", checks)
