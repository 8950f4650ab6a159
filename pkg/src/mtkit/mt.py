"""Finite MT-algebras: boolean algebras of atom sets with an interior
operator induced by a declared family of open sets.

An element is the bitset of the atoms it contains, so the whole carrier
is range(2^atom_count), join is `|`, meet is `&`, and negation is xor
with the full mask. Every predicate below quantifies exhaustively over
the definition it implements; the finite-scale degeneracies (everything
compact, saturated = open, ...) are observed by the test suite, never
assumed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

from mtkit.order import (
    FiniteLattice,
    OrderError,
    SUBSET_ENUM_LIMIT,
    MAX_ELEMENTS_DEFAULT,
    bits,
    irreducibles,
    is_boolean,
    mask_of,
)


class NotATopology(OrderError):
    """The declared open family is not closed under the required operations."""

    def __init__(self, reason: str, witness: Optional[tuple[int, int]] = None):
        super().__init__(reason)
        self.witness = witness


class NotBoolean(OrderError):
    pass


class ZeroRelativization(OrderError):
    pass


class NotOpen(OrderError):
    pass


class MTAlgebra:
    """Immutable MT-algebra on `atom_count` atoms with validated opens."""

    def __init__(self, atom_count: int, opens: tuple[int, ...],
                 interior: tuple[int, ...], closure: tuple[int, ...]):
        self.atom_count = atom_count
        self.opens = opens
        self.interior = interior
        self.closure = closure
        self.full = (1 << atom_count) - 1

    @property
    def carrier_size(self) -> int:
        return 1 << self.atom_count

    @cached_property
    def _open_set(self) -> frozenset[int]:
        return frozenset(self.opens)

    def is_open(self, a: int) -> bool:
        return a in self._open_set

    def is_closed(self, a: int) -> bool:
        return self.full ^ a in self._open_set

    def complement(self, a: int) -> int:
        return self.full ^ a

    @cached_property
    def closed_elements(self) -> tuple[int, ...]:
        return tuple(sorted(self.full ^ u for u in self.opens))

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        """Minimal nonzero elements of the carrier."""
        out = []
        for k in range(1, self.carrier_size):
            if not any(m & ~k == 0 for m in range(1, k)):
                out.append(k)
        return tuple(out)

    def saturation(self, a: int) -> int:
        """Meet of all opens above a (the top is always among them)."""
        acc = self.full
        for u in self.opens:
            if a & ~u == 0:
                acc &= u
        return acc

    @cached_property
    def saturated_elements(self) -> tuple[int, ...]:
        """All meets of open families, computed as an intersection closure."""
        sat = set(self.opens)
        frontier = list(sat)
        while frontier:
            x = frontier.pop()
            for y in list(sat):
                z = x & y
                if z not in sat:
                    sat.add(z)
                    frontier.append(z)
        return tuple(sorted(sat))

    @cached_property
    def open_prec_rows(self) -> tuple[int, ...]:
        """rows[i] = bitset over open indices j with opens[i] `rather below` opens[j]."""
        rows = []
        for u in self.opens:
            row = 0
            cu = self.closure[u]
            for j, v in enumerate(self.opens):
                if cu & ~self.interior[v] == 0:
                    row |= 1 << j
            rows.append(row)
        return tuple(rows)

    @cached_property
    def interpolation_core(self) -> tuple[int, ...]:
        """Greatest subrelation of `rather below` on opens in which every
        related pair has an interpolant related to both sides."""
        rows = list(self.open_prec_rows)
        changed = True
        while changed:
            changed = False
            for i in range(len(rows)):
                reach = 0
                for w in bits(rows[i]):
                    reach |= rows[w]
                kept = rows[i] & reach
                if kept != rows[i]:
                    rows[i] = kept
                    changed = True
        return tuple(rows)

    def __repr__(self) -> str:
        return f"MTAlgebra(atoms={self.atom_count}, opens={len(self.opens)})"


def build_mt(atom_count: int, opens: Iterable[int],
             max_elements: int = MAX_ELEMENTS_DEFAULT) -> MTAlgebra:
    """Validate an open family and derive the interior/closure tables.

    Raises NotATopology naming the first violating pair when the family
    is not closed under union or intersection, or lacks the extremes.
    """
    size = 1 << atom_count
    if size > max_elements:
        raise OrderError(f"carrier has {size} elements, cap is {max_elements}")
    fam = sorted(set(opens))
    full = size - 1
    for u in fam:
        if u & ~full:
            raise NotATopology(f"open {u} mentions atoms beyond {atom_count}")
    have = set(fam)
    for i, u in enumerate(fam):
        for v in fam[i + 1:]:
            if u | v not in have:
                raise NotATopology(f"union of {u} and {v} is not open", (u, v))
            if u & v not in have:
                raise NotATopology(f"intersection of {u} and {v} is not open", (u, v))
    if not fam or fam[0] != 0:
        raise NotATopology("the empty element is missing from the opens")
    if fam[-1] != full:
        raise NotATopology("the full element is missing from the opens")
    interior = []
    for a in range(size):
        acc = 0
        for u in fam:
            if u & ~a == 0:
                acc |= u
        interior.append(acc)
    closure = tuple(full ^ interior[full ^ a] for a in range(size))
    M = MTAlgebra(atom_count, tuple(fam), tuple(interior), closure)
    _check_kuratowski(M)
    return M


def _check_kuratowski(M: MTAlgebra) -> None:
    box = M.interior
    if box[M.full] != M.full:
        raise NotATopology("interior of the top is not the top")
    for a in range(M.carrier_size):
        if box[a] & ~a:
            raise NotATopology(f"interior of {a} is not below it")
        if box[box[a]] != box[a]:
            raise NotATopology(f"interior is not idempotent at {a}")
        for b in range(a, M.carrier_size):
            if box[a & b] != box[a] & box[b]:
                raise NotATopology(f"interior does not distribute over {a} ^ {b}")


class ElementClass(NamedTuple):
    is_t0_elt: bool
    is_t_half_elt: bool
    is_t1_elt: bool
    is_t2_elt: bool


def element_class(M: MTAlgebra, a: int) -> ElementClass:
    """Separation class of one element, each flag by exhaustive search.

    t0: a = s ^ c with s saturated and c closed; t_half: the same with s
    open; t1: a closed; t2: a equals the meet of the closures of its open
    neighbourhoods.
    """
    closeds = M.closed_elements
    t0 = any(s & c == a for s in M.saturated_elements for c in closeds)
    th = any(u & c == a for u in M.opens for c in closeds)
    t1 = M.is_closed(a)
    acc = M.full
    for u in M.opens:
        if a & ~u == 0:
            acc &= M.closure[u]
    return ElementClass(t0, th, t1, acc == a)


class SeparationFlags(NamedTuple):
    t0: bool
    t_half: bool
    t1: bool
    t2: bool
    t3: bool
    t3half: bool
    t4: bool


def _join_density_failure(M: MTAlgebra, members: list[int]) -> Optional[int]:
    """Least element that is not a join of members below it."""
    for b in range(M.carrier_size):
        acc = 0
        for x in members:
            if x & ~b == 0:
                acc |= x
        if acc != b:
            return b
    return None


def t_class_density_failures(M: MTAlgebra) -> tuple[Optional[int], ...]:
    """Join-density witnesses for the four element-class flags, or Nones."""
    classes: tuple[list[int], ...] = ([], [], [], [])
    for a in range(M.carrier_size):
        flags = element_class(M, a)
        for k in range(4):
            if flags[k]:
                classes[k].append(a)
    return tuple(_join_density_failure(M, c) for c in classes)


def t3_failure(M: MTAlgebra) -> Optional[int]:
    """Least open not the join of opens rather below it."""
    rows = M.open_prec_rows
    for i, u in enumerate(M.opens):
        acc = 0
        for j, v in enumerate(M.opens):
            if rows[j] >> i & 1:
                acc |= v
        if acc != u:
            return u
    return None


def t3half_failure(M: MTAlgebra) -> Optional[int]:
    """Least open not the join of opens completely below it."""
    for u in M.opens:
        acc = 0
        for v in M.opens:
            if completely_below(M, v, u) is not None:
                acc |= v
        if acc != u:
            return u
    return None


def t4_failure(M: MTAlgebra) -> Optional[tuple[int, int]]:
    """Least disjoint closed pair with no disjoint open covers."""
    closeds = M.closed_elements
    for c in closeds:
        for d in closeds:
            if c & d:
                continue
            if not any(c & ~u == 0 and d & ~v == 0 and u & v == 0
                       for u in M.opens for v in M.opens):
                return (c, d)
    return None


def separation_profile(M: MTAlgebra) -> SeparationFlags:
    """The seven lower/higher separation flags.

    The lower four hold when the corresponding element class is
    join-dense; the higher three additionally require t1.
    """
    d0, dh, d1, d2 = t_class_density_failures(M)
    t1 = d1 is None
    return SeparationFlags(
        t0=d0 is None,
        t_half=dh is None,
        t1=t1,
        t2=d2 is None,
        t3=t1 and t3_failure(M) is None,
        t3half=t1 and t3half_failure(M) is None,
        t4=t1 and t4_failure(M) is None,
    )


def rather_below(M: MTAlgebra, a: int, b: int) -> bool:
    """closure(a) <= interior(b)."""
    return M.closure[a] & ~M.interior[b] == 0


@dataclass(frozen=True)
class InterpolationWitness:
    """A finite chain of opens witnessing `completely below` endpoints."""

    endpoints: tuple[int, int]
    chain: tuple[int, ...]

    def __post_init__(self):
        a, b = self.endpoints
        if not self.chain or a & ~self.chain[0] or self.chain[-1] & ~b:
            raise ValueError("chain does not bracket the endpoints")


def completely_below(M: MTAlgebra, a: int, b: int) -> Optional[InterpolationWitness]:
    """Witness that a sits under an interpolable chain of opens under b.

    Holds iff some pair (u, v) of the greatest interpolative subrelation
    of `rather below` on opens has a <= u and v <= b; the returned chain
    is (u, w, v) for the least such pair and interpolant.
    """
    core = M.interpolation_core
    for i, u in enumerate(M.opens):
        if a & ~u:
            continue
        for j in bits(core[i]):
            v = M.opens[j]
            if v & ~b:
                continue
            w = next(M.opens[k] for k in bits(core[i]) if core[k] >> j & 1)
            return InterpolationWitness((a, b), (u, w, v))
    return None


def completely_below_via_chains(M: MTAlgebra, a: int, b: int,
                                depth: Optional[int] = None) -> bool:
    """Independent oracle: search for a dyadic family of denominator 2^depth.

    A family indexed by k/2^depth is a path of 2^depth consecutive
    `rather below` steps (transitivity supplies the non-consecutive
    pairs), so the search squares the step relation depth times.
    """
    if depth is None:
        depth = 2 * max(1, len(M.opens))
    rows = list(M.open_prec_rows)
    for _ in range(depth):
        rows = [_row_compose(rows, r) for r in rows]
    for i, u in enumerate(M.opens):
        if a & ~u:
            continue
        for j in bits(rows[i]):
            if M.opens[j] & ~b == 0:
                return True
    return False


def _row_compose(rows: list[int], row: int) -> int:
    out = 0
    for w in bits(row):
        out |= rows[w]
    return out


class NTFlags(NamedTuple):
    nt1: bool
    nt2: bool
    nt3: bool
    nt3half: bool
    nt4: bool


def nt1_failure(M: MTAlgebra) -> Optional[tuple[int, int]]:
    """Least a !<= b such that no open contains b while missing a."""
    for a in range(M.carrier_size):
        for b in range(M.carrier_size):
            if a & ~b == 0:
                continue
            if not any(b & ~u == 0 and a & ~u for u in M.opens):
                return (a, b)
    return None


def nt2_failure(M: MTAlgebra) -> Optional[tuple[int, int]]:
    """Least disjoint nonzero pair with no disjoint opens meeting both."""
    for a in range(1, M.carrier_size):
        for b in range(1, M.carrier_size):
            if a & b:
                continue
            if not any(a & u and b & v and u & v == 0
                       for u in M.opens for v in M.opens):
                return (a, b)
    return None


def nt3_failure(M: MTAlgebra) -> Optional[tuple[int, int]]:
    """Least (a, c) with c closed disjoint from nonzero a admitting no
    disjoint opens with a ^ u nonzero and c <= v."""
    for a in range(1, M.carrier_size):
        for c in M.closed_elements:
            if a & c:
                continue
            if not any(a & u and c & ~v == 0 and u & v == 0
                       for u in M.opens for v in M.opens):
                return (a, c)
    return None


def nt3half_failure(M: MTAlgebra) -> Optional[tuple[int, int]]:
    """Like nt3 but the separator is an interpolable chain: some core
    pair (u, v) with a ^ u nonzero and c disjoint from v."""
    core = M.interpolation_core
    pairs = [(M.opens[i], M.opens[j])
             for i in range(len(M.opens)) for j in bits(core[i])]
    for a in range(1, M.carrier_size):
        for c in M.closed_elements:
            if a & c:
                continue
            if not any(a & u and c & v == 0 for u, v in pairs):
                return (a, c)
    return None


def nt4_failure(M: MTAlgebra) -> Optional[tuple[int, int]]:
    return t4_failure(M)


def nt_profile(M: MTAlgebra) -> NTFlags:
    """The five pointfree separation flags, each by exhaustive search."""
    return NTFlags(
        nt1=nt1_failure(M) is None,
        nt2=nt2_failure(M) is None,
        nt3=nt3_failure(M) is None,
        nt3half=nt3half_failure(M) is None,
        nt4=nt4_failure(M) is None,
    )


def product_mt(B0: FiniteLattice) -> MTAlgebra:
    """MT-algebra on B0 x B0 whose opens are the pairs (a, b) with a <= b.

    The induced interior is (a, b) |-> (a ^ b, b); the result is returned
    in normalized atoms+opens form and fully re-validated.
    """
    if not is_boolean(B0):
        raise NotBoolean("component lattice is not a boolean algebra")
    atoms0 = irreducibles(B0).atoms
    k = len(atoms0)

    def atom_mask(a: int) -> int:
        return mask_of(i for i, at in enumerate(atoms0) if B0.leq(at, a))

    opens = [atom_mask(a) | atom_mask(b) << k
             for a in range(B0.size) for b in range(B0.size) if B0.leq(a, b)]
    return build_mt(2 * k, opens)


def relativize(M: MTAlgebra, a: int) -> MTAlgebra:
    """The algebra of elements below a, with opens {u ^ a | u open}."""
    if a == 0:
        raise ZeroRelativization("cannot relativize to the zero element")
    sub = list(bits(a))
    pos = {atom: i for i, atom in enumerate(sub)}

    def compress(x: int) -> int:
        return mask_of(pos[i] for i in bits(x))

    return build_mt(len(sub), {compress(u & a) for u in M.opens})


class CompactnessProfile(NamedTuple):
    compact_elements: tuple[int, ...]
    compact: bool
    locally_compact: bool
    n_locally_compact: bool


def compact_element_set(M: MTAlgebra) -> tuple[int, ...]:
    """Elements k such that every open family covering k contains a
    finite subfamily covering k, scanned over all open families."""
    m = len(M.opens)
    if m > SUBSET_ENUM_LIMIT:
        # every open family here is a finite set already, hence its own
        # finite subcover; the scanning branch rechecks this at small size
        return tuple(range(M.carrier_size))
    joins = [0] * (1 << m)
    for fam in range(1, 1 << m):
        low = fam & -fam
        joins[fam] = joins[fam ^ low] | M.opens[low.bit_length() - 1]
    lacking = 0  # elements some cover of which has no finite subcover
    for fam in range(1 << m):
        reach = joins[fam]
        candidate = fam  # open families are finite sets, so fam qualifies
        if joins[candidate] & ~reach:
            for k in range(M.carrier_size):
                if k & ~reach == 0:
                    lacking |= 1 << k
    return tuple(k for k in range(M.carrier_size) if not lacking >> k & 1)


def compactly_below(M: MTAlgebra, a: int, b: int,
                    compacts: Optional[Iterable[int]] = None) -> bool:
    """Some compact element sits between a and b."""
    if compacts is None:
        compacts = compact_element_set(M)
    return any(a & ~k == 0 and k & ~b == 0 for k in compacts)


def compactness_profile(M: MTAlgebra) -> CompactnessProfile:
    """Compact elements plus the three compactness flags.

    locally compact: each open is the join of the opens compactly below
    it; N-locally compact: each nonzero element meets the interior of
    some compact element.
    """
    compacts = compact_element_set(M)
    compact = M.full in compacts
    lc = True
    for u in M.opens:
        acc = 0
        for v in M.opens:
            if compactly_below(M, v, u, compacts):
                acc |= v
        if acc != u:
            lc = False
            break
    nlc = all(any(a & M.interior[k] for k in compacts)
              for a in range(1, M.carrier_size))
    return CompactnessProfile(compacts, compact, lc, nlc)


def nlc_via_top_cover(M: MTAlgebra) -> bool:
    """Whether the top is the join of the opens compactly below it;
    an independent route to N-local compactness."""
    compacts = compact_element_set(M)
    acc = 0
    for u in M.opens:
        if compactly_below(M, u, M.full, compacts):
            acc |= u
    return acc == M.full


def is_compact_fip(M: MTAlgebra) -> bool:
    """Compactness via the finite-intersection property of closed families:
    every closed family whose finite subfamilies all have nonzero meet
    must itself have nonzero meet."""
    closeds = M.closed_elements
    c = len(closeds)
    if c > SUBSET_ENUM_LIMIT:
        return True
    meets = [M.full] * (1 << c)
    for fam in range(1, 1 << c):
        low = fam & -fam
        meets[fam] = meets[fam ^ low] & closeds[low.bit_length() - 1]
    return all(meets[fam] != 0
               for fam in range(1 << c) if _has_fip(meets, fam))


def _has_fip(meets: list[int], fam: int) -> bool:
    # meets shrink as families grow, so the family's own meet already
    # decides every finite-subfamily check
    return meets[fam] != 0


class StructureProfile(NamedTuple):
    atoms: tuple[int, ...]
    spatial: bool
    sober: bool
    min_nonzero_closed: tuple[int, ...]


def sober_failure(M: MTAlgebra) -> Optional[int]:
    """Least join-irreducible closed element that is no atom closure."""
    closeds = M.closed_elements
    have = set(closeds)
    for c in closeds:
        if c == 0:
            continue
        reducible = any(x | y == c and x != c and y != c
                        for x in closeds for y in closeds)
        if reducible:
            continue
        if not any(M.closure[x] == c for x in M.atoms):
            return c
    return None


def structure_profile(M: MTAlgebra) -> StructureProfile:
    """Atoms, spatiality (atom join-density), soberness, and the minimal
    nonzero closed elements."""
    atoms = M.atoms
    spatial = _join_density_failure(M, list(atoms)) is None
    t0 = t_class_density_failures(M)[0] is None
    sober = t0 and sober_failure(M) is None
    nonzero_closed = [c for c in M.closed_elements if c != 0]
    minimal = tuple(c for c in nonzero_closed
                    if not any(d & ~c == 0 and d != c for d in nonzero_closed))
    return StructureProfile(atoms, spatial, sober, minimal)


def atom_char(M: MTAlgebra, x: int) -> bool:
    """Whether x <= a iff x !<= not-a for every open a."""
    if x == 0:
        raise ValueError("atom characterization is undefined at zero")
    for a in M.opens:
        below = x & ~a == 0
        avoids = x & ~(M.full ^ a) != 0
        if below != avoids:
            return False
    return True


def mt_isomorphic(M: MTAlgebra, N: MTAlgebra) -> Optional[tuple[int, ...]]:
    """Least atom bijection carrying the opens of M onto those of N, or None.

    Atoms are fingerprinted by the sizes of the opens containing them,
    then matched by backtracking in ascending order.
    """
    if M.atom_count != N.atom_count or len(M.opens) != len(N.opens):
        return None

    def sizes(A: MTAlgebra) -> list[int]:
        return sorted(bin(u).count("1") for u in A.opens)

    if sizes(M) != sizes(N):
        return None

    def atom_sig(A: MTAlgebra, i: int) -> tuple:
        return tuple(sorted(bin(u).count("1") for u in A.opens if u >> i & 1))

    msig = [atom_sig(M, i) for i in range(M.atom_count)]
    nsig = [atom_sig(N, i) for i in range(N.atom_count)]
    if sorted(msig) != sorted(nsig):
        return None
    n = M.atom_count
    target_opens = set(N.opens)
    perm: list[int] = [-1] * n
    used = [False] * n

    def apply(u: int) -> int:
        out = 0
        for i in bits(u):
            out |= 1 << perm[i]
        return out

    def extend(i: int) -> bool:
        if i == n:
            return all(apply(u) in target_opens for u in M.opens)
        for j in range(n):
            if used[j] or msig[i] != nsig[j]:
                continue
            perm[i] = j
            used[j] = True
            if extend(i + 1):
                return True
            used[j] = False
        perm[i] = -1
        return False

    return tuple(perm) if extend(0) else None


@dataclass(frozen=True)
class AxiomProfile:
    """Full classification record of one MT-algebra; field order is the
    emission order of the machine format."""

    t0: bool
    t_half: bool
    t1: bool
    t2: bool
    t3: bool
    t3half: bool
    t4: bool
    nt1: bool
    nt2: bool
    nt3: bool
    nt3half: bool
    nt4: bool
    compact: bool
    locally_compact: bool
    n_locally_compact: bool
    spatial: bool
    sober: bool
    hausdorff_open_frame: bool
    subfit_open_frame: bool

    FIELDS = ("t0", "t_half", "t1", "t2", "t3", "t3half", "t4",
              "nt1", "nt2", "nt3", "nt3half", "nt4",
              "compact", "locally_compact", "n_locally_compact",
              "spatial", "sober", "hausdorff_open_frame", "subfit_open_frame")

    def items(self) -> list[tuple[str, bool]]:
        return [(name, getattr(self, name)) for name in self.FIELDS]
