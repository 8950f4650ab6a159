"""Finite posets and lattices over integer ids, with bitset subsets.

Elements are dense ids 0..size-1. A subset of elements is an int whose
bit i is set iff element i belongs to the subset; exhaustive subset
quantification iterates 0..2^size-1 and is only attempted while
size <= SUBSET_ENUM_LIMIT (larger instances use the finite-lattice
reductions, which the test suite regression-checks against the
exhaustive forms at small size).
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Union

MAX_ELEMENTS_DEFAULT = 64
SUBSET_ENUM_LIMIT = 20


class OrderError(Exception):
    """Base class for structural validation failures."""


class TooManyElements(OrderError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"structure has {size} elements, cap is {cap}")
        self.size = size
        self.cap = cap


class NotAPartialOrder(OrderError):
    pass


class NotALattice(OrderError):
    """Some pair of elements lacks a meet or a join."""

    def __init__(self, pair: Optional[tuple[int, int]], reason: str):
        super().__init__(reason)
        self.pair = pair


class NotDistributive(OrderError):
    """Witnessed failure of a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)."""

    def __init__(self, triple: tuple[int, int, int]):
        super().__init__(f"distributivity fails at triple {triple}")
        self.triple = triple


class NotAnEmbedding(OrderError):
    pass


class NotJoinPreserving(OrderError):
    def __init__(self, witness: int, reason: str):
        super().__init__(reason)
        self.witness = witness


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elems: Union[int, Iterable[int]]) -> int:
    """Normalize an element collection to a bitset."""
    if isinstance(elems, int):
        return elems
    out = 0
    for e in elems:
        out |= 1 << e
    return out


class FinitePoset:
    """Immutable finite poset: `up[i]` is the bitset of {j | i <= j}."""

    def __init__(self, size: int, up: tuple[int, ...], _validated: bool = False):
        self.size = size
        self.up = up
        if not _validated:
            self._validate()

    def _validate(self) -> None:
        n = self.size
        if len(self.up) != n:
            raise NotAPartialOrder("up table length differs from size")
        full = (1 << n) - 1
        for i, row in enumerate(self.up):
            if row & ~full:
                raise NotAPartialOrder(f"relation row {i} mentions ids >= {n}")
            if not row >> i & 1:
                raise NotAPartialOrder(f"relation not reflexive at {i}")
        for i in range(n):
            for j in bits(self.up[i]):
                if i != j and self.up[j] >> i & 1:
                    raise NotAPartialOrder(f"antisymmetry fails at ({i}, {j})")
                if self.up[j] & ~self.up[i]:
                    raise NotAPartialOrder(f"transitivity fails at ({i}, {j})")

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]],
                   close: bool = True) -> "FinitePoset":
        """Build from `i <= j` pairs; transitively closes unless told not to."""
        up = [1 << i for i in range(size)]
        for i, j in pairs:
            if not (0 <= i < size and 0 <= j < size):
                raise NotAPartialOrder(f"pair ({i}, {j}) out of range 0..{size - 1}")
            up[i] |= 1 << j
        if close:
            changed = True
            while changed:
                changed = False
                for i in range(size):
                    acc = up[i]
                    for j in bits(up[i]):
                        acc |= up[j]
                    if acc != up[i]:
                        up[i] = acc
                        changed = True
        return cls(size, tuple(up))

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    @cached_property
    def down(self) -> tuple[int, ...]:
        """down[j] = bitset of {i | i <= j}."""
        out = [0] * self.size
        for i in range(self.size):
            for j in bits(self.up[i]):
                out[j] |= 1 << i
        return tuple(out)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def pairs(self) -> Iterator[tuple[int, int]]:
        """All i <= j pairs, including reflexive ones."""
        for i in range(self.size):
            for j in bits(self.up[i]):
                yield i, j

    def covers(self, i: int, j: int) -> bool:
        """j covers i: i < j with nothing strictly between."""
        if i == j or not self.leq(i, j):
            return False
        between = self.up[i] & self.down[j] & ~(1 << i) & ~(1 << j)
        return between == 0

    def minimal_elements(self) -> int:
        out = 0
        for i in range(self.size):
            if self.down[i] == 1 << i:
                out |= 1 << i
        return out

    def maximal_elements(self) -> int:
        out = 0
        for i in range(self.size):
            if self.up[i] == 1 << i:
                out |= 1 << i
        return out

    def dual(self) -> "FinitePoset":
        return FinitePoset(self.size, self.down, _validated=True)

    def restrict(self, ids: list[int]) -> "FinitePoset":
        """Induced subposet on `ids`, renumbered 0..len(ids)-1."""
        pos = {e: k for k, e in enumerate(ids)}
        up = []
        for e in ids:
            row = 0
            for j in bits(self.up[e]):
                if j in pos:
                    row |= 1 << pos[j]
            up.append(row)
        return FinitePoset(len(ids), tuple(up), _validated=True)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FinitePoset)
                and self.size == other.size and self.up == other.up)

    def __hash__(self) -> int:
        return hash((self.size, self.up))

    def __repr__(self) -> str:
        rels = [(i, j) for i, j in self.pairs() if i != j]
        return f"FinitePoset(size={self.size}, lt={rels})"


class FiniteLattice:
    """Finite lattice: a poset plus meet/join tables and extrema.

    Arbitrary meets and joins are folds of the binary tables; finite
    completeness makes separate tables unnecessary.
    """

    def __init__(self, poset: FinitePoset, meet: tuple[tuple[int, ...], ...],
                 join: tuple[tuple[int, ...], ...], bottom: int, top: int):
        self.poset = poset
        self.meet = meet
        self.join = join
        self.bottom = bottom
        self.top = top

    @property
    def size(self) -> int:
        return self.poset.size

    def leq(self, i: int, j: int) -> bool:
        return self.poset.leq(i, j)

    @property
    def up(self) -> tuple[int, ...]:
        return self.poset.up

    @property
    def down(self) -> tuple[int, ...]:
        return self.poset.down

    def meet_all(self, elems: Union[int, Iterable[int]]) -> int:
        """Meet of a subset; the empty meet is the top."""
        acc = self.top
        row = self.meet
        for e in bits(mask_of(elems)):
            acc = row[acc][e]
        return acc

    def join_all(self, elems: Union[int, Iterable[int]]) -> int:
        """Join of a subset; the empty join is the bottom."""
        acc = self.bottom
        row = self.join
        for e in bits(mask_of(elems)):
            acc = row[acc][e]
        return acc

    def __repr__(self) -> str:
        return f"FiniteLattice(size={self.size})"


class Irreducibles(NamedTuple):
    join_irreducibles: tuple[int, ...]
    meet_primes: tuple[int, ...]
    atoms: tuple[int, ...]
    coatoms: tuple[int, ...]


def validate_lattice(p: FinitePoset, max_elements: int = MAX_ELEMENTS_DEFAULT) -> FiniteLattice:
    """Compute meet/join tables, or raise NotALattice naming a bad pair."""
    n = p.size
    if n > max_elements:
        raise TooManyElements(n, max_elements)
    if n == 0:
        raise NotALattice(None, "empty poset has no top or bottom")
    down = p.down
    up = p.up
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            lb = down[i] & down[j]
            glb = -1
            for m in bits(lb):
                if lb & ~down[m] == 0:
                    glb = m
                    break
            if glb < 0:
                raise NotALattice((i, j), f"pair ({i}, {j}) has no meet")
            ub = up[i] & up[j]
            lub = -1
            for m in bits(ub):
                if ub & ~up[m] == 0:
                    lub = m
                    break
            if lub < 0:
                raise NotALattice((i, j), f"pair ({i}, {j}) has no join")
            meet[i][j] = meet[j][i] = glb
            join[i][j] = join[j][i] = lub
    lat = FiniteLattice(p, tuple(map(tuple, meet)), tuple(map(tuple, join)), 0, 0)
    lat.bottom = lat.meet_all(p.full_mask)
    lat.top = lat.join_all(p.full_mask)
    return lat


def frame_coframe_flags(L: FiniteLattice) -> tuple[bool, bool]:
    """(is_frame, is_coframe) via the binary distributive laws.

    At finite size the subset-quantified laws reduce to the binary ones;
    frame_flags_exhaustive is the unreduced form used to regression-test
    the reduction.
    """
    return (_distributivity_witness(L) is None,
            _codistributivity_witness(L) is None)


def _distributivity_witness(L: FiniteLattice) -> Optional[tuple[int, int, int]]:
    n, meet, join = L.size, L.meet, L.join
    for a in range(n):
        ma = meet[a]
        for b in range(n):
            for c in range(b, n):
                if ma[join[b][c]] != join[ma[b]][ma[c]]:
                    return (a, b, c)
    return None


def _codistributivity_witness(L: FiniteLattice) -> Optional[tuple[int, int, int]]:
    n, meet, join = L.size, L.meet, L.join
    for a in range(n):
        ja = join[a]
        for b in range(n):
            for c in range(b, n):
                if ja[meet[b][c]] != meet[ja[b]][ja[c]]:
                    return (a, b, c)
    return None


def frame_flags_exhaustive(L: FiniteLattice) -> tuple[bool, bool]:
    """Subset-quantified distributivity, feasible only at small size."""
    if L.size > SUBSET_ENUM_LIMIT:
        raise TooManyElements(L.size, SUBSET_ENUM_LIMIT)
    joins = subset_fold_table(L.join, list(range(L.size)), L.bottom)
    meets = subset_fold_table(L.meet, list(range(L.size)), L.top)
    is_frame = is_coframe = True
    for a in range(L.size):
        for mask in range(1 << L.size):
            if L.meet[a][joins[mask]] != L.join_all(
                    mask_of(L.meet[a][s] for s in bits(mask))):
                is_frame = False
                break
        for mask in range(1 << L.size):
            if L.join[a][meets[mask]] != L.meet_all(
                    mask_of(L.join[a][s] for s in bits(mask))):
                is_coframe = False
                break
    return is_frame, is_coframe


def join_irreducibles(L: FiniteLattice) -> tuple[int, ...]:
    """Nonzero c such that c = a v b forces c in {a, b}; in a finite
    lattice that is exactly c exceeding the join of everything strictly
    below it."""
    out = []
    for c in range(L.size):
        if c != L.bottom and L.join_all(L.down[c] & ~(1 << c)) != c:
            out.append(c)
    return tuple(out)


def meet_primes(L: FiniteLattice) -> tuple[int, ...]:
    """Non-top m such that a ^ b <= m forces a <= m or b <= m."""
    n = L.size
    out = []
    for m in range(n):
        if m == L.top:
            continue
        dm = L.down[m]
        if all(not dm >> L.meet[a][b] & 1 or dm >> a & 1 or dm >> b & 1
               for a in range(n) for b in range(a, n)):
            out.append(m)
    return tuple(out)


def irreducibles(L: FiniteLattice) -> Irreducibles:
    """Join-irreducibles, meet-primes, atoms, and coatoms."""
    at = tuple(c for c in range(L.size) if L.poset.covers(L.bottom, c))
    co = tuple(m for m in range(L.size) if L.poset.covers(m, L.top))
    return Irreducibles(join_irreducibles(L), meet_primes(L), at, co)


def density_flags(L: FiniteLattice, S: Union[int, Iterable[int]]) -> tuple[bool, bool]:
    """(join_dense, meet_dense) for the element set S."""
    smask = mask_of(S)
    join_dense = all(L.join_all(smask & L.down[a]) == a for a in range(L.size))
    meet_dense = all(L.meet_all(smask & L.up[a]) == a for a in range(L.size))
    return join_dense, meet_dense


def is_exact_join(C: FiniteLattice, S: Union[int, Iterable[int]]) -> bool:
    """Whether a ^ vS = v{a ^ s | s in S} for every a."""
    smask = mask_of(S)
    j = C.join_all(smask)
    for a in range(C.size):
        lhs = C.meet[a][j]
        rhs = C.join_all(mask_of(C.meet[a][s] for s in bits(smask)))
        if lhs != rhs:
            return False
    return True


def subset_fold_table(table: tuple[tuple[int, ...], ...], elems: list[int],
                      unit: int) -> list[int]:
    """fold[mask] = table-fold of {elems[i] | bit i of mask}, fold[0] = unit."""
    out = [unit] * (1 << len(elems))
    for mask in range(1, 1 << len(elems)):
        low = mask & -mask
        out[mask] = table[out[mask ^ low]][elems[low.bit_length() - 1]]
    return out


def completely_join_primes(C: FiniteLattice) -> tuple[int, ...]:
    """Nonzero p with p <= vS implying p <= s for some s in S, all S.

    Quantifies every subset while the size permits; beyond that a finite
    lattice reduces the property to binary join-primality (regression-
    tested by the suite).
    """
    if C.size <= SUBSET_ENUM_LIMIT:
        return completely_join_primes_exhaustive(C)
    out = []
    for p in range(C.size):
        if p == C.bottom:
            continue
        if all(not C.leq(p, C.join[a][b]) or C.leq(p, a) or C.leq(p, b)
               for a in range(C.size) for b in range(C.size)):
            out.append(p)
    return tuple(out)


def completely_join_primes_exhaustive(C: FiniteLattice) -> tuple[int, ...]:
    n = C.size
    if n > SUBSET_ENUM_LIMIT:
        raise TooManyElements(n, SUBSET_ENUM_LIMIT)
    elems = list(range(n))
    down = C.down
    bad = 1 << C.bottom
    joins = [C.bottom] * (1 << n)
    above = [0] * (1 << n)  # above[mask] = {p | p <= s for some s in mask}
    for mask in range(1, 1 << n):
        low = mask & -mask
        s = elems[low.bit_length() - 1]
        joins[mask] = C.join[joins[mask ^ low]][s]
        above[mask] = above[mask ^ low] | down[s]
        bad |= down[joins[mask]] & ~above[mask]
    return tuple(p for p in range(n) if not bad >> p & 1)


class LatticeEmbedding:
    """Injective order-reflecting map into a lattice.

    The source is the embedded order; when the source is itself a lattice
    its underlying poset is used (MacNeille completion also embeds bare
    posets).
    """

    def __init__(self, source: Union[FinitePoset, FiniteLattice],
                 target: FiniteLattice, map: tuple[int, ...]):
        self.source = source
        self.target = target
        self.map = map
        src = self.source_order
        if len(map) != src.size:
            raise NotAnEmbedding("map length differs from source size")
        if len(set(map)) != len(map):
            raise NotAnEmbedding("map is not injective")
        for a in range(src.size):
            for b in range(src.size):
                if src.leq(a, b) != target.leq(map[a], map[b]):
                    raise NotAnEmbedding(f"order not reflected at ({a}, {b})")

    @property
    def source_order(self) -> FinitePoset:
        return self.source.poset if isinstance(self.source, FiniteLattice) else self.source

    @cached_property
    def image_mask(self) -> int:
        return mask_of(self.map)

    def __repr__(self) -> str:
        return f"LatticeEmbedding({self.source_order.size} -> {self.target.size})"


def right_adjoint(e: LatticeEmbedding) -> tuple[int, ...]:
    """g with e(a) <= b iff a <= g(b); g(b) is the largest a with e(a) <= b.

    Existence of all those largest elements is exactly preservation of all
    joins by e, so a missing one raises NotJoinPreserving.
    """
    src = e.source_order
    tgt = e.target
    g = []
    for b in range(tgt.size):
        below = [a for a in range(src.size) if tgt.leq(e.map[a], b)]
        best = -1
        for a in below:
            if all(src.leq(x, a) for x in below):
                best = a
                break
        if best < 0:
            raise NotJoinPreserving(
                b, f"no largest source element maps below {b}; embedding does not preserve joins")
        g.append(best)
    for a in range(src.size):
        for b in range(tgt.size):
            if tgt.leq(e.map[a], b) != src.leq(a, g[b]):
                raise NotJoinPreserving(b, f"adjunction fails at ({a}, {b})")
    return tuple(g)


def downset_lattice(p: FinitePoset) -> FiniteLattice:
    """Lattice of all downward-closed subsets ordered by inclusion."""
    if p.size > SUBSET_ENUM_LIMIT:
        raise TooManyElements(p.size, SUBSET_ENUM_LIMIT)
    down = p.down
    masks = [S for S in range(1 << p.size)
             if all(down[i] & ~S == 0 for i in bits(S))]
    return lattice_from_masks(masks)


def lattice_from_masks(masks: list[int]) -> FiniteLattice:
    """Lattice on a family of bitset-valued elements ordered by inclusion.

    When the family is closed under intersection, meets are literal
    intersections and joins are least containing members, which avoids
    the cubic generic table search; otherwise the generic validation
    runs. The fast tables coincide with the generic ones (a pinned
    regression of the suite).
    """
    masks = sorted(masks)
    n = len(masks)
    idx = {m: k for k, m in enumerate(masks)}
    up = tuple(mask_of(idx[t] for t in masks if s & ~t == 0) for s in masks)
    poset = FinitePoset(n, up, _validated=True)
    top_mask = 0
    for m in masks:
        top_mask |= m
    inter_closed = top_mask in idx and all(a & b in idx for a in masks for b in masks)
    if not inter_closed or n == 0:
        lat = validate_lattice(poset, max_elements=max(MAX_ELEMENTS_DEFAULT, n))
        lat.element_masks = tuple(masks)  # type: ignore[attr-defined]
        return lat
    union_closed = all(a | b in idx for a in masks for b in masks)
    meet = tuple(tuple(idx[masks[i] & masks[j]] for j in range(n)) for i in range(n))
    if union_closed:
        join = tuple(tuple(idx[masks[i] | masks[j]] for j in range(n)) for i in range(n))
    else:
        join_rows = []
        for i in range(n):
            row = []
            for j in range(n):
                u = masks[i] | masks[j]
                acc = top_mask
                for t in masks:
                    if u & ~t == 0:
                        acc &= t
                row.append(idx[acc])  # intersection closure keeps it a member
            join_rows.append(tuple(row))
        join = tuple(join_rows)
    lat = FiniteLattice(poset, meet, join, idx[masks[0]], n - 1)
    lat.bottom = lat.meet_all(poset.full_mask)
    lat.top = lat.join_all(poset.full_mask)
    lat.element_masks = tuple(masks)  # type: ignore[attr-defined]
    return lat


def macneille_completion(p: FinitePoset) -> tuple[FiniteLattice, LatticeEmbedding]:
    """Cut completion of a poset with the canonical dense embedding.

    The lower sets of cuts are exactly the intersections of principal
    downsets (the empty intersection contributing the full carrier), so
    the completion is computed as an intersection closure.
    """
    down = p.down
    cuts = {p.full_mask}
    queue = list(down)
    while queue:
        a = queue.pop()
        if a in cuts:
            continue
        fresh = [a]
        for b in cuts:
            c = a & b
            if c not in cuts:
                fresh.append(c)
        cuts.add(a)
        queue.extend(x for x in fresh if x != a)
    lat = lattice_from_masks(sorted(cuts))
    masks = lat.element_masks  # type: ignore[attr-defined]
    emb_map = tuple(masks.index(down[x]) for x in range(p.size))
    return lat, LatticeEmbedding(p, lat, emb_map)


def powerset_lattice(k: int) -> FiniteLattice:
    """Boolean lattice of all subsets of a k-set; element ids are the masks."""
    n = 1 << k
    up = tuple(mask_of(j for j in range(n) if i & ~j == 0) for i in range(n))
    poset = FinitePoset(n, up, _validated=True)
    meet = tuple(tuple(i & j for j in range(n)) for i in range(n))
    join = tuple(tuple(i | j for j in range(n)) for i in range(n))
    lat = FiniteLattice(poset, meet, join, 0, n - 1)
    lat.element_masks = tuple(range(n))  # type: ignore[attr-defined]
    return lat


def boolean_envelope(L: FiniteLattice) -> tuple[FiniteLattice, LatticeEmbedding]:
    """Powerset of the join-irreducibles with a |-> {j in J(L) | j <= a}.

    Requires distributivity; the embedding then preserves finite meets and
    all joins, which is what the envelope is for.
    """
    witness = _distributivity_witness(L)
    if witness is not None:
        raise NotDistributive(witness)
    ji = irreducibles(L).join_irreducibles
    env = powerset_lattice(len(ji))
    emb_map = tuple(mask_of(k for k, j in enumerate(ji) if L.leq(j, a))
                    for a in range(L.size))
    return env, LatticeEmbedding(L, env, emb_map)


def is_boolean(L: FiniteLattice) -> bool:
    """Distributive and complemented."""
    if _distributivity_witness(L) is not None:
        return False
    return all(any(L.meet[a][b] == L.bottom and L.join[a][b] == L.top
                   for b in range(L.size))
               for a in range(L.size))


def complement_table(L: FiniteLattice) -> tuple[int, ...]:
    """Complement of each element; requires a boolean lattice."""
    out = []
    for a in range(L.size):
        c = next((b for b in range(L.size)
                  if L.meet[a][b] == L.bottom and L.join[a][b] == L.top), None)
        if c is None:
            raise NotALattice((a, a), f"element {a} has no complement")
        out.append(c)
    return tuple(out)


def order_isomorphism(p: FinitePoset, q: FinitePoset) -> Optional[tuple[int, ...]]:
    """An order bijection p -> q, lexicographically least, or None."""
    if p.size != q.size:
        return None

    def signatures(r: FinitePoset) -> list[tuple]:
        sig = [(bin(r.down[i]).count("1"), bin(r.up[i]).count("1"))
               for i in range(r.size)]
        for _ in range(2):
            sig = [(sig[i],
                    tuple(sorted(sig[j] for j in bits(r.down[i]))),
                    tuple(sorted(sig[j] for j in bits(r.up[i]))))
                   for i in range(r.size)]
        return sig

    ps, qs = signatures(p), signatures(q)
    if sorted(ps) != sorted(qs):
        return None
    n = p.size
    image: list[int] = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j] or ps[i] != qs[j]:
                continue
            ok = True
            for k in range(i):
                if p.leq(i, k) != q.leq(j, image[k]) or p.leq(k, i) != q.leq(image[k], j):
                    ok = False
                    break
            if ok:
                image[i] = j
                used[j] = True
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    return tuple(image) if extend(0) else None


def lattices_isomorphic(L: FiniteLattice, K: FiniteLattice) -> bool:
    """Order isomorphism decides lattice isomorphism for finite lattices."""
    return order_isomorphism(L.poset, K.poset) is not None
