"""Exhaustive enumeration of small structures and the implication atlas.

Topologies are enumerated twice on purpose: the primary generator scans
set families for closure under union and intersection, the second walks
preorders and takes their up-set families; the counts must agree, which
the suite pins for n = 0..4. Posets are enumerated by assigning one of
{incomparable, below, above} to each unordered pair and filtering for
transitivity, so antisymmetry is structural.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Iterable, Optional, Sequence, Union

from mtkit.order import FinitePoset, bits, downset_lattice, mask_of
from mtkit.mt import AxiomProfile, MTAlgebra, build_mt
from mtkit.frames import FrameView, classify, is_hausdorff_frame, is_spatial_frame, is_subfit
from mtkit.raney import frame_compact

TOPOLOGY_N_CAP = 4
POSET_N_CAP = 5


@dataclass
class Corpus:
    kind: str  # topologies | posets | frames
    n: int
    items: list
    canonical_ids: Optional[tuple[int, ...]] = None  # dedup classes, by least id

    def __len__(self) -> int:
        return len(self.items)


def enumerate_topologies(n: int, dedup: bool = False) -> Corpus:
    """All labeled topologies on n points, each wrapped as an MT-algebra.

    The family scan is double-exponential in n; past the CLI cap the
    preorder route supplies the same corpus after a warning.
    """
    if n <= TOPOLOGY_N_CAP:
        families = _closure_families(n)
    else:
        warnings.warn(f"enumerating topologies on {n} points via preorders; "
                      "this grows quickly", RuntimeWarning, stacklevel=2)
        families = topology_families_via_preorders(n)
    items = [build_mt(n, fam, max_elements=max(64, 1 << n)) for fam in families]
    corpus = Corpus("topologies", n, items)
    if dedup:
        corpus.canonical_ids = _dedup_topologies(items)
    return corpus


def _closure_families(n: int) -> list[tuple[int, ...]]:
    """Families of subsets of an n-set closed under union and intersection
    and containing the extremes, by scanning every candidate family."""
    full = (1 << n) - 1
    middles = list(range(1, full))
    out = []
    for pick in range(1 << len(middles)):
        fam = [0] + [middles[i] for i in bits(pick)] + ([full] if full else [])
        have = mask_of(fam)
        ok = True
        for u in fam:
            for v in fam:
                if not have >> (u | v) & 1 or not have >> (u & v) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(dict.fromkeys(fam)))
    return out


def enumerate_preorders(n: int) -> list[tuple[int, ...]]:
    """All reflexive transitive relations on n points, as up-row bitsets."""
    out = []
    offdiag = [(i, j) for i in range(n) for j in range(n) if i != j]
    for pick in range(1 << len(offdiag)):
        rows = [1 << i for i in range(n)]
        for k in bits(pick):
            i, j = offdiag[k]
            rows[i] |= 1 << j
        if all(rows[j] & ~rows[i] == 0
               for i in range(n) for j in bits(rows[i])):
            out.append(tuple(rows))
    return out


def topology_families_via_preorders(n: int) -> list[tuple[int, ...]]:
    """Second generator: the up-closed sets of each preorder on n points."""
    out = []
    for rows in enumerate_preorders(n):
        opens = tuple(S for S in range(1 << n)
                      if all(rows[i] & ~S == 0 for i in bits(S)))
        out.append(opens)
    return out


def enumerate_posets(n: int) -> Corpus:
    """All labeled posets on n elements."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    items = []
    for states in product((0, 1, 2), repeat=len(pairs)):
        rows = [1 << i for i in range(n)]
        for (i, j), st in zip(pairs, states):
            if st == 1:
                rows[i] |= 1 << j
            elif st == 2:
                rows[j] |= 1 << i
        if all(rows[j] & ~rows[i] == 0
               for i in range(n) for j in bits(rows[i])):
            items.append(FinitePoset(n, tuple(rows), _validated=True))
    return Corpus("posets", n, items)


def frames_from_posets(n: int) -> Corpus:
    """The downset-lattice frame of every labeled poset on n elements."""
    posets = enumerate_posets(n)
    items = [FrameView(downset_lattice(p)) for p in posets.items]
    return Corpus("frames", n, items)


def _dedup_topologies(items: Sequence[MTAlgebra]) -> tuple[int, ...]:
    seen: dict[tuple[int, ...], int] = {}
    out = []
    for i, M in enumerate(items):
        key = canonical_topology_key(M)
        out.append(seen.setdefault(key, i))
    return tuple(out)


def canonical_topology_key(M: MTAlgebra) -> tuple[int, ...]:
    """Least relabeling of the open family over atom permutations."""
    best = None
    for perm in permutations(range(M.atom_count)):
        mapped = tuple(sorted(mask_of(perm[i] for i in bits(u)) for u in M.opens))
        if best is None or mapped < best:
            best = mapped
    return best if best is not None else (0,)


def topology_predicates() -> dict[str, Callable[[AxiomProfile], bool]]:
    return {name: (lambda prof, _n=name: getattr(prof, _n))
            for name in AxiomProfile.FIELDS}


def frame_predicates() -> dict[str, Callable[[FrameView], bool]]:
    return {
        "subfit": is_subfit,
        "hausdorff": is_hausdorff_frame,
        "spatial": is_spatial_frame,
        "compact": frame_compact,
    }


class UnknownPredicate(ValueError):
    pass


def _predicate_values(corpus: Corpus, names: Sequence[str]) -> dict[str, list[bool]]:
    if corpus.kind == "topologies":
        registry = topology_predicates()
        unknown = [p for p in names if p not in registry]
        if unknown:
            raise UnknownPredicate(f"unknown predicates for {corpus.kind}: {unknown}")
        profiles = [classify(M) for M in corpus.items]
        return {p: [registry[p](prof) for prof in profiles] for p in names}
    if corpus.kind == "frames":
        registry = frame_predicates()
        unknown = [p for p in names if p not in registry]
        if unknown:
            raise UnknownPredicate(f"unknown predicates for {corpus.kind}: {unknown}")
        return {p: [registry[p](fv) for fv in corpus.items] for p in names}
    raise UnknownPredicate(f"no predicates defined for corpus kind {corpus.kind!r}")


@dataclass
class AtlasReport:
    """Implication matrix over a predicate set; a None cell holds, an int
    cell is the least refuting item id."""

    kind: str
    n: int
    predicates: tuple[str, ...]
    cells: dict[tuple[str, str], Optional[int]]

    def machine_lines(self) -> list[str]:
        out = []
        for p in self.predicates:
            for q in self.predicates:
                if p == q:
                    continue
                cell = self.cells[(p, q)]
                out.append(f"{p}=>{q} " +
                           ("holds" if cell is None else f"refuted:{cell}"))
        return out

    def human_matrix(self) -> str:
        width = max(len(p) for p in self.predicates) + 1
        head = " " * width + " ".join(f"{q:>{width}}" for q in self.predicates)
        rows = [head]
        for p in self.predicates:
            cells = []
            for q in self.predicates:
                if p == q:
                    cells.append(f"{'.':>{width}}")
                else:
                    cell = self.cells[(p, q)]
                    cells.append(f"{'+' if cell is None else '#' + str(cell):>{width}}")
            rows.append(f"{p:<{width}}" + " ".join(cells))
        return "\n".join(rows)

    def all_hold(self) -> bool:
        return all(v is None for v in self.cells.values())


def atlas(corpus: Corpus, predicates: Sequence[str]) -> AtlasReport:
    """Full implication matrix of the predicate set over the corpus."""
    names = tuple(predicates)
    values = _predicate_values(corpus, names)
    cells: dict[tuple[str, str], Optional[int]] = {}
    for p in names:
        for q in names:
            if p == q:
                continue
            cell = None
            for i in range(len(corpus.items)):
                if values[p][i] and not values[q][i]:
                    cell = i
                    break
            cells[(p, q)] = cell
    return AtlasReport(corpus.kind, corpus.n, names, cells)


def counterexample_search(corpus: Corpus,
                          hypothesis: tuple[str, str]) -> Optional[int]:
    """Least item id violating P => Q, or None."""
    p, q = hypothesis
    values = _predicate_values(corpus, (p, q))
    for i in range(len(corpus.items)):
        if values[p][i] and not values[q][i]:
            return i
    return None
