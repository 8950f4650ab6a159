"""Text formats for posets/lattices and MT-algebras.

Poset files:  line 1 `poset <size>`, then `i <= j` pairs (transitively
closed on ingestion); `#` starts a comment. MT files: line 1
`mt <atom_count>`, then one open per line as a sorted atom-index list in
brackets, e.g. `[0 1]`, with `[]` and the full set required.
"""

from __future__ import annotations

import re
from typing import Union

from mtkit.order import MAX_ELEMENTS_DEFAULT, FiniteLattice, FinitePoset, bits
from mtkit.mt import MTAlgebra, build_mt


class ParseError(Exception):
    def __init__(self, source: str, line_no: int, message: str):
        super().__init__(f"{source}:{line_no}: {message}")
        self.source = source
        self.line_no = line_no
        self.reason = message


_PAIR_RE = re.compile(r"^(\d+)\s*<=\s*(\d+)$")
_OPEN_RE = re.compile(r"^\[([\d\s]*)\]$")


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def parse_structures(text: str, source: str = "<input>",
                     max_elements: int = MAX_ELEMENTS_DEFAULT
                     ) -> list[Union[FinitePoset, MTAlgebra]]:
    """Parse a concatenation of poset/mt blocks, each opened by its header."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError(source, 1, "empty input; expected a `poset` or `mt` header")
    blocks: list[tuple[int, str, int, list[tuple[int, str]]]] = []
    for no, line in lines:
        head = line.split()
        if head[0] in ("poset", "mt"):
            if len(head) != 2 or not head[1].isdigit():
                raise ParseError(source, no,
                                 f"expected `{head[0]} <size>`, got {line!r}")
            blocks.append((no, head[0], int(head[1]), []))
        elif not blocks:
            raise ParseError(source, no,
                             "expected a `poset <size>` or `mt <atom_count>` header")
        else:
            blocks[-1][3].append((no, line))
    out: list[Union[FinitePoset, MTAlgebra]] = []
    for _no, kind, size, body in blocks:
        if kind == "poset":
            out.append(_parse_poset_block(source, size, body))
        else:
            out.append(_parse_mt_block(source, size, body, max_elements))
    return out


def parse_structure(text: str, source: str = "<input>",
                    max_elements: int = MAX_ELEMENTS_DEFAULT
                    ) -> Union[FinitePoset, MTAlgebra]:
    items = parse_structures(text, source, max_elements)
    if len(items) != 1:
        raise ParseError(source, 1, f"expected one structure, found {len(items)}")
    return items[0]


def _parse_poset_block(source: str, size: int,
                       body: list[tuple[int, str]]) -> FinitePoset:
    pairs = []
    for no, line in body:
        m = _PAIR_RE.match(line)
        if not m:
            raise ParseError(source, no, f"expected `i <= j` pair, got {line!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if i >= size or j >= size:
            raise ParseError(source, no,
                             f"pair ({i}, {j}) out of range for size {size}")
        pairs.append((i, j))
    return FinitePoset.from_pairs(size, pairs)


def _parse_mt_block(source: str, atom_count: int, body: list[tuple[int, str]],
                    max_elements: int) -> MTAlgebra:
    opens = []
    for no, line in body:
        m = _OPEN_RE.match(line)
        if not m:
            raise ParseError(source, no,
                             f"expected `[i j ...]` open set, got {line!r}")
        mask = 0
        for tok in m.group(1).split():
            atom = int(tok)
            if atom >= atom_count:
                raise ParseError(source, no,
                                 f"atom {atom} out of range for {atom_count} atoms")
            mask |= 1 << atom
        opens.append(mask)
    try:
        return build_mt(atom_count, opens, max_elements=max_elements)
    except Exception as exc:
        raise ParseError(source, body[0][0] if body else 1, str(exc)) from exc


def atom_list(mask: int) -> str:
    return "[" + " ".join(str(i) for i in bits(mask)) + "]"


def mt_text(M: MTAlgebra) -> str:
    lines = [f"mt {M.atom_count}"]
    lines.extend(atom_list(u) for u in M.opens)
    return "\n".join(lines) + "\n"


def poset_text(p: FinitePoset) -> str:
    """Emit the cover pairs; ingestion restores the full relation."""
    lines = [f"poset {p.size}"]
    for i in range(p.size):
        for j in bits(p.up[i]):
            if p.covers(i, j):
                lines.append(f"{i} <= {j}")
    return "\n".join(lines) + "\n"


def lattice_text(L: FiniteLattice) -> str:
    return poset_text(L.poset)
