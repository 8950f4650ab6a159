"""Command-line interface.

Exit codes: 0 success / hypothesis holds; 1 failed validation or refuted
hypothesis (a witness is printed); 2 malformed input. The element cap
defaults to 64 and is overridden by the MTKIT_MAX_ELEMENTS environment
variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from mtkit import corpus as corpus_mod
from mtkit import io as io_mod
from mtkit.frames import FrameView, classify, profile_witnesses
from mtkit.mt import AxiomProfile, MTAlgebra
from mtkit.order import FinitePoset, MAX_ELEMENTS_DEFAULT, OrderError, frame_coframe_flags, validate_lattice
from mtkit.raney import funayama_of_frame, funayama_of_raney, raney_flags, raney_of_mt, filt_se_extension


def _max_elements() -> int:
    raw = os.environ.get("MTKIT_MAX_ELEMENTS", "")
    return int(raw) if raw.isdigit() else MAX_ELEMENTS_DEFAULT


def _load(path: str):
    text = Path(path).read_text()
    return io_mod.parse_structure(text, source=path, max_elements=_max_elements())


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="mtkit", description=__doc__)
    sub = top.add_subparsers(dest="verb", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("validate", help="validate a poset/lattice or mt file")
    p.add_argument("file")
    p.add_argument("--as-frame", action="store_true",
                   help="additionally require a poset input to be a frame")
    add_format(p)

    p = sub.add_parser("classify", help="full axiom profile of an mt file")
    p.add_argument("file")
    add_format(p)

    p = sub.add_parser("envelope", help="Funayama envelope of a frame or mt file")
    p.add_argument("file")
    p.add_argument("--as-frame", action="store_true")
    add_format(p)

    p = sub.add_parser("raney", help="Raney extension of an mt file, or the "
                                     "strongly-exact-filter extension of a frame")
    p.add_argument("file")
    p.add_argument("--as-frame", action="store_true")
    add_format(p)

    p = sub.add_parser("enumerate", help="enumerate a corpus and print counts")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--topologies", type=int, metavar="N")
    group.add_argument("--posets", type=int, metavar="N")
    p.add_argument("--export", metavar="PATH")
    add_format(p)

    p = sub.add_parser("atlas", help="implication matrix over a corpus")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--topologies", type=int, metavar="N")
    group.add_argument("--frames", type=int, metavar="N",
                       help="frames from all posets on N elements")
    p.add_argument("--predicates", required=True,
                   help="comma-separated predicate names")
    add_format(p)

    p = sub.add_parser("search", help="search a corpus for a counterexample")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--topologies", type=int, metavar="N")
    group.add_argument("--frames", type=int, metavar="N")
    p.add_argument("--hypothesis", required=True, metavar="P=>Q")
    add_format(p)
    return top


def _cmd_validate(args) -> int:
    obj = _load(args.file)
    if isinstance(obj, MTAlgebra):
        print(f"valid mt-algebra: atoms={obj.atom_count} opens={len(obj.opens)}")
        return 0
    lat = validate_lattice(obj, max_elements=_max_elements())
    is_frame, is_coframe = frame_coframe_flags(lat)
    print(f"valid lattice: size={lat.size} "
          f"frame={str(is_frame).lower()} coframe={str(is_coframe).lower()}")
    if args.as_frame and not is_frame:
        print("witness: lattice is not a frame")
        return 1
    return 0


def _cmd_classify(args) -> int:
    obj = _load(args.file)
    if not isinstance(obj, MTAlgebra):
        print(f"{args.file}: classify expects an mt file", file=sys.stderr)
        return 2
    profile = classify(obj)
    witnesses = profile_witnesses(obj)
    for name, value in profile.items():
        print(f"{name}={str(value).lower()}")
    for name in AxiomProfile.FIELDS:
        if name in witnesses:
            if args.format == "machine":
                print(f"witness_{name}={witnesses[name]}")
            else:
                print(f"witness {name}: {witnesses[name]}")
    return 0


def _as_frame_view(obj, path: str) -> FrameView:
    lat = validate_lattice(obj, max_elements=_max_elements())
    if not frame_coframe_flags(lat)[0]:
        raise OrderError(f"{path}: lattice is not a frame")
    return FrameView(lat)


def _cmd_envelope(args) -> int:
    obj = _load(args.file)
    if isinstance(obj, MTAlgebra):
        result = funayama_of_raney(raney_of_mt(obj))
    else:
        if not args.as_frame:
            print(f"{args.file}: poset input to envelope requires --as-frame",
                  file=sys.stderr)
            return 2
        result = funayama_of_frame(_as_frame_view(obj, args.file))
    sys.stdout.write(io_mod.mt_text(result.envelope))
    env_opens = result.envelope.opens
    for l, open_id in enumerate(result.unit.map):
        print(f"open {l} -> {io_mod.atom_list(env_opens[open_id])}")
    return 0


def _cmd_raney(args) -> int:
    obj = _load(args.file)
    if isinstance(obj, MTAlgebra):
        ext = raney_of_mt(obj)
    else:
        if not args.as_frame:
            print(f"{args.file}: poset input to raney requires --as-frame",
                  file=sys.stderr)
            return 2
        ext = filt_se_extension(_as_frame_view(obj, args.file))
    flags = raney_flags(ext)
    print(f"valid raney extension: C={ext.C.size} L={ext.frame.size} "
          f"spatial={str(flags.spatial).lower()} sober={str(flags.sober).lower()}")
    return 0


def _cmd_enumerate(args) -> int:
    if args.topologies is not None:
        corp = corpus_mod.enumerate_topologies(args.topologies)
        texts = [io_mod.mt_text(M) for M in corp.items]
    else:
        corp = corpus_mod.enumerate_posets(args.posets)
        texts = [io_mod.poset_text(p) for p in corp.items]
    if args.format == "machine":
        print(f"kind={corp.kind} n={corp.n} count={len(corp)}")
    else:
        print(f"{corp.kind} n={corp.n}: {len(corp)}")
    if args.export:
        Path(args.export).write_text("".join(texts))
    return 0


def _corpus_for(args) -> corpus_mod.Corpus:
    if args.topologies is not None:
        return corpus_mod.enumerate_topologies(args.topologies)
    return corpus_mod.frames_from_posets(args.frames)


def _cmd_atlas(args) -> int:
    corp = _corpus_for(args)
    names = [p.strip() for p in args.predicates.split(",") if p.strip()]
    report = corpus_mod.atlas(corp, names)
    for line in report.machine_lines():
        print(line)
    if args.format == "text":
        print(report.human_matrix())
    return 0 if report.all_hold() else 1


def _cmd_search(args) -> int:
    if "=>" not in args.hypothesis:
        print(f"hypothesis must look like P=>Q, got {args.hypothesis!r}",
              file=sys.stderr)
        return 2
    p, q = (s.strip() for s in args.hypothesis.split("=>", 1))
    corp = _corpus_for(args)
    witness = corpus_mod.counterexample_search(corp, (p, q))
    if witness is None:
        print(f"{p}=>{q} holds")
        return 0
    print(f"{p}=>{q} refuted:{witness}")
    item = corp.items[witness]
    if isinstance(item, MTAlgebra):
        sys.stdout.write(io_mod.mt_text(item))
    elif isinstance(item, FrameView):
        sys.stdout.write(io_mod.lattice_text(item.lattice))
    return 1


_HANDLERS = {
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "envelope": _cmd_envelope,
    "raney": _cmd_raney,
    "enumerate": _cmd_enumerate,
    "atlas": _cmd_atlas,
    "search": _cmd_search,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.verb](args)
    except io_mod.ParseError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (FileNotFoundError, corpus_mod.UnknownPredicate) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except OrderError as exc:
        print(f"invalid: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
