"""Command-line front end.

Every verb is a thin wrapper over library calls; complexes travel as
canonical JSON on files or stdin (``-``).  Exit codes: 0 success, 1 failed
check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .ogposet import OgPoset, ClosedSubset, InvalidStructure, bits
from .molecule import (
    is_molecule, is_atom, has_spherical_boundary, is_regular_complex,
    is_totally_loop_free,
)
from . import construct
from . import shapes
from . import topology
from .corpus import gen_corpus


def _read_complex(path: str) -> OgPoset:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return OgPoset.from_json(text)


def _subset(p: OgPoset, selector: str | None) -> ClosedSubset:
    if not selector:
        return p.whole()
    return p.closure(int(s) for s in selector.split(","))


def export_dot(p: OgPoset) -> str:
    """Hasse diagram in DOT, one rank per dimension, edges labelled by sign."""
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for d in range(p.dim + 1):
        members = " ".join(f"e{i};" for i in p.elements_of_dim(d))
        lines.append(f"  {{ rank=same; {members} }}")
    for i in range(p.size):
        lines.append(f'  e{i} [label="{i}:{p.dims[i]}"];')
    for i in range(p.size):
        for j in sorted(bits(p.faces_minus[i])):
            lines.append(f'  e{j} -> e{i} [label="-"];')
        for j in sorted(bits(p.faces_plus[i])):
            lines.append(f'  e{j} -> e{i} [label="+"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit(obj, as_json: bool) -> None:
    if as_json:
        print(json.dumps(obj, separators=(",", ":")))
    else:
        print(json.dumps(obj, indent=2))


def _emit_complex(p: OgPoset) -> None:
    print(p.to_json())


def _cmd_shape(args) -> int:
    name = args.family
    k = args.params
    if name == "globe":
        _emit_complex(shapes.globe(k[0]))
    elif name == "simplex":
        _emit_complex(shapes.simplex(k[0]))
    elif name == "cube":
        _emit_complex(shapes.cube(k[0]))
    elif name == "phi":
        _emit_complex(shapes.phi(k[0]).whole)
    elif name == "C":
        _emit_complex(shapes.compositor_c(k[0], k[1]).whole)
    elif name == "E":
        _emit_complex(shapes.extr(k[0], k[1]).whole)
    elif name == "Etilde":
        _emit_complex(shapes.extrtil(k[0], k[1]).whole)
    else:
        raise SystemExit(2)
    return 0


def _cmd_map(args) -> int:
    name = args.name
    n = args.params[0]
    if name == "a":
        m = shapes.folding_a(n)
    elif name == "c":
        m = shapes.folding_c(n)
    elif name == "sprec":
        m = shapes.sprec(n)
    elif name == "gamma":
        _emit({"assignment": list(shapes.last_vertex(n))}, args.json)
        return 0
    else:
        raise SystemExit(2)
    _emit({"source": m.source.to_json_obj(),
           "target": m.target.to_json_obj(),
           "assignment": list(m.assignment)}, args.json)
    return 0


def _cmd_check(args) -> int:
    try:
        p = _read_complex(args.file)
    except InvalidStructure as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    sub = _subset(p, args.subset)
    kind = args.predicate
    cert = is_molecule(sub)
    if kind == "molecule":
        ok = cert is not None
        payload = cert.to_json_obj() if cert else None
    elif kind == "atom":
        ok = is_atom(sub)
        payload = None
    elif kind == "spherical":
        ok = cert is not None and has_spherical_boundary(cert)
        payload = cert.to_json_obj() if cert else None
    elif kind == "regular":
        ok = is_regular_complex(p)
        payload = None
    elif kind == "loopfree":
        ok = is_totally_loop_free(p)
        payload = None
    else:
        raise SystemExit(2)
    _emit({"check": kind, "ok": ok, "certificate": payload}, args.json)
    return 0 if ok else 1


def _cmd_op(args) -> int:
    name = args.operation
    files = args.args
    maps = {}
    if name == "paste":
        res = construct.paste(_read_complex(files[0]),
                              _read_complex(files[1]), int(files[2]))
        built = res.whole
        maps = {"left": res.left_incl, "right": res.right_incl}
    elif name == "gray":
        built = construct.gray(_read_complex(files[0]), _read_complex(files[1]))
    elif name == "join":
        built = construct.join(_read_complex(files[0]), _read_complex(files[1]))
    elif name == "suspend":
        built = construct.suspend(_read_complex(files[0]))
    elif name == "dual":
        dims = [int(s) for s in files[1].split(",")] if len(files) > 1 else []
        built = construct.dual(_read_complex(files[0]), dims)
    elif name == "inflate":
        res = construct.inflate(_read_complex(files[0]))
        built = res.whole
        maps = {"tau": res.tau, "iota_minus": res.iota_minus,
                "iota_plus": res.iota_plus}
    elif name == "celto":
        res = construct.celto(_read_complex(files[0]), _read_complex(files[1]))
        built = res.whole
        maps = {"minus": res.minus_incl, "plus": res.plus_incl}
    elif name == "compos":
        built = construct.compos(_read_complex(files[0]))
    elif name == "subst":
        u = _read_complex(files[0])
        v = _subset(u, files[1])
        w = _read_complex(files[2])
        res = construct.substitute(u, v, w)
        built = res.whole
        maps = {"w": res.w_incl}
    else:
        raise SystemExit(2)
    _emit_complex(built)
    if args.emit_maps and maps:
        _emit({k: list(m.assignment) for k, m in maps.items()}, True)
    return 0


def _cmd_topo(args) -> int:
    p = _read_complex(args.file)
    sub = _subset(p, args.subset)
    if args.boundary:
        sub = sub.boundary()
    verb = args.verb
    if verb == "nerve":
        k = topology.nerve(sub)
        _emit({"counts": k.counts(),
               "simplices": [[list(c) for c in lv] for lv in k.simplices]},
              args.json)
        return 0
    if verb == "homology":
        h = topology.homology(topology.nerve(sub))
        _emit({"H": [{"betti": b, "torsion": t} for b, t in h]}, args.json)
        return 0
    if verb == "euler":
        _emit({"euler": topology.euler(topology.nerve(sub))}, args.json)
        return 0
    if verb == "cwcheck":
        rep = topology.face_poset_roundtrip(p)
        _emit(rep.to_json_obj(), args.json)
        return 0 if rep.ok else 1
    raise SystemExit(2)


def _cmd_corpus(args) -> int:
    corp = gen_corpus(args.seed, args.max_dim, args.max_size)
    if args.emit:
        if args.emit not in corp.complexes:
            print(f"no corpus member named {args.emit}", file=sys.stderr)
            return 2
        _emit_complex(corp[args.emit])
        return 0
    for name, p in corp.items():
        print(f"{name}\t{p.size}\t{p.dim}")
    return 0


def _cmd_dot(args) -> int:
    sys.stdout.write(export_dot(_read_complex(args.file)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dircomplex",
        description="regular directed complexes: checks, operations, shapes")
    ap.add_argument("--json", action="store_true",
                    help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("shape", help="emit a named shape")
    sp.add_argument("family",
                    choices=["globe", "simplex", "cube", "phi",
                             "C", "E", "Etilde"])
    sp.add_argument("params", nargs="+", type=int)
    sp.set_defaults(func=_cmd_shape)

    mp = sub.add_parser("map", help="emit a named map")
    mp.add_argument("name", choices=["a", "c", "gamma", "sprec"])
    mp.add_argument("params", nargs="+", type=int)
    mp.set_defaults(func=_cmd_map)

    cp = sub.add_parser("check", help="run a predicate on a complex")
    cp.add_argument("predicate",
                    choices=["molecule", "atom", "spherical",
                             "regular", "loopfree"])
    cp.add_argument("file")
    cp.add_argument("--subset", help="comma-separated generating elements")
    cp.set_defaults(func=_cmd_check)

    opp = sub.add_parser("op", help="apply a constructor")
    opp.add_argument("operation",
                     choices=["paste", "gray", "join", "suspend", "dual",
                              "inflate", "celto", "compos", "subst"])
    opp.add_argument("args", nargs="+")
    opp.add_argument("--emit-maps", action="store_true")
    opp.set_defaults(func=_cmd_op)

    tp = sub.add_parser("topo", help="nerve / homology backend")
    tp.add_argument("verb", choices=["nerve", "homology", "euler", "cwcheck"])
    tp.add_argument("file")
    tp.add_argument("--subset")
    tp.add_argument("--boundary", action="store_true")
    tp.set_defaults(func=_cmd_topo)

    gp = sub.add_parser("corpus", help="list or emit corpus members")
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--max-dim", type=int, default=4)
    gp.add_argument("--max-size", type=int, default=200)
    gp.add_argument("--emit", help="name of the member to print")
    gp.set_defaults(func=_cmd_corpus)

    dp = sub.add_parser("dot", help="Hasse diagram in DOT format")
    dp.add_argument("file")
    dp.set_defaults(func=_cmd_dot)
    return ap


def run(argv) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InvalidStructure, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
