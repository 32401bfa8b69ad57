"""Command-line interface: ``qflag <command> --input FILE [options]``.

Exit codes: 0 success, 2 usage error, 3 unreadable or malformed input,
4 size guard tripped, 5 nothing to compute or no liftable path.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from qflag import paths as _paths
from qflag import qclassic, qdirected, topology
from qflag.digraph import load_digraph
from qflag.errors import (
    AugmentationInfeasible,
    CeilingExceeded,
    DigraphFormatError,
    EmptyConnectivityError,
)
from qflag.flagcomplex import DEFAULT_CEILING, build_complex
from qflag.simplicial import SimplicialComplexView

log = logging.getLogger("qflag")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_GUARD, EXIT_EMPTY = 0, 2, 3, 4, 5


def _int_list(text: str) -> list[int]:
    """Parse ``"0:5"`` (inclusive) or ``"0,2,4"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError(f"bad index range {text!r}")
    return out


def _triple(text: str) -> qdirected.ConnectionSpec:
    try:
        q, i, j = (int(t) for t in text.split(","))
        return qdirected.ConnectionSpec(q, i, j)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected q,i,j, got {text!r}") from exc


def _tuple_text(xs) -> str:
    return "(" + ",".join(str(x) for x in xs) + ")"


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load(args):
    g = load_digraph(args.input, fmt=args.format, remap=args.remap)
    return g


def _complex(args):
    g = _load(args)
    return build_complex(g, max_dim=args.max_dim, ceiling=args.guard)


def _spec_from(args) -> qdirected.ConnectionSpec:
    return qdirected.ConnectionSpec(args.q, args.di, args.dj)


def cmd_count(args) -> int:
    c = _complex(args)
    counts = c.counts
    if c.dim < 0:
        log.warning("input graph has no vertices")
    if args.emit == "json":
        _write(args, _dump({"counts": counts}))
    elif args.emit == "csv":
        _write(args, "dim,count\n" + "".join(f"{d},{n}\n" for d, n in enumerate(counts)))
    else:
        _write(args, " ".join(f"dim{d}:{n}" for d, n in enumerate(counts)) + "\n")
    return EXIT_OK


def cmd_classic(args) -> int:
    c = _complex(args)
    if c.dim < 0:
        log.error("empty complex has no structure vectors")
        return EXIT_EMPTY
    sv = qclassic.structure_vectors(SimplicialComplexView.from_directed(c))
    if args.emit == "json":
        _write(args, _dump(sv.to_dict()))
    elif args.emit == "csv":
        _write(args, sv.to_csv())
    else:
        t = "(" + ",".join(f"{x:.4g}" for x in sv.T) + ")"
        _write(args, f"Q={_tuple_text(sv.Q)} Qhat={_tuple_text(sv.Qhat)} N={_tuple_text(sv.N)} T={t}\n")
    return EXIT_OK


def cmd_qgraph(args) -> int:
    c = _complex(args)
    view = SimplicialComplexView.from_directed(c)
    if args.q > view.dim:
        log.error("no simplices of dimension >= %d", args.q)
        return EXIT_EMPTY
    g = qclassic.build_q_graph(view, args.q)
    if args.emit == "dot":
        _write(args, g.to_dot())
        return EXIT_OK
    comps = qclassic.q_components(g)
    if args.emit == "json":
        _write(args, _dump({"q": args.q, "nodes": g.num_nodes, "edges": g.num_edges, "components": [[list(s) for s in cl] for cl in comps]}))
    else:
        _write(args, f"q={args.q} nodes={g.num_nodes} edges={g.num_edges} components={len(comps)}\n")
    return EXIT_OK


def cmd_communities(args) -> int:
    g = _load(args)
    comms = qclassic.clique_communities(g.edge_array, args.k, num_vertices=g.num_vertices)
    if args.emit == "json":
        _write(args, _dump([[list(s) for s in cl] for cl in comms]))
    else:
        lines = [" ".join(map(str, sorted({v for s in cl for v in s}))) for cl in comms]
        _write(args, "".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_pm_check(args) -> int:
    c = _complex(args)
    if args.di is None and args.dj is None:
        cert = qclassic.pseudomanifold_check(SimplicialComplexView.from_directed(c), args.n)
    else:
        cert = qdirected.directed_pseudomanifold_check(c, args.n, args.di or 0, args.dj or 0)
    if args.emit == "json":
        _write(args, _dump(cert.to_dict()))
    else:
        head = "pseudomanifold" if cert.is_pseudomanifold else "not a pseudomanifold"
        if cert.with_boundary:
            head += f" with boundary ({len(cert.boundary)} faces)"
        _write(args, head + "\n" + "".join(f"  {v}\n" for v in cert.violations))
    return EXIT_OK


def _connectivity(args):
    c = _complex(args)
    spec = _spec_from(args)
    return c, spec, qdirected.build_connectivity_digraph(c, spec)


def cmd_dq_build(args) -> int:
    _, _, g = _connectivity(args)
    if args.emit == "dot":
        _write(args, g.to_dot())
    elif args.emit == "json":
        _write(args, _dump(qdirected.summary(g)))
    else:
        s = qdirected.summary(g)
        _write(args, " ".join(f"{k}={s[k]}" for k in ("q", "i", "j", "nodes", "edges", "scc_count", "condensation_edges")) + "\n")
    return EXIT_OK


def cmd_condense(args) -> int:
    _, _, g = _connectivity(args)
    cd = qdirected.condense(g)
    if args.emit == "dot":
        _write(args, cd.to_dot())
    elif args.emit == "json":
        body = qdirected.summary(g, cd)
        body["components"] = [[list(s) for s in cd.member_simplices(x)] for x in range(cd.num_nodes)]
        _write(args, _dump(body))
    else:
        _write(args, f"components={cd.num_nodes} edges={cd.num_edges} nontrivial={len(cd.nontrivial())}\n")
    return EXIT_OK


def cmd_paths(args) -> int:
    c = _complex(args)
    if args.spec:
        rows = []
        for spec in args.spec:
            try:
                rows.append((spec, _paths.longest_simplicial_path(c, spec, retries=args.retries)))
            except EmptyConnectivityError as exc:
                log.warning("%s: %s", spec, exc)
                rows.append((spec, "empty"))
            except AugmentationInfeasible:
                rows.append((spec, None))
        if args.emit == "json":
            _write(args, _dump([p.to_dict() if isinstance(p, _paths.SimplicialPath) else {"spec": list(s), "status": p or "infeasible"} for s, p in rows]))
        else:
            lines = ["q,i,j,length,fraction"]
            for s, p in rows:
                if isinstance(p, _paths.SimplicialPath):
                    lines.append(f"{s.q},{s.i},{s.j},{p.length},{float(p.fraction):.6f}")
                else:
                    lines.append(f"{s.q},{s.i},{s.j},{p or 'infeasible'},")
            _write(args, "\n".join(lines) + "\n")
        return EXIT_OK
    if args.q > c.dim:
        log.error("no simplices of dimension >= %d; empty matrix", args.q)
        _write(args, "")
        return EXIT_EMPTY
    i_vals = args.di_range or ([args.di] if args.di is not None else list(range(c.dim + 1)))
    j_vals = args.dj_range or ([args.dj] if args.dj is not None else list(range(c.dim + 1)))
    grid = _paths.path_grid(c, args.q, i_vals, j_vals, skip_diagonal=not args.include_diagonal, retries=args.retries)
    if args.emit == "json":
        cells = [
            {"i": i, "j": j, "path": (grid[(i, j)].to_dict() if grid[(i, j)] is not None else "infeasible")}
            for (i, j) in sorted(grid)
        ]
        _write(args, _dump({"q": args.q, "cells": cells}))
    else:
        text = "# length\n" + _paths.grid_csv(grid, i_vals, j_vals, "length")
        text += "# fraction\n" + _paths.grid_csv(grid, i_vals, j_vals, "fraction")
        _write(args, text)
    if grid and all(v is None for v in grid.values()):
        return EXIT_EMPTY
    return EXIT_OK


def cmd_topology(args) -> int:
    _, _, g = _connectivity(args)
    poset = topology.Poset.from_condensation(qdirected.condense(g))
    oc = topology.order_complex(poset, ceiling=args.chain_guard)
    betti = topology.betti_z2(oc)
    height = topology.poset_height(poset)
    if args.emit == "json":
        _write(args, _dump({"betti": betti, "height": height, "elements": poset.num_elements, "chains": oc.counts}))
    else:
        _write(args, f"betti={_tuple_text(betti)} height={height}\n")
    return EXIT_OK


def cmd_convert(args) -> int:
    g = _load(args)
    _write(args, g.to_edge_list())
    if g.labels is not None and args.labels_out:
        with open(args.labels_out, "w") as fh:
            fh.write("".join(f"{k} {name}\n" for k, name in enumerate(g.labels)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="digraph file")
    common.add_argument("--format", choices=("auto", "edgelist", "adjacency"), default="auto")
    common.add_argument("--remap", action="store_true", help="relabel sparse vertex ids to 0..n-1")
    common.add_argument("--max-dim", type=int, default=None, help="cap on simplex dimension")
    common.add_argument("--guard", type=int, default=DEFAULT_CEILING, help="per-dimension simplex ceiling")
    common.add_argument("--out", default=None, help="write report here instead of stdout")
    common.add_argument("--emit", choices=("text", "json", "csv", "dot"), default="text", help="report format")
    common.add_argument("-v", "--verbose", action="store_true")

    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("--q", type=int, default=0)
    spec.add_argument("--di", type=int, default=None)
    spec.add_argument("--dj", type=int, default=None)

    p = argparse.ArgumentParser(prog="qflag", description="Classical and directed Q-analysis of digraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("count", parents=[common], help="simplex counts per dimension").set_defaults(func=cmd_count)
    sub.add_parser("classic", parents=[common], help="structure vectors").set_defaults(func=cmd_classic)
    sp = sub.add_parser("qgraph", parents=[common, spec], help="classical q-graph")
    sp.set_defaults(func=cmd_qgraph)
    sp = sub.add_parser("communities", parents=[common], help="clique-percolation communities")
    sp.add_argument("--k", type=int, default=3)
    sp.set_defaults(func=cmd_communities)
    sp = sub.add_parser("pm-check", parents=[common], help="pseudomanifold certificate")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--di", type=int, default=None, help="directed check along this source face")
    sp.add_argument("--dj", type=int, default=None, help="directed check along this target face")
    sp.set_defaults(func=cmd_pm_check)
    for name, func, helptext in (
        ("dq-build", cmd_dq_build, "directed connectivity digraph"),
        ("condense", cmd_condense, "condensation of the connectivity digraph"),
    ):
        sp = sub.add_parser(name, parents=[common, spec], help=helptext)
        sp.set_defaults(func=func)
    sp = sub.add_parser("paths", parents=[common, spec], help="longest simplicial paths")
    sp.add_argument("--di-range", type=_int_list, default=None, help="e.g. 0:5 or 0,2")
    sp.add_argument("--dj-range", type=_int_list, default=None)
    sp.add_argument("--spec", type=_triple, action="append", help="explicit q,i,j (repeatable)")
    sp.add_argument("--include-diagonal", action="store_true", help="also compute i == j cells")
    sp.add_argument("--retries", type=int, default=_paths.DEFAULT_RETRIES)
    sp.set_defaults(func=cmd_paths)
    sp = sub.add_parser("topology", parents=[common, spec], help="Betti numbers and height of the condensed poset")
    sp.add_argument("--chain-guard", type=int, default=topology.DEFAULT_CHAIN_CEILING)
    sp.set_defaults(func=cmd_topology)
    sp = sub.add_parser("convert", parents=[common], help="normalise input to an edge list")
    sp.add_argument("--labels-out", default=None, help="write remapped vertex names here")
    sp.set_defaults(func=cmd_convert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="qflag: %(levelname)s: %(message)s")
    for name in ("di", "dj"):
        if getattr(args, name, None) is None and args.command in ("qgraph", "dq-build", "condense", "topology"):
            setattr(args, name, 0)
    try:
        return args.func(args)
    except (DigraphFormatError, OSError, ValueError) as exc:
        if isinstance(exc, EmptyConnectivityError):
            log.error("%s", exc)
            return EXIT_EMPTY
        log.error("%s", exc)
        return EXIT_INPUT
    except CeilingExceeded as exc:
        log.error("%s (partial counts %s)", exc, list(exc.counts))
        return EXIT_GUARD
    except AugmentationInfeasible as exc:
        log.error("%s", exc)
        return EXIT_EMPTY


if __name__ == "__main__":
    sys.exit(main())
