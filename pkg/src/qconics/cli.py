"""Command-line interface.

Every subcommand prints one JSON report to stdout (progress and diagnostics
go to stderr) and exits 0 on success, 1 on a verification mismatch, 2 on a
usage error, and 3 when a budgeted search returned incomplete results.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__


EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INCOMPLETE = 3


def _report(subcommand: str, result, status: str, t0: float) -> dict:
    return {
        "subcommand": subcommand,
        "result": result,
        "status": status,
        "timing": round(time.time() - t0, 3),
        "version": __version__,
    }


def _emit(rep: dict) -> None:
    print(json.dumps(rep, indent=2))


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def threads() -> int:
    try:
        return max(1, int(os.environ.get("QC_THREADS", "0"))) or os.cpu_count() or 1
    except ValueError:
        return os.cpu_count() or 1


def cmd_niemeier_build(args, t0):
    from . import niemeier
    from .lattice import short_vectors_array

    lat = niemeier.build_niemeier(args.lattice)
    roots = 0 if args.lattice == "leech" else len(short_vectors_array(lat, 2)[0])
    result = {
        "lattice": args.lattice,
        "rank": lat.rank,
        "det": str(lat.det),
        "even": lat.is_even,
        "roots": roots,
    }
    if args.lattice == "leech":
        result["roots"] = len(short_vectors_array(lat, 2)[0])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(lat.to_json())
        result["out"] = args.out
    _emit(_report("niemeier build", result, "ok", t0))
    return EXIT_OK


def cmd_golay_info(args, t0):
    from . import golay

    code = golay.build_extended_golay()
    result = {
        "length": code.length,
        "dimension": code.dimension,
        "weight_distribution": {str(k): v for k, v in code.weight_distribution().items()},
        "self_dual": code.is_self_dual(),
        "generators_hex": golay.generator_hex(code),
    }
    _emit(_report("golay info", result, "ok", t0))
    return EXIT_OK


def cmd_conics_enumerate(args, t0):
    from . import niemeier, orbits

    pol = niemeier.polarization(args.lattice, args.polarization)
    orb = orbits.enumerate_orb(pol)
    result = {"lattice": args.lattice, "polarization": args.polarization,
              "count": len(orb)}
    _emit(_report("conics enumerate", result, "ok", t0))
    return EXIT_OK


def cmd_config_verify(args, t0):
    from . import orbits

    cfg = orbits.load_configuration(args.file)
    cs = orbits.conics_of_configuration(cfg)
    _progress(f"{args.file}: {len(cs)} conics")
    sat = cs.is_saturated()
    selfdual = cs.is_self_dual()
    admissible = cs.is_admissible()
    fp = orbits.fingerprint(cs)
    from .lattice import PolarizedLattice, ort, h_perp, Lattice
    span = cs.span
    pol_span = PolarizedLattice(span, cfg.h)
    o = ort(pol_span, cs.pol.lattice)
    result = {
        "file": args.file,
        "count": len(cs),
        "expect": cfg.expect,
        "rank": cs.rank,
        "det_span": str(span.det),
        "det_ort": str(o.lattice.det),
        "fingerprint": fp.digest,
        "self_dual": selfdual,
        "admissible": admissible,
        "saturated": sat,
    }
    ok = (sat and selfdual and admissible and cs.rank <= 20
          and (cfg.expect is None or len(cs) == cfg.expect))
    _emit(_report("config verify", result, "ok" if ok else "mismatch", t0))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_bounds_table(args, t0):
    from . import bounds

    fam = args.family.upper()
    table = {}
    if fam == "A":
        for n in range(args.max + 1):
            for m in range(n + 1):
                table[f"A({m},{n})"] = bounds.bbA(m, n)
    elif fam == "D":
        for n in range(args.max + 1):
            table[f"D({n})"] = bounds.bbD(n)
    elif fam == "T":
        for n in range(3, args.max + 1):
            table[f"T({n})"] = bounds.bbT(n)
    else:
        _progress(f"unknown family {args.family}")
        return EXIT_USAGE
    _emit(_report("bounds table", {"family": fam, "max": args.max,
                                   "values": table}, "ok", t0))
    return EXIT_OK


def cmd_bounds_estimate(args, t0):
    from . import bounds

    trace = bounds.lattice_bound(args.lattice, args.case)
    result = {
        "lattice": trace.lattice,
        "case": trace.case,
        "orbits": [{
            "label": o.label,
            "multiplicity": o.multiplicity,
            "count": o.cnt,
            "bound": o.bound,
            "bound_before_reduction": o.bound_product,
            "special_reduction": o.special_reduced,
        } for o in trace.orbits],
        "orbit_count_sum": trace.orbit_count_sum,
        "total_before_reduction": trace.total_product,
        "total": trace.total,
    }
    _emit(_report("bounds estimate", result, "ok", t0))
    return EXIT_OK


def cmd_search_bnd(args, t0):
    from . import orbits, bounds

    cfg = orbits.load_configuration(args.config)
    cs = orbits.conics_of_configuration(cfg)
    res, complete = bounds.bnd_search(cs, args.threshold, budget=args.budget)
    result = {"seed": args.config, "threshold": args.threshold,
              "sets": [{"size": len(r)} for r in res],
              "complete": complete}
    _emit(_report("search bnd", result, "ok" if complete else "incomplete", t0))
    return EXIT_OK if complete else EXIT_INCOMPLETE


def cmd_descent_run(args, t0):
    from . import descent, orbits

    cfg = orbits.load_configuration(args.config)
    seed = orbits.conics_of_configuration(cfg)
    sym = None
    if args.symmetries:
        with open(args.symmetries, "r", encoding="utf-8") as f:
            sym = descent.SymmetryAction.from_json(f.read())
    res = descent.run_descent(seed, args.threshold, args.max_rank,
                              budget=args.budget, symmetries=sym)
    out = []
    for c in res.sets:
        fp = orbits.fingerprint(c)
        out.append({"count": len(c), "rank": c.rank, "fingerprint": fp.digest,
                    "det_span": str(c.span.det)})
    if args.checkpoint:
        with open(args.checkpoint, "w", encoding="utf-8") as f:
            json.dump({"complete": res.complete, "sets": out}, f)
    _emit(_report("descent run", {"sets": out, "complete": res.complete,
                                  "nodes": res.nodes_processed},
                  "ok" if res.complete else "incomplete", t0))
    return EXIT_OK if res.complete else EXIT_INCOMPLETE


def cmd_vinberg_fano(args, t0):
    from . import orbits
    from .lattice import (PolarizedLattice, mod_involution,
                          h_odd_index2_extensions, vinberg_fano)

    cfg = orbits.load_configuration(args.config)
    cs = orbits.conics_of_configuration(cfg)
    pol = PolarizedLattice(cs.span, cfg.h)
    m = mod_involution(pol)
    exts = h_odd_index2_extensions(m)
    entries = []
    for e in exts:
        fw = vinberg_fano(e)
        entries.append({"lines": fw.counts[0], "irreducible": fw.counts[1],
                        "total": fw.counts[2], "reducible": fw.reducible_count})
    result = {"config": args.config, "conics": len(cs),
              "h_odd_extensions": len(exts), "walls": entries}
    _emit(_report("vinberg fano", result, "ok", t0))
    return EXIT_OK


def cmd_check(args, t0):
    from . import acceptance

    results = acceptance.run_all(filter_str=args.filter, progress=_progress)
    ok = all(r["pass"] for r in results)
    _emit(_report("check", {"criteria": results, "all_pass": ok},
                  "ok" if ok else "mismatch", t0))
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qconics",
                                description="Exact lattice toolkit for conic "
                                            "configurations on quartics")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("niemeier", help="lattice construction")
    qs = q.add_subparsers(dest="sub", required=True)
    b = qs.add_parser("build", help="build and validate a lattice")
    b.add_argument("--lattice", required=True,
                   choices=["24A1", "8A3", "A24", "2D12", "4D6", "leech"])
    b.add_argument("--out", help="write the lattice as JSON")
    b.set_defaults(func=cmd_niemeier_build)

    g = sub.add_parser("golay", help="Golay code info")
    gs = g.add_subparsers(dest="sub", required=True)
    gi = gs.add_parser("info")
    gi.set_defaults(func=cmd_golay_info)

    c = sub.add_parser("conics", help="conic orbit enumeration")
    cs_ = c.add_subparsers(dest="sub", required=True)
    ce = cs_.add_parser("enumerate")
    ce.add_argument("--lattice", required=True)
    ce.add_argument("--polarization", default=None,
                    help="label from the shipped polarization table")
    ce.set_defaults(func=cmd_conics_enumerate)

    v = sub.add_parser("config", help="configuration files")
    vs = v.add_subparsers(dest="sub", required=True)
    vv = vs.add_parser("verify")
    vv.add_argument("file")
    vv.set_defaults(func=cmd_config_verify)

    t = sub.add_parser("bounds", help="combinatorial bounds")
    ts = t.add_subparsers(dest="sub", required=True)
    tt = ts.add_parser("table")
    tt.add_argument("--family", required=True, choices=["A", "D", "T"])
    tt.add_argument("--max", type=int, default=24)
    tt.set_defaults(func=cmd_bounds_table)
    te = ts.add_parser("estimate")
    te.add_argument("--lattice", required=True)
    te.add_argument("--case", required=True)
    te.set_defaults(func=cmd_bounds_estimate)

    s = sub.add_parser("search", help="saturated-set search")
    ss = s.add_subparsers(dest="sub", required=True)
    sb = ss.add_parser("bnd")
    sb.add_argument("--config", required=True)
    sb.add_argument("--threshold", type=int, required=True)
    sb.add_argument("--budget", type=int, default=200000)
    sb.set_defaults(func=cmd_search_bnd)

    d = sub.add_parser("descent", help="index-2 descent")
    ds = d.add_subparsers(dest="sub", required=True)
    dr = ds.add_parser("run")
    dr.add_argument("--config", required=True)
    dr.add_argument("--threshold", type=int, required=True)
    dr.add_argument("--max-rank", type=int, default=20)
    dr.add_argument("--budget", type=int, default=2000)
    dr.add_argument("--symmetries")
    dr.add_argument("--checkpoint")
    dr.set_defaults(func=cmd_descent_run)

    w = sub.add_parser("vinberg", help="wall sets of the modified span")
    ws = w.add_subparsers(dest="sub", required=True)
    wf = ws.add_parser("fano")
    wf.add_argument("--config", required=True)
    wf.set_defaults(func=cmd_vinberg_fano)

    k = sub.add_parser("check", help="run the acceptance suite")
    k.add_argument("--filter", default=None)
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    t0 = time.time()
    try:
        return args.func(args, t0)
    except FileNotFoundError as e:
        _progress(f"error: {e}")
        return EXIT_USAGE
    except Exception as e:  # diagnostics on stderr, stable exit code
        _progress(f"error: {type(e).__name__}: {e}")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
