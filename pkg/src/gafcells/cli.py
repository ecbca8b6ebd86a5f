"""Command-line entry point: partitions, requirement checks, simulations, tables.

Exit codes: 0 success / feasible, 1 infeasible or disconnected finding,
2 usage or configuration error. Every file written with ``--out`` gets a
``<out>.manifest.json`` next to it echoing the command and its full
configuration, so the output can be regenerated from the manifest alone.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys

from . import __version__
from .backbone import build_backbone, canonical_actives, degree_histogram, is_connected
from .bounds import (
    PUBLISHED_LIFETIME_PCT,
    avg_cell_bound,
    chain_max_area,
    delta,
    table_rows,
    upper_bound,
    verify_chain_construction,
)
from .constraints import (
    analytic_report,
    brute_force_worst_distances,
    check_requirements,
    max_cell_dims,
    worst_case_actives,
)
from .energysim import CRITERIA, FIRST_CELL_DEAD, SimConfig, sweep
from .partition import SCHEME_ORDER, FieldSpec, Partition, Scheme, SchemeParams, build_partition

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


# -- argument helpers ------------------------------------------------------------

def _add_field_flags(p):
    p.add_argument("--width", type=float, default=10.0)
    p.add_argument("--height", type=float, default=10.0)
    p.add_argument("--radio-range", type=float, default=1.0)


def _add_scheme_flags(p, required=True):
    p.add_argument("--scheme", required=required, help="gaf, hgaf, ehgaf, ehgaf-triangle, ehgaf-twotype")
    p.add_argument("--r", type=float, default=None,
                   help="cell size; omitted means the maximal feasible size")
    p.add_argument("--d", type=float, default=0.0, help="subcell size (0: point subcells)")
    p.add_argument("--k", type=int, default=4, help="two-type column period")


def _add_out(p):
    p.add_argument("--out", default=None, help="output file (default: standard output)")


def _field(args):
    return FieldSpec(args.width, args.height, args.radio_range)


def _params(scheme, args):
    s = Scheme.parse(scheme)
    r = args.r
    if r is None:
        if s is Scheme.TWOTYPE:
            r = 0.0
        else:
            r = max_cell_dims(s, args.d, args.radio_range).r_max
    return SchemeParams(s, r, args.d, args.k)


def _emit(args, text, argv):
    if args.out is None:
        sys.stdout.write(text)
        return
    with open(args.out, "w", newline="") as f:
        f.write(text)
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    manifest = {
        "command": args.command,
        "argv": list(argv),
        "config": config,
        "version": __version__,
        "seeds": _seed_list(args),
        "outputs": [args.out],
    }
    with open(args.out + ".manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def _seed_list(args):
    if not hasattr(args, "seed"):
        return []
    n = getattr(args, "seeds", 1) or 1
    return list(range(args.seed, args.seed + n))


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- subcommands -----------------------------------------------------------------

def cmd_partition(args, argv):
    part = build_partition(_field(args), _params(args.scheme, args))
    _emit(args, part.to_json() + "\n", argv)
    return EXIT_OK


def _load_partition(args):
    if args.partition:
        try:
            with open(args.partition) as f:
                return Partition.from_json(f.read())
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
            raise UsageError(f"cannot read partition {args.partition}: {e}") from e
    if not args.scheme:
        raise UsageError("verify needs --partition or --scheme")
    return build_partition(_field(args), _params(args.scheme, args))


def cmd_verify(args, argv):
    part = _load_partition(args)
    R = part.field.radio_range
    analytic = analytic_report(part.params, R)
    placed = check_requirements(part, worst_case_actives(part), R)
    out = {"analytic": analytic.to_dict(), "worst_case_placement": placed.to_dict()}
    feasible = analytic.feasible and placed.feasible
    if args.resolution is not None:
        req1, req2 = brute_force_worst_distances(part, args.resolution)
        tol = R * (1 + 1e-9) + args.resolution
        out["brute_force"] = {"resolution": args.resolution, "req1_worst": req1, "req2_worst": req2}
        feasible = feasible and req1 <= tol and req2 <= tol
    g = build_backbone(part, canonical_actives(part), R)
    connected = is_connected(g)
    out["backbone"] = {
        "connected": connected,
        "component_count": g.component_count,
        "violations": len(g.violations),
        "max_edge_length": g.max_edge_length,
        "degree_histogram": {str(k): v for k, v in degree_histogram(g).items()},
    }
    out["feasible"] = feasible
    _emit(args, _dumps(out), argv)
    return EXIT_OK if feasible and connected else EXIT_FINDING


def _sim_config(args, scheme):
    fs = _field(args)
    if args.nodes is not None:
        n = args.nodes
    elif args.density is not None:
        n = int(round(args.density * fs.area))
    else:
        raise UsageError("simulate needs --nodes or --density")
    return SimConfig(
        fs, _params(scheme, args), n,
        initial_energy=args.initial_energy, e_active=args.e_active, e_sleep=args.e_sleep,
        seed=args.seed, epoch_length=args.epoch_length, lifetime_criterion=args.criterion,
        full_cells_only=not args.all_cells, max_rounds=args.max_rounds,
    )


def cmd_simulate(args, argv):
    if args.all_schemes == bool(args.scheme):
        raise UsageError("give exactly one of --scheme and --all-schemes")
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    if args.all_schemes and args.r is not None:
        raise UsageError("--r cannot be combined with --all-schemes")
    schemes = SCHEME_ORDER if args.all_schemes else [Scheme.parse(args.scheme)]
    configs = [_sim_config(args, s) for s in schemes]
    seeds = range(args.seed, args.seed + args.seeds)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scheme", "seed", "lifetime", "mean_active_count"])
    summary = []
    for s, cfg in zip(schemes, configs):
        runs = sweep(cfg, seeds, args.workers)
        for r in runs:
            w.writerow([s.value, r.config.seed, r.lifetime, repr(r.mean_active_count)])
        summary.append((statistics.median(r.lifetime for r in runs),
                        statistics.median(r.mean_active_count for r in runs), s.value))
    # summary rows run from shortest to longest median lifetime
    order = {s.value: i for i, s in enumerate(SCHEME_ORDER)}
    for med, act, name in sorted(summary, key=lambda t: (t[0], order[t[2]])):
        w.writerow([name, "median", repr(float(med)), repr(float(act))])
    _emit(args, buf.getvalue(), argv)
    return EXIT_OK


def cmd_tables(args, argv):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scheme", "max_cell_area", "pct_of_bound", "published_pct"])
    for name, area, pct, published in table_rows(args.radio_range):
        w.writerow([name, repr(area), repr(pct), published])
    _emit(args, buf.getvalue(), argv)
    return EXIT_OK


def cmd_bounds(args, argv):
    R = args.radio_range
    ns = args.n or [2, 3, 4, 5]
    chains = []
    ok = True
    for i, n in enumerate(ns):
        rep = verify_chain_construction(n, R, args.samples, args.seed + i)
        ok = ok and rep.pass_
        chains.append({
            "n": n,
            "chain_max_area": chain_max_area(n, R),
            "avg_cell_bound": avg_cell_bound(n, R),
            "verification": rep.to_dict(),
        })
    out = {
        "radio_range": R,
        "delta": delta(R),
        "upper_bound": upper_bound(R),
        "published_bound_pct": PUBLISHED_LIFETIME_PCT["bound"],
        "samples": args.samples,
        "seed": args.seed,
        "chains": chains,
    }
    _emit(args, _dumps(out), argv)
    return EXIT_OK if ok else EXIT_FINDING


# -- parser ----------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="gafcells", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="write a partition as JSON")
    _add_scheme_flags(p)
    _add_field_flags(p)
    _add_out(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="check both communication requirements and connectivity")
    p.add_argument("--partition", default=None, help="partition JSON (instead of scheme flags)")
    _add_scheme_flags(p, required=False)
    _add_field_flags(p)
    p.add_argument("--resolution", type=float, default=None,
                   help="also run the sampling oracle at this pitch")
    _add_out(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="run lifetime simulations over a range of seeds")
    _add_scheme_flags(p, required=False)
    p.add_argument("--all-schemes", action="store_true")
    _add_field_flags(p)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--density", type=float, default=None, help="nodes per unit area")
    p.add_argument("--initial-energy", type=float, default=100.0)
    p.add_argument("--e-active", type=float, default=1.0)
    p.add_argument("--e-sleep", type=float, default=0.0)
    p.add_argument("--epoch-length", type=int, default=1)
    p.add_argument("--criterion", choices=CRITERIA, default=FIRST_CELL_DEAD)
    p.add_argument("--all-cells", action="store_true",
                   help="let clipped border cells trigger first-cell-dead")
    p.add_argument("--max-rounds", type=int, default=None)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--workers", type=int, default=1)
    _add_out(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tables", help="analytic cell areas and lifetime percentages")
    p.add_argument("--radio-range", type=float, default=1.0)
    _add_out(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("bounds", help="chain bound values and their Monte Carlo check")
    p.add_argument("--radio-range", type=float, default=1.0)
    p.add_argument("--n", type=int, action="append", help="chain length (repeatable)")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(func=cmd_bounds)
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, argv)
    except (UsageError, ValueError, OSError) as e:
        print(f"gafcells {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
