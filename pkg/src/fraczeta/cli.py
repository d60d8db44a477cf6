"""Command-line front end.

Every command prints its artifact to stdout, or with ``--out DIR`` writes it to ``DIR``
together with ``manifest.json``.  The manifest names each file with its SHA-256 and a
hash of the resolved configuration; run-dependent fields (thread count, timestamp) live
under its ``meta`` key so artifacts themselves are reproducible byte for byte.
Exit status: 0 success, 1 failed checks, 2 usage errors.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import catalog as cat
from .errors import FracZetaError, LookupFailure
from .estimate import (EmpiricalTubeData, detect_log_periodicity, estimate_minkowski, log_grid, mc_tube_volume,
                       tube_zeta_quadrature)
from .spaces import set_from_spec, space_from_spec
from .tubefn import fraction_str
from .zeta import PoleSet, Window, continue_tube_zeta, distance_zeta, eval_zeta, poles

log = logging.getLogger("fraczeta")

RUN_ONLY = ("threads", "out")


class UsageError(Exception):
    pass


def pole_set_csv(ps: PoleSet) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["re", "im", "order", "res_re", "res_im"])
    for p in ps.materialized():
        w.writerow([repr(float(p.re)), repr(p.im), p.order, repr(p.residue.real), repr(p.residue.imag)])
    return out.getvalue()


def emit_plot_data(data) -> str:
    """CSV for tube data (``t,volume,stderr``) or pole sets (``re,im,order,res_re,res_im``)."""
    if isinstance(data, EmpiricalTubeData):
        return data.to_csv()
    if isinstance(data, PoleSet):
        return pole_set_csv(data)
    raise TypeError("expected EmpiricalTubeData or PoleSet")


def parse_complex(text: str) -> complex:
    """``"0.5+3i"``, ``"2"``, ``"-1.5i"``; ``j`` works as well as ``i``."""
    t = text.strip().replace(" ", "").replace("i", "j")
    t = re.sub(r"(^|[-+])j$", r"\g<1>1j", t)
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _entry_doc(e: cat.CatalogEntry) -> dict:
    return {"name": e.name, "Q": fraction_str(e.ambient_q), "delta": fraction_str(e.delta),
            "tube": e.tube.to_dict(), "notes": e.notes,
            "expected": {"isolated": [fraction_str(x) for x in e.expected.isolated],
                         "families": [{"re": fraction_str(r), "spacing": sp} for r, sp in e.expected.families]}}


def _tube_data(args) -> EmpiricalTubeData:
    space = space_from_spec(args.space)
    set_a = set_from_spec(space, args.set)
    if not 0 < args.t_min < args.t_max:
        raise UsageError("need 0 < --t-min < --t-max")
    grid = np.geomspace(args.t_min, args.t_max, args.points) if args.points else log_grid(args.t_min, args.t_max)
    return mc_tube_volume(set_a, grid, args.samples, args.seed, args.threads, delta=args.t_max, q=args.q)


def cmd_catalog(args) -> tuple[int, dict[str, str]]:
    if args.action == "list":
        doc = [{"name": e.name, "Q": fraction_str(e.ambient_q), "notes": e.notes} for e in cat.all_entries()]
        return 0, {"catalog.json": _dumps(doc)}
    if not args.name:
        raise UsageError("catalog show needs an example name")
    return 0, {f"{args.name}.json": _dumps(_entry_doc(cat.catalog(args.name)))}


def _zeta_for(entry: cat.CatalogEntry, kind: str):
    if kind == "tube":
        return continue_tube_zeta(entry.tube, entry.ambient_q)
    return distance_zeta(entry.tube, entry.ambient_q)


def cmd_dims(args) -> tuple[int, dict[str, str]]:
    entry = cat.catalog(args.example)
    ps = poles(_zeta_for(entry, args.kind), Window(im_max=args.im_window))
    if args.format == "csv":
        return 0, {f"dims-{entry.name}.csv": pole_set_csv(ps)}
    return 0, {f"dims-{entry.name}.json": _dumps(ps.to_dict())}


def cmd_tube(args) -> tuple[int, dict[str, str]]:
    return 0, {"tube.csv": _tube_data(args).to_csv()}


def cmd_estimate_dim(args) -> tuple[int, dict[str, str]]:
    if args.input:
        if args.q is None:
            raise UsageError("--in needs --q (ambient dimension)")
        data = EmpiricalTubeData.from_csv(Path(args.input).read_text(), args.q)
    elif args.space and args.set:
        data = _tube_data(args)
    else:
        raise UsageError("estimate-dim needs --in or --space and --set")
    est = estimate_minkowski(data)
    try:
        osc = detect_log_periodicity(data, est.dim).to_dict()
    except FracZetaError as exc:
        osc = {"error": str(exc)}
    return 0, {"estimate.json": _dumps({"minkowski": est.to_dict(), "oscillation": osc})}


def cmd_zeta(args) -> tuple[int, dict[str, str]]:
    entry = cat.catalog(args.example)
    s = parse_complex(args.s)
    doc = {"example": entry.name, "kind": args.kind, "s": {"re": s.real, "im": s.imag}}
    v = eval_zeta(_zeta_for(entry, args.kind), s)
    doc["value"] = {"re": v.real, "im": v.imag}
    if args.numeric:
        r = tube_zeta_quadrature(entry.tube, s, q=entry.ambient_q)
        if args.kind == "distance":
            q, delta = float(entry.ambient_q), float(entry.delta)
            val = delta ** (s - q) * entry.tube(delta) + (q - s) * r.value
            doc["numeric"] = {"value": {"re": val.real, "im": val.imag},
                              "errorBound": abs(q - s) * r.error_bound}
        else:
            doc["numeric"] = r.to_dict()
    return 0, {f"zeta-{entry.name}.json": _dumps(doc)}


def cmd_verify(args) -> tuple[int, dict[str, str]]:
    from .verify import run_suite, suite_passed

    results = run_suite(args.suite, args.seed, args.threads)
    doc = [r.to_dict() for r in results]
    for r in results:
        log.debug("%s %s %s", r.status.upper(), r.check_name, r.subject)
    return (0 if suite_passed(results) else 1), {"verify.json": _dumps(doc)}


def _env_seed() -> int:
    raw = os.environ.get("FRACZETA_SEED")
    if raw is None:
        return 0
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"FRACZETA_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (default: FRACZETA_SEED or 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    common.add_argument("--out", default=None, help="directory for artifacts and manifest.json")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="fraczeta", description="Complex dimensions of fractal sets in metric measure spaces.")
    p.add_argument("--version", action="version", version=f"fraczeta {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="list or show worked examples")
    c.add_argument("action", choices=("list", "show"))
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_catalog)

    d = sub.add_parser("dims", parents=[common], help="complex dimensions of a catalog example")
    d.add_argument("--example", required=True)
    d.add_argument("--im-window", type=float, default=20.0)
    d.add_argument("--kind", choices=("tube", "distance"), default="tube")
    d.set_defaults(func=cmd_dims)

    def sampling(sp):
        sp.add_argument("--space", help='space spec, e.g. \'{"space":"heisenberg"}\'')
        sp.add_argument("--set", help='set spec, e.g. \'{"set":"t-axis-segment"}\'')
        sp.add_argument("--t-min", type=float, default=1e-3)
        sp.add_argument("--t-max", type=float, default=0.25)
        sp.add_argument("--points", type=int, default=0, help="grid size (default: 64 per decade)")
        sp.add_argument("--samples", type=int, default=1_000_000)
        sp.add_argument("--q", default=None, help="ambient dimension (default: upper bound of the space)")

    t = sub.add_parser("tube", parents=[common], help="Monte Carlo tube volumes as CSV")
    sampling(t)
    t.set_defaults(func=cmd_tube)

    e = sub.add_parser("estimate-dim", parents=[common], help="Minkowski dimension and log-periodicity")
    e.add_argument("--in", dest="input", help="tube CSV with header t,volume,stderr")
    sampling(e)
    e.set_defaults(func=cmd_estimate_dim)

    z = sub.add_parser("zeta", parents=[common], help="evaluate a zeta function of a catalog example")
    z.add_argument("--example", required=True)
    z.add_argument("--s", required=True, help='point such as "0.5+3i"')
    z.add_argument("--kind", choices=("tube", "distance"), default="tube")
    z.add_argument("--numeric", action="store_true", help="also integrate the tube function numerically")
    z.set_defaults(func=cmd_zeta)

    v = sub.add_parser("verify", parents=[common], help="run the cross-check suite")
    v.add_argument("--suite", default="all")
    v.set_defaults(func=cmd_verify)
    return p


def _config(args) -> dict:
    skip = {"func", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _write(out: Path, files: dict[str, str], config: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    stable = {k: v for k, v in config.items() if k not in RUN_ONLY}
    config_hash = hashlib.sha256(json.dumps(stable, sort_keys=True).encode()).hexdigest()
    entries = []
    for name, text in files.items():
        (out / name).write_text(text)
        entries.append({"file": name, "sha256": hashlib.sha256(text.encode()).hexdigest(), "configHash": config_hash})
    manifest = {"config": stable, "configHash": config_hash, "files": entries,
                "meta": {"threads": config.get("threads"), "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                         "version": __version__}}
    (out / "manifest.json").write_text(_dumps(manifest))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    try:
        if args.seed is None:
            args.seed = _env_seed()
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        config = _config(args)
        log.info("config %s", json.dumps(config, sort_keys=True))
        code, files = args.func(args)
    except LookupFailure as exc:
        print(f"fraczeta: {exc}", file=sys.stderr)
        return 2
    except (UsageError, json.JSONDecodeError) as exc:
        print(f"fraczeta: {exc}", file=sys.stderr)
        return 2
    except FracZetaError as exc:
        print(f"fraczeta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        _write(Path(args.out), files, config)
    else:
        for text in files.values():
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
