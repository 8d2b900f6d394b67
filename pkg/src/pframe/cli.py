"""Command line front end.

Exit codes: 0 ok or verified, 1 falsified or mismatch, 2 inconclusive,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _verdict_code(verdict: str) -> int:
    return {"verified": EXIT_OK, "falsified": EXIT_FAIL}.get(verdict, EXIT_INCONCLUSIVE)


def _clean(obj):
    """JSON-safe copy with non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _clean(obj.item())
    return obj


def _flatten(obj, prefix: str = "") -> dict:
    out = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(_flatten(v, f"{prefix}{k}." if prefix or k else ""))
    elif isinstance(obj, list) and obj and all(isinstance(v, dict) for v in obj):
        for i, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}{i}."))
    else:
        out[prefix.rstrip(".")] = json.dumps(obj) if isinstance(obj, (list, dict)) else obj
    return out


def render(report: dict, fmt: str) -> str:
    report = _clean(report)
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = report.get("rows")
    if not rows:
        rows = [_flatten(report)]
    else:
        rows = [_flatten(r) for r in rows]
    keys = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        return buf.getvalue()
    widths = {k: max(len(k), *(len(str(r.get(k, ""))) for r in rows)) for k in keys}
    lines = ["  ".join(k.ljust(widths[k]) for k in keys)]
    for r in rows:
        lines.append("  ".join(str(r.get(k, "")).ljust(widths[k]) for k in keys))
    return "\n".join(lines) + "\n"


# -- helpers ------------------------------------------------------------------------------------

def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _config(args):
    from .configurations import catalog_get, config_from_json

    if getattr(args, "file", None):
        return config_from_json(_load_json(args.file))
    if getattr(args, "config", None):
        try:
            return catalog_get(args.config)
        except KeyError as exc:
            raise UsageError(str(exc)) from exc
    raise UsageError("give --config NAME or --file CONFIG.json")


def _kernel(args):
    from .kernels import Causal, PFrame

    kind = getattr(args, "kernel", "pframe")
    if kind == "causal":
        return Causal(args.tau_sq, normalized=args.normalized)
    if args.p is None:
        raise UsageError("--p is required")
    try:
        return PFrame(args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _space(text: Optional[str]):
    from .spaces import SpaceDescriptor

    if not text:
        raise UsageError("--space is required (e.g. rp:3, cp:5, hp:2, s:3)")
    try:
        return SpaceDescriptor.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(path: Optional[str], obj: dict) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(_clean(obj), fh, indent=2, sort_keys=True)
            fh.write("\n")


# -- subcommands ----------------------------------------------------------------------------------

def cmd_energy(args) -> tuple[dict, int]:
    from .configurations import optimal_orbit_weights
    from .energy import energy

    cfg = _config(args)
    kernel = _kernel(args)
    if args.weights == "optimal":
        cfg = optimal_orbit_weights(cfg, kernel)
    rep = energy(cfg, kernel, target=args.expect)
    out = rep.to_json()
    out["config"] = cfg.name
    code = EXIT_OK
    if args.expect is not None and abs(rep.value - args.expect) > args.tol:
        code = EXIT_FAIL
    return out, code


def cmd_verify_design(args) -> tuple[dict, int]:
    from .configurations import design_strength, tightness_check

    cfg = _config(args)
    rep = design_strength(cfg, max_t=args.max_t)
    out = rep.to_json()
    out["config"] = cfg.name
    out["tightness"] = str(tightness_check(cfg))
    code = EXIT_OK
    if args.min_strength is not None and rep.strength < args.min_strength:
        code = EXIT_FAIL
    return out, code


def cmd_certify(args) -> tuple[dict, int]:
    from .certify import Certificate, build_tight_certificate, moment_certificate, verify_certificate
    from .hermite import PreconditionError

    if args.cert:
        cert = verify_certificate(Certificate.from_json(_load_json(args.cert)))
    else:
        cfg = _config(args)
        try:
            cert = moment_certificate(cfg) if args.moment else build_tight_certificate(cfg, _kernel(args))
        except PreconditionError as exc:
            raise UsageError(f"precondition failed: {exc}") from exc
    out = cert.to_json()
    _emit(args.emit, out)
    return out, _verdict_code(cert.verdict)


def cmd_certify_600cell(args) -> tuple[dict, int]:
    from .certify import build_600cell_certificate, certify_600cell_range
    from .hermite import PreconditionError

    try:
        if args.range:
            lo, hi = args.range
            res = certify_600cell_range(lo, hi, samples=args.samples)
            return res.to_json(), _verdict_code(res.verdict)
        if args.p is None:
            raise UsageError("give --p P or --range LO HI")
        cert = build_600cell_certificate(args.p)
    except PreconditionError as exc:
        raise UsageError(f"precondition failed: {exc}") from exc
    out = cert.to_json()
    _emit(args.emit, out)
    return out, _verdict_code(cert.verdict)


def cmd_bound(args) -> tuple[dict, int]:
    from .lpbound import lp_lower_bound

    space = _space(args.space)
    cert = lp_lower_bound(space, _kernel(args), args.degree, args.grid)
    out = cert.to_json()
    _emit(args.emit, out)
    return out, _verdict_code(cert.verdict)


def cmd_minimize(args) -> tuple[dict, int]:
    from .configurations import config_to_json
    from .minimize import MinimizeOptions, canonicalize_support, compare_to_catalog, multistart

    space = _space(args.space)
    kernel = _kernel(args)
    opts = MinimizeOptions(max_iter=args.max_iter)
    runs = multistart(space, kernel, args.N, args.starts, args.seed, opts, args.threads)
    best = min(runs, key=lambda r: r.energy)
    can = canonicalize_support(best, args.merge_tol)
    cmp = compare_to_catalog(can, kernel)
    out = {
        "configuration": config_to_json(can),
        "energy": best.energy,
        "support": can.n_points,
        "comparison": cmp.to_json(),
        "runs": [{"seed": r.seed, "energy": r.energy, "status": r.status, "iterations": r.iterations} for r in runs],
    }
    _emit(args.emit, config_to_json(can))
    return out, EXIT_OK


def cmd_causal(args) -> tuple[dict, int]:
    from .certify import causal_certificate

    cert = causal_certificate(args.which)
    out = cert.to_json()
    _emit(args.emit, out)
    return out, _verdict_code(cert.verdict)


def cmd_reproduce(args) -> tuple[dict, int]:
    from .reproduce import GROUPS, reproduce

    which = args.which or list(GROUPS)
    cells = reproduce(which, max_d=args.max_d, threads=args.threads)
    rows = [c.to_json() for c in cells]
    failed = [r for r in rows if r["status"] == "fail"]
    out = {"groups": which, "rows": rows, "failed": len(failed),
           "passed": sum(r["status"] == "pass" for r in rows), "skipped": sum(r["status"] == "skipped" for r in rows)}
    return out, EXIT_FAIL if failed else EXIT_OK


def cmd_catalog(args) -> tuple[dict, int]:
    from .configurations import CATALOG, catalog_get, config_to_json

    if args.name:
        try:
            return config_to_json(catalog_get(args.name)), EXIT_OK
        except KeyError as exc:
            raise UsageError(str(exc)) from exc
    rows = [{"name": e.name, "lines": e.n_lines, "strength": e.strength, "tight": e.tight,
             "constructible": e.constructible, "description": e.description} for e in CATALOG.values()]
    return {"rows": rows}, EXIT_OK


# -- parser ------------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space")
    common.add_argument("--p", type=float)
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="pframe", description="Frame energies, designs and optimality certificates.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=fn)
        return sp

    sp = add("energy", cmd_energy, "energy of a configuration")
    sp.add_argument("--config")
    sp.add_argument("--file")
    sp.add_argument("--kernel", choices=("pframe", "causal"), default="pframe")
    sp.add_argument("--tau-sq", default="2")
    sp.add_argument("--normalized", action="store_true")
    sp.add_argument("--weights", choices=("design", "optimal"), default="design")
    sp.add_argument("--expect", type=float)
    sp.add_argument("--tol", type=float, default=1e-12)

    sp = add("verify-design", cmd_verify_design, "design strength report")
    sp.add_argument("--config")
    sp.add_argument("--file")
    sp.add_argument("--max-t", type=int, default=10)
    sp.add_argument("--min-strength", type=int)

    sp = add("certify", cmd_certify, "build or re-verify a certificate")
    sp.add_argument("--config")
    sp.add_argument("--file")
    sp.add_argument("--cert", help="verify an existing certificate JSON")
    sp.add_argument("--moment", action="store_true", help="moment-constrained maximization certificate")
    sp.add_argument("--emit")

    sp = add("certify-600cell", cmd_certify_600cell, "600-cell certificate at p or over a p-range")
    sp.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    sp.add_argument("--samples", type=int, default=3)
    sp.add_argument("--emit")

    sp = add("bound", cmd_bound, "verified linear programming lower bound")
    sp.add_argument("--degree", type=int)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--emit")

    sp = add("minimize", cmd_minimize, "multistart energy minimization")
    sp.add_argument("-N", type=int, required=True)
    sp.add_argument("--starts", type=int, default=8)
    sp.add_argument("--max-iter", type=int, default=20000)
    sp.add_argument("--merge-tol", type=float, default=1e-4)
    sp.add_argument("--emit")

    sp = add("causal", cmd_causal, "causal variational certificates on S^2")
    sp.add_argument("--which", choices=("cross_polytope", "icosahedron"), required=True)
    sp.add_argument("--emit")

    from .reproduce import GROUPS

    sp = add("reproduce-tables", cmd_reproduce, "recompute stored goldens")
    sp.add_argument("--which", nargs="*", choices=GROUPS)
    sp.add_argument("--max-d", type=int, default=8)

    sp = add("catalog", cmd_catalog, "list catalog entries or dump one")
    sp.add_argument("--name")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        report, code = args.func(args)
    except UsageError as exc:
        print(f"pframe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
