"""Command-line entry point: ``pdslab {construct,verify,table,profile,export-graph}``.

Exit codes: 0 pass, 1 verification failure, 2 degenerate input, 3 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import forms, graph
from .lift import GroupShape, ParameterError, PdsCandidate, build_d, pds_params
from .verify import (
    DegenerateCandidate,
    PreconditionError,
    VerificationError,
    brute_force_verify,
    spectral_verify,
    verify_both,
)

EXIT_OK, EXIT_FAIL, EXIT_DEGENERATE, EXIT_USAGE = 0, 1, 2, 3
MAX_ELL = 4
LARGE_ELL = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    ell: int | None = None
    j: int | None = None
    k: int | None = None
    method: str | None = None
    out: str | None = None
    allow_large: bool = False
    threads: int = 1

    def check_ell(self, ell: int, limit: int = MAX_ELL) -> None:
        if not 1 <= ell <= limit:
            raise UsageError(f"ell must be in 1..{limit}, got {ell}")
        if ell >= LARGE_ELL and not self.allow_large:
            raise UsageError(f"ell={ell} means v = {4 ** (2 * ell)}; pass --allow-large to run it")


def default_threads() -> int:
    env = os.environ.get("PDSLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- construct ----------------------------------------------------------------


def cmd_construct(cfg: RunConfig) -> int:
    cfg.check_ell(cfg.ell)
    try:
        cand = build_d(cfg.ell, cfg.j, cfg.k)
    except ParameterError as exc:
        raise UsageError(str(exc)) from exc
    _emit(cand.to_json(), cfg.out)
    eps = "negative Latin" if cand.epsilon < 0 else "Latin"
    print(f"D_{{{cfg.ell},{cfg.j},{cfg.k}}} in {cand.shape.describe()}: {len(cand)} elements, "
          f"expected {tuple(cand.expected_params)} ({eps}, epsilon={cand.epsilon:+d})", file=sys.stderr)
    if cand.degenerate:
        print("warning: degenerate candidate (empty set)", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


# --- verify -------------------------------------------------------------------


def load_candidate(path: str) -> PdsCandidate:
    try:
        return PdsCandidate.from_json(Path(path).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read candidate {path}: {exc}") from exc


def cmd_verify(cfg: RunConfig, path: str) -> int:
    cand = load_candidate(path)
    cfg.check_ell(cand.ell)
    method = cfg.method or ("spectral" if cand.ell >= LARGE_ELL else "both")
    if cand.ell >= LARGE_ELL and method != "spectral":
        raise UsageError("brute force is refused at ell=4; use --method spectral")
    try:
        if method == "brute":
            cert = brute_force_verify(cand, cfg.threads)
        elif method == "spectral":
            cert = spectral_verify(cand)
        else:
            cert = verify_both(cand, cfg.threads)
    except DegenerateCandidate as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (VerificationError, PreconditionError, AssertionError) as exc:
        witness = getattr(exc, "witness", None)
        print(f"FAIL: {exc}" + (f" (witness {witness})" if witness is not None else ""), file=sys.stderr)
        return EXIT_FAIL
    _emit(cert.to_json(), cfg.out)
    print(f"PASS {tuple(cert.params)} via {'+'.join(sorted(cert.methods_passed))}", file=sys.stderr)
    return EXIT_OK


# --- table --------------------------------------------------------------------


TABLE_FIELDS = ["ell", "k", "group", "type", "status", "j_values", "v", "size", "lambda", "mu"]


def coverage_rows(max_ell: int) -> list[dict]:
    """For each (l, k) and each parameter type, the admissible j (parity, k <= j <= l)."""
    rows = []
    for ell in range(1, max_ell + 1):
        for k in range(ell + 1):
            shape = GroupShape(ell, k)
            for kind, parity in (("negative_latin", 1), ("latin", 0)):
                js = [j for j in range(max(k, 0), ell + 1) if j % 2 == parity]
                params, _ = pds_params(ell, parity)
                if not js:
                    status = "unavailable"
                elif params[1] == 0:
                    status = "degenerate"
                else:
                    status = "available"
                rows.append({
                    "ell": ell, "k": k, "group": shape.describe(), "type": kind, "status": status,
                    "j_values": ";".join(map(str, js)),
                    "v": params[0], "size": params[1], "lambda": params[2], "mu": params[3],
                })
    return rows


def render_table(rows: list[dict], fmt: str = "csv") -> str:
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.DictWriter(buf, fieldnames=TABLE_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    widths = {f: max(len(f), *(len(str(r[f])) for r in rows)) for f in TABLE_FIELDS}
    buf.write("  ".join(f.ljust(widths[f]) for f in TABLE_FIELDS).rstrip() + "\n")
    for r in rows:
        buf.write("  ".join(str(r[f]).ljust(widths[f]) for f in TABLE_FIELDS).rstrip() + "\n")
    return buf.getvalue()


def cmd_table(cfg: RunConfig, max_ell: int, fmt: str) -> int:
    if not 1 <= max_ell <= MAX_ELL:
        raise UsageError(f"--max-ell must be in 1..{MAX_ELL}")
    _emit(render_table(coverage_rows(max_ell), fmt), cfg.out)
    return EXIT_OK


# --- profile ------------------------------------------------------------------


def cmd_profile(cfg: RunConfig, restrict_x1: bool) -> int:
    cfg.check_ell(cfg.ell, limit=3)
    try:
        spec = forms.FormSpec(cfg.ell, cfg.j)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if restrict_x1:
        if cfg.ell < 2:
            raise UsageError("--restrict-x1 needs ell >= 2")
        points = forms.parabolic_section(spec)
        predicted = forms.predicted_parabolic_profile(cfg.ell)
        label = f"Q_{{{cfg.ell},{cfg.j}}}(0, x2, ...) in PG({spec.dim - 2},4), parabolic"
    else:
        points = forms.elliptic_or_hyperbolic_quadric(spec)
        predicted = forms.predicted_profile(spec)
        label = f"Q_{{{cfg.ell},{cfg.j}}} in PG({spec.dim - 1},4), {'elliptic' if spec.is_elliptic else 'hyperbolic'}"
    got = forms.hyperplane_profile(points, predicted.m, workers=cfg.threads)
    ok = got.histogram == predicted.histogram
    report = {
        "form": label,
        "points": int(len(points)),
        "hyperplanes": got.hyperplanes,
        "histogram": {str(s): n for s, n in got.histogram.items()},
        "predicted": {str(s): n for s, n in predicted.histogram.items()},
        "match": ok,
    }
    if not restrict_x1 and len(got.histogram) == 2:
        h1, h2 = got.histogram
        report["pds_params"] = list(forms.projective_to_pds_params(len(points), predicted.m, h1, h2))
    _emit(json.dumps(report, indent=2) + "\n", cfg.out)
    print("PASS" if ok else "FAIL: profile differs from the closed form", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# --- export-graph ---------------------------------------------------------------


def cmd_export_graph(cfg: RunConfig, path: str, fmt: str, force: bool) -> int:
    if fmt not in graph.FORMATS:
        raise UsageError(f"unsupported format {fmt!r}; choose from {', '.join(graph.FORMATS)}")
    cand = load_candidate(path)
    cfg.check_ell(cand.ell)
    if cand.degenerate:
        print("degenerate: empty connection set", file=sys.stderr)
        return EXIT_DEGENERATE
    if not force:
        try:
            spectral_verify(cand)
        except (VerificationError, PreconditionError) as exc:
            print(f"FAIL: {exc}; use --force to export anyway", file=sys.stderr)
            return EXIT_FAIL
    try:
        g = graph.cayley(cand)
    except ValueError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_FAIL
    data = graph.export(g, fmt)
    if cfg.out:
        Path(cfg.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pdslab", description="Lifted quadric partial difference sets over Z4/Z2 groups.")
    p.add_argument("--threads", type=int, default=None, help="worker count (env PDSLAB_THREADS)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build D_{l,j,k} and write its JSON")
    c.add_argument("--ell", type=int, required=True)
    c.add_argument("--j", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--out")
    c.add_argument("--allow-large", action="store_true")

    v = sub.add_parser("verify", help="verify a candidate JSON")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--method", choices=["brute", "spectral", "both"])
    v.add_argument("--out")
    v.add_argument("--allow-large", action="store_true")

    t = sub.add_parser("table", help="coverage table of (negative) Latin square PDSs")
    t.add_argument("--max-ell", type=int, default=4)
    t.add_argument("--format", choices=["csv", "text"], default="csv")
    t.add_argument("--out")

    pr = sub.add_parser("profile", help="hyperplane intersection profile of a quadric")
    pr.add_argument("--ell", type=int, required=True)
    pr.add_argument("--j", type=int, required=True)
    pr.add_argument("--restrict-x1", action="store_true")
    pr.add_argument("--out")

    e = sub.add_parser("export-graph", help="export the Cayley graph of a candidate")
    e.add_argument("--in", dest="inp", required=True)
    e.add_argument("--format", required=True)
    e.add_argument("--out")
    e.add_argument("--force", action="store_true")
    e.add_argument("--allow-large", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        threads = args.threads if args.threads is not None else default_threads()
    except ValueError:
        print("PDSLAB_THREADS must be an integer", file=sys.stderr)
        return EXIT_USAGE
    cfg = RunConfig(
        command=args.command,
        ell=getattr(args, "ell", None),
        j=getattr(args, "j", None),
        k=getattr(args, "k", None),
        method=getattr(args, "method", None),
        out=getattr(args, "out", None),
        allow_large=getattr(args, "allow_large", False),
        threads=max(1, threads),
    )
    try:
        if args.command == "construct":
            return cmd_construct(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.inp)
        if args.command == "table":
            return cmd_table(cfg, args.max_ell, args.format)
        if args.command == "profile":
            return cmd_profile(cfg, args.restrict_x1)
        return cmd_export_graph(cfg, args.inp, args.format, args.force)
    except UsageError as exc:
        print(f"pdslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
