"""Command line front end.

Subcommands: ``analyze`` (construct a splitting and report its convergence
and diagnostics), ``solve`` (run the iteration to the reduced solution),
``frame`` (closest normalized tight frame), ``compare`` (two splittings
side by side) and ``bench`` (seeded ensemble sweeps).  Problems are
described by JSON manifests; matrices may be inline JSON objects or Matrix
Market / JSON files.  Reports are deterministic: the same manifest and
seed always produce byte-identical output.  Exit codes: 0 success, 2
parse error, 3 precondition violation, 4 divergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .core import DEFAULT_TOL, SubspaceBasis, Tolerances, numerical_rank
from .errors import (
    IterationFailure,
    ParseError,
    PropersplitError,
    SingularIteration,
)
from .mmio import load_matrix_source, matrix_to_json
from .report import csv_rows, dumps
from .solver import FrameSpec, frame_bounds, frame_symmetric_approx, iterate_reduced
from .splittings import (
    ProperSplitting,
    compare,
    convergence,
    group_splitting,
    iteration_matrix,
    make_splitting,
    mp_splitting,
    plh_splitting,
    polar_splitting,
    positivity_diagnostics,
    projection_splitting,
    q_splitting,
    splitting_identities_check,
)

NAMED_KINDS = {
    "polar": polar_splitting,
    "Q": q_splitting,
    "group": group_splitting,
    "MP": mp_splitting,
    "projection": projection_splitting,
    "PLh": plh_splitting,
}

BENCH_ENSEMBLES = ("hermitian", "psd", "star-pairs", "pp-products")


@dataclass
class Manifest:
    """A parsed problem description."""

    t: np.ndarray
    w: np.ndarray | None
    kind: str | None
    u: np.ndarray | None
    m_columns: np.ndarray | None
    max_iter: int
    seed: int
    tol: Tolerances


def _parse_tolerances(obj, base: Tolerances) -> Tolerances:
    if obj is None:
        return base
    if not isinstance(obj, dict):
        raise ParseError("tolerances must be an object")
    allowed = {"rank_rtol", "eq_atol", "rho_margin", "cond_guard"}
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"unknown tolerance keys: {sorted(unknown)}")
    try:
        return replace(base, **{k: float(v) for k, v in obj.items()})
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad tolerance value: {exc}") from exc


def load_manifest(path, args) -> Manifest:
    p = Path(path)
    try:
        payload = json.loads(p.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError("manifest must be a JSON object")
    base = p.parent

    if "T" not in payload:
        raise ParseError("manifest is missing the matrix 'T'")
    t = load_matrix_source(payload["T"], base)
    w = load_matrix_source(payload["W"], base) if "W" in payload else None

    kind, u = None, None
    spl = payload.get("splitting")
    if spl is not None:
        if not isinstance(spl, dict):
            raise ParseError("'splitting' must be an object")
        kind = spl.get("kind")
        if "U" in spl:
            u = load_matrix_source(spl["U"], base)
        if kind is None:
            if u is None:
                raise ParseError("'splitting' needs a kind or a custom U")
            kind = "custom"
        elif kind in NAMED_KINDS:
            if u is not None:
                raise ParseError(f"kind {kind!r} does not accept a custom U")
        elif kind == "custom":
            if u is None:
                raise ParseError("custom splitting needs a U matrix")
        else:
            raise ParseError(f"unknown splitting kind {kind!r}")

    m_cols = load_matrix_source(payload["M"], base) if "M" in payload else None

    tol = _parse_tolerances(payload.get("tolerances"), DEFAULT_TOL)
    overrides = {}
    if args.tol is not None:
        overrides["eq_atol"] = args.tol
    if args.rank_tol is not None:
        overrides["rank_rtol"] = args.rank_tol
    if args.rho_margin is not None:
        overrides["rho_margin"] = args.rho_margin
    if overrides:
        tol = replace(tol, **overrides)

    max_iter = payload.get("max_iter", 10000)
    if args.max_iter is not None:
        max_iter = args.max_iter
    seed = payload.get("seed", 0)
    if args.seed is not None:
        seed = args.seed
    if not isinstance(max_iter, int) or max_iter <= 0:
        raise ParseError("max_iter must be a positive integer")
    return Manifest(t, w, kind, u, m_cols, max_iter, int(seed), tol)


def build_splitting(man: Manifest) -> ProperSplitting:
    if man.kind is None:
        raise ParseError("manifest has no 'splitting' section")
    if man.kind == "custom":
        return make_splitting(man.t, man.u, man.tol)
    return NAMED_KINDS[man.kind](man.t, man.tol)


def _residual_summary(history):
    return {
        "count": len(history),
        "first": float(history[0]),
        "last": float(history[-1]),
    }


def _convergence_section(rep):
    return {
        "rho": rep.rho,
        "converges": rep.converges,
        "boundary": rep.boundary,
        "fast_path": rep.fast_path,
        "criterion_value": rep.criterion_value,
        "fast_converges": rep.fast_converges,
    }


def _emit(text: str, args) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _figures_dir(args) -> Path | None:
    if not getattr(args, "figures", None):
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _single_input(args) -> str:
    if not args.input or len(args.input) != 1:
        raise ParseError("exactly one -i/--input manifest is required")
    return args.input[0]


def run_analyze(args) -> int:
    man = load_manifest(_single_input(args), args)
    spl = build_splitting(man)
    conv = convergence(spl, man.tol)
    pos = positivity_diagnostics(spl, man.tol)
    try:
        ids = splitting_identities_check(spl, man.tol)
        identities = {
            "compression": ids.compression,
            "nullspaces": ids.nullspaces,
            "inverse_formula": ids.inverse_formula,
            "all_hold": ids.all_hold,
        }
    except SingularIteration:
        identities = None
    pos_fields = {
        "t_pinv_v_psd": pos.t_pinv_v_psd,
        "u_pinv_v_psd": pos.u_pinv_v_psd,
        "u_pinv_v_dominated": pos.u_pinv_v_dominated,
        "u_pinv_t_dominated": pos.u_pinv_t_dominated,
        "positive_solution": pos.positive_solution,
        "quadratic_bound": pos.quadratic_bound,
        "all_agree": pos.all_agree,
    }
    report = {
        "command": "analyze",
        "kind": spl.kind,
        "shape": [int(spl.t.shape[0]), int(spl.t.shape[1])],
        "rank": numerical_rank(spl.t, man.tol),
        "convergence": _convergence_section(conv),
        "positivity": pos_fields,
        "identities": identities,
    }
    _emit(_format_report(report, args), args)
    figdir = _figures_dir(args)
    if figdir is not None:
        from . import figures

        eig = np.linalg.eigvals(iteration_matrix(spl, man.tol))
        figures.spectrum_figure(eig, figdir / "analyze_spectrum.png")
    return 0


def run_solve(args) -> int:
    man = load_manifest(_single_input(args), args)
    if man.w is None:
        raise ParseError("solve needs a right-hand side 'W' in the manifest")
    spl = build_splitting(man)
    m_sub = None
    if man.m_columns is not None:
        m_sub = SubspaceBasis.from_columns(man.m_columns, man.tol)
    x, rep = iterate_reduced(
        man.t, man.w, spl, m=m_sub, tol=man.tol, max_iter=man.max_iter
    )
    report = {
        "command": "solve",
        "kind": spl.kind,
        "shape": [int(man.t.shape[0]), int(man.t.shape[1])],
        "rho": rep.rho,
        "converged": rep.converged,
        "diverged": rep.diverged,
        "iterations": rep.iterations,
        "residuals": _residual_summary(rep.residual_history),
        "final_error": rep.final_error,
        "x": matrix_to_json(x),
    }
    _emit(_format_report(report, args), args)
    print(f"wall_time_s={rep.wall_time:.6f}", file=sys.stderr)
    figdir = _figures_dir(args)
    if figdir is not None:
        from . import figures

        figures.residual_figure(
            rep.residual_history, rep.rho, figdir / "solve_residuals.png"
        )
    return 0


def run_frame(args) -> int:
    man = load_manifest(_single_input(args), args)
    frame = FrameSpec(man.t)
    lower, upper = frame_bounds(frame, man.tol)
    x, rep = frame_symmetric_approx(frame, tol=man.tol, max_iter=man.max_iter)
    from .core import operator_norm, range_projector

    tight_defect = operator_norm(
        x.conj().T @ x - range_projector(frame.vectors, man.tol)
    )
    report = {
        "command": "frame",
        "ambient_dim": frame.ambient_dim,
        "count": frame.count,
        "bounds": {"lower": lower, "upper": upper},
        "rho": rep.rho,
        "converged": rep.converged,
        "iterations": rep.iterations,
        "residuals": _residual_summary(rep.residual_history),
        "tightness_defect": float(tight_defect),
        "vectors": matrix_to_json(x.conj().T),
    }
    _emit(_format_report(report, args), args)
    print(f"wall_time_s={rep.wall_time:.6f}", file=sys.stderr)
    figdir = _figures_dir(args)
    if figdir is not None:
        from . import figures

        figures.residual_figure(
            rep.residual_history, rep.rho, figdir / "frame_residuals.png"
        )
    return 0


def run_compare(args) -> int:
    if not args.input or len(args.input) != 2:
        raise ParseError("compare needs exactly two -i/--input manifests")
    man_a = load_manifest(args.input[0], args)
    man_b = load_manifest(args.input[1], args)
    spl_a = build_splitting(man_a)
    spl_b = build_splitting(man_b)
    cmp = compare(spl_a, spl_b, man_a.tol)
    report = {
        "command": "compare",
        "a": {"kind": spl_a.kind, "rho": cmp.rho_a,
              "convergence": _convergence_section(convergence(spl_a, man_a.tol))},
        "b": {"kind": spl_b.kind, "rho": cmp.rho_b,
              "convergence": _convergence_section(convergence(spl_b, man_b.tol))},
        "faster": cmp.faster,
    }
    _emit(_format_report(report, args), args)
    figdir = _figures_dir(args)
    if figdir is not None:
        from . import figures

        figures.rho_bar_figure(cmp.rho_a, cmp.rho_b, figdir / "compare_rho.png")
    return 0


def _bench_instance(name: str, rng, dim: int, tol: Tolerances):
    """One bench draw: (rho_left, rho_right, relation)."""
    from . import ensembles
    from .core import spectral_radius

    if name == "hermitian":
        # projection splitting converges; polar is never slower
        t = ensembles.random_hermitian(rng, dim, rank=max(1, dim - 1), lo=0.1, hi=1.9)
        rho_polar = convergence(polar_splitting(t, tol), tol).rho
        rho_proj = convergence(projection_splitting(t, tol), tol).rho
        return rho_polar, rho_proj, "<="
    if name == "psd":
        # contraction: the Moore-Penrose splitting is never faster than polar
        t = ensembles.random_psd(rng, dim, rank=max(1, dim - 1), lo=0.05, hi=1.0)
        rho_polar = convergence(polar_splitting(t, tol), tol).rho
        rho_mp = convergence(mp_splitting(t, tol), tol).rho
        return rho_polar, rho_mp, "<="
    if name == "star-pairs":
        s, t = ensembles.star_pair(rng, dim, dim, max(1, dim - 1), keep=max(1, dim // 2))
        rho_s = convergence(polar_splitting(s, tol), tol).rho
        rho_t = convergence(polar_splitting(t, tol), tol).rho
        return rho_s, rho_t, "<="
    if name == "pp-products":
        while True:
            t = ensembles.pp_product(rng, dim, max(1, dim // 2), max(1, dim // 2))
            try:
                spl = q_splitting(t, tol)
            except PropersplitError:
                continue
            return convergence(spl, tol).rho, 1.0, "<"
    raise ParseError(f"unknown ensemble {name!r}")


def run_bench(args) -> int:
    if args.ensemble not in BENCH_ENSEMBLES:
        raise ParseError(
            f"unknown ensemble {args.ensemble!r}; pick one of {BENCH_ENSEMBLES}"
        )
    tol = DEFAULT_TOL
    if args.tol is not None:
        tol = replace(tol, eq_atol=args.tol)
    if args.rank_tol is not None:
        tol = replace(tol, rank_rtol=args.rank_tol)
    if args.rho_margin is not None:
        tol = replace(tol, rho_margin=args.rho_margin)
    seed = 0 if args.seed is None else args.seed
    children = np.random.SeedSequence(seed).spawn(args.count)
    rows = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        left, right, rel = _bench_instance(args.ensemble, rng, args.dim, tol)
        ok = left <= right + tol.rho_margin if rel == "<=" else left < right - tol.rho_margin
        rows.append((i, float(left), float(right), rel, bool(ok)))
    violations = sum(1 for r in rows if not r[4])
    if args.format == "json":
        payload = {
            "command": "bench",
            "ensemble": args.ensemble,
            "count": args.count,
            "dim": args.dim,
            "seed": seed,
            "violations": violations,
            "rows": [
                {"instance": i, "rho_left": a, "rho_right": b, "relation": rel, "ok": ok}
                for (i, a, b, rel, ok) in rows
            ],
        }
        _emit(dumps(payload), args)
    else:
        _emit(csv_rows(("instance", "rho_left", "rho_right", "relation", "ok"), rows), args)
    print(f"violations={violations}", file=sys.stderr)
    figdir = _figures_dir(args)
    if figdir is not None:
        from . import figures

        figures.rho_scatter_figure(
            [r[1] for r in rows], [r[2] for r in rows], [r[4] for r in rows],
            figdir / "bench_rho.png", title=f"{args.ensemble} sweep",
        )
    return 0


def _format_report(report: dict, args) -> str:
    if getattr(args, "format", "json") == "csv":
        flat = _flatten(report)
        return csv_rows(("key", "value"), flat)
    return dumps(report)


def _flatten(obj, prefix=""):
    rows = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            rows.extend(_flatten(obj[k], f"{prefix}.{k}" if prefix else k))
        return rows
    if isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            rows.extend(_flatten(v, f"{prefix}.{i}" if prefix else str(i)))
        return rows
    return [(prefix, obj if obj is not None else "")]


def _add_common(parser: argparse.ArgumentParser, with_figures=True):
    parser.add_argument("-i", "--input", action="append", metavar="MANIFEST",
                        help="problem manifest (JSON); repeatable where noted")
    parser.add_argument("-o", "--output", metavar="FILE",
                        help="write the report here instead of stdout")
    parser.add_argument("--tol", type=float, default=None,
                        help="equality/stopping tolerance (eq_atol)")
    parser.add_argument("--rank-tol", type=float, default=None,
                        help="relative singular value cutoff for rank decisions")
    parser.add_argument("--rho-margin", type=float, default=None,
                        help="margin around one for convergence verdicts")
    parser.add_argument("--max-iter", type=int, default=None,
                        help="iteration budget")
    parser.add_argument("--seed", type=int, default=None, help="random seed")
    parser.add_argument("--format", choices=("json", "csv"), default=None,
                        help="report format")
    if with_figures:
        parser.add_argument("--figures", metavar="DIR", default=None,
                            help="also render figures into this directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="propersplit",
        description="Proper splittings of complex matrices: analysis, iteration, frames.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="construct a splitting and report diagnostics")
    _add_common(p)
    p.set_defaults(handler=run_analyze)

    p = sub.add_parser("solve", help="iterate to the reduced solution of T X = W")
    _add_common(p)
    p.set_defaults(handler=run_solve)

    p = sub.add_parser("frame", help="closest normalized tight frame")
    _add_common(p)
    p.set_defaults(handler=run_frame)

    p = sub.add_parser("compare", help="compare two splittings by spectral radius")
    _add_common(p)
    p.set_defaults(handler=run_compare)

    p = sub.add_parser("bench", help="seeded ensemble sweeps with flagged inequalities")
    _add_common(p)
    p.add_argument("--ensemble", required=True, choices=BENCH_ENSEMBLES)
    p.add_argument("-n", "--count", type=int, default=100,
                   help="number of instances")
    p.add_argument("--dim", type=int, default=6, help="instance dimension")
    p.set_defaults(handler=run_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "bench" else "json"
    try:
        return args.handler(args)
    except IterationFailure as exc:
        _fail(exc.code, str(exc), 4, getattr(exc, "report", None))
        return 4
    except ParseError as exc:
        _fail(exc.code, str(exc), 2)
        return 2
    except PropersplitError as exc:
        _fail(exc.code, str(exc), 3)
        return 3


def _fail(code: str, message: str, exit_code: int, report=None) -> None:
    payload = {"error": code, "message": message}
    if report is not None:
        payload["rho"] = report.rho
        payload["iterations"] = report.iterations
    sys.stderr.write(dumps(payload))


if __name__ == "__main__":
    sys.exit(main())
