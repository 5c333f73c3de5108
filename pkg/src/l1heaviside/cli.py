"""Command-line interface.

Three subcommands over one JSON job format: ``canonical`` prints the
canonical point set, ``approximate`` runs the construction pipeline (with
optional CSV samples and PNG figures), ``verify`` runs the independent
optimality battery.  Exit codes: 0 success, 2 canonical solver failure,
3 pipeline or input failure, 4 genuine optimality failure (certificate
violated and the brute-force oracle found something strictly better).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from .approx import best_l1_approximation
from .canonical import solve_canonical_points, verify_uniqueness
from .errors import (
    JobSpecError,
    L1HeavisideError,
    NoConvergence,
    NonSquareSystem,
    OrderingViolation,
    UniquenessCheckUnavailable,
)
from .functions import normalize
from .jobs import JobSpec, load_job
from .report import render_figures, sample_table, write_csv, write_json
from .spaces import space_from_description
from .verify import optimality_report

log = logging.getLogger("l1heaviside.cli")

_SOLVER_ERRORS = (NoConvergence, NonSquareSystem, OrderingViolation)
_CHAR_FAIL_LEVEL = 1e-6
_ORACLE_GAP_LEVEL = 5e-3


class _OptimalityFailure(Exception):
    """Internal signal: verification payload complete but optimality failed."""

    def __init__(self, payload: dict):
        super().__init__("optimality failure")
        self.payload = payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="l1h",
        description="Best L1 approximation of single-jump functions by "
        "polynomials and Hermite splines via symmetric canonical points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--spec", required=True, help="path to the JSON job spec")
        p.add_argument("--out", help="write the JSON result here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized stages")

    p_can = sub.add_parser("canonical", help="compute the canonical point set")
    common(p_can)
    p_can.add_argument("--trials", type=int, help="multistart count for the uniqueness check")

    p_app = sub.add_parser("approximate", help="construct the best L1 approximant")
    common(p_app)
    p_app.add_argument("--csv", help="write x,f,gstar,residual samples to this path")
    p_app.add_argument("--figures", help="render PNG figures into this directory")

    p_ver = sub.add_parser("verify", help="independently verify optimality")
    common(p_ver)
    p_ver.add_argument("--oracle-grid", type=int, help="grid size for the brute-force oracle")
    p_ver.add_argument("--perturb", type=float, help="perturb coefficients by this amount first")
    p_ver.add_argument("--trials", type=int, help="multistart count for the uniqueness check")
    return parser


def _uniqueness_section(space, points, trials: int, measure, seed: int) -> dict:
    try:
        report = verify_uniqueness(space, points, trials=trials, measure=measure, seed=seed)
    except UniquenessCheckUnavailable as exc:
        return {"available": False, "reason": str(exc)}
    out = report.to_json_dict()
    out["available"] = True
    return out


def run_canonical(job: JobSpec, args) -> dict:
    problem = normalize(job.function)
    space = space_from_description(job.space_description)
    result = solve_canonical_points(space, problem.measure, seed=args.seed)
    log.info("canonical solve: %d iterations, residual %.3e", result.iterations, result.residual_inf_norm)
    payload = result.to_json_dict()
    if args.trials:
        payload["uniqueness"] = _uniqueness_section(
            space, result.points, args.trials, problem.measure, args.seed
        )
    return payload


def _run_pipeline(job: JobSpec):
    return best_l1_approximation(job.function, job.space_description)


def run_approximate(job: JobSpec, args) -> dict:
    result = _run_pipeline(job)
    payload = {"job": job.raw}
    payload.update(result.to_json_dict())
    for flag in result.flags:
        log.warning("flag: %s", flag)

    if args.csv or job.wants("sample"):
        csv_path = args.csv or job.output.get("csv")
        if not csv_path:
            raise JobSpecError("sample action requested but no CSV path given (--csv or output.csv)")
        rows = sample_table(result.problem, result.approximant, job.sample_resolution)
        payload["csv"] = write_csv(rows, csv_path)
        log.info("wrote %d sample rows to %s", len(rows), csv_path)

    figures_dir = args.figures or job.output.get("figures")
    if figures_dir:
        payload["figures"] = render_figures(result.problem, result.approximant, figures_dir)
        log.info("rendered figures into %s", figures_dir)
    return payload


def run_verify(job: JobSpec, args) -> dict:
    result = _run_pipeline(job)
    approximant = result.approximant
    space = result.space
    payload = {"job": job.raw, "approximation": result.to_json_dict()}

    if args.perturb:
        rng = np.random.default_rng(args.seed)
        direction = rng.standard_normal(space.dimension)
        direction /= np.max(np.abs(direction))
        perturbed = approximant.coefficients + args.perturb * direction
        approximant = type(approximant)(
            space, perturbed, approximant.canonical_points,
            approximant.interpolation_residual, approximant.collocation_condition,
        )
        payload["perturbation"] = {"epsilon": float(args.perturb), "seed": int(args.seed)}

    oracle_grid = args.oracle_grid
    if oracle_grid is None and args.perturb:
        oracle_grid = max(2000, 50 * space.dimension)
    report = optimality_report(result.problem, approximant, space=space, oracle_grid=oracle_grid)
    payload["report"] = report.to_json_dict()
    if space.kind.value != "chebyshev":
        payload["report"]["optimality_note"] = (
            "weak-Chebyshev space: optimality is verified numerically, never proved"
        )
    if args.trials:
        payload["uniqueness"] = _uniqueness_section(
            space, result.solve.points, args.trials, result.problem.measure, args.seed
        )

    genuine_failure = (
        report.characterization_max >= _CHAR_FAIL_LEVEL
        and report.oracle_gap is not None
        and report.oracle_gap > _ORACLE_GAP_LEVEL
    )
    payload["optimality_failure"] = bool(genuine_failure)
    if genuine_failure:
        raise _OptimalityFailure(payload)
    return payload


def _emit(payload: dict, out_path: str | None) -> None:
    text = write_json(payload, out_path)
    if not out_path:
        sys.stdout.write(text)


def main(argv=None) -> int:
    level = os.environ.get("L1H_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    runners = {"canonical": run_canonical, "approximate": run_approximate, "verify": run_verify}
    try:
        job = load_job(args.spec)
        payload = runners[args.command](job, args)
    except _OptimalityFailure as exc:
        _emit(exc.payload, args.out)
        return 4
    except _SOLVER_ERRORS as exc:
        log.error("%s", exc)
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.out)
        return 2
    except (L1HeavisideError, ValueError, OSError) as exc:
        log.error("%s", exc)
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.out)
        return 3
    _emit(payload, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
