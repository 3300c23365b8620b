"""Command-line interface.

Subcommands cover the full API surface: closed-form scenario curves,
cohort simulation, nonparametric estimation, arm decomposition, estimand
advice, and life-table coverage checks.  Every command is deterministic
given its flags and inputs; the only randomness is the explicit --seed.

Exit codes: 0 success; 1 invalid flags or parameters; 2 malformed data
files or life-table coverage gaps.

Derived curve files are written at 6 significant digits.  Data files
(cohorts, life tables) are written at full precision so a round trip
reproduces the in-memory objects exactly.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .advisor import AdvisorAnswers, advise
from .cohort import load_cohort, simulate_cohort, write_cohort
from .decomposition import cause_a_contrast, decompose_trial
from .errors import CoverageError, DataFormatError, NetsurvError
from .estimands import (
    RR_GRID,
    ScenarioSpec,
    build_scenario,
    gap_curve,
    survival_disease_attributable,
    survival_disease_specific,
    survival_net,
)
from .estimators import (
    cause_specific_km,
    disease_attributable_km,
    overall_km,
    pohar_perme,
    smr,
)
from .fixtures import FIXTURE_NAMES, fixture
from .lifetable import coverage_gaps, load_life_table

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; we reserve 2 for data
    problems, so route usage errors to the validation exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _yesno(token: str) -> bool:
    t = token.strip().lower()
    if t in ("yes", "y", "true", "1"):
        return True
    if t in ("no", "n", "false", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected yes or no, got {token!r}")


def _parse_grid(spec: str) -> np.ndarray:
    try:
        start_s, stop_s, step_s = spec.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid must look like start:stop:step, got {spec!r}"
        ) from None
    if start < 0 or step <= 0 or stop <= start:
        raise argparse.ArgumentTypeError(f"bad grid range {spec!r}")
    n = int(round((stop - start) / step))
    return np.linspace(start, stop, n + 1)


def _fmt(x) -> str:
    return f"{float(x):.6g}"


def _write_table(path: Path, header, rows, fmt: str) -> None:
    if fmt == "json":
        payload = {"columns": list(header), "rows": [[float(v) for v in r] for r in rows]}
        path.with_suffix(".json").write_text(json.dumps(payload, indent=2) + "\n")
        return
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _curve_rows(curve):
    if curve.variance is not None:
        return [
            (t, s, r, v)
            for t, s, r, v in zip(curve.times, curve.values, curve.at_risk, curve.variance)
        ]
    return list(zip(curve.times, curve.values, curve.at_risk))


def _write_curve(path: Path, curve, fmt: str) -> None:
    header = ["time", "survival", "at_risk"]
    if curve.variance is not None:
        header.append("variance")
    _write_table(path, header, _curve_rows(curve), fmt)


def _cmd_curves(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = args.grid
    summary = []
    for rr in args.rr:
        spec = ScenarioSpec(
            rr=rr,
            frac_c=args.frac_c,
            h_d_rate=args.h_d,
            cancer_shape=args.shape,
            cancer_scale=args.scale,
        )
        model = build_scenario(spec)
        s_a = survival_disease_specific(model, grid)
        s_ac = survival_disease_attributable(model, grid)
        s_net = survival_net(model, grid)
        gap = (s_a - s_net) * 100.0
        rows = list(zip(grid, s_a, s_ac, s_net, gap))
        _write_table(
            out / f"curves_rr{rr:g}.csv",
            ["t", "S_A", "S_AC", "S_net", "gap_pp"],
            rows,
            args.format,
        )
        five = np.searchsorted(grid, 5.0)
        if five < grid.size and grid[five] == 5.0:
            summary.append((rr, s_a[five], s_ac[five], s_net[five], gap[five]))
        g = gap_curve(model, "disease_specific", "net", grid)
        print(
            f"rr={rr:g}: max gap {g.max_gap_pp:.2f} pp at t={g.argmax_time:.2f} y"
        )
    if summary:
        _write_table(
            out / "curves_summary.csv",
            ["rr", "S_A_5", "S_AC_5", "S_net_5", "gap_pp_5"],
            summary,
            args.format,
        )
    return EXIT_OK


def _cmd_simulate(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = ScenarioSpec(
        rr=args.rr,
        frac_c=args.frac_c,
        h_d_rate=args.h_d,
        cancer_shape=args.shape,
        cancer_scale=args.scale,
    )
    cohort = simulate_cohort(
        build_scenario(spec),
        n=args.n,
        max_follow_up=args.max_follow_up,
        censoring_rate=args.censoring_rate,
        seed=args.seed,
        arm=args.arm,
        workers=max(1, args.parallel),
    )
    path = out / args.out
    write_cohort(cohort, path)
    deaths = int(np.sum(cohort.status_codes > 0))
    print(f"wrote {len(cohort)} subjects ({deaths} deaths) to {path}")
    return EXIT_OK


def _cmd_estimate(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cohort = load_cohort(args.cohort)
    table = load_life_table(args.lifetable)
    _write_curve(out / "km_overall.csv", overall_km(cohort), args.format)
    _write_curve(out / "km_cause_specific.csv", cause_specific_km(cohort), args.format)
    _write_curve(out / "pohar_perme.csv", pohar_perme(cohort, table), args.format)
    labeled = all(
        r.true_cause is not None for r in cohort.records if r.status.is_death
    )
    if labeled:
        _write_curve(
            out / "km_disease_attributable.csv",
            disease_attributable_km(cohort),
            args.format,
        )
    ratio = smr(cohort, table, args.horizon, person_time=args.person_time)
    payload = {
        "horizon_years": args.horizon,
        "smr": ratio,
        "convention": "person_time" if args.person_time else "expected_probability",
    }
    (out / "smr.json").write_text(json.dumps(payload, indent=2) + "\n")
    skipped = "" if labeled else " (no cause labels: disease-attributable curve skipped)"
    print(f"estimates written to {out}{skipped}")
    return EXIT_OK


def _cmd_decompose(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.fixture:
        cohort, table, horizon = fixture(args.fixture)
        reference, treated = cohort.arm("placebo"), cohort.arm("estrogen")
        if args.horizon is not None:
            horizon = args.horizon
    else:
        if not (args.cohort and args.lifetable and args.reference_arm):
            raise NetsurvError(
                "decompose needs --fixture, or --cohort/--lifetable/--reference-arm"
            )
        if args.horizon is None:
            raise NetsurvError("decompose needs --horizon when not using a fixture")
        cohort = load_cohort(args.cohort)
        table = load_life_table(args.lifetable)
        horizon = args.horizon
        reference = cohort.arm(args.reference_arm)
        treated = cohort.arm(args.treated_arm) if args.treated_arm else None
    report = decompose_trial(reference, treated, table, horizon)
    payload = report.to_dict()
    if treated is not None:
        payload["cause_a_contrast"] = cause_a_contrast(reference, treated, horizon).to_dict()
    (out / "decomposition.json").write_text(json.dumps(payload, indent=2) + "\n")
    text = report.to_text()
    (out / "decomposition.txt").write_text(text + "\n")
    print(text)
    return EXIT_OK


def _cmd_advise(args) -> int:
    if args.answers:
        doc = json.loads(Path(args.answers).read_text())
        answers = AdvisorAnswers(
            removed_general_population_mortality=bool(
                doc["removed_general_population_mortality"]
            ),
            rr_approximately_one=bool(doc.get("rr_approximately_one", False)),
            reliable_cause_of_death=bool(doc.get("reliable_cause_of_death", False)),
            lifetables_remove_baseline=bool(doc.get("lifetables_remove_baseline", False)),
            observed_rr=doc.get("observed_rr"),
            rr_threshold=doc.get("rr_threshold", args.rr_threshold),
        )
    else:
        if args.removed_d is None:
            raise NetsurvError("advise needs --removed-d (or --answers file)")
        if args.rr is None and args.rr_approx_one is None:
            raise NetsurvError("advise needs --rr or --rr-approx-one")
        answers = AdvisorAnswers(
            removed_general_population_mortality=args.removed_d,
            rr_approximately_one=bool(args.rr_approx_one),
            reliable_cause_of_death=bool(args.reliable_cod),
            lifetables_remove_baseline=bool(args.lifetables_remove_baseline),
            observed_rr=args.rr,
            rr_threshold=args.rr_threshold,
        )
    verdict = advise(answers)
    text = json.dumps(verdict.to_dict(), indent=2)
    print(text)
    if args.out:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / args.out).write_text(text + "\n")
    return EXIT_OK


def _cmd_lifetable_check(args) -> int:
    cohort = load_cohort(args.cohort)
    table = load_life_table(args.lifetable)
    horizon = args.horizon
    if horizon is None:
        horizon = float(np.max(cohort.times))
    gaps = coverage_gaps(table, (r.profile for r in cohort.records), horizon)
    if gaps:
        print(f"life table is missing {len(gaps)} key(s) needed by the cohort:")
        for age, sex, year in gaps:
            print(f"  age={age} sex={sex.value} year={year}")
        return EXIT_DATA
    print(f"coverage complete through {horizon:g} years for {len(cohort)} subjects")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netsurv", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (simulation)")
    common.add_argument("--output-dir", default=".", help="directory for output files")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="derived table format")
    common.add_argument("--parallel", type=int, default=1, metavar="N",
                        help="worker threads for simulation")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curves", parents=[common], help="closed-form scenario curves")
    p.add_argument("--rr", type=float, nargs="+", default=list(RR_GRID))
    p.add_argument("--frac-c", type=float, default=0.5, dest="frac_c")
    p.add_argument("--h-d", type=float, default=0.025, dest="h_d")
    p.add_argument("--shape", type=float, default=1.5)
    p.add_argument("--scale", type=float, default=5.3)
    p.add_argument("--grid", type=_parse_grid, default=_parse_grid("0:10:0.01"))
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("simulate", parents=[common], help="competing-risks cohort")
    p.add_argument("--rr", type=float, required=True)
    p.add_argument("--frac-c", type=float, default=0.5, dest="frac_c")
    p.add_argument("--h-d", type=float, default=0.025, dest="h_d")
    p.add_argument("--shape", type=float, default=1.5)
    p.add_argument("--scale", type=float, default=5.3)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-follow-up", type=float, default=10.0)
    p.add_argument("--censoring-rate", type=float, default=0.0)
    p.add_argument("--arm", default=None)
    p.add_argument("--out", default="cohort.csv")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="nonparametric estimates")
    p.add_argument("--cohort", required=True)
    p.add_argument("--lifetable", required=True)
    p.add_argument("--horizon", type=float, default=5.0, help="SMR horizon (years)")
    p.add_argument("--person-time", action="store_true",
                   help="SMR expected deaths from person-time x rate")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("decompose", parents=[common], help="arm-level decomposition")
    p.add_argument("--fixture", choices=FIXTURE_NAMES, default=None)
    p.add_argument("--cohort")
    p.add_argument("--lifetable")
    p.add_argument("--reference-arm", dest="reference_arm")
    p.add_argument("--treated-arm", dest="treated_arm")
    p.add_argument("--horizon", type=float, default=None)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("advise", parents=[common], help="estimand selection")
    p.add_argument("--removed-d", type=_yesno, default=None, dest="removed_d",
                   help="general-population mortality removed? yes/no")
    p.add_argument("--rr", type=float, default=None, help="observed other-cause RR")
    p.add_argument("--rr-approx-one", type=_yesno, default=None, dest="rr_approx_one")
    p.add_argument("--reliable-cod", type=_yesno, default=False, dest="reliable_cod")
    p.add_argument("--lifetables-remove-baseline", type=_yesno, default=False,
                   dest="lifetables_remove_baseline")
    p.add_argument("--rr-threshold", type=float, default=1.1, dest="rr_threshold")
    p.add_argument("--answers", default=None, help="JSON file with the answers")
    p.add_argument("--out", default=None, help="also write the verdict JSON here")
    p.set_defaults(func=_cmd_advise)

    p = sub.add_parser("lifetable-check", parents=[common],
                       help="validate life-table coverage for a cohort")
    p.add_argument("--cohort", required=True)
    p.add_argument("--lifetable", required=True)
    p.add_argument("--horizon", type=float, default=None,
                   help="coverage horizon (default: longest follow-up)")
    p.set_defaults(func=_cmd_lifetable_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CoverageError, DataFormatError) as exc:
        print(f"netsurv: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"netsurv: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NetsurvError as exc:
        print(f"netsurv: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
