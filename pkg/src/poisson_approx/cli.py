"""Command-line front end: ``poisson-bounds <command> ...``."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from poisson_approx import applications as apps
from poisson_approx.chen_stein import (
    DependencyModel,
    compute_b123,
    tv_lower_barbour_hall,
    tv_upper_agg,
    tv_upper_barbour_hall,
    tv_upper_cekanavicius_roos,
    tv_upper_lecam,
)
from poisson_approx.divergences import (
    bhattacharyya,
    chernoff_information,
    entropy,
    hellinger,
    kl,
    tv,
)
from poisson_approx.entropy_bounds import (
    entropy_error_breakdown,
    entropy_error_poisson_breakdown,
    independent_eta,
    independent_eta_improved,
    poisson_entropy,
)
from poisson_approx.errors import InapplicableBound
from poisson_approx.kl_bounds import (
    kl_lower_improved,
    kl_lower_loosened,
    kl_upper_kontoyiannis,
)
from poisson_approx.pmf import (
    BernoulliSumSpec,
    convolve_bernoulli_sum,
    poisson_pmf_truncated,
)
from poisson_approx.related_bounds import (
    bc_bounds_poisson,
    chernoff_lower_poisson,
    chernoff_lower_poisson_loosened,
    hellinger_bounds_poisson,
)
from poisson_approx.report import (
    BoundKind,
    BoundReport,
    to_csv,
    to_json,
    to_text,
)
from poisson_approx.tv_lower_improved import (
    GridSchedule,
    k1_optimize,
    k1_tilde,
)

EXIT_USAGE = 2
EXIT_INAPPLICABLE = 3
ORACLE_MAX_N = 20
# beyond this a linear profile is handled through its closed-form moments
MAX_EXPLICIT_N = 10_000_000

UPPER, LOWER, EXACT, APPROX = BoundKind.UPPER, BoundKind.LOWER, BoundKind.EXACT, BoundKind.APPROX


class UsageError(Exception):
    pass


def _parse_p(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.replace(" ", "").split(",") if x])
    except ValueError as exc:
        raise UsageError(f"--p must be a comma-separated list of numbers: {exc}") from None


def _load_spec(args):
    if args.p is not None:
        return BernoulliSumSpec(_parse_p(args.p))
    if args.profile is None:
        raise UsageError("give either --p or --profile")
    if args.n is None or args.lam is None:
        raise UsageError("--profile needs --n and --lambda")
    if args.profile == "linear":
        if args.n > MAX_EXPLICIT_N:
            return apps.linear_profile_moments(args.n, args.lam)
        return apps.p_profile_linear(args.n, args.lam)
    if args.alpha is None:
        raise UsageError("--profile geometric needs --alpha")
    return apps.p_profile_geometric(args.n, args.lam, args.alpha)


def _schedule(args) -> GridSchedule:
    path = getattr(args, "schedule", None)
    return GridSchedule.from_file(path) if path else GridSchedule()


def _spec_context(spec) -> dict:
    return {"n": spec.n, "lambda": spec.lam, "sum_p2": spec.sum_p2}


def _oracle(spec):
    if not isinstance(spec, BernoulliSumSpec) or spec.n > ORACLE_MAX_N or spec.lam == 0:
        return None
    return convolve_bernoulli_sum(spec), poisson_pmf_truncated(spec.lam, k_min=spec.n)


def cmd_tv_bounds(args) -> list[BoundReport]:
    spec = _load_spec(args)
    ctx = _spec_context(spec)
    out = [
        BoundReport("tv_upper_barbour_hall", tv_upper_barbour_hall(spec), UPPER, "barbour-hall", ctx),
        BoundReport("tv_upper_lecam", tv_upper_lecam(spec), UPPER, "le-cam", ctx),
    ]
    if spec.lam > 0:
        out.append(BoundReport("tv_upper_cekanavicius_roos", tv_upper_cekanavicius_roos(spec),
                               UPPER, "cekanavicius-roos", ctx))
    out.append(BoundReport("tv_lower_barbour_hall", tv_lower_barbour_hall(spec), LOWER,
                           "barbour-hall", ctx))
    if spec.lam > 0:
        out.append(BoundReport("tv_lower_closed_form", k1_tilde(spec.lam) * spec.sum_p2, LOWER,
                               "improved-lower-closed-form", ctx))
        res = k1_optimize(spec.lam, _schedule(args))
        out.append(BoundReport("tv_lower_improved", res.k1 * spec.sum_p2, LOWER,
                               "improved-lower-grid-search", {**ctx, "k1": res.k1}))
    pair = _oracle(spec)
    if pair:
        out.append(BoundReport("tv_exact", tv(*pair), EXACT, "oracle-convolution", ctx))
    return out


def cmd_kl_bounds(args) -> list[BoundReport]:
    spec = _load_spec(args)
    ctx = _spec_context(spec)
    out = [BoundReport("kl_upper_kontoyiannis", kl_upper_kontoyiannis(spec), UPPER,
                       "kontoyiannis-harremoes-johnson", ctx)]
    if spec.lam > 0:
        res = k1_optimize(spec.lam, _schedule(args))
        out.append(BoundReport("kl_lower_improved", kl_lower_improved(spec, res.k1), LOWER,
                               "refined-pinsker-k2", {**ctx, "k1": res.k1}))
    out.append(BoundReport("kl_lower_loosened", kl_lower_loosened(spec), LOWER,
                           "pinsker-barbour-hall", ctx))
    pair = _oracle(spec)
    if pair:
        out.append(BoundReport("kl_exact", kl(*pair), EXACT, "oracle-convolution", ctx))
    return out


def cmd_related_bounds(args) -> list[BoundReport]:
    spec = _load_spec(args)
    if spec.lam == 0:
        raise UsageError("all probabilities are zero")
    ctx = _spec_context(spec)
    k1 = k1_optimize(spec.lam, _schedule(args)).k1
    hel = hellinger_bounds_poisson(spec, k1)
    bc = bc_bounds_poisson(spec, k1)
    out = [
        BoundReport("hellinger_lower", hel.lower, LOWER, "tv-to-hellinger", ctx),
        BoundReport("hellinger_upper", hel.upper, UPPER, "kl-to-hellinger", ctx),
        BoundReport("bc_lower", bc.lower, LOWER, "kl-to-bhattacharyya", ctx),
        BoundReport("bc_upper", bc.upper, UPPER, "tv-to-bhattacharyya", ctx),
        BoundReport("chernoff_lower_improved", chernoff_lower_poisson(spec, k1), LOWER,
                    "tv-to-chernoff-improved", ctx),
        BoundReport("chernoff_lower_loosened", chernoff_lower_poisson_loosened(spec), LOWER,
                    "tv-to-chernoff-loosened", ctx),
    ]
    pair = _oracle(spec)
    if pair:
        out += [
            BoundReport("hellinger_exact", hellinger(*pair), EXACT, "oracle-convolution", ctx),
            BoundReport("bc_exact", bhattacharyya(*pair), EXACT, "oracle-convolution", ctx),
            BoundReport("chernoff_exact", chernoff_information(*pair), EXACT,
                        "oracle-convolution", ctx),
        ]
    return out


def cmd_k1(args) -> list[BoundReport]:
    lam = args.lam
    if not lam > 0:
        raise UsageError("--lambda must be positive")
    ctx = {"lambda": lam}
    out = [BoundReport("k1_tilde", k1_tilde(lam), LOWER, "improved-lower-closed-form", ctx)]
    if not args.closed_form:
        res = k1_optimize(lam, _schedule(args))
        out.append(BoundReport("k1", res.k1, LOWER, "improved-lower-grid-search", {
            **ctx, "alpha1": res.argmax.alpha1, "alpha2": res.argmax.alpha2,
            "theta": res.argmax.theta_s, "iterations": res.iterations}))
    return out


def _breakdown_context(b) -> dict:
    return {"eta": b.eta, "M": b.big_m, "log_mu": b.log_mu}


def cmd_entropy_bounds(args) -> list[BoundReport]:
    if args.model:
        model = DependencyModel.from_json(args.model)
        coeffs = compute_b123(model)
        ctx = {"n": coeffs.n, "lambda": coeffs.lam, "b1": coeffs.b1, "b2": coeffs.b2,
               "b3": coeffs.b3}
        b = entropy_error_poisson_breakdown(coeffs)
        return [
            BoundReport("tv_upper_agg", tv_upper_agg(coeffs), UPPER, "chen-stein", ctx),
            BoundReport("poisson_entropy", poisson_entropy(coeffs.lam), APPROX,
                        "poisson-entropy", ctx),
            BoundReport("entropy_error", b.value, UPPER, "chen-stein-entropy",
                        {**ctx, **_breakdown_context(b)}),
        ]
    spec = _load_spec(args)
    if spec.lam == 0:
        raise UsageError("all probabilities are zero")
    ctx = _spec_context(spec)
    h_z = poisson_entropy(spec.lam)
    b = entropy_error_breakdown(independent_eta(spec), spec.n + 1, spec.lam)
    out = [
        BoundReport("poisson_entropy", h_z, APPROX, "poisson-entropy", ctx),
        BoundReport("entropy_error", b.value, UPPER, "independent-entropy",
                    {**ctx, **_breakdown_context(b)}),
    ]
    try:
        bi = entropy_error_breakdown(independent_eta_improved(spec), spec.n + 1, spec.lam)
        out.append(BoundReport("entropy_error_improved", bi.value, UPPER,
                               "independent-entropy-improved", {**ctx, **_breakdown_context(bi)}))
    except InapplicableBound:
        pass
    pair = _oracle(spec)
    if pair:
        out.append(BoundReport("entropy_gap_exact", h_z - entropy(pair[0]), EXACT,
                               "oracle-convolution", ctx))
    return out


def _entropy_row(name: str, report: apps.EntropyReport, ctx: dict) -> list[BoundReport]:
    ctx = {**ctx, "lambda": report.lam}
    return [
        BoundReport(f"{name}_entropy", report.approx_h, APPROX, "poisson-entropy", ctx),
        BoundReport(f"{name}_error", report.error.value, UPPER, "chen-stein-entropy",
                    {**ctx, **_breakdown_context(report.error)}),
        BoundReport(f"{name}_rel_error", report.max_rel_error, UPPER, "chen-stein-entropy", ctx),
    ]


def cmd_example(args) -> list[BoundReport]:
    if args.which == "random-graph":
        if args.k is None:
            raise UsageError("random-graph needs --n and --k")
        case = apps.RandomGraphCase(args.n, args.k)
        return _entropy_row("random_graph", apps.random_graph_entropy_report(case),
                            {"n": case.n, "k": case.k})
    if args.theta is None or args.t is None:
        raise UsageError("gaussian needs --n, --theta and --t")
    case = apps.GaussianMACase(args.n, args.theta, args.t)
    return _entropy_row("gaussian_ma", apps.gaussian_ma_entropy_report(case),
                        {"n": case.n, "theta": case.theta_ma, "t": case.t})


def cmd_plan(args) -> list[BoundReport]:
    if args.d_lower is not None:
        exponent, ctx, prov = args.d_lower, {}, "user-supplied"
    else:
        spec = _load_spec(args)
        if spec.lam == 0:
            raise UsageError("all probabilities are zero")
        ctx = _spec_context(spec)
        k1 = k1_optimize(spec.lam, _schedule(args)).k1 if args.bound == "improved" else None
        if args.mode == "stein":
            exponent = (kl_lower_improved(spec, k1) if k1 is not None
                        else kl_lower_loosened(spec))
            prov = "refined-pinsker-k2" if k1 is not None else "pinsker-barbour-hall"
        else:
            exponent = (chernoff_lower_poisson(spec, k1) if k1 is not None
                        else chernoff_lower_poisson_loosened(spec))
            prov = f"tv-to-chernoff-{args.bound}"
    plan = (apps.chernoff_stein_plan if args.mode == "stein" else apps.bayes_plan)(
        exponent, args.epsilon)
    ctx = {**ctx, "mode": args.mode, "epsilon": args.epsilon}
    return [
        BoundReport("exponent", plan.d_lower, LOWER, prov, ctx),
        BoundReport("samples_required", plan.n_required, UPPER, "sample-size-plan", ctx),
    ]


def table_random_graph() -> list[BoundReport]:
    out = []
    for n, k, *_ in apps.RANDOM_GRAPH_TABLE:
        try:
            rep = apps.random_graph_entropy_report(apps.RandomGraphCase(n, k))
        except InapplicableBound as exc:
            out.append(BoundReport("random_graph_rel_error", math.nan, UPPER,
                                   "chen-stein-entropy", {"n": n, "k": k, "note": str(exc)}))
            continue
        out += _entropy_row("random_graph", rep, {"n": n, "k": k})
    return out


def table_gaussian() -> list[BoundReport]:
    out = []
    for n, theta, t, *_ in apps.GAUSSIAN_MA_TABLE:
        case = apps.GaussianMACase(int(n), theta, t)
        ctx = {"n": case.n, "theta": theta, "t": t}
        out += _entropy_row("gaussian_ma", apps.gaussian_ma_entropy_report(case), ctx)
        # the comparison column needs a b2 bound whose formula is not available here
        out.append(BoundReport("gaussian_ma_rel_error_loosened_b2", math.nan, UPPER,
                               "not-reproduced", {**ctx, "lambda": case.n * apps.std_normal_sf(t)}))
    return out


def table_fig1(points: int = 61) -> list[BoundReport]:
    """Ratio of the upper TV bound to each lower bound on a log grid of lambda."""
    out = []
    tied = GridSchedule(tie_alphas=True)
    for lam in np.logspace(-3, 3, points):
        lam = float(lam)
        upper = -math.expm1(-lam) / lam
        ctx = {"lambda": lam}
        out += [
            BoundReport("ratio_barbour_hall", upper / (min(1.0, 1 / lam) / 32), APPROX,
                        "barbour-hall", ctx),
            BoundReport("ratio_closed_form", upper / k1_tilde(lam), APPROX,
                        "improved-lower-closed-form", ctx),
            BoundReport("ratio_tied_alphas", upper / k1_optimize(lam, tied).k1, APPROX,
                        "improved-lower-tied-alphas", ctx),
            BoundReport("ratio_improved", upper / k1_optimize(lam).k1, APPROX,
                        "improved-lower-grid-search", ctx),
        ]
    return out


FIG2_N = 1000


def table_fig2(points: int = 31) -> list[BoundReport]:
    """n^2 times the KL bounds and the exact KL for Bin(n, lam/n) against Po(lam)."""
    out = []
    n = FIG2_N
    scale = float(n) ** 2
    for lam in np.logspace(-2, 1, points):
        lam = float(lam)
        spec = BernoulliSumSpec(np.full(n, lam / n))
        k1 = k1_optimize(lam).k1
        ctx = {"n": n, "lambda": lam}
        pair = convolve_bernoulli_sum(spec), poisson_pmf_truncated(lam, k_min=n)
        out += [
            BoundReport("scaled_kl_upper", scale * kl_upper_kontoyiannis(spec), UPPER,
                        "kontoyiannis-harremoes-johnson", ctx),
            BoundReport("scaled_kl_exact", scale * kl(*pair), EXACT, "oracle-convolution", ctx),
            BoundReport("scaled_kl_asymptotic", lam**2 / 4, APPROX, "binomial-poisson-asymptotic",
                        ctx),
            BoundReport("scaled_kl_lower_improved", scale * kl_lower_improved(spec, k1), LOWER,
                        "refined-pinsker-k2", ctx),
            BoundReport("scaled_kl_lower_pinsker", scale * 2 * (k1 * spec.sum_p2) ** 2, LOWER,
                        "pinsker-improved-tv", ctx),
            BoundReport("scaled_kl_lower_loosened", scale * kl_lower_loosened(spec), LOWER,
                        "pinsker-barbour-hall", ctx),
        ]
    return out


TABLES = {"1": table_random_graph, "2": table_gaussian, "fig1": table_fig1, "fig2": table_fig2}


def cmd_tables(args) -> list[BoundReport]:
    return TABLES[args.which]()


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", help="comma-separated success probabilities")
    p.add_argument("--profile", choices=["linear", "geometric"])
    p.add_argument("--n", type=int, help="number of summands for --profile")
    p.add_argument("--lambda", dest="lam", type=float, help="mean for --profile")
    p.add_argument("--alpha", type=float, help="ratio for --profile geometric")


def _add_schedule_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--schedule", help="JSON file with GridSchedule fields")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson-bounds",
        description="Bounds on the Poisson approximation of Bernoulli sums.")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON")
    fmt.add_argument("--csv", action="store_true", help="emit CSV")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, helptext in [
        ("tv-bounds", cmd_tv_bounds, "total variation bounds"),
        ("kl-bounds", cmd_kl_bounds, "relative entropy bounds"),
        ("related-bounds", cmd_related_bounds, "Hellinger, Bhattacharyya and Chernoff bounds"),
    ]:
        p = sub.add_parser(name, help=helptext)
        _add_spec_args(p)
        _add_schedule_arg(p)
        p.set_defaults(func=func)

    p = sub.add_parser("k1", help="improved lower-bound coefficient")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--closed-form", action="store_true", help="skip the grid search")
    _add_schedule_arg(p)
    p.set_defaults(func=cmd_k1)

    p = sub.add_parser("entropy-bounds", help="entropy gap bounds")
    _add_spec_args(p)
    p.add_argument("--model", help="JSON dependency model file")
    p.set_defaults(func=cmd_entropy_bounds)

    p = sub.add_parser("example", help="single table rows")
    p.add_argument("which", choices=["random-graph", "gaussian"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--theta", type=float)
    p.add_argument("--t", type=float)
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("plan", help="sample sizes for hypothesis tests")
    p.add_argument("--mode", choices=["stein", "bayes"], required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--d-lower", type=float, help="error exponent (nats) to plan with")
    p.add_argument("--bound", choices=["improved", "loosened"], default="improved")
    _add_spec_args(p)
    _add_schedule_arg(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("tables", help="reproduce the tables and figure data")
    p.add_argument("--which", choices=sorted(TABLES), required=True)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        reports = args.func(args)
    except InapplicableBound as exc:
        print(f"error: bound not applicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        text = to_json(reports)
    elif args.csv:
        text = to_csv(reports)
    else:
        text = to_text(reports)
    print(text.rstrip("\n"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
