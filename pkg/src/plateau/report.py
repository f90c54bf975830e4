"""Analysis orchestration: one function table in, one JSON-ready report out.

The report is a plain dict of exact integers, strings, and booleans, rendered
deterministically (sorted keys); wall-clock data appears only when explicitly
requested so that default reports are byte-identical across runs and thread
counts.

Cost gates: the component profile runs only when p^(n+m) <= 2^max_profile_log
and difference-table work only when p^(2n) <= 2^max_table_log.  A section
denied by a budget is listed in the report's "skipped" array and turns the
exit status into 3 (partial result) unless some check failed outright (1).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .differential import DiffSummary, diff_summary, fourth_moment
from .distribution import (
    PreimageDist,
    classify_almost_balanced,
    ab_walsh_consequences,
    image_lower_bound,
    imbalance,
    imbalance_defect,
    preimage_bounds,
    preimage_distribution,
    surjectivity_certificate,
)
from .domain import FuncTable
from .plateaued import (
    AmplitudeProfile,
    apn_structure,
    check_diff_two_valued,
    component_profile,
    dto1_check,
    walsh_integrality_check,
)
from .verdict import CheckResult

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PARTIAL = 3

_AB_TYPE_JSON = {"not_ab": None, "type_plus": "+", "type_minus": "-"}


@dataclass(frozen=True)
class AnalysisOptions:
    """What `analyze` computes; mirrors the CLI flags."""

    with_profile: bool = False
    with_differential: bool = False
    with_checks: bool = False
    zero_column_only: bool = False
    max_profile_log: int = 28
    max_table_log: int = 28
    timings: bool = False
    threads: Optional[int] = None


def profile_within_budget(table: FuncTable, opts: AnalysisOptions) -> bool:
    pr = table.params
    return pr.domain_size * pr.codomain_size <= 1 << opts.max_profile_log


def table_within_budget(table: FuncTable, opts: AnalysisOptions) -> bool:
    pr = table.params
    return pr.domain_size * pr.domain_size <= 1 << opts.max_table_log


def _distribution_block(table: FuncTable, dist: PreimageDist) -> tuple[dict, Optional[int], bool]:
    """Returns (block, n_f, imbalance_available)."""
    pr = table.params
    block: dict = {
        "image_size": dist.image_size,
        "preimage_histogram": [list(x) for x in dist.histogram],
    }
    if pr.m > 2 * pr.n:
        block.update(
            {
                "imbalance": None,
                "note": "imbalance needs m <= 2n; only the raw distribution is reported",
            }
        )
        block["surjectivity"] = {
            "actual": dist.image_size == pr.codomain_size,
            "guaranteed": None,
            "inconclusive": True,
        }
        return block, None, False
    n_f = imbalance(table, dist=dist)
    rad, image = imbalance_defect(dist, n_f)
    aware, free = preimage_bounds(dist, n_f)
    ab = classify_almost_balanced(table, dist=dist, n_f=n_f)
    cert = surjectivity_certificate(dist, n_f)
    lower = image_lower_bound(pr, n_f)
    if lower > dist.image_size:
        raise AssertionError("image lower bound exceeded the actual image size")
    block.update(
        {
            "imbalance": n_f,
            "xi_radicand": rad,
            "xi_denominator": image,
            "ab_type": _AB_TYPE_JSON[ab.kind],
            "ab_witness": ab.witness,
            "ab_witnesses_plus": list(ab.witnesses_plus),
            "ab_witnesses_minus": list(ab.witnesses_minus),
            "bounds": {
                "image_aware": aware.as_dict(),
                "image_free": free.as_dict(),
            },
            "surjectivity": {
                "actual": cert.actual,
                "guaranteed": cert.guaranteed,
                "inconclusive": not cert.guaranteed,
            },
            "image_lower_bound": lower,
        }
    )
    return block, n_f, True


def run_analysis(table: FuncTable, opts: AnalysisOptions) -> tuple[dict, int]:
    """Build the report dict and its exit code."""
    pr = table.params
    t_start = time.perf_counter()
    timings: dict[str, float] = {}
    budget_skipped: list[str] = []
    report: dict = {
        "params": {"p": pr.p, "n": pr.n, "m": pr.m},
    }

    t0 = time.perf_counter()
    dist = preimage_distribution(table)
    block, n_f, have_nf = _distribution_block(table, dist)
    report["distribution"] = block
    timings["distribution"] = time.perf_counter() - t0
    if not have_nf:
        budget_skipped.append("imbalance")

    want_profile = opts.with_profile and not opts.zero_column_only
    want_diff = opts.with_differential and not opts.zero_column_only

    profile: Optional[AmplitudeProfile] = None
    if want_profile:
        if profile_within_budget(table, opts):
            t0 = time.perf_counter()
            profile = component_profile(table, threads=opts.threads)
            report["profile"] = profile.as_dict()
            timings["profile"] = time.perf_counter() - t0
        else:
            report["profile"] = None
            budget_skipped.append("profile")

    diff: Optional[DiffSummary] = None
    if want_diff:
        if table_within_budget(table, opts):
            t0 = time.perf_counter()
            diff = diff_summary(table)
            dblock = {
                "delta": diff.delta,
                "two_valued_at": diff.two_valued_at,
                "apn": diff.apn,
            }
            moments = fourth_moment(table)
            dblock["fourth_moment_all"] = moments.all_masks
            dblock["fourth_moment_restricted"] = moments.restricted
            dblock["apn_by_moment"] = moments.apn_by_moment
            report["differential"] = dblock
            timings["differential"] = time.perf_counter() - t0
        else:
            report["differential"] = None
            budget_skipped.append("differential")

    if opts.with_checks:
        t0 = time.perf_counter()
        checks = _run_checks(table, opts, dist, n_f, profile, diff, budget_skipped)
        report["checks"] = [c.as_dict() for c in checks]
        timings["checks"] = time.perf_counter() - t0
        any_fail = any(c.status == "fail" for c in checks)
    else:
        checks = []
        any_fail = False

    if budget_skipped:
        report["skipped"] = sorted(set(budget_skipped))
    if opts.timings:
        timings["total"] = time.perf_counter() - t_start
        report["timing"] = {k: round(v, 6) for k, v in sorted(timings.items())}

    if any_fail:
        return report, EXIT_FAIL
    if budget_skipped:
        return report, EXIT_PARTIAL
    return report, EXIT_PASS


def _run_checks(
    table: FuncTable,
    opts: AnalysisOptions,
    dist: PreimageDist,
    n_f: Optional[int],
    profile: Optional[AmplitudeProfile],
    diff: Optional[DiffSummary],
    budget_skipped: list[str],
) -> list[CheckResult]:
    """The named theorem checks, reusing whatever was already computed.

    A check that cannot run because a budget (or --zero-column-only) withheld
    its inputs is reported as skipped and counted toward partial status; a
    check whose mathematical hypotheses do not apply skips without affecting
    the exit code.
    """
    pr = table.params
    profile_ok = profile is not None or (
        not opts.zero_column_only and profile_within_budget(table, opts)
    )
    diff_ok = diff is not None or (
        not opts.zero_column_only and table_within_budget(table, opts)
    )

    def need_profile() -> Optional[AmplitudeProfile]:
        nonlocal profile
        if profile is None and profile_ok:
            profile = component_profile(table, threads=opts.threads)
        return profile

    def need_diff() -> Optional[DiffSummary]:
        nonlocal diff
        if diff is None and diff_ok:
            diff = diff_summary(table)
        return diff

    checks: list[CheckResult] = []

    if not profile_ok:
        checks.append(CheckResult.skipped("platdto1", "component profile over budget"))
        budget_skipped.append("check:platdto1")
    elif pr.n == pr.m and n_f is None:
        checks.append(CheckResult.skipped("platdto1", "imbalance unavailable"))
    else:
        _, cr = dto1_check(table, dist=dist, profile=need_profile(), threads=opts.threads)
        checks.append(cr)

    checks.append(walsh_integrality_check(table, dist=dist))

    if n_f is None:
        checks.append(CheckResult.skipped("ab-walsh", "imbalance needs m <= 2n"))
    else:
        checks.append(ab_walsh_consequences(table, dist=dist, n_f=n_f))

    if pr.p != 2 or pr.n != pr.m:
        _, cr = apn_structure(table, dist=dist, n_f=n_f, profile=profile, diff=diff)
        checks.append(cr)
    elif not diff_ok:
        checks.append(
            CheckResult.skipped("apn-structure", "difference table over budget")
        )
        budget_skipped.append("check:apn-structure")
    elif need_diff().apn and not profile_ok:
        checks.append(
            CheckResult.skipped("apn-structure", "component profile over budget")
        )
        budget_skipped.append("check:apn-structure")
    else:
        _, cr = apn_structure(
            table,
            dist=dist,
            n_f=n_f,
            profile=need_profile() if need_diff().apn else profile,
            diff=need_diff(),
            threads=opts.threads,
        )
        checks.append(cr)

    if pr.n != pr.m:
        checks.append(check_diff_two_valued(table, dist=dist, profile=profile, diff=diff))
    elif not profile_ok:
        checks.append(
            CheckResult.skipped("diff-two-valued", "component profile over budget")
        )
        budget_skipped.append("check:diff-two-valued")
    else:
        prof = need_profile()
        applicable = (prof.single_t or 0) > 0 or (
            prof.all_plateaued and len(dist.histogram) == 2 and dist.histogram[0] == (1, 1)
        )
        if applicable and not diff_ok:
            checks.append(
                CheckResult.skipped("diff-two-valued", "difference table over budget")
            )
            budget_skipped.append("check:diff-two-valued")
        else:
            checks.append(
                check_diff_two_valued(
                    table, dist=dist, profile=prof, diff=need_diff() if applicable else diff,
                    threads=opts.threads,
                )
            )
    return checks
