"""The reproduction matrix behind `report-all`.

Items are independent pure computations; they run concurrently in worker
threads and are merged by name so the bundle does not depend on scheduling.
"""
from __future__ import annotations

import asyncio
import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import galois
import numpy as np

from .basefield import (
    ALGEBRAICALLY_CLOSED,
    BaseFieldDesc,
    BaseFieldElement,
    artin_schreier_reduce,
    elements,
    wp,
)
from .brauer import (
    Status,
    TwistedPresentation,
    arav_bound,
    decide_division,
    known_symlen_char_ne_p,
    lemma_div_witness,
    symlen_report,
    twisted_laurent_division_check,
)
from .config import config
from .gf2 import fp_rank, in_span
from .laurent import FieldTower, Monomial, PrecisionWindow
from .models import ItemResult, Provenance, Report, ReportBundle, RunConfig
from .quadforms import (
    Anisotropy,
    anisotropic_by_values,
    bilinear_linkage_counterexample,
    bilinear_linkage_status,
    brute_force_isotropy,
    charneq2_common_factor,
    f2span_intersection_dim,
    pure_subform_genset,
    quad_linkage_counterexample,
    random_monomial_pfister,
)
from .reports import verdict_record

logger = logging.getLogger(__name__)

ORACLE_MAX_ORDER = 64


@dataclass(frozen=True)
class Item:
    name: str
    run: Callable[[RunConfig, Report], None]
    char2_only: bool = False


ITEMS: list[Item] = []


def item(name: str, char2_only: bool = False):
    def decorator(fn: Callable[[RunConfig, Report], None]):
        ITEMS.append(Item(name, fn, char2_only))
        return fn
    return decorator


def _sizes(run: RunConfig, lo: int, cap: Optional[int] = None) -> range:
    hi = max(run.n, lo)
    if cap is not None:
        hi = min(hi, cap)
    return range(lo, hi + 1)


@item("chain-division")
def chain_division(run: RunConfig, report: Report) -> None:
    """The chain class is a division algebra for every tower size."""
    base = run.concrete_base()
    for n in _sizes(run, 2):
        verdict = decide_division(lemma_div_witness(FieldTower(base, n)))
        report.verdicts.append(verdict_record(f"chain class, n = {n}", verdict))
        if verdict.status is not Status.DIVISION:
            report.fail(f"n = {n}: {verdict.status.value} ({verdict.reason})")
        if n == 2:
            text = "\n".join(verdict.trace)
            for step in ("(0, -1)", f"Γ_K = ℤ × (1/{run.p})ℤ", "is not a norm"):
                if step not in text:
                    report.fail(f"n = 2 trace misses {step!r}")


@item("symlen-upper-branch")
def symlen_upper_branch(run: RunConfig, report: Report) -> None:
    """Algebraically closed base: symbol length n − 1, witnessed by the chain class."""
    for n in _sizes(run, 2):
        summary = symlen_report(ALGEBRAICALLY_CLOSED, run.p, n)
        report.claim(f"symlen(n={n})", summary.claimed, Provenance.FORMULA)
        if summary.claimed != n - 1 or summary.upper_bound != n - 1:
            report.fail(f"n = {n}: claimed {summary.claimed}, bound {summary.upper_bound}")
        if summary.verdict is None or summary.verdict.status is not Status.DIVISION:
            report.fail(f"n = {n}: witness not verified")
        elif len(summary.witness) != n - 1:
            report.fail(f"n = {n}: witness has {len(summary.witness)} symbols")


@item("symlen-lower-branch", char2_only=True)
def symlen_lower_branch(run: RunConfig, report: Report) -> None:
    """F2(t): symbol length n from ℘-independent βs, plus a dependent control."""
    base = BaseFieldDesc.ratfunc(2)
    for n in _sizes(run, 1, cap=3):
        summary = symlen_report(base, 2, n)
        report.claim(f"symlen(n={n})", summary.claimed, Provenance.FORMULA)
        if summary.claimed != n or summary.verdict is None or summary.verdict.status is not Status.DIVISION:
            report.fail(f"n = {n}: claimed {summary.claimed}, not verified")
    t = BaseFieldElement.variable(base)
    control = twisted_laurent_division_check(TwistedPresentation(base, (t ** -1, t ** -2)))
    report.verdicts.append(verdict_record("t^-1, t^-2", control))
    if control.status is not Status.NOT_DIVISION or "℘(t^-1)" not in (control.witness or ""):
        report.fail(f"dependent control gave {control.status.value} with witness {control.witness}")


@item("upper-bound-matrix")
def upper_bound_matrix(run: RunConfig, report: Report) -> None:
    """n − 1 when dim k/℘(k) < n, else n."""
    for m in (0, 1, math.inf):
        for n in range(1, 7):
            expected = n - 1 if m < n else n
            if arav_bound(m, n) != expected:
                report.fail(f"m = {m}, n = {n}: got {arav_bound(m, n)}, expected {expected}")
    report.claim("cases", 18, Provenance.COMPUTED)


@item("char-ne-p-symbol-length")
def char_ne_p_formula(run: RunConfig, report: Report) -> None:
    for n in range(0, 7):
        report.claim(f"symlen(n={n})", known_symlen_char_ne_p(n), Provenance.CITED)
        if known_symlen_char_ne_p(n) != n // 2:
            report.fail(f"n = {n}")


@item("three-variable-not-linked", char2_only=True)
def three_variable_not_linked(run: RunConfig, report: Report) -> None:
    """A biquaternion division algebra over F2((α))((β))((γ))."""
    tower = FieldTower(BaseFieldDesc.prime(2), 3, ("alpha", "beta", "gamma"))
    verdict = decide_division(lemma_div_witness(tower))
    report.verdicts.append(verdict_record("[beta^-1, alpha) * [gamma^-1, beta)", verdict))
    if verdict.status is Status.DIVISION:
        report.notes.append(f"{tower} is not linked")
    else:
        report.fail(f"{verdict.status.value}: {verdict.reason}")


def verify_common_factor(phi_slots: Sequence[Monomial], psi_slots: Sequence[Monomial], n_vars: int) -> Optional[str]:
    """None when a common factor is found and checked; otherwise what went wrong."""
    n = len(phi_slots)
    result = charneq2_common_factor(phi_slots, psi_slots, n_vars)
    if result.factor is None:
        return f"{phi_slots} / {psi_slots}: {result.message}"
    a = [tuple(e % 2 for e in m) for m in phi_slots]
    b = [tuple(e % 2 for e in m) for m in psi_slots]
    if fp_rank(result.factor, 2) != n - 1:
        return f"{phi_slots} / {psi_slots}: factor of rank {fp_rank(result.factor, 2)}"
    for row in result.factor:
        if not (in_span(row, a) and in_span(row, b)):
            return f"{phi_slots} / {psi_slots}: factor slot {row} outside a span"
    return None


@item("char-ne-2-common-factor")
def common_factor_trials(run: RunConfig, report: Report) -> None:
    """Random anisotropic monomial pairs over n + 1 variables share an (n − 1)-fold factor."""
    rng = np.random.default_rng(config.random_seed)
    trials = config.common_factor_trials
    for n in _sizes(run, 2, cap=4):
        failures = 0
        for _ in range(trials):
            problem = verify_common_factor(
                random_monomial_pfister(n, n + 1, rng), random_monomial_pfister(n, n + 1, rng), n + 1
            )
            if problem:
                failures += 1
                report.notes.append(problem)
        report.claim(f"failures(n={n})", failures, Provenance.COMPUTED)
        if failures:
            report.passed = False


@item("quadratic-non-linkage", char2_only=True)
def quadratic_non_linkage(run: RunConfig, report: Report) -> None:
    base = run.concrete_base()
    for n in _sizes(run, 2, cap=5):
        tower = FieldTower(base, n + 1)
        _, _, omega = quad_linkage_counterexample(n, tower)
        verdict = anisotropic_by_values(omega)
        report.claim(f"omega(n={n})", verdict.status.value, Provenance.COMPUTED)
        if verdict.status is not Anisotropy.ANISOTROPIC:
            report.fail(f"n = {n}: {verdict.reason}")
    if base.is_finite:
        tower = FieldTower(base, 3)
        _, _, omega = quad_linkage_counterexample(2, tower)
        result = brute_force_isotropy(omega, run.window(3), run.budget)
        report.claim("brute_force(n=2)", result.message, Provenance.COMPUTED)
        if result.witness is not None:
            report.fail(f"isotropic vector {result.message} contradicts anisotropy")


@item("bilinear-non-linkage", char2_only=True)
def bilinear_non_linkage(run: RunConfig, report: Report) -> None:
    lo, hi = min(run.window_lo, 0), max(run.window_hi, 0)
    for n in _sizes(run, 2, cap=4):
        tower = FieldTower(BaseFieldDesc.prime(2), n + 1)
        phi, psi = bilinear_linkage_counterexample(n, tower)
        window = PrecisionWindow.uniform(n + 1, lo, hi)
        result = f2span_intersection_dim(pure_subform_genset(phi), pure_subform_genset(psi), window)
        expected = 2 ** (n - 1) - 2
        report.claim(f"intersection_dim(n={n})", result.dim_at_window, Provenance.COMPUTED)
        if not result.stabilized or result.dim_at_window != expected:
            report.fail(f"n = {n}: dim {result.dim_at_window} (grown {result.dim_grown}), expected {expected}")


@item("bilinear-linkage-equivalence", char2_only=True)
def linkage_equivalence(run: RunConfig, report: Report) -> None:
    for n in range(1, 5):
        for two_rank in (n, n + 1, n + 2):
            status = bilinear_linkage_status(two_rank, n)
            if status.linked != (two_rank == n) or status.three_linked != status.linked:
                report.fail(f"2-rank {two_rank}, n = {n}: linked = {status.linked}")


@item("artin-schreier-oracle")
def artin_schreier_oracle(run: RunConfig, report: Report) -> None:
    """℘-image membership agrees with enumerating ℘ on every finite field of order ≤ 64."""
    checked = 0
    for q in range(2, ORACLE_MAX_ORDER + 1):
        if not galois.is_prime_power(q):
            continue
        (p,), (d,) = galois.factors(q)
        desc = BaseFieldDesc.finite(p, d)
        image = {wp(x).raw for x in elements(desc)}
        for x in elements(desc):
            if artin_schreier_reduce(x).in_image != (x.raw in image):
                report.fail(f"{desc}: {x}")
        checked += 1
    report.claim("fields", checked, Provenance.COMPUTED)


def _run_item(entry: Item, run: RunConfig) -> ItemResult:
    start = time.perf_counter()
    report = Report(command=entry.name, inputs={"p": str(run.p), "n": str(run.n), "window": run.window_text})
    try:
        entry.run(run, report)
    except Exception as e:
        logger.exception("item %s raised", entry.name)
        report.fail(f"{type(e).__name__}: {e}")
    report.duration_s = time.perf_counter() - start
    detail = "; ".join(report.notes[:3]) if not report.passed else ", ".join(
        f"{c.name}={c.value}" for c in report.claims[:4]
    )
    return ItemResult(
        name=entry.name,
        status="pass" if report.passed else "fail",
        detail=detail,
        duration_s=report.duration_s,
        report=report,
    )


async def _gather(run: RunConfig) -> list[ItemResult]:
    results: list[ItemResult] = []
    pending = []
    for entry in ITEMS:
        if entry.char2_only and run.p != 2:
            results.append(ItemResult(name=entry.name, status="skip", detail="characteristic 2 only"))
        else:
            pending.append(asyncio.to_thread(_run_item, entry, run))
    results.extend(await asyncio.gather(*pending))
    return results


def report_all(run: RunConfig) -> ReportBundle:
    """Run every item and merge the results by name."""
    start = time.perf_counter()
    results = asyncio.run(_gather(run))
    results.sort(key=lambda r: r.name)
    passed = all(r.status != "fail" for r in results)
    bundle = ReportBundle(config=run, items=results, passed=passed, duration_s=time.perf_counter() - start)
    logger.info("report-all: %d items, passed=%s", len(results), passed)
    return bundle
