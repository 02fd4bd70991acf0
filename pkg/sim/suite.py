"""Named batch checks of the engine's identities, with per-check case targets.

Each check draws its random cases from ``SeedManager`` so results depend only on
the base seed, and checks can run in parallel worker processes.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from domain.exppoly import ONE_EXP, ExpPoly, Poly, ep_mul, gaussian
from domain.reports import CheckReport
from domain.surface import (
    Surface,
    SurfacePoint,
    apply_hyperbolic,
    make_surface,
    relative_residual,
)
from sim.amalgam import Word
from sim.fields import (
    OvershearField,
    are_commuting_family,
    bracket,
    iterated_bracket_rank,
    shear_field,
    to_coord,
    verify_of_bracket_identity,
)
from sim.flows import (
    flow_closed_form,
    flow_closed_form_many,
    flow_numeric_many,
    flow_symbolic,
    flows_commute,
)
from sim.nilpotent import (
    bch_K,
    decompose_product,
    factor_bound,
    in_derived_algebra,
    mexp,
    reconstruct,
)
from sim.osgroup import OS_GROUP, o1_compose, word_apply
from sim.samplers import (
    EXACT_SAMPLER,
    random_alternating_word,
    random_bounded_word,
    random_cyclically_reduced,
    random_exppoly,
    random_letter,
    random_nil_matrix,
    random_poly,
    random_surface_point,
    random_surface_points,
    random_unipotent,
    random_word,
)
from sim.seed import SeedManager

LOGGER = logging.getLogger("sim.suite")

REFERENCE_SURFACE: Surface = make_surface(Poly.from_ints(-1, 0, 0, 0, 1))

RESIDUAL_TOL = 1e-8
FLOW_TOL = 1e-6
GROUP_LAW_TOL = 1e-9
COMMUTE_TOL = 1e-8
HYPERBOLIC_TOL = 1e-10
RK4_STEPS = 10_000
BRACKET_TIME_LIMIT = 10.0


@dataclass
class CheckOutcome:
    failures: int
    detail: str = ""


CheckRunner = Callable[[SeedManager, str, int], CheckOutcome]


def _gap(a: SurfacePoint, b: SurfacePoint) -> float:
    return a.distance(b) / (1.0 + float(np.linalg.norm(b.as_array())))


def check_of_bracket(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    start = time.process_time()
    failures = 0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        f, g, h, k = (random_exppoly(rng, 4, EXACT_SAMPLER) for _ in range(4))
        if not verify_of_bracket_identity(f, g, h, k, REFERENCE_SURFACE):
            failures += 1
    elapsed = time.process_time() - start
    if elapsed > BRACKET_TIME_LIMIT:
        failures += 1
    return CheckOutcome(failures, f"{elapsed:.2f}s CPU of {BRACKET_TIME_LIMIT:.0f}s budget")


def check_shear_commute(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        a = to_coord(REFERENCE_SURFACE, shear_field(random_exppoly(rng, 4, EXACT_SAMPLER)))
        b = to_coord(REFERENCE_SURFACE, shear_field(random_exppoly(rng, 4, EXACT_SAMPLER)))
        if not bracket(a, b).is_zero:
            failures += 1
    return CheckOutcome(failures)


def check_flow_rk4(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    rng = seeds.case_rng(name, 0)
    points = random_surface_points(rng, REFERENCE_SURFACE, cases)
    x = np.array([q.x for q in points])
    y = np.array([q.y for q in points])
    z = np.array([q.z for q in points])
    field = OvershearField(ONE_EXP, ONE_EXP)
    closed = np.stack(flow_closed_form_many(REFERENCE_SURFACE, field.f, field.g, 1.0, x, y, z))
    numeric = np.stack(flow_numeric_many(REFERENCE_SURFACE, field, x, y, z, 1.0, RK4_STEPS))
    errors = np.linalg.norm(closed - numeric, axis=0) / (1.0 + np.linalg.norm(closed, axis=0))
    worst = float(np.max(errors)) if errors.size else 0.0
    return CheckOutcome(int(np.sum(~(errors < FLOW_TOL))), f"max relative gap {worst:.3e}")


def check_flow_group_law(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    worst = 0.0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        q = random_surface_point(rng, REFERENCE_SURFACE)
        s_time, t_time = rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)
        composed = flow_closed_form(
            REFERENCE_SURFACE, ONE_EXP, ONE_EXP, s_time,
            flow_closed_form(REFERENCE_SURFACE, ONE_EXP, ONE_EXP, t_time, q),
        )
        direct = flow_closed_form(REFERENCE_SURFACE, ONE_EXP, ONE_EXP, s_time + t_time, q)
        gap = _gap(composed, direct)
        worst = max(worst, gap)
        if not gap < GROUP_LAW_TOL:
            failures += 1
    return CheckOutcome(failures, f"max relative gap {worst:.3e}")


def check_symbolic_flow_law(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    one = Poly.from_ints(1)
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        s_time = gaussian(Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        t_time = gaussian(Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        g = random_exppoly(rng, 3, EXACT_SAMPLER)
        for f, rhs in ((Poly(), g), (one, ONE_EXP)):
            lhs = o1_compose(flow_symbolic(f, rhs, s_time), flow_symbolic(f, rhs, t_time))
            if lhs != flow_symbolic(f, rhs, s_time + t_time):
                failures += 1
                break
    return CheckOutcome(failures)


def check_word_residual(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    worst = 0.0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        points = random_surface_points(rng, REFERENCE_SURFACE, 10)
        word = random_bounded_word(rng, REFERENCE_SURFACE, points, 6, 3)
        residuals = [relative_residual(REFERENCE_SURFACE, word_apply(REFERENCE_SURFACE, word, q)) for q in points]
        case_worst = max(residuals)
        worst = max(worst, case_worst) if math.isfinite(case_worst) else math.inf
        if not case_worst < RESIDUAL_TOL:
            failures += 1
    return CheckOutcome(failures, f"max relative residual {worst:.3e}")


def check_power_length(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    LOGGER.info("%s: odd words are never cyclically reduced; drawing lengths 2 and 4", name)
    failures = 0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        word = random_cyclically_reduced(rng, rng.choice((2, 4)), 2)
        length = OS_GROUP.length(word)
        for n in range(1, 7):
            if OS_GROUP.length(OS_GROUP.power(word, n)) != n * length:
                failures += 1
                break
    return CheckOutcome(failures)


def check_parity(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        word: Word = random_word(rng, 6, 2)
        while OS_GROUP.length(word) == 0:
            word = random_word(rng, 6, 2)
        power = OS_GROUP.power(word, rng.randint(2, 4))
        if not OS_GROUP.parity_check(word, power).same_parity:
            failures += 1
    return CheckOutcome(failures)


def check_conjugate_recovery(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        conjugator = random_alternating_word(rng, rng.randint(1, 3), 2)
        letter = random_letter(rng, rng.choice(("O1", "O2")), 2)
        target = OS_GROUP.multiply(conjugator, Word((letter,)), OS_GROUP.inverse(conjugator))
        found = OS_GROUP.conjugate_into_factor(target)
        if found is None or found[1] is None:
            failures += 1
            continue
        c, core = found
        rebuilt = OS_GROUP.multiply(c, Word((core,)), OS_GROUP.inverse(c))
        if rebuilt != target:
            failures += 1
    return CheckOutcome(failures)


def check_rank_growth(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        f = ExpPoly.from_poly(random_poly(rng, 3, EXACT_SAMPLER, nonzero=True))
        g = ExpPoly.from_poly(random_poly(rng, 3, EXACT_SAMPLER))
        h = ExpPoly.from_poly(random_poly(rng, 3, EXACT_SAMPLER, nonzero=True))
        N = rng.randint(0, 6)
        if iterated_bracket_rank(REFERENCE_SURFACE, f, g, h, N) != N + 2:
            failures += 1
    return CheckOutcome(failures)


def check_commuting_family(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    worst = 0.0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        ratio = random_exppoly(rng, 2)
        family: List[Tuple[ExpPoly, ExpPoly]] = []
        for _ in range(3):
            f = ExpPoly.from_poly(random_poly(rng, 2, nonzero=True))
            family.append((f, ep_mul(f, ratio)))
        if not are_commuting_family(family):
            failures += 1
            continue
        q = random_surface_point(rng, REFERENCE_SURFACE)
        scale = 1.0 + float(np.linalg.norm(q.as_array()))
        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                defect = flows_commute(
                    REFERENCE_SURFACE,
                    OvershearField(*family[i]),
                    OvershearField(*family[j]),
                    rng.uniform(-0.5, 0.5),
                    rng.uniform(-0.5, 0.5),
                    q,
                ) / scale
                worst = max(worst, defect)
                if not defect < COMMUTE_TOL:
                    failures += 1
    return CheckOutcome(failures, f"max commutation defect {worst:.3e}")


def check_bch_identity(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        x = random_nil_matrix(rng, 4)
        y = random_nil_matrix(rng, 4)
        K = bch_K(x, y)
        if mexp(x + y) != mexp(x) * mexp(y) * mexp(K) or not in_derived_algebra(K):
            failures += 1
    return CheckOutcome(failures)


def check_decomposition(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    longest = 0
    bound = factor_bound(4)
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        g = random_unipotent(rng, 4)
        factors = decompose_product(g)
        longest = max(longest, len(factors))
        if reconstruct(factors, 4) != g or len(factors) > bound:
            failures += 1
    return CheckOutcome(failures, f"longest factorization {longest} of bound {bound}")


def check_hyperbolic(seeds: SeedManager, name: str, cases: int) -> CheckOutcome:
    failures = 0
    worst = 0.0
    for index in range(cases):
        rng = seeds.case_rng(name, index)
        q = random_surface_point(rng, REFERENCE_SURFACE)
        fz = random_poly(rng, 2)
        image = apply_hyperbolic(REFERENCE_SURFACE, fz, rng.uniform(-1.0, 1.0), q)
        value = relative_residual(REFERENCE_SURFACE, image)
        worst = max(worst, value)
        if not value < HYPERBOLIC_TOL:
            failures += 1
    return CheckOutcome(failures, f"max relative residual {worst:.3e}")


@dataclass(frozen=True)
class CheckDefinition:
    name: str
    cases: int
    description: str
    runner: CheckRunner


CHECKS: Dict[str, CheckDefinition] = {
    check.name: check
    for check in (
        CheckDefinition("of-bracket", 50, "[OF_{f,g}, OF_{h,k}] = x SF_{gh-kf} exactly", check_of_bracket),
        CheckDefinition("shear-commute", 50, "[SF_a, SF_b] = 0", check_shear_commute),
        CheckDefinition("flow-rk4", 20, "closed-form flow agrees with RK4 at t = 1", check_flow_rk4),
        CheckDefinition("flow-group-law", 20, "closed-form flows compose additively in t", check_flow_group_law),
        CheckDefinition("symbolic-flow-law", 20, "exact flows satisfy the one-parameter law", check_symbolic_flow_law),
        CheckDefinition("word-residual", 100, "word images stay on the surface", check_word_residual),
        CheckDefinition("power-length", 100, "length(w^n) = n length(w) for cyclically reduced w", check_power_length),
        CheckDefinition("parity", 100, "commuting pairs (w, w^k) have equal length parity", check_parity),
        CheckDefinition("conjugate-recovery", 100, "conjugates c a c^-1 are moved back into a factor", check_conjugate_recovery),
        CheckDefinition("rank-growth", 20, "iterated brackets span N + 2 dimensions", check_rank_growth),
        CheckDefinition("commuting-family", 20, "fields with a common ratio g/f have commuting flows", check_commuting_family),
        CheckDefinition("bch-identity", 50, "exp(x+y) = exp(x) exp(y) exp(K) with K derived", check_bch_identity),
        CheckDefinition("decomposition", 50, "unipotent matrices factor into one-parameter subgroups", check_decomposition),
        CheckDefinition("hyperbolic", 50, "hyperbolic flow preserves the surface", check_hyperbolic),
    )
}


def scaled_cases(target: int, scale: float) -> int:
    return max(1, int(round(target * scale)))


def _run_check_task(name: str, base_seed: int, scale: float) -> CheckReport:
    check = CHECKS[name]
    cases = scaled_cases(check.cases, scale)
    start = time.perf_counter()
    outcome = check.runner(SeedManager(base_seed=base_seed), name, cases)
    elapsed = time.perf_counter() - start
    return CheckReport(
        name=name,
        cases=cases,
        failures=outcome.failures,
        passed=outcome.failures == 0,
        elapsed_seconds=round(elapsed, 4),
        detail=outcome.detail,
    )


def run_suite(
    names: Optional[Sequence[str]] = None,
    *,
    base_seed: int = 0,
    workers: int = 1,
    scale: float = 1.0,
) -> List[CheckReport]:
    selected = list(names) if names else list(CHECKS)
    unknown = [name for name in selected if name not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    if scale <= 0:
        raise ValueError("scale must be positive")

    reports: List[CheckReport] = []
    executor: ProcessPoolExecutor | None = None
    if workers > 1:
        executor = ProcessPoolExecutor(max_workers=workers)
    try:
        if executor:
            futures = [
                (name, executor.submit(_run_check_task, name, base_seed, scale))
                for name in selected
            ]
            for name, future in futures:
                reports.append(future.result())
                LOGGER.info("check %s finished", name)
        else:
            for name in selected:
                reports.append(_run_check_task(name, base_seed, scale))
                LOGGER.info("check %s finished", name)
    finally:
        if executor:
            executor.shutdown()
    return reports


__all__ = [
    "CHECKS",
    "CheckOutcome",
    "CheckDefinition",
    "REFERENCE_SURFACE",
    "run_suite",
    "scaled_cases",
]
