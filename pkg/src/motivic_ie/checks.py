"""Exact verification suites over the standard corpora.

Each suite returns a SuiteResult; failing items are listed in its details
(capped so reports stay readable). Suites never raise on a failed identity.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from motivic_ie import (
    cohom,
    families,
    ffield,
    homology,
    incidence,
    motivic,
    poset,
    zerocycles,
)
from motivic_ie.errors import InvalidInputError, VerificationError
from motivic_ie.guards import DEFAULT_GUARD, CostGuard

logger = logging.getLogger(__name__)

# Failing items kept per suite
MAX_REPORTED_FAILURES = 20

RANDOM_MOBIUS_POSETS = 200
RANDOM_RANKED_POSETS = 50
RANDOM_KOSZUL_TABLES = 40
KOSZUL_MAX_DEGREE = 6
KOSZUL_MAX_TOTAL = 8


@dataclass
class SuiteResult:
    """Verdict of one verification suite."""

    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        # timing is left out so reports stay byte-identical across runs
        return {"name": self.name, "passed": self.passed, "details": self.details}


class _Tally:
    def __init__(self) -> None:
        self.checked = 0
        self.failed = 0
        self.failures: list = []

    def record(self, ok: bool, label: object) -> None:
        self.checked += 1
        if ok:
            return
        self.failed += 1
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(label)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def details(self, **extra) -> dict:
        return {"checked": self.checked, "failed": self.failed, "failures": self.failures, **extra}


def mobius_corpus() -> Iterator[tuple[str, poset.FinitePoset]]:
    """Boolean lattices, divisor posets, multiset posets and seeded random posets."""
    for n in range(2, 6):
        yield f"boolean({n})", families.boolean(n)
    for n in (12, 30, 60, 360):
        yield f"divisors({n})", families.divisor_poset(n)
    for size in range(1, 4):
        letters = "xyz"[:size]
        yield f"symmetric({letters},4)", families.symmetric(list(letters), 4)
    for seed in range(RANDOM_MOBIUS_POSETS):
        n = seed % 10 + 1
        yield f"random({n},seed={seed})", families.random_poset(n, 0.3, seed=seed)


def homology_corpus() -> Iterator[tuple[str, poset.FinitePoset]]:
    """Smaller corpus for nerve homology, which enumerates chains."""
    for n in range(1, 5):
        yield f"boolean({n})", families.boolean(n)
    yield "divisors(12)", families.divisor_poset(12)
    yield "divisors(30)", families.divisor_poset(30)
    for size in range(1, 3):
        letters = list("xy"[:size])
        yield f"symmetric({''.join(letters)},3)", families.symmetric(letters, 3)
        yield f"configuration({''.join(letters)})", families.configuration(letters)
    for n in range(1, 5):
        yield f"chain({n})", families.chain(n)
        yield f"cone(antichain({n}))", families.cone(families.antichain(n))
        yield f"cocone(antichain({n}))", families.cocone(families.antichain(n))
    for seed in range(40):
        yield f"random(8,seed={seed})", families.random_poset(8, 0.35, seed=seed)


def fibered_corpus() -> Iterator[tuple[str, poset.FinitePoset]]:
    yield "union(cone,chain)", families.disjoint_union(
        {"u": families.cone(families.antichain(3)), "v": families.chain(3)}
    )
    yield "union(boolean,cocone)", families.disjoint_union(
        {"u": families.boolean(3), "v": families.cocone(families.antichain(2)), "w": families.chain(1)}
    )
    yield "union(antichain,chain)", families.disjoint_union(
        {"u": families.antichain(2), "v": families.chain(2)}
    )


def check_mobius_agreement(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Mobius by inversion equals Mobius by interval Euler characteristics."""
    tally = _Tally()
    for name, p in mobius_corpus():
        comparison = incidence.compare_mobius(p)
        tally.record(comparison.agree, {"poset": name, "pairs": comparison.disagreements[:5]})
    return SuiteResult("mobius-agreement", tally.passed, tally.details())


def check_mobius_inversion(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """mu * zeta = zeta * mu = delta."""
    tally = _Tally()
    for name, p in mobius_corpus():
        mu, z, unit = incidence.mobius_by_inversion(p), incidence.zeta(p), incidence.delta(p)
        tally.record(mu @ z == unit and z @ mu == unit, name)
    return SuiteResult("mobius-inversion", tally.passed, tally.details())


def check_contractibility(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Posets with a center have acyclic nerves; fibers with centers have chi = 1."""
    tally = _Tally()
    with_center = 0
    for name, p in homology_corpus():
        if poset.find_center(p) is None:
            continue
        with_center += 1
        reduced = homology.nerve_betti(p, reduced=True)
        chi, _ = poset.euler_characteristics(p)
        tally.record(not reduced and chi == 1, {"poset": name, "reduced_betti": reduced, "chi": chi})
    for name, p in fibered_corpus():
        centers = poset.fiber_centers(p)
        euler = poset.fibered_euler(p)
        for point in centers.centers:
            tally.record(euler.per_fiber[point] == 1, {"poset": name, "fiber": point})
    return SuiteResult("contractibility", tally.passed, tally.details(with_center=with_center))


def _support_cases() -> Iterator[tuple[str, poset.FinitePoset, list[str]]]:
    for size in range(1, 4):
        letters = list("xyz"[:size])
        for k in range(1, 5):
            sets = list(families.configuration(letters, k).elements)
            yield f"support({''.join(letters)},{k})", families.symmetric(letters, k), sets


def check_retraction(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Falling retractions preserve Betti numbers and Euler characteristics."""
    tally = _Tally()
    cases = list(_support_cases())
    for name, p in homology_corpus():
        if poset.MINUS_INFINITY not in p:
            cases.append((f"cone({name})", families.cone(p), [poset.MINUS_INFINITY]))
    for name, p, sub in cases:
        if poset.falling_retraction(p, sub) is None:
            tally.record(False, {"poset": name, "reason": "no falling retraction"})
            continue
        target = p.induced(sub)
        same_betti = homology.nerve_betti(p) == homology.nerve_betti(target)
        same_euler = poset.euler_characteristics(p) == poset.euler_characteristics(target)
        tally.record(same_betti and same_euler, name)
    return SuiteResult("retraction", tally.passed, tally.details())


def rank_corpus() -> Iterator[tuple[str, poset.FinitePoset]]:
    yield "configuration(012)", families.configuration(["0", "1", "2"])
    yield "symmetric(xy,3)+", families.symmetric(["x", "y"], 3, bottom=True)
    for n in range(1, 6):
        yield f"chain({n})", families.chain(n)
    for m in range(1, 5):
        yield f"cone(antichain({m}))", families.cone(families.antichain(m))
    for seed in range(RANDOM_RANKED_POSETS):
        n = seed % 10 + 1
        yield f"random({n},seed={seed},ranked)", families.random_poset(n, 0.3, seed=seed, ranked=True)


def check_rank_spectral_sequence(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """E_1 of the rank filtration matches lower-interval homology; E_inf matches H."""
    tally = _Tally()
    for name, p in rank_corpus():
        tally.record(homology.rank_e1_report(p).passed, name)
    return SuiteResult("rank-ss", tally.passed, tally.details())


def check_punctual(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Sets give one sign-twisted class; multisets with repeats are acyclic."""
    tally = _Tally()
    for size in range(1, 5):
        for t in combinations_with_replacement("abcd", size):
            report = zerocycles.punctual_graded_check(list(t))
            tally.record(report.passed, families.multiset_label(t))
    return SuiteResult("punctual", tally.passed, tally.details())


def check_skeletal_banerjee(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Antisymmetrization is a filtered quasi-isomorphism; the permutation identity holds."""
    tally = _Tally()
    for size in range(1, 4):
        letters = list("abc"[:size])
        for cutoff in range(1, 5):
            e = zerocycles.skeletal_e1(letters, cutoff, guard)
            b = zerocycles.banerjee_complex(letters, cutoff, guard)
            report = zerocycles.asym(e, b)
            euler = zerocycles.skeletal_graded_euler(e)
            tally.record(report.passed and euler.passed, {"alphabet": size, "cutoff": cutoff})
    identity = zerocycles.permutation_identity_check(4)
    tally.record(identity.passed, {"permutation_identity": identity.failures[:5]})
    return SuiteResult(
        "skeletal-banerjee", tally.passed, tally.details(permutation_cases=identity.checked)
    )


def series_corpus() -> dict[str, motivic.CellularVariety]:
    line = motivic.projective_space(1)
    return {
        "pt": motivic.point(),
        "A1": motivic.affine_line(),
        "P1": line,
        "P2": motivic.projective_space(2),
        "P3": motivic.projective_space(3),
        "P1xP1": line.product(line),
    }


def check_series(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """invert(Z) * Z = 1 to degree 10; composition sums match the inverse to degree 8."""
    tally = _Tally()
    for name, x in series_corpus().items():
        zeta = motivic.kapranov_zeta(x, 10)
        tally.record(motivic.invert(zeta) * zeta == motivic.MotSeries.one(10), {"variety": name, "check": "inverse"})
        inverse = motivic.invert(motivic.kapranov_zeta(x, 8))
        for k in range(1, 9):
            tally.record(
                motivic.mu_terms_gamma(x, k) == inverse.coefficient(k),
                {"variety": name, "k": k},
            )
    return SuiteResult("series", tally.passed, tally.details())


def _table(bidegrees: Iterable[tuple[int, int]]) -> cohom.GradedWeightedSpace:
    dims: dict[tuple[int, int], int] = {}
    for b in bidegrees:
        dims[b] = dims.get(b, 0) + 1
    return cohom.GradedWeightedSpace(dims, pure=all(d == w for d, w in dims))


def koszul_corpus() -> Iterator[tuple[str, cohom.GradedWeightedSpace]]:
    """Tables in degrees and weights 0..KOSZUL_MAX_DEGREE.

    Every pure table of total dimension <= 4, every mixed-weight table of
    total dimension <= 2, seeded random mixed-weight tables of total
    dimension 3..KOSZUL_MAX_TOTAL, and larger named tables.
    """
    span = range(KOSZUL_MAX_DEGREE + 1)
    for total in range(1, 5):
        for degrees in combinations_with_replacement(span, total):
            yield f"degrees{degrees}", _table((d, d) for d in degrees)
    bidegrees = [(d, w) for d in span for w in span]
    for total in range(1, 3):
        for chosen in combinations_with_replacement(bidegrees, total):
            if any(d != w for d, w in chosen):
                yield f"bidegrees{chosen}", _table(chosen)
    for seed in range(RANDOM_KOSZUL_TABLES):
        rng = np.random.default_rng(seed)
        total = 3 + seed % (KOSZUL_MAX_TOTAL - 2)
        chosen = [tuple(int(x) for x in pair) for pair in rng.integers(0, KOSZUL_MAX_DEGREE + 1, (total, 2))]
        yield f"random({total},seed={seed})", _table(chosen)
    yield "P^7", cohom.projective_space_cohomology(7)
    yield "P1xP1", cohom.cellular_cohomology(series_corpus()["P1xP1"])
    for genus in range(4):
        yield f"curve(g={genus})", cohom.curve_cohomology(genus)
    yield "odd(1,3,5)", cohom.GradedWeightedSpace.from_cohomology({1: 2, 3: 3, 5: 3})


def check_koszul(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Graded symmetric and signed exterior series are inverse to degree 8."""
    tally = _Tally()
    for name, v in koszul_corpus():
        tally.record(cohom.koszul_inverse_check(v, 8).passed, name)
    return SuiteResult("koszul", tally.passed, tally.details())


def check_point_counts(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Zeta and configuration series at L = q equal exhaustive counts."""
    tally = _Tally()
    varieties = {False: motivic.affine_line(), True: motivic.projective_space(1)}
    for projective, x in varieties.items():
        top = 5 if projective else 6
        zeta = motivic.kapranov_zeta(x, top)
        configs = motivic.config_gf(x, top)
        for q in (2, 3, 5):
            for k in range(top + 1):
                divisors = ffield.count_effective_divisors(q, k, projective, guard)
                configurations = ffield.count_configurations(q, k, projective, guard)
                label = {"variety": "P1" if projective else "A1", "q": q, "k": k}
                tally.record(zeta.coefficient(k).evaluate(q) == divisors, {**label, "series": "zeta"})
                tally.record(configs.coefficient(k).evaluate(q) == configurations, {**label, "series": "config"})
    tally.record(ffield.count_configurations(2, 2, projective=True, guard=guard) == 4, "C^2(P^1)(F_2) = 4")
    tally.record(ffield.count_configurations(2, 3, guard=guard) == 4, "C^3(A^1)(F_2) = 4")
    return SuiteResult("point-counts", tally.passed, tally.details())


def check_vw(guard: CostGuard = DEFAULT_GUARD, q: int | None = None, N: int | None = None) -> SuiteResult:
    """Colored-configuration inversion against 1 - q t."""
    tally = _Tally()
    if q is None and N is None:
        cases = [(2, 4), (3, 4)]
    else:
        cases = [(q if q is not None else 2, N if N is not None else 4)]
    reports = []
    for q_, n_ in cases:
        report = ffield.vw_inversion_check(q_, n_, guard)
        reports.append(report.to_dict())
        tally.record(report.passed, {"q": q_, "N": n_})
    return SuiteResult("vw", tally.passed, tally.details(reports=reports))


def check_densities(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Smooth-section counts match (q - 1)(q^d - q^(d-2)) and the stable density."""
    tally = _Tally()
    for q in (2, 3, 5):
        report = ffield.density_report(q, 7, d_min=3, guard=guard)
        for d, density in report.densities.items():
            count = density * q ** (d + 1)
            expected = (q - 1) * (q**d - q ** (d - 2))
            tally.record(count == expected and density == report.limit, {"q": q, "d": d})
    return SuiteResult("densities", tally.passed, tally.details())


def check_residuals(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """|residual| <= q^(d-k), an empirical envelope for truncated inclusion-exclusion."""
    tally = _Tally()
    reports = []
    for q in (2, 3):
        for d in (5, 6, 7):
            for k in (1, 2):
                if d < 2 * k + 1:
                    continue
                report = ffield.truncated_ie_discriminant(q, d, k, guard=guard)
                reports.append(report.to_dict())
                tally.record(report.within_bound, {"q": q, "d": d, "k": k, "residual": report.residual})
    return SuiteResult("residuals", tally.passed, tally.details(reports=reports))


def check_stable_betti(guard: CostGuard = DEFAULT_GUARD) -> SuiteResult:
    """Stable Poincare polynomials and the Euler characteristic square."""
    tally = _Tally()
    expected_poincare = {
        "P1": {0: 1, 1: 1, 3: 1, 4: 1},
        "P2": {0: 1, 1: 1, 3: 1, 4: 1, 5: 1, 6: 1, 8: 1, 9: 1},
    }
    corpus = series_corpus()
    for name in ("pt", "P1", "P2", "P1xP1"):
        x = corpus[name]
        v = cohom.cellular_cohomology(x)
        table = cohom.stable_homology_table(v, x.dim, len(x.cells))
        if name in expected_poincare:
            tally.record(table.poincare_polynomial() == expected_poincare[name], {"variety": name, "check": "poincare"})
        limit = motivic.exact_stable_limit(x, x.dim + 1)
        tally.record(table.euler_polynomial() == limit.poly, {"variety": name, "check": "stable_limit"})
        special = cohom.special_value(v, x.dim, x.dim + 1, len(x.cells))
        tally.record(special.euler_polynomial() == limit.poly, {"variety": name, "check": "special_value"})
    return SuiteResult("stable-betti", tally.passed, tally.details())


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "mobius-agreement": check_mobius_agreement,
    "mobius-inversion": check_mobius_inversion,
    "contractibility": check_contractibility,
    "retraction": check_retraction,
    "rank-ss": check_rank_spectral_sequence,
    "punctual": check_punctual,
    "skeletal-banerjee": check_skeletal_banerjee,
    "series": check_series,
    "koszul": check_koszul,
    "point-counts": check_point_counts,
    "vw": check_vw,
    "densities": check_densities,
    "residuals": check_residuals,
    "stable-betti": check_stable_betti,
}


def run_suite(name: str, guard: CostGuard = DEFAULT_GUARD, strict: bool = False, **params) -> SuiteResult:
    """Run one named suite.

    Args:
        name: Key of SUITES.
        guard: Cost guard passed to the suite.
        strict: Raise instead of returning a failed verdict.
        **params: Suite parameters; None values are dropped.

    Raises:
        InvalidInputError: Unknown suite, or parameters the suite does not take.
        VerificationError: strict is set and the suite failed.
    """
    try:
        suite = SUITES[name]
    except KeyError:
        raise InvalidInputError(f"Unknown suite: {name}. Known: {', '.join(SUITES)}") from None
    params = {k: v for k, v in params.items() if v is not None}
    start = time.perf_counter()
    try:
        result = suite(guard=guard, **params)
    except TypeError as e:
        raise InvalidInputError(f"Suite {name} does not accept {sorted(params)}: {e}") from e
    result.seconds = time.perf_counter() - start
    logger.info("Suite %s: %s in %.2fs", name, "pass" if result.passed else "FAIL", result.seconds)
    if strict and not result.passed:
        raise VerificationError(f"Suite {name} failed: {result.details.get('failures')}")
    return result


def run_all(guard: CostGuard = DEFAULT_GUARD, strict: bool = False) -> list[SuiteResult]:
    return [run_suite(name, guard, strict) for name in SUITES]
