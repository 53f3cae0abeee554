"""
Range checks of the structural properties the toolkit relies on.

Each check returns a CheckResult; nothing here raises on a violation, the
command layer decides the exit code.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from core.services.abc import anchor_report, enumerate_triples, shimura_abc_check, triple_report
from core.services.bounds import (
    BoundConstants,
    amgm_product_bound,
    calculus_check,
    chebyshev_bound_check,
    threshold_B,
)
from core.services.curves import family_invariant_failures
from core.services.gaussian import (
    GaussianInt,
    GaussianRational,
    decompose_xi,
    factor_n_plus_i,
    xi_of,
)
from core.services.integers import exponent_product, factorize, largest_prime_factor, log_int, radical
from core.services.oracle import compare_with_oracle
from core.services.sieve import simple_sieve, theta_linear_check
from core.services.sweep import theorem2_chain_failures
from core.services.tate import tate_local
from core.services.weierstrass import curve_for, reduction_kind_by_search

logger = logging.getLogger(__name__)

HEIGHT_TOL = 1e-9
ORACLE_TOL = 1e-9
CALCULUS_POINTS = (3.0, 10.0, 1e3, 1e6)
SEARCH_PRIMES = tuple(p for p in simple_sieve(100).tolist() if p >= 5)


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        logger.error(message)
        self.failures.append(message)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "ok": self.ok,
            "violations": len(self.failures),
            "stats": self.stats,
        }


def check_gaussian(n_max: int) -> CheckResult:
    result = CheckResult("gaussian")
    for n in range(1, n_max + 1):
        fact = factorize(n * n + 1)
        gfact = factor_n_plus_i(n)
        if gfact.reconstruct() != GaussianInt(n, 1):
            result.fail(f"n={n}: factorization does not rebuild n+i")
        for p, e in fact.factors:
            if p == 2 and e > 1:
                result.fail(f"n={n}: ν_2(n²+1) = {e}")
            elif p > 2 and p % 4 != 1:
                result.fail(f"n={n}: {p} ≡ 3 (mod 4) divides n²+1")
        if [(g.norm, e) for g, e in gfact.factors] != list(fact.factors):
            result.fail(f"n={n}: e_j differ from ν_p(n²+1)")
        result.checked += 1
    return result


def check_decomposition(n_max: int) -> CheckResult:
    result = CheckResult("decomposition")
    worst_xi0 = 0.0
    for n in range(1, n_max + 1):
        gfact = factor_n_plus_i(n)
        rad = radical(factorize(n * n + 1))
        log_r = log_int(rad)
        xi = xi_of(n).value()
        if 1 - xi != GaussianRational.quotient(GaussianInt(0, 2), GaussianInt(n, 1)):
            result.fail(f"n={n}: 1 - ξ != 2i/(n+i)")
        thresholds = [1.0] + ([threshold_B(rad)] if rad > math.e else [])
        for B in thresholds:
            dec = decompose_xi(gfact, B)
            if dec.reconstruct() != dec.target:
                result.fail(f"n={n}, B={B}: reconstruction differs from ξ")
            h0 = dec.xi0_height()
            if h0 > B * log_r * (1 + HEIGHT_TOL):
                result.fail(f"n={n}, B={B}: h(ξ_0) = {h0} > B log R")
            worst_xi0 = max(worst_xi0, h0 / (B * log_r))
            for g in dec.large_generators:
                if g.height() > math.log(g.prime) * (1 + HEIGHT_TOL):
                    result.fail(f"n={n}: h(ξ_{g.index}) > log {g.prime}")
            result.checked += 1
    result.stats["max_xi0_height_ratio"] = worst_xi0
    return result


def check_curves(n_max: int, search_n_max: int = 200) -> CheckResult:
    """Family structure for every n; brute-force reduction agreement for small n."""
    result = CheckResult("curves")
    for n in range(1, n_max + 1):
        for failure in family_invariant_failures(n):
            result.fail(failure)
        model = curve_for(n)
        delta = model.discriminant
        # p ∤ Δ already means good reduction, so past search_n_max only p | Δ are searched
        primes = SEARCH_PRIMES if n <= search_n_max else [p for p in SEARCH_PRIMES if delta % p == 0]
        for p in primes:
            expected = reduction_kind_by_search(model, p)
            got = tate_local(model, p).reduction_kind
            if got is not expected:
                result.fail(f"n={n}, p={p}: Tate says {got.value}, search says {expected.value}")
        result.checked += 1
    return result


def check_chebyshev(x_max: int, n_max: int) -> CheckResult:
    result = CheckResult("chebyshev")
    holds, worst = theta_linear_check(x_max)
    if not holds:
        result.fail(f"θ(x) >= 4x somewhere in [2, {x_max}] (max ratio {worst})")
    result.stats["max_theta_ratio"] = worst
    worst_step = 0.0
    for n in range(16, n_max + 1):
        fact = factorize(n * n + 1)
        report = chebyshev_bound_check(largest_prime_factor(fact), radical(fact))
        if not report.holds:
            result.fail(f"n={n}: 𝒫(n²+1) < ¼ log rad(n²+1)")
        worst_step = max(worst_step, report.ratio)
        result.checked += 1
    result.stats["max_step_ratio"] = worst_step
    return result


def check_products(n_max: int, c_max: int) -> CheckResult:
    result = CheckResult("products")
    worst = 0.0
    for n in range(1, n_max + 1):
        fact = factorize(n * n + 1)
        rad = radical(fact)
        ep = exponent_product(fact)
        if ep > rad**8:
            result.fail(f"n={n}: ∏ ν_p = {ep} > rad^8")
        worst = max(worst, ep / rad**8)
        result.checked += 1
    result.stats["max_lemma_ratio"] = worst
    worst = 0.0
    for t in enumerate_triples(c_max):
        check = shimura_abc_check(triple_report(t))
        if not check.holds:
            result.fail(f"{t.as_tuple()}: ∏ ν_p(abc) > R^3")
        worst = max(worst, check.ratio)
        result.checked += 1
    result.stats["max_shimura_ratio"] = worst
    return result


def check_numerics(n_max: int, seed: int = 0, count: int = 1000) -> CheckResult:
    result = CheckResult("numerics")
    errors = compare_with_oracle(seed, count)
    for name, err in errors.items():
        if err > ORACLE_TOL:
            result.fail(f"{name}: relative error {err} against the 128-bit oracle")
    result.stats["oracle_max_rel_error"] = errors
    for A in CALCULUS_POINTS:
        if not calculus_check(A):
            result.fail(f"t·log(A/t) not increasing on [1, A/e] for A = {A}")
    for n in range(1, n_max + 1):
        fact = factorize(n * n + 1)
        m = 1 + len(fact.factors)
        prod = math.prod(math.log(p) for p in fact.primes)
        if prod > amgm_product_bound(log_int(radical(fact)), m) * (1 + HEIGHT_TOL):
            result.fail(f"n={n}: ∏ log p_j exceeds the AM-GM bound")
        result.checked += 1
    return result


def check_chain(n_max: int, c: BoundConstants) -> CheckResult:
    result = CheckResult("chain")
    for failure in theorem2_chain_failures(16, n_max, c):
        result.fail(failure)
    result.checked = max(0, n_max - 15)
    return result


def check_anchor(c_max: int) -> CheckResult:
    """log c / (2 log R) <= ν_{p0}(x) on every triple with c^{1/2} <= a <= c."""
    result = CheckResult("anchor")
    worst = 0.0
    for t in enumerate_triples(c_max):
        if t.a * t.a < t.c:
            continue
        anchor = anchor_report(triple_report(t))
        if not anchor.holds:
            result.fail(f"{t.as_tuple()}: anchor broken {anchor.to_dict()}")
        worst = max(worst, anchor.ratio)
        result.checked += 1
    result.stats["max_anchor_ratio"] = worst
    return result
