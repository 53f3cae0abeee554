"""
Global data of integral Weierstrass models: minimal discriminant, conductor,
and the exponent-product report for the family E_n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property

from core.services import get_setting
from core.services.bounds import BoundConstants, BoundReport
from core.services.integers import (
    exponent_product,
    factorize,
    log_int,
    radical,
    signed_valuation,
)
from core.services.tate import LocalReductionData, tate_local
from core.services.weierstrass import CurveModel, ReductionKind, curve_for

logger = logging.getLogger(__name__)

_BAD_SMALL = (2, 3)


@dataclass(frozen=True)
class GlobalReduction:
    model: CurveModel
    local: tuple[LocalReductionData, ...]

    @cached_property
    def minimal_discriminant(self) -> int:
        sign = -1 if self.model.discriminant < 0 else 1
        return sign * math.prod(d.p**d.v_delta_min for d in self.local)

    @cached_property
    def conductor(self) -> int:
        return math.prod(d.p**d.f_p for d in self.local)

    def at(self, p: int) -> LocalReductionData | None:
        for d in self.local:
            if d.p == p:
                return d
        return None

    def to_dict(self) -> dict:
        return {
            "model": list(self.model.ainvs),
            "discriminant": self.model.discriminant,
            "minimal_discriminant": self.minimal_discriminant,
            "conductor": self.conductor,
            "local": [d.to_dict() for d in self.local],
        }


def global_reduction(model: CurveModel) -> GlobalReduction:
    """Tate's algorithm at every prime dividing Δ_eq."""
    primes = factorize(abs(model.discriminant)).primes
    return GlobalReduction(model, tuple(tate_local(model, p) for p in primes))


def minimal_discriminant(model: CurveModel) -> int:
    return global_reduction(model).minimal_discriminant


def conductor(model: CurveModel) -> int:
    return global_reduction(model).conductor


def discriminant_shape(n: int, delta_min: int) -> tuple[int, int, bool]:
    """
    (s, t, ok) with Δ_min = -2^s·3^t·(n² + 1) when ok.

    s and t are differences of valuations and may be negative in principle.
    """
    value = n * n + 1
    s = signed_valuation(delta_min, 2) - signed_valuation(value, 2)
    t = signed_valuation(delta_min, 3) - signed_valuation(value, 3)
    lhs = -delta_min * 2 ** max(-s, 0) * 3 ** max(-t, 0)
    rhs = value * 2 ** max(s, 0) * 3 ** max(t, 0)
    return s, t, lhs == rhs


def szpiro_checks(glob: GlobalReduction, c: BoundConstants) -> tuple[BoundReport, ...]:
    """ν_p(Δ_min) <= κ·N·log N at every bad prime."""
    N = glob.conductor
    rhs = c.kappa * N * log_int(N) if N > 1 else 0.0
    return tuple(
        BoundReport.compare(d.v_delta_min, rhs, p=d.p, conductor=N) for d in glob.local
    )


def shimura_e_check(
    glob: GlobalReduction, c: BoundConstants, exponent: float | None = None
) -> BoundReport:
    """∏ ν_p(Δ_min) over p | N outside {2, 3} against κ'·N^exponent."""
    exponent = get_setting("SHIMURA_E_EXPONENT") if exponent is None else exponent
    N = glob.conductor
    lhs = math.prod(
        d.v_delta_min for d in glob.local if d.p not in _BAD_SMALL and d.f_p > 0
    )
    if float(exponent).is_integer():
        rhs = c.kappa_prime * N ** int(exponent)
    else:
        rhs = c.kappa_prime * math.exp(exponent * log_int(N))
    return BoundReport.compare(lhs, rhs, conductor=N, exponent=exponent)


@dataclass(frozen=True)
class LemmaProdReport:
    n: int
    exponent_product: int
    rad: int
    rad_power: int
    ratio: float
    holds: bool
    conductor: int
    minimal_discriminant: int
    s: int
    t: int
    shape_ok: bool
    szpiro: tuple[BoundReport, ...]
    shimura_e: BoundReport
    reduction: GlobalReduction

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "exponent_product": self.exponent_product,
            "rad": self.rad,
            "rad_power": self.rad_power,
            "ratio": self.ratio,
            "holds": self.holds,
            "conductor": self.conductor,
            "minimal_discriminant": self.minimal_discriminant,
            "s": self.s,
            "t": self.t,
            "shape_ok": self.shape_ok,
            "szpiro": [r.to_dict() for r in self.szpiro],
            "shimura_e": self.shimura_e.to_dict(),
            "local": [d.to_dict() for d in self.reduction.local],
        }


def lemma_prod_report(n: int, c: BoundConstants | None = None) -> LemmaProdReport:
    """∏ ν_p(n²+1) against K·rad(n²+1)^8, plus the curve data behind it."""
    c = c or BoundConstants()
    fact = factorize(n * n + 1)
    ep = exponent_product(fact)
    rad = radical(fact)
    rad_power = rad**8
    bound = BoundReport.compare(ep, c.K * rad_power)

    glob = global_reduction(curve_for(n))
    delta_min = glob.minimal_discriminant
    s, t, shape_ok = discriminant_shape(n, delta_min)
    if not shape_ok:
        logger.error("n=%d: minimal discriminant %d is not -2^s 3^t (n²+1)", n, delta_min)
    return LemmaProdReport(
        n=n,
        exponent_product=ep,
        rad=rad,
        rad_power=rad_power,
        ratio=bound.ratio,
        holds=bound.holds,
        conductor=glob.conductor,
        minimal_discriminant=delta_min,
        s=s,
        t=t,
        shape_ok=shape_ok,
        szpiro=szpiro_checks(glob, c),
        shimura_e=shimura_e_check(glob, c),
        reduction=glob,
    )


def family_invariant_failures(n: int) -> list[str]:
    """Every way E_n departs from its expected structure (empty when fine)."""
    model = curve_for(n)
    failures = []
    value = n * n + 1
    if model.discriminant != -1728 * value:
        failures.append(f"n={n}: Δ_eq = {model.discriminant} != -1728(n²+1)")
    if model.c4**3 - model.c6**2 != 1728 * model.discriminant:
        failures.append(f"n={n}: c4³ - c6² != 1728Δ")
    glob = global_reduction(model)
    for p, e in factorize(value).factors:
        if p == 2:
            continue
        local = glob.at(p)
        if local.reduction_kind is not ReductionKind.MULTIPLICATIVE or local.f_p != 1:
            failures.append(f"n={n}: reduction at {p} is {local.kodaira_type}, f={local.f_p}")
        if local.v_delta_min != e:
            failures.append(f"n={n}: ν_{p}(Δ_min) = {local.v_delta_min} != {e}")
    s, t, ok = discriminant_shape(n, glob.minimal_discriminant)
    cap = get_setting("EXPONENT_CAP_S_T")
    if not ok or abs(s) > cap or abs(t) > cap:
        failures.append(f"n={n}: Δ_min shape broken (s={s}, t={t})")
    for d in glob.local:
        limit = 8 if d.p == 2 else 5 if d.p == 3 else 2
        if d.f_p > limit:
            failures.append(f"n={n}: f_{d.p} = {d.f_p} exceeds {limit}")
    return failures
