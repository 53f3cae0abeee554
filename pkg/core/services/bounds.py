"""
Numeric evaluation of the approximation bounds and the proof-chain inequalities.

All proof constants live in BoundConstants and default to 1. Evaluators return
plain floats; comparisons are wrapped in BoundReport so a caller can record the
ratio instead of only a yes/no.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from numbers import Integral
from typing import Iterable, NamedTuple

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, PositiveFloat, ValidationError

from core.exceptions import DomainGuardError, NumberTheoryError
from core.services import get_setting
from core.services.gaussian import decompose_xi, factor_n_plus_i, xi_of
from core.services.integers import factorize, log_int, radical
from core.services.sieve import chebyshev_theta

logger = logging.getLogger(__name__)

FIT_SHAPES = ("thm1", "thm2", "cor4", "chowla")


class BoundConstants(BaseModel):
    """Absolute constants of the approximation theorem and the proof chains."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    K_d: PositiveFloat = 1.0
    K: PositiveFloat = 1.0
    K_prime: PositiveFloat = 1.0
    K_double_prime: PositiveFloat = 1.0
    M: PositiveFloat = 1.0
    kappa: PositiveFloat = 1.0
    kappa_prime: PositiveFloat = 1.0

    @classmethod
    def load(cls, config_path=None, overrides: Iterable[str] = ()) -> "BoundConstants":
        """
        Read a flat `key = value` file, then apply `key=value` overrides.

        Unknown keys and non-positive values raise NumberTheoryError.
        """
        values: dict[str, str] = {}
        if config_path:
            values.update({k: v for k, v in dotenv_values(config_path).items() if v is not None})
        for item in overrides:
            key, sep, value = item.partition("=")
            if not sep or not key.strip():
                raise NumberTheoryError(f"expected key=value, got {item!r}")
            values[key.strip()] = value.strip()
        try:
            return cls.model_validate(values)
        except ValidationError as exc:
            raise NumberTheoryError(f"invalid bound constants: {exc}") from exc


def _safe_float(x) -> float:
    try:
        return float(x)
    except OverflowError:
        return math.inf


def _log_of(x) -> float:
    if isinstance(x, Integral):
        return log_int(int(x))
    return math.log(x)


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    holds: bool
    ratio: float
    inputs_echo: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, lhs, rhs, **inputs) -> "BoundReport":
        """
        holds is lhs <= rhs, computed exactly when both sides are integers.

        The ratio goes through logs when the plain quotient would overflow.
        """
        holds = lhs <= rhs
        if rhs > 0 and lhs > 0:
            try:
                ratio = lhs / rhs
            except OverflowError:
                ratio = math.exp(_log_of(lhs) - _log_of(rhs))
        elif rhs > 0:
            ratio = 0.0 if lhs == 0 else float(lhs) / float(rhs)
        else:
            ratio = math.inf
        return cls(_safe_float(lhs), _safe_float(rhs), bool(holds), float(ratio), inputs)

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "ratio": self.ratio,
            "inputs": self.inputs_echo,
        }


# ---------------------------------------------------------------------
# Logs and the threshold
# ---------------------------------------------------------------------


def iterated_log(x, k: int) -> float:
    """log_k x; every intermediate argument must exceed 1."""
    if k < 1:
        raise NumberTheoryError(f"k must be >= 1, got {k}")
    value = None
    for step in range(k):
        arg = x if value is None else value
        if arg <= 1:
            raise DomainGuardError(f"log_{k} undefined at {x}: step {step + 1} sees {arg}")
        value = _log_of(arg)
    return value


def threshold_B(R) -> float:
    """B(R) = exp(√(log R · log log R)) for R > e."""
    if R <= math.e:
        raise DomainGuardError(f"threshold_B needs R > e, got {R}")
    L = _log_of(R)
    return math.exp(math.sqrt(L * math.log(L)))


# ---------------------------------------------------------------------
# Approximation bounds
# ---------------------------------------------------------------------


def _check_heights(m: int, gen_heights) -> list[float]:
    heights = [float(h) for h in gen_heights]
    if not heights:
        raise NumberTheoryError("empty generator height list")
    if m < 1 or len(heights) != m:
        raise NumberTheoryError(f"m = {m} but {len(heights)} generator heights given")
    if any(h <= 0 for h in heights):
        raise NumberTheoryError(f"generator heights must be positive: {heights}")
    return heights


def eg_arch_rhs(m: int, gen_heights, h_xi: float, c: BoundConstants) -> float:
    """K_d^m · log max(e, h(ξ)) · ∏ h(ξ_j)."""
    heights = _check_heights(m, gen_heights)
    return c.K_d**m * math.log(max(math.e, h_xi)) * math.prod(heights)


def eg_nonarch_rhs(m: int, gen_heights, h_xi: float, norm_p: int, c: BoundConstants) -> float:
    """K_d^m · (N𝔭 / log N𝔭) · log max(e, N𝔭·h(ξ)) · ∏ h(ξ_j)."""
    if norm_p < 2:
        raise NumberTheoryError(f"norm_p must be >= 2, got {norm_p}")
    heights = _check_heights(m, gen_heights)
    return (
        c.K_d**m
        * (norm_p / math.log(norm_p))
        * math.log(max(math.e, norm_p * h_xi))
        * math.prod(heights)
    )


def amgm_product_bound(logR: float, m: int) -> float:
    if logR <= 0:
        raise NumberTheoryError(f"logR must be positive, got {logR}")
    if m < 2:
        raise NumberTheoryError(f"amgm bound needs m >= 2, got {m}")
    return (logR / (m - 1)) ** (m - 1)


def chain_rhs(logR: float, B: float, m: int, c: BoundConstants) -> float:
    """2K·B·logR·(2K·logR/(m-1))^(m-1)."""
    if m < 2:
        raise NumberTheoryError(f"chain_rhs needs m >= 2, got {m}; use chain_rhs_single")
    if logR <= 0 or B <= 0:
        raise NumberTheoryError("logR and B must be positive")
    two_k = 2 * c.K
    return two_k * B * logR * (two_k * logR / (m - 1)) ** (m - 1)


def chain_rhs_single(logR: float, B: float, c: BoundConstants) -> float:
    """The m = 1 branch: 2K·B·logR."""
    if logR <= 0 or B <= 0:
        raise NumberTheoryError("logR and B must be positive")
    return 2 * c.K * B * logR


def large_exponent_count_bound(logR: float, B: float, c: BoundConstants) -> float:
    """(8 log R + log κ) / log(B/2): a cap on the number of exponents above B."""
    if B <= 2:
        raise DomainGuardError(f"count bound needs B > 2, got {B}")
    return (8 * logR + math.log(c.kappa)) / math.log(B / 2)


def abc_chain_rhs(logR: float, B: float, m: int, c: BoundConstants) -> float:
    """K'·K^m·B·(log R)²·(log R/(m-1))^(m-1); the (log R)/(m-1) factor drops for m = 1."""
    if m < 1:
        raise NumberTheoryError(f"m must be >= 1, got {m}")
    base = c.K_prime * c.K**m * B * logR * logR
    if m == 1:
        return base
    return base * amgm_product_bound(logR, m)


def abc_large_exponent_bound(logR: float) -> float:
    """3·√(log R / log₂ R) = 3 log R / log B."""
    if logR <= 1:
        raise DomainGuardError(f"needs log R > 1, got {logR}")
    return 3 * math.sqrt(logR / math.log(logR))


def calculus_check(A: float, grid: int | None = None) -> bool:
    """t ↦ t·log(A/t) strictly increases on a uniform grid of [1, A/e]."""
    if A <= math.e:
        raise DomainGuardError(f"calculus_check needs A > e, got {A}")
    grid = grid or get_setting("CALCULUS_GRID")
    if grid < 2:
        raise NumberTheoryError(f"grid must be >= 2, got {grid}")
    t = np.linspace(1.0, A / math.e, grid)
    values = t * np.log(A / t)
    return bool(np.all(np.diff(values) > 0))


# ---------------------------------------------------------------------
# Empirical constants
# ---------------------------------------------------------------------


class KappaSample(NamedTuple):
    n: int
    lhs: float
    shape: str


def kappa_ratio(n: int, lhs: float, shape: str) -> float:
    """The quantity whose infimum is κ̂ for one sample."""
    if shape not in FIT_SHAPES:
        raise NumberTheoryError(f"unknown shape {shape!r}")
    if n < 16:
        raise DomainGuardError(f"log_3 n is not positive for n = {n} < 16")
    if shape == "chowla":
        return lhs / iterated_log(n, 2)
    return lhs * iterated_log(n, 3) / iterated_log(n, 2) ** 2


def fit_kappa(series: Iterable[KappaSample], shape: str, n_min: int | None = None) -> float:
    """
    Largest κ with lhs >= κ·(log₂ n)²/log₃ n over the sampled range.

    Samples below n_min are skipped; n_min itself must be at least 16.
    """
    n_min = get_setting("FIT_NMIN") if n_min is None else n_min
    if n_min < 16:
        raise DomainGuardError(f"n_min must be >= 16, got {n_min}")
    best = math.inf
    count = 0
    for sample in series:
        if sample.shape != shape:
            raise NumberTheoryError(f"sample of shape {sample.shape!r} in a {shape!r} fit")
        if sample.n < n_min:
            continue
        best = min(best, kappa_ratio(sample.n, sample.lhs, shape))
        count += 1
    if not count:
        raise NumberTheoryError(f"no samples with n >= {n_min} to fit {shape}")
    logger.info("fitted %s over %d samples: kappa = %.6g", shape, count, best)
    return best


# ---------------------------------------------------------------------
# Proof-chain reports
# ---------------------------------------------------------------------


def chebyshev_bound_check(p_max: int, rad: int) -> BoundReport:
    """
    log R <= θ(𝒫) <= 4𝒫, i.e. 𝒫 >= ¼ log R.

    rad divides the primorial of its largest prime, so the first step is exact.
    """
    log_r = log_int(rad)
    theta = chebyshev_theta(p_max)
    report = BoundReport.compare(log_r, 4 * p_max, p_max=p_max, theta=theta)
    if log_r > theta * (1 + 1e-12):
        return BoundReport(report.lhs, report.rhs, False, report.ratio, report.inputs_echo)
    return report


@dataclass(frozen=True)
class Theorem2Chain:
    n: int
    rad: int
    B: float
    m: int
    arch: BoundReport
    chain: BoundReport
    implication_holds: bool
    count_bound: BoundReport | None
    xi0_height_ok: bool
    generator_heights_ok: bool

    @property
    def holds(self) -> bool:
        return self.implication_holds and self.xi0_height_ok and self.generator_heights_ok

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "rad": self.rad,
            "B": self.B,
            "m": self.m,
            "arch": self.arch.to_dict(),
            "chain": self.chain.to_dict(),
            "implication_holds": self.implication_holds,
            "count_bound": self.count_bound.to_dict() if self.count_bound else None,
            "xi0_height_ok": self.xi0_height_ok,
            "generator_heights_ok": self.generator_heights_ok,
        }


def theorem2_chain(n: int, c: BoundConstants, B: float | None = None) -> Theorem2Chain:
    """
    Run the log rad(n²+1) argument for one n.

    Generator heights fed to the approximation bound are the proof's upper
    bounds: B·log R for ξ_0 and log p_j for j in I. Whenever the bound
    dominates log((n²+1)/4), the chain inequality √(log n) <= rhs must hold.
    """
    if n < 2:
        raise DomainGuardError(f"theorem2_chain needs n >= 2, got {n}")
    rad = radical(factorize(n * n + 1))
    log_r = log_int(rad)
    B = threshold_B(rad) if B is None else B
    dec = decompose_xi(factor_n_plus_i(n), B)
    m = dec.m
    h_xi = xi_of(n).height()

    heights = [B * log_r] + [math.log(g.prime) for g in dec.large_generators]
    arch_lhs = log_int(n * n + 1) - math.log(4)
    arch = BoundReport.compare(arch_lhs, eg_arch_rhs(m, heights, h_xi, c), m=m, h_xi=h_xi)

    rhs = chain_rhs(log_r, B, m, c) if m >= 2 else chain_rhs_single(log_r, B, c)
    chain = BoundReport.compare(math.sqrt(math.log(n)), rhs, logR=log_r, B=B, m=m)

    count_bound = None
    if B > 2:
        count_bound = BoundReport.compare(m - 1, large_exponent_count_bound(log_r, B, c), B=B)

    tol = 1e-9
    xi0_ok = dec.xi0_height() <= B * log_r * (1 + tol)
    gen_ok = all(
        g.height() <= math.log(g.prime) * (1 + tol) for g in dec.large_generators
    )
    return Theorem2Chain(
        n=n,
        rad=rad,
        B=B,
        m=m,
        arch=arch,
        chain=chain,
        implication_holds=(not arch.holds) or chain.holds,
        count_bound=count_bound,
        xi0_height_ok=xi0_ok,
        generator_heights_ok=gen_ok,
    )
