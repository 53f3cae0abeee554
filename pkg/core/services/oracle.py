"""
128-bit reference evaluations of the bound formulas (mpmath), used to check
the double-precision evaluators in bounds.py.
"""

from __future__ import annotations

import logging
import random

import mpmath

from core.services.bounds import (
    BoundConstants,
    amgm_product_bound,
    chain_rhs,
    eg_arch_rhs,
    eg_nonarch_rhs,
    threshold_B,
)

logger = logging.getLogger(__name__)

PRECISION_BITS = 128


def _ctx():
    ctx = mpmath.MPContext()
    ctx.prec = PRECISION_BITS
    return ctx


def threshold_B_ref(R, ctx) -> mpmath.mpf:
    L = ctx.log(ctx.mpf(R))
    return ctx.exp(ctx.sqrt(L * ctx.log(L)))


def eg_arch_ref(m, heights, h_xi, c: BoundConstants, ctx):
    prod = ctx.fprod(ctx.mpf(h) for h in heights)
    return ctx.power(ctx.mpf(c.K_d), m) * ctx.log(max(ctx.mpf(ctx.e), ctx.mpf(h_xi))) * prod


def eg_nonarch_ref(m, heights, h_xi, norm_p, c: BoundConstants, ctx):
    N = ctx.mpf(norm_p)
    prod = ctx.fprod(ctx.mpf(h) for h in heights)
    return (
        ctx.power(ctx.mpf(c.K_d), m)
        * (N / ctx.log(N))
        * ctx.log(max(ctx.mpf(ctx.e), N * ctx.mpf(h_xi)))
        * prod
    )


def amgm_ref(logR, m, ctx):
    return ctx.power(ctx.mpf(logR) / (m - 1), m - 1)


def chain_ref(logR, B, m, c: BoundConstants, ctx):
    two_k = 2 * ctx.mpf(c.K)
    L = ctx.mpf(logR)
    return two_k * ctx.mpf(B) * L * ctx.power(two_k * L / (m - 1), m - 1)


def _rel_err(value: float, ref, ctx) -> float:
    if ref == 0:
        return abs(value)
    return float(abs((ctx.mpf(value) - ref) / ref))


def compare_with_oracle(seed: int = 0, count: int = 1000) -> dict[str, float]:
    """Max relative error of each evaluator over `count` seeded random inputs."""
    ctx = _ctx()
    rng = random.Random(seed)
    worst = {"threshold_B": 0.0, "eg_arch": 0.0, "eg_nonarch": 0.0, "amgm": 0.0, "chain": 0.0}

    for _ in range(count):
        c = BoundConstants(K_d=rng.uniform(0.5, 4.0), K=rng.uniform(0.25, 2.0))
        R = 10 ** rng.uniform(1.2, 12)
        m = rng.randint(1, 6)
        heights = [rng.uniform(0.1, 50.0) for _ in range(m)]
        h_xi = rng.uniform(0.0, 100.0)
        norm_p = rng.randint(2, 10**6)
        logR = rng.uniform(0.5, 50.0)
        B = rng.uniform(1.0, 1e4)
        m2 = max(m, 2)

        pairs = (
            ("threshold_B", threshold_B(R), threshold_B_ref(R, ctx)),
            ("eg_arch", eg_arch_rhs(m, heights, h_xi, c), eg_arch_ref(m, heights, h_xi, c, ctx)),
            (
                "eg_nonarch",
                eg_nonarch_rhs(m, heights, h_xi, norm_p, c),
                eg_nonarch_ref(m, heights, h_xi, norm_p, c, ctx),
            ),
            ("amgm", amgm_product_bound(logR, m2), amgm_ref(logR, m2, ctx)),
            ("chain", chain_rhs(logR, B, m2, c), chain_ref(logR, B, m2, c, ctx)),
        )
        for name, value, ref in pairs:
            worst[name] = max(worst[name], _rel_err(value, ref, ctx))

    logger.info("oracle comparison over %d inputs: %s", count, worst)
    return worst
