"""
Tate's algorithm: local reduction data of an integral Weierstrass model at p.

Works for every prime including 2 and 3. The model is moved around with
integral changes of coordinates until the Kodaira type can be read off; when
the model turns out to be non-minimal at p it is scaled by p and the loop
restarts. The returned discriminant valuation is that of a p-minimal model.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

from core.exceptions import NumberTheoryError
from core.services.integers import is_prime
from core.services.weierstrass import CurveModel, ReductionKind

logger = logging.getLogger(__name__)


class Kodaira(str, Enum):
    I = "I"
    I_STAR = "I*"
    II = "II"
    III = "III"
    IV = "IV"
    II_STAR = "II*"
    III_STAR = "III*"
    IV_STAR = "IV*"


@dataclass(frozen=True)
class LocalReductionData:
    p: int
    kodaira: Kodaira
    index: int
    f_p: int
    v_delta_min: int
    reduction_kind: ReductionKind
    minimal_model: CurveModel = field(compare=False)
    scalings: int = 0

    @property
    def kodaira_type(self) -> str:
        if self.kodaira is Kodaira.I:
            return f"I{self.index}"
        if self.kodaira is Kodaira.I_STAR:
            return f"I{self.index}*"
        return self.kodaira.value

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "kodaira": self.kodaira_type,
            "f_p": self.f_p,
            "v_delta_min": self.v_delta_min,
            "reduction": self.reduction_kind.value,
            "scalings": self.scalings,
        }


def _ord(p: int, x: int) -> float:
    """ν_p(x), with ν_p(0) = inf."""
    if x == 0:
        return math.inf
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def _inv(a: int, p: int) -> int:
    return pow(a % p, -1, p)


def tate_local(model: CurveModel, p: int) -> LocalReductionData:
    if not is_prime(p):
        raise NumberTheoryError(f"tate_local needs a prime, got {p}")
    half = (p + 1) // 2
    scalings = 0
    c = model

    def done(kodaira, index, f_p, n, kind=ReductionKind.ADDITIVE):
        return LocalReductionData(p, kodaira, index, f_p, n, kind, c, scalings)

    while True:
        n = int(_ord(p, c.discriminant))
        if n == 0:
            return done(Kodaira.I, 0, 0, 0, ReductionKind.GOOD)
        if c.c4 % p:
            return done(Kodaira.I, n, 1, n, ReductionKind.MULTIPLICATIVE)

        # additive (or non-minimal): move the singular point to (0, 0)
        if p == 2:
            r = c.a4 % 2
            t = (r * (1 + c.a2 + c.a4) + c.a6) % 2
        elif p == 3:
            r = (-c.b6) % 3
            t = (c.a1 * r + c.a3) % 3
        else:
            r = (-c.b2 * _inv(12, p)) % p
            t = (-(c.a1 * r + c.a3) * _inv(2, p)) % p
        c = c.transform(r, 0, t)

        if _ord(p, c.a6) < 2:
            return done(Kodaira.II, 0, n, n)
        if _ord(p, c.b8) < 3:
            return done(Kodaira.III, 0, n - 1, n)
        if _ord(p, c.b6) < 3:
            return done(Kodaira.IV, 0, n - 2, n)

        if p == 2:
            s = c.a2 % 2
            t = 2 * ((c.a6 // 4) % 2)
        else:
            s = (-c.a1 * half) % p
            t = (-c.a3 * half) % (p * p)
        c = c.transform(0, s, t)

        # now p | a1, a2; p² | a3, a4; p³ | a6
        b = c.a2 // p
        cc = c.a4 // (p * p)
        d = c.a6 // (p**3)
        w = 27 * d * d - b * b * cc * cc + 4 * b**3 * d - 18 * b * cc * d + 4 * cc**3
        x = 3 * cc - b * b

        if w % p:
            return done(Kodaira.I_STAR, 0, n - 4, n)

        if x % p:
            # double root: type I_m*
            if p == 2:
                r = cc % 2
            elif p == 3:
                r = (b * cc) % 3
            else:
                r = ((b * cc - 9 * d) * _inv(2 * x, p)) % p
            c = c.transform(p * r, 0, 0)
            ix = iy = 3
            mx = my = p * p
            while True:
                a2t = c.a2 // p
                a3t = c.a3 // my
                a4t = (c.a4 // p) // mx
                a6t = c.a6 // (mx * my)
                if (a3t * a3t + 4 * a6t) % p:
                    break
                t = a6t % 2 if p == 2 else (-a3t * half) % p
                c = c.transform(0, 0, my * t)
                my *= p
                iy += 1
                a2t = c.a2 // p
                a3t = c.a3 // my
                a4t = (c.a4 // p) // mx
                a6t = c.a6 // (mx * my)
                if (a4t * a4t - 4 * a6t * a2t) % p:
                    break
                r = (a6t * a2t) % 2 if p == 2 else (-a4t * _inv(2 * a2t, p)) % p
                c = c.transform(mx * r, 0, 0)
                mx *= p
                ix += 1
            return done(Kodaira.I_STAR, ix + iy - 5, n - ix - iy + 1, n)

        # triple root
        if p == 2:
            r = b % 2
        elif p == 3:
            r = (-d) % 3
        else:
            r = (-b * _inv(3, p)) % p
        c = c.transform(p * r, 0, 0)
        a3t = c.a3 // (p * p)
        a6t = c.a6 // (p**4)
        if (a3t * a3t + 4 * a6t) % p:
            return done(Kodaira.IV_STAR, 0, n - 6, n)
        t = a6t % 2 if p == 2 else (-a3t * half) % p
        c = c.transform(0, 0, p * p * t)
        if c.a4 % (p**4):
            return done(Kodaira.III_STAR, 0, n - 7, n)
        if c.a6 % (p**6):
            return done(Kodaira.II_STAR, 0, n - 8, n)

        logger.debug("model not minimal at %d; scaling by %d", p, p)
        c = c.transform(0, 0, 0, u=p)
        scalings += 1
