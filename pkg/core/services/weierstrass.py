"""
Long Weierstrass models y² + a1xy + a3y = x³ + a2x² + a4x + a6 over Z.

The two families used by the toolkit:
  - E_n : y² = x³ + 3x + 2n, with Δ = -1728(n² + 1),
  - the Frey–Hellegouarch curve y² = x(x - a)(x + b) of an ABC triple,
    with Δ = 16(abc)².
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

from core.exceptions import NumberTheoryError


class ReductionKind(str, Enum):
    GOOD = "good"
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class CurveModel:
    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0

    def __post_init__(self):
        if self.discriminant == 0:
            raise NumberTheoryError(f"singular model {self.ainvs}")

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self) -> int:
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> int:
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self) -> int:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self) -> int:
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def c6(self) -> int:
        b2 = self.b2
        return -b2 * b2 * b2 + 36 * b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def transform(self, r: int = 0, s: int = 0, t: int = 0, u: int = 1) -> "CurveModel":
        """Model for x = u²x' + r, y = u³y' + u²sx' + t (u must divide exactly)."""
        a1, a2, a3, a4, a6 = self.ainvs
        new = (
            a1 + 2 * s,
            a2 - s * a1 + 3 * r - s * s,
            a3 + r * a1 + 2 * t,
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
        )
        scaled = []
        for value, weight in zip(new, (1, 2, 3, 4, 6)):
            div = u**weight
            if value % div:
                raise NumberTheoryError(f"scaling by u={u} is not integral on {new}")
            scaled.append(value // div)
        return CurveModel(*scaled)

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


def curve_for(n: int) -> CurveModel:
    """E_n : y² = x³ + 3x + 2n."""
    if n < 1:
        raise NumberTheoryError(f"n must be positive, got {n}")
    return CurveModel(a4=3, a6=2 * n)


def equation_discriminant(model: CurveModel) -> int:
    return model.discriminant


def frey_curve(a: int, b: int, c: int) -> CurveModel:
    """y² = x(x - a)(x + b) = x³ + (b - a)x² - abx."""
    if min(a, b, c) < 1:
        raise NumberTheoryError("a, b, c must be positive")
    if a + b != c:
        raise NumberTheoryError(f"{a} + {b} != {c}")
    if gcd(a, b) != 1:
        raise NumberTheoryError(f"{a} and {b} are not coprime")
    return CurveModel(a2=b - a, a4=-a * b)


def reduction_kind_by_search(model: CurveModel, p: int) -> ReductionKind:
    """
    Reduction type of this model mod p by brute force over F_p².

    Looks for a singular point; a node (two distinct tangents) means
    multiplicative, a cusp means additive. O(p²), meant for p <= 100 or so.
    """
    a1, a2, a3, a4, a6 = (a % p for a in model.ainvs)
    for x in range(p):
        for y in range(p):
            f = (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p
            fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % p
            fy = (2 * y + a1 * x + a3) % p
            if f == 0 and fx == 0 and fy == 0:
                # tangent cone Y² + a1XY - (3x + a2)X²
                disc = (a1 * a1 + 4 * (3 * x + a2)) % p
                return ReductionKind.MULTIPLICATIVE if disc else ReductionKind.ADDITIVE
    return ReductionKind.GOOD
