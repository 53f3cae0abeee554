"""
Arithmetic in Z[i] and Q(i).

Covers the Euclidean structure of Z[i], splitting of primes p = 2 or
p ≡ 1 (mod 4), the factorization n + i = u·∏ γ_j^{e_j}, heights on Q(i), and
the threshold split

    (n - i)/(n + i) = w · ξ_0 · ∏_{j ∈ I} ξ_j^{e_j},   ξ_j = conj(γ_j)/γ_j,

where I collects the indices with e_j > B.

Canonical associates live in the first quadrant: re > 0 and im >= 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from core.exceptions import NumberTheoryError
from core.services.integers import factorize, is_prime, log_int

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class GaussianInt:
    re: int
    im: int = 0

    @classmethod
    def coerce(cls, other) -> "GaussianInt":
        if isinstance(other, GaussianInt):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return cls(other, 0)
        raise TypeError(f"cannot use {other!r} as a Gaussian integer")

    def __add__(self, other):
        other = GaussianInt.coerce(other)
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianInt.coerce(other)
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianInt.coerce(other) - self

    def __mul__(self, other):
        other = GaussianInt.coerce(other)
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __pow__(self, exp: int):
        if exp < 0:
            raise NumberTheoryError("negative powers leave Z[i]; use GaussianRational")
        result, base = ONE, self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __str__(self):
        if not self.im:
            return str(self.re)
        imag = {1: "i", -1: "-i"}.get(self.im, f"{self.im}i")
        if not self.re:
            return imag
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{imag.lstrip('-')}"

    @property
    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def is_unit(self) -> bool:
        return self.norm == 1

    def canonical(self) -> "GaussianInt":
        """The associate with re > 0 and im >= 0 (zero maps to zero)."""
        z = self
        if not z:
            return z
        for _ in range(4):
            if z.re > 0 and z.im >= 0:
                return z
            z = z * I
        raise AssertionError("unreachable: one associate is always canonical")

    def unit_to_canonical(self) -> "GaussianInt":
        """The unit v with self = v · self.canonical()."""
        c = self.canonical()
        for v in UNITS:
            if v * c == self:
                return v
        raise AssertionError("unreachable")


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS = (ONE, I, -ONE, -I)
ONE_PLUS_I = GaussianInt(1, 1)


def _round_half_down(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), ties toward -inf."""
    return -((den - 2 * num) // (2 * den))


def gi_divmod(alpha: GaussianInt, beta: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """alpha = q·beta + r with norm(r) <= norm(beta)/2."""
    alpha, beta = GaussianInt.coerce(alpha), GaussianInt.coerce(beta)
    if not beta:
        raise ZeroDivisionError(f"gi_divmod({alpha}, 0)")
    num = alpha * beta.conjugate()
    den = beta.norm
    q = GaussianInt(_round_half_down(num.re, den), _round_half_down(num.im, den))
    return q, alpha - q * beta


def exact_div(alpha: GaussianInt, beta: GaussianInt) -> GaussianInt | None:
    """alpha / beta when it lies in Z[i], else None."""
    num = GaussianInt.coerce(alpha) * GaussianInt.coerce(beta).conjugate()
    den = beta.norm
    if num.re % den or num.im % den:
        return None
    return GaussianInt(num.re // den, num.im // den)


def gi_gcd(alpha: GaussianInt, beta: GaussianInt) -> GaussianInt:
    """A gcd in canonical-associate form."""
    a, b = GaussianInt.coerce(alpha), GaussianInt.coerce(beta)
    if not a and not b:
        raise NumberTheoryError("gcd(0, 0) is undefined")
    while b:
        a, b = b, gi_divmod(a, b)[1]
    return a.canonical()


def gi_valuation(alpha: GaussianInt, pi: GaussianInt) -> int:
    """Exponent of the irreducible pi in alpha != 0."""
    if not alpha:
        raise NumberTheoryError("valuation of 0 is infinite")
    e = 0
    while (q := exact_div(alpha, pi)) is not None:
        alpha = q
        e += 1
    return e


def _sqrt_minus_one_mod(p: int) -> int:
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return pow(c, (p - 1) // 4, p)
    raise NumberTheoryError(f"no quadratic non-residue mod {p}")


def split_prime(p: int) -> GaussianInt:
    """A canonical irreducible of norm p, for p = 2 or p ≡ 1 (mod 4)."""
    if not is_prime(p):
        raise NumberTheoryError(f"{p} is not prime")
    if p == 2:
        return ONE_PLUS_I
    if p % 4 != 1:
        raise NumberTheoryError(f"{p} ≡ 3 (mod 4) is inert in Z[i]")
    r = _sqrt_minus_one_mod(p)
    pi = gi_gcd(GaussianInt(p), GaussianInt(r, 1))
    if pi.norm != p:
        raise AssertionError(f"split of {p} produced {pi}")
    return pi


def primes_above(p: int) -> tuple[tuple[GaussianInt, int], ...]:
    """(canonical Gaussian prime, its norm) for every prime of Z[i] over p."""
    if p == 2:
        return ((ONE_PLUS_I, 2),)
    if p % 4 == 3:
        return ((GaussianInt(p), p * p),)
    pi = split_prime(p)
    return ((pi, p), (pi.conjugate().canonical(), p))


@dataclass(frozen=True)
class GaussianFactorization:
    """n + i = unit · ∏ gamma^e with pairwise non-associated canonical gammas."""

    n: int
    unit: GaussianInt
    factors: tuple[tuple[GaussianInt, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        """p_j = norm(γ_j): the rational prime below each γ_j."""
        return tuple(g.norm for g, _ in self.factors)

    def reconstruct(self) -> GaussianInt:
        value = self.unit
        for gamma, e in self.factors:
            value = value * gamma**e
        return value


def factor_n_plus_i(n: int) -> GaussianFactorization:
    """Factor n + i in Z[i] by splitting the primes of n² + 1."""
    if n < 1:
        raise NumberTheoryError(f"n must be positive, got {n}")
    rest = GaussianInt(n, 1)
    factors = []
    for p, e in factorize(n * n + 1).factors:
        pi = split_prime(p)
        if exact_div(rest, pi) is None:
            pi = pi.conjugate().canonical()
        for _ in range(e):
            q = exact_div(rest, pi)
            if q is None:
                raise NumberTheoryError(f"{pi}^{e} does not divide {n}+i")
            rest = q
        factors.append((pi, e))
    if not rest.is_unit():
        raise NumberTheoryError(f"cofactor {rest} of {n}+i is not a unit")
    return GaussianFactorization(n, rest, tuple(factors))


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """Exact element of Q(i)."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def coerce(cls, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, GaussianInt):
            return cls(Fraction(other.re), Fraction(other.im))
        if isinstance(other, (int, Fraction)):
            return cls(Fraction(other))
        raise TypeError(f"cannot use {other!r} as an element of Q(i)")

    @classmethod
    def quotient(cls, num: GaussianInt, den: GaussianInt) -> "GaussianRational":
        return cls.coerce(num) / cls.coerce(den)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        den = o.re * o.re + o.im * o.im
        if not den:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, exp: int):
        if exp < 0:
            return GaussianRational(Fraction(1)) / self ** (-exp)
        result, base = GaussianRational(Fraction(1)), self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re})+({self.im})i"


@dataclass(frozen=True)
class GaussianFraction:
    """num/den with gcd(num, den) a unit."""

    num: GaussianInt
    den: GaussianInt

    @classmethod
    def reduced(cls, num: GaussianInt, den: GaussianInt) -> "GaussianFraction":
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls(ZERO, ONE)
        g = gi_gcd(num, den)
        return cls(exact_div(num, g), exact_div(den, g))

    def value(self) -> GaussianRational:
        return GaussianRational.quotient(self.num, self.den)

    def height(self) -> float:
        return height_qi(self.num, self.den)

    def __str__(self):
        return f"({self.num})/({self.den})"


def height_qi(beta: GaussianInt, delta: GaussianInt) -> float:
    """
    h(β/δ) for coprime β, δ in Z[i].

    With d = 2 the complex place contributes log max(1, N β / N δ) and the
    primes dividing δ contribute log N δ in total, so the place sum collapses
    to ½·log max(N β, N δ). height_by_places() is the long-hand version.
    """
    beta, delta = GaussianInt.coerce(beta), GaussianInt.coerce(delta)
    if not delta:
        raise ZeroDivisionError("height of x/0")
    if not beta:
        return 0.0
    if not gi_gcd(beta, delta).is_unit():
        raise NumberTheoryError(f"{beta} and {delta} are not coprime")
    return 0.5 * log_int(max(beta.norm, delta.norm))


def height_by_places(beta: GaussianInt, delta: GaussianInt) -> float:
    """h(β/δ) summed place by place: (1/2)·Σ_v log max(1, |x|_v)."""
    beta, delta = GaussianInt.coerce(beta), GaussianInt.coerce(delta)
    if not delta:
        raise ZeroDivisionError("height of x/0")
    if not beta:
        return 0.0
    # complex place: |x|_v = |x|^2 = N β / N δ
    total = max(0.0, log_int(beta.norm) - log_int(delta.norm))
    for p, _ in factorize(delta.norm).factors:
        for pi, norm_pi in primes_above(p):
            v = gi_valuation(beta, pi) - gi_valuation(delta, pi)
            if v < 0:
                total += -v * math.log(norm_pi)
    return total / 2


def xi_of(n: int) -> GaussianFraction:
    """ξ = (n - i)/(n + i) in lowest terms."""
    return GaussianFraction.reduced(GaussianInt(n, -1), GaussianInt(n, 1))


# ---------------------------------------------------------------------
# Threshold decomposition (shared with the rational case in abc.py)
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    """ξ_j = numerator/denominator, lowest terms, with its exponent e_j in ξ."""

    index: int
    prime: int
    numerator: GaussianInt | int
    denominator: GaussianInt | int
    exponent: int

    @property
    def degree(self) -> int:
        return 2 if isinstance(self.numerator, GaussianInt) else 1

    def _norm(self, x) -> int:
        return x.norm if isinstance(x, GaussianInt) else abs(x)

    @property
    def log_num(self) -> float:
        return log_int(self._norm(self.numerator))

    @property
    def log_den(self) -> float:
        return log_int(self._norm(self.denominator))

    def is_torsion(self) -> bool:
        return self._norm(self.numerator) == 1 and self._norm(self.denominator) == 1

    def value(self):
        if self.degree == 2:
            return GaussianRational.quotient(self.numerator, self.denominator)
        return Fraction(self.numerator, self.denominator)

    def height(self) -> float:
        return max(self.log_num, self.log_den) / self.degree


@dataclass(frozen=True)
class MultiplicativeDecomposition:
    """
    ξ = w · ξ_0 · ∏_{j ∈ I} ξ_j^{e_j}.

    Exponents of ξ_0 stay symbolic as (index, exponent) pairs. Numerators and
    denominators of distinct generators are pairwise coprime, which is what
    makes xi0_height() exact.
    """

    w: GaussianRational | Fraction
    generators: tuple[Generator, ...]
    large_indices: tuple[int, ...]
    threshold: float
    target: GaussianRational | Fraction

    @property
    def xi0_exponents(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (g.index, g.exponent) for g in self.generators if g.index not in self.large_indices
        )

    @property
    def large_generators(self) -> tuple[Generator, ...]:
        return tuple(g for g in self.generators if g.index in self.large_indices)

    @property
    def large_part(self) -> tuple[tuple[object, int], ...]:
        return tuple((g.value(), g.exponent) for g in self.large_generators)

    @property
    def m(self) -> int:
        return 1 + len(self.large_indices)

    def _one(self):
        return GaussianRational(Fraction(1)) if isinstance(self.w, GaussianRational) else Fraction(1)

    def xi0_value(self):
        value = self._one()
        for g in self.generators:
            if g.index not in self.large_indices:
                value = value * g.value() ** g.exponent
        return value

    def reconstruct(self):
        value = self.w * self.xi0_value()
        for g in self.large_generators:
            value = value * g.value() ** g.exponent
        return value

    def xi0_height(self) -> float:
        up = down = 0.0
        degree = 1
        for g in self.generators:
            if g.index in self.large_indices or g.is_torsion():
                continue
            degree = g.degree
            e = abs(g.exponent)
            num, den = (g.log_num, g.log_den) if g.exponent > 0 else (g.log_den, g.log_num)
            up += e * num
            down += e * den
        return max(up, down) / degree

    def generator_heights(self) -> tuple[float, ...]:
        """h(ξ_j) for j in I, in index order."""
        return tuple(g.height() for g in self.large_generators)


def decompose_xi(fact: GaussianFactorization, B: float) -> MultiplicativeDecomposition:
    """Split (n - i)/(n + i) by the exponents of n + i relative to B."""
    if B <= 0:
        raise NumberTheoryError(f"threshold must be positive, got {B}")
    generators = []
    for j, (gamma, e) in enumerate(fact.factors, start=1):
        frac = GaussianFraction.reduced(gamma.conjugate(), gamma)
        generators.append(Generator(j, gamma.norm, frac.num, frac.den, e))
    large = tuple(g.index for g in generators if g.exponent > B)
    w = GaussianRational.quotient(fact.unit.conjugate(), fact.unit)
    return MultiplicativeDecomposition(
        w=w,
        generators=tuple(generators),
        large_indices=large,
        threshold=float(B),
        target=xi_of(fact.n).value(),
    )
