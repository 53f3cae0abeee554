"""
ABC triples: enumeration, ingestion, per-triple statistics and the two
exceptional-case bounds.

Triple list format: one "a b c" per line, any whitespace, '#' starts a
comment, blank lines are ignored.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import IO, Iterable, Iterator

from core.exceptions import DomainGuardError, NumberTheoryError, TripleRejected
from core.services import get_setting
from core.services.bounds import (
    BoundConstants,
    BoundReport,
    eg_nonarch_rhs,
    iterated_log,
    threshold_B,
)
from core.services.gaussian import Generator, MultiplicativeDecomposition
from core.services.integers import (
    Factorization,
    exponent_product,
    factorize,
    largest_prime_factor,
    log_int,
    radical,
)

logger = logging.getLogger(__name__)

REPORT_FIELDS = (
    "a", "b", "c", "R", "q", "quality", "nu_product", "eta", "case1_ratio", "case2_ratio",
)

_E_E = math.exp(math.e)


@dataclass(frozen=True)
class AbcTriple:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise NumberTheoryError(f"triple entries must be positive: {self}")
        if self.a + self.b != self.c:
            raise NumberTheoryError(f"{self.a} + {self.b} != {self.c}")
        if math.gcd(self.a, self.b) != 1:
            raise NumberTheoryError(f"gcd({self.a}, {self.b}) = {math.gcd(self.a, self.b)}")
        if self.a > self.b:
            raise NumberTheoryError(f"not normalized: {self.a} > {self.b}")

    @classmethod
    def of(cls, a: int, b: int, c: int) -> "AbcTriple":
        """Build from any order of the two summands."""
        return cls(min(a, b), max(a, b), c)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def enumerate_triples(c_max: int) -> Iterator[AbcTriple]:
    """Every normalized coprime triple with c <= c_max, ordered by (c, a)."""
    if c_max < 2:
        raise NumberTheoryError(f"c_max must be >= 2, got {c_max}")
    for c in range(2, c_max + 1):
        for a in range(1, c // 2 + 1):
            if math.gcd(a, c) == 1:
                yield AbcTriple(a, c - a, c)


def parse_triples(lines: Iterable[str]) -> Iterator[AbcTriple | TripleRejected]:
    """
    Validated triples, with a TripleRejected record in place of each line that
    parses but is not a coprime triple. A line that does not hold three
    integers stops the stream with NumberTheoryError.
    """
    for line_no, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        try:
            a, b, c = (int(x, 10) for x in parts)
        except ValueError:
            raise NumberTheoryError(
                f"line {line_no}: expected three integers, got {raw.strip()!r}"
            ) from None
        try:
            yield AbcTriple.of(a, b, c)
        except NumberTheoryError as exc:
            rejection = TripleRejected(line_no, raw.strip(), str(exc))
            logger.warning("rejected %s", rejection)
            yield rejection


def write_triples(triples: Iterable[AbcTriple], out: IO[str]) -> int:
    count = 0
    for t in triples:
        out.write(f"{t.a} {t.b} {t.c}\n")
        count += 1
    return count


# ---------------------------------------------------------------------
# Per-triple statistics
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class TripleReport:
    triple: AbcTriple
    R: int
    q: int
    quality: float
    nu_product: int
    p0: int | None
    eta: float
    x: int
    y: int
    z: int
    largest_primes: tuple[int, int, int]
    factorization: Factorization

    @property
    def log_R(self) -> float:
        return log_int(self.R)

    @property
    def in_anchor_regime(self) -> bool:
        """c^{1/2} <= a."""
        return self.triple.a * self.triple.a >= self.triple.c

    @cached_property
    def p0_valuation(self) -> int:
        return factorize(abs(self.x)).exponent_of(self.p0) if self.p0 else 0

    def to_dict(self) -> dict:
        return {
            "a": self.triple.a,
            "b": self.triple.b,
            "c": self.triple.c,
            "R": self.R,
            "q": self.q,
            "quality": self.quality,
            "nu_product": self.nu_product,
            "p0": self.p0,
            "eta": self.eta,
            "x": self.x,
            "y": self.y,
            "z": self.z,
        }


def triple_report(t: AbcTriple) -> TripleReport:
    fa, fb, fc = factorize(t.a), factorize(t.b), factorize(t.c)
    fabc = fa.multiply(fb).multiply(fc)
    R = radical(fabc)
    largest = (largest_prime_factor(fa), largest_prime_factor(fb), largest_prime_factor(fc))
    q = min(largest)

    # x is the q-attaining element (first in a, b, c order); signs give x+y+z = 0
    signed = (t.a, t.b, -t.c)
    facts = (fa, fb, fc)
    k = largest.index(q)
    x = signed[k]
    y, z = (signed[i] for i in range(3) if i != k)
    p0 = None
    if facts[k].factors:
        top = max(e for _, e in facts[k].factors)
        p0 = min(p for p, e in facts[k].factors if e == top)

    return TripleReport(
        triple=t,
        R=R,
        q=q,
        quality=log_int(t.c) / log_int(R),
        nu_product=exponent_product(fabc),
        p0=p0,
        eta=1 - log_int(t.a) / log_int(t.c),
        x=x,
        y=y,
        z=z,
        largest_primes=largest,
        factorization=fabc,
    )


def shimura_abc_check(rep: TripleReport, exponent: float | None = None) -> BoundReport:
    """∏ ν_p(abc) <= rad(abc)^exponent."""
    exponent = get_setting("SHIMURA_ABC_EXPONENT") if exponent is None else exponent
    if exponent <= 0:
        raise NumberTheoryError(f"exponent must be positive, got {exponent}")
    if float(exponent).is_integer():
        rhs = rep.R ** int(exponent)
    else:
        rhs = math.exp(exponent * rep.log_R)
    return BoundReport.compare(rep.nu_product, rhs, triple=rep.triple.as_tuple(), exponent=exponent)


# ---------------------------------------------------------------------
# Rational threshold decomposition
# ---------------------------------------------------------------------


def decompose_fraction(num: int, den: int, B: float) -> MultiplicativeDecomposition:
    """num/den = w·ξ_0·∏ p_j^{e_j} with I = {j : |e_j| > B} and w = ±1."""
    if B <= 0:
        raise NumberTheoryError(f"threshold must be positive, got {B}")
    if not num or not den:
        raise NumberTheoryError("numerator and denominator must be non-zero")
    exps: dict[int, int] = {}
    for p, e in factorize(abs(num)).factors:
        exps[p] = exps.get(p, 0) + e
    for p, e in factorize(abs(den)).factors:
        exps[p] = exps.get(p, 0) - e
    generators = tuple(
        Generator(j, p, p, 1, e)
        for j, (p, e) in enumerate(sorted((p, e) for p, e in exps.items() if e), start=1)
    )
    sign = -1 if (num < 0) != (den < 0) else 1
    return MultiplicativeDecomposition(
        w=Fraction(sign),
        generators=generators,
        large_indices=tuple(g.index for g in generators if abs(g.exponent) > B),
        threshold=float(B),
        target=Fraction(num, den),
    )


def decompose_rational(t: AbcTriple, B: float) -> MultiplicativeDecomposition:
    """ξ = b/c, so 1 - ξ = a/c."""
    return decompose_fraction(t.b, t.c, B)


# ---------------------------------------------------------------------
# Exceptional-case bounds
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class Thm3Reports:
    case1: BoundReport
    case2: BoundReport
    in_regime: bool
    anchor: BoundReport | None
    nonarch: BoundReport | None

    def to_dict(self) -> dict:
        return {
            "case1": self.case1.to_dict(),
            "case2": self.case2.to_dict(),
            "in_regime": self.in_regime,
            "anchor": self.anchor.to_dict() if self.anchor else None,
            "nonarch": self.nonarch.to_dict() if self.nonarch else None,
        }


def _root_term(log_r: float) -> float:
    return math.sqrt(log_r * math.log(log_r))


def _require_large_radical(rep: TripleReport) -> float:
    if rep.R <= _E_E:
        raise DomainGuardError(f"rad(abc) = {rep.R} <= e^e for {rep.triple}")
    return rep.log_R


def nonarch_anchor(rep: TripleReport, c: BoundConstants) -> BoundReport:
    """
    -log|1 - ξ|_{p0} = ν_{p0}(x)·log p0 against the non-archimedean bound at p0,
    with ξ = -y/z and the threshold generator heights.
    """
    log_r = _require_large_radical(rep)
    B = threshold_B(rep.R)
    dec = decompose_fraction(-rep.y, rep.z, B)
    heights = [B * log_r] + [math.log(g.prime) for g in dec.large_generators]
    h_xi = log_int(max(abs(rep.y), abs(rep.z)))
    lhs = rep.p0_valuation * math.log(rep.p0)
    rhs = eg_nonarch_rhs(dec.m, heights, h_xi, rep.p0, c)
    return BoundReport.compare(lhs, rhs, p0=rep.p0, m=dec.m, h_xi=h_xi)


def anchor_report(rep: TripleReport) -> BoundReport | None:
    """
    log c / (2 log R) <= ν_{p0}(x) <= 2ν_{p0}(x)·log p0 for a triple with c^{1/2} <= a.

    None outside that regime. holds covers both inequalities.
    """
    if not rep.in_anchor_regime:
        return None
    v = rep.p0_valuation
    lower = log_int(rep.triple.c) / (2 * rep.log_R)
    upper = 2 * v * math.log(rep.p0) if rep.p0 else 0.0
    anchor = BoundReport.compare(lower, v, p0=rep.p0, upper=upper)
    if v > upper:
        anchor = BoundReport(anchor.lhs, anchor.rhs, False, anchor.ratio, anchor.inputs_echo)
    return anchor


def thm3_case_reports(t: AbcTriple | TripleReport, c: BoundConstants) -> Thm3Reports:
    rep = t if isinstance(t, TripleReport) else triple_report(t)
    log_r = _require_large_radical(rep)
    log_c = log_int(rep.triple.c)
    growth = math.exp(c.kappa * _root_term(log_r))
    case1 = BoundReport.compare(log_c, growth / rep.eta, eta=rep.eta, R=rep.R)
    case2 = BoundReport.compare(log_c, rep.q * growth, q=rep.q, R=rep.R)

    anchor = anchor_report(rep)
    nonarch = nonarch_anchor(rep, c) if anchor is not None else None
    return Thm3Reports(case1, case2, rep.in_anchor_regime, anchor, nonarch)


# ---------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------


def corollary4_fit(corpus: Iterable[AbcTriple], y_min: int = 16) -> float:
    """Infimum of 𝒫(abc)·log₃ b/(log₂ b)² over triples with b >= y_min."""
    if y_min < 16:
        raise DomainGuardError(f"y_min must be >= 16, got {y_min}")
    best = math.inf
    count = 0
    for t in corpus:
        if t.b < y_min:
            continue
        p = largest_prime_factor(factorize(t.a * t.b * t.c))
        best = min(best, p * iterated_log(t.b, 3) / iterated_log(t.b, 2) ** 2)
        count += 1
    if not count:
        raise NumberTheoryError(f"no triples with b >= {y_min}")
    logger.info("corollary fit over %d triples: kappa = %.6g", count, best)
    return best


def _fit_case(reports: Iterable[TripleReport], numerator) -> float:
    best = -math.inf
    count = 0
    for rep in reports:
        if rep.R <= _E_E:
            continue
        best = max(best, math.log(numerator(rep)) / _root_term(rep.log_R))
        count += 1
    if not count:
        raise NumberTheoryError("no triples with rad(abc) > e^e")
    return best


def fit_case2_kappa(reports: Iterable[TripleReport]) -> float:
    """Smallest κ with log c <= q·exp(κ·√(log R·log₂ R)) on every report."""
    return _fit_case(reports, lambda r: log_int(r.triple.c) / r.q)


def fit_case1_kappa(reports: Iterable[TripleReport]) -> float:
    """Smallest κ with log c <= η⁻¹·exp(κ·√(log R·log₂ R)) on every report."""
    return _fit_case(reports, lambda r: r.eta * log_int(r.triple.c))


def report_row(rep: TripleReport, c: BoundConstants) -> dict:
    row = {
        "a": rep.triple.a,
        "b": rep.triple.b,
        "c": rep.triple.c,
        "R": rep.R,
        "q": rep.q,
        "quality": rep.quality,
        "nu_product": rep.nu_product,
        "eta": rep.eta,
        "case1_ratio": "",
        "case2_ratio": "",
    }
    if rep.R > _E_E:
        cases = thm3_case_reports(rep, c)
        row["case1_ratio"] = cases.case1.ratio
        row["case2_ratio"] = cases.case2.ratio
    return row


def reports_to_csv(reports: Iterable[TripleReport], out: IO[str], c: BoundConstants) -> int:
    writer = csv.DictWriter(out, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    count = 0
    for rep in reports:
        writer.writerow(report_row(rep, c))
        count += 1
    return count
