"""
Batch sweeps over n with one SweepRecord per n.

Workers get contiguous chunks of the range and executor.map hands results
back in submission order, so the output never depends on the worker count.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import IO, Iterable, Iterator

from pydantic import BaseModel, ConfigDict, PositiveInt, ValidationError
from tqdm import tqdm

from core.exceptions import DomainGuardError, NumberTheoryError
from core.services import get_setting
from core.services.bounds import (
    BoundConstants,
    KappaSample,
    chebyshev_bound_check,
    kappa_ratio,
    theorem2_chain,
    threshold_B,
)
from core.services.gaussian import GaussianInt, decompose_xi, factor_n_plus_i
from core.services.integers import (
    exponent_product,
    factorize,
    largest_prime_factor,
    log_int,
    radical,
)
from core.services.sieve import prime_cache

logger = logging.getLogger(__name__)

CSV_FIELDS = ("n", "p_max", "rad", "nu_product", "m", "thm1_ratio", "thm2_ratio")
SWEEP_MIN_N = 16


class SweepRecord(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: PositiveInt
    p_max: PositiveInt
    rad: PositiveInt
    nu_product: PositiveInt
    m: PositiveInt
    thm1_ratio: float
    thm2_ratio: float

    def to_line(self) -> str:
        return self.model_dump_json()

    @classmethod
    def from_line(cls, line: str) -> "SweepRecord":
        try:
            return cls.model_validate_json(line)
        except ValidationError as exc:
            raise NumberTheoryError(f"bad sweep record {line.strip()!r}: {exc}") from exc

    def sample(self, shape: str) -> KappaSample:
        if shape == "thm1" or shape == "chowla":
            return KappaSample(self.n, float(self.p_max), shape)
        if shape == "thm2":
            return KappaSample(self.n, log_int(self.rad), shape)
        raise NumberTheoryError(f"sweep records carry no {shape!r} samples")


def sweep_record(n: int) -> tuple[SweepRecord, list[str]]:
    """The record for n and every invariant it breaks (normally none)."""
    if n < SWEEP_MIN_N:
        raise DomainGuardError(f"sweeps start at n = {SWEEP_MIN_N}, got {n}")
    fact = factorize(n * n + 1)
    p_max = largest_prime_factor(fact)
    rad = radical(fact)
    ep = exponent_product(fact)

    gfact = factor_n_plus_i(n)
    dec = decompose_xi(gfact, threshold_B(rad))

    failures = []
    if gfact.reconstruct() != GaussianInt(n, 1):
        failures.append(f"n={n}: Gaussian factorization does not rebuild n+i")
    for p, e in fact.factors:
        if p == 2 and e > 1:
            failures.append(f"n={n}: ν_2(n²+1) = {e} > 1")
        if p > 2 and p % 4 != 1:
            failures.append(f"n={n}: prime {p} ≡ 3 (mod 4) divides n²+1")
    if [(g.norm, e) for g, e in gfact.factors] != list(fact.factors):
        failures.append(f"n={n}: Gaussian exponents differ from ν_p(n²+1)")
    if ep > rad**8:
        failures.append(f"n={n}: exponent product {ep} > rad^8")
    if not chebyshev_bound_check(p_max, rad).holds:
        failures.append(f"n={n}: 4·𝒫(n²+1) < log rad(n²+1)")

    record = SweepRecord(
        n=n,
        p_max=p_max,
        rad=rad,
        nu_product=ep,
        m=dec.m,
        thm1_ratio=kappa_ratio(n, p_max, "thm1"),
        thm2_ratio=kappa_ratio(n, log_int(rad), "thm2"),
    )
    return record, failures


def _sweep_chunk(bounds: tuple[int, int]) -> list[tuple[SweepRecord, list[str]]]:
    start, stop = bounds
    return [sweep_record(n) for n in range(start, stop + 1)]


def _chunks(start: int, stop: int, size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + size - 1, stop)) for lo in range(start, stop + 1, size)]


def run_sweep(
    start: int, stop: int, jobs: int = 1, progress: bool = False
) -> Iterator[tuple[SweepRecord, list[str]]]:
    """(record, failures) for n = start..stop in ascending n."""
    if start < SWEEP_MIN_N:
        raise DomainGuardError(f"sweeps start at n = {SWEEP_MIN_N}, got {start}")
    if stop < start:
        raise NumberTheoryError(f"empty range [{start}, {stop}]")
    chunks = _chunks(start, stop, get_setting("SWEEP_CHUNK"))
    logger.info("Sweeping n = %d..%d in %d chunks with %d job(s)", start, stop, len(chunks), jobs)

    # workers inherit the sieve when processes are forked
    prime_cache.prime_list(get_setting("TRIAL_DIVISION_LIMIT"))
    prime_cache.spf()

    bar = tqdm(total=stop - start + 1, disable=not progress, unit="n")
    try:
        if jobs <= 1:
            results = map(_sweep_chunk, chunks)
            yield from _drain(results, bar)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                yield from _drain(pool.map(_sweep_chunk, chunks), bar)
    finally:
        bar.close()


def _drain(results, bar) -> Iterator[tuple[SweepRecord, list[str]]]:
    for batch in results:
        yield from batch
        bar.update(len(batch))


def write_jsonl(records: Iterable[SweepRecord], out: IO[str]) -> int:
    count = 0
    for record in records:
        out.write(record.to_line() + "\n")
        count += 1
    return count


def read_jsonl(path: str | Path) -> Iterator[SweepRecord]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield SweepRecord.from_line(line)


def csv_writer(out: IO[str]) -> csv.DictWriter:
    """A DictWriter over CSV_FIELDS with the header already written."""
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    return writer


def write_csv(records: Iterable[SweepRecord], out: IO[str]) -> int:
    writer = csv_writer(out)
    count = 0
    for record in records:
        writer.writerow(record.model_dump())
        count += 1
    return count


def fit_samples(
    start: int, stop: int, shape: str, jobs: int = 1
) -> Iterator[KappaSample]:
    """κ samples for thm1/thm2/chowla straight from a fresh sweep."""
    for record, _ in run_sweep(start, stop, jobs=jobs):
        yield record.sample(shape)


def theorem2_chain_failures(start: int, stop: int, c: BoundConstants) -> list[str]:
    failures = []
    for n in range(start, stop + 1):
        chain = theorem2_chain(n, c)
        if not chain.holds:
            failures.append(f"n={n}: proof chain broken {chain.to_dict()}")
    return failures
