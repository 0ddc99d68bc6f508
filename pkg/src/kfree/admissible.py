"""Exact maximum size of a subset of [1, x] avoiding one residue class modulo
p^k for every prime, bracketed by shifted-window lower bounds and large sieve
upper bounds.

Only primes with p^k <= x constrain the maximum: any class mod a larger p^k
has a representative-free choice inside [1, x] (residue 0, say, once
p^k > x).  The search is branch-and-bound over the choice of removed class
per prime, on bitmask survivor sets, with the incumbent seeded from a shift
scan; ties between maximizing witnesses are broken toward the
lexicographically smallest (ascending primes, then ascending residue) by a
deterministic post-pass.
"""

import time
from dataclasses import dataclass
from math import floor
from random import Random

from .large_sieve import OmegaProfile, optimize_q
from .sieve import (
    build_prime_table,
    crt_combine,
    integer_kth_root,
    ResidueClass,
)

EXACT = "EXACT"
LOWER_BOUND = "LOWER_BOUND"


@dataclass(frozen=True)
class AdmissibleMaxResult:
    x: int
    k: int
    value: int
    witness: dict[int, int]  # prime -> removed residue class mod p^k
    status: str

    @property
    def is_exact(self) -> bool:
        return self.status == EXACT


def _constraining_primes(x: int, k: int) -> list[int]:
    return list(build_prime_table(integer_kth_root(x, k)).primes)


def _class_masks(x: int, k: int, primes) -> dict[int, list[int]]:
    masks = {}
    for p in primes:
        q = p**k
        per_class = [0] * q
        for a in range(1, x + 1):
            per_class[a % q] |= 1 << (a - 1)
        masks[p] = per_class
    return masks


def admissible_max_exact(x: int, k: int = 2, time_budget: float | None = None) -> AdmissibleMaxResult:
    """Exact window maximum by branch-and-bound over removed classes.

    With no time budget the search always completes and the result is EXACT;
    otherwise the best incumbent found within the budget is returned with
    LOWER_BOUND status.  Correctness never degrades, only the status.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    primes = _constraining_primes(x, k)
    if not primes:
        return AdmissibleMaxResult(x, k, x, {}, EXACT)
    masks = _class_masks(x, k, primes)
    full = (1 << x) - 1

    # seed the incumbent from a cheap shift scan; any shift yields a witness
    count, shift = admissible_max_lower_shift(x, k, shifts=range(0, min(4 * x, 512)))
    best_value = count
    best_leaf = {p: (-shift) % p**k for p in primes}

    deadline = None if time_budget is None else time.monotonic() + time_budget
    order = sorted(primes, reverse=True)
    exhausted = True

    def descend(idx: int, survivors: int, chosen: dict[int, int]) -> None:
        nonlocal best_value, best_leaf, exhausted
        if not exhausted:
            return
        if deadline is not None and time.monotonic() > deadline:
            exhausted = False
            return
        alive = survivors.bit_count()
        if idx == len(order):
            if alive > best_value:
                best_value = alive
                best_leaf = dict(chosen)
            return
        # admissible bound: each remaining prime must remove at least its
        # min class hit, and those removals can overlap, so only the largest
        # single forced loss is a sound optimistic estimate
        forced = 0
        for p in order[idx:]:
            m = min((survivors & mask).bit_count() for mask in masks[p])
            if m > forced:
                forced = m
        if alive - forced <= best_value:
            return
        p = order[idx]
        ranked = sorted(range(p**k), key=lambda c: (survivors & masks[p][c]).bit_count())
        for c in ranked:
            chosen[p] = c
            descend(idx + 1, survivors & ~masks[p][c], chosen)
            del chosen[p]

    descend(0, full, {})

    if not exhausted:
        return AdmissibleMaxResult(x, k, best_value, dict(sorted(best_leaf.items())), LOWER_BOUND)

    witness = _lexicographic_witness(primes, masks, full, best_value)
    return AdmissibleMaxResult(x, k, best_value, witness, EXACT)


def _attainable(survivors: int, rest, masks, target: int) -> bool:
    """Can some completion over the remaining primes keep >= target alive?"""
    if survivors.bit_count() < target:
        return False
    if not rest:
        return True
    forced = 0
    for p in rest:
        m = min((survivors & mask).bit_count() for mask in masks[p])
        if m > forced:
            forced = m
    if survivors.bit_count() - forced < target:
        return False
    p = rest[0]
    ranked = sorted(range(len(masks[p])), key=lambda c: (survivors & masks[p][c]).bit_count())
    return any(
        _attainable(survivors & ~masks[p][c], rest[1:], masks, target) for c in ranked
    )


def _lexicographic_witness(primes, masks, full: int, value: int) -> dict[int, int]:
    """Smallest witness achieving the optimum: ascending primes, ascending residue."""
    survivors = full
    witness = {}
    for i, p in enumerate(primes):
        rest = primes[i + 1 :]
        for c in range(len(masks[p])):
            if _attainable(survivors & ~masks[p][c], rest, masks, value):
                witness[p] = c
                survivors &= ~masks[p][c]
                break
    return witness


def recompute_witness_value(result: AdmissibleMaxResult) -> int:
    """Survivor count of the witness classes; equals ``value`` for any valid result."""
    survivors = set(range(1, result.x + 1))
    for p, c in result.witness.items():
        q = p**result.k
        survivors -= set(range(c if c >= 1 else q, result.x + 1, q))
    return len(survivors)


def admissible_max_lower_shift(
    x: int,
    k: int = 2,
    shifts=None,
    random_draws: int = 0,
    seed: int = 0,
) -> tuple[int, int]:
    """Best shifted-window survivor count: max over shifts y of
    |{a in [1, x] : p^k does not divide y + a for any p^k <= x}|.

    Always a lower bound for the exact maximum, since each shifted pattern
    avoids the class -y mod p^k for every constraining prime.  ``shifts``
    enumerates explicit y; ``random_draws`` adds seeded draws of y modulo the
    full primorial power, combined by CRT.  Ties break to the smallest shift.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    primes = _constraining_primes(x, k)
    candidates: list[int] = list(shifts) if shifts is not None else ([0] if not random_draws else [])
    rng = Random(seed)
    for _ in range(random_draws):
        residues = [ResidueClass(rng.randrange(p**k), p**k) for p in primes]
        candidates.append(crt_combine(residues).residue if residues else 0)
    if not candidates:
        raise ValueError("no shifts to try: give explicit shifts or random draws")

    best_count, best_shift = -1, 0
    for y in candidates:
        survivors = bytearray([1]) * (x + 1)
        for p in primes:
            q = p**k
            first = (-y) % q
            if first == 0:
                first = q
            for a in range(first, x + 1, q):
                survivors[a] = 0
        count = sum(survivors) - survivors[0]
        if count > best_count:
            best_count, best_shift = count, y
    return best_count, best_shift


def admissible_max_upper_sieve(x: int, k: int = 2) -> int:
    """Large sieve upper bound for the window maximum, minimized over Q up to
    ceil(x^(1/(2k+1))) + 2 with one avoided class per prime."""
    if x < 1:
        raise ValueError("x must be >= 1")
    root = integer_kth_root(x, 2 * k + 1)
    if root ** (2 * k + 1) < x:
        root += 1
    _, bound = optimize_q(x, OmegaProfile.constant_one(k), range(1, root + 3))
    return floor(bound)
