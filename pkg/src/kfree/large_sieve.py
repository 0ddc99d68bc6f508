"""Exact-rational evaluation of large sieve bounds for sets avoiding
residue classes modulo prime powers, plus direct Fourier verification of the
per-prime inequality the bounds rest on.

The bound for a set A in a window of N integers avoiding omega(p^k) < p^k
classes mod p^k for every prime is

    |A| <= (N + Q^(2k)) / sum_{q <= Q} h(q),
    h(q) = mu^2(q) * prod_{p | q} omega(p^k) / (p^k - omega(p^k)).

With k = 1 this is the classical arithmetic form; the window offset plays no
role in the value and is therefore not a parameter.  All h arithmetic is done
in exact rationals; floating point appears only in the Fourier verification.
"""

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Mapping

VERIFY_TOLERANCE = 1e-9


def es_omega(p: int, k: int = 2) -> int:
    """Forced avoided-class count mod p^2 for sets whose pairwise sums all
    avoid 0 mod p^2.

    If A + A misses 0 mod p^2 then the residue set S of A satisfies
    S cap (-S) = empty set, so |S| <= (p^2 - 1)/2 for odd p (0 is the only
    self-negating residue) and |S| <= 1 mod 4; at least (p^2 + 1)/2
    (respectively 3) classes are therefore avoided.
    """
    if k != 2:
        raise ValueError("the pairwise-sum derivation is specific to k = 2")
    if p == 2:
        return 3
    return (p * p + 1) // 2


@dataclass(frozen=True)
class OmegaProfile:
    """Avoided-class counts omega(p^k) per prime, with 0 <= omega < p^k."""

    k: int
    rule: Callable[[int], int]
    name: str

    def omega(self, p: int) -> int:
        value = self.rule(p)
        if not 0 <= value < p**self.k:
            raise ValueError(f"omega({p}^{self.k}) = {value} outside [0, {p**self.k})")
        return value

    @classmethod
    def constant_one(cls, k: int = 2) -> "OmegaProfile":
        return cls(k, lambda p: 1, f"CONSTANT_ONE(k={k})")

    @classmethod
    def es_sumfree(cls) -> "OmegaProfile":
        return cls(2, es_omega, "ES_SUMFREE")


def h_weight(q: int, profile: OmegaProfile) -> Fraction:
    """mu^2(q) * prod_{p | q} omega(p^k)/(p^k - omega(p^k)), exact."""
    if q < 1:
        raise ValueError("q must be >= 1")
    value = Fraction(1)
    n = q
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return Fraction(0)  # q not squarefree
            value *= _h_factor(d, profile)
        d += 1 if d == 2 else 2
    if n > 1:
        value *= _h_factor(n, profile)
    return value


def _h_factor(p: int, profile: OmegaProfile) -> Fraction:
    omega = profile.omega(p)
    return Fraction(omega, p**profile.k - omega)


def h_weights_upto(q_max: int, profile: OmegaProfile) -> list[Fraction]:
    """[h(1), h(2), ..., h(q_max)] via a smallest-prime-factor sieve."""
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    spf = list(range(q_max + 1))
    for p in range(2, isqrt(q_max) + 1):
        if spf[p] == p:
            for m in range(p * p, q_max + 1, p):
                if spf[m] == m:
                    spf[m] = p
    factors: dict[int, Fraction] = {}
    weights = [Fraction(1)]  # h(1)
    for q in range(2, q_max + 1):
        n, value = q, Fraction(1)
        while n > 1 and value:
            p = spf[n]
            n //= p
            if n % p == 0:
                value = Fraction(0)
            else:
                if p not in factors:
                    factors[p] = _h_factor(p, profile)
                value *= factors[p]
        weights.append(value)
    return weights


def h_sum(q_max: int, profile: OmegaProfile) -> Fraction:
    """sum_{q <= q_max} h(q), exact; pairwise reduction keeps the big
    common-denominator additions near the root of the tree."""
    weights = h_weights_upto(q_max, profile)
    while len(weights) > 1:
        weights = [
            weights[i] + weights[i + 1] if i + 1 < len(weights) else weights[i]
            for i in range(0, len(weights), 2)
        ]
    return weights[0]


def sieve_bound(n_length: int, q_max: int, profile: OmegaProfile) -> Fraction:
    """(N + Q^(2k)) / sum_{q <= Q} h(q): an upper bound for the size of any
    subset of a length-N window avoiding omega(p^k) classes mod p^k per prime."""
    if n_length < 1 or q_max < 1:
        raise ValueError("window length and Q must be >= 1")
    return Fraction(n_length + q_max ** (2 * profile.k)) / h_sum(q_max, profile)


def optimize_q(n_length: int, profile: OmegaProfile, q_range) -> tuple[int, Fraction]:
    """The Q in q_range minimizing sieve_bound, smallest Q on ties."""
    q_values = sorted(set(q_range))
    if not q_values:
        raise ValueError("q_range must be nonempty")
    weights = h_weights_upto(q_values[-1], profile)
    partial = Fraction(0)
    position = 0
    best: tuple[int, Fraction] | None = None
    exponent = 2 * profile.k
    for q in q_values:
        while position < q:
            partial += weights[position]
            position += 1
        bound = Fraction(n_length + q**exponent) / partial
        if best is None or bound < best[1]:
            best = (q, bound)
    return best


@dataclass(frozen=True)
class SqSieveCheck:
    """Both sides of the per-prime Fourier inequality, plus the Plancherel
    cross-check on the balanced indicator of the removed classes."""

    lhs: float
    rhs: float
    holds: bool
    plancherel_sum: float
    plancherel_expected: float

    @property
    def plancherel_ok(self) -> bool:
        return abs(self.plancherel_sum - self.plancherel_expected) <= VERIFY_TOLERANCE * max(
            1.0, self.plancherel_expected
        )


def verify_sqsieve_inequality(
    p: int, k: int, removed, coefficients: Mapping[int, complex]
) -> SqSieveCheck:
    """Directly evaluate sum_{1 <= a < p^k} |S(a/p^k)|^2 against
    omega/(p^k - omega) * |S(0)|^2 for S(x) = sum_n a_n e^(2 pi i n x).

    The coefficients must be supported off the removed classes mod p^k.  Also
    evaluates the Plancherel identity sum |c_a|^2 = (p^k - omega) * omega for
    the Fourier coefficients of omega - p^k * 1_removed.
    """
    q = p**k
    removed_set = {r % q for r in removed}
    omega = len(removed_set)
    if omega >= q:
        raise ValueError(f"must remove fewer than {q} classes")
    for n in coefficients:
        if n % q in removed_set:
            raise ValueError(f"coefficient at {n} sits in a removed class mod {q}")

    def s_at(a: int) -> complex:
        return sum(
            value * cmath.exp(2j * cmath.pi * n * a / q)
            for n, value in coefficients.items()
        )

    s0 = abs(s_at(0)) ** 2
    lhs = sum(abs(s_at(a)) ** 2 for a in range(1, q))
    rhs = omega / (q - omega) * s0
    holds = lhs >= rhs - VERIFY_TOLERANCE * max(1.0, rhs)

    balanced = [omega - (q if r in removed_set else 0) for r in range(q)]
    plancherel = 0.0
    for a in range(1, q):
        c_a = sum(
            balanced[r] * cmath.exp(-2j * cmath.pi * a * r / q) for r in range(q)
        ) / q
        plancherel += abs(c_a) ** 2
    return SqSieveCheck(lhs, rhs, holds, plancherel, float((q - omega) * omega))
