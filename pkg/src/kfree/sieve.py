"""Prime tables, k-free sieving and counting, and residue-class arithmetic.

Everything here is exact integer work; floating point appears only in the
density main term x / zeta(k).  Operations that need primes beyond their
table raise :class:`~kfree.errors.CoverageError` rather than guessing.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, log, pi

from .errors import CoverageError, ResourceError

# Segment size for counting sweeps; a power of two so memory stays bounded
# no matter how large x gets.
DEFAULT_SEGMENT = 1 << 16

# Cap on the byte array backing a prime table (one byte per candidate).
PRIME_TABLE_BYTE_CAP = 200_000_000


def integer_kth_root(n: int, k: int) -> int:
    """Largest r >= 0 with r**k <= n, exact for arbitrary-precision n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k < 1:
        raise ValueError("k must be positive")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    # Integer Newton iteration seeded from above via the bit length.
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, strictly increasing, 1-indexed as p_1 = 2."""

    limit: int
    primes: tuple[int, ...]

    def covers(self, bound: int) -> bool:
        return self.limit >= bound

    def require(self, bound: int) -> None:
        if not self.covers(bound):
            raise CoverageError(
                f"prime table up to {self.limit} cannot decide questions "
                f"needing primes up to {bound}"
            )

    def nth(self, r: int) -> int:
        """r-th prime, 1-indexed (nth(1) == 2)."""
        if r < 1 or r > len(self.primes):
            raise IndexError(f"prime index {r} outside table of {len(self.primes)}")
        return self.primes[r - 1]

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)


def build_prime_table(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes up to ``limit`` inclusive."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    if limit + 1 > PRIME_TABLE_BYTE_CAP:
        raise ResourceError(
            f"prime table up to {limit} exceeds the {PRIME_TABLE_BYTE_CAP}-byte budget"
        )
    if limit < 2:
        return PrimeTable(limit, ())
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = bytes(len(range(start, limit + 1, p)))
    return PrimeTable(limit, tuple(i for i in range(2, limit + 1) if flags[i]))


def _table_for(bound: int, table: PrimeTable | None) -> PrimeTable:
    """Use the supplied table (enforcing coverage) or build a sufficient one."""
    if table is None:
        return build_prime_table(bound)
    table.require(bound)
    return table


def nth_prime(r: int) -> int:
    """r-th prime, 1-indexed; sieves up to a Rosser-style upper bound."""
    if r < 1:
        raise ValueError("prime index must be >= 1")
    if r < 6:
        return (2, 3, 5, 7, 11)[r - 1]
    bound = int(r * (log(r) + log(log(r)))) + 1
    return build_prime_table(bound).nth(r)


def smallest_power_divisor(n: int, k: int = 2, table: PrimeTable | None = None) -> int | None:
    """Smallest prime p with p**k | n, or None if n is k-free.

    Needs primes up to n**(1/k); raises CoverageError on a short table.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    root = integer_kth_root(n, k)
    table = _table_for(root, table)
    for p in table.primes:
        if p > root:
            break
        if n % p**k == 0:
            return p
    return None


def is_power_free(n: int, k: int = 2, table: PrimeTable | None = None) -> bool:
    """True iff no prime power p**k divides n."""
    return smallest_power_divisor(n, k, table) is None


@dataclass(frozen=True)
class KFreeWindow:
    """k-free membership flags over the integer interval [start, start+length)."""

    start: int
    length: int
    k: int
    flags: bytes

    def is_free(self, n: int) -> bool:
        if not self.start <= n < self.start + self.length:
            raise IndexError(f"{n} outside window [{self.start}, {self.start + self.length})")
        return bool(self.flags[n - self.start])

    def members(self) -> list[int]:
        return [self.start + i for i, f in enumerate(self.flags) if f]

    def count(self) -> int:
        return sum(self.flags)


def kfree_window(start: int, length: int, k: int = 2, table: PrimeTable | None = None) -> KFreeWindow:
    """Sieve k-free flags for [start, start+length) by striking multiples of p**k."""
    if start < 1:
        raise ValueError("window start must be >= 1")
    if length < 0:
        raise ValueError("window length must be nonnegative")
    if k < 2:
        raise ValueError("k must be >= 2")
    if length == 0:
        return KFreeWindow(start, 0, k, b"")
    top = start + length - 1
    root = integer_kth_root(top, k)
    table = _table_for(root, table)
    flags = bytearray([1]) * length
    for p in table.primes:
        if p > root:
            break
        q = p**k
        first = -start % q  # offset of the first multiple of q in the window
        if first < length:
            flags[first::q] = bytes(len(range(first, length, q)))
    return KFreeWindow(start, length, k, bytes(flags))


def count_power_free_upto(
    x: int,
    k: int = 2,
    table: PrimeTable | None = None,
    segment: int = DEFAULT_SEGMENT,
) -> int:
    """Exact count of k-free integers in [1, x], by segmented window sieving."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 0
    table = _table_for(integer_kth_root(x, k), table)
    total = 0
    y = 1
    while y <= x:
        length = min(segment, x - y + 1)
        total += kfree_window(y, length, k, table).count()
        y += length
    return total


@lru_cache(maxsize=None)
def zeta(k: int) -> float:
    """zeta(k) for integer k >= 2; closed form for k = 2, direct series beyond.

    The series is truncated once the integral tail bound drops below 1e-12.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k == 2:
        return pi * pi / 6.0
    # tail after N is below N^(1-k)/(k-1)
    n_terms = int((1.0 / ((k - 1) * 1e-12)) ** (1.0 / (k - 1))) + 2
    return sum(n ** (-k) for n in range(n_terms, 0, -1))


def density_main_term(x: int, k: int = 2) -> float:
    """Leading-order count of k-free integers up to x: x / zeta(k)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return x / zeta(k)


@dataclass(frozen=True)
class ResidueClass:
    """The residue class {n : n = residue (mod modulus)} with 0 <= residue < modulus."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} not in [0, {self.modulus})")

    def contains(self, n: int) -> bool:
        return n % self.modulus == self.residue

    def __str__(self) -> str:
        return f"{self.residue} mod {self.modulus}"


def crt_combine(classes) -> ResidueClass:
    """Intersection of residue classes with pairwise coprime moduli.

    Returns the unique class modulo the product of the moduli; raises
    ValueError on an empty list or a shared factor between moduli.
    """
    classes = list(classes)
    if not classes:
        raise ValueError("need at least one residue class")
    residue, modulus = classes[0].residue, classes[0].modulus
    for cls in classes[1:]:
        if gcd(modulus, cls.modulus) != 1:
            raise ValueError(f"moduli {modulus} and {cls.modulus} are not coprime")
        shift = (cls.residue - residue) * pow(modulus, -1, cls.modulus) % cls.modulus
        residue += modulus * shift
        modulus *= cls.modulus
    return ResidueClass(residue % modulus, modulus)


def count_class_in_interval(lo: int, hi: int, classes) -> int:
    """How many integers in [lo, hi] lie in every listed residue class.

    The classes must have pairwise coprime moduli; an empty list counts the
    whole interval.  Always at most floor(len/M) + 1 with M the modulus product.
    """
    if lo > hi + 1:
        raise ValueError(f"invalid interval [{lo}, {hi}]")
    if lo == hi + 1:
        return 0
    classes = list(classes)
    if not classes:
        return hi - lo + 1
    merged = crt_combine(classes)
    b, m = merged.residue, merged.modulus
    return (hi - b) // m - (lo - 1 - b) // m
