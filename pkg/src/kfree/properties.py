"""Decide and certify, for finite sets and sequence prefixes, how translates
meet the k-free numbers: admissibility certificates, translate witnesses,
pairwise-sum checks, and evidence tables.

All searches are deterministic with fixed tie-breaking: smallest witness,
smallest avoided residue, lexicographically first violation.
"""

from dataclasses import dataclass
from math import factorial
from typing import Iterable, NamedTuple

from .errors import BudgetError, NotAdmissibleError
from .sieve import (
    ResidueClass,
    build_prime_table,
    integer_kth_root,
    smallest_power_divisor,
)

FULL = "FULL"
PI_CERTIFIED = "PI_CERTIFIED"

# Guard against accidentally materializing astronomically long scan ranges.
DEFAULT_RANGE_CAP = 100_000_000


@dataclass(frozen=True)
class FiniteSet:
    """A finite set of naturals >= 1, stored strictly increasing."""

    elements: tuple[int, ...]

    def __post_init__(self):
        for i, a in enumerate(self.elements):
            if a < 1:
                raise ValueError("elements must be >= 1")
            if i and a <= self.elements[i - 1]:
                raise ValueError("elements must be strictly increasing")

    @classmethod
    def of(cls, values: Iterable[int]) -> "FiniteSet":
        return cls(tuple(sorted(set(values))))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, n) -> bool:
        return n in self.elements


def as_elements(values) -> tuple[int, ...]:
    """Normalize a FiniteSet or iterable into a validated increasing tuple."""
    if isinstance(values, FiniteSet):
        return values.elements
    return FiniteSet.of(values).elements


@dataclass(frozen=True)
class Certification:
    """Which primes a k-freeness claim was verified against.

    FULL means every prime that could matter was checked; PI_CERTIFIED means
    only primes up to ``prime_cutoff`` were, and larger prime powers remain
    unexamined.
    """

    level: str
    prime_cutoff: int

    @property
    def is_full(self) -> bool:
        return self.level == FULL

    def __str__(self) -> str:
        return FULL if self.is_full else f"{PI_CERTIFIED}({self.prime_cutoff})"


class TraceEntry(NamedTuple):
    element: int
    shifted: int
    divisor: int | None  # smallest p with p^k | shifted among the checked primes


@dataclass(frozen=True)
class WitnessReport:
    witness: int
    certification: Certification
    trace: tuple[TraceEntry, ...]

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NoWitness:
    candidates_examined: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class NotAdmissible:
    """Marker result: every class mod prime^k is occupied."""

    prime: int


@dataclass(frozen=True)
class AvoidanceCertificate:
    """Explicit avoided residue class per small prime, pigeonhole for the rest.

    ``explicit[p]`` is a class mod p^k that no certified element occupies;
    primes beyond ``checked_bound`` are covered by ``automatic_note``.
    """

    k: int
    explicit: dict[int, ResidueClass]
    checked_bound: int
    automatic_note: str

    def avoided(self, p: int) -> ResidueClass:
        return self.explicit[p]


def admissibility_certificate(
    values, k: int = 2, prime_bound: int | None = None
) -> AvoidanceCertificate | NotAdmissible:
    """Decide admissibility of a finite set and produce explicit certificates.

    Only primes with p^k <= |A| can have every class occupied, so checking
    those decides admissibility; explicit smallest-avoided classes are
    recorded for every prime up to ``prime_bound`` (default: the smallest
    bound covering all decidable primes), and larger primes avoid a class by
    pigeonhole.  Returns NotAdmissible(p) for the smallest fully occupied p.
    """
    elements = as_elements(values)
    if k < 2:
        raise ValueError("k must be >= 2")
    needed = _ceil_root(max(len(elements), 1), k)
    if prime_bound is None:
        prime_bound = max(2, needed)
    elif prime_bound < needed:
        raise ValueError(
            f"prime_bound {prime_bound} below |A|^(1/k) = {needed}; admissibility undecided"
        )
    explicit: dict[int, ResidueClass] = {}
    for p in build_prime_table(prime_bound).primes:
        q = p**k
        occupied = {a % q for a in elements}
        if len(occupied) == q:
            return NotAdmissible(p)
        b = min(set(range(q)) - occupied)
        explicit[p] = ResidueClass(b, q)
    note = (
        f"every prime p with p^{k} > {len(elements)} avoids some class modulo p^{k} "
        f"by pigeonhole ({len(elements)} elements cannot occupy p^{k} classes)"
    )
    return AvoidanceCertificate(k, explicit, prime_bound, note)


def _ceil_root(n: int, k: int) -> int:
    r = integer_kth_root(n, k)
    return r if r**k == n else r + 1


# --- the four named test sequences -----------------------------------------

NAMED_TAGS = ("A1", "A2", "A3", "A4")


def named_sequence_term(tag: str, j: int) -> int:
    """j-th term of a named sequence: A1: 2^j+1, A2: 2^j-1 (j >= 1),
    A3: j!+1 (j >= 1), A4: j!-1 (j >= 2)."""
    if tag == "A1":
        if j < 1:
            raise ValueError("A1 needs j >= 1")
        return 2**j + 1
    if tag == "A2":
        if j < 1:
            raise ValueError("A2 needs j >= 1")
        return 2**j - 1
    if tag == "A3":
        if j < 1:
            raise ValueError("A3 needs j >= 1")
        return factorial(j) + 1
    if tag == "A4":
        if j < 2:
            raise ValueError("A4 needs j >= 2")
        return factorial(j) - 1
    raise ValueError(f"unknown sequence tag {tag!r}")


def named_sequence_first_index(tag: str) -> int:
    return 2 if tag == "A4" else 1


def named_sequence_prefix(tag: str, count: int) -> tuple[int, ...]:
    """First ``count`` terms, in increasing order."""
    j0 = named_sequence_first_index(tag)
    return tuple(named_sequence_term(tag, j) for j in range(j0, j0 + count))


def _named_term_mod(tag: str, j: int, modulus: int) -> int:
    if tag == "A1":
        return (pow(2, j, modulus) + 1) % modulus
    if tag == "A2":
        return (pow(2, j, modulus) - 1) % modulus
    sign = 1 if tag == "A3" else -1
    f = 1
    for m in range(2, j + 1):
        f = f * m % modulus
    return (f + sign) % modulus


def named_sequence_certificate(tag: str, p: int) -> ResidueClass:
    """A residue class mod p^2 avoided by the *entire* infinite sequence.

    For A1/A2 the avoided class is forced in closed form: 2^j +- 1 can never
    be congruent to +-1 mod p^2 for odd p (p^2 never divides 2^j), and mod 4
    the terms are eventually constant.  For A3/A4 the terms equal j! +- 1 and
    are congruent to +-1 mod p^2 once j >= 2p, so enumerating the finitely
    many earlier terms leaves a computable set of avoided classes, of which
    the smallest is returned.
    """
    if p < 2 or any(p % d == 0 for d in range(2, p)):
        raise ValueError(f"{p} is not prime")
    q = p * p
    if tag == "A1":
        cls = ResidueClass(0, 4) if p == 2 else ResidueClass(1, q)
    elif tag == "A2":
        cls = ResidueClass(2, 4) if p == 2 else ResidueClass(q - 1, q)
    elif tag in ("A3", "A4"):
        sign = 1 if tag == "A3" else -1
        occupied = {sign % q, -sign % q}  # the j >= 2p tail
        for j in range(named_sequence_first_index(tag), 2 * p):
            occupied.add(_named_term_mod(tag, j, q))
        cls = ResidueClass(min(set(range(q)) - occupied), q)
    else:
        raise ValueError(f"unknown sequence tag {tag!r}")
    _check_named_certificate(tag, p, cls)
    return cls


def _check_named_certificate(tag: str, p: int, cls: ResidueClass) -> None:
    # Soundness re-check over the pre-periodic/pre-tail terms, mod p^2 only.
    if tag in ("A1", "A2"):
        horizon = _order_of_two(cls.modulus if p != 2 else 4) + 2
    else:
        horizon = 2 * p + 2
    j0 = named_sequence_first_index(tag)
    for j in range(j0, j0 + horizon):
        if _named_term_mod(tag, j, cls.modulus) == cls.residue:
            raise AssertionError(f"certificate {cls} hit by {tag} term j={j}")


def _order_of_two(modulus: int) -> int:
    if modulus % 2 == 0:
        return 2
    order, value = 1, 2 % modulus
    while value != 1:
        value = value * 2 % modulus
        order += 1
    return order


# --- translate witnesses -----------------------------------------------------


def find_translate_witness(
    values,
    lo: int,
    hi: int,
    k: int = 2,
    prime_cutoff: int | None = None,
    range_cap: int = DEFAULT_RANGE_CAP,
) -> WitnessReport | NoWitness:
    """Smallest n in [lo, hi] with n + a k-free for every element a.

    k-freeness is checked against primes up to ``prime_cutoff`` (None means
    all primes that could divide, giving a FULL certification).  Bad n are
    sieved out by marking the classes -a mod p^k instead of testing each
    candidate: the translate n + a is divisible by p^k exactly when
    n = -a (mod p^k).
    """
    elements = as_elements(values)
    if lo < 1:
        raise ValueError("interval must start at 1 or later")
    if hi < lo:
        return NoWitness(0)
    if hi - lo + 1 > range_cap:
        raise BudgetError(f"scan range [{lo}, {hi}] exceeds cap {range_cap}")
    max_a = elements[-1] if elements else 0
    full_cutoff = integer_kth_root(hi + max_a, k) if elements else 0
    if prime_cutoff is None:
        cutoff, level = full_cutoff, FULL
    elif prime_cutoff >= full_cutoff:
        cutoff, level = full_cutoff, FULL
    else:
        cutoff, level = prime_cutoff, PI_CERTIFIED
    certification = Certification(level, cutoff)

    length = hi - lo + 1
    bad = bytearray(length)
    if elements and cutoff >= 2:
        table = build_prime_table(cutoff)
        for p in table.primes:
            q = p**k
            if q > hi + max_a:
                break
            for a in elements:
                first = (-a - lo) % q
                if first < length:
                    bad[first::q] = b"\x01" * len(range(first, length, q))
    for i in range(length):
        if not bad[i]:
            n = lo + i
            return WitnessReport(n, certification, _trace(n, elements, k, cutoff))
    return NoWitness(length)


def _trace(n: int, elements, k: int, cutoff: int) -> tuple[TraceEntry, ...]:
    table = build_prime_table(max(cutoff, 2))
    entries = []
    for a in elements:
        shifted = n + a
        divisor = None
        for p in table.primes:
            if p > cutoff:
                break
            q = p**k
            if q > shifted:
                break
            if shifted % q == 0:
                divisor = p
                break
        entries.append(TraceEntry(a, shifted, divisor))
    return tuple(entries)


def check_q_prefix(
    seq,
    j: int,
    strategy: str = "PLAIN_SCAN",
    k: int = 2,
    prime_cutoff: int | None = None,
    theta: float = 0.1,
) -> WitnessReport | NoWitness:
    """Look for n with n + a_i k-free for all i < j, for a sequence prefix.

    ``seq`` is a named tag ("A1".."A4") or an explicit increasing sequence
    with at least j elements.  Strategies: PLAIN_SCAN searches the open gap
    (a_{j-1}, a_j); HALF_INTERVAL searches [a_j/2, a_j]; CRT delegates to the
    primorial-structured search in :mod:`kfree.constructions`.  Raises
    NotAdmissibleError if the prefix is blocked at some prime.
    """
    if j < 2:
        raise ValueError("need j >= 2")
    if isinstance(seq, str):
        terms = named_sequence_prefix(seq, j)
    else:
        terms = as_elements(seq)
        if len(terms) < j:
            raise ValueError(f"sequence has {len(terms)} elements, need {j}")
    prefix = terms[: j - 1]
    a_prev, a_j = terms[j - 2], terms[j - 1]

    cert = admissibility_certificate(prefix, k)
    if isinstance(cert, NotAdmissible):
        raise NotAdmissibleError(cert.prime)

    if strategy == "PLAIN_SCAN":
        return find_translate_witness(prefix, a_prev + 1, a_j - 1, k, prime_cutoff)
    if strategy == "HALF_INTERVAL":
        return find_translate_witness(prefix, (a_j + 1) // 2, a_j, k, prime_cutoff)
    if strategy == "CRT":
        from .constructions import suff_witness_search

        return suff_witness_search(prefix, a_j, theta=theta, k=k, prime_cutoff=prime_cutoff)
    raise ValueError(f"unknown strategy {strategy!r}")


# --- pairwise sums ------------------------------------------------------------


@dataclass(frozen=True)
class SumViolation:
    a: int
    a_prime: int
    prime: int  # smallest p with p^k | a + a'


def check_squarefree_sums(
    values, include_diagonal: bool = True, k: int = 2
) -> SumViolation | None:
    """None if every pairwise sum is k-free, else the first violating pair.

    Pairs (a, a') with a <= a' are scanned in lexicographic order; the
    diagonal a = a' is included by default, matching the set-translate
    definition where each element's own translate must contain the set.
    """
    elements = as_elements(values)
    for i, a in enumerate(elements):
        start = i if include_diagonal else i + 1
        for a2 in elements[start:]:
            p = smallest_power_divisor(a + a2, k)
            if p is not None:
                return SumViolation(a, a2, p)
    return None


def property_p_evidence(values, n_max: int, k: int = 2) -> dict[int, int]:
    """For each shift n <= n_max, how many elements a have n + a k-free.

    An empirical probe: a set all of whose translates eventually miss the
    k-free numbers shows uniformly small counts here.
    """
    elements = as_elements(values)
    if n_max < 1:
        return {}
    table = None
    if elements:
        table = build_prime_table(integer_kth_root(n_max + elements[-1], k))
    counts = {}
    for n in range(1, n_max + 1):
        counts[n] = sum(
            1 for a in elements if smallest_power_divisor(n + a, k, table) is None
        )
    return counts
