"""Explicit constructions: slow-density translate avoiders, greedy
pairwise-sum sequences, primorial-structured witness searches, dense
anchor iterations, seeded random counterexamples, and base points whose
small-prime part is a full primorial power.

Every randomized choice in the underlying existence arguments is replaced by
a deterministic increasing scan, with seeded-random candidate orders offered
for experiments; identical inputs and seeds always reproduce identical output.
"""

from dataclasses import dataclass, field
from math import ceil, exp, log
from random import Random

from .errors import BudgetError, NotAdmissibleError
from .properties import (
    Certification,
    FULL,
    NoWitness,
    NotAdmissible,
    PI_CERTIFIED,
    TraceEntry,
    WitnessReport,
    admissibility_certificate,
    as_elements,
    find_translate_witness,
)
from .sieve import (
    ResidueClass,
    build_prime_table,
    crt_combine,
    integer_kth_root,
    kfree_window,
    nth_prime,
    smallest_power_divisor,
)

# Growth functions selectable from the command line; arbitrary callables are
# accepted by the library, these are just the named built-ins.
GROWTH_FUNCTIONS = {
    "identity": lambda j: j,
    "half": lambda j: max(1, j // 2),
    "times10": lambda j: 10 * j,
    "jlogj": lambda j: j * max(1, ceil(log(max(j, 2)))),
}


def resolve_growth(token: str):
    """Named growth function, or a scaled one via 'times<c>' (e.g. times3)."""
    if token in GROWTH_FUNCTIONS:
        return GROWTH_FUNCTIONS[token]
    if token.startswith("times") and token[5:].isdigit() and int(token[5:]) > 0:
        scale = int(token[5:])
        return lambda j: scale * j
    raise ValueError(
        f"unknown growth function {token!r}; use one of "
        f"{sorted(GROWTH_FUNCTIONS)} or times<c>"
    )


# --- slow-density sequence with vanishing translate intersections -------------


@dataclass(frozen=True)
class SlowDensitySequence:
    """Output of :func:`property_p_sequence`.

    ``terms[j-1]`` is the j-th element.  ``active_from[r]`` is the first index
    j from which every emitted term satisfies p_r^k | term + r; indices below
    ``identity_until`` inclusive are simply 1, 2, 3, ...
    """

    terms: tuple[int, ...]
    k: int
    identity_until: int
    active_from: dict[int, int]


def property_p_sequence(f, count: int, k: int = 2, scan_horizon: int = 10_000) -> SlowDensitySequence:
    """Build a sequence of density ~1/f whose translates all eventually die.

    The j-th term is forced into the residue class -r mod p_r^k for every r
    whose primorial-power threshold W_r = (p_1...p_r)^k the growth function f
    has reached by index j; this keeps term_j <= j * f(j) while ensuring that
    term + n is divisible by p_n^k for all large terms, for every fixed n.

    Thresholds are detected over max(count, scan_horizon) indices; a growth
    function that never reaches W_1 = 2^k there is rejected, since the output
    would carry no congruence structure at all.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    horizon = max(count, scan_horizon)

    def threshold_index(w: int, lowest: int) -> int | None:
        # smallest j0 >= lowest with f(j) >= w for all j in [j0, horizon]
        j0 = None
        for j in range(horizon, lowest - 1, -1):
            if f(j) < w:
                break
            j0 = j
        return j0

    w = 2**k
    l1 = threshold_index(w, 1)
    if l1 is None:
        raise BudgetError(
            f"growth function never reaches {w} on indices up to {horizon}; "
            "it must tend to infinity"
        )

    # activation[r] = first index whose term is forced into -r mod p_r^k
    levels = [(1, l1)]
    r = 1
    while levels[-1][1] <= count:
        r += 1
        w *= nth_prime(r) ** k
        j0 = threshold_index(w, levels[-1][1] + 1)
        if j0 is None:
            break
        levels.append((r, j0))

    terms: list[int] = []
    classes = []  # the congruences currently in force
    merged = None
    level_pos = 0
    for j in range(1, count + 1):
        while level_pos < len(levels) and levels[level_pos][1] <= j:
            r_new = levels[level_pos][0]
            q = nth_prime(r_new) ** k
            classes.append(ResidueClass(-r_new % q, q))
            merged = crt_combine(classes)
            level_pos += 1
        if j <= l1:
            terms.append(j)
        else:
            prev = terms[-1]
            step = (merged.residue - prev) % merged.modulus
            terms.append(prev + (step or merged.modulus))

    active_from = {}
    for r_level, j0 in levels:
        if j0 <= count:
            # the term at the threshold index itself is only congruent once it
            # is produced by the congruence scan, i.e. past the identity ramp
            active_from[r_level] = max(j0, l1 + 1)
    return SlowDensitySequence(tuple(terms), k, l1, active_from)


# --- greedy pairwise-sum sequence ---------------------------------------------


@dataclass(frozen=True)
class GreedySkip:
    candidate: int
    partner: int
    prime: int  # prime whose k-th power divides candidate + partner


@dataclass(frozen=True)
class GreedyResult:
    terms: tuple[int, ...]
    skipped: tuple[GreedySkip, ...]


def greedy_squarefree_sums(count: int, include_diagonal: bool = True, k: int = 2) -> GreedyResult:
    """Greedily extend a set keeping every pairwise sum k-free.

    Each new term is the smallest integer above the previous one whose sums
    with all existing terms (and with itself, if the diagonal is included)
    are k-free.  Every rejected candidate is logged with a concrete violating
    pair so greedy minimality can be re-verified.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    terms: list[int] = []
    skipped: list[GreedySkip] = []
    candidate = 1
    while len(terms) < count:
        conflict = None
        partners = terms + [candidate] if include_diagonal else terms
        for a in partners:
            p = smallest_power_divisor(candidate + a, k)
            if p is not None:
                conflict = GreedySkip(candidate, a, p)
                break
        if conflict is None:
            terms.append(candidate)
        else:
            skipped.append(conflict)
        candidate += 1
    return GreedyResult(tuple(terms), tuple(skipped))


# --- primorial-structured witness search ---------------------------------------


def suff_witness_search(
    values,
    x: int,
    theta: float = 0.1,
    interval: str = "HALF",
    k: int = 2,
    seed: int | None = None,
    prime_cutoff: int | None = None,
    forward_exponent: tuple[int, int] = (10, 11),
) -> WitnessReport | NoWitness:
    """Search for n with n + a k-free for all elements a <= x, using the
    avoidance certificate to pre-clear all primes up to theta * ln x.

    With W the product of p^k over p <= theta*ln(x) and b the CRT combination
    of the avoided classes, candidates run over n = -b (mod W) inside the
    chosen interval (HALF: [x/2, x]; FORWARD: (x, x + x^(num/den)) with the
    exponent taken from ``forward_exponent``), in increasing order, or in
    seeded random order when a seed is given.
    """
    elements = as_elements(values)
    if not 0 < theta < 0.25:
        raise ValueError("theta must lie in (0, 1/4)")
    if interval not in ("HALF", "FORWARD"):
        raise ValueError(f"unknown interval mode {interval!r}")
    num, den = forward_exponent
    if not 0 < num <= den:
        raise ValueError("forward exponent must lie in (0, 1]")
    if elements and x < elements[-1]:
        raise ValueError("x must be at least max(A)")
    relevant = tuple(a for a in elements if a <= x)

    prime_limit = int(theta * log(x)) if x >= 2 else 0
    w_primes = build_prime_table(prime_limit).primes if prime_limit >= 2 else ()
    if w_primes:
        # the certificate must cover the primorial primes and stay above the
        # decidability floor |A|^(1/k) that full-occupancy checks need
        floor_bound = integer_kth_root(max(len(relevant), 1), k) + 1
        cert = admissibility_certificate(
            relevant, k, prime_bound=max(w_primes[-1], floor_bound, 2)
        )
        if isinstance(cert, NotAdmissible):
            raise NotAdmissibleError(cert.prime)
        merged = crt_combine([cert.avoided(p) for p in w_primes])
        modulus = merged.modulus
        target = -merged.residue % modulus  # n = -b (mod W)
    else:
        modulus, target = 1, 0

    if interval == "HALF":
        lo, hi = (x + 1) // 2, x
    else:
        lo, hi = x + 1, x + integer_kth_root(x**num, den)

    if modulus == 1 and seed is None:
        return find_translate_witness(relevant, lo, hi, k, prime_cutoff)

    first = lo + (target - lo) % modulus
    if (hi - first) // modulus + 1 > 10_000_000:
        raise BudgetError("candidate list too long; raise theta or shrink the interval")
    candidates = list(range(first, hi + 1, modulus))
    if seed is not None:
        Random(seed).shuffle(candidates)

    max_a = relevant[-1] if relevant else 0
    full_cutoff = integer_kth_root(hi + max_a, k) if relevant else 0
    if prime_cutoff is None or prime_cutoff >= full_cutoff:
        cutoff, level = full_cutoff, FULL
    else:
        cutoff, level = prime_cutoff, PI_CERTIFIED
    certification = Certification(level, cutoff)
    table = build_prime_table(max(cutoff, 2))

    examined = 0
    for n in candidates:
        examined += 1
        trace = []
        good = True
        for a in relevant:
            shifted = n + a
            divisor = None
            for p in table.primes:
                if p > cutoff or p**k > shifted:
                    break
                if shifted % p**k == 0:
                    divisor = p
                    break
            trace.append(TraceEntry(a, shifted, divisor))
            if divisor is not None:
                good = False
                break
        if good:
            return WitnessReport(n, certification, tuple(trace))
    return NoWitness(examined)


# --- dense anchors: iterated key construction ----------------------------------


@dataclass(frozen=True)
class DenseStepReport:
    anchor: int
    candidates_examined: int
    grid: tuple[tuple[int, float], ...]  # (R, density of good k-free a <= R)
    grid_capped: bool
    slice_materialized: bool


@dataclass
class DenseQState:
    """Anchors n_1 < n_2 < ... with n_{i+1} a primorial-power multiple whose
    translates preserve the k-free numbers below the previous anchor, plus the
    accumulated slices {a k-free in (n_i, n_{i+1}]: n_{i+1} + a k-free}."""

    k: int = 2
    anchors: list[int] = field(default_factory=list)
    slices: list[tuple[int, ...] | None] = field(default_factory=list)
    reports: list[DenseStepReport] = field(default_factory=list)

    @classmethod
    def start(cls, n1: int, k: int = 2) -> "DenseQState":
        if n1 < 2:
            raise ValueError("initial anchor must be >= 2")
        return cls(k=k, anchors=[n1])

    def accumulated_set(self) -> tuple[int, ...]:
        merged: list[int] = []
        for piece in self.slices:
            if piece:
                merged.extend(piece)
        return tuple(merged)


def dense_q_step(
    state: DenseQState,
    epsilon: float,
    x: int,
    seed: int | None = None,
    slice_budget: int = 1_000_000,
    grid_budget: int = 1_000_000,
) -> DenseQState:
    """Append the next anchor n' to the state: a multiple of
    W = prod_{p <= n^2} p^k in [x/2, x] with n' + a k-free for every k-free
    a <= n, and n' at least (i+1) times the current anchor n (i anchors so far).

    The exact-preservation condition is verified for every k-free a <= n; the
    density of {a k-free <= R : n' + a k-free} is additionally measured on the
    geometric grid R, (1+epsilon)R, ... up to min(n', grid_budget) and
    reported, not asserted.  The new slice of the accumulated set is
    materialized only when it fits the slice budget.
    """
    if not state.anchors:
        raise ValueError("state has no initial anchor; use DenseQState.start")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    k = state.k
    n = state.anchors[-1]
    step_index = len(state.anchors)

    w_primes = build_prime_table(n * n).primes
    modulus = 1
    for p in w_primes:
        modulus *= p**k
    lo, hi = (x + 1) // 2, x
    first = lo + (-lo) % modulus
    if first > hi:
        raise ValueError(
            f"no multiple of the primorial power {modulus} lies in [{lo}, {hi}]"
        )
    floor_anchor = max(first, (step_index + 1) * n)
    candidates = [m for m in range(first, hi + 1, modulus) if m >= floor_anchor]
    if not candidates:
        raise ValueError(
            f"multiples of {modulus} in [{lo}, {hi}] all violate the spacing "
            f"requirement n' >= {(step_index + 1) * n}"
        )
    if seed is not None:
        Random(seed).shuffle(candidates)

    small_free = kfree_window(1, n, k).members()
    table = build_prime_table(integer_kth_root(hi + n, k))
    examined = 0
    for candidate in candidates:
        examined += 1
        if all(
            smallest_power_divisor(candidate + a, k, table) is None for a in small_free
        ):
            anchor = candidate
            break
    else:
        raise BudgetError(
            f"none of the {examined} candidate multiples preserved the k-free "
            f"numbers up to {n}"
        )

    # density report on a geometric grid, capped by the inspection budget
    r_cap = min(anchor, grid_budget)
    grid_points = []
    r = n
    while r <= r_cap:
        grid_points.append(r)
        r = max(r + 1, int(r * (1 + epsilon)))
    if grid_points and grid_points[-1] != r_cap:
        grid_points.append(r_cap)
    grid = []
    if grid_points:
        top = grid_points[-1]
        low_flags = kfree_window(1, top, k).flags
        high_flags = kfree_window(anchor + 1, top, k).flags
        good = 0
        next_idx = 0
        for a in range(1, top + 1):
            if low_flags[a - 1] and high_flags[a - 1]:
                good += 1
            if next_idx < len(grid_points) and a == grid_points[next_idx]:
                grid.append((a, good / a))
                next_idx += 1

    materialized = anchor - n <= slice_budget
    if materialized:
        mid_flags = kfree_window(n + 1, anchor - n, k).flags
        shifted_flags = kfree_window(anchor + n + 1, anchor - n, k).flags
        piece = tuple(
            n + 1 + i for i in range(anchor - n) if mid_flags[i] and shifted_flags[i]
        )
    else:
        piece = None

    state.anchors.append(anchor)
    state.slices.append(piece)
    state.reports.append(
        DenseStepReport(anchor, examined, tuple(grid), r_cap < anchor, materialized)
    )
    return state


# --- seeded random counterexample ----------------------------------------------


def membership_probability(n: int, c: float) -> float:
    """min(c * ln(n) * ln(ln(n)) / n, 1), the inclusion rate at n >= 3."""
    if n < 3:
        raise ValueError("defined for n >= 3")
    return min(c * log(n) * log(log(n)) / n, 1.0)


_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _uniform01(seed: int, n: int) -> float:
    """Counter-based uniform draw keyed by (seed, n); order-independent."""
    z = _splitmix64(_splitmix64(seed & _MASK64) ^ (n & _MASK64))
    return _splitmix64(z) / 2**64


def sample_counterexample(c: float, x_max: int, seed: int, k: int = 2) -> tuple[int, ...]:
    """Random k-free subset of [3, x_max], each k-free n included independently
    with probability min(c * ln n * lnln n / n, 1).

    Deterministic per seed: each n gets one counter-based uniform draw, so the
    sample is independent of evaluation order.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    if x_max < 3:
        raise ValueError("x_max must be >= 3")
    window = kfree_window(3, x_max - 2, k)
    chosen = []
    for n in window.members():
        if _uniform01(seed, n) < membership_probability(n, c):
            chosen.append(n)
    return tuple(chosen)


def occupancy_probe(values, x: int, k: int = 2) -> dict[int, tuple[int, ...]]:
    """For each prime p <= ln x, the nonzero classes mod p^k that A cap [x]
    leaves unoccupied (an empty tuple flags full occupancy, the obstruction
    that forces any surviving shift to be divisible by the whole primorial
    power)."""
    elements = [a for a in as_elements(values) if a <= x]
    probe = {}
    limit = int(log(x)) if x >= 2 else 0
    for p in build_prime_table(limit).primes:
        q = p**k
        occupied = {a % q for a in elements}
        probe[p] = tuple(r for r in range(1, q) if r not in occupied)
    return probe


# --- base points congruent to zero modulo a full primorial power ----------------


def _loglog_range(p: int) -> int:
    """floor(p / (lnln p)^2), the forced-translate range at a prime p >= 5."""
    return int(p / log(log(p)) ** 2)


def overp_base_point(
    p_threshold: int,
    k: int = 2,
    max_candidates: int = 1_000_000,
    verify_prime_cap: int | None = None,
    min_value: int = 0,
) -> int:
    """Smallest multiple n of prod_{p <= P} p^k such that for every prime
    q > P, q^k divides none of n+1, ..., n + floor(q / (lnln q)^2).

    Only finitely many q can interfere once n is fixed (q^k must not exceed
    n plus the range), and each is checked by a single modular reduction.
    ``verify_prime_cap`` limits the checked q for astronomically large n;
    left as None, the full forced range is verified or a BudgetError raised
    if that range is itself out of reach.
    """
    if p_threshold < 3:
        raise ValueError("prime threshold must be >= 3")
    if k < 2:
        raise ValueError("k must be >= 2")
    small = build_prime_table(p_threshold).primes
    modulus = 1
    for p in small:
        modulus *= p**k

    def violates(n: int) -> bool:
        # the loop below stops once q^k > n + reach(q); reach(q) < q, so no
        # prime beyond kth_root(n) + 2 can interfere
        top = integer_kth_root(n, k) + 2
        if verify_prime_cap is not None:
            top = min(top, verify_prime_cap)
        elif top > 10_000_000:
            raise BudgetError(
                f"full verification would need primes up to {top}; "
                "pass verify_prime_cap to accept a partial certification"
            )
        table = build_prime_table(top)
        for q in table.primes:
            if q <= p_threshold:
                continue
            reach = _loglog_range(q)
            if q**k > n + reach:
                break
            r = -n % q**k
            if 1 <= r <= reach:
                return True
        return False

    n = modulus * (min_value // modulus + 1)
    for _ in range(max_candidates):
        if not violates(n):
            return n
        n += modulus
    raise BudgetError(
        f"no multiple of {modulus} passed the translate conditions within "
        f"{max_candidates} candidates"
    )


@dataclass(frozen=True)
class OverPSequence:
    thresholds: tuple[int, ...]
    anchors: tuple[int, ...]
    induced: tuple[int, ...]
    induced_cap: int
    certification: Certification


def overp_sequence(
    scale: int,
    depth: int,
    k: int = 2,
    induced_cap: int = 200,
    max_candidates: int = 100_000,
    verify_prime_cap: int = 100_000,
    primorial_bit_budget: int = 1 << 20,
) -> OverPSequence:
    """Anchors n_1 < ... < n_depth at thresholds P_j = ceil(scale * e^(e^j)),
    each a base point per :func:`overp_base_point`, plus the induced set of
    k-free a <= induced_cap whose every translate n_j + a stays k-free.

    The doubly exponential thresholds explode fast: a depth whose primorial
    power exceeds the bit budget is refused rather than approximated.
    """
    if scale < 3:
        raise ValueError("scale must be >= 3")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    thresholds = []
    for j in range(1, depth + 1):
        inner = exp(j)
        if inner > 700:  # e^inner overflows doubles long after any sane budget
            raise BudgetError(f"threshold at depth {j} is astronomically large")
        t = ceil(scale * exp(inner))
        # theta(P) ~ P, so the primorial power needs about 1.45 * k * P bits
        if 1.45 * k * t > primorial_bit_budget:
            raise BudgetError(
                f"primorial power at threshold {t} needs roughly "
                f"{int(1.45 * k * t)} bits, over the {primorial_bit_budget}-bit budget"
            )
        thresholds.append(t)
    thresholds = tuple(thresholds)
    anchors = []
    previous = 0
    for t in thresholds:
        anchor = overp_base_point(
            t,
            k,
            max_candidates=max_candidates,
            verify_prime_cap=verify_prime_cap,
            min_value=previous,
        )
        anchors.append(anchor)
        previous = anchor

    window = kfree_window(1, induced_cap, k)
    bad = bytearray(induced_cap)
    if anchors:
        needed = integer_kth_root(anchors[-1] + induced_cap, k)
        cutoff = min(needed, verify_prime_cap)
        certification = Certification(
            FULL if needed <= verify_prime_cap else PI_CERTIFIED, cutoff
        )
        table = build_prime_table(max(cutoff, 2))
        for n in anchors:
            for p in table.primes:
                q = p**k
                if q > n + induced_cap:
                    break
                first = -n % q
                if first == 0:
                    first = q
                for a in range(first, induced_cap + 1, q):
                    bad[a - 1] = 1
    else:
        certification = Certification(FULL, 0)
    induced = tuple(
        a for a in range(1, induced_cap + 1) if window.flags[a - 1] and not bad[a - 1]
    )
    return OverPSequence(
        thresholds, tuple(anchors), induced, induced_cap, certification
    )
