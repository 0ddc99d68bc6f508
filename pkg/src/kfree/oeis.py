"""OEIS b-file ingestion and cross-checking of computed quantities against
locally cached sequence data.

B-files are plain text, one ``index value`` pair per line, with ``#`` comment
lines.  Lookups never touch the network: files come from an explicit path,
the directory named by the KFREE_OEIS_CACHE environment variable, or the
fixture prefixes shipped with the package.  Offset conventions differ per
sequence (a classic off-by-one trap), so each supported id carries an
explicit rule in a checked-in manifest.
"""

import os
from dataclasses import dataclass
from importlib import resources

from .admissible import admissible_max_exact
from .properties import named_sequence_term
from .sieve import count_power_free_upto, kfree_window

CACHE_ENV = "KFREE_OEIS_CACHE"


class BFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class BFile:
    sequence_id: str
    entries: dict[int, int]
    source: str = ""

    @property
    def first_index(self) -> int:
        return min(self.entries)

    @property
    def last_index(self) -> int:
        return max(self.entries)


def parse_oeis_bfile(text: str, sequence_id: str = "", source: str = "") -> BFile:
    """Parse ``index value`` lines; '#' comments and blank lines are skipped.

    Raises BFileError with the offending line number on malformed input,
    duplicate indices, or indices out of order.
    """
    entries: dict[int, int] = {}
    previous = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise BFileError(f"expected 'index value', got {raw!r}", lineno)
        try:
            index, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise BFileError(f"non-integer field in {raw!r}", lineno) from None
        if index in entries:
            raise BFileError(f"duplicate index {index}", lineno)
        if previous is not None and index <= previous:
            raise BFileError(f"index {index} not increasing", lineno)
        entries[index] = value
        previous = index
    return BFile(sequence_id, entries, source)


def emit_bfile(bfile: BFile) -> str:
    """Render back to b-file text (sorted indices, LF endings)."""
    lines = [f"{i} {bfile.entries[i]}" for i in sorted(bfile.entries)]
    return "\n".join(lines) + "\n"


def load_bfile(sequence_id: str, path: str | None = None) -> BFile:
    """Load a b-file from an explicit path, the cache directory, or the
    shipped fixtures, in that order."""
    filename = f"b{sequence_id.lstrip('A')}.txt"
    if path is not None:
        with open(path, encoding="ascii") as handle:
            return parse_oeis_bfile(handle.read(), sequence_id, path)
    cache = os.environ.get(CACHE_ENV)
    if cache:
        candidate = os.path.join(cache, filename)
        if os.path.exists(candidate):
            with open(candidate, encoding="ascii") as handle:
                return parse_oeis_bfile(handle.read(), sequence_id, candidate)
    packaged = resources.files("kfree") / "data" / "oeis" / filename
    if not packaged.is_file():
        raise FileNotFoundError(f"no local b-file for {sequence_id}")
    return parse_oeis_bfile(packaged.read_text(), sequence_id, f"packaged:{filename}")


# --- quantities and the offset manifest ---------------------------------------

SF_COUNT = "SF_COUNT"
SF_NTH = "SF_NTH"
A_OF_X = "A_OF_X"
NAMED_TERM = "NAMED_TERM"


@dataclass(frozen=True)
class ManifestRule:
    """How one OEIS id maps onto a computed quantity.

    ``index_start`` is the first index the artifact can reproduce (earlier
    b-file entries fall outside the quantity's domain and are skipped).
    """

    sequence_id: str
    quantity: str
    argument: str
    index_start: int
    note: str


def load_manifest(path: str | None = None) -> dict[str, ManifestRule]:
    if path is not None:
        with open(path, encoding="ascii") as handle:
            text = handle.read()
    else:
        text = (resources.files("kfree") / "data" / "oeis_manifest.tsv").read_text()
    rules = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        sequence_id, quantity, argument, index_start, note = line.split("\t")
        rules[sequence_id] = ManifestRule(
            sequence_id, quantity, argument, int(index_start), note
        )
    return rules


class _NthKFree:
    """Streaming n-th k-free lookup, windowed so memory stays flat."""

    def __init__(self, k: int = 2):
        self.k = k
        self.values: list[int] = []
        self._next_start = 1

    def __call__(self, n: int) -> int:
        while len(self.values) < n:
            window = kfree_window(self._next_start, 1 << 14, self.k)
            self.values.extend(window.members())
            self._next_start += 1 << 14
        return self.values[n - 1]


_NTH_CACHE: dict[int, _NthKFree] = {}


def computed_value(rule: ManifestRule, index: int, time_budget: float | None = None):
    if rule.quantity == SF_COUNT:
        # counts k-free numbers strictly below the index
        return count_power_free_upto(index - 1)
    if rule.quantity == SF_NTH:
        nth = _NTH_CACHE.setdefault(2, _NthKFree(2))
        return nth(index)
    if rule.quantity == A_OF_X:
        return admissible_max_exact(index, time_budget=time_budget).value
    if rule.quantity == NAMED_TERM:
        return named_sequence_term(rule.argument, index)
    raise ValueError(f"unknown quantity {rule.quantity!r}")


@dataclass(frozen=True)
class CrosscheckReport:
    sequence_id: str
    quantity: str
    checked: tuple[int, ...]
    mismatches: tuple[tuple[int, int, int], ...]  # (index, ingested, computed)
    skipped: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches and bool(self.checked)

    def summary(self) -> str:
        status = "OK" if self.ok else f"{len(self.mismatches)} MISMATCH"
        return (
            f"{self.sequence_id} [{self.quantity}]: {len(self.checked)} checked, "
            f"{len(self.skipped)} outside domain, {status}"
        )


def crosscheck(
    bfile: BFile,
    rule: ManifestRule,
    index_range: tuple[int, int] | None = None,
    time_budget: float | None = None,
) -> CrosscheckReport:
    """Compare every ingested entry in range against the computed quantity."""
    if rule.sequence_id != bfile.sequence_id:
        raise ValueError(
            f"manifest rule is for {rule.sequence_id}, b-file is {bfile.sequence_id}"
        )
    if not bfile.entries:
        return CrosscheckReport(bfile.sequence_id, rule.quantity, (), (), ())
    lo = rule.index_start if index_range is None else max(rule.index_start, index_range[0])
    hi = bfile.last_index if index_range is None else min(bfile.last_index, index_range[1])
    checked, mismatches, skipped = [], [], []
    for index in sorted(bfile.entries):
        if index < rule.index_start:
            skipped.append(index)
            continue
        if not lo <= index <= hi:
            continue
        expected = bfile.entries[index]
        actual = computed_value(rule, index, time_budget)
        checked.append(index)
        if actual != expected:
            mismatches.append((index, expected, actual))
    return CrosscheckReport(
        bfile.sequence_id,
        rule.quantity,
        tuple(checked),
        tuple(mismatches),
        tuple(skipped),
    )
