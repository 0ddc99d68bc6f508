import random

import pytest

from kfree.errors import NotAdmissibleError
from kfree.properties import (
    AvoidanceCertificate,
    FiniteSet,
    NoWitness,
    NotAdmissible,
    SumViolation,
    admissibility_certificate,
    as_elements,
    check_q_prefix,
    check_squarefree_sums,
    find_translate_witness,
    named_sequence_certificate,
    named_sequence_prefix,
    named_sequence_term,
    property_p_evidence,
)
from kfree.sieve import ResidueClass

from oracles import kfree_by_factorization, smallest_power_divisor_oracle


def test_finite_set_validation():
    assert FiniteSet.of([5, 3, 3, 9]).elements == (3, 5, 9)
    with pytest.raises(ValueError):
        FiniteSet((2, 2))
    with pytest.raises(ValueError):
        FiniteSet((0, 1))
    assert as_elements(FiniteSet.of([1, 2])) == (1, 2)


class TestAdmissibility:
    def test_a1_prefix_certificate(self):
        cert = admissibility_certificate([3, 5, 9, 17, 33], k=2, prime_bound=3)
        assert isinstance(cert, AvoidanceCertificate)
        assert cert.avoided(2) == ResidueClass(0, 4)
        assert cert.avoided(3) == ResidueClass(1, 9)

    def test_fully_occupied_modulus(self):
        result = admissibility_certificate([1, 2, 3, 4], k=2)
        assert result == NotAdmissible(2)

    def test_singleton(self):
        cert = admissibility_certificate([7], k=2)
        assert cert.avoided(2) == ResidueClass(0, 4)

    def test_prime_bound_too_small_rejected(self):
        with pytest.raises(ValueError):
            admissibility_certificate(list(range(1, 30)), k=2, prime_bound=2)

    def test_certificate_soundness(self):
        rng = random.Random(5)
        for _ in range(100):
            elements = sorted(rng.sample(range(1, 500), rng.randrange(1, 20)))
            cert = admissibility_certificate(elements, k=2, prime_bound=7)
            if isinstance(cert, NotAdmissible):
                continue
            for p, cls in cert.explicit.items():
                assert all(a % cls.modulus != cls.residue for a in elements), (p, elements)

    def test_completeness_small_sets(self):
        # NotAdmissible(p) exactly when some p with p^k <= |A| is fully occupied
        rng = random.Random(11)
        for _ in range(300):
            size = rng.randrange(1, 31)
            elements = sorted(rng.sample(range(1, 80), size))
            result = admissibility_certificate(elements, k=2)
            blocked = [
                p
                for p in (2, 3, 5)
                if p * p <= size and len({a % (p * p) for a in elements}) == p * p
            ]
            if blocked:
                assert result == NotAdmissible(blocked[0])
            else:
                assert isinstance(result, AvoidanceCertificate)

    def test_downward_monotone(self):
        base = [3, 5, 9, 17, 33, 65, 129, 257, 513, 1025]
        assert isinstance(admissibility_certificate(base), AvoidanceCertificate)
        rng = random.Random(17)
        for _ in range(200):
            subset = sorted(rng.sample(base, rng.randrange(1, len(base) + 1)))
            assert isinstance(admissibility_certificate(subset), AvoidanceCertificate)


class TestNamedSequences:
    def test_terms(self):
        assert named_sequence_term("A1", 5) == 33
        assert named_sequence_term("A3", 4) == 25
        assert named_sequence_term("A4", 2) == 1

    def test_prefixes(self):
        assert named_sequence_prefix("A1", 5) == (3, 5, 9, 17, 33)
        assert named_sequence_prefix("A2", 5) == (1, 3, 7, 15, 31)
        assert named_sequence_prefix("A3", 5) == (2, 3, 7, 25, 121)
        assert named_sequence_prefix("A4", 5) == (1, 5, 23, 119, 719)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            named_sequence_term("A4", 1)
        with pytest.raises(ValueError):
            named_sequence_term("A1", 0)
        with pytest.raises(ValueError):
            named_sequence_term("A9", 1)

    def test_certificates_match_closed_forms(self):
        assert named_sequence_certificate("A2", 2) == ResidueClass(2, 4)
        assert named_sequence_certificate("A2", 3) == ResidueClass(8, 9)
        assert named_sequence_certificate("A3", 3) == ResidueClass(0, 9)
        assert named_sequence_certificate("A1", 2) == ResidueClass(0, 4)
        assert named_sequence_certificate("A1", 3) == ResidueClass(1, 9)
        assert named_sequence_certificate("A1", 5) == ResidueClass(1, 25)
        assert named_sequence_certificate("A4", 2) == ResidueClass(0, 4)

    @pytest.mark.parametrize("tag", ["A1", "A2", "A3", "A4"])
    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
    def test_certificates_avoid_long_prefixes(self, tag, p):
        cls = named_sequence_certificate(tag, p)
        for term in named_sequence_prefix(tag, 60):
            assert term % cls.modulus != cls.residue

    def test_not_prime_rejected(self):
        with pytest.raises(ValueError):
            named_sequence_certificate("A1", 6)


class TestTranslateWitness:
    def test_examples(self):
        assert find_translate_witness([1, 3], 1, 100).witness == 2
        assert find_translate_witness([3, 5], 1, 100).witness == 2
        assert find_translate_witness([1, 2, 3, 4], 1, 10**4) == NoWitness(10**4)

    def test_witness_is_smallest(self):
        report = find_translate_witness([3, 5], 1, 100)
        # n = 1 fails because 1 + 3 = 4
        assert report.witness == 2

    def test_full_reports_reverify(self):
        rng = random.Random(23)
        for _ in range(50):
            elements = sorted(rng.sample(range(1, 60), rng.randrange(1, 6)))
            report = find_translate_witness(elements, 1, 500)
            if isinstance(report, NoWitness):
                continue
            assert report.certification.is_full
            for entry in report.trace:
                assert entry.shifted == report.witness + entry.element
                assert entry.divisor is None
                assert kfree_by_factorization(entry.shifted, 2)

    def test_pi_certified_tier(self):
        report = find_translate_witness([1], 1, 50, prime_cutoff=2)
        assert report.certification.level == "PI_CERTIFIED"
        assert report.certification.prime_cutoff == 2
        # only p = 2 was checked, so the witness merely avoids 3 mod 4
        assert (report.witness + 1) % 4 != 0

    def test_empty_set_is_vacuous(self):
        report = find_translate_witness([], 5, 10)
        assert report.witness == 5 and report.trace == ()

    def test_empty_interval(self):
        assert find_translate_witness([1], 7, 6) == NoWitness(0)

    def test_astronomical_elements_need_explicit_cutoff(self):
        from kfree.errors import ResourceError

        huge = named_sequence_term("A3", 25)
        with pytest.raises(ResourceError):
            find_translate_witness([huge], 1, 10)  # full certification infeasible
        report = find_translate_witness([huge], 1, 10, prime_cutoff=1000)
        assert report.certification.level == "PI_CERTIFIED"
        assert report.certification.prime_cutoff == 1000


class TestQPrefix:
    def test_a1_witnesses(self):
        assert check_q_prefix("A1", 3).witness == 8
        assert check_q_prefix("A1", 2).witness == 4
        assert check_q_prefix("A2", 3).witness == 4

    def test_witness_lies_in_open_gap(self):
        for j in range(2, 10):
            report = check_q_prefix("A1", j)
            assert report, f"no witness at j={j}"
            prefix = named_sequence_prefix("A1", j)
            assert prefix[j - 2] < report.witness < prefix[j - 1]
            for entry in report.trace:
                assert kfree_by_factorization(entry.shifted, 2)

    def test_half_interval_strategy(self):
        report = check_q_prefix("A1", 5, strategy="HALF_INTERVAL")
        a5 = named_sequence_term("A1", 5)
        assert (a5 + 1) // 2 <= report.witness <= a5

    def test_crt_strategy_delegates(self):
        report = check_q_prefix("A1", 5, strategy="CRT")
        assert report
        for entry in report.trace:
            assert kfree_by_factorization(entry.shifted, 2)

    def test_non_admissible_prefix_is_diagnosed(self):
        with pytest.raises(NotAdmissibleError) as info:
            check_q_prefix([1, 2, 3, 4, 9], 5)
        assert info.value.prime == 2

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            check_q_prefix("A1", 1)
        with pytest.raises(ValueError):
            check_q_prefix([3, 5], 3)
        with pytest.raises(ValueError):
            check_q_prefix("A1", 3, strategy="MAGIC")


class TestSquarefreeSums:
    def test_examples(self):
        assert check_squarefree_sums([3, 5]) == SumViolation(3, 5, 2)
        assert check_squarefree_sums([1, 2]) == SumViolation(2, 2, 2)
        assert check_squarefree_sums([1, 5, 21]) is None

    def test_diagonal_flag(self):
        assert check_squarefree_sums([1, 2], include_diagonal=False) is None
        assert check_squarefree_sums([2], include_diagonal=True) == SumViolation(2, 2, 2)

    def test_named_prefixes_all_fail(self):
        for tag in ("A1", "A2", "A3", "A4"):
            violation = check_squarefree_sums(named_sequence_prefix(tag, 5))
            assert violation is not None and violation.prime == 2

    def test_agreement_with_oracle(self):
        rng = random.Random(31)
        for _ in range(500):
            elements = sorted(rng.sample(range(1, 10_000), rng.randrange(1, 9)))
            got = check_squarefree_sums(elements)
            expected = None
            for i, a in enumerate(elements):
                if expected:
                    break
                for a2 in elements[i:]:
                    p = smallest_power_divisor_oracle(a + a2, 2)
                    if p is not None:
                        expected = SumViolation(a, a2, p)
                        break
            assert got == expected

    def test_downward_monotone(self):
        base = [1, 5, 21, 37, 41]
        assert check_squarefree_sums(base) is None
        rng = random.Random(37)
        for _ in range(200):
            subset = sorted(rng.sample(base, rng.randrange(1, 6)))
            assert check_squarefree_sums(subset) is None


def test_property_p_evidence():
    assert property_p_evidence([1], 3) == {1: 1, 2: 1, 3: 0}
    assert property_p_evidence([], 4) == {1: 0, 2: 0, 3: 0, 4: 0}
    assert property_p_evidence([1], 0) == {}
