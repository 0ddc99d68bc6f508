import math

import pytest

from kfree.constructions import (
    DenseQState,
    GROWTH_FUNCTIONS,
    dense_q_step,
    greedy_squarefree_sums,
    membership_probability,
    occupancy_probe,
    overp_base_point,
    overp_sequence,
    property_p_sequence,
    sample_counterexample,
    suff_witness_search,
)
from kfree.errors import BudgetError, NotAdmissibleError
from kfree.properties import check_squarefree_sums, named_sequence_prefix
from kfree.sieve import build_prime_table, kfree_window

from oracles import kfree_by_factorization, trial_division_primes


class TestSlowDensitySequence:
    def test_identity_growth_prefix(self):
        seq = property_p_sequence(GROWTH_FUNCTIONS["identity"], 36)
        assert seq.terms[:6] == (1, 2, 3, 4, 7, 11)
        assert seq.terms[34] == 127
        assert seq.terms[35] == 151

    def test_invariants_200_terms(self):
        f = GROWTH_FUNCTIONS["identity"]
        seq = property_p_sequence(f, 200)
        primes = trial_division_primes(100)
        assert all(a < b for a, b in zip(seq.terms, seq.terms[1:]))
        for j, term in enumerate(seq.terms, start=1):
            assert term <= j * f(j), (j, term)
        for r, start in seq.active_from.items():
            q = primes[r - 1] ** 2
            for j in range(start, 201):
                assert (seq.terms[j - 1] + r) % q == 0, (r, j)

    def test_constant_growth_rejected(self):
        with pytest.raises(BudgetError):
            property_p_sequence(lambda j: 1, 10)

    def test_zero_terms(self):
        assert property_p_sequence(GROWTH_FUNCTIONS["identity"], 0).terms == ()

    def test_faster_growth_activates_sooner(self):
        seq = property_p_sequence(GROWTH_FUNCTIONS["times10"], 50)
        # W_1 = 4 is reached immediately, W_2 = 36 at j = 4
        assert seq.identity_until == 1
        assert seq.terms[0] == 1
        assert all((t + 1) % 4 == 0 for t in seq.terms[1:])

    def test_explosive_growth_stacks_many_congruences(self):
        seq = property_p_sequence(lambda j: 16**j, 12, scan_horizon=12)
        # thresholds climb one prime per index once f dwarfs every primorial power
        assert len(seq.active_from) >= 4
        for r, start in seq.active_from.items():
            from kfree.sieve import nth_prime

            q = nth_prime(r) ** 2
            for j in range(start, 13):
                assert (seq.terms[j - 1] + r) % q == 0

    def test_lower_shift_requires_candidates(self):
        from kfree.admissible import admissible_max_lower_shift

        with pytest.raises(ValueError):
            admissible_max_lower_shift(10, shifts=[])

    def test_growth_token_resolution(self):
        from kfree.constructions import resolve_growth

        assert resolve_growth("identity")(7) == 7
        assert resolve_growth("times3")(7) == 21
        assert resolve_growth("times10")(7) == 70
        with pytest.raises(ValueError):
            resolve_growth("times0")
        with pytest.raises(ValueError):
            resolve_growth("cubed")


class TestGreedySums:
    def test_first_terms(self):
        assert greedy_squarefree_sums(3).terms == (1, 5, 21)
        assert greedy_squarefree_sums(1).terms == (1,)
        assert greedy_squarefree_sums(2, include_diagonal=False).terms == (1, 2)

    def test_prefixes_pass_sum_check(self):
        result = greedy_squarefree_sums(30)
        for m in range(1, 31):
            assert check_squarefree_sums(result.terms[:m]) is None

    def test_skips_reverify(self):
        result = greedy_squarefree_sums(12)
        skipped_candidates = {s.candidate for s in result.skipped}
        # greedy minimality: everything between consecutive terms was skipped
        expected_skips = set(range(1, result.terms[-1] + 1)) - set(result.terms)
        assert skipped_candidates == expected_skips
        for skip in result.skipped:
            total = skip.candidate + skip.partner
            assert total % skip.prime**2 == 0
            assert skip.partner == skip.candidate or skip.partner in result.terms


class TestSuffWitnessSearch:
    def test_trivial_modulus_scan(self):
        report = suff_witness_search([3, 5, 9], 9, theta=0.1)
        assert report.witness == 8

    def test_empty_set(self):
        assert suff_witness_search([], 10).witness == 5

    def test_a1_prefix_at_desk_scale(self):
        prefix = named_sequence_prefix("A1", 15)
        report = suff_witness_search(prefix, prefix[-1], theta=0.1)
        assert prefix[-1] // 2 <= report.witness <= prefix[-1]
        assert report.certification.is_full
        for entry in report.trace:
            assert kfree_by_factorization(entry.shifted, 2)

    def test_structured_candidates(self):
        # ln(8103) ~ 9, so theta = 0.24 pulls p = 2 into the primorial part
        report = suff_witness_search([3, 5], 8103, theta=0.24)
        assert report.witness % 4 == 0  # avoided class 0 mod 4, so n = -0
        for entry in report.trace:
            assert kfree_by_factorization(entry.shifted, 2)

    def test_seeded_candidate_order(self):
        r1 = suff_witness_search([3, 5], 8103, theta=0.24, seed=42)
        r2 = suff_witness_search([3, 5], 8103, theta=0.24, seed=42)
        assert r1 == r2
        assert r1.witness % 4 == 0

    def test_forward_interval(self):
        report = suff_witness_search([3, 5], 1000, theta=0.1, interval="FORWARD")
        assert 1000 < report.witness <= 1000 + int(1000 ** (10 / 11)) + 1

    def test_forward_exponent_is_configurable(self):
        narrow = suff_witness_search(
            [3, 5], 1000, theta=0.1, interval="FORWARD", forward_exponent=(1, 2)
        )
        assert 1000 < narrow.witness <= 1031  # 1000 + floor(sqrt(1000))
        with pytest.raises(ValueError):
            suff_witness_search([3], 10, interval="FORWARD", forward_exponent=(3, 2))

    def test_non_admissible_raises(self):
        with pytest.raises(NotAdmissibleError):
            suff_witness_search([1, 2, 3, 4], 8103, theta=0.24)

    def test_sets_larger_than_primorial_coverage(self):
        # |A| = 5 needs occupancy checks past the single primorial prime p = 2
        report = suff_witness_search([1, 2, 3, 5, 6], 8103, theta=0.24)
        assert report
        assert (report.witness - 0) % 4 == 0  # avoided class is 0 mod 4
        with pytest.raises(NotAdmissibleError) as info:
            suff_witness_search([1, 2, 3, 4, 8], 8103, theta=0.24)
        assert info.value.prime == 2

    def test_theta_domain(self):
        with pytest.raises(ValueError):
            suff_witness_search([1], 10, theta=0.3)
        with pytest.raises(ValueError):
            suff_witness_search([7], 3)


class TestDenseAnchors:
    def test_small_step(self):
        state = DenseQState.start(2)
        state = dense_q_step(state, epsilon=0.5, x=10**4)
        anchor = state.anchors[-1]
        # independent scan: first multiple of 36 in [5000, 10^4] whose
        # translates of 1 and 2 stay squarefree
        expected = next(
            m
            for m in range(5004, 10**4 + 1, 36)
            if kfree_by_factorization(m + 1) and kfree_by_factorization(m + 2)
        )
        assert anchor == expected == 5004
        piece = state.slices[0]
        assert piece[:4] == (3, 5, 6, 7)
        for a in piece[:50]:
            assert kfree_by_factorization(a) and kfree_by_factorization(anchor + a)

    def test_spacing_requirement(self):
        state = DenseQState.start(2)
        dense_q_step(state, 0.5, 10**4)
        assert state.anchors[1] >= 2 * state.anchors[0]

    def test_primorial_explosion_is_an_argument_error(self):
        with pytest.raises(ValueError):
            dense_q_step(DenseQState.start(4), 0.5, 10**6)

    def test_large_interval_succeeds(self):
        state = DenseQState.start(4)
        dense_q_step(state, 0.5, 10**10, grid_budget=10**5, slice_budget=10**5)
        anchor = state.anchors[-1]
        assert anchor % (30030**2) == 0
        assert 5 * 10**9 <= anchor <= 10**10
        report = state.reports[0]
        assert report.grid_capped and not report.slice_materialized
        assert state.slices[0] is None
        for _, density in report.grid:
            assert 0.0 <= density <= 1.0

    def test_requires_started_state(self):
        with pytest.raises(ValueError):
            dense_q_step(DenseQState(), 0.5, 100)

    def test_accumulated_set_concatenates_slices(self):
        state = DenseQState.start(2)
        dense_q_step(state, 0.5, 10**4)
        acc = state.accumulated_set()
        assert acc == state.slices[0]
        assert all(2 < a <= state.anchors[-1] for a in acc)


class TestSampler:
    def test_probability_formula(self):
        assert abs(membership_probability(3, 5) - 0.172203) < 1e-5
        assert membership_probability(3, 100) == 1.0

    def test_domain_restriction(self):
        sample = sample_counterexample(5, 2000, seed=3)
        assert all(n >= 3 for n in sample)
        assert all(kfree_by_factorization(n) for n in sample)

    def test_determinism_and_seed_sensitivity(self):
        assert sample_counterexample(5, 5000, seed=11) == sample_counterexample(
            5, 5000, seed=11
        )
        assert sample_counterexample(5, 5000, seed=11) != sample_counterexample(
            5, 5000, seed=12
        )

    def test_clamped_probability_forces_membership(self):
        for seed in range(10):
            assert 3 in sample_counterexample(100, 10, seed=seed)

    def test_mean_tracks_expectation_roughly(self):
        x = 20_000
        window = kfree_window(3, x - 2)
        expected = sum(membership_probability(n, 5) for n in window.members())
        sizes = [len(sample_counterexample(5, x, seed=s)) for s in range(40)]
        mean = sum(sizes) / len(sizes)
        assert abs(mean - expected) / expected < 0.15


class TestOccupancyProbe:
    def test_squarefree_up_to_100_fills_everything(self):
        sf = kfree_window(1, 100).members()
        probe = occupancy_probe(sf, 100)
        assert set(probe) == {2, 3}
        assert probe[2] == () and probe[3] == ()

    def test_singleton(self):
        probe = occupancy_probe([3], 100)
        assert probe[2] == (1, 2)
        assert probe[3] == (1, 2, 4, 5, 6, 7, 8)

    def test_empty(self):
        probe = occupancy_probe([], 100)
        assert probe[2] == (1, 2, 3)
        assert len(probe[3]) == 8


class TestOverPBasePoints:
    def test_p3_base_point(self):
        assert overp_base_point(3) == 252

    def test_p3_independent_condition_scan(self):
        n = overp_base_point(3)
        assert n % 36 == 0
        for q in trial_division_primes(60):
            if q <= 3:
                continue
            reach = int(q / math.log(math.log(q)) ** 2)
            if q * q > n + reach:
                break
            for a in range(1, reach + 1):
                assert (n + a) % (q * q) != 0, (q, a)

    def test_budget_of_one_fails(self):
        with pytest.raises(BudgetError):
            overp_base_point(3, max_candidates=1)

    def test_p5_within_budget(self):
        n = overp_base_point(5, max_candidates=10**6)
        assert n % 900 == 0
        for q in trial_division_primes(80):
            if q <= 5:
                continue
            reach = int(q / math.log(math.log(q)) ** 2)
            if q * q > n + reach:
                break
            for a in range(1, reach + 1):
                assert (n + a) % (q * q) != 0, (q, a)

    def test_min_value_forces_larger_points(self):
        first = overp_base_point(3)
        second = overp_base_point(3, min_value=first)
        assert second > first and second % 36 == 0


class TestOverPSequence:
    def test_depth_zero(self):
        result = overp_sequence(3, 0, induced_cap=30)
        assert result.anchors == ()
        assert result.induced == tuple(kfree_window(1, 30).members())
        assert result.certification.is_full

    def test_depth_one_threshold_and_anchor(self):
        result = overp_sequence(3, 1, induced_cap=50)
        assert result.thresholds == (46,)
        modulus = 1
        for p in build_prime_table(46).primes:
            modulus *= p * p
        assert result.anchors[0] % modulus == 0
        assert result.certification.level == "PI_CERTIFIED"
        # induced members a < 4 survive: translates checked mod every small p^2
        assert 1 in result.induced and 4 not in result.induced

    def test_depth_three_refused(self):
        with pytest.raises(BudgetError):
            overp_sequence(3, 3)
