import math

import numpy as np
import pytest
from conftest import make_valid_case

from rosenthal import (
    DomainError,
    MomentProfile,
    PQSchedule,
    Pin94Config,
    VarianceEnvelope,
    best_bound,
    closed_form_2_3,
    closed_form_3_4,
    closed_form_min,
    corollary_bound,
    hilbert_2_4,
    pin94_bound,
    t3_bound,
    theorem_bound,
)


def case(t, a_by_s, b):
    n = len(b)
    return MomentProfile(n, t, a_by_s), VarianceEnvelope(b)


class TestTheoremBound:
    def test_empty_martingale(self):
        prof = MomentProfile(0, 3.0, {3.0: [], 2.0: []})
        env = VarianceEnvelope([])
        assert theorem_bound(prof, env, 1.0).value == 0.0

    def test_sharp_single_step(self):
        prof, env = case(3.0, {3.0: [1.0], 2.0: [1.0]}, [1.0])
        rep = theorem_bound(prof, env, 1.0)
        assert rep.value == 1.0
        assert rep.method == "theorem"

    def test_two_steps_hand_value(self):
        prof, env = case(3.0, {3.0: [1, 1], 2.0: [1, 1]}, [1, 1])
        # layer 0: 1 * A_2(3) = 2; top layer: 3 * (sqrt(A_0) + sqrt(A_1)) = 3
        assert theorem_bound(prof, env, 1.0).value == pytest.approx(5.0, rel=1e-14)

    def test_small_t_gated(self):
        prof = MomentProfile(1, 1.5, {2.0: [1.0]})
        env = VarianceEnvelope([1.0])
        with pytest.raises(DomainError):
            theorem_bound(prof, env, 1.0)
        rep = theorem_bound(prof, env, 1.0, allow_small_t=True)
        # m = 0 leaves only (A_n(2))^(t/2)
        assert rep.value == pytest.approx(1.0)

    def test_boundary_t2_is_sharp_for_tight_envelope(self):
        # at t = 2 with default weights the bound is (A_n(2) + B_n^2) / 2,
        # which equals E||S_n||^2 exactly when the envelope is tight
        prof, env = case(2.0, {2.0: [1.0, 1.0]}, [1.0, 1.0])
        assert theorem_bound(prof, env, 1.0).value == pytest.approx(2.0, rel=1e-14)

    def test_even_t_zero_second_moment_convention(self):
        # t = 4 with vanishing A_k(2): the top layer prefix is 0^0 = 1.
        prof, env = case(4.0, {4.0: [0.0, 0.0], 2.0: [0.0, 0.0]}, [1.0, 1.0])
        rep = theorem_bound(prof, env, 1.0)
        # top term: c~_2 * e_2(w) = 6 * 1 = 6; layers vanish except the
        # j=1 layer, which also uses A(2) prefixes equal to zero.
        assert rep.value == pytest.approx(6.0, rel=1e-14)

    def test_length_mismatch(self):
        from rosenthal import ValidationError

        prof = MomentProfile(1, 3.0, {3.0: [1.0], 2.0: [1.0]})
        with pytest.raises(ValidationError):
            theorem_bound(prof, VarianceEnvelope([1.0, 1.0]), 1.0)


class TestCorollaryBound:
    def test_t3_formula(self):
        prof, env = case(3.0, {3.0: [1.0], 2.0: [1.0]}, [1.0])
        rep = corollary_bound(prof, env, 1.0)
        assert rep.value == pytest.approx(3.0, rel=1e-14)
        assert rep.constants["C_A"] == pytest.approx(1.0)
        assert rep.constants["C_B"] == pytest.approx(2.0)

    def test_weaker_than_theorem_on_sharp_case(self):
        prof, env = case(3.0, {3.0: [1.0], 2.0: [1.0]}, [1.0])
        assert corollary_bound(prof, env, 1.0).value >= theorem_bound(prof, env, 1.0).value

    def test_zero_a_term(self):
        prof, env = case(2.5, {2.5: [0.0, 0.0], 2.0: [0.0, 0.0]}, [1.0, 1.0])
        rep = corollary_bound(prof, env, 1.0)
        B = env.total()
        assert rep.value == pytest.approx(rep.constants["C_B"] * B**2.5, rel=1e-14)

    def test_t_at_most_two_rejected(self):
        prof, env = case(2.0, {2.0: [1.0]}, [1.0])
        with pytest.raises(DomainError):
            corollary_bound(prof, env, 1.0)


class TestClosedForms:
    def test_boundary_t3_all_agree(self):
        v23 = closed_form_2_3(3.0, 1.0, 1.0, 1.0).value
        assert v23 == pytest.approx(3.0, rel=1e-15)
        for alpha in (0.1, 0.5, 0.9):
            assert closed_form_3_4(3.0, 1.0, 1.0, 1.0, alpha).value == pytest.approx(
                3.0, rel=1e-13
            )
        assert t3_bound(1.0, 1.0, 1.0).value == pytest.approx(3.0, rel=1e-15)

    def test_unit_a_coefficient(self):
        assert closed_form_2_3(2.5, 1.0, 1.0, 0.0).value == pytest.approx(1.0, rel=1e-15)

    def test_alpha_half_at_four(self):
        assert closed_form_3_4(4.0, 1.0, 0.0, 1.0, 0.5).value == pytest.approx(6.0, rel=1e-14)
        assert hilbert_2_4(4.0, 0.0, 1.0).value == pytest.approx(6.0, rel=1e-14)

    def test_min_form_collapses_below_three(self):
        for t in (2.1, 2.5, 3.0):
            a, b = 0.7, 1.3
            assert closed_form_min(t, 1.0, a, b).value == pytest.approx(
                closed_form_2_3(t, 1.0, a, b).value, rel=1e-14
            )

    def test_min_form_at_four(self):
        expect = (1.0 + math.sqrt(3.0)) ** 2
        assert closed_form_min(4.0, 1.0, 1.0, 1.0).value == pytest.approx(expect, rel=1e-14)

    def test_min_form_dominated_by_every_alpha(self):
        for t in (3.2, 3.5, 3.9, 4.0):
            for alpha in np.linspace(0.01, 0.99, 99):
                assert (
                    closed_form_min(t, 1.0, 0.8, 1.1).value
                    <= closed_form_3_4(t, 1.0, 0.8, 1.1, float(alpha)).value * (1 + 1e-12)
                )

    def test_min_form_equals_alpha_minimum(self):
        alphas = np.linspace(1e-4, 1 - 1e-4, 4001)
        for t in (3.3, 3.7, 4.0):
            vals = [closed_form_3_4(t, 1.0, 0.8, 1.1, float(a)).value for a in alphas]
            assert closed_form_min(t, 1.0, 0.8, 1.1).value == pytest.approx(
                min(vals), rel=1e-6
            )

    def test_hilbert_form(self):
        assert hilbert_2_4(3.0, 1.0, 1.0).value == pytest.approx(3.0, rel=1e-15)
        assert hilbert_2_4(2.2, 2.0, 0.0).value == pytest.approx(2.0, rel=1e-15)

    def test_range_validation(self):
        with pytest.raises(DomainError):
            closed_form_2_3(3.5, 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            closed_form_3_4(2.9, 1.0, 1.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            closed_form_3_4(3.5, 1.0, 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            closed_form_min(4.2, 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            hilbert_2_4(2.0, 1.0, 1.0)


class TestEquivalences:
    def test_corollary_matches_2_3_form(self):
        rng = np.random.default_rng(5)
        for t in np.linspace(2.02, 3.0, 50):
            t = float(t)
            a_t = rng.uniform(0, 2, size=3)
            a_2 = rng.uniform(0, 2, size=3)
            prof = MomentProfile(3, t, {t: a_t, 2.0: a_2})
            env = VarianceEnvelope(rng.uniform(0.2, 2, size=3))
            rep = corollary_bound(prof, env, 1.3, lambdas=None)
            ref = closed_form_2_3(t, 1.3, prof.total(t), env.total())
            assert rep.value == pytest.approx(ref.value, rel=1e-12)

    def test_corollary_matches_3_4_form(self):
        rng = np.random.default_rng(6)
        for t in np.linspace(3.0, 4.0, 50, endpoint=False):
            t = float(t)
            alpha = float(rng.uniform(0.05, 0.95))
            prof = MomentProfile(
                2, t, {t: rng.uniform(0, 2, size=2), 2.0: rng.uniform(0, 2, size=2)}
            )
            env = VarianceEnvelope(rng.uniform(0.2, 2, size=2))
            rep = corollary_bound(
                prof, env, 1.0, PQSchedule.beta_family(alpha), lambdas=None
            )
            ref = closed_form_3_4(t, 1.0, prof.total(t), env.total(), alpha)
            assert rep.value == pytest.approx(ref.value, rel=1e-12)


class TestPin94:
    def test_hand_value(self):
        cfg = Pin94Config(K=1.0, c=1.0)
        rep = pin94_bound(2.0, 1.0, 0.0, 1.0, cfg)
        assert rep.value == pytest.approx(math.exp(4.0), rel=1e-13)

    def test_large_constant_dwarfs_aggregated_bound(self):
        rep = pin94_bound(3.0, 1.0, 1.0, 1.0, Pin94Config(K=120.0))
        assert rep.value > 100 * 3.0  # aggregated bound gives exactly 3 here
        assert 1.0 <= rep.parameters["c"] <= 3.0

    def test_zero_inputs(self):
        assert pin94_bound(3.0, 1.0, 0.0, 0.0, Pin94Config(K=120.0, c=2.0)).value == 0.0

    def test_c_range(self):
        with pytest.raises(DomainError):
            pin94_bound(3.0, 1.0, 1.0, 1.0, Pin94Config(c=5.0))
        with pytest.raises(DomainError):
            pin94_bound(1.5, 1.0, 1.0, 1.0)

    def test_minimization_beats_endpoints(self):
        t, D, A, B = 4.0, 1.0, 3.0, 0.5
        auto = pin94_bound(t, D, A, B).value
        for c in (1.0, 2.0, t):
            assert auto <= pin94_bound(t, D, A, B, Pin94Config(c=c)).value * (1 + 1e-12)


class TestBestBound:
    def test_sharp_case_prefers_theorem(self):
        prof, env = case(3.0, {3.0: [1.0], 2.0: [1.0]}, [1.0])
        rep = best_bound(prof, env, 1.0)
        assert rep.method == "theorem"
        assert rep.value == 1.0

    def test_never_above_t3_form(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            prof, env = make_valid_case(rng, t=3.0, n=int(rng.integers(1, 8)))
            rep = best_bound(prof, env, 1.0)
            ref = prof.total(3.0) + 2.0 * env.total() ** 3
            assert rep.value <= ref * (1 + 1e-12)

    def test_vanishing_envelope_leaves_a_term(self):
        t = 2.5
        prof = MomentProfile(2, t, {t: [1.0, 1.0], 2.0: [1.0, 1.0]})
        env = VarianceEnvelope([1e-9, 1e-9])
        rep = best_bound(prof, env, 1.0)
        # coefficient of A_n(t) at D = 1 is exactly 1
        assert rep.value / prof.total(t) == pytest.approx(1.0, abs=1e-6)

    def test_tie_break_prefers_closed_form(self):
        # An inconsistent profile (huge second moments) makes the layered
        # bound lose; the aggregated value then ties the (2,3] closed form
        # exactly and the tie must resolve to the closed form.
        t = 2.5
        prof = MomentProfile(2, t, {t: [0.0, 0.0], 2.0: [100.0, 100.0]})
        env = VarianceEnvelope([1.0, 1.0])
        rep = best_bound(prof, env, 1.0)
        assert rep.method == "closed_2_3"

    def test_beta_scan_helps_above_three(self):
        rng = np.random.default_rng(8)
        for _ in range(5):
            prof, env = make_valid_case(rng, t=5.0, n=6)
            best = best_bound(prof, env, 1.0)
            default = corollary_bound(prof, env, 1.0)
            assert best.value <= default.value * (1 + 1e-12)

    def test_includes_pin94_only_on_request(self):
        prof, env = case(3.0, {3.0: [1.0], 2.0: [1.0]}, [1.0])
        rep = best_bound(prof, env, 1.0, pin94=Pin94Config(K=1e-9))
        assert rep.method == "pin94"  # absurdly small K wins on purpose

    def test_requires_t_above_two(self):
        prof, env = case(2.0, {2.0: [1.0]}, [1.0])
        with pytest.raises(DomainError):
            best_bound(prof, env, 1.0)


class TestStructuralProperties:
    def test_dominance_on_valid_inputs(self):
        rng = np.random.default_rng(9)
        for _ in range(60):
            prof, env = make_valid_case(rng, n=int(rng.integers(1, 12)))
            th = theorem_bound(prof, env, 1.0).value
            for lambdas in ("optimize", None):
                co = corollary_bound(prof, env, 1.0, lambdas=lambdas).value
                assert th <= co + 1e-12 * (1.0 + co)

    def test_scaling_covariance(self):
        rng = np.random.default_rng(10)
        lam = 2.0
        for _ in range(10):
            prof, env = make_valid_case(rng, n=5)
            t = prof.t
            scaled_moments = {
                s: prof.moment_array(s) * lam**s for s in prof.exponents
            }
            prof2 = MomentProfile(prof.n, t, scaled_moments)
            env2 = VarianceEnvelope(env.b * lam)
            for fn in (theorem_bound, corollary_bound, best_bound):
                v1 = fn(prof, env, 1.0).value
                v2 = fn(prof2, env2, 1.0).value
                assert v2 == pytest.approx(lam**t * v1, rel=1e-12)

    def test_report_ratio(self):
        prof, env = case(3.0, {3.0: [2.0], 2.0: [1.0]}, [2.0])
        rep = theorem_bound(prof, env, 1.0)
        assert rep.ratio_r == pytest.approx(2.0 / 8.0)
