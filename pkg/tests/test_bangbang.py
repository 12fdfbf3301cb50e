import pytest
import numpy as np

from fato.bangbang import (BangSequence, derive_params, gate_target, gibbs_factor, params_from_theta,
                           rwa_reference, search_to_sequence, sine_integral, strong_pi_sequence,
                           strong_x_candidates, synthesize_pi, time_optimal_time, weak_pi_sequence)
from fato.exceptions import (NonPositiveInput, NonUnitary, ParityMismatch, PreconditionError, StrongRegime,
                             ThetaMismatch, ValidationError, WeakRegime)
from fato.qmat import exp_su2, identity, phase_aligned_distance


@pytest.mark.synthesis
class TestDriveParams:
    """Test cases for the drive parameter derivation"""

    def test_equal_strengths(self):
        """Test omega0 = omega_bar gives theta = pi/4 and omega = sqrt(2)"""
        params = derive_params(1.0, 1.0)
        assert params.theta == pytest.approx(np.pi / 4)
        assert params.omega == pytest.approx(np.sqrt(2))

    def test_weak_example(self):
        """Test omega_bar = tan(pi/10)"""
        params = derive_params(1.0, np.tan(np.pi / 10))
        assert params.theta == pytest.approx(np.pi / 10)
        assert params.omega == pytest.approx(1.05146, abs=1e-5)

    def test_strong_example(self):
        """Test omega_bar = tan(pi/3) gives omega = 2"""
        params = derive_params(1.0, np.tan(np.pi / 3))
        assert params.theta == pytest.approx(np.pi / 3)
        assert params.omega == pytest.approx(2.0)

    @pytest.mark.parametrize("omega0,omega_bar", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0), (np.nan, 1.0)])
    def test_rejects_non_positive(self, omega0, omega_bar):
        """Test non-positive or non-finite inputs are rejected"""
        with pytest.raises(NonPositiveInput):
            derive_params(omega0, omega_bar)

    def test_theta_out_of_range(self):
        """Test params_from_theta rejects theta outside (0, pi/2)"""
        with pytest.raises(ValidationError):
            params_from_theta(np.pi / 2)

    def test_regime(self, weak_params, boundary_params, strong_params):
        """Test the regime split at pi/4, inclusive on the weak side"""
        assert weak_params.is_weak
        assert boundary_params.is_weak
        assert not strong_params.is_weak

    def test_scaled(self, weak_params):
        """Test fractional errors scale omega0 and omega_bar"""
        scaled = weak_params.scaled(eps_omega0=0.01, eps_amp=-0.02)
        assert scaled.omega0 == pytest.approx(1.01)
        assert scaled.omega_bar == pytest.approx(weak_params.omega_bar * 0.98)


@pytest.mark.synthesis
class TestBangSequence:
    """Test cases for the BangSequence value"""

    def test_total_time(self, weak_params):
        """Test total time is the sum of durations"""
        seq = BangSequence([(1, 0.5), (0, 0.25), (-1, 1.0)], weak_params)
        assert seq.total_time == pytest.approx(1.75, abs=1e-12)
        np.testing.assert_allclose(seq.switch_times, [0.0, 0.5, 0.75, 1.75])

    def test_rejects_equal_neighbours(self, weak_params):
        """Test consecutive bangs must differ in level"""
        with pytest.raises(ValidationError):
            BangSequence([(1, 0.5), (1, 0.5)], weak_params)

    def test_rejects_zero_duration(self, weak_params):
        """Test zero-length bangs are disallowed"""
        with pytest.raises(ValidationError):
            BangSequence([(1, 0.0)], weak_params)

    def test_rejects_bad_level(self, weak_params):
        """Test levels are limited to +1, 0, -1"""
        with pytest.raises(ValidationError):
            BangSequence([(2, 1.0)], weak_params)

    def test_time_optimal_constraints(self, weak_params):
        """Test a time-optimal flag with unequal interior bangs is rejected"""
        short = np.pi / weak_params.omega
        with pytest.raises(PreconditionError):
            BangSequence([(1, 1.0), (-1, short), (1, 1.2 * short), (-1, 1.0)], weak_params, time_optimal=True)

    def test_empty_sequence(self, weak_params):
        """Test an empty sequence realises the identity"""
        seq = BangSequence((), weak_params)
        assert seq.total_time == 0.0
        np.testing.assert_array_equal(seq.realized_unitary(), identity(2))

    def test_to_dict(self, weak_x_sequence):
        """Test the serialisable form"""
        d = weak_x_sequence.to_dict()
        assert len(d["bangs"]) == 5
        assert d["metadata"]["regime"] == "weak"


@pytest.mark.synthesis
class TestWeakSynthesis:
    """Test cases for the weak-driving construction"""

    def test_five_bang_x(self, weak_x_sequence):
        """Test theta = pi/10 gives five bangs of pi cos(pi/10)"""
        assert weak_x_sequence.levels == [1, -1, 1, -1, 1]
        np.testing.assert_allclose(weak_x_sequence.durations, np.pi * np.cos(np.pi / 10), rtol=1e-12)
        assert weak_x_sequence.durations[0] == pytest.approx(2.98770, abs=1e-5)
        assert weak_x_sequence.total_time == pytest.approx(14.93849, abs=1e-5)
        assert weak_x_sequence.time_optimal

    def test_total_time_formula(self, weak_x_sequence):
        """Test T = pi^2 cos(theta) / (2 theta omega0)"""
        theta = np.pi / 10
        assert weak_x_sequence.total_time == pytest.approx(np.pi ** 2 * np.cos(theta) / (2 * theta), rel=1e-12)

    def test_two_bang_y(self, weak_y_sequence):
        """Test theta = pi/4 gives two bangs of pi/sqrt(2) realising sigma_y"""
        np.testing.assert_allclose(weak_y_sequence.durations, np.pi / np.sqrt(2), rtol=1e-12)
        assert phase_aligned_distance(gate_target("Y"), weak_y_sequence.realized_unitary()) < 1e-9

    @pytest.mark.parametrize("n", range(2, 12))
    def test_reaches_target(self, n):
        """Test every n = 2..11 reaches its Pauli with the parity-selected gate"""
        gate = "X" if n % 2 else "Y"
        seq = weak_pi_sequence(gate, n, params_from_theta(np.pi / (2 * n)))
        assert phase_aligned_distance(gate_target(gate), seq.realized_unitary()) < 1e-9

    def test_parity_mismatch(self):
        """Test X with even n is rejected"""
        with pytest.raises(ParityMismatch):
            weak_pi_sequence("X", 2, params_from_theta(np.pi / 4))

    def test_theta_mismatch(self, weak_params):
        """Test theta must equal pi/(2n)"""
        with pytest.raises(ThetaMismatch):
            weak_pi_sequence("X", 3, weak_params)

    def test_n_too_small(self, weak_params):
        """Test n = 1 is rejected"""
        with pytest.raises(PreconditionError):
            weak_pi_sequence("X", 1, weak_params)


@pytest.mark.synthesis
class TestStrongSynthesis:
    """Test cases for the ultrastrong three-bang construction"""

    def test_y_times(self, strong_y_sequence):
        """Test the Y bang times at theta = pi/3"""
        t1, t2, t3 = strong_y_sequence.durations
        assert t1 == pytest.approx(0.95532, abs=1e-5)
        assert t3 == pytest.approx(t1, abs=1e-14)
        assert t2 == pytest.approx(1.91063, abs=1e-5)
        assert strong_y_sequence.levels[1] == 0

    def test_y_pattern(self, strong_y_sequence):
        """Test the outer Y bangs have opposite signs"""
        assert strong_y_sequence.metadata["y_pattern"] == "+0-"
        assert strong_y_sequence.levels == [1, 0, -1]

    def test_x_times(self, strong_x_sequence):
        """Test the outer X bangs at theta = pi/3"""
        t1, t2, t3 = strong_x_sequence.durations
        assert t1 == pytest.approx(0.61548, abs=1e-5)
        assert t3 == pytest.approx(t1, abs=1e-14)
        assert t2 == pytest.approx(2.52611, abs=1e-5)
        assert strong_x_sequence.levels == [1, -1, 1]

    @pytest.mark.parametrize("fraction", [0.26, 0.30, 1 / 3, 0.40, 0.45])
    def test_reaches_targets(self, fraction):
        """Test both gates across the strong regime, with one X parsing throughout"""
        params = params_from_theta(fraction * np.pi)
        x_seq = strong_pi_sequence("X", params)
        y_seq = strong_pi_sequence("Y", params)
        assert phase_aligned_distance(gate_target("X"), x_seq.realized_unitary()) < 1e-9
        assert phase_aligned_distance(gate_target("Y"), y_seq.realized_unitary()) < 1e-9
        assert x_seq.metadata["t2x_parsing"] == "scaled"

    def test_both_x_candidates_listed(self, strong_params):
        """Test both readings of the middle bang are offered"""
        assert set(strong_x_candidates(strong_params)) == {"scaled", "offset"}

    def test_weak_regime_rejected(self):
        """Test theta = pi/5 is refused"""
        with pytest.raises(WeakRegime):
            strong_pi_sequence("X", params_from_theta(np.pi / 5))


@pytest.mark.synthesis
class TestSynthesizePi:
    """Test cases for construction routing"""

    def test_routes_weak(self, weak_params):
        """Test theta = pi/10 goes to the analytic weak solution"""
        seq = synthesize_pi("x", weak_params)
        assert seq.metadata["regime"] == "weak"
        assert len(seq) == 5

    def test_routes_strong(self, strong_params):
        """Test theta = pi/3 goes to the three-bang solution"""
        seq = synthesize_pi("Y", strong_params)
        assert seq.metadata["regime"] == "strong"

    def test_time_optimal_time(self, weak_params):
        """Test the analytic gate time"""
        assert time_optimal_time("X", weak_params) == pytest.approx(5 * np.pi / weak_params.omega)

    def test_unknown_gate(self, weak_params):
        """Test only X and Y are supported"""
        with pytest.raises(ValidationError):
            synthesize_pi("Z", weak_params)


@pytest.mark.synthesis
class TestSearch:
    """Test cases for the numerical multi-start search"""

    def test_identity(self, weak_params):
        """Test the identity needs no bangs"""
        seq = search_to_sequence(identity(2), weak_params)
        assert len(seq) == 0
        assert seq.total_time == 0.0

    def test_z_rotation(self, weak_params):
        """Test a quarter turn about z is reached exactly, no later than a single drift bang"""
        target = exp_su2(0.0, 0.0, 1.0, np.pi / 4)
        seq = search_to_sequence(target, weak_params, n_max=3)
        assert seq.total_time <= np.pi / 2 + 1e-9
        assert phase_aligned_distance(target, seq.realized_unitary()) < 1e-9
        assert seq.metadata["gate_distance"] < 1e-9

    def test_rejects_non_unitary(self, weak_params):
        """Test the target must be unitary"""
        with pytest.raises(NonUnitary):
            search_to_sequence(2 * identity(2), weak_params)

    @pytest.mark.slow
    def test_recovers_weak_solution(self, weak_params):
        """Test the search finds the analytic sigma_x time at theta = pi/10 and hits the gate exactly"""
        analytic = weak_pi_sequence("X", 5, weak_params).total_time
        seq = search_to_sequence(gate_target("X"), weak_params)
        assert seq.total_time >= analytic - 1e-6
        assert seq.total_time == pytest.approx(analytic, rel=1e-6)
        assert phase_aligned_distance(gate_target("X"), seq.realized_unitary()) < 1e-9

    @pytest.mark.slow
    def test_never_beats_analytic_y(self, boundary_params):
        """Test the sigma_y search at theta = pi/4 is exact and not shorter than two bangs"""
        analytic = weak_pi_sequence("Y", 2, boundary_params).total_time
        seq = search_to_sequence(gate_target("Y"), boundary_params)
        assert seq.total_time >= analytic - 1e-6
        assert phase_aligned_distance(gate_target("Y"), seq.realized_unitary()) < 1e-9


@pytest.mark.synthesis
class TestGateTime:
    """Test cases for the sine integral and the on-resonance comparison"""

    def test_sine_integral(self):
        """Test Si(pi)"""
        assert sine_integral(np.pi) == pytest.approx(1.851937, abs=1e-6)

    def test_gibbs_factor(self):
        """Test 2 Si(pi)/pi"""
        assert gibbs_factor() == pytest.approx(1.17898, abs=1e-5)

    def test_ratio_at_boundary(self, boundary_params):
        """Test the ratio at theta = pi/4"""
        t_rwa, ratio = rwa_reference(boundary_params)
        assert ratio == pytest.approx(0.83368, abs=5e-4)
        assert t_rwa == pytest.approx(2 * np.pi / boundary_params.omega_bar)

    def test_ratio_small_theta(self):
        """Test the ratio tends to Si(pi)/2"""
        _, ratio = rwa_reference(params_from_theta(1e-4))
        assert ratio == pytest.approx(0.92597, abs=1e-5)

    def test_ratio_below_one(self):
        """Test FATO is faster on the whole weak regime"""
        for theta in np.linspace(1e-3, np.pi / 4, 20):
            assert rwa_reference(params_from_theta(theta))[1] < 1

    def test_strong_rejected(self, strong_params):
        """Test the comparison is undefined above pi/4"""
        with pytest.raises(StrongRegime):
            rwa_reference(strong_params)
