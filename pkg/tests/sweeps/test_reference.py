import pytest
import numpy as np
from unittest.mock import Mock, patch

from fato.bangbang import params_from_theta
from fato.dynamics import propagate_waveform
from fato.exceptions import PreconditionError, StrongRegime
from fato.fourier import series_of
from fato.sweeps.reference import rwa_config, rwa_infidelity, robustness_point


@pytest.mark.sweeps
class TestRwaInfidelity:
    """Test cases for the on-resonance reference pulse"""

    def test_config(self):
        """Test 256 fourth-order steps per carrier period"""
        config = rwa_config(2.0)
        assert config.scheme == "magnus4"
        assert config.step_hint == pytest.approx(np.pi / 256)

    def test_strong_regime(self, strong_params):
        """Test the reference is refused above pi/4"""
        with pytest.raises(StrongRegime):
            rwa_infidelity("X", strong_params)

    def test_error_bound(self, weak_params):
        """Test fractional errors are limited to 20 percent"""
        with pytest.raises(PreconditionError):
            rwa_infidelity("X", weak_params, eps_amp=0.25)

    def test_counter_rotating_terms(self):
        """Test stronger driving costs more on-resonance fidelity"""
        weak = rwa_infidelity("X", params_from_theta(np.pi / 16))
        strong = rwa_infidelity("X", params_from_theta(np.pi / 4))
        assert 0.0 <= weak < strong < 1.0

    @patch('fato.sweeps.reference.propagate_drive')
    def test_drive_designed_at_nominal(self, mock_propagate, weak_params):
        """Test errors change the physics but not the pulse length"""
        mock_propagate.return_value = Mock(final_unitary=np.eye(2, dtype=complex))
        rwa_infidelity("Y", weak_params, eps_omega0=0.1)

        args, kwargs = mock_propagate.call_args
        drive, omega0, omega_bar, total_time = args
        assert omega0 == pytest.approx(1.1)
        assert omega_bar == pytest.approx(weak_params.omega_bar)
        assert total_time == pytest.approx(2 * np.pi / weak_params.omega_bar)
        assert drive(np.array([0.0]))[0] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.sweeps
class TestRobustnessPoint:
    """Test cases for FATO pulses played on perturbed physics"""

    def test_zero_error_is_nominal(self, weak_params, weak_x_sequence):
        """Test eps = 0 reproduces the nominal simulation exactly"""
        record = robustness_point("X", weak_params, 3)
        nominal = propagate_waveform(series_of(weak_x_sequence, 3), weak_params,
                                     target=weak_x_sequence.target)
        assert record.fidelity_sim == nominal.fidelity
        assert record.x == 0.0
        assert record.order_K == 3
        assert np.isnan(record.fidelity_rwa)

    @patch('fato.sweeps.reference.cached_rwa_infidelity', return_value=0.01)
    @patch('fato.sweeps.reference.propagate_waveform')
    def test_with_rwa(self, mock_propagate, mock_rwa, weak_params):
        """Test the on-resonance column uses the same errors"""
        mock_propagate.return_value = Mock(fidelity=0.95)
        record = robustness_point("X", weak_params, 3, eps_omega0=0.05, with_rwa=True)

        mock_rwa.assert_called_once_with("X", weak_params, 0.05, 0.0)
        assert record.fidelity_rwa == pytest.approx(0.99)
        assert record.fidelity_sim == 0.95
        physical = mock_propagate.call_args[0][1]
        assert physical.omega0 == pytest.approx(1.05)

    @pytest.mark.slow
    @pytest.mark.parametrize("eps", [0.01, 0.02])
    @pytest.mark.parametrize("theta,gate", [(np.pi / 10, "X"), (np.pi / 4, "Y")])
    def test_more_robust_than_on_resonance(self, theta, gate, eps):
        """Test a drift error costs the FATO pulse less than the on-resonance pulse"""
        record = robustness_point(gate, params_from_theta(theta), 57, eps_omega0=eps, with_rwa=True)
        assert 1.0 - record.fidelity_sim < 1.0 - record.fidelity_rwa

    @pytest.mark.slow
    def test_continuous_in_drift_error(self, weak_params):
        """Test neighbouring points of a 41-point drift-error scan differ by less than tenfold"""
        grid = np.linspace(0.005, 0.1, 41)
        infidelity = np.array([1.0 - robustness_point("X", weak_params, 57, eps_omega0=eps).fidelity_sim
                               for eps in grid])
        assert np.all(infidelity > 0)
        ratios = infidelity[1:] / infidelity[:-1]
        assert np.all((ratios < 10.0) & (ratios > 0.1))
