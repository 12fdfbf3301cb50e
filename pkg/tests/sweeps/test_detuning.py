import pytest
import numpy as np
from unittest.mock import patch

from fato.sweeps import SweepRecord, SweepSpec, run_sweep
from fato.sweeps.detuning import detune_amp, detune_omega0


@pytest.mark.sweeps
class TestDetuningSweeps:
    """Test cases for the detune_omega0 and detune_amp sweep kinds"""

    def test_class_attributes(self):
        """Test each kind perturbs its own parameter"""
        assert detune_omega0().kind == "detune_omega0"
        assert detune_omega0().perturbs == "eps_omega0"
        assert detune_amp().kind == "detune_amp"
        assert detune_amp().perturbs == "eps_amp"

    @patch('fato.sweeps.detuning.robustness_point')
    def test_omega0_error_forwarded(self, mock_point, weak_params):
        """Test x is passed as the fractional drift error"""
        mock_point.return_value = SweepRecord(x=0.05, fidelity_sim=0.97)
        spec = SweepSpec("detune_omega0", "X", [0.05], base=weak_params, fixed={"order": 5, "rwa": False})
        record = detune_omega0().execute(spec, 0.05)

        mock_point.assert_called_once_with("X", weak_params, 5, with_rwa=False, eps_omega0=0.05, eps_amp=0.0)
        assert record.fidelity_sim == 0.97

    @patch('fato.sweeps.detuning.robustness_point')
    def test_amp_error_forwarded(self, mock_point, weak_params):
        """Test x is passed as the fractional amplitude error and reported as x"""
        mock_point.return_value = SweepRecord(x=0.0, fidelity_sim=0.98)
        spec = SweepSpec("detune_amp", "X", [-0.1], base=weak_params, fixed={"order": 5})
        record = detune_amp().execute(spec, -0.1)

        mock_point.assert_called_once_with("X", weak_params, 5, with_rwa=True, eps_omega0=0.0, eps_amp=-0.1)
        assert record.x == -0.1

    def test_error_out_of_range(self, weak_params):
        """Test a 30 percent error fails that point only"""
        spec = SweepSpec("detune_amp", "X", [0.3], base=weak_params, fixed={"order": 5, "rwa": False})
        records = run_sweep(spec)
        assert records[0].error.startswith("PreconditionError")
        assert np.isnan(records[0].fidelity_sim)
