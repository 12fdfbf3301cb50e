import pytest
import numpy as np
from unittest.mock import Mock, patch

from fato.exceptions import PreconditionError, ValidationError
from fato.sweeps import SweepSpec
from fato.sweeps.bandwidth import bandwidth


@pytest.mark.sweeps
class TestBandwidthSweep:
    """Test cases for the bandwidth sweep kind"""

    def test_class_attributes(self):
        """Test class attributes are correctly set"""
        module = bandwidth()
        assert module.kind == "bandwidth"
        assert module.gates == ("X", "Y")

    @patch('fato.sweeps.bandwidth.propagate_waveform')
    def test_order_from_omega0(self, mock_propagate, weak_params):
        """Test x = 2 in units of omega0 keeps four harmonics of the pi/10 sequence"""
        mock_propagate.return_value = Mock(fidelity=0.9)
        spec = SweepSpec("bandwidth", "X", [2.0], base=weak_params, fixed={"rwa": False})
        record = bandwidth().execute(spec, 2.0)

        assert record.order_K == 4
        assert record.x == 2.0
        assert record.fidelity_sim == 0.9

    @patch('fato.sweeps.bandwidth.propagate_waveform')
    def test_order_from_omega_bar(self, mock_propagate, weak_params):
        """Test the omega_bar normalisation rescales the grid"""
        mock_propagate.return_value = Mock(fidelity=0.9)
        x = 2.0 / weak_params.omega_bar
        spec = SweepSpec("bandwidth", "X", [x], base=weak_params,
                         fixed={"rwa": False, "normalization": "omega_bar"})
        assert bandwidth().execute(spec, x).order_K == 4

    def test_unknown_normalization(self, weak_params):
        """Test only omega0 and omega_bar normalisations exist"""
        spec = SweepSpec("bandwidth", "X", [2.0], base=weak_params, fixed={"normalization": "omega"})
        with pytest.raises(ValidationError):
            bandwidth().execute(spec, 2.0)

    def test_missing_base(self):
        """Test the sweep needs nominal drive parameters"""
        with pytest.raises(PreconditionError):
            bandwidth().execute(SweepSpec("bandwidth", "X", [2.0]), 2.0)

    @pytest.mark.slow
    def test_wider_band_is_better(self, weak_params):
        """Test widening the band from 2 to 5 omega0 raises the simulated fidelity"""
        spec = SweepSpec("bandwidth", "X", [2.0, 5.0], base=weak_params, fixed={"rwa": False})
        narrow = bandwidth().execute(spec, 2.0)
        wide = bandwidth().execute(spec, 5.0)
        assert wide.order_K == 11
        assert wide.e_k < narrow.e_k
        assert wide.fidelity_sim > narrow.fidelity_sim

    @pytest.mark.slow
    @pytest.mark.parametrize("x", [1.5, 2.0])
    def test_beats_on_resonance(self, weak_params, x):
        """Test the pi/10 X pulse beats the on-resonance pulse from 1.5 omega0 upwards"""
        spec = SweepSpec("bandwidth", "X", [x], base=weak_params)
        record = bandwidth().execute(spec, x)
        assert record.order_K >= 3
        assert 1.0 - record.fidelity_sim < 1.0 - record.fidelity_rwa

    def test_unit_bandwidth_drops_third_harmonic(self, weak_params):
        """Test Delta omega = omega0 keeps only two harmonics of the pi/10 sequence"""
        with patch('fato.sweeps.bandwidth.propagate_waveform', return_value=Mock(fidelity=0.9)):
            spec = SweepSpec("bandwidth", "X", [1.0], base=weak_params, fixed={"rwa": False})
            assert bandwidth().execute(spec, 1.0).order_K == 2
