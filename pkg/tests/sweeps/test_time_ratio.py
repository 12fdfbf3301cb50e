import pytest
import numpy as np

from fato.exceptions import StrongRegime
from fato.sweeps import SweepSpec
from fato.sweeps.time_ratio import time_ratio


@pytest.mark.sweeps
class TestTimeRatioSweep:
    """Test cases for the time_ratio sweep kind"""

    def test_class_attributes(self):
        """Test class attributes are correctly set"""
        module = time_ratio()
        assert module.kind == "time_ratio"
        assert module.default_grid("X") is None

    def test_boundary_value(self):
        """Test the ratio at theta = pi/4"""
        record = time_ratio().execute(SweepSpec("time_ratio", "X", [np.pi / 4]), np.pi / 4)
        assert record.total_time == pytest.approx(0.83368, abs=5e-4)
        assert np.isnan(record.fidelity_sim)
        assert np.isnan(record.fidelity_analytic)

    def test_small_theta_limit(self):
        """Test the ratio approaches Si(pi)/2"""
        record = time_ratio().execute(SweepSpec("time_ratio", "Y", [1e-4]), 1e-4)
        assert record.total_time == pytest.approx(0.92597, abs=1e-5)

    def test_increasing_theta_shortens(self):
        """Test the ratio decreases across the weak regime"""
        grid = list(np.linspace(0.05, np.pi / 4, 8))
        spec = SweepSpec("time_ratio", "X", grid)
        ratios = [time_ratio().execute(spec, x).total_time for x in grid]
        assert np.all(np.diff(ratios) < 0)

    def test_strong_regime(self):
        """Test theta above pi/4 is refused"""
        with pytest.raises(StrongRegime):
            time_ratio().execute(SweepSpec("time_ratio", "X", [1.2]), 1.2)
