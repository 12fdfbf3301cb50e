import pytest
import numpy as np

from fato.exceptions import PreconditionError, ValidationError
from fato.sweeps.sweep_module import (CSV_COLUMNS, SweepModule, SweepRecord, SweepSpec, base_omega0,
                                      base_params, order_from_fixed)


class TestSweepSpec:
    """Test cases for sweep descriptions"""

    def test_gate_is_uppercased(self):
        """Test gates are normalised to upper case"""
        assert SweepSpec("theta", "x", [0.1, 0.2]).gate == "X"

    def test_unknown_gate(self):
        """Test gates outside X, Y and SWAP are rejected"""
        with pytest.raises(ValidationError):
            SweepSpec("theta", "Z", [0.1])

    @pytest.mark.parametrize("grid", [[], [0.2, 0.1], [0.1, 0.1], [0.1, np.nan]])
    def test_bad_grid(self, grid):
        """Test empty, non-increasing and non-finite grids are rejected"""
        with pytest.raises(PreconditionError):
            SweepSpec("theta", "X", grid)

    def test_grid_is_float(self):
        """Test grid values are stored as floats"""
        spec = SweepSpec("theta", "X", np.array([1, 2, 3]))
        assert spec.grid == [1.0, 2.0, 3.0]
        assert all(isinstance(x, float) for x in spec.grid)


class TestSweepRecord:
    """Test cases for sweep rows"""

    def test_defaults_are_nan(self):
        """Test inapplicable columns default to NaN"""
        record = SweepRecord(x=0.5)
        assert np.isnan(record.fidelity_sim)
        assert np.isnan(record.fidelity_rwa)
        assert record.order_K == 0
        assert record.error is None

    def test_failed(self):
        """Test failed points carry their error tag"""
        record = SweepRecord.failed(1, "NoConvergence: defect")
        assert record.x == 1.0
        assert record.error == "NoConvergence: defect"
        assert np.isnan(record.fidelity_sim)

    def test_to_dict_covers_columns(self):
        """Test the dictionary has every CSV column plus error"""
        assert set(SweepRecord(x=0.0).to_dict()) == set(CSV_COLUMNS) | {"error"}


class TestSweepModule:
    """Test cases for the SweepModule base class"""

    def test_execute_not_implemented(self):
        """Test the base class must be subclassed"""
        spec = SweepSpec("theta", "X", [0.1])
        with pytest.raises(NotImplementedError):
            SweepModule().execute(spec, 0.1)

    def test_default_grid(self):
        """Test the base class has no default grid"""
        assert SweepModule().default_grid("X") is None

    def test_check_kind(self):
        """Test a module refuses specs of another kind"""
        module = SweepModule()
        module.kind = "bandwidth"
        with pytest.raises(ValidationError):
            module.check(SweepSpec("theta", "X", [0.1]))

    def test_check_gate(self):
        """Test single-qubit modules refuse SWAP"""
        module = SweepModule()
        module.kind = "theta"
        with pytest.raises(ValidationError):
            module.check(SweepSpec("theta", "SWAP", [0.1]))


class TestHelpers:
    """Test cases for the shared sweep helpers"""

    def test_base_params(self, weak_params):
        """Test the nominal DriveParams are returned"""
        assert base_params(SweepSpec("bandwidth", "X", [1.0], base=weak_params)) is weak_params

    def test_base_params_missing(self):
        """Test a missing base is a precondition error"""
        with pytest.raises(PreconditionError):
            base_params(SweepSpec("bandwidth", "X", [1.0]))

    def test_base_omega0(self, weak_params):
        """Test omega0 comes from the base, then fixed, then the default"""
        assert base_omega0(SweepSpec("theta", "X", [0.1], base=weak_params)) == weak_params.omega0
        assert base_omega0(SweepSpec("theta", "X", [0.1], fixed={"omega0": 2.5})) == 2.5
        assert base_omega0(SweepSpec("theta", "X", [0.1])) == 1.0

    def test_order_from_fixed(self):
        """Test an explicit order wins over a bandwidth"""
        assert order_from_fixed({"order": 7, "bandwidth": 100.0}, 10.0) == 7
        assert order_from_fixed({"bandwidth": 2 * np.pi}, 10.0) == 10

    def test_order_missing(self):
        """Test one of order and bandwidth is required"""
        with pytest.raises(PreconditionError):
            order_from_fixed({}, 10.0)

    def test_negative_order(self):
        """Test orders must be non-negative integers"""
        with pytest.raises(PreconditionError):
            order_from_fixed({"order": -2}, 10.0)
