from pathlib import Path

import pytest
import numpy as np

from fato import params_from_theta, propagate_bb, propagate_waveform, series_of, synthesize_pi
from fato.bangbang import gate_target
from fato.cli import main
from fato.config import IntegratorConfig
from fato.sweeps import SweepSpec, records_to_csv, run_sweep

GOLDEN_DIR = Path(__file__).parent / "data"
BANDWIDTH_GRID = [1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0, 30.0, 40.0, 50.0, 60.0]


@pytest.mark.integration
class TestFatoIntegration:
    """Integration tests for the synthesis to simulation workflow"""

    def test_synthesis_to_exact_propagation(self):
        """Test every analytic construction reaches its gate"""
        for theta, gate in [(np.pi / 10, "X"), (np.pi / 8, "Y"), (np.pi / 4, "Y"), (np.pi / 3, "X"), (np.pi / 3, "Y")]:
            seq = synthesize_pi(gate, params_from_theta(theta))
            assert propagate_bb(seq, gate_target(gate)).fidelity == pytest.approx(1.0, abs=1e-12)

    def test_more_harmonics_approach_bang_bang(self):
        """Test the Fourier drive improves towards the bang-bang fidelity as K grows"""
        seq = synthesize_pi("Y", params_from_theta(np.pi / 3))
        config = IntegratorConfig(scheme="magnus4", step_hint=1e-3, max_refinements=5)
        fidelities = [propagate_waveform(series_of(seq, K), seq.params, target=gate_target("Y"),
                                         config=config).fidelity for K in (5, 40)]
        assert fidelities[1] > fidelities[0]
        assert fidelities[1] > 0.99


@pytest.mark.integration
class TestDeterminism:
    """Integration tests for byte-identical outputs"""

    def test_sweep_csv_repeatable(self, tmp_path):
        """Test two identical sweep runs write identical files"""
        argv = ["sweep", "--kind", "time_ratio", "--gate", "x", "--grid", "0.05:0.75:8"]
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(argv + ["-o", str(first)]) == 0
        assert main(argv + ["-o", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_workers_byte_identical(self, tmp_path):
        """Test the worker count does not change the sweep output"""
        argv = ["sweep", "--kind", "time_ratio", "--gate", "y", "--grid", "0.05:0.75:8"]
        serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        assert main(argv + ["-o", str(serial)]) == 0
        assert main(argv + ["--workers", "4", "-o", str(parallel)]) == 0
        assert serial.read_bytes() == parallel.read_bytes()

    @pytest.mark.slow
    def test_bandwidth_sweep_workers(self, tmp_path):
        """Test a simulated sweep is identical with one and four workers"""
        argv = ["sweep", "--kind", "bandwidth", "--gate", "x", "--theta-frac", "5", "--grid", "1:2:2", "--no-rwa"]
        serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        assert main(argv + ["-o", str(serial)]) == 0
        assert main(argv + ["--workers", "4", "-o", str(parallel)]) == 0
        assert serial.read_bytes() == parallel.read_bytes()
        assert len(serial.read_text().splitlines()) == 3


@pytest.mark.integration
@pytest.mark.slow
class TestFidelityBandwidthCurve:
    """Integration tests for the pi/10 X fidelity against bandwidth up to 60 omega0"""

    def test_curve(self):
        """Test the infidelity falls from O(0.1) below 1e-4, mostly monotonically, and matches the golden CSV"""
        spec = SweepSpec("bandwidth", "X", BANDWIDTH_GRID, base=params_from_theta(np.pi / 10), fixed={"rwa": False})
        records = run_sweep(spec, workers=4)
        assert all(r.error is None for r in records)
        infidelity = np.array([1.0 - r.fidelity_sim for r in records])
        assert infidelity[0] > 1e-2
        assert infidelity[-1] < 1e-4
        assert np.mean(infidelity[1:] <= infidelity[:-1] + 1e-6) >= 0.9
        assert [r.order_K for r in records] == sorted(r.order_K for r in records)

        text = records_to_csv(records)
        golden = GOLDEN_DIR / "bandwidth_weak_x.csv"
        if not golden.exists():
            GOLDEN_DIR.mkdir(exist_ok=True)
            golden.write_bytes(text.encode("utf-8"))
            pytest.skip(f"golden curve written to {golden}")
        assert text.encode("utf-8") == golden.read_bytes()
