"""
Command-line interface.

    fato synth     --gate x --theta-frac 5
    fato waveform  --gate x --theta-frac 5 --omega0 3.141592653589793 --order 57 --samples 2048
    fato fidelity  --gate y --theta 1.0471975511965976 --bandwidth 20
    fato sweep     --kind bandwidth --gate x --theta-frac 5 --grid 0.5:20:40
    fato swap2q    --mode profile --omega 20 --bandwidth 400

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from fato import __version__
from fato.bangbang import (BangSequence, DriveParams, derive_params, gate_target, gibbs_factor, params_from_theta,
                           synthesize_pi)
from fato.config import DEFAULT_OMEGA0
from fato.dynamics import COEFF_VARIANTS, DEFAULT_COEFF_VARIANT, analytic_fidelity, propagate_bb, propagate_waveform
from fato.exceptions import FatoError, NumericalFailure
from fato.fourier import gibbs_maximum, order_for_bandwidth, series_of, waveform_frame
from fato.logger import get_logger, setup_logging
from fato.output import dump_json, frame_to_csv, matrix_to_json
from fato.qmat import trace_fidelity
from fato.sweeps import SWEEP_KINDS, SweepSpec, records_frame, records_to_csv, run_sweep
from fato.sweeps.reference import rwa_infidelity
from fato.sweeps.sweep_module import NORMALIZATIONS
from fato.twoqubit import build_swap_schedule, delta_pulse_unitary, rect_swap_fidelity, schedule_frame, swap_unitary


logger = get_logger('cli')

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    if not np.isfinite(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text}")
    return value


def _finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not np.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return value


def parse_grid(text: str) -> List[float]:
    """'a:b:n' -> n linearly spaced values from a to b inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must look like a:b:n, got {text!r}")
    start, stop = _finite_float(parts[0]), _finite_float(parts[1])
    count = _positive_int(parts[2])
    if count > 1 and not stop > start:
        raise argparse.ArgumentTypeError(f"grid end must exceed its start, got {text!r}")
    return [float(v) for v in np.linspace(start, stop, count)]


def _add_drive_args(parser: argparse.ArgumentParser, required: bool = True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument('--theta', type=_finite_float, help="drive angle arctan(omega_bar/omega0) in radians")
    group.add_argument('--theta-frac', type=_positive_int, metavar='N', help="theta = pi/(2N)")
    group.add_argument('--omega-bar', type=_positive_float, help="drive amplitude bound")
    parser.add_argument('--omega0', type=_positive_float, default=DEFAULT_OMEGA0,
                        help=f"qubit drift frequency (default {DEFAULT_OMEGA0})")


def _add_order_args(parser: argparse.ArgumentParser, required: bool = True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument('--order', type=_non_negative_int, metavar='K', help="Fourier order K")
    group.add_argument('--bandwidth', type=_positive_float,
                       help="bandwidth delta omega; K = floor(delta omega T / 2 pi)")


def _add_output_args(parser: argparse.ArgumentParser, default_format: str):
    parser.add_argument('--output', '-o', default='-', help="output path, '-' for stdout (default)")
    parser.add_argument('--format', choices=['csv', 'json'], default=default_format,
                        help=f"output format (default {default_format})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='fato', description="Fourier-approximated time-optimal qubit control")
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help="console log level (default WARNING); logs go to stderr")
    parser.add_argument('--log-file', default=None, help="also write DEBUG logs to this file")
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    synth = commands.add_parser('synth', help="time-optimal bang-bang pi pulse")
    synth.add_argument('--gate', type=str.upper, choices=['X', 'Y'], required=True)
    _add_drive_args(synth)
    _add_output_args(synth, 'json')
    synth.set_defaults(handler=cmd_synth)

    waveform = commands.add_parser('waveform', help="sample the truncated Fourier waveform")
    waveform.add_argument('--gate', type=str.upper, choices=['X', 'Y'], required=True)
    _add_drive_args(waveform)
    _add_order_args(waveform)
    waveform.add_argument('--samples', type=_positive_int, default=2048, help="sample count (default 2048)")
    waveform.add_argument('--clamp', action='store_true', help="hard-limit the samples to [-1, 1]")
    waveform.add_argument('--sidecar', default=None,
                          help="path of the Gibbs-maximum JSON (default: next to --output)")
    _add_output_args(waveform, 'csv')
    waveform.set_defaults(handler=cmd_waveform)

    fidelity = commands.add_parser('fidelity', help="simulated and predicted gate fidelity")
    fidelity.add_argument('--gate', type=str.upper, choices=['X', 'Y'], required=True)
    _add_drive_args(fidelity)
    _add_order_args(fidelity, required=False)
    fidelity.add_argument('--kind', choices=['fato', 'bb'], default='fato',
                          help="'fato' propagates the Fourier drive, 'bb' the exact bang sequence")
    fidelity.add_argument('--no-rwa', action='store_true', help="skip the on-resonance reference")
    _add_output_args(fidelity, 'json')
    fidelity.set_defaults(handler=cmd_fidelity)

    sweep = commands.add_parser('sweep', help="one-dimensional parameter sweep, CSV in grid order")
    sweep.add_argument('--kind', choices=sorted(SWEEP_KINDS), required=True)
    sweep.add_argument('--gate', type=str.upper, choices=['X', 'Y', 'SWAP'], required=True)
    _add_drive_args(sweep, required=False)
    _add_order_args(sweep, required=False)
    sweep.add_argument('--grid', type=parse_grid, default=None,
                       help="a:b:n, n values from a to b inclusive (theta sweeps default to pi/(2n))")
    sweep.add_argument('--normalization', choices=NORMALIZATIONS, default='omega0',
                       help="bandwidth grid in units of omega0 or omega_bar (default omega0)")
    sweep.add_argument('--coeff-variant', choices=COEFF_VARIANTS, default=DEFAULT_COEFF_VARIANT,
                       help=f"weak-regime constant of the analytic prediction (default {DEFAULT_COEFF_VARIANT})")
    sweep.add_argument('--no-rwa', action='store_true', help="skip the on-resonance reference column")
    sweep.add_argument('--coupling', type=_positive_float, default=1.0, help="ZZ coupling J for SWAP sweeps")
    sweep.add_argument('--omega', type=_positive_float, default=None,
                       help="SWAP pulse amplitude in units of J (swap_bandwidth)")
    sweep.add_argument('--workers', type=_positive_int, default=1, help="worker processes (default 1)")
    _add_output_args(sweep, 'csv')
    sweep.set_defaults(handler=cmd_sweep)

    swap2q = commands.add_parser('swap2q', help="SWAP gate through ZZ coupling and local pulses")
    swap2q.add_argument('--mode', choices=['profile', 'bandwidth', 'amplitude'], default='profile')
    swap2q.add_argument('--coupling', type=_positive_float, default=1.0, help="ZZ coupling J (default 1)")
    swap2q.add_argument('--omega', type=_positive_float, default=20.0,
                        help="pulse amplitude in units of J (default 20)")
    swap2q.add_argument('--bandwidth', type=_positive_float, default=None, help="bandwidth in units of J")
    swap2q.add_argument('--grid', type=parse_grid, default=None, help="a:b:n for the bandwidth and amplitude modes")
    swap2q.add_argument('--samples', type=_positive_int, default=2048, help="profile samples (default 2048)")
    swap2q.add_argument('--workers', type=_positive_int, default=1, help="worker processes (default 1)")
    _add_output_args(swap2q, 'csv')
    swap2q.set_defaults(handler=cmd_swap2q)
    return parser


def drive_params(args) -> DriveParams:
    if getattr(args, 'theta', None) is not None:
        return params_from_theta(args.theta, args.omega0)
    if getattr(args, 'theta_frac', None) is not None:
        return params_from_theta(np.pi / (2 * args.theta_frac), args.omega0)
    return derive_params(args.omega0, args.omega_bar)


def resolve_order(args, seq: BangSequence, params: DriveParams) -> Tuple[int, Optional[float]]:
    """Fourier order from --order or --bandwidth, with K >= 1 enforced for bandwidths below omega."""
    if args.order is not None:
        return args.order, None
    if args.bandwidth < params.omega:
        logger.warning(f"Bandwidth {args.bandwidth} is below the minimum omega = {params.omega:.6f}")
    order = order_for_bandwidth(args.bandwidth, seq.total_time)
    if order < 1:
        logger.warning(f"Bandwidth {args.bandwidth} gives K=0 for T={seq.total_time:.6f}; using K=1")
        return 1, None
    return order, args.bandwidth


def _emit(text: str, output: str):
    if output in (None, '-'):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(output, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write(text)
    logger.info(f"Wrote {output}")


def _emit_frame(frame: pd.DataFrame, args, document: Optional[dict] = None):
    if args.format == 'json':
        payload = dict(document or {})
        payload["rows"] = frame.to_dict(orient='records')
        _emit(dump_json(payload), args.output)
    else:
        _emit(frame_to_csv(frame), args.output)


def _emit_records(records, args, document: dict):
    if args.format == 'json':
        _emit_frame(records_frame(records), args, document)
    else:
        _emit(records_to_csv(records), args.output)


def cmd_synth(args) -> int:
    params = drive_params(args)
    seq = synthesize_pi(args.gate, params)
    document = {
        "command": "synth",
        "gate": args.gate,
        "params": params.to_dict(),
        "regime": seq.metadata.get("regime", "weak" if params.is_weak else "strong"),
        "bangs": [{"level": level, "duration": duration} for level, duration in seq.bangs],
        "total_time": seq.total_time,
        "t2x_parsing": seq.metadata.get("t2x_parsing"),
        "y_pattern": seq.metadata.get("y_pattern"),
        "gate_fidelity_check": trace_fidelity(gate_target(args.gate), seq.realized_unitary()),
        "realized_unitary": matrix_to_json(seq.realized_unitary()),
    }
    _emit(dump_json(document), args.output)
    return EXIT_OK


def cmd_waveform(args) -> int:
    params = drive_params(args)
    seq = synthesize_pi(args.gate, params)
    order, bandwidth = resolve_order(args, seq, params)
    waveform = series_of(seq, order, bandwidth=bandwidth)
    frame = waveform_frame(waveform, args.samples, clamp=args.clamp)
    sidecar = {
        "command": "waveform",
        "gate": args.gate,
        "params": params.to_dict(),
        "period": waveform.period,
        "order_K": waveform.order,
        "bandwidth": waveform.bandwidth,
        "e_k": waveform.tail_error,
        "gibbs_maximum": gibbs_maximum(waveform, samples=max(args.samples, 8192)),
        "gibbs_factor": gibbs_factor(),
    }
    _emit_frame(frame, args, sidecar)
    sidecar_path = args.sidecar
    if sidecar_path is None and args.output not in (None, '-'):
        sidecar_path = str(Path(args.output).with_suffix('.gibbs.json'))
    if sidecar_path is not None:
        _emit(dump_json(sidecar), sidecar_path)
    else:
        logger.info(f"Gibbs maximum {sidecar['gibbs_maximum']:.6f} (no sidecar written)")
    return EXIT_OK


def cmd_fidelity(args) -> int:
    params = drive_params(args)
    seq = synthesize_pi(args.gate, params)
    target = gate_target(args.gate)
    if args.kind == 'bb':
        result = propagate_bb(seq, target)
        _emit(dump_json({"command": "fidelity", "kind": "bb", "gate": args.gate, "params": params.to_dict(),
                         "T": seq.total_time, "F_sim": result.fidelity}), args.output)
        return EXIT_OK

    if args.order is None and args.bandwidth is None:
        logger.error("fidelity --kind fato needs --order or --bandwidth")
        raise ValueError("argument --order/--bandwidth: one is required for --kind fato")
    order, bandwidth = resolve_order(args, seq, params)
    waveform = series_of(seq, order, bandwidth=bandwidth)
    result = propagate_waveform(waveform, params, target=target)
    regime = "weak" if params.is_weak else "strong"
    document = {
        "command": "fidelity",
        "kind": "fato",
        "gate": args.gate,
        "params": params.to_dict(),
        "T": seq.total_time,
        "K": waveform.order,
        "E_K": waveform.tail_error,
        "F_sim": result.fidelity,
        "F_analytic_main": analytic_fidelity(regime, args.gate, params.theta, waveform.tail_error, "main_text"),
        "F_analytic_appendix": analytic_fidelity(regime, args.gate, params.theta, waveform.tail_error, "appendix"),
        "F_rwa": None,
        "steps": result.steps,
        "richardson_defect": result.richardson_defect,
    }
    if params.is_weak and not args.no_rwa:
        document["F_rwa"] = 1.0 - rwa_infidelity(args.gate, params)
    _emit(dump_json(document), args.output)
    return EXIT_OK


def sweep_spec_from_args(args) -> SweepSpec:
    fixed = {"normalization": args.normalization, "coeff_variant": args.coeff_variant,
             "rwa": not args.no_rwa, "omega0": args.omega0, "J": args.coupling}
    if args.order is not None:
        fixed["order"] = args.order
    if args.bandwidth is not None:
        fixed["bandwidth"] = args.bandwidth
    if args.omega is not None:
        fixed["omega"] = args.omega
    has_drive = any(getattr(args, name) is not None for name in ('theta', 'theta_frac', 'omega_bar'))
    base = drive_params(args) if has_drive else None
    grid = args.grid
    if grid is None:
        grid = SWEEP_KINDS[args.kind]().default_grid(args.gate)
    if grid is None:
        raise ValueError(f"argument --grid: required for --kind {args.kind}")
    return SweepSpec(kind=args.kind, gate=args.gate, grid=grid, base=base, fixed=fixed)


def cmd_sweep(args) -> int:
    spec = sweep_spec_from_args(args)
    records = run_sweep(spec, workers=args.workers)
    _emit_records(records, args, {"command": "sweep", "kind": spec.kind, "gate": spec.gate,
                                  "params": None if spec.base is None else spec.base.to_dict(),
                                  "fixed": spec.fixed})
    return EXIT_OK


def cmd_swap2q(args) -> int:
    J = args.coupling
    if args.mode == 'profile':
        schedule = build_swap_schedule(J, args.omega * J)
        bandwidth = None if args.bandwidth is None else args.bandwidth * J
        frame = schedule_frame(schedule, args.samples, bandwidth=bandwidth)
        document = {
            "command": "swap2q",
            "mode": "profile",
            "coupling": J,
            "omega": args.omega * J,
            "total_time": schedule.total_time,
            "segments": [{"duration": s.duration, "x": s.x_level, "y": s.y_level} for s in schedule.segments],
            "metadata": schedule.metadata,
            "F_delta": trace_fidelity(swap_unitary(), delta_pulse_unitary(schedule)),
            "F_rect": rect_swap_fidelity(schedule),
        }
        _emit_frame(frame, args, document)
        return EXIT_OK

    if args.grid is None:
        raise ValueError(f"argument --grid: required for --mode {args.mode}")
    if args.mode == 'bandwidth':
        spec = SweepSpec(kind="swap_bandwidth", gate="SWAP", grid=args.grid,
                         fixed={"J": J, "omega": args.omega})
    else:
        if args.bandwidth is None:
            raise ValueError("argument --bandwidth: required for --mode amplitude")
        spec = SweepSpec(kind="swap_amp", gate="SWAP", grid=args.grid,
                         fixed={"J": J, "bandwidth": args.bandwidth})
    records = run_sweep(spec, workers=args.workers)
    _emit_records(records, args, {"command": "swap2q", "mode": args.mode, "kind": spec.kind, "fixed": spec.fixed})
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level='DEBUG', log_file=args.log_file, console_level=args.log_level)
    try:
        return args.handler(args)
    except NumericalFailure as exc:
        logger.error(f"{args.command}: {type(exc).__name__}: {exc}")
        print(f"fato {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (FatoError, ValueError) as exc:
        logger.error(f"{args.command}: {type(exc).__name__}: {exc}")
        print(f"fato {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
