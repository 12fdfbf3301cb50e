"""
Runs a sweep point by point and collects the records in grid order.

Points are independent; with workers > 1 they are spread over a process pool
and gathered back in grid order, so the output does not depend on the worker count.
"""

import multiprocessing
from typing import List, Sequence, Tuple

import pandas as pd

from fato.exceptions import PreconditionError, ValidationError
from fato.logger import get_logger
from fato.output import frame_to_csv
from fato.sweeps.sweep_module import CSV_COLUMNS, SweepRecord, SweepSpec

logger = get_logger('engine')


def sweep_module_for(kind: str):
    """Instantiate the registered module for a sweep kind."""
    from fato.sweeps import SWEEP_KINDS

    if kind not in SWEEP_KINDS:
        logger.error(f"Unknown sweep kind {kind}")
        raise ValidationError(f"kind must be one of {sorted(SWEEP_KINDS)}, got {kind}")
    return SWEEP_KINDS[kind]()


def _run_point(task: Tuple[SweepSpec, float]) -> SweepRecord:
    spec, x = task
    module = sweep_module_for(spec.kind)
    try:
        record = module.execute(spec, x)
    except Exception as exc:
        logger.warning(f"{spec.kind} sweep point x={x} failed: {type(exc).__name__}: {exc}")
        return SweepRecord.failed(x, f"{type(exc).__name__}: {exc}")
    return record


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[SweepRecord]:
    '''
    Evaluate every grid point of a sweep.

    A failing point yields a record with NaN fidelities and its error tag set;
    the other points are unaffected.

            Parameters:
                    spec (SweepSpec): The sweep
                    workers (int): Process count; 1 runs in-process
            Returns:
                    records (list of SweepRecord): One per grid value, in grid order
    '''
    if int(workers) != workers or workers < 1:
        raise PreconditionError(f"workers must be a positive integer, got {workers}")
    sweep_module_for(spec.kind).check(spec)
    tasks = [(spec, x) for x in spec.grid]
    logger.info(f"Running {spec.kind} sweep over {len(tasks)} points with {workers} worker(s)")
    if workers == 1 or len(tasks) == 1:
        records = [_run_point(task) for task in tasks]
    else:
        with multiprocessing.Pool(processes=min(int(workers), len(tasks))) as pool:
            records = pool.map(_run_point, tasks, chunksize=1)
    failures = sum(record.error is not None for record in records)
    if failures:
        logger.warning(f"{failures} of {len(records)} sweep points failed")
    return records


def records_frame(records: Sequence[SweepRecord], with_errors: bool = True) -> pd.DataFrame:
    """DataFrame in the CSV column order, with an `error` column unless with_errors is False."""
    columns = CSV_COLUMNS + (["error"] if with_errors else [])
    frame = pd.DataFrame([record.to_dict() for record in records], columns=CSV_COLUMNS + ["error"])
    frame["order_K"] = frame["order_K"].astype(int)
    return frame[columns]


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    """CSV text with header x,fidelity_sim,fidelity_analytic,fidelity_rwa,total_time,order_K,e_k."""
    return frame_to_csv(records_frame(records, with_errors=False))
