"""
Original-vs-resampled experiment runner.

Every (vintage, model, variant) cell is an independent job run in a
worker thread; a bounded limiter caps concurrency and each job sends
its report over a memory stream to a single aggregator. Reports come
back in canonical order (vintage, model, variant) whatever the
completion order.
"""

import logging
import math
from functools import partial
from typing import Any

import anyio
import anyio.to_thread
from anyio.abc import ObjectSendStream, TaskGroup

from src.environs import WORKERS
from src.exceptions import ResamplingError
from src.loan_data import Dataset
from src.models import ClassifierSpec, ModelKind, ModelService
from src.resampling import ResampleConfig, smote
from src.seeds import derive_seed

from .metrics import confusion, metrics, roc_auc
from .schemas import MetricsReport, SplitPlan, Variant, VintageSplit
from .splitting import split

logger = logging.getLogger(__name__)

Grids = dict[ModelKind, dict[str, list[Any]]]


def prepare_splits(
    datasets: list[Dataset],
    plan: SplitPlan,
    resample_cfg: ResampleConfig,
) -> list[VintageSplit]:
    """
    Splits each vintage once and oversamples its training side.
    Split and SMOTE seeds derive from `plan.seed` and `resample_cfg.seed`
    per vintage year.
    """
    splits = []
    for index, data in enumerate(datasets):
        key = data.vintage_year if data.vintage_year is not None else index
        train, holdout = split(data, plan.model_copy(update={"seed": derive_seed(plan.seed, "split", key)}))
        cfg = resample_cfg.model_copy(update={"seed": derive_seed(resample_cfg.seed, "smote", key)})
        try:
            resampled = smote(train, cfg)
        except ResamplingError as error:
            logger.warning("Vintage %s: resampling failed, Resampled cells will be recorded as failures: %s", key, error)
            splits.append(VintageSplit(
                vintage_year=data.vintage_year, regime=data.regime, train=train, holdout=holdout, resample_error=str(error),
            ))
            continue
        splits.append(VintageSplit(
            vintage_year=data.vintage_year,
            regime=data.regime,
            train=train,
            holdout=holdout,
            resampled=resampled.without_provenance(),
            provenance=resampled.provenance,
        ))
    return splits


def _failed(vintage: VintageSplit, spec: ClassifierSpec, variant: Variant, error: str) -> MetricsReport:
    return MetricsReport(
        kind=spec.kind,
        variant=variant,
        vintage_year=vintage.vintage_year,
        regime=vintage.regime,
        holdout_checksum=vintage.holdout.checksum(),
        hyper_params=spec.hyper_params,
        error=error,
    )


def evaluate_cell(vintage: VintageSplit, spec: ClassifierSpec, variant: Variant) -> MetricsReport:
    """
    Fits one model on one variant's training data and scores it on the
    vintage's holdout. Failures are recorded on the report, not raised.
    """
    train = vintage.train if variant == Variant.ORIGINAL else vintage.resampled
    if train is None:
        return _failed(vintage, spec, variant, f"resampling failed: {vintage.resample_error}")
    holdout = vintage.holdout
    try:
        model = ModelService.fit(spec, train)
        cm = confusion(holdout.y, ModelService.predict(model, holdout.X))
        auc = roc_auc(holdout.y, ModelService.score(model, holdout.X)) if model.score_capability else None
    except Exception as error:
        logger.warning("Vintage %s %s (%s) failed: %s", vintage.vintage_year, spec.kind.value, variant.value, error)
        return _failed(vintage, spec, variant, f"{type(error).__name__}: {error}")

    scores = metrics(cm)
    return MetricsReport(
        kind=spec.kind,
        variant=variant,
        vintage_year=vintage.vintage_year,
        regime=vintage.regime,
        precision=scores.precision,
        recall=scores.recall,
        fpr=scores.fpr,
        accuracy=scores.accuracy,
        roc_auc=auc,
        fit_seconds=model.fit_seconds,
        holdout_checksum=holdout.checksum(),
        tp=cm.tp,
        fp=cm.fp,
        fn=cm.fn,
        tn=cm.tn,
        hyper_params=spec.hyper_params,
        converged=model.converged,
    )


def tune(vintage: VintageSplit, spec: ClassifierSpec, grid: dict[str, list[Any]] | None, folds: int) -> ClassifierSpec:
    """
    Grid-searches the classifier spec on the vintage's original training data
    """
    if not grid:
        return spec
    result = ModelService.grid_search(spec, vintage.train, grid, folds)
    return ClassifierSpec(kind=spec.kind, hyper_params=result.best_params, seed=spec.seed)


async def _cell_job(send: ObjectSendStream, limiter: anyio.CapacityLimiter, key: tuple, vintage, spec, variant) -> None:
    async with send:
        report = await anyio.to_thread.run_sync(evaluate_cell, vintage, spec, variant, limiter=limiter)
        await send.send((key, report))


async def _model_job(
    send: ObjectSendStream,
    limiter: anyio.CapacityLimiter,
    task_group: TaskGroup,
    key: tuple,
    vintage: VintageSplit,
    spec: ClassifierSpec,
    grid: dict[str, list[Any]] | None,
    folds: int,
) -> None:
    async with send:
        try:
            spec = await anyio.to_thread.run_sync(partial(tune, vintage, spec, grid, folds), limiter=limiter)
        except Exception as error:
            logger.warning("Vintage %s %s: grid search failed: %s", vintage.vintage_year, spec.kind.value, error)
            for index, variant in enumerate(Variant):
                await send.send(((*key, index), _failed(vintage, spec, variant, f"grid search failed: {error}")))
            return
        for index, variant in enumerate(Variant):
            task_group.start_soon(_cell_job, send.clone(), limiter, (*key, index), vintage, spec, variant)


async def evaluate_splits_async(
    splits: list[VintageSplit],
    specs: list[ClassifierSpec],
    grids: Grids | None = None,
    folds: int = 3,
    workers: int = WORKERS,
) -> list[MetricsReport]:
    grids = grids or {}
    limiter = anyio.CapacityLimiter(max(1, workers))
    send, receive = anyio.create_memory_object_stream(max_buffer_size=math.inf)
    collected: list[tuple[tuple, MetricsReport]] = []

    async with anyio.create_task_group() as task_group:
        async with send:
            for v, vintage in enumerate(splits):
                for m, spec in enumerate(specs):
                    task_group.start_soon(
                        _model_job, send.clone(), limiter, task_group, (v, m), vintage, spec, grids.get(spec.kind), folds,
                    )
        async with receive:
            async for key, report in receive:
                collected.append((key, report))

    collected.sort(key=lambda item: item[0])
    return [report for _, report in collected]


async def run_experiment_async(
    datasets: list[Dataset],
    specs: list[ClassifierSpec],
    resample_cfg: ResampleConfig,
    plan: SplitPlan | None = None,
    grids: Grids | None = None,
    folds: int = 3,
    workers: int = WORKERS,
) -> list[MetricsReport]:
    """
    For each vintage: split once, fit every spec on the training side
    (Original) and on its SMOTE-resampled copy (Resampled), and score
    both on the same holdout. One report per (vintage, model, variant).
    """
    splits = await anyio.to_thread.run_sync(prepare_splits, datasets, plan or SplitPlan(), resample_cfg)
    return await evaluate_splits_async(splits, specs, grids, folds, workers)


def run_experiment(
    datasets: list[Dataset],
    specs: list[ClassifierSpec],
    resample_cfg: ResampleConfig,
    plan: SplitPlan | None = None,
    grids: Grids | None = None,
    folds: int = 3,
    workers: int = WORKERS,
) -> list[MetricsReport]:
    return anyio.run(partial(run_experiment_async, datasets, specs, resample_cfg, plan, grids, folds, workers))
