"""
Confusion counts, threshold metrics and ROC-AUC
"""

import numpy as np

from src.exceptions import EvaluationError

from .schemas import ConfusionMatrix, Metrics


def _binary(name: str, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values)
    if values.size and not np.isin(values, (0, 1)).all():
        raise EvaluationError(f"{name} must be binary 0/1")
    return values.astype(np.int64)


def confusion(y_true: np.ndarray, y_pred: np.ndarray) -> ConfusionMatrix:
    y_true, y_pred = _binary("y_true", y_true), _binary("y_pred", y_pred)
    if y_true.shape != y_pred.shape:
        raise EvaluationError(f"length mismatch: {len(y_true)} labels vs {len(y_pred)} predictions")
    return ConfusionMatrix(
        tp=int(np.sum((y_true == 1) & (y_pred == 1))),
        fp=int(np.sum((y_true == 0) & (y_pred == 1))),
        fn=int(np.sum((y_true == 1) & (y_pred == 0))),
        tn=int(np.sum((y_true == 0) & (y_pred == 0))),
    )


def _ratio(numerator: int, denominator: int) -> float | None:
    return numerator / denominator if denominator > 0 else None


def metrics(cm: ConfusionMatrix) -> Metrics:
    return Metrics(
        precision=_ratio(cm.tp, cm.tp + cm.fp),
        recall=_ratio(cm.tp, cm.tp + cm.fn),
        fpr=_ratio(cm.fp, cm.fp + cm.tn),
        accuracy=_ratio(cm.tp + cm.tn, cm.total),
    )


def roc_auc(y_true: np.ndarray, scores: np.ndarray) -> float:
    """
    Trapezoidal area under the ROC curve. Rows sharing a score form one
    threshold step, so ties contribute half a concordant pair. Counts
    stay integral until the single final division.
    """
    y_true = _binary("y_true", y_true)
    scores = np.asarray(scores, dtype=float)
    if y_true.shape != scores.shape:
        raise EvaluationError(f"length mismatch: {len(y_true)} labels vs {len(scores)} scores")
    positives = int(y_true.sum())
    negatives = len(y_true) - positives
    if positives == 0 or negatives == 0:
        raise EvaluationError("ROC-AUC is undefined when only one class is present")

    order = np.argsort(-scores, kind="stable")
    ranked_scores, ranked_labels = scores[order], y_true[order]
    step_ends = np.r_[np.flatnonzero(np.diff(ranked_scores)), len(ranked_scores) - 1]
    tp = np.r_[0, np.cumsum(ranked_labels)[step_ends]]
    fp = np.r_[0, np.cumsum(1 - ranked_labels)[step_ends]]
    doubled_area = int(np.sum(np.diff(fp) * (tp[1:] + tp[:-1])))
    return doubled_area / (2 * positives * negatives)
