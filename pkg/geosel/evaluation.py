from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from dataclasses import field

from geosel.cellgrid import CellGrid
from geosel.cellgrid import check_scale
from geosel.constants import DEFAULT_SCALES_KM
from geosel.constants import DEFAULT_SEED
from geosel.distribution import predict_location
from geosel.errors import EmptyInputError
from geosel.errors import MisalignedDecisionsError
from geosel.errors import UsageError
from geosel.geodesy import DistanceKm
from geosel.geodesy import gcd
from geosel.geodesy import GeoPoint
from geosel.selection import accepts
from geosel.selection import ConfidenceScore
from geosel.selection import gate
from geosel.selection import ideal_rank
from geosel.selection import Method
from geosel.selection import Orientation
from geosel.selection import random_draws
from geosel.selection import require_passes
from geosel.selection import score_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalizabilityLabel:
    image_id: str
    scale_d: DistanceKm
    label: int


@dataclass(frozen=True)
class RCPoint:
    theta: float
    accepted: int
    errors: int
    total: int

    @property
    def coverage(self) -> float:
        return self.accepted / self.total

    @property
    def risk(self) -> float | None:
        if self.accepted == 0:
            return None
        return self.errors / self.accepted


@dataclass(frozen=True)
class CalibrationResult:
    method: Method
    scale_d: DistanceKm
    theta_star: float
    target_coverage: float
    achieved_coverage: float
    n_validation: int


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total

    @property
    def f1(self) -> float:
        denominator = 2 * self.tp + self.fp + self.fn
        if denominator == 0:
            return 0.0
        return 2 * self.tp / denominator


@dataclass(frozen=True)
class SelectiveReport:
    method: Method
    scale_d: DistanceKm
    theta: float
    counts: ConfusionCounts
    optimal_risk: float | None
    optimal_coverage: float
    n_accepted: int
    n_rejected: int
    accuracy_all: dict = field(default_factory=dict)
    accuracy_accepted: dict = field(default_factory=dict)
    accuracy_rejected: dict = field(default_factory=dict)
    missed_localizable: float | None = None

    @property
    def accuracy(self) -> float:
        return self.counts.accuracy

    @property
    def f1_positive(self) -> float:
        return self.counts.f1


def _require_records(records, what='input'):
    records = list(records)
    if not records:
        raise EmptyInputError(what)
    return records


def prediction_errors(records, grid: CellGrid) -> list:
    return [gcd(predict_location(record.dist, grid), record.truth) for record in records]


def loss(l1: GeoPoint, l2: GeoPoint, d: DistanceKm) -> int:
    return int(gcd(l1, l2) > d)


# strict: a record exactly d km off is correct for loss but not localizable
def label_localizability(records, grid: CellGrid, d: DistanceKm) -> list:
    d = check_scale(d)
    records = list(records)
    return [
        LocalizabilityLabel(record.image_id, d, int(error < d))
        for record, error in zip(records, prediction_errors(records, grid))
    ]


def coverage(decisions) -> float:
    decisions = list(decisions)
    if not decisions:
        raise EmptyInputError('decisions')
    return sum(decisions) / len(decisions)


def _check_aligned(records, decisions):
    if len(records) != len(decisions):
        raise MisalignedDecisionsError(
            f'{len(decisions)} decisions for {len(records)} records')


def risk(records, decisions, grid: CellGrid, d: DistanceKm) -> float | None:
    records = _require_records(records)
    decisions = list(decisions)
    _check_aligned(records, decisions)
    d = check_scale(d)
    accepted = [record for record, decision in zip(records, decisions) if decision]
    if not accepted:
        return None
    errors = sum(int(error > d) for error in prediction_errors(accepted, grid))
    return errors / len(accepted)


def geolocation_accuracy(records, grid: CellGrid, scales=DEFAULT_SCALES_KM) -> dict:
    records = _require_records(records)
    errors = prediction_errors(records, grid)
    return {
        check_scale(d): sum(int(error <= d) for error in errors) / len(records)
        for d in scales
    }


def score_records(records, grid: CellGrid, method: Method, d: DistanceKm | None = None,
                  seed: int = DEFAULT_SEED, renormalize: bool = False) -> list:
    records = list(records)
    if method.uses_scale:
        d = check_scale(d)
    if method is Method.RANDOM:
        return [ConfidenceScore(float(u), Orientation.LOWER, Method.RANDOM)
                for u in random_draws(len(records), seed)]
    if method is Method.IDEAL:
        return [ConfidenceScore(float(label.label), Orientation.HIGHER, Method.IDEAL, d)
                for label in label_localizability(records, grid, d)]
    if method is Method.MC:
        require_passes(records)
    scores = [score_distribution(record, grid, method, d, renormalize=renormalize)
              for record in records]
    logger.debug('scored %d records with %s', len(scores), method.value)
    return scores


def reject_all_theta(orientation: Orientation) -> float:
    return math.inf if orientation is Orientation.HIGHER else -math.inf


def accept_all_theta(orientation: Orientation) -> float:
    return -math.inf if orientation is Orientation.HIGHER else math.inf


def _confidence_order(scores) -> list:
    """Record indices from most to least confident, ties in input order."""
    if scores and scores[0].orientation is Orientation.HIGHER:
        return sorted(range(len(scores)), key=lambda i: (-scores[i].value, i))
    return sorted(range(len(scores)), key=lambda i: (scores[i].value, i))


def rc_curve(records, grid: CellGrid, d: DistanceKm, method: Method,
             seed: int = DEFAULT_SEED, renormalize: bool = False) -> list:
    records = _require_records(records)
    d = check_scale(d)
    total = len(records)
    wrong = [int(error > d) for error in prediction_errors(records, grid)]

    # IDEAL knots follow ideal_rank, theta being the accepted count
    if method is Method.IDEAL:
        labels = [label.label for label in label_localizability(records, grid, d)]
        points = [RCPoint(0.0, 0, 0, total)]
        errors = 0
        for k, i in enumerate(ideal_rank(labels), 1):
            errors += wrong[i]
            points.append(RCPoint(float(k), k, errors, total))
        return points

    scores = score_records(records, grid, method, d, seed=seed, renormalize=renormalize)
    order = _confidence_order(scores)
    points = [RCPoint(reject_all_theta(scores[0].orientation), 0, 0, total)]
    accepted = errors = 0
    position = 0
    while position < total:
        theta = scores[order[position]].value
        while position < total and scores[order[position]].value == theta:
            accepted += 1
            errors += wrong[order[position]]
            position += 1
        points.append(RCPoint(theta, accepted, errors, total))
    return points


def calibrate_threshold(validation_records, grid: CellGrid, d: DistanceKm, method: Method,
                        seed: int = DEFAULT_SEED, renormalize: bool = False) -> CalibrationResult:
    """theta* is the score of the k-th most confident record, k the records within d km."""
    if method is Method.RANDOM:
        raise UsageError('RANDOM has no threshold to calibrate')
    records = _require_records(validation_records, 'validation set')
    d = check_scale(d)
    total = len(records)
    correct = sum(int(error <= d) for error in prediction_errors(records, grid))
    scores = score_records(records, grid, method, d, seed=seed, renormalize=renormalize)
    orientation = scores[0].orientation
    if correct == 0:
        theta_star = reject_all_theta(orientation)
    else:
        theta_star = scores[_confidence_order(scores)[correct - 1]].value
    achieved = sum(int(accepts(score.value, orientation, theta_star)) for score in scores)
    result = CalibrationResult(
        method=method,
        scale_d=d,
        theta_star=theta_star,
        target_coverage=correct / total,
        achieved_coverage=achieved / total,
        n_validation=total,
    )
    logger.info('calibrated %s at %g km: theta*=%r target=%.4f achieved=%.4f',
                method.value, d, theta_star, result.target_coverage, result.achieved_coverage)
    return result


def decide(records, grid: CellGrid, d: DistanceKm, method: Method, theta: float,
           seed: int = DEFAULT_SEED, renormalize: bool = False) -> list:
    scores = score_records(records, grid, method, d, seed=seed, renormalize=renormalize)
    return [gate(score, theta) for score in scores]


def _subset_accuracy(records, grid, scales):
    if not records:
        return {check_scale(d): None for d in scales}
    return geolocation_accuracy(records, grid, scales)


def selective_report(test_records, grid: CellGrid, d: DistanceKm, method: Method, theta_star: float,
                     seed: int = DEFAULT_SEED, renormalize: bool = False,
                     scales=DEFAULT_SCALES_KM) -> SelectiveReport:
    records = _require_records(test_records)
    d = check_scale(d)
    decisions = decide(records, grid, d, method, theta_star, seed=seed, renormalize=renormalize)
    labels = [label.label for label in label_localizability(records, grid, d)]
    tp = sum(1 for g, y in zip(decisions, labels) if g == 1 and y == 1)
    fp = sum(1 for g, y in zip(decisions, labels) if g == 1 and y == 0)
    tn = sum(1 for g, y in zip(decisions, labels) if g == 0 and y == 0)
    fn = sum(1 for g, y in zip(decisions, labels) if g == 0 and y == 1)

    accepted = [record for record, g in zip(records, decisions) if g]
    rejected = [record for record, g in zip(records, decisions) if not g]
    missed = None
    if rejected:
        missed = sum(int(error <= d) for error in prediction_errors(rejected, grid)) / len(rejected)
    return SelectiveReport(
        method=method,
        scale_d=d,
        theta=theta_star,
        counts=ConfusionCounts(tp, fp, tn, fn),
        optimal_risk=risk(records, decisions, grid, d),
        optimal_coverage=coverage(decisions),
        n_accepted=len(accepted),
        n_rejected=len(rejected),
        accuracy_all=geolocation_accuracy(records, grid, scales),
        accuracy_accepted=_subset_accuracy(accepted, grid, scales),
        accuracy_rejected=_subset_accuracy(rejected, grid, scales),
        missed_localizable=missed,
    )


def split_dataset(records, grid: CellGrid, d: DistanceKm, method: Method, theta_star: float,
                  seed: int = DEFAULT_SEED, renormalize: bool = False):
    records = list(records)
    if not records:
        return [], []
    decisions = decide(records, grid, d, method, theta_star, seed=seed, renormalize=renormalize)
    localizable = [record for record, g in zip(records, decisions) if g]
    non_localizable = [record for record, g in zip(records, decisions) if not g]
    return localizable, non_localizable
