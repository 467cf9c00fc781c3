from __future__ import annotations

import logging
import math

from geosel.cellgrid import build_partition
from geosel.cellgrid import check_scale
from geosel.cellgrid import PartitionParams
from geosel.constants import DEFAULT_SCALE_KM
from geosel.constants import DEFAULT_SCALES_KM
from geosel.constants import DEFAULT_SEED
from geosel.constants import IDEAL_THRESHOLD
from geosel.errors import ConsistencyError
from geosel.errors import EmptyInputError
from geosel.errors import UsageError
from geosel.evaluation import accept_all_theta
from geosel.evaluation import calibrate_threshold
from geosel.evaluation import geolocation_accuracy
from geosel.evaluation import rc_curve
from geosel.evaluation import score_records
from geosel.evaluation import selective_report
from geosel.evaluation import split_dataset
from geosel.parser import parse_calibration
from geosel.parser import parse_coordinates
from geosel.parser import parse_grid
from geosel.parser import parse_predictions
from geosel.selection import Method
from geosel.synth import generate_corpus
from geosel.synth import SynthSpec
from geosel.writer import write_benchmark
from geosel.writer import write_calibration
from geosel.writer import write_grid
from geosel.writer import write_labels
from geosel.writer import write_predictions
from geosel.writer import write_rc_curves
from geosel.writer import write_report
from geosel.writer import write_scores

logger = logging.getLogger(__name__)


def resolve_methods(names, default) -> list:
    return [Method(name) for name in dict.fromkeys(names or default)]


def resolve_scales(values, default=DEFAULT_SCALES_KM) -> list:
    return sorted({check_scale(d) for d in (values or default)})


def resolve_scale(values):
    if not values:
        return None
    if len(set(values)) > 1:
        raise UsageError('this command takes a single --scale-km')
    return check_scale(values[0])


def _load(grid_file, predictions_file, what):
    grid = parse_grid(grid_file)
    records = parse_predictions(predictions_file, grid)
    if not records:
        raise EmptyInputError(what)
    return grid, records


def _resolve_thetas(methods, d, theta, calibrations) -> dict:
    thetas = {}
    if theta is not None:
        if len(methods) > 1:
            raise UsageError('--theta applies to a single --method, use --calibration files for several')
        # -inf accepts everything whatever the orientation
        if theta == -math.inf:
            theta = accept_all_theta(methods[0].orientation)
        thetas[methods[0]] = theta
    for path, result in calibrations:
        if result.scale_d != d:
            raise ConsistencyError(
                f'{path}: calibrated at {result.scale_d:g} km, evaluating at {d:g} km')
        if result.method in thetas:
            raise UsageError(f'two thresholds given for {result.method.value}')
        thetas[result.method] = result.theta_star
    for method in methods:
        if method in thetas:
            continue
        if method is Method.IDEAL:
            thetas[method] = IDEAL_THRESHOLD
        else:
            raise UsageError(f'missing threshold for {method.value}: pass --theta or --calibration')
    return thetas


def _thresholds(methods, d, theta, calibration_files):
    calibrations = [(path, parse_calibration(path)) for path in calibration_files or []]
    if d is None:
        d = calibrations[0][1].scale_d if calibrations else DEFAULT_SCALE_KM
    d = check_scale(d)
    return d, _resolve_thetas(methods, d, theta, calibrations)


def cmd_partition(train_coords_file, params: PartitionParams, grid_file):
    points = parse_coordinates(train_coords_file)
    grid = build_partition(points, params)
    write_grid(grid, grid_file)
    print(f'{len(grid)} cells, {grid.discarded} points discarded')
    return grid


def cmd_score(grid_file, predictions_file, methods, scales, scores_file,
              seed=DEFAULT_SEED, renormalize=False):
    grid, records = _load(grid_file, predictions_file, 'predictions')
    columns = {}
    for method in methods:
        for d in scales:
            if method.uses_scale or d == scales[0]:
                columns[method, d] = score_records(records, grid, method, d, seed=seed,
                                                   renormalize=renormalize)
            else:
                columns[method, d] = columns[method, scales[0]]
    rows = [
        (record.image_id, method, d, columns[method, d][i])
        for i, record in enumerate(records)
        for method in methods
        for d in scales
    ]
    write_scores(rows, scores_file)
    logger.info('wrote %d scores to %s', len(rows), scores_file)
    return rows


def cmd_calibrate(grid_file, validation_file, method: Method, d, calibration_file,
                  seed=DEFAULT_SEED, renormalize=False):
    grid = parse_grid(grid_file)
    records = parse_predictions(validation_file, grid)
    result = calibrate_threshold(records, grid, DEFAULT_SCALE_KM if d is None else d, method,
                                 seed=seed, renormalize=renormalize)
    write_calibration(result, calibration_file)
    print(f'theta*={result.theta_star!r} target_coverage={result.target_coverage!r} '
          f'achieved_coverage={result.achieved_coverage!r}')
    return result


def cmd_evaluate(grid_file, test_file, methods, d, rc_file, report_file, theta=None,
                 calibration_files=None, seed=DEFAULT_SEED, renormalize=False):
    grid, records = _load(grid_file, test_file, 'test set')
    d, thetas = _thresholds(methods, d, theta, calibration_files)
    curves = [(method, rc_curve(records, grid, d, method, seed=seed, renormalize=renormalize))
              for method in methods]
    reports = [selective_report(records, grid, d, method, thetas[method], seed=seed,
                                renormalize=renormalize)
               for method in methods]
    write_rc_curves(curves, rc_file)
    write_report(reports, report_file)
    for report in reports:
        print(f'{report.method.value} at {d:g} km: accuracy={report.accuracy!r} f1={report.f1_positive!r} '
              f'optimal_risk={report.optimal_risk!r} optimal_coverage={report.optimal_coverage!r}')
    return reports


def cmd_split(grid_file, predictions_file, method: Method, d, localizable_file, non_localizable_file,
              theta=None, calibration_files=None, seed=DEFAULT_SEED, renormalize=False):
    grid = parse_grid(grid_file)
    records = parse_predictions(predictions_file, grid)
    d, thetas = _thresholds([method], d, theta, calibration_files)
    localizable, non_localizable = split_dataset(records, grid, d, method, thetas[method],
                                                 seed=seed, renormalize=renormalize)
    write_predictions(localizable, grid.grid_id, localizable_file)
    write_predictions(non_localizable, grid.grid_id, non_localizable_file)
    print(f'{len(localizable)} localizable, {len(non_localizable)} non-localizable')
    return localizable, non_localizable


def cmd_synth(spec: SynthSpec, grid_file, predictions_file, labels_file):
    grid = parse_grid(grid_file)
    records, labels = generate_corpus(spec, grid)
    write_predictions(records, grid.grid_id, predictions_file)
    write_labels(labels, labels_file)
    print(f'{spec.n_localizable} planted-localizable, {spec.n_nonlocalizable} planted-dispersed records')
    return records, labels


def cmd_benchmark(grid_file, validation_file, test_file, methods, scales, table_file,
                  seed=DEFAULT_SEED, renormalize=False):
    grid, validation = _load(grid_file, validation_file, 'validation set')
    test = parse_predictions(test_file, grid)
    if not test:
        raise EmptyInputError('test set')
    reports = []
    for method in methods:
        for d in scales:
            if method is Method.RANDOM:
                theta = geolocation_accuracy(validation, grid, [d])[d]
            elif method is Method.IDEAL:
                theta = IDEAL_THRESHOLD
            else:
                theta = calibrate_threshold(validation, grid, d, method, seed=seed,
                                            renormalize=renormalize).theta_star
            reports.append(selective_report(test, grid, d, method, theta, seed=seed,
                                            renormalize=renormalize))
    write_benchmark(reports, table_file)
    logger.info('benchmarked %d methods at %d scales', len(methods), len(scales))
    return reports
