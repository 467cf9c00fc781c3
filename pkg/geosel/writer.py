from __future__ import annotations

import csv
import json
import math

from geosel.constants import BENCHMARK_COLUMNS
from geosel.constants import EARTH_RADIUS_KM
from geosel.constants import GRID_COLUMNS
from geosel.constants import GRID_FORMAT_VERSION
from geosel.constants import PREDICTIONS_FORMAT_VERSION
from geosel.constants import PROBABILITY_DIGITS
from geosel.constants import RC_COLUMNS
from geosel.constants import SCORE_COLUMNS
from geosel.errors import InputFormatError


def _open(file_path):
    try:
        return open(file_path, 'w', newline='', encoding='utf-8')
    except OSError as e:
        raise InputFormatError(f'cannot write file: {e.strerror}', file_path) from None


def _csv_writer(f):
    return csv.writer(f, lineterminator='\n')


def format_probability(p: float) -> str:
    return format(p, f'.{PROBABILITY_DIGITS}g')


def format_scale(d: float) -> str:
    return format(d, 'g')


def _json_number(value):
    if value is None or math.isfinite(value):
        return value
    return 'inf' if value > 0 else '-inf'


def _write_json(data, file_path):
    with _open(file_path) as f:
        f.write(json.dumps(data, sort_keys=True, indent=2))
        f.write('\n')


def write_coordinates(points, file_path):
    with _open(file_path) as f:
        writer = _csv_writer(f)
        writer.writerow(['lat', 'lon'])
        for point in points:
            writer.writerow([repr(point.lat), repr(point.lon)])


def write_grid(grid, file_path):
    params = grid.params
    with _open(file_path) as f:
        f.write(f'# {GRID_FORMAT_VERSION}\n')
        f.write(f'# min_count={params.min_count} max_count={params.max_count} '
                f'max_depth={params.max_depth} earth_radius_km={EARTH_RADIUS_KM!r} '
                f'discarded={grid.discarded}\n')
        writer = _csv_writer(f)
        writer.writerow(GRID_COLUMNS)
        for cell in grid:
            writer.writerow([
                cell.id, repr(cell.center.lat), repr(cell.center.lon), cell.count, cell.depth,
                repr(cell.bounds.south), repr(cell.bounds.north),
                repr(cell.bounds.west), repr(cell.bounds.east),
            ])


def _format_entries(dist):
    return ' '.join(f'{cell_id}:{format_probability(p)}' for cell_id, p in dist.entries.items())


def write_predictions(records, grid_ref, file_path):
    with _open(file_path) as f:
        f.write(f'# {PREDICTIONS_FORMAT_VERSION} grid={grid_ref}\n')
        for record in records:
            if not record.image_id or any(c in record.image_id for c in '\t\n\r'):
                raise InputFormatError(f'image id {record.image_id!r} cannot be written')
            fields = [record.image_id, repr(record.truth.lat), repr(record.truth.lon),
                      _format_entries(record.dist)]
            if record.mc_dists:
                fields.extend(_format_entries(mc_dist) for mc_dist in record.mc_dists)
            f.write('\t'.join(fields))
            f.write('\n')


def write_labels(labels, file_path):
    with _open(file_path) as f:
        writer = _csv_writer(f)
        writer.writerow(['image_id', 'planted_label'])
        for image_id, label in labels.items():
            writer.writerow([image_id, label])


def write_scores(rows, file_path):
    """rows: (image_id, method, d_km, score) tuples in output order."""
    with _open(file_path) as f:
        writer = _csv_writer(f)
        writer.writerow(SCORE_COLUMNS)
        for image_id, method, d, score in rows:
            writer.writerow([image_id, method.value, format_scale(d), repr(score.value),
                             score.orientation.value])


def write_rc_curves(curves, file_path):
    """curves: (method, points) pairs; knots with undefined risk are omitted."""
    with _open(file_path) as f:
        writer = _csv_writer(f)
        writer.writerow(['method'] + RC_COLUMNS)
        for method, points in curves:
            for point in points:
                if point.risk is None:
                    continue
                writer.writerow([method.value, repr(point.theta), repr(point.coverage),
                                 repr(point.risk)])


def write_calibration(result, file_path):
    _write_json({
        'method': result.method.value,
        'd_km': result.scale_d,
        'theta_star': _json_number(result.theta_star),
        'target_coverage': result.target_coverage,
        'achieved_coverage': result.achieved_coverage,
        'n_validation': result.n_validation,
    }, file_path)


def _accuracy_table(accuracies):
    return {format_scale(d): accuracy for d, accuracy in accuracies.items()}


def report_to_dict(report):
    counts = report.counts
    return {
        'method': report.method.value,
        'd_km': report.scale_d,
        'theta': _json_number(report.theta),
        'accuracy': report.accuracy,
        'f1': report.f1_positive,
        'optimal_risk': report.optimal_risk,
        'optimal_coverage': report.optimal_coverage,
        'counts': {'tp': counts.tp, 'fp': counts.fp, 'tn': counts.tn, 'fn': counts.fn},
        'n_accepted': report.n_accepted,
        'n_rejected': report.n_rejected,
        'missed_localizable': report.missed_localizable,
        'geolocation_accuracy': {
            'all': _accuracy_table(report.accuracy_all),
            'localizable': _accuracy_table(report.accuracy_accepted),
            'non_localizable': _accuracy_table(report.accuracy_rejected),
        },
    }


def write_report(reports, file_path):
    _write_json({'reports': [report_to_dict(report) for report in reports]}, file_path)


def write_benchmark(reports, file_path):
    with _open(file_path) as f:
        writer = _csv_writer(f)
        writer.writerow(BENCHMARK_COLUMNS)
        for report in reports:
            writer.writerow([
                report.method.value, format_scale(report.scale_d), repr(report.theta),
                repr(report.accuracy), repr(report.f1_positive),
                '' if report.optimal_risk is None else repr(report.optimal_risk),
                repr(report.optimal_coverage),
            ])
