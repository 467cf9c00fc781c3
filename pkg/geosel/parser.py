from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

from geosel.cellgrid import Bounds
from geosel.cellgrid import Cell
from geosel.cellgrid import CellGrid
from geosel.cellgrid import PartitionParams
from geosel.constants import EARTH_RADIUS_KM
from geosel.constants import GRID_COLUMNS
from geosel.constants import GRID_FORMAT_VERSION
from geosel.constants import PREDICTIONS_FORMAT_VERSION
from geosel.distribution import EvalRecord
from geosel.distribution import validate
from geosel.errors import ConsistencyError
from geosel.errors import GeoselError
from geosel.errors import GridMismatchError
from geosel.errors import InputFormatError
from geosel.errors import UnknownCellError
from geosel.evaluation import CalibrationResult
from geosel.geodesy import GeoPoint
from geosel.selection import Method

logger = logging.getLogger(__name__)


def _get_lines(file_path):
    path_to_file = Path(file_path)
    try:
        with path_to_file.open() as f:
            return f.readlines()
    except (OSError, UnicodeDecodeError) as e:
        raise InputFormatError(f'cannot read file: {e}', file_path) from None


def _is_skippable(line):
    return len(line.strip()) == 0 or line.startswith('#')


def _parse_float(text, what, file_path, line_number):
    try:
        return float(text)
    except ValueError:
        raise InputFormatError(f'malformed {what} {text!r}', file_path, line_number) from None


def _parse_int(text, what, file_path, line_number):
    try:
        return int(text)
    except ValueError:
        raise InputFormatError(f'malformed {what} {text!r}', file_path, line_number) from None


def _point(lat, lon, file_path, line_number):
    try:
        return GeoPoint(lat, lon)
    except InputFormatError as e:
        raise type(e)(str(e), file_path, line_number) from None


def _header_fields(lines):
    fields = {}
    tokens = []
    for line in lines:
        if not line.startswith('#'):
            break
        for token in line[1:].split():
            if '=' in token:
                key, value = token.split('=', 1)
                fields[key] = value
            else:
                tokens.append(token)
    return tokens, fields


def parse_coordinates(file_path) -> list:
    points = []
    for line_number, line in enumerate(_get_lines(file_path), 1):
        if _is_skippable(line):
            continue
        row = next(csv.reader([line]))
        if len(row) != 2:
            raise InputFormatError(f'expected 2 columns, got {len(row)}', file_path, line_number)
        if not points and [c.strip().lower() for c in row] == ['lat', 'lon']:
            continue
        lat = _parse_float(row[0], 'latitude', file_path, line_number)
        lon = _parse_float(row[1], 'longitude', file_path, line_number)
        points.append(_point(lat, lon, file_path, line_number))
    logger.debug('read %d coordinates from %s', len(points), file_path)
    return points


def parse_grid(file_path) -> CellGrid:
    lines = _get_lines(file_path)
    tokens, fields = _header_fields(lines)
    if GRID_FORMAT_VERSION not in tokens:
        raise InputFormatError(f'not a {GRID_FORMAT_VERSION} file', file_path, 1)
    radius = _parse_float(fields.get('earth_radius_km', repr(EARTH_RADIUS_KM)),
                          'earth radius', file_path, 1)
    if radius != EARTH_RADIUS_KM:
        raise ConsistencyError(f'{file_path}: grid built for earth radius {radius} km')
    params = PartitionParams(
        min_count=_parse_int(fields.get('min_count', '50'), 'min_count', file_path, 1),
        max_count=_parse_int(fields.get('max_count', '1000'), 'max_count', file_path, 1),
        max_depth=_parse_int(fields.get('max_depth', '16'), 'max_depth', file_path, 1),
    )
    discarded = _parse_int(fields.get('discarded', '0'), 'discarded', file_path, 1)

    cells = []
    for line_number, line in enumerate(lines, 1):
        if _is_skippable(line):
            continue
        row = next(csv.reader([line]))
        if row == GRID_COLUMNS:
            continue
        if len(row) != len(GRID_COLUMNS):
            raise InputFormatError(
                f'expected {len(GRID_COLUMNS)} columns, got {len(row)}', file_path, line_number)
        cell_id = _parse_int(row[0], 'cell_id', file_path, line_number)
        lat, lon, south, north, west, east = (
            _parse_float(row[i], GRID_COLUMNS[i], file_path, line_number) for i in (1, 2, 5, 6, 7, 8))
        count = _parse_int(row[3], 'count', file_path, line_number)
        depth = _parse_int(row[4], 'depth', file_path, line_number)
        cells.append(Cell(cell_id, _point(lat, lon, file_path, line_number), count, depth,
                          Bounds(south, north, west, east)))
    return CellGrid(cells, params, discarded)


def _parse_entries(text, file_path, line_number):
    entries = {}
    for pair in text.split():
        cell_id, sep, p = pair.partition(':')
        if not sep:
            raise InputFormatError(f'malformed entry {pair!r}', file_path, line_number)
        cell_id = _parse_int(cell_id, 'cell id', file_path, line_number)
        if cell_id in entries:
            raise InputFormatError(f'cell {cell_id} listed twice', file_path, line_number)
        entries[cell_id] = _parse_float(p, 'probability', file_path, line_number)
    return entries


def _validate_row(entries, grid, file_path, line_number):
    try:
        return validate(entries, grid)
    except UnknownCellError as e:
        raise ConsistencyError(f'{file_path}:{line_number}: {e}') from None
    except InputFormatError as e:
        raise type(e)(str(e), file_path, line_number) from None


def parse_predictions(file_path, grid: CellGrid) -> list:
    """Records of a predictions file, validated against `grid`.

    Each line is `image_id <TAB> true_lat <TAB> true_lon <TAB> entries`
    followed by optional MC-pass entry blocks, entries being
    space-separated `cell_id:probability` pairs.
    """
    lines = _get_lines(file_path)
    tokens, fields = _header_fields(lines)
    if PREDICTIONS_FORMAT_VERSION not in tokens:
        raise InputFormatError(f'not a {PREDICTIONS_FORMAT_VERSION} file', file_path, 1)
    grid_ref = fields.get('grid')
    if grid_ref != grid.grid_id:
        raise GridMismatchError(
            f'{file_path}: predictions reference grid {grid_ref}, loaded grid is {grid.grid_id}')

    records = []
    seen = set()
    for line_number, line in enumerate(lines, 1):
        if _is_skippable(line):
            continue
        row = line.rstrip('\n').split('\t')
        if len(row) < 4:
            raise InputFormatError(f'expected at least 4 fields, got {len(row)}', file_path, line_number)
        image_id = row[0]
        if not image_id or image_id in seen:
            raise InputFormatError(f'missing or repeated image id {image_id!r}', file_path, line_number)
        seen.add(image_id)
        truth = _point(_parse_float(row[1], 'latitude', file_path, line_number),
                       _parse_float(row[2], 'longitude', file_path, line_number),
                       file_path, line_number)
        dist = _validate_row(_parse_entries(row[3], file_path, line_number), grid, file_path, line_number)
        mc_dists = None
        if len(row) > 4:
            mc_dists = [_validate_row(_parse_entries(block, file_path, line_number), grid,
                                      file_path, line_number) for block in row[4:]]
        try:
            records.append(EvalRecord(image_id, truth, dist, mc_dists))
        except InputFormatError as e:
            raise type(e)(str(e), file_path, line_number) from None
    logger.debug('read %d records from %s', len(records), file_path)
    return records


def parse_calibration(file_path) -> CalibrationResult:
    text = ''.join(_get_lines(file_path))
    try:
        data = json.loads(text)
        return CalibrationResult(
            method=Method(data['method']),
            scale_d=float(data['d_km']),
            theta_star=float(data['theta_star']),
            target_coverage=float(data['target_coverage']),
            achieved_coverage=float(data['achieved_coverage']),
            n_validation=int(data['n_validation']),
        )
    except (ValueError, KeyError, TypeError) as e:
        if isinstance(e, GeoselError):
            raise
        raise InputFormatError(f'malformed calibration file: {e}', file_path) from None


def parse_labels(file_path) -> dict:
    labels = {}
    for line_number, line in enumerate(_get_lines(file_path), 1):
        if _is_skippable(line):
            continue
        row = next(csv.reader([line]))
        if row == ['image_id', 'planted_label']:
            continue
        if len(row) != 2:
            raise InputFormatError(f'expected 2 columns, got {len(row)}', file_path, line_number)
        labels[row[0]] = _parse_int(row[1], 'label', file_path, line_number)
    return labels
