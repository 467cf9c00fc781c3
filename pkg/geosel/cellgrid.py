from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from geosel.constants import DEFAULT_MAX_COUNT
from geosel.constants import DEFAULT_MAX_DEPTH
from geosel.constants import DEFAULT_MIN_COUNT
from geosel.constants import MAX_GCD_KM
from geosel.constants import NEIGHBOR_CACHE_SIZE
from geosel.errors import ConsistencyError
from geosel.errors import EmptyInputError
from geosel.errors import NoRetainedCellsError
from geosel.errors import UnknownCellError
from geosel.errors import UsageError
from geosel.geodesy import chord_for_distance
from geosel.geodesy import DistanceKm
from geosel.geodesy import gcd
from geosel.geodesy import GeoPoint
from geosel.geodesy import normalize_lon
from geosel.geodesy import to_unit_vectors

logger = logging.getLogger(__name__)

# slack on the chord radius; candidates are re-checked with gcd
_CHORD_SLACK = 1e-9


def check_scale(d: DistanceKm) -> DistanceKm:
    d = float(d)
    if math.isnan(d) or d < 0:
        raise UsageError(f'invalid scale {d} km')
    return d


@dataclass(frozen=True)
class PartitionParams:
    min_count: int = DEFAULT_MIN_COUNT
    max_count: int = DEFAULT_MAX_COUNT
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if not 0 < self.min_count <= self.max_count:
            raise UsageError(
                f'partition needs 0 < min_count <= max_count, got {self.min_count}, {self.max_count}')
        if self.max_depth < 0:
            raise UsageError(f'max_depth must be >= 0, got {self.max_depth}')


@dataclass(frozen=True)
class Bounds:
    south: float
    north: float
    west: float
    east: float

    def contains(self, lat: float, lon: float) -> bool:
        in_lat = self.south <= lat < self.north or (self.north == 90.0 and lat == 90.0)
        return in_lat and self.west <= lon < self.east

    def quadrants(self):
        mid_lat = (self.south + self.north) / 2
        mid_lon = (self.west + self.east) / 2
        return (
            Bounds(self.south, mid_lat, self.west, mid_lon),
            Bounds(self.south, mid_lat, mid_lon, self.east),
            Bounds(mid_lat, self.north, self.west, mid_lon),
            Bounds(mid_lat, self.north, mid_lon, self.east),
        )


WORLD = Bounds(-90.0, 90.0, -180.0, 180.0)


@dataclass(frozen=True)
class Cell:
    id: int
    center: GeoPoint
    count: int
    depth: int
    bounds: Bounds


class CellGrid:

    def __init__(self, cells, params=None, discarded=0, neighbor_cache_size=NEIGHBOR_CACHE_SIZE):
        self.params = params or PartitionParams()
        self.discarded = discarded
        self.cells = {}
        for cell in sorted(cells, key=lambda c: c.id):
            if cell.id in self.cells:
                raise ConsistencyError(f'duplicate cell id {cell.id}')
            self.cells[cell.id] = cell
        if not self.cells:
            raise EmptyInputError('grid')
        self._ids = list(self.cells)
        self._position = {cell_id: i for i, cell_id in enumerate(self._ids)}
        centers = [self.cells[i].center for i in self._ids]
        self._vectors = to_unit_vectors(
            [c.lat for c in centers], [c.lon for c in centers])
        self._tree = cKDTree(self._vectors)
        self._all_ids = frozenset(self._ids)
        self._neighbors = lru_cache(maxsize=neighbor_cache_size)(self._query_within)
        self._grid_id = None

    def __len__(self):
        return len(self.cells)

    def __contains__(self, cell_id):
        return cell_id in self.cells

    def __iter__(self):
        return iter(self.cells.values())

    @property
    def ids(self):
        return list(self._ids)

    @property
    def training_count(self) -> int:
        return sum(cell.count for cell in self.cells.values())

    @property
    def grid_id(self) -> str:
        if self._grid_id is None:
            digest = hashlib.sha256()
            for cell in self.cells.values():
                digest.update(
                    f'{cell.id},{cell.center.lat!r},{cell.center.lon!r},{cell.count},{cell.depth}\n'.encode())
            self._grid_id = digest.hexdigest()[:16]
        return self._grid_id

    def cell(self, cell_id) -> Cell:
        try:
            return self.cells[cell_id]
        except KeyError:
            raise UnknownCellError(cell_id) from None

    def cell_center(self, cell_id) -> GeoPoint:
        return self.cell(cell_id).center

    def cells_within(self, origin_cell_id, d: DistanceKm) -> frozenset:
        self.cell(origin_cell_id)
        d = check_scale(d)
        if d >= MAX_GCD_KM:
            return self._all_ids
        return self._neighbors(origin_cell_id, d)

    def neighbor_cache_info(self):
        return self._neighbors.cache_info()

    def _query_within(self, origin_cell_id, d):
        origin = self.cells[origin_cell_id]
        radius = chord_for_distance(d) * (1 + _CHORD_SLACK) + _CHORD_SLACK
        candidates = self._tree.query_ball_point(
            self._vectors[self._position[origin_cell_id]], r=radius)
        return frozenset(
            self._ids[i] for i in candidates
            if gcd(origin.center, self.cells[self._ids[i]].center) <= d
        )


def cells_within(grid: CellGrid, origin_cell_id, d: DistanceKm) -> frozenset:
    return grid.cells_within(origin_cell_id, d)


def cell_center(grid: CellGrid, cell_id) -> GeoPoint:
    return grid.cell_center(cell_id)


def _mean_center(lats: np.ndarray, lons: np.ndarray) -> GeoPoint:
    lat = float(np.mean(lats))
    lat = min(max(lat, float(lats.min())), float(lats.max()))
    lon_min = float(lons.min())
    lon_max = float(lons.max())
    if lon_max - lon_min <= 180.0:
        lon = float(np.mean(lons))
        lon = min(max(lon, lon_min), lon_max)
    else:
        # members straddle the antimeridian
        radians = np.radians(lons)
        lon = math.degrees(math.atan2(
            float(np.mean(np.sin(radians))), float(np.mean(np.cos(radians)))))
    return GeoPoint(lat, normalize_lon(lon))


def _split(lats, lons, members, bounds, depth, params, leaves):
    if len(members) > params.max_count and depth < params.max_depth:
        mid_lat = (bounds.south + bounds.north) / 2
        mid_lon = (bounds.west + bounds.east) / 2
        south = lats[members] < mid_lat
        west = lons[members] < mid_lon
        masks = (south & west, south & ~west, ~south & west, ~south & ~west)
        for child, mask in zip(bounds.quadrants(), masks):
            _split(lats, lons, members[mask], child, depth + 1, params, leaves)
        return
    leaves.append((bounds, members, depth))


def build_partition(points, params: PartitionParams | None = None) -> CellGrid:
    params = params or PartitionParams()
    points = list(points)
    if not points:
        raise EmptyInputError('input')
    lats = np.array([p.lat for p in points], dtype=float)
    lons = np.array([p.lon for p in points], dtype=float)

    leaves = []
    _split(lats, lons, np.arange(len(points)), WORLD, 0, params, leaves)

    cells = []
    discarded = 0
    for bounds, members, depth in leaves:
        if len(members) < params.min_count:
            discarded += len(members)
            continue
        cells.append(Cell(
            id=len(cells),
            center=_mean_center(lats[members], lons[members]),
            count=len(members),
            depth=depth,
            bounds=bounds,
        ))
    logger.debug('partition: %d leaves, %d retained, %d points discarded',
                 len(leaves), len(cells), discarded)
    if not cells:
        raise NoRetainedCellsError(len(points), params.min_count)
    return CellGrid(cells, params, discarded)
