from __future__ import annotations

import math

import numpy as np

from geosel.cellgrid import Cell
from geosel.cellgrid import CellGrid
from geosel.cellgrid import WORLD
from geosel.distribution import EvalRecord
from geosel.distribution import validate
from geosel.geodesy import destination
from geosel.geodesy import GeoPoint


def make_grid(centers, count=100):
    """Grid with one cell per (lat, lon) center, ids in the given order."""
    cells = [Cell(i, GeoPoint(lat, lon), count, 0, WORLD) for i, (lat, lon) in enumerate(centers)]
    return CellGrid(cells)


def lattice_grid(step=5.0, south=-40.0, north=40.0):
    """Cells on a regular lat/lon lattice, a few hundred km apart."""
    centers = []
    lat = south
    while lat <= north:
        lon = -180.0
        while lon < 180.0:
            centers.append((lat, lon))
            lon += step * 6
        lat += step
    return make_grid(centers)


def make_record(image_id, grid, entries, truth, mc_entries=None):
    mc_dists = None
    if mc_entries is not None:
        mc_dists = [validate(e, grid) for e in mc_entries]
    return EvalRecord(image_id, truth, validate(entries, grid), mc_dists)


def record_at_distance(image_id, grid, cell_id, distance_km, p=1.0, other=None):
    """Record predicting `cell_id` whose truth lies `distance_km` east of that cell's center."""
    entries = {cell_id: p}
    if p < 1.0:
        entries[other] = 1.0 - p
    truth = destination(grid.cell_center(cell_id), 90.0, distance_km)
    return make_record(image_id, grid, entries, truth)


def uniform_points(n, seed):
    """Points uniformly distributed over the sphere."""
    rng = np.random.default_rng(seed)
    lats = np.degrees(np.arcsin(rng.uniform(-1.0, 1.0, n)))
    lons = rng.uniform(-180.0, 180.0, n)
    return [GeoPoint(float(lat), float(lon)) for lat, lon in zip(lats, lons)]


def clustered_grid(rng, n_cells, spread_km=3000.0):
    """Cells scattered around a random hub, so that every scale matters."""
    hub = GeoPoint(float(rng.uniform(-60.0, 60.0)), float(rng.uniform(-180.0, 180.0)))
    centers = []
    for _ in range(n_cells):
        point = destination(hub, float(rng.uniform(0.0, 360.0)), float(rng.uniform(0.0, spread_km)))
        centers.append((point.lat, point.lon))
    return make_grid(centers)


def random_distribution(rng, grid, max_cells=20):
    k = int(rng.integers(1, min(max_cells, len(grid)) + 1))
    cell_ids = rng.choice(grid.ids, size=k, replace=False)
    weights = rng.random(k) + 1e-3
    total = math.fsum(weights.tolist())
    return validate({int(c): float(w) / total for c, w in zip(cell_ids, weights)}, grid)
