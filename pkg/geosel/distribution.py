from __future__ import annotations

import math
from dataclasses import dataclass

from geosel.cellgrid import CellGrid
from geosel.constants import PROBABILITY_SUM_TOLERANCE
from geosel.errors import EmptyDistributionError
from geosel.errors import GridMismatchError
from geosel.errors import InsufficientPassesError
from geosel.errors import InvalidProbabilityError
from geosel.errors import ProbabilitySumError
from geosel.errors import UnknownCellError
from geosel.geodesy import GeoPoint

# rounds of residual correction after renormalizing
_RENORMALIZE_ROUNDS = 4


@dataclass(frozen=True)
class CellDistribution:
    entries: dict
    grid_ref: str

    def __len__(self):
        return len(self.entries)

    def probability(self, cell_id) -> float:
        return self.entries.get(cell_id, 0.0)


@dataclass(frozen=True)
class EvalRecord:
    image_id: str
    truth: GeoPoint
    dist: CellDistribution
    mc_dists: tuple | None = None

    def __post_init__(self):
        if self.mc_dists is None:
            return
        passes = tuple(self.mc_dists)
        object.__setattr__(self, 'mc_dists', passes)
        if len(passes) < 2:
            raise InsufficientPassesError(
                f'{self.image_id}: {len(passes)} mc pass(es), need at least 2')
        for mc_dist in passes:
            if mc_dist.grid_ref != self.dist.grid_ref:
                raise GridMismatchError(
                    f'{self.image_id}: mc pass bound to grid {mc_dist.grid_ref}, '
                    f'record bound to {self.dist.grid_ref}')


def _renormalize(entries):
    total = math.fsum(entries.values())
    normalized = {cell_id: p / total for cell_id, p in entries.items()}
    largest = max(normalized, key=lambda cell_id: (normalized[cell_id], -cell_id))
    for _ in range(_RENORMALIZE_ROUNDS):
        residual = 1.0 - math.fsum(normalized.values())
        if residual == 0.0:
            break
        normalized[largest] = max(0.0, normalized[largest] + residual)
    return normalized


def validate(dist_raw, grid: CellGrid) -> CellDistribution:
    entries = {}
    for cell_id, p in dict(dist_raw).items():
        cell_id = int(cell_id)
        p = float(p)
        if not math.isfinite(p) or p < 0:
            raise InvalidProbabilityError(f'probability {p} for cell {cell_id}')
        if cell_id not in grid:
            raise UnknownCellError(cell_id)
        entries[cell_id] = p
    if not entries:
        raise EmptyDistributionError('empty distribution')
    total = math.fsum(entries.values())
    if abs(total - 1.0) > PROBABILITY_SUM_TOLERANCE:
        raise ProbabilitySumError(
            f'probabilities sum to {total!r}, outside 1 +/- {PROBABILITY_SUM_TOLERANCE}')
    normalized = _renormalize(entries)
    return CellDistribution(dict(sorted(normalized.items())), grid.grid_id)


def argmax_cell(dist: CellDistribution):
    """Most probable cell; ties go to the smallest id."""
    return min(dist.entries.items(), key=lambda item: (-item[1], item[0]))[0]


def check_binding(dist: CellDistribution, grid: CellGrid):
    if dist.grid_ref != grid.grid_id:
        raise GridMismatchError(
            f'distribution bound to grid {dist.grid_ref}, got grid {grid.grid_id}')


def predict_location(dist: CellDistribution, grid: CellGrid) -> GeoPoint:
    check_binding(dist, grid)
    return grid.cell_center(argmax_cell(dist))
