from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from geosel.cellgrid import CellGrid
from geosel.cellgrid import check_scale
from geosel.constants import SUPERCELL_MASS_CUTOFF
from geosel.constants import SUPERCELL_MASS_TOLERANCE
from geosel.distribution import argmax_cell
from geosel.distribution import CellDistribution
from geosel.distribution import check_binding
from geosel.errors import GridMismatchError
from geosel.errors import InsufficientPassesError
from geosel.errors import MissingPassesError
from geosel.errors import UsageError
from geosel.geodesy import DistanceKm

logger = logging.getLogger(__name__)


class Orientation(str, Enum):
    HIGHER = 'higher'
    LOWER = 'lower'


class Method(str, Enum):
    SE = 'se'
    PD = 'pd'
    SR = 'sr'
    MC = 'mc'
    RANDOM = 'random'
    IDEAL = 'ideal'

    @property
    def orientation(self) -> Orientation:
        if self in (Method.SE, Method.MC, Method.RANDOM):
            return Orientation.LOWER
        return Orientation.HIGHER

    @property
    def uses_scale(self) -> bool:
        return self in (Method.SE, Method.PD, Method.IDEAL)


@dataclass(frozen=True)
class ConfidenceScore:
    value: float
    orientation: Orientation
    method: Method
    scale_d: DistanceKm | None = None


@dataclass(frozen=True)
class SuperCell:
    members: tuple
    mass: float


@dataclass(frozen=True)
class SuperCellSet:
    supercells: tuple
    cumulative_mass: float

    @property
    def masses(self):
        return [supercell.mass for supercell in self.supercells]

    def __len__(self):
        return len(self.supercells)


def build_supercells(dist: CellDistribution, grid: CellGrid, d: DistanceKm,
                     cutoff: float = SUPERCELL_MASS_CUTOFF) -> SuperCellSet:
    check_binding(dist, grid)
    d = check_scale(d)
    remaining = dict(dist.entries)
    order = sorted(remaining, key=lambda cell_id: (-remaining[cell_id], cell_id))
    supercells = []
    masses = []
    for seed in order:
        if seed not in remaining:
            continue
        neighbors = grid.cells_within(seed, d)
        if len(neighbors) < len(remaining):
            members = sorted(c for c in neighbors if c in remaining)
        else:
            members = sorted(c for c in remaining if c in neighbors)
        mass = math.fsum(remaining.pop(c) for c in members)
        supercells.append(SuperCell(tuple(members), mass))
        masses.append(mass)
        if math.fsum(masses) >= cutoff - SUPERCELL_MASS_TOLERANCE:
            break
    return SuperCellSet(tuple(supercells), math.fsum(masses))


def _plogp(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return p * math.log2(p)


def spatial_entropy(dist: CellDistribution, grid: CellGrid, d: DistanceKm,
                    renormalize: bool = False) -> ConfidenceScore:
    supercell_set = build_supercells(dist, grid, d)
    masses = supercell_set.masses
    if renormalize:
        masses = [mass / supercell_set.cumulative_mass for mass in masses]
    value = max(0.0, -math.fsum(_plogp(mass) for mass in masses))
    return ConfidenceScore(value, Orientation.LOWER, Method.SE, float(d))


def prediction_density(dist: CellDistribution, grid: CellGrid, d: DistanceKm) -> ConfidenceScore:
    check_binding(dist, grid)
    neighbors = grid.cells_within(argmax_cell(dist), d)
    value = math.fsum(p for cell_id, p in dist.entries.items() if cell_id in neighbors)
    return ConfidenceScore(min(1.0, value), Orientation.HIGHER, Method.PD, float(d))


def softmax_response(dist: CellDistribution) -> ConfidenceScore:
    return ConfidenceScore(dist.entries[argmax_cell(dist)], Orientation.HIGHER, Method.SR)


def mc_variance(mc_dists) -> ConfidenceScore:
    mc_dists = list(mc_dists)
    if len(mc_dists) < 2:
        raise InsufficientPassesError(f'{len(mc_dists)} mc pass(es), need at least 2')
    grid_refs = {mc_dist.grid_ref for mc_dist in mc_dists}
    if len(grid_refs) > 1:
        raise GridMismatchError(f'mc passes bound to different grids: {sorted(grid_refs)}')
    responses = np.array([softmax_response(mc_dist).value for mc_dist in mc_dists])
    return ConfidenceScore(max(0.0, float(np.var(responses))), Orientation.LOWER, Method.MC)


def accepts(value: float, orientation: Orientation, theta: float) -> bool:
    if orientation is Orientation.HIGHER:
        return value >= theta
    return value <= theta


def gate(score: ConfidenceScore, theta: float) -> int:
    """1 to predict, 0 to abstain; a score equal to theta is accepted."""
    return int(accepts(score.value, score.orientation, theta))


def ideal_rank(labels) -> list:
    labels = [int(label) for label in labels]
    return [i for i, label in enumerate(labels) if label == 1] + \
        [i for i, label in enumerate(labels) if label != 1]


def random_draws(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).random(n)


def random_select(records, p_accept: float, seed: int) -> list:
    if not 0.0 <= p_accept <= 1.0:
        raise UsageError(f'p_accept must lie in [0, 1], got {p_accept}')
    draws = random_draws(len(records), seed)
    return [int(u < p_accept) for u in draws]


def score_distribution(record, grid: CellGrid, method: Method, d: DistanceKm | None = None,
                       renormalize: bool = False) -> ConfidenceScore:
    if method is Method.SE:
        return spatial_entropy(record.dist, grid, d, renormalize=renormalize)
    if method is Method.PD:
        return prediction_density(record.dist, grid, d)
    if method is Method.SR:
        check_binding(record.dist, grid)
        return softmax_response(record.dist)
    if method is Method.MC:
        if record.mc_dists is None:
            raise MissingPassesError([record.image_id])
        return mc_variance(record.mc_dists)
    raise UsageError(f'method {method.value} is not computed from a distribution')


def require_passes(records):
    missing = [record.image_id for record in records if record.mc_dists is None]
    if missing:
        raise MissingPassesError(missing)
