from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from geosel.cellgrid import CellGrid
from geosel.constants import DEFAULT_CONCENTRATION
from geosel.constants import DEFAULT_SEED
from geosel.constants import DEFAULT_SYNTH_REGIONS
from geosel.constants import DEFAULT_SYNTH_SCALE_KM
from geosel.distribution import EvalRecord
from geosel.distribution import validate
from geosel.errors import GridTooSmallError
from geosel.errors import UsageError
from geosel.geodesy import destination
from geosel.geodesy import GeoPoint

logger = logging.getLogger(__name__)

# far cells sharing the tail of a concentrated record
_NOISE_CELLS = 4
# relative jitter between the regions of a dispersed record
_REGION_JITTER = 0.1
# log-normal noise of the mc passes
_MC_SIGMA_CONCENTRATED = 0.05
_MC_SIGMA_DISPERSED = 0.5


@dataclass(frozen=True)
class SynthSpec:
    n_localizable: int
    n_nonlocalizable: int
    concentration: float = DEFAULT_CONCENTRATION
    scale_km: float = DEFAULT_SYNTH_SCALE_KM
    n_regions: int = DEFAULT_SYNTH_REGIONS
    mc_passes: int = 0
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.n_localizable < 0 or self.n_nonlocalizable < 0:
            raise UsageError('record counts must be non-negative')
        if not self.concentration > 0:
            raise UsageError(f'concentration must be positive, got {self.concentration}')
        if not self.scale_km > 0 or math.isinf(self.scale_km):
            raise UsageError(f'planted scale must be positive and finite, got {self.scale_km}')
        if self.n_regions < 2:
            raise UsageError(f'need at least 2 dispersed regions, got {self.n_regions}')
        if self.mc_passes == 1 or self.mc_passes < 0:
            raise UsageError(f'mc passes must be 0 or at least 2, got {self.mc_passes}')

    @property
    def tail(self) -> float:
        return 1.0 / (1.0 + self.concentration)


class CorpusGenerator:
    def __init__(self, spec: SynthSpec, grid: CellGrid):
        self.spec = spec
        self.grid = grid
        self.ids = grid.ids
        self.rng = np.random.default_rng(spec.seed)
        self._check_dispersion()

    def _check_dispersion(self):
        chosen = self._spread_cells(range(len(self.ids)))
        if len(chosen) < self.spec.n_regions:
            raise GridTooSmallError(
                f'grid holds only {len(chosen)} cells mutually farther than '
                f'{self.spec.scale_km:g} km, {self.spec.n_regions} regions requested')

    def _spread_cells(self, positions):
        chosen = []
        blocked = set()
        for position in positions:
            cell_id = self.ids[position]
            if cell_id in blocked:
                continue
            chosen.append(cell_id)
            if len(chosen) == self.spec.n_regions:
                break
            blocked |= self.grid.cells_within(cell_id, self.spec.scale_km)
        return chosen

    def _pick(self, candidates, size):
        candidates = sorted(candidates)
        size = min(size, len(candidates))
        if size == 0:
            return []
        picked = self.rng.choice(len(candidates), size=size, replace=False)
        return [candidates[i] for i in sorted(picked)]

    def _jittered_truth(self, cell_id):
        return destination(
            self.grid.cell_center(cell_id),
            float(self.rng.uniform(0.0, 360.0)),
            float(self.rng.uniform(0.0, self.spec.scale_km / 4)),
        )

    def concentrated(self):
        spec = self.spec
        seed = self.ids[int(self.rng.integers(len(self.ids)))]
        local = self.grid.cells_within(seed, spec.scale_km)
        weights = {seed: 1.0}
        for cell_id in sorted(local - {seed}):
            weights[cell_id] = spec.tail * float(self.rng.random())
        noise = self._pick(set(self.ids) - local, _NOISE_CELLS)
        for cell_id in noise:
            weights[cell_id] = spec.tail * float(self.rng.random()) / len(noise)
        return weights, self._jittered_truth(seed)

    def dispersed(self):
        spec = self.spec
        regions = self._spread_cells(self.rng.permutation(len(self.ids)))
        if len(regions) < spec.n_regions:
            regions = self._spread_cells(range(len(self.ids)))
        weights = {cell_id: 1.0 + _REGION_JITTER * float(self.rng.random()) for cell_id in regions}
        predicted = min(weights, key=lambda cell_id: (-weights[cell_id], cell_id))
        far = set(self.ids) - self.grid.cells_within(predicted, 2 * spec.scale_km)
        if far:
            truth = self._jittered_truth(self._pick(far, 1)[0])
        else:
            center = self.grid.cell_center(predicted)
            truth = GeoPoint(-center.lat, center.lon + 180.0)
        return weights, truth

    def _distribution(self, weights):
        weights = {cell_id: w for cell_id, w in weights.items() if w > 0}
        total = math.fsum(weights.values())
        return validate({cell_id: w / total for cell_id, w in weights.items()}, self.grid)

    def _mc_passes(self, weights, sigma):
        passes = []
        cell_ids = sorted(weights)
        base = np.array([weights[cell_id] for cell_id in cell_ids])
        for _ in range(self.spec.mc_passes):
            noisy = base * np.exp(sigma * self.rng.standard_normal(len(base)))
            passes.append(self._distribution(dict(zip(cell_ids, noisy.tolist()))))
        return passes

    def generate(self):
        spec = self.spec
        kinds = np.array([1] * spec.n_localizable + [0] * spec.n_nonlocalizable)
        kinds = kinds[self.rng.permutation(len(kinds))]
        records = []
        labels = {}
        width = max(6, len(str(len(kinds))))
        for i, kind in enumerate(kinds.tolist()):
            image_id = f'synth-{i:0{width}d}'
            if kind:
                weights, truth = self.concentrated()
                sigma = _MC_SIGMA_CONCENTRATED
            else:
                weights, truth = self.dispersed()
                sigma = _MC_SIGMA_DISPERSED
            mc_dists = self._mc_passes(weights, sigma) if spec.mc_passes else None
            records.append(EvalRecord(image_id, truth, self._distribution(weights), mc_dists))
            labels[image_id] = kind
        logger.info('generated %d planted-localizable and %d planted-dispersed records',
                    spec.n_localizable, spec.n_nonlocalizable)
        return records, labels


def generate_corpus(spec: SynthSpec, grid: CellGrid):
    return CorpusGenerator(spec, grid).generate()
