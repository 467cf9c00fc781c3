from __future__ import annotations

import math
import os
import shutil
import tempfile
import unittest
from dataclasses import dataclass

from geosel.errors import GridTooSmallError
from geosel.errors import UsageError
from geosel.geodesy import gcd
from geosel.selection import build_supercells
from geosel.selection import prediction_density
from geosel.selection import spatial_entropy
from geosel.synth import generate_corpus
from geosel.synth import SynthSpec
from geosel.writer import write_labels
from geosel.writer import write_predictions
from tests.fixtures import lattice_grid
from tests.fixtures import make_grid


class Test_Synth(unittest.TestCase):
    def setUp(self):
        self.test_dir = tempfile.mkdtemp()
        self.grid = lattice_grid()

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_spec_validation(self):
        @dataclass
        class TestCase:
            name: str
            kwargs: dict

        testcases = [
            TestCase(name='negative_count', kwargs={'n_localizable': -1, 'n_nonlocalizable': 1}),
            TestCase(name='zero_concentration', kwargs={'n_localizable': 1, 'n_nonlocalizable': 1,
                                                        'concentration': 0.0}),
            TestCase(name='zero_scale', kwargs={'n_localizable': 1, 'n_nonlocalizable': 1, 'scale_km': 0.0}),
            TestCase(name='one_region', kwargs={'n_localizable': 1, 'n_nonlocalizable': 1, 'n_regions': 1}),
            TestCase(name='one_mc_pass', kwargs={'n_localizable': 1, 'n_nonlocalizable': 1, 'mc_passes': 1}),
        ]

        for case in testcases:
            with self.assertRaises(UsageError, msg=case.name):
                SynthSpec(**case.kwargs)

    def test_planted_structure(self):
        d = 25.0
        records, labels = generate_corpus(SynthSpec(200, 200, scale_km=d, seed=3), self.grid)
        self.assertEqual(len(records), 400)
        self.assertEqual(sum(labels.values()), 200)
        self.assertEqual([record.image_id for record in records], sorted(labels))
        for record in records:
            entries = record.dist.entries
            top = min(entries, key=lambda c: (-entries[c], c))
            if labels[record.image_id]:
                self.assertLessEqual(gcd(self.grid.cell_center(top), record.truth), d / 4 + 1e-6)
            else:
                self.assertEqual(len(entries), 5)
                for c in set(entries) - {top}:
                    self.assertNotIn(c, self.grid.cells_within(top, d))
                self.assertGreater(gcd(self.grid.cell_center(top), record.truth), 1.75 * d)

    def test_infinite_concentration(self):
        records, labels = generate_corpus(SynthSpec(50, 0, concentration=math.inf, seed=1), self.grid)
        for record in records:
            self.assertEqual(len(record.dist), 1)
            self.assertEqual(prediction_density(record.dist, self.grid, 25.0).value, 1.0)

    def test_dispersed_entropy(self):
        records, _ = generate_corpus(SynthSpec(0, 50, seed=2), self.grid)
        for record in records:
            supercells = build_supercells(record.dist, self.grid, 25.0)
            # four of five near-equal regions stay below the cutoff
            self.assertEqual(len(supercells), 5)
            masses = supercells.masses
            expected = -math.fsum(m * math.log2(m) for m in masses)
            actual = spatial_entropy(record.dist, self.grid, 25.0).value
            self.assertAlmostEqual(actual, expected, places=12)
            self.assertGreater(actual, 2.0)

    def test_mc_passes(self):
        records, _ = generate_corpus(SynthSpec(10, 10, mc_passes=4, seed=5), self.grid)
        for record in records:
            self.assertEqual(len(record.mc_dists), 4)
            for mc_dist in record.mc_dists:
                self.assertEqual(set(mc_dist.entries), set(record.dist.entries))

    def test_grid_too_small(self):
        grid = make_grid([(0, 0), (0, 0.1), (0, 0.2), (10, 10)])
        with self.assertRaises(GridTooSmallError):
            generate_corpus(SynthSpec(1, 1), grid)

    def test_same_seed_same_files(self):
        spec = SynthSpec(30, 30, mc_passes=2, seed=9)
        contents = []
        for run in range(2):
            records, labels = generate_corpus(spec, self.grid)
            predictions = os.path.join(self.test_dir, f'p{run}.tsv')
            label_file = os.path.join(self.test_dir, f'l{run}.csv')
            write_predictions(records, self.grid.grid_id, predictions)
            write_labels(labels, label_file)
            with open(predictions) as p, open(label_file) as lf:
                contents.append((p.read(), lf.read()))
        self.assertEqual(contents[0], contents[1])
        other, _ = generate_corpus(SynthSpec(30, 30, mc_passes=2, seed=10), self.grid)
        self.assertNotEqual([r.dist for r in other], [r.dist for r in generate_corpus(spec, self.grid)[0]])

