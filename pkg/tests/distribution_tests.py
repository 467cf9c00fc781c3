from __future__ import annotations

import math
import unittest
from dataclasses import dataclass

import numpy as np

from geosel.distribution import argmax_cell
from geosel.distribution import check_binding
from geosel.distribution import EvalRecord
from geosel.distribution import predict_location
from geosel.distribution import validate
from geosel.errors import EmptyDistributionError
from geosel.errors import GridMismatchError
from geosel.errors import InputFormatError
from geosel.errors import InsufficientPassesError
from geosel.errors import InvalidProbabilityError
from geosel.errors import ProbabilitySumError
from geosel.errors import UnknownCellError
from geosel.geodesy import GeoPoint
from tests.fixtures import make_grid


class Test_Distribution(unittest.TestCase):
    def setUp(self):
        self.grid = make_grid([(10, 20), (0, 0), (-30, 100)])

    def test_validate(self):
        @dataclass
        class TestCase:
            name: str
            input: dict
            expected: dict

        testcases = [
            TestCase(name='single_cell', input={0: 1.0}, expected={0: 1.0}),
            TestCase(name='within_tolerance', input={0: 0.5, 1: 0.5001},
                     expected={0: 0.5 / 1.0001, 1: 0.5001 / 1.0001}),
            TestCase(name='zero_entry_kept', input={2: 0.0, 1: 1.0}, expected={1: 1.0, 2: 0.0}),
            TestCase(name='string_keys', input={'1': 0.25, '0': 0.75}, expected={0: 0.75, 1: 0.25}),
        ]

        for case in testcases:
            dist = validate(case.input, self.grid)
            self.assertEqual(list(dist.entries), sorted(case.expected), case.name)
            for cell_id, p in case.expected.items():
                self.assertAlmostEqual(dist.entries[cell_id], p, places=12,
                                       msg='failed test {} expected {}, actual {}'.format(
                                           case.name, case.expected, dist.entries))
            self.assertEqual(math.fsum(dist.entries.values()), 1.0, case.name)
            self.assertEqual(dist.grid_ref, self.grid.grid_id)

    def test_validate_errors(self):
        @dataclass
        class TestCase:
            name: str
            input: dict
            expected: type

        testcases = [
            TestCase(name='sum_outside_tolerance', input={0: 0.5}, expected=ProbabilitySumError),
            TestCase(name='sum_above_tolerance', input={0: 0.6, 1: 0.6}, expected=ProbabilitySumError),
            TestCase(name='negative', input={0: 1.1, 1: -0.1}, expected=InvalidProbabilityError),
            TestCase(name='nan', input={0: float('nan')}, expected=InvalidProbabilityError),
            TestCase(name='infinite', input={0: float('inf')}, expected=InvalidProbabilityError),
            TestCase(name='unknown_cell', input={0: 0.5, 9: 0.5}, expected=UnknownCellError),
            TestCase(name='empty', input={}, expected=EmptyDistributionError),
        ]

        for case in testcases:
            with self.assertRaises(case.expected, msg=case.name):
                validate(case.input, self.grid)
        # the four input-side failures share one family, unknown cells do not
        self.assertTrue(issubclass(ProbabilitySumError, InputFormatError))
        self.assertFalse(issubclass(UnknownCellError, InputFormatError))

    def test_renormalized_sum_is_exact(self):
        rng = np.random.default_rng(0)
        grid = make_grid([(float(lat), 0.0) for lat in np.linspace(-80, 80, 40)])
        for _ in range(500):
            k = int(rng.integers(1, 41))
            weights = rng.random(k)
            weights = weights / weights.sum() * (1.0 + float(rng.uniform(-5e-5, 5e-5)))
            dist = validate(dict(enumerate(weights.tolist())), grid)
            self.assertEqual(math.fsum(dist.entries.values()), 1.0)
            self.assertTrue(all(p >= 0.0 for p in dist.entries.values()))

    def test_argmax_cell(self):
        @dataclass
        class TestCase:
            name: str
            input: dict
            expected: int

        testcases = [
            TestCase(name='single', input={0: 1.0}, expected=0),
            TestCase(name='larger_wins', input={0: 0.4, 1: 0.6}, expected=1),
            TestCase(name='tie_smallest_id', input={2: 0.5, 1: 0.5}, expected=1),
        ]

        for case in testcases:
            actual = argmax_cell(validate(case.input, self.grid))
            self.assertEqual(actual, case.expected, 'failed test {} expected {}, actual {}'.format(
                case.name, case.expected, actual))

    def test_predict_location(self):
        self.assertEqual(predict_location(validate({0: 1.0}, self.grid), self.grid), GeoPoint(10, 20))
        self.assertEqual(predict_location(validate({0: 0.3, 1: 0.7}, self.grid), self.grid), GeoPoint(0, 0))
        self.assertEqual(predict_location(validate({0: 0.5, 1: 0.5}, self.grid), self.grid), GeoPoint(10, 20))

    def test_grid_binding(self):
        other = make_grid([(10, 20), (0, 0), (-30, 101)])
        dist = validate({0: 1.0}, self.grid)
        check_binding(dist, self.grid)
        with self.assertRaises(GridMismatchError):
            check_binding(dist, other)
        with self.assertRaises(GridMismatchError):
            predict_location(dist, other)

    def test_eval_record_passes(self):
        dist = validate({0: 1.0}, self.grid)
        record = EvalRecord('a', GeoPoint(0, 0), dist, [dist, dist])
        self.assertEqual(len(record.mc_dists), 2)
        self.assertIsNone(EvalRecord('b', GeoPoint(0, 0), dist).mc_dists)
        with self.assertRaises(InsufficientPassesError):
            EvalRecord('c', GeoPoint(0, 0), dist, [dist])
        other = make_grid([(1, 1)])
        with self.assertRaises(GridMismatchError):
            EvalRecord('d', GeoPoint(0, 0), dist, [dist, validate({0: 1.0}, other)])
