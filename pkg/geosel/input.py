from __future__ import annotations

import argparse
from pathlib import Path

from geosel.constants import DEFAULT_CONCENTRATION
from geosel.constants import DEFAULT_MAX_COUNT
from geosel.constants import DEFAULT_MAX_DEPTH
from geosel.constants import DEFAULT_MIN_COUNT
from geosel.constants import DEFAULT_SEED
from geosel.constants import DEFAULT_SYNTH_REGIONS
from geosel.constants import DEFAULT_SYNTH_SCALE_KM
from geosel.selection import Method

METHOD_CHOICES = [method.value for method in Method]


def _add_io(parser, grid=True, output_help='output file'):
    if grid:
        parser.add_argument('--grid', type=Path, required=True,
                            help='grid file written by `geosel partition`')
    parser.add_argument('--input', type=Path, required=True, help='input file')
    parser.add_argument('--output', type=Path, required=True, help=output_help)


def _add_method(parser, repeatable, required=False):
    if repeatable:
        parser.add_argument('--method', action='append', choices=METHOD_CHOICES, required=required,
                            help='selection method, repeatable')
    else:
        parser.add_argument('--method', required=True, choices=METHOD_CHOICES,
                            help='selection method')


def _add_scoring(parser):
    parser.add_argument('--scale-km', dest='scale_km', type=float, action='append',
                        help='scale d in km, repeatable')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED,
                        help='seed of the random selector')
    parser.add_argument('--renormalize-se', dest='renormalize_se', default=False,
                        action='store_true',
                        help='renormalize super-cell masses before the entropy')


def _add_threshold(parser):
    parser.add_argument('--theta', type=float,
                        help='acceptance threshold; --theta=-inf accepts every record for any method '
                             '(the = form is needed for negative values)')
    parser.add_argument('--calibration', type=Path, action='append',
                        help='calibration file written by `geosel calibrate`, repeatable')


def _parse_arguments(args):
    parser = argparse.ArgumentParser(
        prog='geosel',
        description='Decide which geolocation predictions are reliable at a distance scale')
    subparsers = parser.add_subparsers(dest='command', required=True)

    partition = subparsers.add_parser('partition', help='build the cell grid')
    _add_io(partition, grid=False, output_help='grid file to write')
    partition.add_argument('--min-count', dest='min_count', type=int, default=DEFAULT_MIN_COUNT)
    partition.add_argument('--max-count', dest='max_count', type=int, default=DEFAULT_MAX_COUNT)
    partition.add_argument('--max-depth', dest='max_depth', type=int, default=DEFAULT_MAX_DEPTH)

    score = subparsers.add_parser('score', help='score predictions with confidence functions')
    _add_io(score, output_help='scores CSV to write')
    _add_method(score, repeatable=True)
    _add_scoring(score)

    calibrate = subparsers.add_parser('calibrate', help='learn the threshold on validation data')
    _add_io(calibrate, output_help='calibration file to write')
    _add_method(calibrate, repeatable=False)
    _add_scoring(calibrate)

    evaluate = subparsers.add_parser('evaluate', help='risk-coverage curves and report')
    _add_io(evaluate, output_help='report file to write')
    evaluate.add_argument('--rc-output', dest='rc_output', type=Path, required=True,
                          help='risk-coverage CSV to write')
    _add_method(evaluate, repeatable=True, required=True)
    _add_scoring(evaluate)
    _add_threshold(evaluate)

    split = subparsers.add_parser('split', help='split predictions into L and N subsets')
    _add_io(split, output_help='predictions file for the localizable subset')
    split.add_argument('--rejected-output', dest='rejected_output', type=Path, required=True,
                       help='predictions file for the non-localizable subset')
    _add_method(split, repeatable=False)
    _add_scoring(split)
    _add_threshold(split)

    synth = subparsers.add_parser('synth', help='generate a planted synthetic corpus')
    synth.add_argument('--grid', type=Path, required=True)
    synth.add_argument('--output', type=Path, required=True, help='predictions file to write')
    synth.add_argument('--labels-output', dest='labels_output', type=Path, required=True,
                       help='planted labels CSV to write')
    synth.add_argument('--n-localizable', dest='n_localizable', type=int, required=True)
    synth.add_argument('--n-nonlocalizable', dest='n_nonlocalizable', type=int, required=True)
    synth.add_argument('--concentration', type=float, default=DEFAULT_CONCENTRATION)
    synth.add_argument('--scale-km', dest='scale_km', type=float, default=DEFAULT_SYNTH_SCALE_KM,
                       help='planted scale in km')
    synth.add_argument('--regions', type=int, default=DEFAULT_SYNTH_REGIONS,
                       help='regions of a dispersed record')
    synth.add_argument('--mc-passes', dest='mc_passes', type=int, default=0)
    synth.add_argument('--seed', type=int, default=DEFAULT_SEED)

    benchmark = subparsers.add_parser('benchmark', help='calibrate and evaluate every method and scale')
    _add_io(benchmark, output_help='benchmark table CSV to write')
    benchmark.add_argument('--validation', type=Path, required=True,
                           help='validation predictions used for calibration')
    _add_method(benchmark, repeatable=True)
    _add_scoring(benchmark)

    return parser.parse_args(args)


def get_arguments(args):
    return _parse_arguments(args)
