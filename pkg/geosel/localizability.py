# geosel: selective prediction for image geolocation
# Decides which predictions of a classification-based geolocation model
# are reliable at a distance scale d:
#   - partition the earth into cells from training coordinates
#   - score cell distributions (SE, PD, SR, MC, RANDOM, IDEAL)
#   - calibrate a threshold on validation data
#   - evaluate risk-coverage and split a dataset into L and N subsets
#
from __future__ import annotations

import logging
import os
import sys

from geosel.cellgrid import PartitionParams
from geosel.commands import cmd_benchmark
from geosel.commands import cmd_calibrate
from geosel.commands import cmd_evaluate
from geosel.commands import cmd_partition
from geosel.commands import cmd_score
from geosel.commands import cmd_split
from geosel.commands import cmd_synth
from geosel.commands import resolve_methods
from geosel.commands import resolve_scale
from geosel.commands import resolve_scales
from geosel.constants import DEFAULT_BENCHMARK_METHODS
from geosel.constants import DEFAULT_LOG_LEVEL
from geosel.constants import DEFAULT_SCORE_METHODS
from geosel.constants import EXIT_OK
from geosel.constants import LOG_ENV_VAR
from geosel.errors import GeoselError
from geosel.input import get_arguments
from geosel.selection import Method
from geosel.synth import SynthSpec

logger = logging.getLogger(__name__)


def log_level(name=None) -> int:
    """Level named by GEOSEL_LOG; unknown names fall back to WARNING."""
    if name is None:
        name = os.environ.get(LOG_ENV_VAR, DEFAULT_LOG_LEVEL)
    level = logging.getLevelName(name.strip().upper())
    if isinstance(level, int):
        return level
    return logging.getLevelName(DEFAULT_LOG_LEVEL)


def run_command(args):
    if args.command == 'partition':
        params = PartitionParams(args.min_count, args.max_count, args.max_depth)
        return cmd_partition(args.input, params, args.output)
    if args.command == 'score':
        return cmd_score(args.grid, args.input, resolve_methods(args.method, DEFAULT_SCORE_METHODS),
                         resolve_scales(args.scale_km), args.output,
                         seed=args.seed, renormalize=args.renormalize_se)
    if args.command == 'calibrate':
        return cmd_calibrate(args.grid, args.input, Method(args.method), resolve_scale(args.scale_km),
                             args.output, seed=args.seed, renormalize=args.renormalize_se)
    if args.command == 'evaluate':
        return cmd_evaluate(args.grid, args.input, resolve_methods(args.method, []),
                            resolve_scale(args.scale_km), args.rc_output, args.output,
                            theta=args.theta, calibration_files=args.calibration,
                            seed=args.seed, renormalize=args.renormalize_se)
    if args.command == 'split':
        return cmd_split(args.grid, args.input, Method(args.method), resolve_scale(args.scale_km),
                         args.output, args.rejected_output,
                         theta=args.theta, calibration_files=args.calibration,
                         seed=args.seed, renormalize=args.renormalize_se)
    if args.command == 'synth':
        spec = SynthSpec(
            n_localizable=args.n_localizable,
            n_nonlocalizable=args.n_nonlocalizable,
            concentration=args.concentration,
            scale_km=args.scale_km,
            n_regions=args.regions,
            mc_passes=args.mc_passes,
            seed=args.seed,
        )
        return cmd_synth(spec, args.grid, args.output, args.labels_output)
    if args.command == 'benchmark':
        return cmd_benchmark(args.grid, args.validation, args.input,
                             resolve_methods(args.method, DEFAULT_BENCHMARK_METHODS),
                             resolve_scales(args.scale_km), args.output,
                             seed=args.seed, renormalize=args.renormalize_se)
    raise ValueError(f'unknown command {args.command}')


def main(argv=None):
    logging.basicConfig(level=log_level(), format='%(levelname)s %(name)s: %(message)s')
    args = get_arguments(sys.argv[1:] if argv is None else argv)
    try:
        run_command(args)
    except GeoselError as e:
        logger.error('error[%s]: %s', e.error_class, e)
        sys.exit(e.exit_code)
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
