from __future__ import annotations

import math

EARTH_RADIUS_KM = 6371.0088
MAX_GCD_KM = math.pi * EARTH_RADIUS_KM

# (origin, d) radius queries kept per grid
NEIGHBOR_CACHE_SIZE = 1024

# street, city, region, country, continent
DEFAULT_SCALES_KM = [1.0, 25.0, 200.0, 750.0, 2500.0]

# city scale; used when a command takes a single scale
DEFAULT_SCALE_KM = 25.0

DEFAULT_MIN_COUNT = 50
DEFAULT_MAX_COUNT = 1000
DEFAULT_MAX_DEPTH = 16

PROBABILITY_SUM_TOLERANCE = 1e-4
SUPERCELL_MASS_CUTOFF = 0.9
SUPERCELL_MASS_TOLERANCE = 1e-9
PROBABILITY_DIGITS = 9

DEFAULT_SEED = 0
DEFAULT_SCORE_METHODS = ['se', 'pd', 'sr']
DEFAULT_BENCHMARK_METHODS = ['se', 'pd', 'sr', 'random', 'ideal']
# IDEAL gates on the 1/0 localizability label
IDEAL_THRESHOLD = 1.0
DEFAULT_SYNTH_SCALE_KM = 25.0
DEFAULT_SYNTH_REGIONS = 5
DEFAULT_CONCENTRATION = 9.0

GRID_FORMAT_VERSION = 'geosel-grid/1'
PREDICTIONS_FORMAT_VERSION = 'geosel-predictions/1'
GRID_COLUMNS = ['cell_id', 'center_lat', 'center_lon', 'count', 'depth',
                'south', 'north', 'west', 'east']
SCORE_COLUMNS = ['image_id', 'method', 'd_km', 'score', 'orientation']
RC_COLUMNS = ['theta', 'coverage', 'risk']
BENCHMARK_COLUMNS = ['method', 'd_km', 'theta_star', 'accuracy', 'f1',
                     'optimal_risk', 'optimal_coverage']

LOG_ENV_VAR = 'GEOSEL_LOG'
DEFAULT_LOG_LEVEL = 'WARNING'

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT_FORMAT = 3
EXIT_CONSISTENCY = 4
EXIT_EMPTY_RESULT = 5
