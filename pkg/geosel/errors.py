from __future__ import annotations

from geosel.constants import EXIT_CONSISTENCY
from geosel.constants import EXIT_EMPTY_RESULT
from geosel.constants import EXIT_INPUT_FORMAT
from geosel.constants import EXIT_USAGE


class GeoselError(Exception):
    """Base class; `error_class` is the token printed on the diagnostic stream."""
    error_class = 'input-format'
    exit_code = EXIT_INPUT_FORMAT


class UsageError(GeoselError):
    error_class = 'usage'
    exit_code = EXIT_USAGE


class InputFormatError(GeoselError, ValueError):
    error_class = 'input-format'
    exit_code = EXIT_INPUT_FORMAT

    def __init__(self, message, path=None, line=None):
        location = ''
        if path is not None:
            location = f'{path}:'
            if line is not None:
                location += f'{line}:'
            location += ' '
        super().__init__(f'{location}{message}')
        self.path = path
        self.line = line


class ConsistencyError(GeoselError):
    error_class = 'consistency'
    exit_code = EXIT_CONSISTENCY


class EmptyResultError(GeoselError):
    error_class = 'empty-result'
    exit_code = EXIT_EMPTY_RESULT


class InvalidCoordinateError(InputFormatError):
    pass


class InvalidProbabilityError(InputFormatError):
    pass


class ProbabilitySumError(InputFormatError):
    pass


class EmptyDistributionError(InputFormatError):
    pass


class InsufficientPassesError(InputFormatError):
    pass


class UnknownCellError(ConsistencyError, LookupError):
    def __init__(self, cell_id):
        super().__init__(f'unknown cell id {cell_id}')
        self.cell_id = cell_id


class GridMismatchError(ConsistencyError):
    pass


class MissingPassesError(ConsistencyError):
    def __init__(self, image_ids):
        super().__init__(
            f"records without mc passes: {', '.join(image_ids)}")
        self.image_ids = list(image_ids)


class MisalignedDecisionsError(ConsistencyError):
    pass


class GridTooSmallError(ConsistencyError):
    pass


class EmptyInputError(EmptyResultError):
    def __init__(self, what='input'):
        super().__init__(f'empty {what}')


class NoRetainedCellsError(EmptyResultError):
    def __init__(self, total, min_count):
        super().__init__(
            f'zero retained cells: every cell of the {total} points holds fewer than {min_count}')
        self.total = total
        self.min_count = min_count
