"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for all cayleybench errors."""


class AlphabetError(WorkbenchError):
    """A word contains a letter outside the model's alphabet."""


class ModelMismatchError(WorkbenchError):
    """An operation mixed elements or functions from different group models."""


class ResourceBudgetError(WorkbenchError):
    """An enumeration exceeded its configured element budget."""


class GeodesicRangeError(WorkbenchError):
    """An element lies outside the enumerated ball it was looked up in."""


class PeripheralError(WorkbenchError):
    """A peripheral-structure descriptor does not apply to the model."""


class GridDimensionError(WorkbenchError):
    """Brute-force grid search requested on too many dimensions."""


class CacheIntegrityError(WorkbenchError):
    """A ball cache file is corrupt, truncated, or mismatched."""


class ConfigError(WorkbenchError):
    """An experiment configuration failed validation."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"config field '{field}': {message}")
