"""Exception hierarchy shared by every module of the package."""


class ChaosHashError(Exception):
    """Base class for all errors raised by chaoshash."""


class DimensionError(ChaosHashError, ValueError):
    """Operands have incompatible or inadmissible lengths."""


class PreconditionError(ChaosHashError, ValueError):
    """An operation was called outside its domain."""


class EncodingError(ChaosHashError, ValueError):
    """A message byte cannot be represented in the requested encoding."""

    def __init__(self, position: int, value: int, mode: str):
        self.position = position
        self.value = value
        self.mode = mode
        super().__init__(f"byte 0x{value:02X} at position {position} is not valid in {mode} mode")


class ExhaustedStrategyError(ChaosHashError):
    """A single step was requested on a point whose strategy is empty."""


class DepthError(ChaosHashError, ValueError):
    """A strategy prefix is too short for the requested truncation depth."""


class HashFileError(ChaosHashError, OSError):
    def __init__(self, path, reason):
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}")
