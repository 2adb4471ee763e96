"""
hdrgamut - Error Types
======================

Exception hierarchy shared by the library and the command line. Anything a
user can fix by changing the input or the options derives from InputError;
the CLI maps those to exit code 1 and everything else to exit code 2.
"""

from typing import Optional


class HdrGamutError(Exception):
    """Root of all hdrgamut errors."""


class InputError(HdrGamutError):
    """Problem attributable to user-supplied data or options."""


class ImageFormatError(InputError):
    """Image file could not be decoded."""


class ConfigurationError(InputError):
    """Invalid pipeline configuration."""


class ToneMappingError(InputError):
    """Tone mapping cannot proceed on the given image."""


class MetricsError(InputError):
    """Images handed to a metric are incompatible."""


class GamutError(HdrGamutError, ValueError):
    """Invalid gamut definition or gamut query."""


class PipelineStageError(HdrGamutError):
    """Failure inside a pipeline stage, tagged with the stage name."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")

    @property
    def is_input_error(self) -> bool:
        return isinstance(self.cause, (InputError, FileNotFoundError))


def exit_code_for(error: Optional[BaseException]) -> int:
    """Exit code the CLI reports for an error (0 when there is none)."""
    if error is None:
        return 0
    if isinstance(error, PipelineStageError):
        return 1 if error.is_input_error else 2
    if isinstance(error, (InputError, FileNotFoundError)):
        return 1
    return 2
