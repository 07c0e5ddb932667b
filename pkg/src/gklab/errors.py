"""Exception types shared across the package."""


class GklabError(Exception):
    """Base class for package-specific failures."""


class CapacityError(GklabError):
    """Raised when exact enumeration would exceed the configured cap.

    Carries the cap so callers (CLI auto mode) can report it and fall back
    to convolution mode.
    """

    def __init__(self, cap, emitted=None):
        self.cap = int(cap)
        self.emitted = emitted
        msg = f"enumeration exceeded the capacity cap of {self.cap} eigenvalues"
        if emitted is not None:
            msg += f" (emitted {emitted})"
        super().__init__(msg)


class ConfigError(GklabError):
    """Invalid run configuration (bad field, missing value, short list)."""


class RangeError(GklabError):
    """A binned measure does not extend far enough for the requested query."""
