"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Requested dimension exceeds the configured memory budget."""


class DegenerateSliceError(ValueError):
    """Conditioning outcome carries (effectively) zero probability mass."""


class InsufficientSamplesError(RuntimeError):
    """Too few post-selected samples to form a meaningful estimate."""

    def __init__(self, message, n_selected, n_total):
        super().__init__(message)
        self.n_selected = n_selected
        self.n_total = n_total


class SampleFormatError(ValueError):
    """A samples file violates the text or counts-document grammar."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
