"""Exception types shared across the package."""


class LeafdxError(Exception):
    """Base class for all package-specific errors."""


class DegenerateHistogramError(LeafdxError):
    """Histogram has a single occupied bin; no threshold separates it."""


class ChartNotFoundError(LeafdxError):
    """No colour chart could be located in the image."""


class AmbiguousChartError(LeafdxError):
    """More than one candidate chart quadrilateral survived validation."""


class DegeneratePatchSetError(LeafdxError):
    """Patch design matrix is rank deficient; the fit is underdetermined."""


class NoLeafStrokeError(LeafdxError):
    """Stroke set contains no leaf-labelled stroke."""


class InsufficientBackgroundError(LeafdxError):
    """Automatic background synthesis produced an empty marker."""


class EmptyMaskError(LeafdxError):
    """Operation requires at least one selected pixel."""


class TrainingStalledError(LeafdxError):
    """Optimiser hit its iteration cap before reaching the tolerance."""


class MalformedFileError(LeafdxError):
    """Serialised file cannot be parsed into the expected structure."""


class VersionMismatchError(MalformedFileError):
    """Serialised file carries an unsupported format version."""
