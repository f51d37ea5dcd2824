"""Exception hierarchy for the whole toolkit.

Everything raised on purpose derives from :class:`Error`, so callers (and the
command line front-end, which maps error classes to stable exit codes) can
catch one base type.
"""


class Error(Exception):
    """Base class for all toolkit errors."""


# --- audio / signal ---------------------------------------------------------

class MalformedWav(Error):
    """Input bytes are not a readable RIFF/WAVE container."""


class UnsupportedEncoding(Error):
    """WAV uses a codec, bit depth or channel count we do not decode."""


class EmptyAudio(Error):
    """Decoded audio has fewer than 2 frames."""


class DegenerateSignal(Error):
    """Constant signal: zero standard deviation, z-score undefined."""


# --- decomposition ----------------------------------------------------------

class TooShort(Error):
    """Sequence is shorter than the operation requires."""


class InsufficientKnots(Error):
    """Fewer than 2 spline knots."""


class InsufficientExtrema(Error):
    """Fewer than 2 maxima or 2 minima: no envelope can be built."""


# --- classifiers ------------------------------------------------------------

class SingleClassData(Error):
    """Training data does not contain at least 2 rows of each class."""


class DimensionMismatch(Error):
    """Feature row length differs from what the model was trained on."""


class NonFiniteFeature(Error):
    """NaN or infinity in a feature row."""


# --- evaluation -------------------------------------------------------------

class TooFewPerClass(Error):
    """A class has fewer members than the requested fold count."""


class LengthMismatch(Error):
    """Parallel label sequences differ in length."""


class Empty(Error):
    """No elements to evaluate."""


class EmptyMatrix(Error):
    """Confusion matrix with zero total count."""


class SingleClassLabels(Error):
    """ROC needs both classes present."""


# --- batch front-end --------------------------------------------------------

class MissingFile(Error):
    """Referenced file does not exist."""


class BadHeader(Error):
    """CSV header differs from the documented format."""


class BadLabel(Error):
    """Label field is not 0 or 1."""


class EmptyManifest(Error):
    """Manifest has a header but no data rows."""


class NoUsableAudio(Error):
    """Every file in the corpus failed to process."""


class CacheFormatError(Error):
    """Feature cache CSV does not match the documented format."""
