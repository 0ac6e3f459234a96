"""Exception hierarchy shared by all homsim modules."""


class HomsimError(Exception):
    """Base class for all errors raised by homsim."""


class GridTooNarrow(HomsimError):
    """Grid does not cover the pulse support; truncation guard violated."""


class NotNormalizable(HomsimError, ValueError):
    """Envelope carries no probability (identically zero)."""


class LengthMismatch(HomsimError, ValueError):
    """Array lengths are inconsistent with the grid."""


class GridMismatch(HomsimError, ValueError):
    """Two sampled modes live on incompatible grids."""


class AliasingRisk(HomsimError):
    """Requested grids cannot represent the pulse bandwidth (Nyquist)."""


class ZeroDensityInstant(HomsimError, ValueError):
    """Conditioning on a detection at a time where both envelopes vanish."""


class DegenerateWidth(HomsimError, ValueError):
    """Zero spectral width passed where a finite-width distribution is required."""


class QuadratureNotConverged(HomsimError):
    """Doubling the quadrature nodes changed the result beyond tolerance."""


class EmptyRange(HomsimError, ValueError):
    """Histogram range admits no bins."""


class TooFewEvents(HomsimError, ValueError):
    """Not enough recorded events for a statistical estimate."""
