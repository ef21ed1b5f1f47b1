"""Exception hierarchy shared by all grassfeed modules."""


class GrassfeedError(Exception):
    """Base class for every error raised by this package."""


class ConvergenceFailure(GrassfeedError, ArithmeticError):
    pass


class NotHermitian(GrassfeedError, ValueError):
    pass


class NoRoot(GrassfeedError, ArithmeticError):
    pass


class RankDeficient(GrassfeedError, ArithmeticError):
    pass


class ShapeMismatch(GrassfeedError, ValueError):
    pass


class DegenerateManifold(GrassfeedError, ValueError):
    """Raised when the manifold is a single point (m == n)."""


class UnsupportedOrder(GrassfeedError, ValueError):
    """Closed-form determinant moments are only tabulated for k <= 5."""


class InvalidParams(GrassfeedError, ValueError):
    pass


class DegenerateBeamforming(GrassfeedError, ValueError):
    """Beamforming with a single transmit antenna has no direction to quantize."""


class ConfigError(GrassfeedError, ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
