"""Exception types shared across the package."""


class TecfidError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(TecfidError, ValueError):
    """Operands have incompatible shapes or dimensions."""


class NotHermitianError(TecfidError, ValueError):
    """Matrix fails the Hermiticity check beyond tolerance."""

    def __init__(self, deviation: float, tol: float):
        self.deviation = float(deviation)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not Hermitian: max |A - A^dag| = {deviation:.3e} > {tol:.3e}"
        )


class NotUnitaryError(TecfidError, ValueError):
    """Matrix fails the unitarity check beyond tolerance."""

    def __init__(self, deviation: float, tol: float):
        self.deviation = float(deviation)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not unitary: max |U^dag U - I| = {deviation:.3e} > {tol:.3e}"
        )


class NotUnitVectorError(TecfidError, ValueError):
    """Vector norm differs from 1 beyond tolerance."""


class NoConvergenceError(TecfidError, ArithmeticError):
    """An iterative kernel failed to converge."""


class OutOfRangeError(TecfidError, ValueError):
    """Scalar parameter outside its admissible interval."""


class BadIntervalError(TecfidError, ValueError):
    """Energy interval or time parameter is malformed (e.g. e_max < e_min, t <= 0)."""


class ZeroFidelityError(TecfidError, ZeroDivisionError):
    """Optimal weight vector is undefined because the fidelity vanishes."""


class UnsupportedDimensionError(TecfidError, ValueError):
    """Requested dimension is outside the supported range."""


class ChannelParseError(TecfidError, ValueError):
    """Channel file is syntactically or structurally malformed."""


class InvalidChannelError(TecfidError, ValueError):
    """Kraus set violates trace preservation (or another physical constraint)."""
