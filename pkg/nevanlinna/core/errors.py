from __future__ import annotations


class NevanlinnaError(Exception):
    """Base class for every error raised by the package."""


class MeasurePreconditionError(NevanlinnaError, ValueError):
    """Raised when a measure operation is applied outside its precondition."""


class UndecidableRestrictionError(NevanlinnaError):
    """Raised when a component cannot be classified against a hyperplane symbolically.

    Callers fall back to the numeric non-tangential limit estimate.
    """


class NonLebesgueRestrictionError(NevanlinnaError):
    """Raised when mass concentrated on a hyperplane is not a multiple of Lebesgue measure.

    Such a measure cannot represent a Herglotz-Nevanlinna function.
    """

    def __init__(self, axis: int, pole: float, detail: str) -> None:
        self.axis = axis
        self.pole = pole
        super().__init__(f"restriction to t_{axis} = {pole:g} is not of Lebesgue form: {detail}")


class EstimationFailedError(NevanlinnaError):
    """Raised when an extrapolated limit does not settle within tolerance."""


class ChartSeamError(NevanlinnaError, ValueError):
    """Raised when a torus point or component touches the seam of the chosen chart."""


class WitnessConstructionError(NevanlinnaError, ValueError):
    """Raised when a witness point cannot be built or fails its sign check."""


class MeasureSerializationError(NevanlinnaError):
    """Raised when a measure holds data without a JSON form, such as a callable density."""


class SceneError(NevanlinnaError, ValueError):
    """Raised for unreadable or inconsistent scene documents."""


class NonConvergenceError(NevanlinnaError):
    """Raised when a value is requested from a quadrature that did not converge."""
