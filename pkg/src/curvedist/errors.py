"""Exception taxonomy for the whole pipeline."""


class CurveDistError(Exception):
    """Base class for all library errors."""


# polycore
class DegreeDropped(CurveDistError):
    """Leading coefficient of a resultant operand vanishes identically."""


class IllConditionedDivisor(CurveDistError):
    """Euclidean division by a polynomial whose leading coefficient is too small."""


# rootfind
class NoConvergence(CurveDistError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class Unbounded(CurveDistError):
    """A pole lies inside the closed maximization domain."""


# epsgeo
class ExhaustedCandidates(CurveDistError):
    """Ran out of abscissae while hunting for simple eps-points."""


# paramalg
class WrongDimension(CurveDistError):
    def __init__(self, dim):
        super().__init__(f"linear system nullspace has dimension {dim}, expected 2")
        self.dim = dim


class CannotSeparate(CurveDistError):
    """Perturbation failed to make a pencil generator coprime with f at infinity."""


class NotEpsRational(CurveDistError):
    """The cluster multiplicities fail the genus-zero test."""


class Degenerate(CurveDistError):
    """Content of a division quotient depends on the pencil parameter."""


class QuotientDegreeUnexpected(CurveDistError):
    """Division quotient does not have the expected degree 1."""


class DegenerateParametrization(CurveDistError):
    """Implicitization resultant vanishes identically."""


# hausdorff
class ZeroTangent(CurveDistError):
    """The parametrization has an identically zero tangent."""


class OutsideDomain(CurveDistError):
    """Evaluation requested at a pole of the parametrization."""


class PoleCollision(CurveDistError):
    """A denominator root of R1 is also a pole of R2."""


class UnboundedBound(CurveDistError):
    """A required supremum is infinite."""


class SingularFootpoint(CurveDistError):
    """Gradient too small to define a normal line."""


class NotParallel(CurveDistError):
    """Asymptote direction matching between input and output curves failed."""


class EmptyCurve(CurveDistError):
    """No real points were found on any scanned lattice line."""


class NoLimit(CurveDistError):
    """A coefficient-wise limit at infinity does not exist."""


class NoFallbackWorks(CurveDistError):
    """Every fallback direction failed at some anomalous point."""


class BadFileFormat(CurveDistError):
    """A curve, parametrization, or manifest file failed to parse."""
