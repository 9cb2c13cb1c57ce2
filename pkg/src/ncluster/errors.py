"""Exception types shared across the package."""


class NClusterError(Exception):
    """Base class for all library errors."""


class TowerMismatch(NClusterError):
    """Arithmetic between scalars at different tower levels."""


class NotInvertible(NClusterError):
    """Inversion of a non-invertible scalar."""


class NotInvertible1PlusM(NotInvertible):
    """1 + M is singular at a quad vertex; the X-mutation is undefined."""


class NotInvertible1PlusA(NotInvertible):
    """1 + A_i is singular; the A-mutation is undefined."""


class NonGenericAtStep(NClusterError):
    """A pentagon/composite check hit a non-generic configuration."""

    def __init__(self, step, message=""):
        self.step = step
        super().__init__(message or f"non-generic input at step {step}")


class MalformedGraph(NClusterError):
    """Dart data does not describe a bipartite ribbon graph."""


class Disconnected(NClusterError):
    """Operation requires a connected graph."""


class GluingMismatch(NClusterError):
    """Triangulation sides cannot be glued as requested."""


class NotAQuad(NClusterError):
    """The supplied vertices do not form a two-by-two move pattern."""


class NotBivalent(NClusterError):
    """Vertex shrink requested at a vertex of valency != 2."""


class NoTorusData(NClusterError):
    """Operation requires per-dart displacement data."""


class AmbientMismatch(NClusterError):
    """Subspaces live in different ambient dimensions."""


class NotGeneric(NClusterError):
    """A flag configuration fails the required genericity."""


class NotASnake(NClusterError):
    """A vertex path is not a monotone snake."""


class BadMonodromySigns(NClusterError):
    """Triangle bundle violates the +1/-1 vertex sign invariants."""


class NotClosed(NClusterError):
    """A walk handed to monodromy is not a closed edge path."""


class DegenerateConfig(NClusterError):
    """Line configuration is degenerate (coincident or collinear lines)."""


class DegeneratePair(NClusterError):
    """A flag pair is not in general position."""


class ConstraintViolated(NClusterError):
    """A precondition constraint (e.g. abc = 1) fails at the given point."""


class DartNotAtVertex(NClusterError):
    """A chord refers to darts that are not at the given vertex."""


class GraphMismatch(NClusterError):
    """Bundle and loop chain live on different graphs."""


class Unbalanced(NClusterError):
    """Bipartite graph has no perfect matching for parity reasons."""


class NotCircular(NClusterError):
    """A map of zig-zag classes is not circular-order preserving."""


class NotMinimalWarning(UserWarning):
    """Commutation check invoked on a non-minimal torus graph."""


class UnknownSuite(NClusterError):
    """CLI suite name is not registered."""


class BadConfig(NClusterError):
    """CLI suite configuration is invalid."""


class ParseError(NClusterError):
    """Malformed JSON input."""
