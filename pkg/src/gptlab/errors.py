"""Exception hierarchy for gptlab."""


class GptLabError(Exception):
    """Base class for all gptlab errors."""


class DimensionMismatch(GptLabError):
    pass


class InvalidParameter(GptLabError):
    pass


class NotPointed(GptLabError):
    pass


class NotGenerating(GptLabError):
    pass


class NumericallyDegenerate(GptLabError):
    """A float-mode rank or sign decision fell inside the tolerance band."""


class MixedScalarMode(GptLabError):
    pass


class TooLarge(GptLabError):
    pass


class TooSmall(GptLabError):
    pass


class IndexOutOfRange(GptLabError):
    pass


class KindMismatch(GptLabError):
    pass


class NotCubeSystem(GptLabError):
    pass


class InvalidState(GptLabError):
    pass


class NotAllowed(GptLabError):
    """Transformation fails the allowed-reversible criterion."""


class NotNeighboring(GptLabError):
    pass


class Lemma1Violation(GptLabError):
    """Two refiners of a sub-unit effect were not adjacent at its unit slot.

    This indicates a cone-arithmetic bug, not a mathematical possibility.
    """


class CertificateVerificationFailed(GptLabError):
    pass


class ArgumentStepFailed(GptLabError):
    """A step of a multi-step verification argument failed.

    Carries the failing step's name and the partial report built so far.
    """

    def __init__(self, step, report=None):
        super().__init__("argument step failed: %s" % step)
        self.step = step
        self.report = report


class DecompositionInconsistent(GptLabError):
    pass


class SearchBudgetExceeded(GptLabError):
    pass


class ControlNotReducible(GptLabError):
    pass


class TargetHasNoSymmetry(GptLabError):
    pass


class PreconditionUnmet(GptLabError):
    pass
