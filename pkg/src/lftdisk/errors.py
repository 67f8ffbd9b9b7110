class LFTError(Exception):
    """Base class for all errors raised by lftdisk."""


class DegenerateMap(LFTError):
    pass


class PoleAtPoint(LFTError):
    pass


class NotSelfMap(LFTError):
    pass


class WrongClass(LFTError):
    pass


class InvalidAffine(LFTError):
    pass


class OutsideDisk(LFTError):
    pass


class InvalidUnitRoot(LFTError):
    pass


class NotEmbeddable(LFTError):
    pass


class InconclusiveAtDepth(LFTError):
    pass


class EvaluationFailure(LFTError):
    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample


class ParseError(LFTError):
    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class UnknownMapName(LFTError):
    pass
