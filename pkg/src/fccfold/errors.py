"""Exception types raised across the package."""


class FoldError(Exception):
    """Base class for all package errors."""


class UnknownResidue(FoldError, ValueError):
    def __init__(self, code: str, position: int | None = None):
        self.code = code
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown residue {code!r}{where}")


class EmptySequence(FoldError, ValueError):
    pass


class SelfCollision(FoldError, ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"self-collision at residue {index}")


class NoHydrophobicResidues(FoldError, ValueError):
    pass


class LengthMismatch(FoldError, ValueError):
    pass


class ZeroReference(FoldError, ZeroDivisionError):
    pass


class EmptyRunSet(FoldError, ValueError):
    pass


class TooLong(FoldError, ValueError):
    pass


class InitialisationFailed(FoldError, RuntimeError):
    pass


class WalkStalled(FoldError, RuntimeError):
    pass


class ConfigError(FoldError, ValueError):
    pass
