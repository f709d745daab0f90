"""Exception hierarchy shared by all modules."""


class DenormError(Exception):
    """Base class for all errors raised by denormkit."""


class InputError(DenormError, ValueError):
    """Bad user input (length mismatch, empty dataset, undecodable bytes...)."""


class SizeError(InputError):
    """A corpus is too small for the requested operation."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class RangeError(DenormError, ValueError):
    """A numeric argument lies outside the supported range."""


class FormatError(DenormError, ValueError):
    """A file does not follow its documented format."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.line = line


class DuplicateEntryError(FormatError):
    """A lexicon lists the same surface form twice."""


class TrainingDivergenceError(DenormError, ArithmeticError):
    """The training objective became non-finite."""

    def __init__(self, epoch):
        super().__init__(f"training objective is not finite at epoch {epoch}")
        self.epoch = epoch
