"""Exception hierarchy shared by every stage of the pipeline."""


class FxNetError(ValueError):
    """Base class for all fxnet errors."""


class ParseError(FxNetError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(FxNetError):
    pass


class MissingDataError(FxNetError):
    pass


class UnrecoverableColumnError(FxNetError):
    pass


class UnknownCurrencyError(FxNetError):
    pass


class InsufficientDataError(FxNetError):
    pass


class DegenerateInputError(FxNetError):
    pass


class UndefinedNormalizationError(FxNetError):
    pass


class UsageError(FxNetError):
    pass


class ConsistencyError(FxNetError):
    pass


class PipelineError(FxNetError):
    """A stage failure tagged with the (base, kind, stage) it happened in."""

    def __init__(self, cause, base=None, kind=None, stage=None):
        self.cause = cause
        self.base = base
        self.kind = kind
        self.stage = stage
        where = ", ".join(
            f"{k}={v}" for k, v in (("base", base), ("kind", kind), ("stage", stage)) if v is not None
        )
        super().__init__(f"[{where}] {cause}")
