"""Exception hierarchy.  Each class carries a stable ``code`` used by the CLI."""


class LamplighterError(Exception):
    code = "error"
    exit_code = 1


class ExpressionSyntaxError(LamplighterError, ValueError):
    code = "syntax_error"
    exit_code = 3

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class MixedPicture(LamplighterError, ValueError):
    code = "mixed_picture"
    exit_code = 4


class ZeroInverse(LamplighterError, ZeroDivisionError):
    code = "zero_inverse"
    exit_code = 5


class WindowTooSmall(LamplighterError, ValueError):
    code = "window_too_small"
    exit_code = 5


class LevelTooSmall(LamplighterError, ValueError):
    code = "level_too_small"
    exit_code = 5


class LevelShrink(LamplighterError, ValueError):
    code = "level_shrink"
    exit_code = 5


class NotAFunction(LamplighterError, ValueError):
    """Raised when an operation needs a pure function (shift 0 only)."""

    code = "not_a_function"
    exit_code = 5


class Unsupported(LamplighterError, ValueError):
    code = "unsupported"
    exit_code = 6
