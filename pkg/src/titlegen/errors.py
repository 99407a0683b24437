"""Exception hierarchy shared by the title generator modules."""


class TitlegenError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TitlegenError):
    """Bad user input (empty document, unreadable text)."""


class ConfigError(TitlegenError):
    """Invalid configuration, missing stopword file, bad thresholds."""


class ConllUFormatError(TitlegenError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class TreeStructureError(TitlegenError):
    """A dependency tree violates the single-root / acyclic invariants."""


class ParserError(TitlegenError):
    """The dependency parser could not produce a tree."""


class ParserUnavailableError(ParserError):
    pass


class FixtureNotFoundError(ParserError):
    def __init__(self, key, text):
        super().__init__(f"no cached parse for {text!r} (key {key})")
        self.key = key
        self.text = text


class RenderError(TitlegenError):
    pass


class ScoreError(TitlegenError):
    pass
