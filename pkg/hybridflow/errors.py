class HybridFlowError(Exception):
    """ Base class of every error raised by hybridflow. """


class DomainError(HybridFlowError, ValueError):
    pass


class ConfigurationError(HybridFlowError, ValueError):
    pass


class LayoutError(HybridFlowError, ValueError):
    pass


class MessageError(HybridFlowError, ValueError):
    pass


class GridError(HybridFlowError, ValueError):
    pass


class DegenerateFieldError(HybridFlowError, ValueError):
    pass


class PecletViolationError(HybridFlowError, ValueError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ParseError(HybridFlowError, ValueError):
    def __init__(self, diagnostics):
        """ diagnostics: list of (line number, message). Line 0 refers to the whole document. """
        self.diagnostics = list(diagnostics)
        super().__init__('\n'.join(f"line {n}: {msg}" for n, msg in self.diagnostics))


class DivergenceError(HybridFlowError, RuntimeError):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NonConvergenceError(HybridFlowError, RuntimeError):
    pass
