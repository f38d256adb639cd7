"""Exception types.  Messages start with a stable token so callers and
transcripts can match on the failure kind."""


class BsfeError(Exception):
    """Base class for library errors."""


class ShapeError(BsfeError, ValueError):
    def __init__(self, detail=""):
        super().__init__("shape" + (f": {detail}" if detail else ""))


class FieldError(BsfeError, ValueError):
    def __init__(self, detail=""):
        super().__init__("field" + (f": {detail}" if detail else ""))


class CircuitSyntaxError(BsfeError, ValueError):
    def __init__(self, line, detail):
        self.line = line
        super().__init__(f"line {line}: {detail}")


class CircuitStructureError(BsfeError, ValueError):
    """Cycle, undefined wire, or a malformed encoding."""


class ClassBoundExceeded(BsfeError, ValueError):
    def __init__(self, detail=""):
        super().__init__("class bound exceeded" + (f": {detail}" if detail else ""))


class ConsumedError(BsfeError, RuntimeError):
    def __init__(self):
        super().__init__("consumed")


class LedgerViolation(BsfeError, RuntimeError):
    def __init__(self, owner, stored, budget):
        self.owner, self.stored, self.budget = owner, stored, budget
        super().__init__(f"ledger violation: {owner} holds {stored} > budget {budget}")


class InsecureParameters(BsfeError, ValueError):
    def __init__(self, detail=""):
        super().__init__("insecure parameters" + (f": {detail}" if detail else ""))


class ParameterError(BsfeError, ValueError):
    def __init__(self, detail=""):
        super().__init__("parameter" + (f": {detail}" if detail else ""))


class InvalidLabels(BsfeError, ValueError):
    def __init__(self):
        super().__init__("invalid labels")


class BudgetExhausted(BsfeError, RuntimeError):
    def __init__(self):
        super().__init__("budget exhausted")


class Expired(BsfeError, RuntimeError):
    def __init__(self):
        super().__init__("expired")


class KeyDepleted(BsfeError, RuntimeError):
    def __init__(self):
        super().__init__("stateful key depleted")


class ScheduleError(BsfeError, RuntimeError):
    def __init__(self, detail=""):
        super().__init__("schedule" + (f": {detail}" if detail else ""))


class StreamReread(BsfeError, RuntimeError):
    def __init__(self):
        super().__init__("stream already consumed")
