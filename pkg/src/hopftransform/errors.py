"""Exceptions raised by the toolkit."""


class PreconditionError(ValueError):
    """An input violates a mathematical hypothesis of the requested operation.

    ``hypothesis`` is a short machine-readable tag (``"non-torsion"``,
    ``"admissible-move"``, ...) that the CLI echoes in its error object.
    """

    def __init__(self, message, hypothesis="precondition"):
        super().__init__(message)
        self.hypothesis = hypothesis
