"""Exception hierarchy shared by every engine."""


class InterpError(Exception):
    """Base class for all errors raised by propinterp."""


class ParseError(InterpError, ValueError):
    def __init__(self, message, text=None, pos=None):
        super().__init__(message)
        self.text = text
        self.pos = pos


class PreconditionError(InterpError, ValueError):
    """An operation was called with arguments violating its contract."""


class EvaluationError(InterpError, KeyError):
    def __init__(self, atom):
        super().__init__(atom)
        self.atom = atom

    def __str__(self):
        return f"valuation does not assign atom {self.atom!r}"


class ResourceLimitError(InterpError):
    """A configured resource guard (atoms, clauses, steps, nodes) was hit."""


class NotEntailedError(InterpError):
    """phi does not entail psi, so no interpolant exists.

    ``model`` satisfies phi and falsifies psi.
    """

    def __init__(self, model, message="no interpolant exists: phi does not entail psi"):
        super().__init__(message)
        self.model = dict(model)


class SatisfiableError(InterpError):
    """The conjunction to be refuted is satisfiable; ``model`` witnesses it."""

    def __init__(self, model, message="input is satisfiable", witness=None):
        super().__init__(message)
        self.model = dict(model)
        self.witness = witness


class NotDefinableError(InterpError):
    """The atom is not implicitly definable.

    ``model1`` and ``model2`` both satisfy phi, agree on sigma and disagree
    on the atom.
    """

    def __init__(self, model1, model2, atom):
        super().__init__(f"atom {atom!r} is not implicitly definable")
        self.model1 = dict(model1)
        self.model2 = dict(model2)
        self.atom = atom


class MalformedProofError(InterpError):
    pass
