class ContractViolation(RuntimeError):
    """A caller broke an operation's precondition."""


class InvariantError(RuntimeError):
    """A simulation result broke one of its accounting invariants."""
