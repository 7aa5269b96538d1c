"""Exception types that map onto CLI exit codes and solver failure modes."""


class ScenarioSchemaError(ValueError):
    """Scenario file violates the documented schema (CLI exit code 2)."""


class InfeasibleScenarioError(ValueError):
    """Scenario parses but describes an impossible system (CLI exit code 4)."""


class StateSpaceBudgetError(RuntimeError):
    """Joint DP state/action grid exceeds the configured budget (CLI exit code 3)."""


class InfeasibleActionError(ValueError):
    """A sleep action would drive a battery below empty."""
