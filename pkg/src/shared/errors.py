"""Exception types shared by all packages."""


class CylsepError(Exception):
    """Base class for every error raised by this project."""


class MalformedTargetError(CylsepError, ValueError):
    pass


class NoFeasibleRadiusError(CylsepError, RuntimeError):
    pass


class MarginTooSmallError(CylsepError, RuntimeError):
    pass


class ProgramError(CylsepError, ValueError):
    pass


class GraphSpecError(CylsepError, ValueError):
    pass


class OracleCapError(CylsepError, ValueError):
    pass


class NonUniformInstanceError(CylsepError, ValueError):
    pass


class RegionSaturated(CylsepError, ArithmeticError):
    """The thermal arcsin argument exceeds 1: every polar angle is simulatable."""

    def __init__(self, ratio: float):
        super().__init__(f"Region saturated (arcsin argument {ratio:.6g} > 1)")
        self.ratio = ratio


class AdmissionRejected(CylsepError):
    """Instance lies outside the proven classically-simulatable regime."""

    def __init__(self, report):
        violators = ", ".join(str(n) for n in report.violating_nodes)
        super().__init__(f"Admission rejected for nodes: {violators}")
        self.report = report


class BudgetExceededError(CylsepError, RuntimeError):
    """A sampled operator left its recorded cylinder or produced an invalid probability."""
