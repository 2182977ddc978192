"""Exception hierarchy."""

__all__ = [
    "ActionAngleError",
    "ExpressionError",
    "ExpressionSyntaxError",
    "UnknownIdentifierError",
    "ArityError",
    "ExpressionDomainError",
    "IntegrationError",
    "StepLimitError",
    "EscapeError",
    "LatticeError",
    "NoReturnsFoundError",
    "IllConditionedError",
    "RankChangeError",
    "StaleLatticeError",
    "SectionError",
    "NewtonDivergenceError",
    "CriticalPointError",
    "ChartError",
    "ChartDomainError",
    "PointNotReachableError",
    "ActionInversionError",
    "GaugeFitError",
    "FiniteDifferenceStepError",
    "HypothesisError",
    "NonInvolutiveError",
    "ConfigError",
]


class ActionAngleError(Exception):
    """Base class for all errors raised by torchaa."""


# %% expressions
class ExpressionError(ActionAngleError):
    """Base class for expression parsing and evaluation errors."""


class _OffsetError(ExpressionError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class ExpressionSyntaxError(_OffsetError):
    """Malformed expression source."""


class UnknownIdentifierError(_OffsetError):
    """Identifier is neither a declared variable, a function nor a constant."""


class ArityError(_OffsetError):
    """Function called with the wrong number of arguments."""


class ExpressionDomainError(ExpressionError):
    """Elementary function evaluated outside of its domain."""


# %% integration
class IntegrationError(ActionAngleError):
    """Base class for flow integration failures."""


class StepLimitError(IntegrationError):
    """The integrator exhausted its step budget."""

    def __init__(self, max_steps: int, t_reached: float):
        super().__init__(
            f"step budget of {max_steps} exhausted at t = {t_reached:.6g}"
        )
        self.max_steps = max_steps
        self.t_reached = t_reached


class EscapeError(IntegrationError):
    """The trajectory left the bounding box."""

    def __init__(self, t_escape: float, point):
        super().__init__(f"trajectory left the bounding box at t = {t_escape:.6g}")
        self.t_escape = t_escape
        self.point = point


# %% lattice
class LatticeError(ActionAngleError):
    """Base class for period lattice failures."""


class NoReturnsFoundError(LatticeError):
    """Fewer lattice vectors than expected were found."""

    def __init__(self, message: str, coverage):
        super().__init__(message)
        self.coverage = coverage


class IllConditionedError(LatticeError):
    """Newton Jacobian of the return map is nearly rank deficient."""

    def __init__(self, sigma_ratio: float):
        super().__init__(
            f"flow Jacobian is ill-conditioned (sigma_min / sigma_max = {sigma_ratio:.3g})"
        )
        self.sigma_ratio = sigma_ratio


class RankChangeError(LatticeError):
    """A lattice vector could not be tracked along a continuation path."""

    def __init__(self, level, rank: int, message: str = ""):
        super().__init__(
            f"lattice rank {rank} could not be continued to J = {list(level)}"
            + (f": {message}" if message else "")
        )
        self.level = level
        self.rank = rank


class StaleLatticeError(LatticeError):
    """A lattice loop failed to close within tolerance."""

    def __init__(self, gap: float):
        super().__init__(f"lattice loop does not close (gap = {gap:.3g})")
        self.gap = gap


# %% section
class SectionError(ActionAngleError):
    """Base class for section construction failures."""


class NewtonDivergenceError(SectionError):
    """Gauss-Newton on F(z) = J did not converge at a grid node."""

    def __init__(self, node, residual: float):
        super().__init__(
            f"section Newton diverged at node {tuple(node)} (residual {residual:.3g})"
        )
        self.node = node
        self.residual = residual


class CriticalPointError(SectionError):
    """A critical point of the integral map was met."""

    def __init__(self, point, rank: int):
        super().__init__(f"critical point of rank {rank} encountered")
        self.point = point
        self.rank = rank


# %% chart
class ChartError(ActionAngleError):
    """Base class for chart failures."""


class ChartDomainError(ChartError):
    """Level value or action outside the trivialized patch."""


class PointNotReachableError(ChartError):
    """No flow parameter maps the section point onto the target point."""


class ActionInversionError(ChartError):
    """Newton failed while inverting the action map."""


class GaugeFitError(ChartError):
    """Gauge least-squares problem is underdetermined."""


class FiniteDifferenceStepError(ChartError):
    """Finite-difference step outside of the admissible range."""


# %% hypotheses
class HypothesisError(ActionAngleError):
    """A hypothesis of the construction does not hold."""


class NonInvolutiveError(HypothesisError):
    """The first integrals are not in involution."""

    def __init__(self, max_bracket: float):
        super().__init__(
            f"first integrals are not in involution (max |{{F, F}}| = {max_bracket:.3g})"
        )
        self.max_bracket = max_bracket


class ConfigError(ActionAngleError):
    """Invalid job configuration."""
