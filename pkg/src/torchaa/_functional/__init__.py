"""Functional interface for the pipeline stages."""

__all__ = []

from ._analyze import analyze_system, AnalysisReport  # noqa

__all__.extend(["analyze_system", "AnalysisReport"])


from ._chart import action_angle_chart  # noqa

__all__.append("action_angle_chart")
