"""HTTP service wrapping the experiment harness."""

from .models import (
    ExperimentRequest,
    ExperimentResponse,
    HealthResponse,
    PlotRequest,
    PlotResponse,
)

__all__ = [
    "ExperimentRequest",
    "ExperimentResponse",
    "HealthResponse",
    "PlotRequest",
    "PlotResponse",
]
