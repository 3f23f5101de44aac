"""moviedesc: build, curate and benchmark an aligned movie description corpus."""

from .intervals import TimeInterval, iou

__version__ = "0.1.0"

__all__ = ["TimeInterval", "iou", "__version__"]
