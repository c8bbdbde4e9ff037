"""Geometric TSP local-search laboratory."""

from .geometry import PNorm, Point, Point3, Segment, pt
from .tour import Instance, Tour

__all__ = ["PNorm", "Point", "Point3", "Segment", "pt", "Instance", "Tour"]
__version__ = "0.1.0"
