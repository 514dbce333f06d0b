"""Gaze interaction engine: crossing pie menus vs dwell-time grid menus.

Submodules
----------
geometry    menu capacity formulas (vision angle, object size, radius, grid)
layout      positioned circular / grid menus and hit testing
engine      streaming gaze processor (calibration, blink filter, selection)
simulator   synthetic gaze streams and scripted agents
experiment  task scripts, trial reduction, summary statistics
service     line-delimited JSON session service for live front ends
cli         command line entry points
"""

from gazecross.geometry import GeometryConfig

__all__ = ["GeometryConfig"]
__version__ = "0.1.0"
