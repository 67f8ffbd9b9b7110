"""Numerical tolerances shared across the package.

Every tolerance has a default here; callers (and the CLI) may pass a
modified copy via ``dataclasses.replace``.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # |ad - bc| below this times max|coef|^2 means the quadruple is degenerate
    degenerate: float = 1e-12
    # classification band on |z| - 1, multipliers and the parabolic defect
    classify: float = 1e-9
    # |tr^2 - 4| below this times (1 + sum|coef|^2) counts as a double fixed point
    double_root: float = 1e-11
    # |lambda^n - 1| for rotation orders
    rotation: float = 1e-9
    # chordal distance for matching fixed point sets
    fixed_point_match: float = 1e-8
    # equality of multipliers / derivative ratios
    multiplier: float = 1e-9
    # slack admitted by the elliptic root inequality
    root_slack: float = 1e-12
    # residual of f o phi - psi o f on sample grids
    residual: float = 1e-10


DEFAULT = Tolerances()
