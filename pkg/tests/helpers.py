"""Shared test utilities: point-set matching and small numeric oracles."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist


def match_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Max coordinate deviation between two point sets under optimal assignment.

    Robust against row-order differences (sorting near-equal coordinates can
    swap symmetric points between otherwise identical sets).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    assert a.shape == b.shape
    ri, ci = linear_sum_assignment(cdist(a, b))
    return float(np.abs(a[ri] - b[ci]).max())


def match_deviation_up_to_reflection(a: np.ndarray, b: np.ndarray) -> float:
    """Like :func:`match_deviation` but also allows the s2 -> -s2 isometry."""
    flip = np.ones(a.shape[1])
    flip[1:] = -1.0
    return min(match_deviation(a, b), match_deviation(a * flip, b))


def assert_points_match(a, b, tol: float, reflect: bool = False) -> None:
    dev = match_deviation_up_to_reflection(a, b) if reflect else match_deviation(a, b)
    assert dev <= tol, f"point sets differ by {dev:.3e} > {tol:.1e}"


def sample_admissible_points(rng: np.random.Generator, n: int, rmax: float = 5.0) -> np.ndarray:
    """Uniform points in the admissible 2-D cone sector of radius rmax."""
    radius = rmax * np.sqrt(rng.random(n))
    half_apex = np.arctan(1.0 / np.sqrt(2.0))
    ang = rng.uniform(-half_apex, half_apex, n)
    return np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])
