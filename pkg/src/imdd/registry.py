"""Built-in named formats: baselines plus the optimized two-dimensional sets.

Coordinates of the optimized formats are stored symbolically (square roots
evaluated at full double precision) rather than as transcribed decimals, so
regression tests compare against exact values.  All formats have unit minimum
distance.
"""

from __future__ import annotations

import math

import numpy as np

from .baselines import ook, pam, qpsk_scm
from .core import BasisConfig, Constellation

_S = math.sqrt(2.0 / 3.0)  # unit vector along the cone boundary: (_S, _C)
_C = 1.0 / math.sqrt(3.0)
_H3 = math.sqrt(3.0) / 2.0


def _two_dim(name: str, rows, symbol_period: float) -> Constellation:
    return Constellation(name, BasisConfig.dc_half_cosine(symbol_period), np.array(rows))


def t_avg_3(symbol_period: float = 1.0) -> Constellation:
    """Ternary set minimizing average optical power: apex plus both boundary rays."""
    return _two_dim("t-avg-3", [[0.0, 0.0], [_S, _C], [_S, -_C]], symbol_period)


def t_peak_3(symbol_period: float = 1.0) -> Constellation:
    """Ternary set minimizing peak optical power."""
    return _two_dim("t-peak-3", [[0.0, 0.0], [_H3, 0.5], [_H3, -0.5]], symbol_period)


def t_4(symbol_period: float = 1.0) -> Constellation:
    """Quaternary set optimal for both power measures (a rhombus of lattice points)."""
    return _two_dim("t-4", [[0.0, 0.0], [_S, _C], [_S, -_C], [2 * _S, 0.0]], symbol_period)


def t_avg_8(symbol_period: float = 1.0) -> Constellation:
    """8-ary set minimizing average optical power; a subset of the cone lattice."""
    rows = [
        [0.0, 0.0],
        [_S, _C],
        [_S, -_C],
        [2 * _S, 0.0],
        [2 * _S, 2 * _C],
        [2 * _S, -2 * _C],
        [3 * _S, _C],
        [3 * _S, -_C],
    ]
    return _two_dim("t-avg-8", rows, symbol_period)


def t_peak_8(symbol_period: float = 1.0) -> Constellation:
    """8-ary set minimizing peak optical power; not a lattice subset."""
    rows = [
        [0.0, 0.0],
        [_S, _C],
        [_S, -_C],
        [2 * _S, 0.0],
        [_S + _H3, 0.5 + _C],
        [_S + _H3, -0.5 - _C],
        [2 * _S + _H3, 0.5],
        [2 * _S + _H3, -0.5],
    ]
    return _two_dim("t-peak-8", rows, symbol_period)


_BUILDERS = {
    "ook": ook,
    "pam4": lambda T=1.0: pam(4, T),
    "qpsk-scm": qpsk_scm,
    "t-avg-3": t_avg_3,
    "t-peak-3": t_peak_3,
    "t-4": t_4,
    "t-avg-8": t_avg_8,
    "t-peak-8": t_peak_8,
}


def format_names() -> list[str]:
    """Names resolvable by :func:`get_format`, in presentation order."""
    return list(_BUILDERS)


def get_format(name: str, symbol_period: float = 1.0) -> Constellation:
    """Resolve a built-in format by name ('ook', 'pam4', 'qpsk-scm', 't-avg-3', ...)."""
    key = name.strip().lower()
    if key not in _BUILDERS:
        raise KeyError(f"unknown format {name!r}; known formats: {', '.join(_BUILDERS)}")
    return _BUILDERS[key](symbol_period)
