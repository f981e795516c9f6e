"""Asymptotic optical power gains over OOK and union-bound error prediction.

Gain derivation (both measures follow the same scaling argument): at high SNR
two formats achieve the same error rate over the same channel when their
physical minimum distances are equal, so a unit-d_min constellation is scaled
by a common factor fixed by the noise.  At equal bit rate the symbol rate is
R_s = R_b / log2(M), and the physical optical power carries a 1/sqrt(T) =
sqrt(R_s) factor from the basis normalization.  The average power is then
proportional to Ebar * sqrt(R_b / log2 M) and the peak power to
Phat * sqrt(R_b / log2 M).  Referencing OOK (Ebar = 1/2, Phat = 1, M = 2):

    avg gain  = 10 log10( 0.5 * sqrt(log2 M) / Ebar )
    peak gain = 10 log10(       sqrt(log2 M) / Phat )

Positive values mean less optical power than OOK for the same error rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc
from scipy.spatial.distance import pdist

from .core import (
    Constellation,
    average_optical_coeff,
    mean_squared_norm,
    min_distance,
    peak_optical_coeff,
)

#: Tolerance on |d_min - 1| before the gain formulas refuse the input.
UNIT_DMIN_TOL = 1e-9


@dataclass(frozen=True)
class GainReport:
    """Power gains over OOK plus spectral efficiencies at requested power fractions."""

    name: str
    avg_gain_db: float
    peak_gain_db: float
    eta_at_K: dict[float, float] = field(default_factory=dict)


def qfunc(x):
    """Gaussian tail probability Q(x), computed via the complementary error function."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def _require_unit_dmin(c: Constellation) -> None:
    d = min_distance(c)
    if abs(d - 1.0) > UNIT_DMIN_TOL:
        raise ValueError(
            f"gains are defined on unit-minimum-distance constellations; "
            f"{c.name!r} has d_min = {d!r} (normalize_unit_dmin first)"
        )


def avg_power_gain_db(c: Constellation) -> float:
    """Asymptotic average optical power gain over OOK, in dB, at equal bit rate."""
    _require_unit_dmin(c)
    ebar = average_optical_coeff(c)
    return 10.0 * math.log10(0.5 * math.sqrt(math.log2(c.size)) / ebar)


def peak_power_gain_db(c: Constellation) -> float:
    """Asymptotic peak optical power gain over OOK, in dB, at equal bit rate."""
    _require_unit_dmin(c)
    phat = peak_optical_coeff(c)
    return 10.0 * math.log10(math.sqrt(math.log2(c.size)) / phat)


def predicted_ser(c: Constellation, sigma: float) -> float:
    """Union bound on the symbol error rate of minimum-distance detection.

    (1/M) * sum_i sum_{j != i} Q(d_ij / (2 sigma)); exact for two points.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    d = pdist(c.points)
    # each unordered pair appears in two of the per-symbol sums
    return float(2.0 * np.sum(qfunc(d / (2.0 * sigma))) / c.size)


def nearest_neighbor_ser(c: Constellation, sigma: float) -> float:
    """Dominant term of the union bound: only pairs at the minimum distance."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    d = pdist(c.points)
    dmin = d.min()
    n_min = int(np.sum(d <= dmin * (1.0 + 1e-12)))
    return float(2.0 * n_min * qfunc(dmin / (2.0 * sigma)) / c.size)


def gain_report(c: Constellation, ks: tuple[float, ...] = ()) -> GainReport:
    """Bundle both gains with spectral efficiencies at the requested K values."""
    from .spectral import spectral_efficiency

    etas = {float(k): spectral_efficiency(c, float(k)) for k in ks}
    return GainReport(c.name, avg_power_gain_db(c), peak_power_gain_db(c), etas)


def energy_per_bit(c: Constellation) -> float:
    """Mean electrical symbol energy per information bit (for SNR conversions)."""
    if c.size < 2:
        raise ValueError("energy per bit needs at least two points")
    return mean_squared_norm(c) / math.log2(c.size)
