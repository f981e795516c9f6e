"""Reference modulation formats: OOK, nonnegative M-PAM, DC-biased subcarrier QPSK."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BasisConfig, Constellation


@dataclass(frozen=True)
class BaselineKind:
    """Tagged reference format: 'OOK', 'PAM' (with order) or 'QPSK_SCM'."""

    tag: str
    order: int | None = None

    def __post_init__(self):
        if self.tag not in ("OOK", "PAM", "QPSK_SCM"):
            raise ValueError(f"unknown baseline tag {self.tag!r}")
        if self.tag == "PAM":
            m = self.order
            if m is None or m < 2 or (m & (m - 1)) != 0:
                raise ValueError(f"PAM order must be a power of two >= 2, got {m}")
        elif self.order is not None:
            raise ValueError(f"{self.tag} takes no order parameter")


def ook(symbol_period: float = 1.0) -> Constellation:
    """On-off keying {0, 1} on the DC basis; the reference for all power gains."""
    return Constellation("ook", BasisConfig.dc(symbol_period), np.array([[0.0], [1.0]]))


def pam(order: int, symbol_period: float = 1.0) -> Constellation:
    """Nonnegative M-PAM {0, 1, ..., M-1} on the DC basis, unit spacing."""
    BaselineKind("PAM", order)
    levels = np.arange(order, dtype=float)[:, None]
    return Constellation(f"pam{order}", BasisConfig.dc(symbol_period), levels)


def qpsk_scm(symbol_period: float = 1.0) -> Constellation:
    """Subcarrier QPSK with the minimal DC bias making the waveform nonnegative.

    The information-free bias is chosen as small as possible: each point
    (1, +/-1/2, +/-1/2) sits exactly on the three-dimensional cone boundary,
    s1 = sqrt(2)*||(s2, s3)|| = 1, and adjacent points are unit distance apart.
    """
    half = 0.5
    pts = np.array(
        [
            [1.0, -half, -half],
            [1.0, -half, half],
            [1.0, half, -half],
            [1.0, half, half],
        ]
    )
    return Constellation("qpsk-scm", BasisConfig.dc_quadrature(symbol_period), pts)


def make_baseline(kind: BaselineKind, symbol_period: float = 1.0) -> Constellation:
    """Construct the unit-minimum-distance constellation for a baseline kind."""
    if kind.tag == "OOK":
        return ook(symbol_period)
    if kind.tag == "PAM":
        return pam(kind.order, symbol_period)
    return qpsk_scm(symbol_period)
