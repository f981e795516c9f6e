"""Signal-space primitives for intensity-modulated direct-detection links.

The signal set lives in a low-dimensional space spanned by orthonormal basis
functions on one symbol interval [0, T): a rectangular DC function plus
optional cosine/sine subcarriers.  Nonnegativity of the synthesized waveform
restricts the usable vectors to a cone around the DC axis; everything in this
module is built around that admissibility constraint.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import pdist

SQRT2 = math.sqrt(2.0)

#: Default admissibility slack.  Optimizer iterates legitimately sit on the
#: cone boundary, so exact >= 0 would reject them on round-off alone.
DEFAULT_ADMISSIBILITY_TOL = 1e-12

#: Looser guard used when validating constellations at construction time;
#: accepted optimizer output is only required to be feasible to 1e-9.
CONSTRUCTION_TOL = 1e-9


class UnsupportedBasisError(ValueError):
    """Raised for signal dimensions or basis layouts this toolkit does not model."""


class DegenerateConstellationError(ValueError):
    """Raised when an operation needs at least two constellation points."""


class BasisKind(enum.Enum):
    """Orthonormal basis functions on [0, T), identified by their role.

    DC is the rectangular bias function; COS_HALF is a cosine at half the
    symbol rate (the two-dimensional space), COS_FULL/SIN_FULL are the
    quadrature pair at the symbol rate (the three-dimensional space).
    """

    DC = "DC"
    COS_HALF = "COS_HALF"
    COS_FULL = "COS_FULL"
    SIN_FULL = "SIN_FULL"

    @property
    def freq_multiple(self) -> float:
        """Subcarrier frequency as a multiple of the symbol rate 1/T."""
        return _FREQ_MULTIPLE[self]

    @property
    def is_sine(self) -> bool:
        return self is BasisKind.SIN_FULL


_FREQ_MULTIPLE = {
    BasisKind.DC: 0.0,
    BasisKind.COS_HALF: 0.5,
    BasisKind.COS_FULL: 1.0,
    BasisKind.SIN_FULL: 1.0,
}

# The three signal spaces with a known admissibility region.
_SUPPORTED_LAYOUTS = (
    (BasisKind.DC,),
    (BasisKind.DC, BasisKind.COS_HALF),
    (BasisKind.DC, BasisKind.COS_FULL, BasisKind.SIN_FULL),
)


@dataclass(frozen=True)
class BasisConfig:
    """Symbol period plus the ordered basis functions spanning the space."""

    symbol_period: float = 1.0
    kinds: tuple[BasisKind, ...] = (BasisKind.DC, BasisKind.COS_HALF)

    def __post_init__(self):
        if not self.symbol_period > 0:
            raise ValueError(f"symbol_period must be positive, got {self.symbol_period}")
        kinds = tuple(BasisKind(k) for k in self.kinds)
        object.__setattr__(self, "kinds", kinds)
        if not kinds or kinds[0] is not BasisKind.DC:
            raise UnsupportedBasisError("first basis function must be DC")
        if kinds not in _SUPPORTED_LAYOUTS:
            raise UnsupportedBasisError(
                f"unsupported basis layout {tuple(k.value for k in kinds)}; "
                f"supported: {[tuple(k.value for k in c) for c in _SUPPORTED_LAYOUTS]}"
            )

    @property
    def dim(self) -> int:
        return len(self.kinds)

    @classmethod
    def dc(cls, symbol_period: float = 1.0) -> "BasisConfig":
        """One-dimensional PAM space: rectangular DC function only."""
        return cls(symbol_period, (BasisKind.DC,))

    @classmethod
    def dc_half_cosine(cls, symbol_period: float = 1.0) -> "BasisConfig":
        """Two-dimensional space: DC plus a cosine at half the symbol rate."""
        return cls(symbol_period, (BasisKind.DC, BasisKind.COS_HALF))

    @classmethod
    def dc_quadrature(cls, symbol_period: float = 1.0) -> "BasisConfig":
        """Three-dimensional space: DC plus the quadrature pair at the symbol rate."""
        return cls(symbol_period, (BasisKind.DC, BasisKind.COS_FULL, BasisKind.SIN_FULL))

    def waveforms(self, tau: np.ndarray) -> np.ndarray:
        """Evaluate every basis function at fractional positions tau = t/T in [0, 1).

        Returns an array of shape (dim, len(tau)).
        """
        tau = np.asarray(tau, dtype=float)
        T = self.symbol_period
        rows = []
        for kind in self.kinds:
            if kind is BasisKind.DC:
                rows.append(np.full_like(tau, 1.0 / math.sqrt(T)))
            else:
                angle = 2.0 * math.pi * kind.freq_multiple * tau
                trig = np.sin(angle) if kind.is_sine else np.cos(angle)
                rows.append(math.sqrt(2.0 / T) * trig)
        return np.stack(rows)


def cone_margin(point: Sequence[float] | np.ndarray) -> float:
    """Signed slack of the nonnegativity cone: >= 0 iff the waveform is nonnegative.

    For a DC-only point this is simply its coordinate; otherwise it is
    s1 - sqrt(2)*||(s2, ..., sN)||, the minimum of the synthesized waveform
    scaled by sqrt(T).
    """
    p = np.asarray(point, dtype=float).ravel()
    if p.size == 0 or p.size > 3:
        raise UnsupportedBasisError(f"points must have 1 to 3 coordinates, got {p.size}")
    if p.size == 1:
        return float(p[0])
    return float(p[0] - SQRT2 * np.linalg.norm(p[1:]))


def cone_margins(points: np.ndarray) -> np.ndarray:
    """Vectorized :func:`cone_margin` over the rows of an (M, N) array."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] == 0 or pts.shape[1] > 3:
        raise UnsupportedBasisError(f"points must have 1 to 3 coordinates, got {pts.shape[1]}")
    if pts.shape[1] == 1:
        return pts[:, 0].copy()
    return pts[:, 0] - SQRT2 * np.linalg.norm(pts[:, 1:], axis=1)


def is_admissible(point, tol: float = DEFAULT_ADMISSIBILITY_TOL) -> bool:
    """Whether a signal vector synthesizes to a nonnegative waveform (within tol)."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return cone_margin(point) >= -tol


@dataclass(frozen=True, eq=False)
class Constellation:
    """A named set of signal vectors over a common basis.

    Rows of ``points`` are the signal vectors; the symbol label of row i is i.
    All points must be admissible and pairwise distinct.
    """

    name: str
    basis: BasisConfig
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-D array, got shape {pts.shape}")
        if pts.shape[0] < 1:
            raise ValueError("a constellation needs at least one point")
        if pts.shape[1] != self.basis.dim:
            raise ValueError(
                f"point dimension {pts.shape[1]} does not match basis dimension {self.basis.dim}"
            )
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if pts.shape[0] >= 2 and pdist(pts).min() == 0.0:
            raise ValueError("points must be pairwise distinct")
        margins = cone_margins(pts)
        if margins.min() < -CONSTRUCTION_TOL:
            bad = int(np.argmin(margins))
            raise ValueError(
                f"point {bad} of {self.name!r} is outside the admissible cone "
                f"(margin {margins[bad]:.3g})"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def labels(self) -> range:
        return range(self.size)

    def with_points(self, points: np.ndarray, name: str | None = None) -> "Constellation":
        return Constellation(self.name if name is None else name, self.basis, points)


def min_distance(c: Constellation) -> float:
    """Minimum pairwise Euclidean distance between constellation points."""
    if c.size < 2:
        raise DegenerateConstellationError("min_distance needs at least two points")
    return float(pdist(c.points).min())


def normalize_unit_dmin(c: Constellation) -> Constellation:
    """Rescale so the minimum pairwise distance is exactly one.

    The admissible cone is scale invariant, so this preserves admissibility.
    """
    return c.with_points(c.points / min_distance(c))


def average_optical_coeff(c: Constellation) -> float:
    """Mean first coordinate; the physical average optical power is this / sqrt(T).

    Only the DC basis function has a nonzero time integral, so with uniform
    symbols the time-averaged intensity is proportional to the mean of s1.
    """
    return float(np.mean(c.points[:, 0]))


def peak_optical_coeff(c: Constellation) -> float:
    """Largest per-symbol waveform maximum, scaled by sqrt(T).

    For each point the waveform supremum over the symbol interval is
    s1 + sqrt(2)*||(s2, ..., sN)|| since the subcarrier sweep covers [-1, 1].
    """
    pts = c.points
    if pts.shape[1] == 1:
        return float(pts[:, 0].max())
    return float((pts[:, 0] + SQRT2 * np.linalg.norm(pts[:, 1:], axis=1)).max())


def mean_squared_norm(c: Constellation) -> float:
    """Average squared Euclidean norm of the points (electrical energy scale)."""
    return float(np.mean(np.sum(c.points**2, axis=1)))


def synthesize_waveform(
    c: Constellation, symbols: Iterable[int], samples_per_symbol: int
) -> np.ndarray:
    """Sample the transmitted waveform for a symbol sequence.

    Samples are taken at t = (k + j/samples_per_symbol) * T, i.e. at the left
    edge of each sampling cell, matching the left-closed rectangular window of
    the basis functions so per-symbol extrema at t = kT are hit exactly.
    """
    if samples_per_symbol < 2:
        raise ValueError("samples_per_symbol must be at least 2")
    sym = np.asarray(list(symbols) if not isinstance(symbols, np.ndarray) else symbols)
    if sym.size and sym.dtype.kind not in "iu":
        raise ValueError(f"symbols must be integer indices, got dtype {sym.dtype}")
    sym = sym.astype(np.int64)
    if sym.size and (sym.min() < 0 or sym.max() >= c.size):
        raise ValueError(
            f"symbol index out of range: valid labels are 0..{c.size - 1}"
        )
    tau = np.arange(samples_per_symbol) / samples_per_symbol
    phi = c.basis.waveforms(tau)  # (dim, sps)
    return (c.points[sym] @ phi).ravel()


def canonicalize(c: Constellation) -> Constellation:
    """Canonical representative under the isometries that fix the 2-D cone.

    The only nontrivial such isometry is the reflection s2 -> -s2; it is
    applied iff it lexicographically reduces the sorted point list, and the
    points are then sorted by (s1, s2).
    """
    if c.dim != 2:
        raise UnsupportedBasisError("canonicalize is defined for 2-D constellations")

    def sorted_rows(pts: np.ndarray) -> np.ndarray:
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        return pts[order]

    direct = sorted_rows(c.points)
    reflected = sorted_rows(c.points * np.array([1.0, -1.0]))
    chosen = reflected if _lex_less(reflected, direct) else direct
    return c.with_points(chosen)


def _lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    return [tuple(row) for row in a] < [tuple(row) for row in b]


# ---------------------------------------------------------------------------
# JSON serialization
#
# Schema: {"name": str,
#          "basis": {"T": number, "kinds": ["DC", "COS_HALF" | ...]},
#          "points": [[numbers], ...]}
# Floats are emitted with repr precision (17 significant digits), which
# round-trips exactly.
# ---------------------------------------------------------------------------


class ConstellationParseError(ValueError):
    """JSON document does not match the constellation schema."""


def constellation_to_dict(c: Constellation) -> dict:
    return {
        "name": c.name,
        "basis": {"T": c.basis.symbol_period, "kinds": [k.value for k in c.basis.kinds]},
        "points": [[float(v) for v in row] for row in c.points],
    }


def constellation_to_json(c: Constellation, indent: int | None = 2) -> str:
    return json.dumps(constellation_to_dict(c), indent=indent)


def constellation_from_dict(doc: dict) -> Constellation:
    if not isinstance(doc, dict):
        raise ConstellationParseError("top-level JSON value must be an object")

    def require(container, key, kind, where):
        if key not in container:
            raise ConstellationParseError(f"missing field {where!r}")
        value = container[key]
        if not isinstance(value, kind):
            raise ConstellationParseError(
                f"field {where!r} must be {kind.__name__ if not isinstance(kind, tuple) else 'a number'}"
            )
        return value

    name = require(doc, "name", str, "name")
    basis_doc = require(doc, "basis", dict, "basis")
    T = require(basis_doc, "T", (int, float), "basis.T")
    kinds_doc = require(basis_doc, "kinds", list, "basis.kinds")
    kinds = []
    for i, k in enumerate(kinds_doc):
        try:
            kinds.append(BasisKind(k))
        except ValueError:
            raise ConstellationParseError(f"field 'basis.kinds[{i}]' has unknown kind {k!r}")
    try:
        basis = BasisConfig(float(T), tuple(kinds))
    except ValueError as exc:
        raise ConstellationParseError(f"invalid basis: {exc}")

    points_doc = require(doc, "points", list, "points")
    for i, row in enumerate(points_doc):
        if not isinstance(row, list):
            raise ConstellationParseError(f"field 'points[{i}]' must be a list of numbers")
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)):
                raise ConstellationParseError(f"field 'points[{i}][{j}]' must be a number")
    try:
        return Constellation(name, basis, np.array(points_doc, dtype=float))
    except ValueError as exc:
        raise ConstellationParseError(f"invalid points: {exc}")


def constellation_from_json(text: str) -> Constellation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConstellationParseError(f"not valid JSON: {exc}")
    return constellation_from_dict(doc)


def save_constellation(c: Constellation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(constellation_to_json(c))
        fh.write("\n")


def load_constellation(path) -> Constellation:
    with open(path, "r", encoding="utf-8") as fh:
        return constellation_from_json(fh.read())
