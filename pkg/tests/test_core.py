import json
import math

import numpy as np
import pytest

from imdd import registry
from imdd.core import (
    BasisConfig,
    BasisKind,
    Constellation,
    ConstellationParseError,
    DegenerateConstellationError,
    UnsupportedBasisError,
    average_optical_coeff,
    canonicalize,
    cone_margin,
    constellation_from_json,
    constellation_to_json,
    is_admissible,
    load_constellation,
    mean_squared_norm,
    min_distance,
    normalize_unit_dmin,
    peak_optical_coeff,
    save_constellation,
    synthesize_waveform,
)
from helpers import assert_points_match, sample_admissible_points

SQRT23 = math.sqrt(2.0 / 3.0)
ISQRT3 = 1.0 / math.sqrt(3.0)

OPTIMIZED_NAMES = ["t-avg-3", "t-peak-3", "t-4", "t-avg-8", "t-peak-8"]


def two_d(points, T=1.0, name="c"):
    return Constellation(name, BasisConfig.dc_half_cosine(T), np.asarray(points, dtype=float))


# ---------------------------------------------------------------------------
# basis functions
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("T", [1.0, 2.5])
@pytest.mark.parametrize(
    "make", [BasisConfig.dc, BasisConfig.dc_half_cosine, BasisConfig.dc_quadrature]
)
def test_bases_are_orthonormal(make, T):
    # numerical inner products on [0, T) via the midpoint rule
    basis = make(T)
    n = 200_001
    tau = (np.arange(n) + 0.5) / n
    phi = basis.waveforms(tau)
    gram = phi @ phi.T * (T / n)
    assert np.max(np.abs(gram - np.eye(basis.dim))) < 1e-9


def test_basis_validation():
    with pytest.raises(UnsupportedBasisError):
        BasisConfig(1.0, (BasisKind.COS_HALF,))  # first must be DC
    with pytest.raises(UnsupportedBasisError):
        BasisConfig(1.0, (BasisKind.DC, BasisKind.SIN_FULL))  # unknown layout
    with pytest.raises(ValueError):
        BasisConfig(-1.0, (BasisKind.DC,))


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------


def test_is_admissible_examples():
    assert is_admissible([1.0, 0.0], tol=0.0)
    # outer point of the average-optimal ternary set lies exactly on the boundary;
    # the rounded margin is one ulp below zero, which the default tol absorbs
    p = [SQRT23, ISQRT3]
    assert is_admissible(p)
    assert abs(cone_margin(p)) < 1e-15
    assert not is_admissible([0.5, 0.5], tol=0.0)  # 0.5 < sqrt(2)*0.5


def test_is_admissible_dimensions_and_errors():
    assert is_admissible([0.2])
    assert not is_admissible([-0.2])
    assert is_admissible([1.0, 0.5, 0.5])  # exactly on the 3-D cone boundary
    assert not is_admissible([0.99, 0.5, 0.5], tol=1e-12)
    with pytest.raises(UnsupportedBasisError):
        is_admissible([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        is_admissible([1.0, 0.0], tol=-1e-3)


def test_cone_scale_invariance_property():
    rng = np.random.default_rng(1234)
    pts = sample_admissible_points(rng, 1000)
    scales = rng.uniform(1e-3, 10.0, 1000)
    for p, lam in zip(pts, scales):
        assert is_admissible(lam * p)


def test_cone_convexity_property():
    rng = np.random.default_rng(5678)
    a = sample_admissible_points(rng, 1000)
    b = sample_admissible_points(rng, 1000)
    lam = rng.random(1000)[:, None]
    mix = lam * a + (1.0 - lam) * b
    for p in mix:
        assert is_admissible(p)


# ---------------------------------------------------------------------------
# distances, normalization, power metrics
# ---------------------------------------------------------------------------


def test_min_distance_examples():
    assert min_distance(registry.get_format("t-4")) == pytest.approx(1.0, abs=1e-12)
    assert min_distance(two_d([[0, 0], [3, 0]])) == pytest.approx(3.0, abs=1e-12)
    assert min_distance(registry.get_format("t-avg-8")) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DegenerateConstellationError):
        min_distance(two_d([[1.0, 0.0]]))


def test_normalize_unit_dmin():
    c = normalize_unit_dmin(two_d([[0, 0], [2, 0]]))
    assert_points_match(c.points, [[0, 0], [1, 0]], 1e-15)

    t4 = registry.get_format("t-4")
    again = normalize_unit_dmin(t4)
    assert np.array_equal(again.points, t4.points)  # idempotent on normalized input

    scaled = two_d(registry.get_format("t-peak-3").points * 5.0)
    back = normalize_unit_dmin(scaled)
    assert_points_match(back.points, registry.get_format("t-peak-3").points, 1e-12)


def test_average_optical_coeff_examples():
    assert average_optical_coeff(registry.get_format("ook")) == pytest.approx(0.5, abs=1e-15)
    assert average_optical_coeff(registry.get_format("t-avg-3")) == pytest.approx(
        (2.0 / 3.0) * SQRT23, abs=1e-12
    )
    assert average_optical_coeff(registry.get_format("t-peak-3")) == pytest.approx(
        (2.0 / 3.0) * (math.sqrt(3.0) / 2.0), abs=1e-12
    )


def test_peak_optical_coeff_examples():
    assert peak_optical_coeff(registry.get_format("ook")) == pytest.approx(1.0, abs=1e-15)
    peak_avg3 = peak_optical_coeff(registry.get_format("t-avg-3"))
    peak_peak3 = peak_optical_coeff(registry.get_format("t-peak-3"))
    assert peak_avg3 == pytest.approx(2.0 * SQRT23, abs=1e-12)
    assert peak_peak3 == pytest.approx(math.sqrt(3.0) / 2.0 + math.sqrt(2.0) / 2.0, abs=1e-12)
    assert peak_peak3 < peak_avg3  # peak optimization must beat the average-optimal set


def test_mean_squared_norm_examples():
    assert mean_squared_norm(registry.get_format("ook")) == pytest.approx(0.5, abs=1e-15)
    assert mean_squared_norm(registry.get_format("t-4")) == pytest.approx(7.0 / 6.0, abs=1e-12)
    assert mean_squared_norm(registry.get_format("pam4")) == pytest.approx(3.5, abs=1e-15)


def test_average_below_peak_property():
    rng = np.random.default_rng(99)
    for _ in range(50):
        pts = sample_admissible_points(rng, rng.integers(1, 9))
        # perturb to make rows distinct with near-certainty, stay admissible
        c = Constellation("r", BasisConfig.dc_half_cosine(), pts + [[1e-9, 0.0]])
        assert average_optical_coeff(c) <= peak_optical_coeff(c) + 1e-12


# ---------------------------------------------------------------------------
# optimized-format fixtures
# ---------------------------------------------------------------------------


def test_optimized_formats_admissible_unit_dmin():
    for name in OPTIMIZED_NAMES:
        c = registry.get_format(name)
        for p in c.points:
            assert is_admissible(p, tol=1e-12), (name, p)
        assert abs(min_distance(c) - 1.0) <= 1e-12, name


def test_lattice_formats_touch_cone_boundary():
    # Extreme lattice points (pure multiples of a single boundary ray) lie
    # exactly on the cone boundary.  Mixed combinations such as the (2,1) and
    # (1,2) points of t-avg-8 are interior, so boundary incidence holds for
    # the off-axis points whose ray decomposition has a zero component.
    ray_matrix = np.array([[SQRT23, SQRT23], [ISQRT3, -ISQRT3]])
    for name in ["t-avg-3", "t-4", "t-avg-8"]:
        pts = registry.get_format(name).points
        idx = np.linalg.solve(ray_matrix, pts.T).T  # (i, j) lattice indices
        pure_ray = pts[(np.abs(pts[:, 1]) > 0) & (np.abs(idx).min(axis=1) < 1e-9)]
        assert len(pure_ray) > 0
        margins = pure_ray[:, 0] - math.sqrt(2.0) * np.abs(pure_ray[:, 1])
        assert np.max(np.abs(margins)) <= 1e-12, name


# ---------------------------------------------------------------------------
# waveform synthesis
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("T", [1.0, 4.0])
def test_synthesize_ook_constant(T):
    c = Constellation("ook", BasisConfig.dc(T), np.array([[0.0], [1.0]]))
    x = synthesize_waveform(c, [1], samples_per_symbol=16)
    assert np.allclose(x, 1.0 / math.sqrt(T), atol=1e-15)
    assert synthesize_waveform(c, [0, 1], 4).shape == (8,)


def test_synthesize_boundary_point_touches_zero():
    c = registry.get_format("t-avg-3")
    mins = []
    for sps in (64, 1024, 8192):
        x = synthesize_waveform(c, [1], sps)
        mins.append(x.min())
    assert all(m >= -1e-9 for m in mins)
    assert mins[0] > mins[1] > mins[2] >= 0.0  # approaches the zero touched at t -> T
    assert mins[-1] < 1e-6


def test_synthesize_peak_value():
    c = registry.get_format("t-peak-3")
    x = synthesize_waveform(c, [1], 4096)
    # the positive-s2 point attains its maximum at t = 0, which sampling hits exactly
    assert x.max() == pytest.approx(peak_optical_coeff(c), abs=1e-12)


def test_synthesize_waveform_errors():
    c = registry.get_format("ook")
    with pytest.raises(ValueError, match="symbol index"):
        synthesize_waveform(c, [0, 2], 8)
    with pytest.raises(ValueError, match="samples_per_symbol"):
        synthesize_waveform(c, [0], 1)


def test_waveform_nonnegativity_matches_admissibility():
    rng = np.random.default_rng(4321)
    basis = BasisConfig.dc_half_cosine()
    sps = 512
    for _ in range(200):
        p = rng.uniform([-0.5, -1.5], [2.0, 1.5])
        margin = cone_margin(p)
        if abs(margin) < 1e-3:
            continue  # stay away from the threshold, sampling resolves it only in the limit
        x = (p[None, :] @ basis.waveforms(np.arange(sps) / sps)).ravel()
        if margin > 0:
            assert x.min() >= -1e-12
        else:
            # an inadmissible point must dip visibly negative at dense sampling
            assert x.min() < margin * 0.9


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------


def test_canonicalize_reflection_and_permutation():
    t3 = registry.get_format("t-avg-3")
    reflected = two_d(t3.points * np.array([1.0, -1.0]))
    assert np.array_equal(canonicalize(reflected).points, canonicalize(t3).points)

    t4 = registry.get_format("t-4")
    perm = two_d(t4.points[::-1])
    assert np.array_equal(canonicalize(perm).points, canonicalize(t4).points)


def test_canonicalize_requires_2d():
    with pytest.raises(UnsupportedBasisError):
        canonicalize(registry.get_format("qpsk-scm"))


# ---------------------------------------------------------------------------
# constellation validation and JSON round trip
# ---------------------------------------------------------------------------


def test_constellation_validation():
    basis = BasisConfig.dc_half_cosine()
    with pytest.raises(ValueError, match="distinct"):
        Constellation("dup", basis, np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="cone"):
        Constellation("bad", basis, np.array([[0.0, 0.0], [0.5, 0.5]]))
    with pytest.raises(ValueError, match="dimension"):
        Constellation("dim", basis, np.array([[1.0], [2.0]]))
    c = registry.get_format("t-4")
    with pytest.raises(ValueError):
        c.points[0, 0] = 5.0  # points are frozen


def test_json_round_trip_bit_identical(tmp_path):
    for name in registry.format_names():
        c = registry.get_format(name)
        again = constellation_from_json(constellation_to_json(c))
        assert again.name == c.name
        assert again.basis == c.basis
        assert np.array_equal(again.points, c.points)

        path = tmp_path / f"{name}.json"
        save_constellation(c, path)
        assert np.array_equal(load_constellation(path).points, c.points)


def test_json_parse_errors_name_offending_field():
    good = json.loads(constellation_to_json(registry.get_format("t-4")))

    doc = dict(good)
    del doc["name"]
    with pytest.raises(ConstellationParseError, match="'name'"):
        constellation_from_json(json.dumps(doc))

    doc = json.loads(json.dumps(good))
    doc["basis"]["T"] = "fast"
    with pytest.raises(ConstellationParseError, match="basis.T"):
        constellation_from_json(json.dumps(doc))

    doc = json.loads(json.dumps(good))
    doc["basis"]["kinds"] = ["DC", "TRIANGLE"]
    with pytest.raises(ConstellationParseError, match=r"kinds\[1\]"):
        constellation_from_json(json.dumps(doc))

    doc = json.loads(json.dumps(good))
    doc["points"][2][1] = "oops"
    with pytest.raises(ConstellationParseError, match=r"points\[2\]\[1\]"):
        constellation_from_json(json.dumps(doc))

    with pytest.raises(ConstellationParseError, match="valid JSON"):
        constellation_from_json("{not json")
