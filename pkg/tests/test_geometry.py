import math

import pytest
from scipy import integrate

from mensura import geometry
from mensura.geometry import SolidModel
from mensura.util import InvalidMeasurementError, OutOfRangeError


def test_cylinder_and_cone_coefficients():
    assert SolidModel.cylinder().gamma == pytest.approx(math.pi / 4)
    assert SolidModel.cone().gamma == pytest.approx(math.pi / 12)
    assert geometry.solid_gamma(1.0) == pytest.approx(geometry.CYLINDER_GAMMA)
    assert geometry.solid_gamma(0.0) == geometry.CONE_GAMMA


def test_solid_volumes():
    cylinder = geometry.solid_volume(SolidModel.cylinder(), 1.0, 10.0)
    cone = geometry.solid_volume(SolidModel.cone(), 1.0, 10.0)
    assert cylinder == pytest.approx(7.853982, abs=1e-6)
    assert cone == pytest.approx(2.617994, abs=1e-6)


def test_frustum_matches_the_truncated_cone_formula():
    d, h, lam = 1.2, 70.0, 0.4
    top = lam * d
    expected = math.pi * h / 12 * (d * d + d * top + top * top)
    assert geometry.solid_volume(SolidModel.frustum(lam), d, h) == pytest.approx(expected)


@pytest.mark.parametrize(
    "kind, lam",
    [
        ("cylinder", 0.5),
        ("cone", 0.2),
        ("frustum", 1.5),
        ("frustum", -0.1),
        ("sphere", 0.5),
    ],
)
def test_invalid_solids(kind, lam):
    with pytest.raises((InvalidMeasurementError, OutOfRangeError)):
        SolidModel(kind, lam)


def test_solid_volume_needs_positive_sizes():
    with pytest.raises(InvalidMeasurementError):
        geometry.solid_volume(SolidModel.cone(), 0.0, 10.0)
    with pytest.raises(InvalidMeasurementError):
        geometry.solid_volume(SolidModel.cone(), 1.0, -1.0)


def test_lambda_for_the_rounded_coefficient():
    assert geometry.lambda_from_gamma(0.302) == pytest.approx(0.13526, abs=0.0005)


def test_lambda_for_the_fitted_coefficient():
    assert geometry.lambda_from_gamma(0.302355) == pytest.approx(0.13526, abs=0.002)


@pytest.mark.parametrize("lam", [0.13526, 0.5, 0.9])
def test_lambda_inverts_solid_gamma(lam):
    assert geometry.lambda_from_gamma(geometry.solid_gamma(lam)) == pytest.approx(lam, abs=1e-9)


def test_bounds_of_lambda_from_gamma():
    assert geometry.lambda_from_gamma(geometry.CONE_GAMMA) == pytest.approx(0.0, abs=1e-12)
    assert geometry.lambda_from_gamma(geometry.CYLINDER_GAMMA) == pytest.approx(1.0)
    with pytest.raises(OutOfRangeError):
        geometry.lambda_from_gamma(0.2)
    with pytest.raises(OutOfRangeError):
        geometry.lambda_from_gamma(0.8)


def test_taper_of_the_average_tree():
    assert geometry.taper(0.13526, 1.1, 76.0) == pytest.approx(-0.0126, abs=0.0002)
    estimate = geometry.estimate_taper(0.302, 1.1, 76.0)
    assert estimate.taper == pytest.approx(-0.0126, abs=0.0002)
    assert estimate.to_json()["reference_h_ft"] == 76.0


def test_cylinders_do_not_taper():
    assert geometry.taper(1.0, 1.1, 76.0) == 0.0
    with pytest.raises(InvalidMeasurementError):
        geometry.taper(0.5, 1.1, 0.0)


def test_honer_keeps_diameter_in_inches():
    assert geometry.honer_volume(8.3, 70.0) == pytest.approx(12.188, abs=0.001)
    assert geometry.honer_volume(12.0, 70.0) == pytest.approx(25.477, abs=0.001)


def test_honer_rejects_bad_parameters():
    with pytest.raises(OutOfRangeError):
        geometry.honer_volume(8.3, 70.0, geometry.HonerParams(-1.0, 10.0))
    with pytest.raises(InvalidMeasurementError):
        geometry.honer_volume(8.3, 0.0)


def test_smalian_log():
    segment = geometry.LogSegment(1.0, 1.2, 16.0)
    assert geometry.smalian_volume(segment) == pytest.approx(math.pi / 8 * (1.0 + 1.44) * 16)


def test_smalian_stem_builds_one_log_per_pair():
    segments = geometry.smalian_stem([1.2, 1.0, 0.8, 0.6])
    assert len(segments) == 3
    assert segments[0] == geometry.LogSegment(1.0, 1.2, 16.0)
    assert all(s.length == geometry.STANDARD_LOG_LENGTH_FT for s in segments)


def test_smalian_stem_errors():
    with pytest.raises(InvalidMeasurementError):
        geometry.smalian_stem([1.0])
    with pytest.raises(InvalidMeasurementError):
        geometry.stem_volume([])
    with pytest.raises(InvalidMeasurementError):
        geometry.LogSegment(1.2, 1.0, 16.0)


def test_three_log_tapered_stem_against_a_solid_of_revolution():
    base, top, length = 1.2, 0.6, 48.0

    def diameter(z):
        return base + (top - base) * z / length

    exact, _ = integrate.quad(lambda z: math.pi / 4 * diameter(z) ** 2, 0.0, length)
    ends = [diameter(z) for z in (0.0, 16.0, 32.0, 48.0)]
    smalian = geometry.stem_volume(geometry.smalian_stem(ends, 16.0))
    assert smalian == pytest.approx(exact, rel=0.02)
    assert smalian > exact


@pytest.mark.parametrize("s", [0.5, 2.0, 3.7])
def test_volumes_scale_with_the_cube_of_length(s):
    d, h = 1.1, 76.0
    for model in (SolidModel.cylinder(), SolidModel.cone(), SolidModel.frustum(0.3)):
        assert geometry.solid_volume(model, s * d, s * h) == pytest.approx(
            s ** 3 * geometry.solid_volume(model, d, h)
        )
    ends = [1.2, 1.0, 0.8, 0.6]
    assert geometry.stem_volume(
        geometry.smalian_stem([s * e for e in ends], s * 16.0)
    ) == pytest.approx(s ** 3 * geometry.stem_volume(geometry.smalian_stem(ends, 16.0)))
    assert geometry.meyer_cubic_volume(s * d, 2.0) == pytest.approx(
        s ** 3 * geometry.meyer_cubic_volume(d, 2.0)
    )


def test_toilet_roll_length():
    assert geometry.toilet_roll_length(4.0, 1.5, 0.01) == pytest.approx(math.pi / 4 * 1375.0)
    assert geometry.toilet_roll_length(1.5, 1.5, 0.01) == 0.0
    with pytest.raises(InvalidMeasurementError):
        geometry.toilet_roll_length(1.0, 1.5, 0.01)


def test_toilet_roll_shrink_rate_is_the_inverse_slope():
    D, d, t, step = 4.0, 1.5, 0.01, 1e-6
    slope = (
        geometry.toilet_roll_length(D + step, d, t) - geometry.toilet_roll_length(D - step, d, t)
    ) / (2 * step)
    assert geometry.toilet_roll_shrink_rate(D, t) == pytest.approx(1 / slope, rel=1e-6)


def test_meyer_cubic():
    assert geometry.meyer_cubic_volume(2.0, 0.5) == 4.0
    with pytest.raises(InvalidMeasurementError):
        geometry.meyer_cubic_volume(0.0, 0.5)


LAMBDAS = [i / 20 for i in range(21)]


@pytest.mark.parametrize("d, h", [(0.5, 60.0), (1.1, 76.0), (20.6 / 12, 87.0)])
def test_frustum_volume_is_monotone_in_lambda_between_cone_and_cylinder(d, h):
    cone = geometry.solid_volume(SolidModel.cone(), d, h)
    cylinder = geometry.solid_volume(SolidModel.cylinder(), d, h)
    volumes = [geometry.solid_volume(SolidModel.frustum(lam), d, h) for lam in LAMBDAS]
    assert volumes == sorted(volumes)
    assert volumes[0] == pytest.approx(cone)
    assert volumes[-1] == pytest.approx(cylinder)
    for volume in volumes:
        assert cone * (1 - 1e-12) <= volume <= cylinder * (1 + 1e-12)
