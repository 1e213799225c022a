import math

import numpy as np
import pytest

from taslink.numerics import RandomSource, SingularMatrixError, sample_complex_gaussian
from taslink.transmit import (
    ENERGY_FACTOR,
    UlaConfig,
    abf_effective_link,
    array_response,
    enumerate_combinations,
    hbf_effective_link,
    select_antennas,
    ula_weight,
    zf_precoder,
)


def test_enumerate_four_choose_two():
    combos = enumerate_combinations(4, 2)
    assert combos == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def test_enumerate_full_set_and_validation():
    assert enumerate_combinations(3, 3) == [(1, 2, 3)]
    with pytest.raises(ValueError):
        enumerate_combinations(2, 3)


def test_selection_hand_case():
    sel = select_antennas(np.array([[1.0, 2j, 3.0, 0.5]]))
    assert (sel.p1, sel.p2) == (2, 3)
    assert sel.metric == pytest.approx(13.0)


def test_selection_tie_breaks_lexicographic():
    sel = select_antennas(np.ones((1, 4)))
    assert sel.indices == (1, 2)


def test_selection_matches_brute_force():
    rng = RandomSource(99)
    for _ in range(1000):
        h = sample_complex_gaussian(rng, 1, 4)
        sel = select_antennas(h)
        best = max(
            enumerate_combinations(4, 2),
            key=lambda combo: sum(abs(h[0, i - 1]) ** 2 for i in combo),
        )
        assert sel.indices == best


def test_selection_metric_is_top_two_column_powers():
    rng = RandomSource(98)
    for _ in range(100):
        h = sample_complex_gaussian(rng, 1, 4)
        sel = select_antennas(h)
        powers = np.sort(np.abs(h[0]) ** 2)
        assert sel.metric == pytest.approx(powers[-2:].sum(), rel=1e-12)


def test_zf_precoder_hand_case():
    prec = zf_precoder(np.array([[1.0, 1j]]), nt_total=4)
    np.testing.assert_allclose(prec.p_zf, np.array([[0.5], [-0.5j]]), atol=1e-14)
    assert prec.beta == pytest.approx(math.sqrt(8.0))
    np.testing.assert_allclose(np.diag(prec.p_diag), prec.beta * np.array([0.5, -0.5j]), atol=1e-14)


def test_zf_inverts_the_channel():
    rng = RandomSource(100)
    for _ in range(100):
        h = sample_complex_gaussian(rng, 1, 2)
        prec = zf_precoder(h, nt_total=4)
        product = h @ prec.p_zf
        assert abs(product[0, 0] - 1.0) < 1e-10


def test_zf_power_constraint():
    rng = RandomSource(101)
    for nt in (2, 4, 8):
        h = sample_complex_gaussian(rng, 1, 2)
        prec = zf_precoder(h, nt_total=nt)
        trace = np.sum(np.abs(prec.p_zf) ** 2)
        assert prec.beta**2 * trace == pytest.approx(nt, rel=1e-10)


def test_zf_two_receive_antennas():
    rng = RandomSource(102)
    h = sample_complex_gaussian(rng, 2, 2)
    prec = zf_precoder(h, nt_total=4)
    np.testing.assert_allclose(h @ prec.p_zf, np.eye(2), atol=1e-10)
    assert prec.p_diag.shape == (2, 2)
    assert prec.p_diag[0, 1] == 0 and prec.p_diag[1, 0] == 0


def test_zf_degenerate_column():
    prec = zf_precoder(np.array([[1.0, 0.0]]), nt_total=4)
    assert prec.p_diag[1, 1] == 0.0


def test_zf_singular_channel():
    with pytest.raises(SingularMatrixError):
        zf_precoder(np.zeros((1, 2)), nt_total=4)


def test_ula_broadside_and_norm():
    cfg = UlaConfig(lt=8)
    w = ula_weight(0.0, cfg)
    np.testing.assert_allclose(w, np.ones(8) / math.sqrt(8.0), atol=1e-15)
    for theta in np.linspace(-np.pi / 2, np.pi / 2, 7):
        assert np.linalg.norm(ula_weight(theta, cfg)) == pytest.approx(1.0, abs=1e-12)


def test_ula_half_wavelength_endfire():
    w = ula_weight(np.pi / 2, UlaConfig(lt=2))
    np.testing.assert_allclose(w, np.array([1.0, -1.0]) / math.sqrt(2.0), atol=1e-12)


def test_ula_config_validation():
    with pytest.raises(ValueError):
        UlaConfig(lt=0)
    with pytest.raises(ValueError):
        UlaConfig(lt=2, d_m=0.004, lambda_m=0.005)


@pytest.mark.parametrize("lt", [1, 2, 4, 8, 32])
def test_matched_inner_product(lt):
    cfg = UlaConfig(lt=lt)
    for theta in np.linspace(-1.4, 1.4, 9):
        gain = np.vdot(ula_weight(theta, cfg), array_response(theta, cfg))
        assert abs(gain - math.sqrt(lt)) < 1e-12


def test_mismatched_inner_product_bounded():
    cfg = UlaConfig(lt=8)
    w = ula_weight(0.35, cfg)
    for theta in np.linspace(-np.pi / 2, np.pi / 2, 181):
        assert abs(np.vdot(w, array_response(theta, cfg))) <= math.sqrt(8.0) + 1e-12


def test_abf_link_identity_and_gain():
    h = np.array([0.3 - 0.4j, 1.2 + 0.1j])
    link1 = abf_effective_link(h, 1, (0.1, -0.2))
    np.testing.assert_array_equal(link1.h_eff, h)
    link4 = abf_effective_link(h, 4, (0.1, -0.2))
    np.testing.assert_allclose(np.abs(link4.h_eff) ** 2, 4.0 * np.abs(h) ** 2, rtol=1e-12)
    assert link4.energy_factor == ENERGY_FACTOR


def test_abf_gain_angle_independent():
    h = np.array([1.0, 1j])
    a = abf_effective_link(h, 8, (0.0, 0.0)).h_eff
    b = abf_effective_link(h, 8, (1.2, -0.7)).h_eff
    np.testing.assert_array_equal(a, b)


def test_hbf_link_hand_case():
    h = np.array([1.0, 1j])
    prec = zf_precoder(h[None, :], nt_total=4)
    link = hbf_effective_link(h, 1, prec)
    np.testing.assert_allclose(link.h_eff, np.array([math.sqrt(2.0), math.sqrt(2.0)]), atol=1e-12)


def test_hbf_reduces_to_precoded_link_at_single_element():
    rng = RandomSource(103)
    h = sample_complex_gaussian(rng, 1, 2)
    prec = zf_precoder(h, nt_total=4)
    link = hbf_effective_link(h[0], 1, prec)
    np.testing.assert_allclose(link.h_eff, h[0] * np.diag(prec.p_diag), rtol=1e-12)


def test_effective_power_monotonic_in_elements():
    rng = RandomSource(104)
    h = sample_complex_gaussian(rng, 1, 2)
    prec = zf_precoder(h, nt_total=4)
    last_abf, last_hbf = -1.0, -1.0
    for lt in (1, 2, 4, 8, 16):
        p_abf = np.sum(np.abs(abf_effective_link(h[0], lt, (0.0, 0.0)).h_eff) ** 2)
        p_hbf = np.sum(np.abs(hbf_effective_link(h[0], lt, prec).h_eff) ** 2)
        assert p_abf > last_abf and p_hbf > last_hbf
        last_abf, last_hbf = p_abf, p_hbf


def test_hbf_doubling_elements_doubles_power():
    rng = RandomSource(105)
    h = sample_complex_gaussian(rng, 1, 2)
    prec = zf_precoder(h, nt_total=4)
    p2 = np.sum(np.abs(hbf_effective_link(h[0], 2, prec).h_eff) ** 2)
    p4 = np.sum(np.abs(hbf_effective_link(h[0], 4, prec).h_eff) ** 2)
    assert p4 == pytest.approx(2.0 * p2, rel=1e-12)
