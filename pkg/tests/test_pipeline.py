import numpy as np
import pytest
from conftest import MASKS, make_key
from numpy.testing import assert_allclose, assert_array_equal

from frtcrypt.chaos import MaskSpec, make_mask
from frtcrypt.dwt import SubbandSet, dwt2_haar, idwt2_haar
from frtcrypt.errors import DimensionError, InvalidOrderError, OddDimensionError, ParameterError
from frtcrypt.frft import PlanCache, build_plan, frft_2d
from frtcrypt.pipeline import (ALGORITHMS, BASELINE, DWT_FAMILY, EncryptedImage, EncryptionKey,
                               decrypt, decrypt_baseline, decrypt_dwt, encrypt, encrypt_baseline,
                               encrypt_dwt, mask_kind_for, partner_algorithm)


def channel_mse(a, b):
    return (np.abs(a - b) ** 2).mean(axis=(1, 2))


def ones_key(algorithm, orders=(0, 0, 0, 0)):
    """A key whose masks are identically one: a burn-in-free logistic at the fixed point 0."""
    m1 = MaskSpec.logistic(4.0, 0.0, burn_in=0)
    m2 = MaskSpec.logistic(4.0, 0.0, burn_in=1)
    return EncryptionKey(algorithm, orders, m1, m2)


@pytest.fixture(scope="module")
def small():
    return np.random.default_rng(7).uniform(0, 255, (3, 32, 48))


# -- key ---------------------------------------------------------------------

def test_mask_kinds_follow_algorithm():
    assert [mask_kind_for(a) for a in ALGORITHMS] == [
        "uniform-random", "logistic", "kaplan-yorke"] * 2
    with pytest.raises(ParameterError):
        EncryptionKey("A31", (0.5,) * 4, *MASKS["2"])
    with pytest.raises(ParameterError):
        EncryptionKey("A51", (0.5,) * 4, *MASKS["1"])


def test_masks_must_differ():
    m = MaskSpec.uniform(3)
    with pytest.raises(ParameterError):
        EncryptionKey("A31", (0.5,) * 4, m, m)


def test_orders_validated():
    with pytest.raises(InvalidOrderError):
        make_key("A31", (0.5, np.nan, 0.5, 0.5))
    with pytest.raises(InvalidOrderError):
        make_key("A31", (0.5, 0.5, 0.5))


def test_key_helpers():
    k = make_key("A32", (0.1, 0.2, 0.3, 0.4))
    assert k.first_pair == (0.1, 0.2) and k.second_pair == (0.3, 0.4)
    assert k.with_orders(0.7).orders == (0.7,) * 4
    assert k.with_algorithm("A42").algorithm == "A42"
    assert [partner_algorithm(a) for a in ALGORITHMS] == list(DWT_FAMILY + BASELINE)


# -- baseline ----------------------------------------------------------------

def test_baseline_identity_with_trivial_key(small):
    g = encrypt_baseline(small, ones_key("A32")).channels
    assert np.iscomplexobj(g)
    assert_array_equal(g.real, small)
    assert_array_equal(g.imag, 0)


def test_baseline_matches_definition(small):
    key = make_key("A33", (0.3, 0.6, 1.2, 0.45))
    m, n = small.shape[1:]
    m1, m2 = make_mask(key.mask1, m, n), make_mask(key.mask2, m, n)
    expected = [frft_2d(frft_2d(c * m1, key.first_pair) * m2, key.second_pair) for c in small]
    assert_allclose(encrypt(small, key).channels, expected, atol=1e-10)


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_round_trip(small, alg):
    key = make_key(alg, (0.5, 0.3, 0.7, 1.2))
    back = decrypt(encrypt(small, key), key)
    assert channel_mse(back, small).max() < 1e-18


def test_baseline_preserves_norm(small):
    g = encrypt(small, make_key("A31")).channels
    assert_allclose(np.linalg.norm(g, axis=(1, 2)), np.linalg.norm(small, axis=(1, 2)),
                    rtol=0, atol=1e-9)


def test_baseline_accepts_2x2_and_odd():
    x = np.arange(12.0).reshape(3, 2, 2)
    key = make_key("A31")
    assert channel_mse(decrypt(encrypt(x, key), key), x).max() < 1e-18
    y = np.random.default_rng(0).uniform(0, 255, (3, 7, 5))
    assert channel_mse(decrypt(encrypt(y, key), key), y).max() < 1e-18


def test_baseline_rejects_1xn():
    with pytest.raises(DimensionError):
        encrypt(np.zeros((3, 1, 4)), make_key("A31"))


def test_wrong_seed_fails(natural):
    key = make_key("A32")
    enc = encrypt(natural, key)
    wrong = EncryptionKey("A32", key.orders, MaskSpec.logistic(3.99, 0.3 + 1e-10), key.mask2)
    assert channel_mse(decrypt(enc, wrong), natural)[0] > 1e3


# -- DWT family --------------------------------------------------------------

def test_dwt_identity_with_trivial_key(small):
    g = encrypt_dwt(small, ones_key("A42")).channels
    assert np.abs(g - small).max() <= 1e-12


def test_dwt_matches_definition(small):
    key = make_key("A41", (0.3, 0.6, 1.2, 0.45))
    m, n = small.shape[1] // 2, small.shape[2] // 2
    m1, m2 = make_mask(key.mask1, m, n), make_mask(key.mask2, m, n)
    expected = []
    for c in small:
        sb = dwt2_haar(c)
        ll = frft_2d(frft_2d(sb.ll * m1, key.second_pair) * m2, key.first_pair)
        expected.append(idwt2_haar(SubbandSet(ll, sb.lh, sb.hl, sb.hh)))
    assert_allclose(encrypt(small, key).channels, expected, atol=1e-10)


def test_dwt_detail_passthrough(small):
    g = encrypt(small, make_key("A43")).channels
    for gc, fc in zip(g, small):
        a, b = dwt2_haar(gc), dwt2_haar(fc)
        for name in ("lh", "hl", "hh"):
            assert np.abs(getattr(a, name) - getattr(b, name)).max() <= 1e-12


def test_dwt_scrambles(natural):
    g = encrypt(natural, make_key("A42")).channels
    rel = np.linalg.norm(g - natural, axis=(1, 2)) / np.linalg.norm(natural, axis=(1, 2))
    assert np.all(rel > 0.5)


def test_dwt_period_four_in_alpha(small):
    key = make_key("A41")
    enc = encrypt(small, key)
    shifted = key.with_orders(4.5, 0.5, 0.5, 0.5)
    assert np.abs(decrypt(enc, shifted) - decrypt(enc, key)).max() <= 1e-9


@pytest.mark.parametrize("shape,err", [((3, 7, 8), OddDimensionError),
                                       ((3, 8, 9), OddDimensionError),
                                       ((3, 2, 8), DimensionError)])
def test_dwt_dimension_errors(shape, err):
    with pytest.raises(err):
        encrypt(np.zeros(shape), make_key("A41"))


def test_wrong_orders_fail(natural):
    key = make_key("A41")
    enc = encrypt(natural, key)
    assert channel_mse(decrypt(enc, key.with_orders(0.4)), natural)[0] > 1e3


# -- shared behaviour ----------------------------------------------------------

def test_family_mismatch():
    x = np.zeros((3, 8, 8))
    with pytest.raises(ParameterError):
        encrypt_baseline(x, make_key("A41"))
    with pytest.raises(ParameterError):
        encrypt_dwt(x, make_key("A31"))
    with pytest.raises(ParameterError):
        decrypt_baseline(x, make_key("A41"))
    with pytest.raises(ParameterError):
        decrypt_dwt(x, make_key("A31"))


def test_decrypt_checks_algorithm(small):
    enc = encrypt(small, make_key("A31"))
    with pytest.raises(ParameterError):
        decrypt(enc, make_key("A41"))


def test_input_validation():
    with pytest.raises(DimensionError):
        encrypt(np.zeros((8, 8)), make_key("A31"))
    with pytest.raises(DimensionError):
        encrypt(np.zeros((4, 8, 8)), make_key("A31"))
    bad = np.zeros((3, 8, 8))
    bad[1, 2, 3] = np.inf
    with pytest.raises(DimensionError):
        encrypt(bad, make_key("A31"))


def test_encrypted_image_validation():
    with pytest.raises(DimensionError):
        EncryptedImage(np.zeros((2, 4, 4)), "A31")
    with pytest.raises(ParameterError):
        EncryptedImage(np.zeros((3, 4, 4)), "B31")
    assert EncryptedImage(np.zeros((3, 4, 6)), "A31").dims == (4, 6)


@pytest.mark.parametrize("alg", ["A31", "A42"])
def test_channel_independence(small, alg):
    key = make_key(alg)
    other = small.copy()
    other[1:] = np.random.default_rng(1).uniform(0, 255, other[1:].shape)
    assert_array_equal(encrypt(small, key).channels[0], encrypt(other, key).channels[0])


@pytest.mark.parametrize("alg", ["A33", "A43"])
def test_threaded_matches_serial(small, alg):
    key = make_key(alg)
    serial = encrypt(small, key, workers=1)
    threaded = encrypt(small, key, workers=3)
    assert_array_equal(serial.channels, threaded.channels)
    assert_array_equal(decrypt(serial, key, workers=1), decrypt(serial, key, workers=3))


def test_plan_sources_agree(small):
    key = make_key("A32", (0.3, 0.6, 1.2, 0.45))
    cached = encrypt(small, key, PlanCache()).channels
    uncached = encrypt(small, key, build_plan).channels
    assert_array_equal(cached, uncached)


def test_decrypt_accepts_plain_array(small):
    key = make_key("A31")
    enc = encrypt(small, key)
    assert_array_equal(decrypt(enc.channels, key), decrypt(enc, key))
