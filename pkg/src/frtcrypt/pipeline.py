"""Double random phase encoding in the fractional Fourier domain.

Baseline family (A31 uniform masks, A32 logistic, A33 Kaplan-Yorke), per
channel ``f``::

    g  = F[g,d]( F[a,b]( f * m1 ) * m2 )
    f' = conj(m1) * F[-a,-b]( conj(m2) * F[-g,-d]( g ) )

DWT family (A41, A42, A43) encrypts only the LL subband of a single-level
Haar decomposition and passes the detail subbands through unchanged::

    ll' = F[a,b]( F[g,d]( ll * m1 ) * m2 )
    g   = IDWT(ll', lh, hl, hh)

Here ``F[r,c]`` is the separable transform with row order ``r`` and column
order ``c`` and ``(a, b, g, d)`` are the key's four orders.  Masks are
materialised from the key's generator specs at full size (baseline) or half
size (DWT family).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chaos import KAPLAN_YORKE, LOGISTIC, UNIFORM, MaskSpec, conj_mask, make_mask
from .dwt import SubbandSet, dwt2_haar, idwt2_haar
from .errors import DimensionError, InvalidOrderError, OddDimensionError, ParameterError
from .frft import OrderPair, PlanSource, frft_2d

__all__ = [
    "ALGORITHMS",
    "BASELINE",
    "DWT_FAMILY",
    "EncryptedImage",
    "EncryptionKey",
    "decrypt",
    "decrypt_baseline",
    "decrypt_dwt",
    "encrypt",
    "encrypt_baseline",
    "encrypt_dwt",
    "mask_kind_for",
    "partner_algorithm",
]

BASELINE = ("A31", "A32", "A33")
DWT_FAMILY = ("A41", "A42", "A43")
ALGORITHMS = BASELINE + DWT_FAMILY
ALGORITHM_CODES = {name: int(name[1:], 16) for name in ALGORITHMS}

_MASK_KIND = {"1": UNIFORM, "2": LOGISTIC, "3": KAPLAN_YORKE}


def mask_kind_for(algorithm: str) -> str:
    _check_algorithm(algorithm)
    return _MASK_KIND[algorithm[2]]


def partner_algorithm(algorithm: str) -> str:
    """A31 <-> A41, A32 <-> A42, A33 <-> A43."""
    _check_algorithm(algorithm)
    return ("A4" if algorithm in BASELINE else "A3") + algorithm[2]


def _check_algorithm(algorithm):
    if algorithm not in ALGORITHMS:
        raise ParameterError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


@dataclass(frozen=True)
class EncryptionKey:
    """The complete secret: algorithm, four fractional orders, two mask generators."""

    algorithm: str
    orders: tuple[float, float, float, float]
    mask1: MaskSpec
    mask2: MaskSpec

    def __post_init__(self):
        _check_algorithm(self.algorithm)
        orders = tuple(float(o) for o in self.orders)
        if len(orders) != 4:
            raise InvalidOrderError(f"a key needs four orders, got {len(orders)}")
        if not all(math.isfinite(o) for o in orders):
            raise InvalidOrderError(f"orders must be finite, got {orders}")
        object.__setattr__(self, "orders", orders)
        kind = mask_kind_for(self.algorithm)
        for name, spec in (("mask1", self.mask1), ("mask2", self.mask2)):
            if spec.kind != kind:
                raise ParameterError(
                    f"{self.algorithm} requires {kind} masks, but {name} is {spec.kind}")
        if self.mask1 == self.mask2:
            raise ParameterError("mask1 and mask2 must use different seeds")

    @property
    def first_pair(self) -> OrderPair:
        """Orders ``(alpha, beta)``."""
        return OrderPair(self.orders[0], self.orders[1])

    @property
    def second_pair(self) -> OrderPair:
        """Orders ``(gamma, delta)``."""
        return OrderPair(self.orders[2], self.orders[3])

    def with_orders(self, *orders: float) -> "EncryptionKey":
        if len(orders) == 1:
            orders = orders * 4
        return EncryptionKey(self.algorithm, orders, self.mask1, self.mask2)

    def with_algorithm(self, algorithm: str) -> "EncryptionKey":
        return EncryptionKey(algorithm, self.orders, self.mask1, self.mask2)


@dataclass(frozen=True, eq=False)
class EncryptedImage:
    """Complex channels ``(3, M, N)`` plus the algorithm that produced them."""

    channels: np.ndarray
    algorithm: str

    def __post_init__(self):
        _check_algorithm(self.algorithm)
        ch = np.asarray(self.channels, dtype=np.complex128)
        if ch.ndim != 3 or ch.shape[0] != 3:
            raise DimensionError(f"expected channels of shape (3, M, N), got {ch.shape}")
        object.__setattr__(self, "channels", ch)

    @property
    def dims(self) -> tuple[int, int]:
        return self.channels.shape[1], self.channels.shape[2]


def _as_channels(image, check_finite=False) -> np.ndarray:
    x = np.asarray(image)
    if x.ndim != 3 or x.shape[0] != 3:
        raise DimensionError(f"expected channels of shape (3, M, N), got {x.shape}")
    if check_finite and not np.isfinite(x).all():
        raise DimensionError("image contains non-finite values")
    return x


def _map_channels(fn, channels, workers):
    out = np.empty(channels.shape, dtype=np.complex128)

    def run(i):
        out[i] = fn(channels[i])

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(channels))) as pool:
            list(pool.map(run, range(len(channels))))
    else:
        for i in range(len(channels)):
            run(i)
    return out


def _baseline_dims(m, n):
    if m < 2 or n < 2:
        raise DimensionError(f"baseline algorithms need images of at least 2x2, got {m}x{n}")


def _dwt_dims(m, n):
    if m % 2 or n % 2:
        raise OddDimensionError(f"DWT algorithms need even dimensions, got {m}x{n}")
    if m < 4 or n < 4:
        raise DimensionError(f"DWT algorithms need images of at least 4x4, got {m}x{n}")


def _require(key, family):
    if key.algorithm not in family:
        raise ParameterError(f"algorithm {key.algorithm} is not one of {family}")


def encrypt_baseline(image, key: EncryptionKey, plans: PlanSource | None = None,
                     workers: int = 1) -> EncryptedImage:
    _require(key, BASELINE)
    f = _as_channels(image, check_finite=True)
    m, n = f.shape[1:]
    _baseline_dims(m, n)
    m1 = make_mask(key.mask1, m, n)
    m2 = make_mask(key.mask2, m, n)
    first, second = key.first_pair, key.second_pair

    def run(channel):
        return frft_2d(frft_2d(channel * m1, first, plans) * m2, second, plans)

    return EncryptedImage(_map_channels(run, f, workers), key.algorithm)


def decrypt_baseline(enc: EncryptedImage, key: EncryptionKey,
                     plans: PlanSource | None = None, workers: int = 1) -> np.ndarray:
    """Complex ``(3, M, N)`` reconstruction; take ``.real`` for display."""
    _require(key, BASELINE)
    g = _as_channels(enc.channels if isinstance(enc, EncryptedImage) else enc)
    m, n = g.shape[1:]
    _baseline_dims(m, n)
    c1 = conj_mask(make_mask(key.mask1, m, n))
    c2 = conj_mask(make_mask(key.mask2, m, n))
    first, second = -key.first_pair, -key.second_pair

    def run(channel):
        return c1 * frft_2d(c2 * frft_2d(channel, second, plans), first, plans)

    return _map_channels(run, g, workers)


def encrypt_dwt(image, key: EncryptionKey, plans: PlanSource | None = None,
                workers: int = 1) -> EncryptedImage:
    _require(key, DWT_FAMILY)
    f = _as_channels(image, check_finite=True)
    m, n = f.shape[1:]
    _dwt_dims(m, n)
    m1 = make_mask(key.mask1, m // 2, n // 2)
    m2 = make_mask(key.mask2, m // 2, n // 2)
    first, second = key.first_pair, key.second_pair

    def run(channel):
        sb = dwt2_haar(channel)
        ll = frft_2d(frft_2d(sb.ll * m1, second, plans) * m2, first, plans)
        return idwt2_haar(SubbandSet(ll, sb.lh, sb.hl, sb.hh))

    return EncryptedImage(_map_channels(run, f, workers), key.algorithm)


def decrypt_dwt(enc: EncryptedImage, key: EncryptionKey,
                plans: PlanSource | None = None, workers: int = 1) -> np.ndarray:
    _require(key, DWT_FAMILY)
    g = _as_channels(enc.channels if isinstance(enc, EncryptedImage) else enc)
    m, n = g.shape[1:]
    _dwt_dims(m, n)
    c1 = conj_mask(make_mask(key.mask1, m // 2, n // 2))
    c2 = conj_mask(make_mask(key.mask2, m // 2, n // 2))
    first, second = -key.first_pair, -key.second_pair

    def run(channel):
        sb = dwt2_haar(channel)
        ll = c1 * frft_2d(c2 * frft_2d(sb.ll, first, plans), second, plans)
        return idwt2_haar(SubbandSet(ll, sb.lh, sb.hl, sb.hh))

    return _map_channels(run, g, workers)


def encrypt(image, key: EncryptionKey, plans: PlanSource | None = None,
            workers: int = 1) -> EncryptedImage:
    fn = encrypt_baseline if key.algorithm in BASELINE else encrypt_dwt
    return fn(image, key, plans, workers)


def decrypt(enc, key: EncryptionKey, plans: PlanSource | None = None,
            workers: int = 1) -> np.ndarray:
    """Decrypt with ``key``; an :class:`EncryptedImage` must carry the key's algorithm."""
    if isinstance(enc, EncryptedImage) and enc.algorithm != key.algorithm:
        raise ParameterError(
            f"image was encrypted with {enc.algorithm} but the key is for {key.algorithm}")
    fn = decrypt_baseline if key.algorithm in BASELINE else decrypt_dwt
    return fn(enc, key, plans, workers)
