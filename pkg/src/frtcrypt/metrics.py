"""Restoration error, fractional-order sweeps and timing harness.

MSE follows the per-channel definition

    MSE_i = (1 / MN) * sum |f'_i(x, y) - f_i(x, y)|^2

on 0-255 scaled channels, with the squared complex modulus so that complex
decryptions can be compared directly against the real plain image.

Timing runs are serial: BLAS is pinned to one thread and channels are not
parallelised, one warm-up run is discarded and the median of the remaining
runs is reported.
"""

from __future__ import annotations

import csv
import statistics
import time
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import DimensionError, ParameterError
from .frft import PlanCache, PlanSource, build_plan, cold_plan
from .pipeline import BASELINE, DWT_FAMILY, EncryptionKey, decrypt, encrypt

__all__ = [
    "CACHE_MODES",
    "MseTriple",
    "SweepRow",
    "TimingRow",
    "mse_channels",
    "plan_source",
    "speedup_report",
    "sweep_orders",
    "time_pipeline",
    "write_sweep_csv",
    "write_timing_csv",
]

SWEEP_MODES = ("decrypt-order", "both-orders")
CACHE_MODES = ("on", "off", "cold")


class MseTriple(NamedTuple):
    r: float
    g: float
    b: float


class SweepRow(NamedTuple):
    order: float
    mse: MseTriple


class TimingRow(NamedTuple):
    order: float
    baseline_seconds: float
    proposed_seconds: float
    ratio: float


def mse_channels(a, b) -> MseTriple:
    """Per-channel mean squared modulus of ``a - b`` for ``(3, M, N)`` arrays."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot compare shapes {a.shape} and {b.shape}")
    if a.ndim != 3 or a.shape[0] != 3:
        raise DimensionError(f"expected channels of shape (3, M, N), got {a.shape}")
    d = a - b
    sq = d.real * d.real
    if np.iscomplexobj(d):
        sq += d.imag * d.imag
    return MseTriple(*(float(v) for v in sq.mean(axis=(1, 2))))


def plan_source(cache: str) -> PlanSource:
    """Plan source for a cache mode.

    ``on``
        A fresh :class:`PlanCache`; each (size, order) plan is built once.
    ``off``
        Every transform assembles its plan matrix again.  The size-only
        eigenbasis stays memoised since it does not depend on the order.
    ``cold``
        Nothing is memoised; each plan also redoes the eigendecomposition.
    """
    if cache == "on":
        return PlanCache()
    if cache == "off":
        return build_plan
    if cache == "cold":
        return cold_plan
    raise ParameterError(f"cache mode must be one of {CACHE_MODES}, got {cache!r}")


def sweep_orders(image, key: EncryptionKey, orders: Iterable[float],
                 mode: str = "decrypt-order", plans: PlanSource | None = None,
                 workers: int = 1) -> list[SweepRow]:
    """MSE against ``image`` with all four orders set to each sweep value.

    In ``decrypt-order`` mode the image is encrypted once with ``key`` and
    decrypted at every sweep order.  ``both-orders`` encrypts and decrypts at
    the sweep order, which isolates the transform's own round-trip error.
    """
    if mode not in SWEEP_MODES:
        raise ParameterError(f"sweep mode must be one of {SWEEP_MODES}, got {mode!r}")
    orders = [float(v) for v in orders]
    if not orders:
        raise ParameterError("order sweep needs at least one order")
    image = np.asarray(image)
    if plans is None:
        plans = PlanCache()
    enc = encrypt(image, key, plans, workers) if mode == "decrypt-order" else None
    rows = []
    for v in orders:
        k = key.with_orders(v)
        e = enc if enc is not None else encrypt(image, k, plans, workers)
        rows.append(SweepRow(v, mse_channels(decrypt(e, k, plans, workers), image)))
    return rows


def time_pipeline(image, key: EncryptionKey, repeats: int = 5, cache: str = "off") -> float:
    """Median seconds for one full encrypt and decrypt.

    One extra warm-up run is executed first and discarded.  With
    ``cache="on"`` the warm-up also fills the plan cache, so the timed runs
    measure plan reuse.
    """
    if int(repeats) != repeats or repeats < 1:
        raise ParameterError(f"repeats must be a positive integer, got {repeats!r}")
    image = np.asarray(image, dtype=np.float64)
    plans = plan_source(cache)
    times = []
    with threadpool_limits(limits=1):
        for i in range(int(repeats) + 1):
            t0 = time.perf_counter()
            decrypt(encrypt(image, key, plans, 1), key, plans, 1)
            elapsed = time.perf_counter() - t0
            if i:
                times.append(elapsed)
    return statistics.median(times)


def speedup_report(image, pair: tuple[EncryptionKey, EncryptionKey],
                   orders: Sequence[float], repeats: int = 5,
                   cache: str = "off") -> list[TimingRow]:
    """Baseline and DWT-variant timings at each order.

    ``pair`` is ``(baseline_key, proposed_key)``; both keys must use the same
    mask family and only their algorithm differs.  The two variants are
    timed back to back at every order.
    """
    base, prop = pair
    if base.algorithm not in BASELINE or prop.algorithm not in DWT_FAMILY:
        raise ParameterError(
            f"pair must be (baseline, DWT variant), got ({base.algorithm}, {prop.algorithm})")
    if base.algorithm[2] != prop.algorithm[2]:
        raise ParameterError(
            f"{base.algorithm} and {prop.algorithm} use different mask families")
    rows = []
    for v in orders:
        tb = time_pipeline(image, base.with_orders(v), repeats, cache)
        tp = time_pipeline(image, prop.with_orders(v), repeats, cache)
        rows.append(TimingRow(float(v), tb, tp, tb / tp))
    return rows


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_sweep_csv(rows: Iterable[SweepRow], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["order", "mse_r", "mse_g", "mse_b"])
    for row in rows:
        w.writerow([_fmt(row.order), *(_fmt(v) for v in row.mse)])


def write_timing_csv(rows: Iterable[TimingRow], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["order", "baseline_s", "proposed_s", "ratio"])
    for row in rows:
        w.writerow([_fmt(v) for v in row])
