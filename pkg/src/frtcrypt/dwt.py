"""Single-level orthonormal 2-D Haar transform.

Each non-overlapping 2x2 block ``[[a, b], [c, d]]`` maps to one coefficient
in each subband::

    ll = (a + b + c + d) / 2      lh = (a - b + c - d) / 2
    hl = (a + b - c - d) / 2      hh = (a - b - c + d) / 2

which is the separable low/high-pass Haar filter pair applied along rows and
columns followed by downsampling by two.  The transform is orthonormal, so it
conserves energy and inverts exactly.  Complex input is supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionError, OddDimensionError

__all__ = ["SubbandSet", "dwt2_haar", "idwt2_haar"]


@dataclass(frozen=True, eq=False)
class SubbandSet:
    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    def __post_init__(self):
        shapes = {np.shape(b) for b in (self.ll, self.lh, self.hl, self.hh)}
        if len(shapes) != 1 or len(next(iter(shapes))) != 2:
            raise DimensionError(f"subbands must share one 2-D shape, got {sorted(shapes)}")

    @property
    def parent_dims(self) -> tuple[int, int]:
        m, n = self.ll.shape
        return 2 * m, 2 * n

    def energy(self) -> float:
        return float(sum(np.vdot(b, b).real for b in (self.ll, self.lh, self.hl, self.hh)))


def dwt2_haar(channel) -> SubbandSet:
    x = np.asarray(channel)
    if x.ndim != 2:
        raise DimensionError(f"expected a 2-D array, got shape {x.shape}")
    m, n = x.shape
    if m < 2 or n < 2 or m % 2 or n % 2:
        raise OddDimensionError(
            f"Haar DWT needs even dimensions >= 2, got {m}x{n}")
    dtype = np.complex128 if np.iscomplexobj(x) else np.float64
    x = np.ascontiguousarray(x, dtype=dtype)
    ll, lh, hl, hh = (np.empty((m // 2, n // 2), dtype=dtype) for _ in range(4))
    _kernels.haar_forward(x, ll, lh, hl, hh)
    return SubbandSet(ll=ll, lh=lh, hl=hl, hh=hh)


def idwt2_haar(subbands: SubbandSet) -> np.ndarray:
    # Real and complex bands may be mixed (encrypted LL with plain details).
    bands = [np.ascontiguousarray(b, dtype=np.complex128 if np.iscomplexobj(b) else np.float64)
             for b in (subbands.ll, subbands.lh, subbands.hl, subbands.hh)]
    dtype = np.result_type(*bands)
    ll, lh, hl, hh = bands
    m, n = subbands.parent_dims
    out = np.empty((m, n), dtype=dtype)
    _kernels.haar_inverse(ll, lh, hl, hh, out)
    return out
