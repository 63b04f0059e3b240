"""Built-in invariant checks for the transform, wavelet, chaos and pipeline layers.

Each property group is evaluated at sizes 8, 16 and 64 and reports the worst
error seen against its tolerance.  Inputs come from a fixed seed, so the
table is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chaos import MaskSpec, conj_mask, gen_chaotic_map, logistic_iterate, make_mask, tent_iterate
from .dwt import dwt2_haar, idwt2_haar
from .frft import PlanCache, build_plan, centered_dft_matrix, frft_1d
from .pipeline import ALGORITHMS, EncryptionKey, decrypt, encrypt

SIZES = (8, 16, 64)
ORDERS = (0.3, 0.5, 1.0, 1.7, 2.5)


@dataclass(frozen=True)
class CheckResult:
    group: str
    size: int
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)


def _rand_c(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _unitarity(n, rng):
    eye = np.eye(n)
    return max(np.abs(m @ m.conj().T - eye).max()
               for m in (build_plan(n, a).matrix for a in ORDERS))


def _additivity(n, rng):
    x = _rand_c(rng, n)
    err = 0.0
    for a1, a2 in ((0.3, 0.9), (1.1, 1.4), (0.5, -0.2)):
        two = frft_1d(build_plan(n, a2), frft_1d(build_plan(n, a1), x))
        one = frft_1d(build_plan(n, a1 + a2), x)
        err = max(err, np.abs(two - one).max())
    return err


def _period4(n, rng):
    return max(np.abs(build_plan(n, a + 4).matrix - build_plan(n, a).matrix).max()
               for a in ORDERS)


def parity_matrix(n):
    """Index reversal about ``n // 2`` on the centred grid."""
    p = np.zeros((n, n))
    j = np.arange(n)
    p[j, (2 * (n // 2) - j) % n] = 1.0
    return p


def _special_orders(n, rng):
    # Order 0 must be the identity exactly, so any deviation there fails outright.
    ident = 0.0 if np.array_equal(build_plan(n, 0.0).matrix, np.eye(n)) else np.inf
    par = np.abs(build_plan(n, 2.0).matrix - parity_matrix(n)).max()
    dft = np.abs(build_plan(n, 1.0).matrix - centered_dft_matrix(n)).max()
    return max(ident, par, dft)


def _inverse_adjoint(n, rng):
    return max(np.abs(build_plan(n, -a).matrix - build_plan(n, a).matrix.conj().T).max()
               for a in ORDERS)


def _gaussian(n, rng):
    u = (np.arange(n) - n // 2) / np.sqrt(n)
    g = np.exp(-np.pi * u * u)
    out = frft_1d(build_plan(n, 0.5), g)
    return np.linalg.norm(out - g) / np.linalg.norm(g)


def _dwt_reconstruction(n, rng):
    err = 0.0
    for x in (rng.standard_normal((n, n)), _rand_c(rng, n, n)):
        err = max(err, np.abs(idwt2_haar(dwt2_haar(x)) - x).max())
    return err


def _dwt_energy(n, rng):
    x = _rand_c(rng, n, n)
    e = np.vdot(x, x).real
    return abs(dwt2_haar(x).energy() - e) / e


def _chaos_bounded(n, rng):
    # Distance outside [0, 1]; zero when every iterate is in range.
    worst = 0.0
    for seq in (logistic_iterate(3.99, 0.3, 100 * n), tent_iterate(1.99, 0.3, 100 * n)):
        worst = max(worst, -seq.min(), seq.max() - 1.0, 0.0)
    return worst


def _chaos_determinism(n, rng):
    specs = (MaskSpec.logistic(3.99, 0.3), MaskSpec.tent(1.7, 0.2),
             MaskSpec.kaplan_yorke(1.99, 0.3, 0.3, 0.1))
    diff = max(np.abs(gen_chaotic_map(s, n, n) - gen_chaotic_map(s, n, n)).max() for s in specs)
    return diff


def _mask_modulus(n, rng):
    err = 0.0
    for spec in (MaskSpec.uniform(7), MaskSpec.logistic(3.99, 0.3),
                 MaskSpec.kaplan_yorke(1.99, 0.3, 0.3, 0.1)):
        m = make_mask(spec, n, n)
        err = max(err, np.abs(np.abs(m) - 1.0).max(), np.abs(m * conj_mask(m) - 1.0).max())
    return err


_MASKS = {
    "1": (MaskSpec.uniform(11), MaskSpec.uniform(12)),
    "2": (MaskSpec.logistic(3.99, 0.31), MaskSpec.logistic(3.99, 0.62)),
    "3": (MaskSpec.kaplan_yorke(1.99, 0.3, 0.31, 0.1), MaskSpec.kaplan_yorke(1.99, 0.3, 0.62, 0.2)),
}


def _pipeline_roundtrip(n, rng):
    image = rng.uniform(0.0, 255.0, (3, n, n))
    plans = PlanCache()
    err = 0.0
    for alg in ALGORITHMS:
        key = EncryptionKey(alg, (0.5, 0.3, 0.7, 1.2), *_MASKS[alg[2]])
        back = decrypt(encrypt(image, key, plans), key, plans)
        err = max(err, float((np.abs(back - image) ** 2).mean(axis=(1, 2)).max()))
    return err


def _pipeline_norm(n, rng):
    image = rng.uniform(0.0, 255.0, (3, n, n))
    key = EncryptionKey("A32", (0.5, 0.5, 0.5, 0.5), *_MASKS["2"])
    g = encrypt(image, key, PlanCache()).channels
    ref = np.linalg.norm(image, axis=(1, 2))
    return float(np.abs(np.linalg.norm(g, axis=(1, 2)) - ref).max() / ref.max())


GROUPS: list[tuple[str, Callable, float, tuple[int, ...]]] = [
    ("frft.unitarity", _unitarity, 1e-10, SIZES),
    ("frft.additivity", _additivity, 1e-10, SIZES),
    ("frft.period4", _period4, 1e-10, SIZES),
    ("frft.special-orders", _special_orders, 1e-10, SIZES),
    ("frft.inverse-adjoint", _inverse_adjoint, 1e-10, SIZES),
    ("frft.gaussian", _gaussian, 1e-3, (64,)),
    ("dwt.reconstruction", _dwt_reconstruction, 1e-12, SIZES),
    ("dwt.energy", _dwt_energy, 1e-9, SIZES),
    ("chaos.bounded", _chaos_bounded, 0.0, SIZES),
    ("chaos.determinism", _chaos_determinism, 0.0, SIZES),
    ("chaos.mask-modulus", _mask_modulus, 1e-12, SIZES),
    ("pipeline.roundtrip-mse", _pipeline_roundtrip, 1e-18, SIZES),
    ("pipeline.norm", _pipeline_norm, 1e-9, SIZES),
]


def run(seed: int = 2024) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    for name, fn, tol, sizes in GROUPS:
        for n in sizes:
            results.append(CheckResult(name, n, float(fn(n, rng)), tol))
    return results


def format_table(results: list[CheckResult]) -> str:
    lines = [f"{'group':<24} {'N':>3} {'max error':>11} {'tolerance':>10}  result"]
    for r in results:
        lines.append(f"{r.group:<24} {r.size:>3} {r.error:>11.3e} {r.tolerance:>10.1e}  "
                     f"{'pass' if r.passed else 'FAIL'}")
    failed = sum(not r.passed for r in results)
    groups = len({r.group for r in results})
    lines.append(f"{groups} groups, {len(results)} checks, {failed} failed")
    return "\n".join(lines)
