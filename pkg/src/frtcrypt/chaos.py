"""Chaotic sequences, 2-D chaotic maps and unit-modulus phase masks.

Three one- and two-dimensional maps drive the chaotic masks:

* logistic      ``x <- p x (1 - x)``                     0 < p <= 4
* tent          ``x <- a x`` if ``x <= 0.5`` else ``a (1 - x)``   0 < a <= 2
* Kaplan-Yorke  ``y <- b y + cos(4 pi x)``, ``x <- a x mod 1``  0 <= a <= 2, 0 <= b < 1

A chaotic map ``S`` of shape ``(m, n)`` is filled row-major from the iterates
that follow ``burn_in`` discarded ones.  Logistic and tent maps use ``x``
directly; Kaplan-Yorke uses ``y`` min-max normalised over the block.  The
chaotic random phase mask is ``exp(i pi/2 S)``.

Plain random masks use xoshiro256** seeded through splitmix64 (see
:func:`seed_state`); each draw ``r`` becomes ``u = (r >> 11) * 2**-53`` and
the mask entry is ``exp(2 pi i u)``.  The recurrences are, on 64-bit
unsigned integers with wrap-around::

    splitmix64:   z = (s += 0x9E3779B97F4A7C15)
                  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
                  z = (z ^ (z >> 27)) * 0x94D049BB133111EB
                  return z ^ (z >> 31)

    xoshiro256**: r  = rotl(s1 * 5, 7) * 9
                  t  = s1 << 17
                  s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3
                  s2 ^= t;  s3 = rotl(s3, 45)
                  return r
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import FlatSequenceError, ParameterError

__all__ = [
    "KINDS",
    "MaskSpec",
    "chaotic_source",
    "conj_mask",
    "crpm",
    "gen_chaotic_map",
    "ky_iterate",
    "logistic_iterate",
    "make_mask",
    "seed_state",
    "splitmix64",
    "tent_iterate",
    "uniform_draws",
    "uniform_rpm",
]

UNIFORM = "uniform-random"
LOGISTIC = "logistic"
TENT = "tent"
KAPLAN_YORKE = "kaplan-yorke"
KINDS = (UNIFORM, LOGISTIC, TENT, KAPLAN_YORKE)

PARAM_NAMES = {
    UNIFORM: ("seed",),
    LOGISTIC: ("p", "x0"),
    TENT: ("a", "x0"),
    KAPLAN_YORKE: ("a", "b", "x0", "y0"),
}

DEFAULT_BURN_IN = 1000
_MASK64 = (1 << 64) - 1


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    return value


def _check_logistic(p, x0):
    p, x0 = _finite("p", p), _finite("x0", x0)
    if not 0.0 < p <= 4.0:
        raise ParameterError(f"logistic p must satisfy 0 < p <= 4, got {p!r}")
    if not 0.0 <= x0 <= 1.0:
        raise ParameterError(f"logistic x0 must satisfy 0 <= x0 <= 1, got {x0!r}")
    return p, x0


def _check_tent(a, x0):
    a, x0 = _finite("a", a), _finite("x0", x0)
    if not 0.0 < a <= 2.0:
        raise ParameterError(f"tent a must satisfy 0 < a <= 2, got {a!r}")
    if not 0.0 <= x0 <= 1.0:
        raise ParameterError(f"tent x0 must satisfy 0 <= x0 <= 1, got {x0!r}")
    return a, x0


def _check_ky(a, b, x0, y0):
    a, b = _finite("a", a), _finite("b", b)
    x0, y0 = _finite("x0", x0), _finite("y0", y0)
    if not 0.0 <= a <= 2.0:
        raise ParameterError(f"kaplan-yorke a must satisfy 0 <= a <= 2, got {a!r}")
    if not 0.0 <= b < 1.0:
        raise ParameterError(f"kaplan-yorke b must satisfy 0 <= b < 1, got {b!r}")
    if not 0.0 <= x0 <= 1.0:
        raise ParameterError(f"kaplan-yorke x0 must satisfy 0 <= x0 <= 1, got {x0!r}")
    return a, b, x0, y0


def _check_count(n):
    if int(n) != n or n < 0:
        raise ParameterError(f"iteration count must be a non-negative integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class MaskSpec:
    """Generator parameters for one phase mask.

    ``params`` holds the named scalars for ``kind`` (see ``PARAM_NAMES``).
    Use the ``uniform``/``logistic``/``tent``/``kaplan_yorke`` constructors.
    """

    kind: str
    params: dict = field(default_factory=dict)
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown mask kind {self.kind!r}; expected one of {KINDS}")
        names = PARAM_NAMES[self.kind]
        missing = [k for k in names if k not in self.params]
        extra = [k for k in self.params if k not in names]
        if missing:
            raise ParameterError(f"{self.kind} mask is missing parameter(s) {', '.join(missing)}")
        if extra:
            raise ParameterError(f"{self.kind} mask got unknown parameter(s) {', '.join(extra)}")
        if not isinstance(self.burn_in, (int, np.integer)) or self.burn_in < 0:
            raise ParameterError(f"burn_in must be a non-negative integer, got {self.burn_in!r}")
        p = self.params
        if self.kind == UNIFORM:
            seed = p["seed"]
            if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
                raise ParameterError(f"uniform-random seed must be an integer, got {seed!r}")
            clean = {"seed": int(seed)}
        elif self.kind == LOGISTIC:
            clean = dict(zip(names, _check_logistic(p["p"], p["x0"])))
        elif self.kind == TENT:
            clean = dict(zip(names, _check_tent(p["a"], p["x0"])))
        else:
            clean = dict(zip(names, _check_ky(p["a"], p["b"], p["x0"], p["y0"])))
        object.__setattr__(self, "params", clean)
        object.__setattr__(self, "burn_in", int(self.burn_in))

    @classmethod
    def uniform(cls, seed: int, burn_in: int = DEFAULT_BURN_IN) -> "MaskSpec":
        return cls(UNIFORM, {"seed": seed}, burn_in)

    @classmethod
    def logistic(cls, p: float, x0: float, burn_in: int = DEFAULT_BURN_IN) -> "MaskSpec":
        return cls(LOGISTIC, {"p": p, "x0": x0}, burn_in)

    @classmethod
    def tent(cls, a: float, x0: float, burn_in: int = DEFAULT_BURN_IN) -> "MaskSpec":
        return cls(TENT, {"a": a, "x0": x0}, burn_in)

    @classmethod
    def kaplan_yorke(cls, a: float, b: float, x0: float, y0: float,
                     burn_in: int = DEFAULT_BURN_IN) -> "MaskSpec":
        return cls(KAPLAN_YORKE, {"a": a, "b": b, "x0": x0, "y0": y0}, burn_in)


# -- sequences ---------------------------------------------------------------

def logistic_iterate(p: float, x0: float, n: int) -> np.ndarray:
    """The ``n`` iterates following ``x0`` under ``x <- p x (1 - x)``."""
    p, x0 = _check_logistic(p, x0)
    return _kernels.logistic_run(p, x0, 0, _check_count(n))


def tent_iterate(a: float, x0: float, n: int) -> np.ndarray:
    a, x0 = _check_tent(a, x0)
    return _kernels.tent_run(a, x0, 0, _check_count(n))


def ky_iterate(a: float, b: float, x0: float, y0: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Kaplan-Yorke iterates ``(x_1..x_n, y_1..y_n)``.

    ``y`` is updated from the current ``x`` before ``x`` advances.
    """
    a, b, x0, y0 = _check_ky(a, b, x0, y0)
    return _kernels.kaplan_yorke_run(a, b, x0, y0, 0, _check_count(n))


def gen_chaotic_map(spec: MaskSpec, m: int, n: int) -> np.ndarray:
    """Real ``(m, n)`` chaotic map with entries in ``[0, 1]``."""
    if spec.kind == UNIFORM:
        raise ParameterError("uniform-random masks have no chaotic map; use uniform_rpm")
    count = _check_count(m) * _check_count(n)
    if count < 1:
        raise ParameterError(f"map dimensions must be positive, got {m}x{n}")
    p = spec.params
    if spec.kind == LOGISTIC:
        s = _kernels.logistic_run(p["p"], p["x0"], spec.burn_in, count)
    elif spec.kind == TENT:
        s = _kernels.tent_run(p["a"], p["x0"], spec.burn_in, count)
    else:
        _, y = _kernels.kaplan_yorke_run(p["a"], p["b"], p["x0"], p["y0"], spec.burn_in, count)
        lo, hi = y.min(), y.max()
        if not hi > lo:
            raise FlatSequenceError(
                f"kaplan-yorke sequence is constant ({float(lo)!r}) over the {m}x{n} block; "
                "choose a non-integer a or a different seed")
        s = (y - lo) / (hi - lo)
    return s.reshape(m, n)


# -- uniform PRNG ------------------------------------------------------------

def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def seed_state(seed: int) -> np.ndarray:
    """xoshiro256** state: four splitmix64 outputs from ``seed mod 2**64``."""
    s = int(seed) & _MASK64
    words = []
    for _ in range(4):
        s, z = splitmix64(s)
        words.append(z)
    return np.array(words, dtype=np.uint64)


def uniform_draws(seed: int, count: int) -> np.ndarray:
    return _kernels.xoshiro256ss_uniform(seed_state(seed), _check_count(count))


# -- masks -------------------------------------------------------------------

def _unit_phasor(theta: np.ndarray) -> np.ndarray:
    out = np.empty(theta.shape, dtype=np.complex128)
    np.cos(theta, out=out.real)
    np.sin(theta, out=out.imag)
    return out


def crpm(s) -> np.ndarray:
    """Chaotic random phase mask ``exp(i pi/2 s)``."""
    s = np.asarray(s, dtype=np.float64)
    if not np.all(np.isfinite(s)):
        raise ParameterError("chaotic map contains non-finite values")
    return _unit_phasor((0.5 * np.pi) * s)


def uniform_rpm(seed: int, m: int, n: int) -> np.ndarray:
    u = uniform_draws(seed, _check_count(m) * _check_count(n))
    return _unit_phasor((2.0 * np.pi) * u).reshape(m, n)


def conj_mask(mask) -> np.ndarray:
    return np.conj(mask)


def chaotic_source(spec: MaskSpec, m: int, n: int) -> np.ndarray:
    """The real ``(m, n)`` field behind a mask: ``S`` for chaotic kinds, ``u`` for uniform."""
    if spec.kind == UNIFORM:
        return uniform_draws(spec.params["seed"], m * n).reshape(m, n)
    return gen_chaotic_map(spec, m, n)


def make_mask(spec: MaskSpec, m: int, n: int) -> np.ndarray:
    """Materialise the ``(m, n)`` unit-modulus phase mask described by ``spec``."""
    if spec.kind == UNIFORM:
        return uniform_rpm(spec.params["seed"], m, n)
    return crpm(gen_chaotic_map(spec, m, n))
