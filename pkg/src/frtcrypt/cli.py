"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 numeric
failure (including a failing selftest).
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from . import __version__, selftest
from .chaos import (DEFAULT_BURN_IN, KAPLAN_YORKE, LOGISTIC, UNIFORM, MaskSpec, chaotic_source,
                    make_mask)
from .container import (export_preview, load_container, load_image, read_key, save_container,
                        save_image, write_key)
from .errors import FlatSequenceError, FormatError, FrtError, InvalidOrderError, ParameterError
from .metrics import (CACHE_MODES, SWEEP_MODES, mse_channels, speedup_report, sweep_orders,
                      write_sweep_csv, write_timing_csv)
from .pipeline import (ALGORITHMS, BASELINE, DWT_FAMILY, EncryptionKey, decrypt, encrypt,
                       mask_kind_for)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

# Masks used by ``bench`` when no key file is given.
_BENCH_MASKS = {
    UNIFORM: (MaskSpec.uniform(1), MaskSpec.uniform(2)),
    LOGISTIC: (MaskSpec.logistic(3.99, 0.3), MaskSpec.logistic(3.99, 0.7)),
    KAPLAN_YORKE: (MaskSpec.kaplan_yorke(1.99, 0.3, 0.3, 0.1),
                   MaskSpec.kaplan_yorke(1.99, 0.3, 0.6, 0.2)),
}


class UsageError(Exception):
    """Bad command-line input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument helpers --------------------------------------------------------

def parse_range(text: str) -> list[float]:
    """``start:step:end`` inclusive, or a single value.

    Values are ``start + k * step`` computed in exact decimal arithmetic, so
    ``0:0.1:1`` yields exactly eleven values whose last one is ``1.0``.
    """
    parts = text.split(":")
    try:
        nums = [Decimal(p.strip()) for p in parts]
    except InvalidOperation:
        raise UsageError(f"malformed order range {text!r}; expected start:step:end") from None
    if not all(d.is_finite() for d in nums):
        raise UsageError(f"order range {text!r} must use finite numbers")
    if len(nums) == 1:
        return [float(nums[0])]
    if len(nums) != 3:
        raise UsageError(f"malformed order range {text!r}; expected start:step:end")
    start, step, end = nums
    if step == 0:
        raise UsageError("order range step must be non-zero")
    if (end - start) * step < 0:
        raise UsageError(f"order range {text!r} never reaches its end")
    count = int((end - start) / step) + 1
    return [float(start + k * step) for k in range(count)]


def _orders4(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--orders expects four comma-separated numbers, got {text!r}") from None
    if len(values) == 1:
        values *= 4
    if len(values) != 4:
        raise UsageError(f"--orders expects four values alpha,beta,gamma,delta, got {len(values)}")
    return values


def _seed_spec(kind: str, text: str, args, label: str) -> MaskSpec:
    parts = [p.strip() for p in text.split(",")]
    try:
        if kind == UNIFORM:
            if len(parts) != 1:
                raise UsageError(f"{label}: uniform-random masks take one integer seed")
            return MaskSpec.uniform(int(parts[0]), args.burn_in)
        values = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"{label}: cannot parse seed {text!r}") from None
    if kind == LOGISTIC:
        if len(values) != 1:
            raise UsageError(f"{label}: logistic masks take one seed x0")
        return MaskSpec.logistic(args.p, values[0], args.burn_in)
    if len(values) != 2:
        raise UsageError(f"{label}: kaplan-yorke masks take two seeds x0,y0")
    return MaskSpec.kaplan_yorke(args.a, args.b, values[0], values[1], args.burn_in)


def _load_key(path) -> EncryptionKey:
    try:
        return read_key(path)
    except (ParameterError, InvalidOrderError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _load_channels(path) -> np.ndarray:
    """Plain image, container or ``.npy`` array as ``(3, M, N)`` channels."""
    suffix = Path(path).suffix.lower()
    if suffix == ".frtc":
        return load_container(path).channels
    if suffix == ".npy":
        arr = np.load(path, allow_pickle=False)
        if arr.ndim != 3 or arr.shape[0] != 3:
            raise FormatError(f"{path}: expected an array of shape (3, M, N), got {arr.shape}")
        return arr
    return load_image(path)


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _workers(args) -> int:
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    return args.threads


# -- subcommands -------------------------------------------------------------

def cmd_keygen(args) -> int:
    kind = mask_kind_for(args.algorithm)
    orders = _orders4(args.orders)
    try:
        m1 = _seed_spec(kind, args.seed1, args, "--seed1")
        m2 = _seed_spec(kind, args.seed2, args, "--seed2")
        key = EncryptionKey(args.algorithm, orders, m1, m2)
    except (ParameterError, InvalidOrderError) as exc:
        raise UsageError(str(exc)) from exc
    write_key(key, args.out)
    return EXIT_OK


def cmd_encrypt(args) -> int:
    key = _load_key(args.key)
    image = load_image(args.inp)
    enc = encrypt(image, key, workers=_workers(args))
    save_container(enc, args.out)
    if args.preview:
        export_preview(enc, args.preview)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = _load_key(args.key)
    enc = load_container(args.inp)
    if enc.algorithm != key.algorithm:
        raise FormatError(
            f"{args.inp} was encrypted with {enc.algorithm} but the key is for {key.algorithm}")
    out = decrypt(enc, key, workers=_workers(args))
    if Path(args.out).suffix.lower() == ".npy":
        np.save(args.out, out, allow_pickle=False)
    else:
        save_image(out, args.out)
    return EXIT_OK


def cmd_mse(args) -> int:
    a = _load_channels(args.a)
    b = _load_channels(args.b)
    mse = mse_channels(a, b)
    print("mse_r,mse_g,mse_b")
    print(",".join(format(v, ".17g") for v in mse))
    return EXIT_OK


def cmd_sweep(args) -> int:
    orders = parse_range(args.orders)
    key = _load_key(args.key)
    image = load_image(args.inp)
    rows = sweep_orders(image, key, orders, args.mode, workers=_workers(args))
    with _output(args.out) as fh:
        write_sweep_csv(rows, fh)
    return EXIT_OK


def _parse_pair(text: str) -> tuple[str, str]:
    base, sep, prop = text.partition(":")
    if not sep or base not in BASELINE or prop not in DWT_FAMILY:
        raise UsageError(f"--pair expects BASELINE:DWT such as A31:A41, got {text!r}")
    if base[2] != prop[2]:
        raise UsageError(f"--pair {text}: {base} and {prop} use different mask families")
    return base, prop


def cmd_bench(args) -> int:
    base, prop = _parse_pair(args.pair)
    orders = parse_range(args.orders)
    if args.repeats < 1:
        raise UsageError("--repeats must be at least 1")
    kind = mask_kind_for(base)
    if args.key:
        key = _load_key(args.key)
        if key.mask1.kind != kind:
            raise UsageError(f"--key uses {key.mask1.kind} masks but {args.pair} needs {kind}")
        m1, m2 = key.mask1, key.mask2
    else:
        m1, m2 = _BENCH_MASKS[kind]
    image = load_image(args.inp)
    pair = (EncryptionKey(base, (0.5,) * 4, m1, m2), EncryptionKey(prop, (0.5,) * 4, m1, m2))
    rows = speedup_report(image, pair, orders, args.repeats, args.cache)
    with _output(args.out) as fh:
        write_timing_csv(rows, fh)
    return EXIT_OK


def _parse_size(text: str) -> tuple[int, int]:
    m, sep, n = text.lower().partition("x")
    try:
        dims = (int(m), int(n)) if sep else (int(m), int(m))
    except ValueError:
        raise UsageError(f"--size expects ROWSxCOLS, got {text!r}") from None
    if min(dims) < 1:
        raise UsageError(f"--size must be positive, got {text!r}")
    return dims


def _write_matrix_csv(matrix, path) -> None:
    with _output(path) as fh:
        for row in matrix:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def cmd_mask_dump(args) -> int:
    key = _load_key(args.key)
    spec = key.mask1 if args.mask == 1 else key.mask2
    m, n = _parse_size(args.size)
    _write_matrix_csv(chaotic_source(spec, m, n), args.source_out)
    if args.phase_out:
        _write_matrix_csv(np.angle(make_mask(spec, m, n)), args.phase_out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = selftest.run()
    print(selftest.format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frtcrypt",
                     description="Fractional Fourier image encryption with chaotic phase masks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def threads(p):
        p.add_argument("--threads", type=int, default=3,
                       help="channels processed in parallel (default 3)")

    p = sub.add_parser("keygen", help="write a key file")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--orders", default="0.5,0.5,0.5,0.5",
                   help="alpha,beta,gamma,delta (default 0.5 each)")
    p.add_argument("--seed1", required=True,
                   help="integer seed (A31/A41), x0 (A32/A42) or x0,y0 (A33/A43)")
    p.add_argument("--seed2", required=True, help="seed for the second mask, same form")
    p.add_argument("--p", type=float, default=3.99, help="logistic parameter (default 3.99)")
    p.add_argument("--a", type=float, default=1.99, help="Kaplan-Yorke a (default 1.99)")
    p.add_argument("--b", type=float, default=0.3, help="Kaplan-Yorke b (default 0.3)")
    p.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt an image into a container")
    p.add_argument("--in", dest="inp", required=True, help="PNG or TIFF image")
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True, help="container path (.frtc)")
    p.add_argument("--preview", help="also write a magnitude preview image")
    threads(p)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a container")
    p.add_argument("--in", dest="inp", required=True, help="container path")
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True,
                   help=".png/.tif for an 8-bit image, .npy for the full complex result")
    threads(p)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("mse", help="per-channel MSE between two images, containers or .npy files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_mse)

    p = sub.add_parser("sweep", help="decrypt at a range of orders and report MSE")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--orders", default="0:0.1:1", help="start:step:end inclusive")
    p.add_argument("--mode", choices=SWEEP_MODES, default="decrypt-order")
    p.add_argument("--out", help="CSV path (default: standard output)")
    threads(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="time a baseline algorithm against its DWT variant")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--pair", required=True, help="e.g. A31:A41")
    p.add_argument("--orders", default="0.5", help="start:step:end inclusive (default 0.5)")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--cache", choices=CACHE_MODES, default="off")
    p.add_argument("--key", help="take the masks from this key file")
    p.add_argument("--out", help="CSV path (default: standard output)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("mask-dump", help="write a mask's source field and phase as CSV")
    p.add_argument("--key", required=True)
    p.add_argument("--mask", type=int, choices=(1, 2), default=1)
    p.add_argument("--size", required=True, help="ROWSxCOLS")
    p.add_argument("--source-out", required=True,
                   help="CSV of S (chaotic masks) or u (uniform-random masks)")
    p.add_argument("--phase-out", help="CSV of the mask phase in radians")
    p.set_defaults(func=cmd_mask_dump)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"frtcrypt {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FlatSequenceError as exc:
        print(f"frtcrypt {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FrtError, OSError) as exc:
        print(f"frtcrypt {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
