"""File formats: plain images, encrypted containers, previews and key files.

Container layout (all little-endian)::

    offset  size  field
    0       4     magic  b"FRTC"
    4       2     version (uint16, = 1)
    6       1     algorithm code (uint8: 0x31 0x32 0x33 0x41 0x42 0x43)
    7       4     width  N (uint32)
    11      4     height M (uint32)
    15      1     channel count (uint8, = 3)
    16      ...   payload: R, G, B channels, each row-major, each element a
                  float64 real part followed by a float64 imaginary part

The payload is exactly ``3 * M * N * 16`` bytes.  Containers hold only the
ciphertext; keys live in separate text files of ``name = value`` lines.
"""

from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .chaos import DEFAULT_BURN_IN, KINDS, PARAM_NAMES, UNIFORM, MaskSpec
from .errors import DimensionError, FormatError, KeyFileError, ParameterError
from .pipeline import ALGORITHM_CODES, EncryptedImage, EncryptionKey

__all__ = [
    "HEADER",
    "MAGIC",
    "VERSION",
    "export_preview",
    "load_container",
    "load_image",
    "read_key",
    "save_container",
    "save_image",
    "write_key",
]

MAGIC = b"FRTC"
VERSION = 1
HEADER = struct.Struct("<4sHBIIB")
CHANNELS = 3
_ALGORITHM_NAMES = {code: name for name, code in ALGORITHM_CODES.items()}
_IMAGE_FORMATS = {"PNG", "TIFF"}
_SAVE_FORMATS = {".png": "PNG", ".tif": "TIFF", ".tiff": "TIFF"}
_U32_MAX = 2**32 - 1


# -- plain images ------------------------------------------------------------

def load_image(path) -> np.ndarray:
    """Read an 8-bit PNG or TIFF as float64 channels ``(3, M, N)`` in [0, 255].

    Grayscale images are promoted to three identical channels and palette
    images are expanded to RGB.  Other modes (alpha, 16-bit, float, 1-bit)
    are rejected.
    """
    try:
        with Image.open(path) as im:
            if im.format not in _IMAGE_FORMATS:
                raise FormatError(f"{path}: unsupported image format {im.format}; use PNG or TIFF")
            if im.mode == "P":
                im = im.convert("RGB")
            if im.mode == "L":
                gray = np.asarray(im, dtype=np.float64)
                return np.repeat(gray[None], CHANNELS, axis=0)
            if im.mode != "RGB":
                raise FormatError(
                    f"{path}: unsupported image mode {im.mode}; expected 8-bit RGB or grayscale")
            rgb = np.asarray(im, dtype=np.float64)
    except (UnidentifiedImageError, OSError) as exc:
        raise FormatError(f"{path}: cannot read image ({exc})") from exc
    return np.ascontiguousarray(rgb.transpose(2, 0, 1))


def _to_rgb8(channels: np.ndarray) -> Image.Image:
    return Image.fromarray(np.ascontiguousarray(channels.transpose(1, 2, 0)), mode="RGB")


def _save_format(path) -> str:
    fmt = _SAVE_FORMATS.get(Path(path).suffix.lower())
    if fmt is None:
        raise FormatError(f"{path}: output image must end in .png, .tif or .tiff")
    return fmt


def save_image(channels, path) -> None:
    """Write the real part of ``(3, M, N)`` channels, rounded and clipped to 8 bits."""
    x = np.asarray(channels)
    if x.ndim != 3 or x.shape[0] != CHANNELS:
        raise DimensionError(f"expected channels of shape (3, M, N), got {x.shape}")
    fmt = _save_format(path)
    px = np.clip(np.rint(x.real), 0, 255).astype(np.uint8)
    _to_rgb8(px).save(path, format=fmt)


def export_preview(enc: EncryptedImage, path) -> None:
    """Magnitude of each channel, min-max scaled to 0..255, as an RGB image."""
    mag = np.abs(enc.channels)
    lo = mag.min(axis=(1, 2), keepdims=True)
    span = mag.max(axis=(1, 2), keepdims=True) - lo
    scaled = np.divide(mag - lo, span, out=np.zeros_like(mag), where=span > 0)
    px = np.rint(255.0 * scaled).astype(np.uint8)
    _to_rgb8(px).save(path, format=_save_format(path))


# -- containers --------------------------------------------------------------

def save_container(enc: EncryptedImage, path) -> None:
    m, n = enc.dims
    if m > _U32_MAX or n > _U32_MAX:
        raise DimensionError(f"image of {m}x{n} does not fit the container's 32-bit dimensions")
    header = HEADER.pack(MAGIC, VERSION, ALGORITHM_CODES[enc.algorithm], n, m, CHANNELS)
    payload = np.ascontiguousarray(enc.channels, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load_container(path) -> EncryptedImage:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < HEADER.size:
        raise FormatError(f"{path}: file too short for a container header")
    magic, version, code, width, height, count = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}, not a container")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported container version {version}")
    if code not in _ALGORITHM_NAMES:
        raise FormatError(f"{path}: unknown algorithm code 0x{code:02x}")
    if count != CHANNELS:
        raise FormatError(f"{path}: expected {CHANNELS} channels, header says {count}")
    if width == 0 or height == 0:
        raise FormatError(f"{path}: empty image ({width}x{height})")
    expected = CHANNELS * width * height * 16
    actual = len(data) - HEADER.size
    if actual < expected:
        raise FormatError(f"{path}: truncated payload ({actual} of {expected} bytes)")
    if actual > expected:
        raise FormatError(f"{path}: {actual - expected} unexpected trailing bytes")
    channels = np.frombuffer(data, dtype="<c16", offset=HEADER.size)
    channels = channels.astype(np.complex128).reshape(CHANNELS, height, width)
    return EncryptedImage(channels, _ALGORITHM_NAMES[code])


# -- key files ---------------------------------------------------------------

_ORDER_FIELDS = ("alpha", "beta", "gamma", "delta")


def _fmt(value) -> str:
    return str(value) if isinstance(value, int) else format(value, ".17g")


def write_key(key: EncryptionKey, path) -> None:
    """Write ``key`` as ``name = value`` lines; floats keep 17 significant digits."""
    if key.mask1.burn_in != key.mask2.burn_in:
        raise ParameterError("key files store one burn_in; both masks must use the same value")
    lines = ["# frtcrypt key file", f"algorithm = {key.algorithm}"]
    lines += [f"{name} = {_fmt(v)}" for name, v in zip(_ORDER_FIELDS, key.orders)]
    lines.append(f"burn_in = {key.mask1.burn_in}")
    for label, spec in (("mask1", key.mask1), ("mask2", key.mask2)):
        lines.append(f"{label}.kind = {spec.kind}")
        lines += [f"{label}.{name} = {_fmt(spec.params[name])}" for name in PARAM_NAMES[spec.kind]]
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _parse_lines(text):
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not name:
            raise KeyFileError(f"expected 'name = value', got {raw.strip()!r}", lineno)
        if name in fields:
            raise KeyFileError(f"duplicate field {name!r}", lineno)
        fields[name] = (value, lineno)
    return fields


def _number(fields, name, parse):
    value, lineno = fields[name]
    try:
        result = parse(value)
    except ValueError:
        raise KeyFileError(f"{name}: cannot parse {value!r}", lineno) from None
    if isinstance(result, float) and not math.isfinite(result):
        raise KeyFileError(f"{name}: value must be finite, got {value!r}", lineno)
    return result


def read_key(path) -> EncryptionKey:
    """Parse a key file written by :func:`write_key`.

    Unknown or duplicate fields, missing fields and unparsable values raise
    :class:`KeyFileError` with the offending line number where one exists.
    Range and consistency violations surface as :class:`ParameterError` or
    :class:`InvalidOrderError` from the key constructors.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise KeyFileError(f"{path}: not UTF-8 text") from exc
    fields = _parse_lines(text)

    allowed = {"algorithm", "burn_in", *_ORDER_FIELDS, "mask1.kind", "mask2.kind"}
    kinds = {}
    for label in ("mask1", "mask2"):
        entry = fields.get(f"{label}.kind")
        if entry is not None:
            if entry[0] not in KINDS:
                raise KeyFileError(f"{label}.kind: unknown kind {entry[0]!r}", entry[1])
            kinds[label] = entry[0]
            allowed.update(f"{label}.{p}" for p in PARAM_NAMES[entry[0]])
    for name, (_, lineno) in fields.items():
        if name not in allowed:
            raise KeyFileError(f"unknown field {name!r}", lineno)

    required = ["algorithm", *_ORDER_FIELDS, "mask1.kind", "mask2.kind"]
    for label, kind in kinds.items():
        required += [f"{label}.{p}" for p in PARAM_NAMES[kind]]
    for name in required:
        if name not in fields:
            raise KeyFileError(f"missing field {name!r}")

    burn_in = _number(fields, "burn_in", int) if "burn_in" in fields else DEFAULT_BURN_IN
    specs = []
    for label in ("mask1", "mask2"):
        kind = kinds[label]
        parse = int if kind == UNIFORM else float
        params = {p: _number(fields, f"{label}.{p}", parse) for p in PARAM_NAMES[kind]}
        specs.append(MaskSpec(kind, params, burn_in))
    orders = tuple(_number(fields, name, float) for name in _ORDER_FIELDS)
    algorithm = fields["algorithm"][0]
    return EncryptionKey(algorithm, orders, specs[0], specs[1])
