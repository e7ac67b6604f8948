"""On-disk formats: binary field dumps, CSV, PBM/PPM images.

Binary layout (all integers little-endian)::

    magic      4 bytes   b"SHPF" heights | b"SHAF" slopes | b"SHRC" reconstruction
    version    u16
    W, H, L    u32 x 3   L is the lookahead of the source field
    seed       u64
    spec_len   u32, then spec_len bytes of UTF-8 JSON
    [SHAF only] truncation u32
    payload    f64 row-major: (W+L)*H heights, or W*H slopes / recovered values
    [SHAF only] W*H u32 least maximizing offsets
"""

from __future__ import annotations

import csv
import io
import struct
from pathlib import Path

import numpy as np

from .alpha import AlphaField
from .distributions import DistributionSpec
from .field import HeightField

VERSION = 1
MAGIC_FIELD = b"SHPF"
MAGIC_ALPHA = b"SHAF"
MAGIC_RECON = b"SHRC"

_HEAD = struct.Struct("<4sHIIIQ")


class FormatError(ValueError):
    pass


def _header(magic, W, H, L, seed, spec: DistributionSpec) -> bytes:
    js = spec.to_json().encode("utf-8")
    return _HEAD.pack(magic, VERSION, W, H, L, seed & 0xFFFFFFFFFFFFFFFF) + struct.pack("<I", len(js)) + js


def _read_header(buf: bytes):
    if len(buf) < _HEAD.size + 4:
        raise FormatError("truncated header")
    magic, version, W, H, L, seed = _HEAD.unpack_from(buf, 0)
    if magic not in (MAGIC_FIELD, MAGIC_ALPHA, MAGIC_RECON):
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    pos = _HEAD.size
    (n,) = struct.unpack_from("<I", buf, pos)
    pos += 4
    try:
        spec = DistributionSpec.from_json(buf[pos:pos + n].decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise FormatError(f"bad spec block: {exc}") from None
    return magic, W, H, L, seed, spec, pos + n


def _floats(buf, pos, count):
    end = pos + 8 * count
    if len(buf) < end:
        raise FormatError("truncated payload")
    return np.frombuffer(buf, dtype="<f8", count=count, offset=pos).astype(np.float64), end


def field_bytes(f: HeightField) -> bytes:
    return _header(MAGIC_FIELD, f.width, f.rows, f.lookahead, f.seed, f.spec) + \
        np.ascontiguousarray(f.heights, dtype="<f8").tobytes()


def alpha_bytes(a: AlphaField) -> bytes:
    return (_header(MAGIC_ALPHA, a.width, a.rows, a.source_lookahead, a.source_seed, a.source_spec)
            + struct.pack("<I", a.truncation)
            + np.ascontiguousarray(a.alpha, dtype="<f8").tobytes()
            + np.ascontiguousarray(a.offset, dtype="<u4").tobytes())


def recon_bytes(values: np.ndarray, lookahead: int, seed: int, spec: DistributionSpec) -> bytes:
    H, W = values.shape
    return _header(MAGIC_RECON, W, H, lookahead, seed, spec) + np.ascontiguousarray(values, dtype="<f8").tobytes()


def parse(buf: bytes):
    """Decode any of the three dumps; returns a HeightField, an AlphaField or ``(values, meta)``."""
    magic, W, H, L, seed, spec, pos = _read_header(buf)
    if magic == MAGIC_FIELD:
        h, _ = _floats(buf, pos, (W + L) * H)
        return HeightField(W, H, L, h.reshape(H, W + L), seed, spec)
    if magic == MAGIC_ALPHA:
        (trunc,) = struct.unpack_from("<I", buf, pos)
        a, end = _floats(buf, pos + 4, W * H)
        if len(buf) < end + 4 * W * H:
            raise FormatError("truncated offsets")
        off = np.frombuffer(buf, dtype="<u4", count=W * H, offset=end).astype(np.int64)
        return AlphaField(W, H, a.reshape(H, W), off.reshape(H, W), trunc, seed, spec, L)
    vals, _ = _floats(buf, pos, W * H)
    return vals.reshape(H, W), {"W": W, "H": H, "L": L, "seed": seed, "spec": spec}


def write_bytes(path, data: bytes) -> None:
    Path(path).write_bytes(data)


def load(path):
    return parse(Path(path).read_bytes())


def field_csv(f: HeightField) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in f.heights:
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# images

def pbm_bytes(bits) -> bytes:
    """Binary PBM (P4); set bits are black."""
    b = np.asarray(bits, dtype=bool)
    H, W = b.shape
    packed = np.packbits(b, axis=1)
    return f"P4\n{W} {H}\n".encode("ascii") + packed.tobytes()


def _netpbm_header(data: bytes, ntokens: int):
    # tokens separated by whitespace, then exactly one whitespace byte before the raster
    tokens, pos = [], 0
    while len(tokens) < ntokens:
        while data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos + 1


def read_pbm(data: bytes) -> np.ndarray:
    (magic, w, h), pos = _netpbm_header(data, 3)
    if magic != b"P4":
        raise FormatError("not a P4 PBM")
    W, H = int(w), int(h)
    raw = np.frombuffer(data, dtype=np.uint8, count=H * ((W + 7) // 8), offset=pos)
    return np.unpackbits(raw.reshape(H, -1), axis=1)[:, :W].astype(bool)


def ppm_bytes(rgb) -> bytes:
    """Binary PPM (P6) from an ``(H, W, 3)`` uint8 array."""
    img = np.ascontiguousarray(rgb, dtype=np.uint8)
    H, W, _ = img.shape
    return f"P6\n{W} {H}\n255\n".encode("ascii") + img.tobytes()


def read_ppm(data: bytes) -> np.ndarray:
    (magic, w, h, _), pos = _netpbm_header(data, 4)
    if magic != b"P6":
        raise FormatError("not a P6 PPM")
    W, H = int(w), int(h)
    return np.frombuffer(data, dtype=np.uint8, count=W * H * 3, offset=pos).reshape(H, W, 3)


BLACK = (0, 0, 0)
WHITE = (255, 255, 255)
RED = (255, 0, 0)
BLUE = (0, 0, 255)


def shadow_image(alpha_field: AlphaField, level: float, mode="orth") -> np.ndarray:
    """Black where alpha > level, white elsewhere; largest shadow cluster red, largest lit cluster blue.

    Cells with alpha == level count as lit (white).
    """
    from .alpha import level_set
    from .clusters import label_clusters, largest_cluster

    shadow = level_set(alpha_field, level, "gt")
    lit = level_set(alpha_field, level, "le")
    img = np.empty(shadow.bits.shape + (3,), dtype=np.uint8)
    img[shadow.bits] = BLACK
    img[lit.bits] = WHITE
    for mask, colour in ((shadow, RED), (lit, BLUE)):
        lab = label_clusters(mask, mode)
        big = largest_cluster(lab)
        if big is not None:
            img[lab.labels == big[0]] = colour
    return img
