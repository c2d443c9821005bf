"""Image encoding and decoding: binary PGM (P5), binary PPM (P6), and PNG.

All three codecs are implemented directly against the published formats and
handle 8-bit channels only. PNG support covers non-interlaced bit-depth-8
images of color types 0 (gray), 2 (RGB), 3 (palette), 4 (gray+alpha) and
6 (RGBA); alpha is discarded on decode. Encoding writes color type 0 or 2
with unfiltered scanlines.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path
from typing import Union

import numpy as np

from .errors import UnsupportedFormat
from .frame import Frame, GrayFrame

Image = Union[Frame, GrayFrame]

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


# ---------------------------------------------------------------------------
# Netpbm (PGM P5 / PPM P6)

def _parse_netpbm_header(data: bytes, magic: bytes) -> tuple[int, int, int, int]:
    """Return (width, height, maxval, raster_offset) for a binary Netpbm file.

    Tokens are separated by whitespace; '#' starts a comment running to the
    end of the line. Exactly one whitespace byte separates maxval from the
    raster.
    """
    if not data.startswith(magic):
        raise UnsupportedFormat(f"not a {magic.decode()} file")
    pos = len(magic)
    values: list[int] = []
    while len(values) < 3:
        if pos >= len(data):
            raise UnsupportedFormat("truncated header")
        c = data[pos : pos + 1]
        if c in b" \t\r\n":
            pos += 1
        elif c == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl == -1 else nl + 1
        elif c.isdigit():
            end = pos
            while end < len(data) and data[end : end + 1].isdigit():
                end += 1
            values.append(int(data[pos:end]))
            pos = end
        else:
            raise UnsupportedFormat(f"unexpected byte {c!r} in header")
    if pos >= len(data) or data[pos : pos + 1] not in b" \t\r\n":
        raise UnsupportedFormat("missing whitespace before raster data")
    width, height, maxval = values
    return width, height, maxval, pos + 1


def _check_netpbm_dims(width: int, height: int, maxval: int) -> None:
    if width < 1 or height < 1:
        raise UnsupportedFormat(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormat(f"only maxval 255 is supported, got {maxval}")


def decode_pgm(data: bytes) -> GrayFrame:
    width, height, maxval, offset = _parse_netpbm_header(data, b"P5")
    _check_netpbm_dims(width, height, maxval)
    n = width * height
    raster = data[offset : offset + n]
    if len(raster) != n:
        raise UnsupportedFormat("truncated raster data")
    a = np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()
    return GrayFrame.from_array(a)


def decode_ppm(data: bytes) -> Frame:
    width, height, maxval, offset = _parse_netpbm_header(data, b"P6")
    _check_netpbm_dims(width, height, maxval)
    n = width * height * 3
    raster = data[offset : offset + n]
    if len(raster) != n:
        raise UnsupportedFormat("truncated raster data")
    a = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()
    return Frame.from_array(a)


def encode_pgm(gray: GrayFrame) -> bytes:
    header = f"P5\n{gray.width} {gray.height}\n255\n".encode("ascii")
    return header + gray.pixels.tobytes()


def encode_ppm(frame: Frame) -> bytes:
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + frame.pixels.tobytes()


# ---------------------------------------------------------------------------
# PNG

def _png_chunk(ctype: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(ctype + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + ctype + payload + struct.pack(">I", crc)


def encode_png(image: Image) -> bytes:
    """Encode a Frame (color type 2) or GrayFrame (color type 0)."""
    if isinstance(image, Frame):
        color_type, a = 2, image.pixels
    else:
        color_type, a = 0, image.pixels
    height, width = a.shape[0], a.shape[1]
    ihdr = struct.pack(">IIBBBBB", width, height, 8, color_type, 0, 0, 0)
    # Unfiltered scanlines: each row prefixed with filter byte 0.
    rows = a.reshape(height, -1)
    raw = b"".join(b"\x00" + rows[y].tobytes() for y in range(height))
    idat = zlib.compress(raw, 6)
    return (
        _PNG_SIGNATURE
        + _png_chunk(b"IHDR", ihdr)
        + _png_chunk(b"IDAT", idat)
        + _png_chunk(b"IEND", b"")
    )


def _paeth(a: int, b: int, c: int) -> int:
    p = a + b - c
    pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
    if pa <= pb and pa <= pc:
        return a
    if pb <= pc:
        return b
    return c


def _unfilter(raw: bytes, width: int, height: int, bpp: int) -> bytearray:
    """Reverse PNG scanline filtering; returns height*width*bpp raw samples."""
    stride = width * bpp
    if len(raw) != height * (stride + 1):
        raise UnsupportedFormat("IDAT length does not match image dimensions")
    out = bytearray(height * stride)
    prev_start = -1
    for y in range(height):
        ftype = raw[y * (stride + 1)]
        line = raw[y * (stride + 1) + 1 : (y + 1) * (stride + 1)]
        start = y * stride
        if ftype == 0:
            out[start : start + stride] = line
        elif ftype == 1:  # Sub
            for i in range(stride):
                left = out[start + i - bpp] if i >= bpp else 0
                out[start + i] = (line[i] + left) & 0xFF
        elif ftype == 2:  # Up
            if y == 0:
                out[start : start + stride] = line
            else:
                for i in range(stride):
                    out[start + i] = (line[i] + out[prev_start + i]) & 0xFF
        elif ftype == 3:  # Average
            for i in range(stride):
                left = out[start + i - bpp] if i >= bpp else 0
                up = out[prev_start + i] if y > 0 else 0
                out[start + i] = (line[i] + (left + up) // 2) & 0xFF
        elif ftype == 4:  # Paeth
            for i in range(stride):
                left = out[start + i - bpp] if i >= bpp else 0
                up = out[prev_start + i] if y > 0 else 0
                ul = out[prev_start + i - bpp] if (y > 0 and i >= bpp) else 0
                out[start + i] = (line[i] + _paeth(left, up, ul)) & 0xFF
        else:
            raise UnsupportedFormat(f"unknown scanline filter {ftype}")
        prev_start = start
    return out


def decode_png(data: bytes) -> Image:
    """Decode a PNG; gray images come back as GrayFrame, color as Frame."""
    if not data.startswith(_PNG_SIGNATURE):
        raise UnsupportedFormat("not a PNG file")
    pos = len(_PNG_SIGNATURE)
    ihdr: bytes | None = None
    palette: bytes | None = None
    idat = bytearray()
    while pos + 8 <= len(data):
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        ctype = data[pos + 4 : pos + 8]
        payload = data[pos + 8 : pos + 8 + length]
        if len(payload) != length or pos + 12 + length > len(data):
            raise UnsupportedFormat("truncated chunk")
        (crc,) = struct.unpack(">I", data[pos + 8 + length : pos + 12 + length])
        if zlib.crc32(ctype + payload) & 0xFFFFFFFF != crc:
            raise UnsupportedFormat(f"bad CRC in {ctype.decode('latin1')} chunk")
        if ctype == b"IHDR":
            ihdr = payload
        elif ctype == b"PLTE":
            palette = payload
        elif ctype == b"IDAT":
            idat.extend(payload)
        elif ctype == b"IEND":
            break
        pos += 12 + length
    if ihdr is None or not idat:
        raise UnsupportedFormat("missing IHDR or IDAT")
    width, height, depth, color_type, compression, filt, interlace = struct.unpack(
        ">IIBBBBB", ihdr
    )
    if depth != 8:
        raise UnsupportedFormat(f"only bit depth 8 is supported, got {depth}")
    if compression != 0 or filt != 0:
        raise UnsupportedFormat("unsupported compression or filter method")
    if interlace != 0:
        raise UnsupportedFormat("interlaced PNG is not supported")
    channels = {0: 1, 2: 3, 3: 1, 4: 2, 6: 4}.get(color_type)
    if channels is None:
        raise UnsupportedFormat(f"unsupported color type {color_type}")
    if width < 1 or height < 1:
        raise UnsupportedFormat(f"invalid dimensions {width}x{height}")
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise UnsupportedFormat(f"corrupt IDAT stream: {exc}") from exc
    samples = _unfilter(raw, width, height, channels)
    a = np.frombuffer(bytes(samples), dtype=np.uint8).reshape(height, width, channels)
    if color_type == 0:
        return GrayFrame.from_array(a[:, :, 0])
    if color_type == 2:
        return Frame.from_array(a)
    if color_type == 3:
        if palette is None or len(palette) % 3 != 0 or len(palette) == 0:
            raise UnsupportedFormat("palette image without a valid PLTE chunk")
        pal = np.frombuffer(palette, dtype=np.uint8).reshape(-1, 3)
        idx = a[:, :, 0]
        if int(idx.max()) >= pal.shape[0]:
            raise UnsupportedFormat("palette index out of range")
        return Frame.from_array(pal[idx])
    if color_type == 4:
        return GrayFrame.from_array(a[:, :, 0])
    return Frame.from_array(a[:, :, :3])  # color type 6, alpha dropped


# ---------------------------------------------------------------------------
# Format-sniffing entry points

def decode(data: bytes) -> Image:
    """Decode any supported image by its magic bytes."""
    if data.startswith(_PNG_SIGNATURE):
        return decode_png(data)
    if data.startswith(b"P5"):
        return decode_pgm(data)
    if data.startswith(b"P6"):
        return decode_ppm(data)
    raise UnsupportedFormat("unrecognized image data (supported: PGM/PPM/PNG)")


def as_frame(image: Image) -> Frame:
    """View any decoded image as RGB, replicating gray across channels."""
    if isinstance(image, Frame):
        return image
    rgb = np.repeat(image.pixels[:, :, np.newaxis], 3, axis=2)
    return Frame.from_array(rgb)


def load_image(path: str | Path) -> Image:
    p = Path(path)
    try:
        data = p.read_bytes()
    except FileNotFoundError:
        from .errors import SourceNotFound

        raise SourceNotFound(f"no such file: {p}") from None
    return decode(data)


def load_frame(path: str | Path) -> Frame:
    return as_frame(load_image(path))


def save_image(path: str | Path, image: Image) -> None:
    """Write an image, picking the codec from the file extension."""
    p = Path(path)
    ext = p.suffix.lower()
    if ext == ".png":
        data = encode_png(image)
    elif ext == ".ppm":
        data = encode_ppm(as_frame(image))
    elif ext == ".pgm":
        if isinstance(image, Frame):
            raise UnsupportedFormat("PGM stores grayscale; convert the frame first")
        data = encode_pgm(image)
    else:
        raise UnsupportedFormat(f"unsupported output extension {ext!r}")
    p.write_bytes(data)
