"""Minimal V4L2 capture for ``camera:<n>`` sources (Linux, best effort).

Talks to /dev/video<n> directly with ioctl + mmap using the streaming I/O
API: negotiate YUYV (falling back to MJPEG), queue a small ring of mapped
buffers, then dequeue/convert/requeue per frame. Struct layouts and ioctl
numbers below were generated from linux/videodev2.h on 64-bit Linux.

The pixel converters are plain functions so they stay testable on machines
without a camera.
"""

from __future__ import annotations

import io
import mmap
import os
import select
import struct
from typing import Iterator

import numpy as np

from .errors import SourceNotFound, UnsupportedFormat
from .frame import Frame

# ioctl request numbers (x86-64).
_VIDIOC_QUERYCAP = 0x80685600
_VIDIOC_S_FMT = 0xC0D05605
_VIDIOC_REQBUFS = 0xC0145608
_VIDIOC_QUERYBUF = 0xC0585609
_VIDIOC_QBUF = 0xC058560F
_VIDIOC_DQBUF = 0xC0585611
_VIDIOC_STREAMON = 0x40045612
_VIDIOC_STREAMOFF = 0x40045613

_BUF_TYPE_VIDEO_CAPTURE = 1
_MEMORY_MMAP = 1
_CAP_VIDEO_CAPTURE = 0x1
_CAP_STREAMING = 0x4000000

PIX_FMT_YUYV = 0x56595559
PIX_FMT_MJPEG = 0x47504A4D

_FORMAT_SIZE = 208
_BUFFER_SIZE = 88
_CAPABILITY_SIZE = 104
_NUM_BUFFERS = 4


def yuyv_to_rgb(data: bytes, width: int, height: int) -> np.ndarray:
    """Convert a packed YUYV buffer to an RGB uint8 array (BT.601 limited range)."""
    a = np.frombuffer(data, dtype=np.uint8, count=width * height * 2)
    a = a.reshape(height, width // 2, 4).astype(np.float64)
    y0, cb, y1, cr = a[:, :, 0], a[:, :, 1], a[:, :, 2], a[:, :, 3]
    y = np.empty((height, width), dtype=np.float64)
    y[:, 0::2], y[:, 1::2] = y0, y1
    cb_full = np.repeat(cb, 2, axis=1)
    cr_full = np.repeat(cr, 2, axis=1)
    c = 1.164 * (y - 16.0)
    d = cb_full - 128.0
    e = cr_full - 128.0
    rgb = np.stack(
        [c + 1.596 * e, c - 0.813 * e - 0.392 * d, c + 2.017 * d], axis=2
    )
    return np.clip(np.floor(rgb + 0.5), 0, 255).astype(np.uint8)


def mjpeg_to_rgb(data: bytes) -> np.ndarray:
    from PIL import Image as PILImage

    with PILImage.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def _ioctl(fd: int, request: int, buf) -> None:
    import fcntl

    fcntl.ioctl(fd, request, buf)


class _Camera:
    def __init__(self, device_index: int, width: int = 640, height: int = 480):
        self.path = f"/dev/video{device_index}"
        try:
            self.fd = os.open(self.path, os.O_RDWR | os.O_NONBLOCK)
        except FileNotFoundError:
            raise SourceNotFound(f"no such camera device: {self.path}") from None
        except PermissionError as exc:
            raise SourceNotFound(f"cannot open {self.path}: {exc}") from None
        self.maps: list[mmap.mmap] = []
        try:
            self._check_caps()
            self.width, self.height, self.pixelformat = self._set_format(width, height)
            self._setup_buffers()
        except Exception:
            self.close()
            raise

    def _check_caps(self) -> None:
        buf = bytearray(_CAPABILITY_SIZE)
        _ioctl(self.fd, _VIDIOC_QUERYCAP, buf)
        caps = struct.unpack_from("<I", buf, 84)[0]
        if not (caps & _CAP_VIDEO_CAPTURE) or not (caps & _CAP_STREAMING):
            raise UnsupportedFormat(f"{self.path} does not support streaming capture")

    def _try_format(self, width: int, height: int, pixelformat: int) -> tuple[int, int, int]:
        buf = bytearray(_FORMAT_SIZE)
        struct.pack_from("<I", buf, 0, _BUF_TYPE_VIDEO_CAPTURE)
        struct.pack_from("<IIII", buf, 8, width, height, pixelformat, 0)
        _ioctl(self.fd, _VIDIOC_S_FMT, buf)
        w, h, fmt = struct.unpack_from("<III", buf, 8)
        return w, h, fmt

    def _set_format(self, width: int, height: int) -> tuple[int, int, int]:
        w, h, fmt = self._try_format(width, height, PIX_FMT_YUYV)
        if fmt not in (PIX_FMT_YUYV, PIX_FMT_MJPEG):
            w, h, fmt = self._try_format(width, height, PIX_FMT_MJPEG)
        if fmt not in (PIX_FMT_YUYV, PIX_FMT_MJPEG):
            raise UnsupportedFormat(
                f"{self.path} offers neither YUYV nor MJPEG (got fourcc 0x{fmt:08x})"
            )
        return w, h, fmt

    def _setup_buffers(self) -> None:
        req = bytearray(20)
        struct.pack_from("<III", req, 0, _NUM_BUFFERS, _BUF_TYPE_VIDEO_CAPTURE, _MEMORY_MMAP)
        _ioctl(self.fd, _VIDIOC_REQBUFS, req)
        count = struct.unpack_from("<I", req, 0)[0]
        if count < 1:
            raise UnsupportedFormat(f"{self.path} granted no capture buffers")
        for i in range(count):
            buf = bytearray(_BUFFER_SIZE)
            struct.pack_from("<II", buf, 0, i, _BUF_TYPE_VIDEO_CAPTURE)
            struct.pack_from("<I", buf, 60, _MEMORY_MMAP)
            _ioctl(self.fd, _VIDIOC_QUERYBUF, buf)
            offset = struct.unpack_from("<I", buf, 64)[0]
            length = struct.unpack_from("<I", buf, 72)[0]
            self.maps.append(mmap.mmap(self.fd, length, offset=offset))
            _ioctl(self.fd, _VIDIOC_QBUF, buf)
        _ioctl(self.fd, _VIDIOC_STREAMON, struct.pack("<i", _BUF_TYPE_VIDEO_CAPTURE))

    def read(self) -> Frame:
        select.select([self.fd], [], [], 5.0)
        buf = bytearray(_BUFFER_SIZE)
        struct.pack_from("<I", buf, 4, _BUF_TYPE_VIDEO_CAPTURE)
        struct.pack_from("<I", buf, 60, _MEMORY_MMAP)
        _ioctl(self.fd, _VIDIOC_DQBUF, buf)
        index = struct.unpack_from("<I", buf, 0)[0]
        used = struct.unpack_from("<I", buf, 8)[0]
        data = self.maps[index][:used]
        _ioctl(self.fd, _VIDIOC_QBUF, buf)
        if self.pixelformat == PIX_FMT_YUYV:
            rgb = yuyv_to_rgb(data, self.width, self.height)
        else:
            rgb = mjpeg_to_rgb(data)
        return Frame.from_array(rgb)

    def close(self) -> None:
        try:
            _ioctl(self.fd, _VIDIOC_STREAMOFF, struct.pack("<i", _BUF_TYPE_VIDEO_CAPTURE))
        except OSError:
            pass
        for m in self.maps:
            m.close()
        os.close(self.fd)


def iter_camera(device_index: int):
    """Capture frames from /dev/video<device_index> until the consumer stops."""
    from .sources import TaggedFrame

    camera = _Camera(device_index)

    def frames() -> Iterator[TaggedFrame]:
        try:
            index = 0
            while True:
                yield TaggedFrame(index, camera.read())
                index += 1
        finally:
            camera.close()

    return frames()
