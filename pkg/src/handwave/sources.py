"""Frame sources: image directories, single files, synthetic streams, cameras.

``open_frame_source`` resolves a descriptor to an iterator of ``TaggedFrame``
items. Directory sources replay files in lexicographic filename order so runs
are deterministic; every yielded frame carries a monotonically increasing
index. Sources are single-consumer iterators.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterator, NamedTuple

from .codecs import load_frame
from .errors import SourceNotFound, UnsupportedFormat
from .frame import Frame

_IMAGE_SUFFIXES = (".pgm", ".ppm", ".png")


class TaggedFrame(NamedTuple):
    index: int
    frame: Frame


def _iter_directory(path: Path, loop: bool) -> Iterator[TaggedFrame]:
    names = sorted(
        p for p in path.iterdir() if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES
    )
    index = 0
    while True:
        for p in names:
            yield TaggedFrame(index, load_frame(p))
            index += 1
        if not loop or not names:
            return


def _iter_file(path: Path, loop: bool) -> Iterator[TaggedFrame]:
    if path.suffix.lower() not in _IMAGE_SUFFIXES:
        raise UnsupportedFormat(f"unsupported image type: {path.name}")
    frame = load_frame(path)
    yield TaggedFrame(0, frame)
    index = 1
    while loop:
        yield TaggedFrame(index, frame)
        index += 1


def open_frame_source(descriptor: str | Path | int, *, loop: bool = False) -> Iterator[TaggedFrame]:
    """Open a frame stream.

    Descriptors:
      * a directory of PGM/PPM/PNG files (replayed in filename order),
      * a single image file,
      * ``synth:<spec>`` for a procedurally generated hand stream,
      * ``camera:<n>`` (or a bare device number) for live V4L2 capture.

    ``loop=True`` replays file-backed sources forever (frame indices keep
    increasing); it has no effect on cameras and is implied by endless
    synthetic streams.

    Raises SourceNotFound when the path or device does not exist and
    UnsupportedFormat for files that are not PGM/PPM/PNG.
    """
    if isinstance(descriptor, int):
        from .v4l2 import iter_camera

        return iter_camera(descriptor)
    if isinstance(descriptor, str):
        if descriptor.startswith("synth:"):
            from .synth import iter_synthetic

            return iter_synthetic(descriptor[len("synth:"):])
        if descriptor.startswith("camera:"):
            ident = descriptor[len("camera:"):]
            if not ident.isdigit():
                raise SourceNotFound(f"bad camera id {ident!r}")
            from .v4l2 import iter_camera

            return iter_camera(int(ident))
    path = Path(descriptor)
    if path.is_dir():
        return _iter_directory(path, loop)
    if path.is_file():
        return _iter_file(path, loop)
    raise SourceNotFound(f"no such frame source: {descriptor}")
