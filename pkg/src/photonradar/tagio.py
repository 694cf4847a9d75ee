"""Time-tag file formats.

Binary format: 16-byte header (magic ``QTT1``, uint32 channel id, uint64
duration in ps), followed by one little-endian uint64 tick per record.
Text format (debugging): first line ``QTT1 <channel> <duration>``, then one
tag per line.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .timetag import TimeTagStream, from_tags

_MAGIC = b"QTT1"
_HEADER = struct.Struct("<4sIQ")


def write_stream(path, stream: TimeTagStream) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, stream.channel_id, stream.duration))
        fh.write(stream.tags.astype("<u8").tobytes())


def read_stream(path) -> TimeTagStream:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ConfigurationError("%s: truncated header" % (path,))
    magic, channel_id, duration = _HEADER.unpack_from(data)
    if magic != _MAGIC:
        raise ConfigurationError("%s: not a QTT1 time-tag file" % (path,))
    body = data[_HEADER.size:]
    if len(body) % 8:
        raise ConfigurationError("%s: record section is not a multiple of 8 bytes" % (path,))
    tags = np.frombuffer(body, dtype="<u8").astype(np.int64)
    return from_tags(tags, channel_id, duration)


def write_stream_text(path, stream: TimeTagStream) -> None:
    with open(path, "w") as fh:
        fh.write("QTT1 %d %d\n" % (stream.channel_id, stream.duration))
        for tag in stream.tags:
            fh.write("%d\n" % tag)


def read_stream_text(path) -> TimeTagStream:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != "QTT1":
            raise ConfigurationError("%s: expected 'QTT1 <channel> <duration>' header" % (path,))
        channel_id, duration = int(header[1]), int(header[2])
        tags = [int(line) for line in fh if line.strip()]
    return from_tags(tags, channel_id, duration)
