"""Bundled-message payload and its binary wire format.

Layout (little-endian)::

    header   sender u16 | parent u16 | seq u16 | count u8
    sync     t1 u64 | t2 u64 | t3 u64                  (microsecond ticks)
    entries  count x (origin u16 | seq u16 | t_meas u64 | value u16)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import WireFormatError
from .model import NodeId
from .sync import SyncSample

HEADER = struct.Struct("<HHHB")
SYNC = struct.Struct("<QQQ")
ENTRY = struct.Struct("<HHQH")
MAX_ENTRIES = 255


@dataclass(frozen=True)
class MeasurementRecord:
    origin: NodeId
    seq: int
    t_meas_node: int
    value: int = 0


@dataclass(frozen=True)
class BundledMessage:
    sender: NodeId
    parent: NodeId
    sync: SyncSample
    entries: tuple[MeasurementRecord, ...]
    seq: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        if not 1 <= len(self.entries) <= MAX_ENTRIES:
            raise ValueError(f"a bundle carries 1..{MAX_ENTRIES} entries, got {len(self.entries)}")

    @property
    def count(self) -> int:
        return len(self.entries)


def encoded_size(count: int) -> int:
    return HEADER.size + SYNC.size + count * ENTRY.size


def encode(msg: BundledMessage) -> bytes:
    try:
        parts = [
            HEADER.pack(msg.sender, msg.parent, msg.seq, msg.count),
            SYNC.pack(msg.sync.t1, msg.sync.t2, msg.sync.t3),
        ]
        parts.extend(
            ENTRY.pack(e.origin, e.seq, e.t_meas_node, e.value) for e in msg.entries
        )
    except struct.error as exc:
        raise WireFormatError(f"field out of range: {exc}") from None
    return b"".join(parts)


def decode(buf: bytes) -> BundledMessage:
    buf = memoryview(buf)
    if len(buf) < HEADER.size + SYNC.size:
        raise WireFormatError(f"truncated header: {len(buf)} bytes")
    sender, parent, seq, count = HEADER.unpack_from(buf, 0)
    if count == 0:
        raise WireFormatError("bundle declares zero entries")
    expected = encoded_size(count)
    if len(buf) != expected:
        kind = "truncated" if len(buf) < expected else "oversized"
        raise WireFormatError(f"{kind} buffer: {len(buf)} bytes, expected {expected}")
    t1, t2, t3 = SYNC.unpack_from(buf, HEADER.size)
    if t3 < t2:
        raise WireFormatError("t3 precedes t2")
    entries = tuple(
        MeasurementRecord(*ENTRY.unpack_from(buf, HEADER.size + SYNC.size + k * ENTRY.size))
        for k in range(count)
    )
    return BundledMessage(sender, parent, SyncSample(t1, t2, t3, sender), entries, seq)
