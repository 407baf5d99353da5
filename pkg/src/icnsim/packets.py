"""Frame types carried by the MAC layers.

Names are tuples of string components; "/a/b" parses to ("a", "b"). A FIB
prefix may end in "*", which matches any (possibly empty) remaining suffix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Name = tuple[str, ...]

UP = "UP"
DOWN = "DOWN"


def parse_name(text: str) -> Name:
    parts = [p for p in text.strip().split("/") if p]
    return tuple(parts)


def format_name(name: Name) -> str:
    return "/" + "/".join(name)


def chunk_name(content: Name, index: int) -> Name:
    return content + (str(index),)


@dataclass
class InterestPacket:
    name: Name
    nonce: int
    direction: str = UP  # UP or DOWN, maintained by routing
    piggyback: "object | None" = None  # ScheduleBitfield, when adaptation is on
    wire_bytes: int = 40


@dataclass
class DataChunk:
    name: Name
    chunk_index: int
    payload_bytes: int = 64
    wire_bytes: int = 104


@dataclass
class NamPacket:
    prefix: Name
    origin: int
    wire_bytes: int = 40


@dataclass
class DioPacket:
    sender: int
    rank: int
    neighbors_1hop: tuple[int, ...] = ()
    wire_bytes: int = 32


@dataclass
class DaoPacket:
    sender: int
    parent: int
    neighbors_1hop: tuple[int, ...] = ()
    wire_bytes: int = 32


@dataclass
class BeaconPacket:
    sender: int
    wire_bytes: int = 24


@dataclass
class ReconfigAlert:
    sender: int
    detail: str = ""
    wire_bytes: int = 24


@dataclass
class LinkAck:
    sender: int
    acked: int  # sequence/nonce being acknowledged
    wire_bytes: int = 11


Frame = (InterestPacket, DataChunk, NamPacket, DioPacket, DaoPacket,
         BeaconPacket, ReconfigAlert, LinkAck)


def frame_kind(frame) -> str:
    return type(frame).__name__
