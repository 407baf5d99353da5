"""Deterministic slotted discrete-event kernel.

Time advances in absolute slot numbers (ASN). Within a slot, events run in a
fixed phase order; ties at equal (asn, phase) dispatch FIFO. All randomness
comes from named streams derived from one global seed, so adding a node or a
draw site never perturbs unrelated streams.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable


class Phase(IntEnum):
    """Intra-slot processing order."""

    TX_DECISION = 0
    MEDIUM = 1
    RX_DELIVERY = 2
    BOOKKEEPING = 3


@dataclass(frozen=True)
class SimTime:
    """A point in slotted time: wall clock = asn * slot_ms, exactly."""

    asn: int
    slot_ms: float = 15.0

    @property
    def ms(self) -> float:
        return self.asn * self.slot_ms

    @property
    def seconds(self) -> float:
        return self.asn * self.slot_ms / 1000.0


def slotframe_index(asn: int, slotframe_length: int) -> tuple[int, int]:
    """Split an ASN into (frame number, slot offset within the frame)."""
    if slotframe_length < 1:
        raise ConfigError(f"slotframe_length must be >= 1, got {slotframe_length}")
    return asn // slotframe_length, asn % slotframe_length


class ConfigError(ValueError):
    """Bad scenario or schedule configuration."""


class SchedulingError(RuntimeError):
    """Programming error: event scheduled in the past."""


_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *stream: object) -> int:
    """Stable 64-bit child seed for a named stream (no str hashing involved)."""
    h = _splitmix64(seed & _MASK64)
    for part in stream:
        if isinstance(part, int):
            h = _splitmix64(h ^ (part & _MASK64))
        else:
            for byte in str(part).encode("utf-8"):
                h = _splitmix64(h ^ byte)
    return h


class Rng:
    """Seeded RNG stream, identified by (global seed, stream id)."""

    def __init__(self, seed: int, *stream: object):
        self.seed = seed
        self.stream = stream
        self._r = random.Random(derive_seed(seed, *stream))

    def random(self) -> float:
        return self._r.random()

    def randint(self, a: int, b: int) -> int:
        return self._r.randint(a, b)

    def choice(self, seq):
        return self._r.choice(seq)

    def getrandbits(self, k: int) -> int:
        return self._r.getrandbits(k)


class RngRegistry:
    """Per-stream RNGs derived from one global seed."""

    def __init__(self, seed: int):
        self.seed = seed
        self._streams: dict[tuple, Rng] = {}

    def stream(self, *stream: object) -> Rng:
        key = tuple(stream)
        if key not in self._streams:
            self._streams[key] = Rng(self.seed, *stream)
        return self._streams[key]

    def for_node(self, node_id: int) -> Rng:
        return self.stream("node", node_id)


@dataclass
class EventHandle:
    asn: int
    phase: Phase
    seq: int
    cancelled: bool = False

    def cancel(self) -> None:
        self.cancelled = True


@dataclass(order=True)
class _Entry:
    asn: int
    phase: int
    seq: int
    handle: EventHandle = field(compare=False)
    action: Callable[[], None] = field(compare=False)


class EventQueue:
    """Ordered event set keyed by (asn, phase, insertion sequence)."""

    def __init__(self):
        self._heap: list[_Entry] = []
        self._seq = 0

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, asn: int, phase: Phase, action: Callable[[], None]) -> EventHandle:
        handle = EventHandle(asn, phase, self._seq)
        heapq.heappush(self._heap, _Entry(asn, int(phase), self._seq, handle, action))
        self._seq += 1
        return handle

    def peek_time(self) -> tuple[int, int] | None:
        while self._heap and self._heap[0].handle.cancelled:
            heapq.heappop(self._heap)
        if not self._heap:
            return None
        return self._heap[0].asn, self._heap[0].phase

    def pop_due(self, asn: int, phase: Phase) -> list[Callable[[], None]]:
        """All live actions scheduled at exactly (asn, phase), FIFO."""
        due = []
        while self._heap:
            head = self._heap[0]
            if head.handle.cancelled:
                heapq.heappop(self._heap)
                continue
            if (head.asn, head.phase) > (asn, int(phase)):
                break
            entry = heapq.heappop(self._heap)
            due.append(entry.action)
        return due


class Kernel:
    """Single-threaded slotted simulation core.

    Slot hooks registered per phase run every slot in registration order;
    one-shot events dispatch at their (asn, phase) before the phase hooks.
    """

    def __init__(self, seed: int, slot_ms: float = 15.0):
        self.slot_ms = slot_ms
        self.asn = 0
        self.rng = RngRegistry(seed)
        self.queue = EventQueue()
        self._hooks: dict[Phase, list[Callable[[int], None]]] = {p: [] for p in Phase}
        self._dispatched_any = False

    @property
    def now(self) -> SimTime:
        return SimTime(self.asn, self.slot_ms)

    def add_hook(self, phase: Phase, hook: Callable[[int], None]) -> None:
        self._hooks[phase].append(hook)

    def schedule_event(self, asn: int, phase: Phase, action: Callable[[], None]) -> EventHandle:
        if asn < self.asn:
            raise SchedulingError(f"cannot schedule at asn={asn}, current asn={self.asn}")
        return self.queue.push(asn, phase, action)

    def _run_slot(self) -> None:
        for phase in Phase:
            for action in self.queue.pop_due(self.asn, phase):
                self._dispatched_any = True
                action()
            for hook in self._hooks[phase]:
                hook(self.asn)

    def run_until(self, end_asn: int | None = None,
                  predicate: Callable[[], bool] | None = None,
                  drain_only: bool = False) -> int:
        """Run slots until end_asn (exclusive) or until predicate() holds.

        With drain_only the kernel skips idle gaps between queued events
        (useful when no per-slot hooks are registered). Returns the final asn.
        """
        while True:
            if predicate is not None and predicate():
                return self.asn
            if end_asn is not None and self.asn >= end_asn:
                return self.asn
            if drain_only and not self._hooks_active():
                nxt = self.queue.peek_time()
                if nxt is None:
                    return self.asn
                if nxt[0] > self.asn:
                    self.asn = nxt[0]
                    continue
            self._run_slot()
            self.asn += 1

    def _hooks_active(self) -> bool:
        return any(self._hooks[p] for p in Phase)
