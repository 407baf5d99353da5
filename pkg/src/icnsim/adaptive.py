"""Utilization-driven dynamic cell management for the on-demand region.

Each directed link is monitored over tumbling windows of T slotframes; when
utilization crosses the high threshold a burst of Interest cells (plus k
content cells each) is allocated inside the dynamic region, and when traffic
subsides the bursts are released again. Schedule knowledge for conflict
avoidance spreads as bitfields piggy-backed on Interests; the allocation
handshake itself is abstract and instantaneous, taking effect at the next
slotframe boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kernel import ConfigError
from .medium import NUM_CHANNELS, ConnectivityGraph
from .tsch import ROLE_TX, SSF_DYN, ScheduleMatrix, _Placer

ALLOCATE = "ALLOCATE"
DEALLOCATE = "DEALLOCATE"
DEALLOCATE_ALL = "DEALLOCATE_ALL"
HOLD = "HOLD"
REJECT = "REJECT"

Link = tuple[int, int]  # directed (sender, receiver)


@dataclass
class AdaptiveParams:
    window_frames: int = 4    # T
    u_high: float = 0.9       # U_Th: allocate above
    u_low: float = 0.25       # U_Tl: deallocate below
    burst: int = 2            # B: Interest cells per allocation

    def validate(self) -> None:
        if not (0.0 <= self.u_low < self.u_high <= 1.0):
            raise ConfigError(
                f"hysteresis requires U_Tl < U_Th in [0,1], got "
                f"U_Tl={self.u_low}, U_Th={self.u_high}")
        if self.window_frames < 1 or self.burst < 1:
            raise ConfigError("window_frames and burst must be >= 1")


@dataclass
class UtilizationMonitor:
    """Per-link ring buffer of (used, scheduled) Interest-cell counts."""

    window_frames: int
    frames: list[tuple[int, int]] = field(default_factory=list)

    def record(self, used: int, scheduled: int) -> None:
        self.frames.append((used, scheduled))
        if len(self.frames) > self.window_frames:
            self.frames.pop(0)

    @property
    def window_full(self) -> bool:
        return len(self.frames) >= self.window_frames

    def utilization(self) -> float:
        used = sum(u for u, _ in self.frames)
        scheduled = sum(s for _, s in self.frames)
        return used / scheduled if scheduled else 0.0

    def reset(self) -> None:
        self.frames.clear()


def evaluate_adaptation(monitor: UtilizationMonitor, params: AdaptiveParams,
                        dynamic_bursts: int) -> str:
    """ALLOCATE / DEALLOCATE / DEALLOCATE_ALL / HOLD for one link's window.

    A fully idle window releases every burst at once so a finished transfer
    returns the link to its static footprint within one window.
    """
    if not monitor.window_full:
        return HOLD
    u = monitor.utilization()
    if u > params.u_high:
        return ALLOCATE
    if u < params.u_low and dynamic_bursts > 0:
        return DEALLOCATE_ALL if u == 0.0 else DEALLOCATE
    return HOLD


class ScheduleBitfield:
    """Fixed-size occupancy bitmap over (slot offset, channel offset)."""

    def __init__(self, slotframe_length: int, bits: int = 0):
        self.slotframe_length = slotframe_length
        self.bits = bits

    @staticmethod
    def index(slot: int, channel: int) -> int:
        return slot * NUM_CHANNELS + channel

    def set(self, slot: int, channel: int) -> None:
        self.bits |= 1 << self.index(slot, channel)

    def clear(self, slot: int, channel: int) -> None:
        self.bits &= ~(1 << self.index(slot, channel))

    def test(self, slot: int, channel: int) -> bool:
        return bool(self.bits >> self.index(slot, channel) & 1)

    def merge(self, other: "ScheduleBitfield") -> None:
        self.bits |= other.bits

    @classmethod
    def from_matrix(cls, matrix: ScheduleMatrix) -> "ScheduleBitfield":
        bf = cls(matrix.slotframe_length)
        for (s, c) in matrix.cells:
            bf.set(s, c)
        return bf

    def copy(self) -> "ScheduleBitfield":
        return ScheduleBitfield(self.slotframe_length, self.bits)


@dataclass
class NeighborKnowledge:
    """What one node knows about its vicinity's schedules."""

    own: ScheduleBitfield
    # per 1-hop neighbor: (their own bitmap, union of their neighbors' bitmaps)
    table: dict[int, tuple[ScheduleBitfield, ScheduleBitfield]] = field(default_factory=dict)

    def one_hop_union(self) -> ScheduleBitfield:
        union = self.own.copy()
        for own_bf, _ in self.table.values():
            union.merge(own_bf)
        return union

    def merge_piggyback(self, sender: int, sender_own: ScheduleBitfield,
                        sender_union: ScheduleBitfield) -> None:
        self.table[sender] = (sender_own.copy(), sender_union.copy())

    def conflict_view(self) -> ScheduleBitfield:
        """Everything occupied within the known 1-hop/2-hop vicinity."""
        view = self.own.copy()
        for own_bf, union_bf in self.table.values():
            view.merge(own_bf)
            view.merge(union_bf)
        return view


@dataclass
class Burst:
    link: Link
    interest_cells: list = field(default_factory=list)  # TX-side cells
    content_cells: list = field(default_factory=list)


class DynamicAllocator:
    """Greedy first-fit allocation of balanced Interest/content cell bursts.

    Candidate (slot, channel) pairs are drawn from the dynamic region only and
    checked against both endpoints' bitfield knowledge plus their own
    matrices; the instantaneous-agreement abstraction lets the coordinator
    apply allocations atomically on both ends.
    """

    def __init__(self, graph: ConnectivityGraph,
                 matrices: dict[int, ScheduleMatrix], k: int = 1):
        self.graph = graph
        self.matrices = matrices
        self.k = k
        self.knowledge: dict[int, NeighborKnowledge] = {
            n: NeighborKnowledge(ScheduleBitfield.from_matrix(matrices[n]))
            for n in matrices}
        self.bursts: dict[Link, list[Burst]] = {}
        self._next_burst = 0
        self._placer = _Placer(graph, matrices, reserved_slots=set())

    def _refresh_own(self, node: int) -> None:
        self.knowledge[node].own = ScheduleBitfield.from_matrix(self.matrices[node])

    def dynamic_burst_count(self, link: Link) -> int:
        return len(self.bursts.get(link, []))

    def dynamic_cell_count(self, link: Link) -> tuple[int, int]:
        bursts = self.bursts.get(link, [])
        return (sum(len(b.interest_cells) for b in bursts),
                sum(len(b.content_cells) for b in bursts))

    def piggyback_out(self, node: int) -> tuple[ScheduleBitfield, ScheduleBitfield]:
        know = self.knowledge[node]
        return know.own.copy(), know.one_hop_union()

    def piggyback_in(self, node: int, sender: int,
                     payload: tuple[ScheduleBitfield, ScheduleBitfield]) -> None:
        self.knowledge[node].merge_piggyback(sender, *payload)

    def _place_one(self, sender: int, receiver: int, burst_id: int):
        view = self.knowledge[sender].conflict_view()
        view.merge(self.knowledge[receiver].conflict_view())
        m = self.matrices[sender]
        for s in m.dyn_slots():
            for c in range(NUM_CHANNELS):
                if view.test(s, c):
                    continue
                if self._placer.can_place_unicast(sender, receiver, s, c):
                    return self._placer.place_unicast_pair(
                        sender, receiver, s, c, SSF_DYN, self.k,
                        dynamic=True, burst_id=burst_id)
        return None

    def allocate(self, link: Link, burst: int) -> Burst | str:
        """Install `burst` Interest cells a->b plus k*burst content cells b->a.

        Cells are placed one by one so later picks see earlier ones; a partial
        burst rolls back and the link keeps its current capacity (REJECT).
        """
        a, b = link
        self._next_burst += 1
        out = Burst(link)
        placed: list = []
        for sender, receiver, bucket in (
                [(a, b, out.interest_cells)] * burst
                + [(b, a, out.content_cells)] * (self.k * burst)):
            pair = self._place_one(sender, receiver, self._next_burst)
            if pair is None:
                for tx in placed:
                    rx = self.matrices[tx.peer].cells.get(tx.key())
                    self.matrices[tx.owner].remove_cell(tx)
                    if rx is not None:
                        self.matrices[tx.peer].remove_cell(rx)
                self._refresh_own(a)
                self._refresh_own(b)
                return REJECT
            bucket.append(pair[0])
            placed.append(pair[0])
        self.bursts.setdefault(link, []).append(out)
        self._refresh_own(a)
        self._refresh_own(b)
        return out

    def deallocate(self, link: Link, all_bursts: bool = False) -> int:
        """Remove the newest burst (or all of them); returns bursts removed."""
        bursts = self.bursts.get(link, [])
        remove = bursts if all_bursts else bursts[-1:]
        removed = 0
        for burst in list(remove):
            for tx in burst.interest_cells + burst.content_cells:
                rx = self.matrices[tx.peer].cells.get(tx.key())
                self.matrices[tx.owner].remove_cell(tx)
                if rx is not None:
                    self.matrices[tx.peer].remove_cell(rx)
            bursts.remove(burst)
            removed += 1
        if not bursts:
            self.bursts.pop(link, None)
        a, b = link
        self._refresh_own(a)
        self._refresh_own(b)
        return removed
