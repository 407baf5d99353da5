"""TSCH schedule model and per-node MAC runtime.

A slotframe is split into slot 0 (the fixed global broadcast cell), a static
Interest region, a content region whose cells mirror the Interest cells k:1
with roles swapped, and a trailing dynamic region left unreserved for
on-demand allocation. The builder produces one ScheduleMatrix per node such
that the global schedule is collision-free and packets can traverse the
routing tree upward (Interest region) and downward (content region) within a
single slotframe.

Indexing is 0-based: the paper-style first cell c(1,1) is (slot 0, channel 0).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .kernel import ConfigError
from .medium import BROADCAST, NUM_CHANNELS, ConnectivityGraph

ROLE_TX = "TX"
ROLE_RX = "RX"
ROLE_SHARED = "SHARED"

SSF_I = "I"
SSF_C = "C"
SSF_DYN = "DYN"
SSF_NONE = "NONE"  # slot 0 sits outside the three subslotframes

BROADCAST_FACE = -1


class ScheduleInfeasibleError(ConfigError):
    """Not enough conflict-free (slot, channel) capacity."""


@dataclass
class Cell:
    slot_offset: int
    channel_offset: int
    role: str                    # TX / RX / SHARED
    peer: int                    # node id, or BROADCAST
    ssf: str                     # I / C / DYN / NONE
    owner: int = 0
    active: bool = True
    interest_budget: int = 1     # k: content cells derived per Interest cell
    dynamic: bool = False
    burst_id: int | None = None  # set for dynamically allocated cells

    def key(self) -> tuple[int, int]:
        return (self.slot_offset, self.channel_offset)


@dataclass
class Face:
    id: int                      # peer node id, or BROADCAST_FACE
    kind: str                    # "unicast" or "broadcast"
    tx_cells: list[Cell] = field(default_factory=list)
    rx_cells: list[Cell] = field(default_factory=list)


def physical_channel(channel_offset: int, asn: int) -> int:
    """802.15.4e-style hopping: same offset maps both link ends together."""
    return (channel_offset + asn) % NUM_CHANNELS


class ScheduleMatrix:
    """One node's schedule: cells indexed by (slot offset, channel offset)."""

    def __init__(self, owner: int, slotframe_length: int, len_i: int, len_c: int):
        if slotframe_length < 1 + len_i + len_c:
            raise ConfigError(
                f"partition 1+{len_i}+{len_c} exceeds slotframe {slotframe_length}")
        self.owner = owner
        self.slotframe_length = slotframe_length
        self.len_i = len_i
        self.len_c = len_c
        self.cells: dict[tuple[int, int], Cell] = {}
        self.by_slot: dict[int, list[Cell]] = {}

    @property
    def len_dyn(self) -> int:
        return self.slotframe_length - 1 - self.len_i - self.len_c

    def i_slots(self) -> range:
        return range(1, 1 + self.len_i)

    def c_slots(self) -> range:
        return range(1 + self.len_i, 1 + self.len_i + self.len_c)

    def dyn_slots(self) -> range:
        return range(1 + self.len_i + self.len_c, self.slotframe_length)

    def region_of(self, slot: int) -> str:
        if slot == 0:
            return SSF_NONE
        if slot in self.i_slots():
            return SSF_I
        if slot in self.c_slots():
            return SSF_C
        return SSF_DYN

    def add_cell(self, cell: Cell) -> Cell:
        key = cell.key()
        if key in self.cells:
            raise ConfigError(f"node {self.owner} already holds a cell at {key}")
        if cell.ssf != SSF_NONE and self.region_of(cell.slot_offset) != cell.ssf:
            raise ConfigError(
                f"cell at slot {cell.slot_offset} declared {cell.ssf} but lies in "
                f"{self.region_of(cell.slot_offset)}")
        cell.owner = self.owner
        self.cells[key] = cell
        self.by_slot.setdefault(cell.slot_offset, []).append(cell)
        return cell

    def remove_cell(self, cell: Cell) -> None:
        del self.cells[cell.key()]
        self.by_slot[cell.slot_offset].remove(cell)
        if not self.by_slot[cell.slot_offset]:
            del self.by_slot[cell.slot_offset]

    def cells_at_slot(self, slot: int) -> list[Cell]:
        return self.by_slot.get(slot, [])

    def has_tx_at_slot(self, slot: int) -> bool:
        return any(c.role == ROLE_TX for c in self.cells_at_slot(slot))

    def unicast_cells(self, peer: int | None = None, ssf: str | None = None,
                      role: str | None = None) -> list[Cell]:
        out = []
        for c in self.cells.values():
            if c.role == ROLE_SHARED or c.peer == BROADCAST:
                continue
            if peer is not None and c.peer != peer:
                continue
            if ssf is not None and c.ssf != ssf:
                continue
            if role is not None and c.role != role:
                continue
            out.append(c)
        return out

    def faces(self) -> dict[int, Face]:
        """Cell-to-face partition: one face per peer plus the broadcast face."""
        faces: dict[int, Face] = {}
        for cell in sorted(self.cells.values(), key=Cell.key):
            if cell.role == ROLE_SHARED or cell.peer == BROADCAST:
                face = faces.setdefault(BROADCAST_FACE, Face(BROADCAST_FACE, "broadcast"))
            else:
                face = faces.setdefault(cell.peer, Face(cell.peer, "unicast"))
            if cell.role in (ROLE_TX, ROLE_SHARED):
                face.tx_cells.append(cell)
            else:
                face.rx_cells.append(cell)
        return faces

    def dump_rows(self) -> list[tuple]:
        rows = []
        for cell in sorted(self.cells.values(), key=Cell.key):
            peer = "BROADCAST" if cell.peer == BROADCAST else cell.peer
            rows.append((self.owner, cell.slot_offset, cell.channel_offset,
                         cell.role, peer, cell.ssf, cell.active))
        return rows


@dataclass
class ScheduleParams:
    slotframe_length: int = 101
    len_i: int = 20
    len_c: int = 20
    k: int = 1
    cells_per_neighbor: int = 1
    broadcast_cells_per_node: int = 1
    shared_content_cells: int = 1

    def validate(self) -> None:
        if self.slotframe_length < 2:
            raise ConfigError("slotframe_length must be >= 2")
        if 1 + self.len_i + self.len_c > self.slotframe_length:
            raise ConfigError("subslotframe partition exceeds slotframe length")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.shared_content_cells > self.len_c:
            raise ConfigError("shared content cells exceed content region")


class _Placer:
    """Shared conflict rules for static building and dynamic allocation.

    Constraints enforced on top of the checker's rules: a transmitting node
    holds nothing else in that slot (half-duplex radio), and every 1-hop
    neighbor of a broadcaster is TX-free in the broadcast slot so it can
    listen. Receivers may hold several RX cells per slot on distinct channels
    ((slot, channel) capacity model).
    """

    def __init__(self, graph: ConnectivityGraph,
                 matrices: dict[int, ScheduleMatrix],
                 reserved_slots: set[int]):
        self.graph = graph
        self.matrices = matrices
        self.reserved_slots = reserved_slots
        self._within2 = {n: graph.neighbors(n, 2) | {n} for n in graph.nodes}

    def _tx_cells_at(self, slot: int, channel: int) -> list[Cell]:
        out = []
        for m in self.matrices.values():
            cell = m.cells.get((slot, channel))
            if cell is not None and cell.role == ROLE_TX:
                out.append(cell)
        return out

    def can_place_unicast(self, sender: int, receiver: int, slot: int,
                          channel: int) -> bool:
        if slot in self.reserved_slots:
            return False
        if self.matrices[sender].cells_at_slot(slot):
            return False
        recv_m = self.matrices[receiver]
        if recv_m.has_tx_at_slot(slot):
            return False
        if (slot, channel) in recv_m.cells:
            return False
        for other in self._tx_cells_at(slot, channel):
            if other.peer == BROADCAST:
                if sender in self._within2[other.owner] or receiver in self._within2[other.owner]:
                    return False
            else:
                if other.owner in self._within2[receiver] or other.peer in self._within2[sender]:
                    return False
        # a transmitting sender cannot simultaneously listen to a neighbor's broadcast
        for nb in self.graph.neighbors(sender, 1):
            for cell in self.matrices[nb].cells_at_slot(slot):
                if cell.role == ROLE_TX and cell.peer == BROADCAST:
                    return False
        return True

    def can_place_broadcast(self, owner: int, slot: int, channel: int) -> bool:
        if slot in self.reserved_slots:
            return False
        if self.matrices[owner].cells_at_slot(slot):
            return False
        for nb in self.graph.neighbors(owner, 1):
            if self.matrices[nb].has_tx_at_slot(slot):
                return False
        for other in self._tx_cells_at(slot, channel):
            if other.owner in self._within2[owner]:
                return False
        return True

    def place_unicast_pair(self, sender: int, receiver: int, slot: int,
                           channel: int, ssf: str, k: int,
                           dynamic: bool = False,
                           burst_id: int | None = None) -> tuple[Cell, Cell]:
        tx = self.matrices[sender].add_cell(Cell(
            slot, channel, ROLE_TX, receiver, ssf, interest_budget=k,
            dynamic=dynamic, burst_id=burst_id))
        rx = self.matrices[receiver].add_cell(Cell(
            slot, channel, ROLE_RX, sender, ssf, interest_budget=k,
            dynamic=dynamic, burst_id=burst_id))
        return tx, rx


def _saturation_message(kind: str, detail: str, graph: ConnectivityGraph,
                        node: int) -> str:
    hood = sorted(graph.neighbors(node, 2) | {node})
    return (f"infeasible {kind}: {detail}; saturated 2-hop neighborhood of "
            f"node {node}: {hood}")


def build_static_schedule(graph: ConnectivityGraph, dodag,
                          params: ScheduleParams,
                          up_multiplicity: dict[tuple[int, int], int] | None = None,
                          down_multiplicity: dict[tuple[int, int], int] | None = None,
                          ) -> dict[int, ScheduleMatrix]:
    """Build per-node schedules for a routing tree over the given graph.

    For every tree edge both directions receive Interest cells in the static
    Interest region (per-edge multiplicity, at least cells_per_neighbor), with
    the matching RX cell on the peer, and k mirrored content cells with roles
    swapped in the content region. Up-path Interest slots strictly increase
    toward the root and down-path content slots strictly increase away from it,
    so tree traversal completes within one slotframe. Per-node broadcast cells
    are node-scheduled; slot 0 is the global shared broadcast cell.
    """
    params.validate()
    up_multiplicity = up_multiplicity or {}
    down_multiplicity = down_multiplicity or {}
    matrices = {n: ScheduleMatrix(n, params.slotframe_length, params.len_i,
                                  params.len_c)
                for n in graph.nodes}

    # slot 0 global broadcast plus shared content-region cells, on every node
    reserved = {0}
    c_start = 1 + params.len_i
    shared_slots = [c_start + i for i in range(params.shared_content_cells)]
    reserved.update(shared_slots)
    for n in graph.nodes:
        matrices[n].add_cell(Cell(0, 0, ROLE_SHARED, BROADCAST, SSF_NONE))
        for s in shared_slots:
            matrices[n].add_cell(Cell(s, 0, ROLE_SHARED, BROADCAST, SSF_C))

    placer = _Placer(graph, matrices, reserved)
    k = params.k

    # per-node broadcast cells, scanned from the top of the Interest region to
    # leave low slots for the ordered unicast chains below
    for n in graph.nodes:
        for _ in range(params.broadcast_cells_per_node):
            spot = next(((s, c)
                         for s in range(params.len_i, 0, -1)
                         for c in range(NUM_CHANNELS)
                         if placer.can_place_broadcast(n, s, c)), None)
            if spot is None:
                raise ScheduleInfeasibleError(_saturation_message(
                    "broadcast capacity", f"no slot for node {n}'s broadcast cell",
                    graph, n))
            matrices[n].add_cell(Cell(spot[0], spot[1], ROLE_TX, BROADCAST, SSF_I))

    def place_edge_cells(sender: int, receiver: int, count: int, slots: Iterable[int],
                         ssf: str, what: str) -> list[Cell]:
        cells = []
        for _ in range(count):
            spot = next(((s, c) for s in slots for c in range(NUM_CHANNELS)
                         if placer.can_place_unicast(sender, receiver, s, c)), None)
            if spot is None:
                raise ScheduleInfeasibleError(_saturation_message(
                    what, f"no (slot, channel) left for {sender}->{receiver}",
                    graph, receiver))
            tx, _ = placer.place_unicast_pair(sender, receiver, spot[0], spot[1],
                                              ssf, k)
            cells.append(tx)
        return cells

    i_end = params.len_i
    mult_up = {e: max(params.cells_per_neighbor, up_multiplicity.get(e, 0))
               for e in ((n, dodag.parent[n]) for n in dodag.order_leaves_first())}
    mult_down = {e: max(params.cells_per_neighbor, down_multiplicity.get(e, 0))
                 for e in ((dodag.parent[n], n) for n in dodag.order_root_first())}

    # upward Interest cells: deepest edges first, each edge after its children's
    up_cells: dict[tuple[int, int], list[Cell]] = {}
    for child in dodag.order_leaves_first():
        edge = (child, dodag.parent[child])
        floor = 1 + max((c.slot_offset
                         for x in dodag.children.get(child, ())
                         for c in up_cells[(x, child)]), default=0)
        up_cells[edge] = place_edge_cells(
            edge[0], edge[1], mult_up[edge], range(floor, i_end + 1), SSF_I,
            "Interest capacity (upward)")

    # downward Interest cells: root's edges first, each after its parent's edge
    down_cells: dict[tuple[int, int], list[Cell]] = {}
    for child in dodag.order_root_first():
        parent = dodag.parent[child]
        edge = (parent, child)
        if parent == dodag.root:
            floor = 1
        else:
            floor = 1 + max(c.slot_offset
                            for c in down_cells[(dodag.parent[parent], parent)])
        down_cells[edge] = place_edge_cells(
            edge[0], edge[1], mult_down[edge], range(floor, i_end + 1), SSF_I,
            "Interest capacity (downward)")

    # content mirrors of upward Interest cells flow down the tree in order
    c_lo, c_hi = c_start, c_start + params.len_c - 1
    mirror_down: dict[tuple[int, int], list[Cell]] = {}
    for child in dodag.order_root_first():
        parent = dodag.parent[child]
        if parent == dodag.root:
            floor = c_lo
        else:
            floor = 1 + max(c.slot_offset
                            for c in mirror_down[(dodag.parent[parent], parent)])
        mirror_down[(parent, child)] = place_edge_cells(
            parent, child, k * mult_up[(child, parent)], range(floor, c_hi + 1),
            SSF_C, "content capacity (downward)")

    # content mirrors of downward Interest cells (content flowing up): no
    # ordering requirement, first fit
    for child in dodag.order_root_first():
        parent = dodag.parent[child]
        place_edge_cells(child, parent, k * mult_down[(parent, child)],
                         range(c_lo, c_hi + 1), SSF_C, "content capacity (upward)")

    return matrices


@dataclass
class Violation:
    kind: str
    message: str
    nodes: tuple[int, ...] = ()


def check_collision_free(matrices: dict[int, ScheduleMatrix],
                         graph: ConnectivityGraph) -> list[Violation]:
    """Report schedule conflicts; an empty list means collision-free.

    Checks: (a) no node holds two cells at one (slot, channel) nor transmits
    while holding another cell that slot; (b) two unicast TX cells may share a
    (slot, channel) only when each sender is more than 2 hops from the other
    receiver; (c) a broadcast cell's (slot, channel) is clear of any other
    transmitter within the broadcaster's 2-hop neighborhood. Shared cells
    contend by design and are exempt.
    """
    violations: list[Violation] = []
    within2 = {n: graph.neighbors(n, 2) | {n} for n in graph.nodes}

    for n, m in matrices.items():
        for slot, cells in m.by_slot.items():
            seen: dict[tuple[int, int], Cell] = {}
            for c in cells:
                if c.key() in seen:
                    violations.append(Violation(
                        "duplicate-cell",
                        f"node {n} holds two cells at {c.key()}", (n,)))
                seen[c.key()] = c
            tx = [c for c in cells if c.role == ROLE_TX]
            if tx and len(cells) > 1:
                violations.append(Violation(
                    "node-radio-conflict",
                    f"node {n} transmits in slot {slot} while holding "
                    f"{len(cells) - 1} other cell(s)", (n,)))

    by_pos: dict[tuple[int, int], list[Cell]] = {}
    for m in matrices.values():
        for c in m.cells.values():
            if c.role == ROLE_TX:
                by_pos.setdefault(c.key(), []).append(c)

    for pos, cells in sorted(by_pos.items()):
        cells = sorted(cells, key=lambda c: c.owner)
        for i, a in enumerate(cells):
            for b in cells[i + 1:]:
                a_bcast = a.peer == BROADCAST
                b_bcast = b.peer == BROADCAST
                if a_bcast or b_bcast:
                    o, other = (a, b) if a_bcast else (b, a)
                    if other.owner in within2[o.owner]:
                        violations.append(Violation(
                            "broadcast-conflict",
                            f"broadcast cell of node {o.owner} at {pos} conflicts "
                            f"with transmitter {other.owner}",
                            (o.owner, other.owner)))
                else:
                    if a.owner in within2[b.peer] or b.owner in within2[a.peer]:
                        violations.append(Violation(
                            "unicast-conflict",
                            f"links {a.owner}->{a.peer} and {b.owner}->{b.peer} "
                            f"share {pos}; receivers {a.peer} and {b.peer} within "
                            f"2 hops of a foreign sender",
                            (a.peer, b.peer)))
    return violations


def check_matching_pairs(matrices: dict[int, ScheduleMatrix]) -> list[Violation]:
    """Every active unicast TX cell needs the matching active RX cell."""
    violations = []
    for n, m in matrices.items():
        for c in m.cells.values():
            if c.role != ROLE_TX or c.peer == BROADCAST or not c.active:
                continue
            peer_cell = matrices[c.peer].cells.get(c.key())
            if peer_cell is None or peer_cell.role != ROLE_RX or peer_cell.peer != n:
                violations.append(Violation(
                    "missing-pair",
                    f"TX cell {n}->{c.peer} at {c.key()} lacks matching RX", (n, c.peer)))
            elif not peer_cell.active:
                violations.append(Violation(
                    "inactive-pair",
                    f"TX cell {n}->{c.peer} at {c.key()} paired with inactive RX",
                    (n, c.peer)))
    return violations


# --- per-node MAC runtime -------------------------------------------------

TRANSMIT = "TRANSMIT"
LISTEN = "LISTEN"
CONTEND = "CONTEND"
SLEEP = "SLEEP"


@dataclass
class QueuedFrame:
    frame: object
    dest: int
    retries: int = 0
    backoff: int = 0          # shared-cell deferral counter
    window: int = 2           # shared-cell backoff window
    shared_retries: int = 0
    retryable: bool = False   # shared-cell frames: retry on collision


@dataclass
class SlotPlan:
    action: str
    tx_cell: Cell | None = None
    tx_item: QueuedFrame | None = None
    listens: list[tuple[int, Cell | None]] = field(default_factory=list)  # (channel, cell)


class TschNodeMac:
    """Queues, activation state, and per-slot radio decisions for one node."""

    SHARED_WINDOW_START = 2
    SHARED_WINDOW_MAX = 8
    SHARED_MAX_RETRIES = 2

    def __init__(self, node_id: int, matrix: ScheduleMatrix, rng,
                 max_retries: int = 3):
        self.id = node_id
        self.matrix = matrix
        self.rng = rng
        self.max_retries = max_retries
        self.queues: dict[int, deque[QueuedFrame]] = {}
        self.broadcast_queue: deque[QueuedFrame] = deque()
        # neighbour broadcast cells this node must listen to: offset -> cells
        self.neighbor_broadcast: dict[int, list[Cell]] = {}
        self.rx_pending: dict[int, int] = {}  # face -> outstanding content returns
        self.tx_pending: dict[int, int] = {}
        self.retransmissions = 0
        self.drops = 0

    # --- queueing

    def enqueue(self, face: int, frame, retryable: bool = False) -> None:
        if face == BROADCAST_FACE:
            item = QueuedFrame(frame, BROADCAST, retryable=retryable)
            item.backoff = self.rng.randint(0, item.window - 1)
            self.broadcast_queue.append(item)
        else:
            self.queues.setdefault(face, deque()).append(QueuedFrame(frame, face))

    def queue_depth(self, face: int) -> int:
        return len(self.queues.get(face, ()))

    # --- content-cell activation (semi-dynamic schedule)

    def content_cells(self, face: int, role: str) -> list[Cell]:
        return [c for c in self.matrix.unicast_cells(peer=face, role=role)
                if c.ssf == SSF_C and not c.dynamic]

    def activate_content_cells(self, face: int, side: str) -> None:
        """side='rx' on the Interest sender, side='tx' on the receiver."""
        if face == BROADCAST_FACE:
            raise ConfigError("broadcast faces use shared cells, not activation")
        pend = self.rx_pending if side == "rx" else self.tx_pending
        pend[face] = pend.get(face, 0) + 1
        role = ROLE_RX if side == "rx" else ROLE_TX
        for c in self.content_cells(face, role):
            c.active = True

    def deactivate_content_cells(self, face: int, side: str) -> None:
        pend = self.rx_pending if side == "rx" else self.tx_pending
        if pend.get(face, 0) > 0:
            pend[face] -= 1
        if pend.get(face, 0) == 0:
            role = ROLE_RX if side == "rx" else ROLE_TX
            for c in self.content_cells(face, role):
                c.active = False

    def set_all_content_cells(self, active: bool) -> None:
        for c in self.matrix.cells.values():
            if c.ssf == SSF_C and c.role != ROLE_SHARED:
                c.active = active

    # --- slot planning

    def plan(self, asn: int) -> SlotPlan:
        offset = asn % self.matrix.slotframe_length
        cells = self.matrix.cells_at_slot(offset)
        shared = next((c for c in cells if c.role == ROLE_SHARED and c.active), None)
        tx_cell = None
        tx_item = None
        listens: list[tuple[int, Cell | None]] = []

        for cell in sorted(cells, key=Cell.key):
            if not cell.active or cell.role == ROLE_SHARED:
                continue
            ch = physical_channel(cell.channel_offset, asn)
            if cell.role == ROLE_TX and cell.peer != BROADCAST:
                q = self.queues.get(cell.peer)
                if q and tx_cell is None:
                    tx_cell, tx_item = cell, q[0]
            elif cell.role == ROLE_TX and cell.peer == BROADCAST:
                if self.broadcast_queue and tx_cell is None:
                    tx_cell, tx_item = cell, self.broadcast_queue[0]
            else:
                listens.append((ch, cell))

        if tx_cell is not None:
            return SlotPlan(TRANSMIT, tx_cell, tx_item, listens)

        if shared is not None:
            if self.broadcast_queue:
                return SlotPlan(CONTEND, shared, self.broadcast_queue[0], listens)
            listens.append((physical_channel(shared.channel_offset, asn), shared))

        for cell in self.neighbor_broadcast.get(offset, ()):
            if cell.active:
                listens.append((physical_channel(cell.channel_offset, asn), cell))

        if listens:
            return SlotPlan(LISTEN, None, None, listens)
        return SlotPlan(SLEEP)

    # --- unicast outcome bookkeeping

    def tx_succeeded(self, face: int) -> None:
        self.queues[face].popleft()
        if not self.queues[face]:
            del self.queues[face]

    def tx_failed(self, face: int) -> object | None:
        """Retry accounting; returns the dropped frame once retries exhaust."""
        item = self.queues[face][0]
        if item.retries < self.max_retries:
            item.retries += 1
            self.retransmissions += 1
            return None
        self.tx_succeeded(face)  # remove from queue
        self.drops += 1
        return item.frame

    # --- shared-cell contention

    def shared_defers(self) -> bool:
        """One contention round: True when this contender defers this slot."""
        item = self.broadcast_queue[0]
        if item.backoff > 0:
            item.backoff -= 1
            return True
        return False

    def shared_sent(self, collided: bool) -> None:
        item = self.broadcast_queue.popleft()
        if collided and item.retryable and item.shared_retries < self.SHARED_MAX_RETRIES:
            item.shared_retries += 1
            item.window = min(item.window * 2, self.SHARED_WINDOW_MAX)
            item.backoff = self.rng.randint(0, item.window - 1)
            self.broadcast_queue.append(item)


def slot_action(mac: TschNodeMac, asn: int) -> str:
    """Single-action view of a node's slot: TRANSMIT/CONTEND/LISTEN/SLEEP."""
    return mac.plan(asn).action


def dump_schedules_csv(matrices: dict[int, ScheduleMatrix]) -> str:
    lines = ["node,slot_offset,channel_offset,role,peer,ssf,active"]
    for n in sorted(matrices):
        for row in matrices[n].dump_rows():
            lines.append(",".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
