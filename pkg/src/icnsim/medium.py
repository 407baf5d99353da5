"""Graph-based wireless medium.

Connectivity is an explicit undirected edge list with optional per-edge loss
probability. Delivery within one slot is resolved per (receiver, channel):
exactly one in-range transmission on a channel is receivable, two or more
collide (no capture effect). Interference range equals connectivity range.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .kernel import ConfigError, Rng

NUM_CHANNELS = 16

BROADCAST = -1


class ConnectivityGraph:
    """Undirected graph over node ids with per-edge loss probability."""

    def __init__(self, nodes: Iterable[int], edges: Iterable[tuple[int, int]] | None = None):
        self.nodes: list[int] = sorted(set(nodes))
        self._adj: dict[int, set[int]] = {n: set() for n in self.nodes}
        self.p_loss: dict[frozenset[int], float] = {}
        for e in edges or []:
            self.add_edge(*e)

    def add_edge(self, a: int, b: int, p_loss: float = 0.0) -> None:
        if a == b:
            raise ConfigError(f"self-loop on node {a}")
        if a not in self._adj or b not in self._adj:
            raise ConfigError(f"edge ({a},{b}) references unknown node")
        if not 0.0 <= p_loss <= 1.0:
            raise ConfigError(f"p_loss {p_loss} outside [0,1] on edge ({a},{b})")
        self._adj[a].add(b)
        self._adj[b].add(a)
        self.p_loss[frozenset((a, b))] = p_loss

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.p_loss)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj.get(a, ())

    def edge_loss(self, a: int, b: int) -> float:
        return self.p_loss[frozenset((a, b))]

    def neighbors(self, node: int, hops: int = 1) -> set[int]:
        """Exact k-hop neighborhood (excluding the node itself), by BFS."""
        if node not in self._adj:
            raise ConfigError(f"unknown node {node}")
        seen = {node}
        frontier = {node}
        out: set[int] = set()
        for _ in range(hops):
            frontier = {m for n in frontier for m in self._adj[n]} - seen
            seen |= frontier
            out |= frontier
        return out

    def is_connected(self) -> bool:
        return not self.unreachable_from(self.nodes[0]) if self.nodes else True

    def unreachable_from(self, root: int) -> set[int]:
        seen = {root}
        q = deque([root])
        while q:
            n = q.popleft()
            for m in self._adj[n]:
                if m not in seen:
                    seen.add(m)
                    q.append(m)
        return set(self.nodes) - seen

    def bfs_distances(self, root: int) -> dict[int, int]:
        dist = {root: 0}
        q = deque([root])
        while q:
            n = q.popleft()
            for m in sorted(self._adj[n]):
                if m not in dist:
                    dist[m] = dist[n] + 1
                    q.append(m)
        return dist


@dataclass
class TransmissionAttempt:
    sender: int
    frame: object
    channel: int
    asn: int
    dest: int = BROADCAST  # node id, or BROADCAST

    def __post_init__(self):
        if not 0 <= self.channel < NUM_CHANNELS:
            raise ConfigError(f"channel {self.channel} outside 0..{NUM_CHANNELS - 1}")


DELIVERED = "delivered"
COLLISION = "collision"
CHANNEL_LOSS = "channel-loss"


@dataclass
class DeliveryOutcome:
    receiver: int
    channel: int
    status: str
    attempt: TransmissionAttempt | None = None  # the delivered frame's attempt
    colliders: list[int] = field(default_factory=list)


def resolve_slot(attempts: list[TransmissionAttempt], graph: ConnectivityGraph,
                 rng: Rng) -> dict[tuple[int, int], DeliveryOutcome]:
    """Resolve one slot's transmissions into per-(receiver, channel) outcomes.

    A receiver hears an attempt iff it shares an edge with the sender, exactly
    one in-range transmission uses that channel this slot, and the per-edge
    loss draw succeeds. Same-channel overlap destroys all overlapping frames
    at that receiver. Loss draws run in a fixed sort order for determinism.
    """
    if attempts:
        asn0 = attempts[0].asn
        for a in attempts:
            if a.asn != asn0:
                raise ConfigError("resolve_slot attempts must share one asn")

    heard: dict[tuple[int, int], list[TransmissionAttempt]] = {}
    for att in sorted(attempts, key=lambda a: (a.sender, a.channel)):
        for r in sorted(graph.neighbors(att.sender, 1)):
            heard.setdefault((r, att.channel), []).append(att)

    outcomes: dict[tuple[int, int], DeliveryOutcome] = {}
    for (r, ch) in sorted(heard):
        atts = heard[(r, ch)]
        if len(atts) > 1:
            outcomes[(r, ch)] = DeliveryOutcome(
                r, ch, COLLISION, colliders=sorted(a.sender for a in atts))
            continue
        att = atts[0]
        p = graph.edge_loss(att.sender, r)
        if p > 0.0 and rng.random() < p:
            outcomes[(r, ch)] = DeliveryOutcome(r, ch, CHANNEL_LOSS, attempt=att)
        else:
            outcomes[(r, ch)] = DeliveryOutcome(r, ch, DELIVERED, attempt=att)
    return outcomes


def random_connected_graph(n: int, rng: Rng, extra_edge_prob: float = 0.15,
                           p_loss: float = 0.0) -> ConnectivityGraph:
    """Random connected topology: a uniform recursive tree plus extra edges."""
    nodes = list(range(1, n + 1))
    g = ConnectivityGraph(nodes)
    for i in nodes[1:]:
        g.add_edge(i, rng.randint(1, i - 1), p_loss)
    for i in nodes:
        for j in nodes:
            if i < j and not g.has_edge(i, j) and rng.random() < extra_edge_prob:
                g.add_edge(i, j, p_loss)
    return g
