"""Routing tree and name-routing strategy.

The DODAG is a shortest-path tree rooted at the gateway (lowest-id parent on
ties). Name advertisements travel child-to-parent up to the root, installing
include-mode FIB entries along the way; the root always learns every name.
Interests ride the tree: upward by default, redirected or flooded downward by
FIB matches, never back up once descending.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .icn import BimodalFib, EXCLUDE, INCLUDE, fib_lookup
from .kernel import ConfigError
from .medium import ConnectivityGraph
from .packets import DOWN, UP, InterestPacket, Name


@dataclass
class Dodag:
    root: int
    parent: dict[int, int] = field(default_factory=dict)      # node -> parent
    rank: dict[int, int] = field(default_factory=dict)        # node -> hops to root

    def __post_init__(self):
        self.rank.setdefault(self.root, 0)

    @property
    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for n, p in self.parent.items():
            out.setdefault(p, []).append(n)
        return {p: sorted(cs) for p, cs in out.items()}

    @property
    def nodes(self) -> list[int]:
        return sorted(set(self.parent) | {self.root})

    def children_of(self, node: int) -> list[int]:
        return self.children.get(node, [])

    def order_leaves_first(self) -> list[int]:
        """Non-root nodes, deepest rank first (up-edge assignment order)."""
        return sorted(self.parent, key=lambda n: (-self.rank[n], n))

    def order_root_first(self) -> list[int]:
        """Non-root nodes, shallowest rank first (down-edge assignment order)."""
        return sorted(self.parent, key=lambda n: (self.rank[n], n))

    def path_to_root(self, node: int) -> list[int]:
        path = [node]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path

    def subtree(self, node: int) -> set[int]:
        out = {node}
        stack = [node]
        while stack:
            for c in self.children_of(stack.pop()):
                out.add(c)
                stack.append(c)
        return out

    def validate(self) -> None:
        for n, p in self.parent.items():
            if self.rank[n] != self.rank[p] + 1:
                raise ConfigError(f"rank of {n} is not parent rank + 1")
        seen = self.subtree(self.root)
        if seen != set(self.nodes):
            raise ConfigError(f"dodag not a tree rooted at {self.root}")

    def dump_rows(self) -> list[tuple]:
        rows = [(self.root, "", 0)]
        for n in sorted(self.parent):
            rows.append((n, self.parent[n], self.rank[n]))
        return rows


def bfs_dodag(graph: ConnectivityGraph, root: int) -> Dodag:
    """Reference shortest-path tree: BFS ranks, lowest-id parent on ties.

    The simulated DIO/DAO exchange must converge to exactly this tree.
    """
    unreachable = graph.unreachable_from(root)
    if unreachable:
        raise ConfigError(f"nodes unreachable from root {root}: {sorted(unreachable)}")
    dist = graph.bfs_distances(root)
    dodag = Dodag(root)
    for n in graph.nodes:
        if n == root:
            continue
        candidates = [m for m in graph.neighbors(n, 1) if dist[m] == dist[n] - 1]
        dodag.parent[n] = min(candidates)
        dodag.rank[n] = dist[n]
    return dodag


class RoutingState:
    """Per-node FIB plus NAM bookkeeping for the exclude-subtree rule."""

    def __init__(self, node: int, dodag: Dodag, fib_capacity: int | None):
        self.node = node
        self.dodag = dodag
        self.is_root = node == dodag.root
        self.fib = BimodalFib(capacity=None if self.is_root else fib_capacity)
        self.nams_from_child: dict[int, int] = {c: 0 for c in dodag.children_of(node)}

    @property
    def parent_face(self) -> int | None:
        return None if self.is_root else self.dodag.parent[self.node]

    @property
    def child_faces(self) -> list[int]:
        return self.dodag.children_of(self.node)

    def absorb_nam(self, prefix: Name, arriving_face: int) -> bool:
        """Install the advertised prefix toward the child it arrived from.

        The root always installs (full routing table); intermediates only when
        capacity admits, evicting LRU otherwise (BimodalFib handles both).
        """
        if arriving_face in self.nams_from_child:
            self.nams_from_child[arriving_face] += 1
        return self.fib.add(prefix, arriving_face, INCLUDE)

    def install_exclude_for_silent_children(self) -> list[int]:
        """After route learning settles, mark NAM-silent subtrees exclude-all."""
        excluded = []
        for child, count in sorted(self.nams_from_child.items()):
            if count == 0:
                self.fib.add((), child, EXCLUDE)
                excluded.append(child)
        return excluded


def forward_decision(state: RoutingState, interest: InterestPacket
                     ) -> tuple[str, list[int]]:
    """Choose direction and faces for an Interest at one node.

    Upward phase: a downward include match redirects into that subtree; the
    root always turns the Interest downward, flooding eligible children.
    Downward phase: eligible children only, never back up; no child means a
    dead end (empty face list).
    """
    children = state.child_faces
    if interest.direction == UP:
        include_children = [c for c in children
                            if state.fib.decision_for_face(interest.name, c) == INCLUDE]
        if include_children:
            return DOWN, sorted(include_children)
        if state.is_root:
            return DOWN, sorted(fib_lookup(state.fib, interest.name, children))
        return UP, [state.parent_face]
    return DOWN, sorted(fib_lookup(state.fib, interest.name, children))
