"""NDN-style forwarding state: bimodal FIB, PIT, and per-node engine logic.

The FIB holds include/exclude prefixes per face; the longest matching prefix
decides per face, and a name with no positive match anywhere floods. The PIT
keeps one entry per chunk name with an incoming-face set and an expiry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kernel import ConfigError
from .packets import Name

INCLUDE = "INCLUDE"
EXCLUDE = "EXCLUDE"

WILDCARD = "*"


def normalize_prefix(prefix: Name) -> Name:
    """Strip a trailing wildcard: '/a/*' and '/a' match identically."""
    if prefix and prefix[-1] == WILDCARD:
        return prefix[:-1]
    return prefix


def prefix_matches(prefix: Name, name: Name) -> bool:
    prefix = normalize_prefix(prefix)
    return len(prefix) <= len(name) and name[:len(prefix)] == prefix


@dataclass(frozen=True)
class BimodalFibEntry:
    prefix: Name
    face: int
    mode: str  # INCLUDE or EXCLUDE


class BimodalFib:
    """Prefix table with include/exclude modes and LRU-bounded capacity."""

    def __init__(self, capacity: int | None = None):
        self.capacity = capacity
        # insertion-ordered dict doubles as the LRU list (oldest first)
        self._entries: dict[tuple[Name, int], str] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self) -> list[BimodalFibEntry]:
        return [BimodalFibEntry(p, f, m) for (p, f), m in self._entries.items()]

    def add(self, prefix: Name, face: int, mode: str) -> bool:
        """Insert or refresh an entry; returns False if capacity rejects it."""
        if mode not in (INCLUDE, EXCLUDE):
            raise ConfigError(f"bad FIB mode {mode}")
        key = (normalize_prefix(prefix), face)
        if key in self._entries:
            self._entries.pop(key)
            self._entries[key] = mode
            return True
        if self.capacity is not None and len(self._entries) >= self.capacity:
            if self.capacity == 0:
                return False
            self._entries.pop(next(iter(self._entries)))  # evict LRU
        self._entries[key] = mode
        return True

    def touch(self, prefix: Name, face: int) -> None:
        key = (normalize_prefix(prefix), face)
        if key in self._entries:
            mode = self._entries.pop(key)
            self._entries[key] = mode

    def lookup(self, name: Name, all_faces: list[int]) -> set[int]:
        return fib_lookup(self, name, all_faces)

    def decision_for_face(self, name: Name, face: int) -> str | None:
        """Mode of the longest prefix matching `name` on `face`, or None."""
        best_len = -1
        best_mode = None
        for (prefix, f), mode in self._entries.items():
            if f != face or not prefix_matches(prefix, name):
                continue
            if len(prefix) > best_len:
                best_len = len(prefix)
                best_mode = mode
        return best_mode


def fib_lookup(fib: BimodalFib, name: Name, all_faces: list[int]) -> set[int]:
    """Eligible faces for a name under bimodal longest-prefix semantics.

    No matching entry on any face: every face (transparent flooding).
    Only EXCLUDE matches: every face except the excluded ones.
    At least one INCLUDE match: exactly the INCLUDE-matched faces.
    """
    decided = {f: fib.decision_for_face(name, f) for f in all_faces}
    includes = {f for f, m in decided.items() if m == INCLUDE}
    excludes = {f for f, m in decided.items() if m == EXCLUDE}
    if includes:
        return includes
    if excludes:
        return set(all_faces) - excludes
    return set(all_faces)


@dataclass
class PitEntry:
    name: Name
    incoming_faces: set[int] = field(default_factory=set)
    expiry_asn: int = 0
    expiry_handle: object | None = None
    # consumer-local bookkeeping
    local: bool = False


class PitTable:
    """Pending-Interest state: at most one live entry per name."""

    def __init__(self):
        self._entries: dict[Name, PitEntry] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, name: Name) -> PitEntry | None:
        return self._entries.get(name)

    def insert(self, name: Name, expiry_asn: int) -> PitEntry:
        entry = PitEntry(name=name, expiry_asn=expiry_asn)
        self._entries[name] = entry
        return entry

    def remove(self, name: Name) -> PitEntry | None:
        entry = self._entries.pop(name, None)
        if entry is not None and entry.expiry_handle is not None:
            entry.expiry_handle.cancel()
        return entry

    def names(self) -> list[Name]:
        return list(self._entries)


def reference_fib_lookup(entries: list[BimodalFibEntry], name: Name,
                         all_faces: list[int]) -> set[int]:
    """Naive spec-shaped matcher used as the oracle in property tests."""
    per_face: dict[int, str] = {}
    for face in all_faces:
        matching = [e for e in entries
                    if e.face == face and prefix_matches(e.prefix, name)]
        if matching:
            longest = max(len(normalize_prefix(e.prefix)) for e in matching)
            winners = [e for e in matching
                       if len(normalize_prefix(e.prefix)) == longest]
            per_face[face] = winners[0].mode
    includes = {f for f, m in per_face.items() if m == INCLUDE}
    excludes = {f for f, m in per_face.items() if m == EXCLUDE}
    if includes:
        return includes
    if excludes:
        return set(all_faces) - excludes
    return set(all_faces)
