"""Floor diagrams over the rectangular Newton polygon of the quadric.

A floor diagram for bidegree (a, b) is a weighted oriented tree on b floors
(vertices) together with 2a unbounded weight-1 edges: a bottom edges oriented
into the diagram and a top edges oriented out of it.  Every floor has
divergence 0, i.e. outgoing weight (bounded elevators out plus top edges)
equals incoming weight (bounded elevators in plus bottom edges).  The b - 1
bounded elevators form a spanning tree, so the underlying curve has genus 0.

Floors are labeled 0..b-1 in some topological order of the orientation;
elevators are stored as (source, target, weight) with source < target.
Isomorphism classes are identified by `canonical_encoding`, the minimum of
the serialized form over all topological relabelings.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import lru_cache

from .bidegree import Bidegree
from .errors import InputError

FLOOR = "floor"
ELEVATOR = "elevator"
BOTTOM = "bottom"
TOP = "top"


@dataclass(frozen=True)
class DiagramElement:
    """One markable element of a floor diagram.

    `index` is the position in the element list returned by `elements()`;
    `ref` identifies the element within its kind (floor number, elevator
    number, or unbounded-edge number).  Floors carry weight 1 by convention.
    """

    kind: str
    ref: int
    weight: int
    index: int


@dataclass(frozen=True)
class FloorDiagram:
    floors: int
    elevators: tuple[tuple[int, int, int], ...]
    bottoms: tuple[int, ...]
    tops: tuple[int, ...]

    def __post_init__(self) -> None:
        b = self.floors
        if b < 1:
            raise InputError("a floor diagram needs at least one floor")
        if len(self.bottoms) != len(self.tops):
            raise InputError("bottom and top edge counts must agree")
        if len(self.elevators) != b - 1:
            raise InputError("bounded elevators must form a spanning tree (b - 1 edges)")
        for (u, v, w) in self.elevators:
            if not (0 <= u < v < b):
                raise InputError(f"elevator ({u}, {v}) is not oriented along the floor order")
            if w < 1:
                raise InputError("elevator weights must be positive")
        for v in itertools.chain(self.bottoms, self.tops):
            if not (0 <= v < b):
                raise InputError("unbounded edge attached to a missing floor")
        if not self._connected():
            raise InputError("bounded elevators do not connect the floors")
        for v in range(b):
            if self.divergence(v) != 0:
                raise InputError(f"floor {v} has divergence {self.divergence(v)}")

    def _connected(self) -> bool:
        parent = list(range(self.floors))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (u, v, _) in self.elevators:
            parent[find(u)] = find(v)
        return len({find(v) for v in range(self.floors)}) == 1

    def divergence(self, v: int) -> int:
        out_w = sum(w for (u, t, w) in self.elevators if u == v)
        in_w = sum(w for (u, t, w) in self.elevators if t == v)
        return (out_w + self.tops.count(v)) - (in_w + self.bottoms.count(v))

    @property
    def bidegree(self) -> Bidegree:
        return Bidegree(len(self.bottoms), self.floors)

    @property
    def element_count(self) -> int:
        return self.floors + len(self.elevators) + len(self.bottoms) + len(self.tops)

    def elements(self) -> tuple[DiagramElement, ...]:
        """All markable elements: floors, elevators, bottoms, tops, in that order."""
        out = []
        for v in range(self.floors):
            out.append(DiagramElement(FLOOR, v, 1, len(out)))
        for k, (_, _, w) in enumerate(self.elevators):
            out.append(DiagramElement(ELEVATOR, k, w, len(out)))
        for j in range(len(self.bottoms)):
            out.append(DiagramElement(BOTTOM, j, 1, len(out)))
        for j in range(len(self.tops)):
            out.append(DiagramElement(TOP, j, 1, len(out)))
        return tuple(out)

    def order_constraints(self) -> tuple[tuple[int, int], ...]:
        """Pairs (i, j) of element indices with i strictly before j in any marking."""
        b = self.floors
        ne = len(self.elevators)
        cons = []
        for k, (u, v, _) in enumerate(self.elevators):
            cons.append((u, b + k))
            cons.append((b + k, v))
        for j, v in enumerate(self.bottoms):
            cons.append((b + ne + j, v))
        for j, v in enumerate(self.tops):
            cons.append((v, b + ne + len(self.bottoms) + j))
        return tuple(cons)

    def incident_floors(self, e: DiagramElement) -> frozenset[int]:
        """Floors a pair block may share: a floor is incident to itself, an
        edge to its endpoint floors."""
        if e.kind == FLOOR:
            return frozenset((e.ref,))
        if e.kind == ELEVATOR:
            u, v, _ = self.elevators[e.ref]
            return frozenset((u, v))
        if e.kind == BOTTOM:
            return frozenset((self.bottoms[e.ref],))
        return frozenset((self.tops[e.ref],))

    def origin_floor(self, e: DiagramElement) -> int | None:
        """Source floor of an edge; bottom edges come from below and have none."""
        if e.kind == ELEVATOR:
            return self.elevators[e.ref][0]
        if e.kind == TOP:
            return self.tops[e.ref]
        return None


def _prufer_trees(b: int):
    """All labeled trees on 0..b-1 as edge lists, via Prufer decoding."""
    if b == 1:
        yield ()
        return
    if b == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(b), repeat=b - 2):
        deg = [1] * b
        for x in seq:
            deg[x] += 1
        leaves = [i for i in range(b) if deg[i] == 1]
        heapq.heapify(leaves)
        edges = []
        for x in seq:
            leaf = heapq.heappop(leaves)
            edges.append((min(leaf, x), max(leaf, x)))
            deg[x] -= 1
            if deg[x] == 1:
                heapq.heappush(leaves, x)
        u = heapq.heappop(leaves)
        v = heapq.heappop(leaves)
        edges.append((min(u, v), max(u, v)))
        yield tuple(edges)


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> tuple[tuple[int, ...], ...]:
    """Weak compositions of `total` into `parts` nonnegative summands."""
    if parts == 0:
        return ((),) if total == 0 else ()
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_diagrams(bd: Bidegree) -> list[FloorDiagram]:
    """All isomorphism classes of floor diagrams for `bd`, canonically sorted.

    Bidegree (a, 0) is handled through the ruling swap: its diagrams live in
    the flipped fiber direction and coincide with those of (0, a).
    """
    a, b = bd.a, bd.b
    if b == 0:
        a, b = b, a
    seen: dict[bytes, FloorDiagram] = {}
    for tree in _prufer_trees(b):
        weight_ranges = [range(1, a + 1)] * (b - 1)
        for weights in itertools.product(*weight_ranges):
            # incoming minus outgoing bounded weight per floor
            delta = [0] * b
            for ((u, v), w) in zip(tree, weights):
                delta[v] += w
                delta[u] -= w
            lower = [max(dv, 0) for dv in delta]
            spare = a - sum(lower)
            if spare < 0:
                continue
            elevators = tuple(sorted((u, v, w) for ((u, v), w) in zip(tree, weights)))
            for extra in _compositions(spare, b):
                tops_cnt = [lower[v] + extra[v] for v in range(b)]
                bots_cnt = [tops_cnt[v] - delta[v] for v in range(b)]
                bottoms = tuple(v for v in range(b) for _ in range(bots_cnt[v]))
                tops = tuple(v for v in range(b) for _ in range(tops_cnt[v]))
                try:
                    diag = FloorDiagram(b, elevators, bottoms, tops)
                except InputError:
                    continue
                key = canonical_encoding(diag)
                if key not in seen:
                    seen[key] = diag
    return [seen[k] for k in sorted(seen)]


def _topological_labelings(diagram: FloorDiagram):
    """All relabelings pi (old -> new) compatible with the orientation."""
    b = diagram.floors
    preds = [set() for _ in range(b)]
    for (u, v, _) in diagram.elevators:
        preds[v].add(u)
    perm = [-1] * b
    placed: set[int] = set()

    def rec(pos: int):
        if pos == b:
            yield tuple(perm)
            return
        for v in range(b):
            if perm[v] < 0 and preds[v] <= placed:
                perm[v] = pos
                placed.add(v)
                yield from rec(pos + 1)
                placed.discard(v)
                perm[v] = -1

    yield from rec(0)


def canonical_encoding(diagram: FloorDiagram) -> bytes:
    """Deterministic encoding equal for isomorphic diagrams, distinct otherwise."""
    best: bytes | None = None
    for pi in _topological_labelings(diagram):
        key = (
            diagram.floors,
            tuple(sorted(pi[v] for v in diagram.bottoms)),
            tuple(sorted(pi[v] for v in diagram.tops)),
            tuple(sorted((pi[u], pi[v], w) for (u, v, w) in diagram.elevators)),
        )
        enc = repr(key).encode("ascii")
        if best is None or enc < best:
            best = enc
    assert best is not None
    return best


def automorphism_count(diagram: FloorDiagram) -> int:
    """Order of the automorphism group: permutations of floors and edges
    preserving kind, weight, incidence and orientation.

    Bounded elevators never occur in parallel (tree), so each structure
    preserving floor permutation extends uniquely on them; parallel unbounded
    edges at one floor contribute factorial factors.
    """
    b = diagram.floors
    elev_set = frozenset(diagram.elevators)
    bot_sorted = tuple(sorted(diagram.bottoms))
    top_sorted = tuple(sorted(diagram.tops))
    floor_perms = 0
    for pi in itertools.permutations(range(b)):
        if frozenset((pi[u], pi[v], w) for (u, v, w) in diagram.elevators) != elev_set:
            continue
        if tuple(sorted(pi[v] for v in diagram.bottoms)) != bot_sorted:
            continue
        if tuple(sorted(pi[v] for v in diagram.tops)) != top_sorted:
            continue
        floor_perms += 1
    count = floor_perms
    for v in range(b):
        for mult in (diagram.bottoms.count(v), diagram.tops.count(v)):
            for i in range(2, mult + 1):
                count *= i
    return count


def dump_record(diagram: FloorDiagram) -> dict:
    """Plain-data form of one diagram for the CLI json dump (static part)."""
    return {
        "floors": diagram.floors,
        "elevators": [[u, v, w] for (u, v, w) in diagram.elevators],
        "bottom": list(diagram.bottoms),
        "top": list(diagram.tops),
        "aut": automorphism_count(diagram),
    }
