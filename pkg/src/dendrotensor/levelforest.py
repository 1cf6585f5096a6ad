"""Level diagrams of finite pointed sets and the forests they generate.

A :class:`FinSimplex` of length ``n`` is a chain ``A_0 -> A_1 -> ... -> A_n``
of finite sets where each map may also send elements to the basepoint ``*``
(dying).  Such a chain generates a forest: one edge per element, the element
``a`` at level ``i`` giving edge ``ℓi:a``; every level ``i >= 1`` element
carries a vertex whose inputs are its preimages one level down, so elements
with empty preimage become stumps.  Roots are the top-level elements together
with every element that dies.

Monotone reindexings of ``0..n`` act on chains by composing the maps, and
each reindexing induces a map of the generated free operads whose vertex
images are the level-uniform cuts.  Finally every forest is a retract of the
forest of a chain: pad each leaf up to a uniform height and read off levels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Mapping, Sequence

from .omegacat import OperadMap, Operation
from .treecore import Forest, Tree, TreeError, Vertex, as_forest, check_name

__all__ = [
    "STAR",
    "FinSimplex",
    "SimplicialOperator",
    "edge_name",
    "omega_obj",
    "omega_mor",
    "restrict",
    "RetractWitness",
    "retract_witness",
]

STAR = "*"


def edge_name(level: int, element: str) -> str:
    return f"ℓ{level}:{element}"


@dataclass(frozen=True)
class FinSimplex:
    """A chain of composable maps between finite sets with a free basepoint.

    ``levels[i]`` lists the level-``i`` elements (order is remembered and
    used for deterministic output); ``maps[i]`` sends level-``i`` elements to
    level-``i+1`` elements or to ``STAR``.
    """

    levels: tuple[tuple[str, ...], ...]
    maps: tuple[tuple[tuple[str, str], ...], ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise TreeError("a chain needs at least one level")
        if len(self.maps) != len(self.levels) - 1:
            raise TreeError("need exactly one map per consecutive level pair")
        for lev in self.levels:
            for a in lev:
                check_name(a)
                if a == STAR:
                    raise TreeError("'*' is reserved for the basepoint")
            if len(set(lev)) != len(lev):
                raise TreeError("level elements must be distinct")
        for i, m in enumerate(self.maps):
            src = dict(m)
            if set(src) != set(self.levels[i]) or len(m) != len(self.levels[i]):
                raise TreeError(f"map {i} is not total on level {i}")
            allowed = set(self.levels[i + 1]) | {STAR}
            for a, b in m:
                if b not in allowed:
                    raise TreeError(f"map {i} sends {a!r} outside level {i + 1}")

    @property
    def n(self) -> int:
        return len(self.levels) - 1

    def alpha(self, i: int) -> dict[str, str]:
        """The map out of level ``i-1`` (so ``alpha(1)`` starts the chain)."""
        return dict(self.maps[i - 1])

    def comp(self, j: int, i: int) -> dict[str, str]:
        """Composite level ``j`` -> level ``i`` (``j <= i``), ``STAR`` absorbing."""
        if not 0 <= j <= i <= self.n:
            raise TreeError(f"bad composite range {j}..{i}")
        out = {a: a for a in self.levels[j]}
        for k in range(j + 1, i + 1):
            step = self.alpha(k)
            out = {a: (STAR if b == STAR else step[b]) for a, b in out.items()}
        return out

    # -- JSON ---------------------------------------------------------------

    @staticmethod
    def from_json(obj: Mapping[str, Any] | str) -> "FinSimplex":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, Mapping) or "levels" not in obj or "maps" not in obj:
            raise TreeError("chain JSON needs 'levels' and 'maps'")
        levels = tuple(tuple(str(a) for a in lev) for lev in obj["levels"])
        maps = tuple(
            tuple(sorted((str(a), str(b)) for a, b in m.items()))
            for m in obj["maps"]
        )
        return FinSimplex(levels, maps)

    def to_json(self) -> dict[str, Any]:
        return {
            "levels": [list(lev) for lev in self.levels],
            "maps": [dict(m) for m in self.maps],
        }


@dataclass(frozen=True)
class SimplicialOperator:
    """A monotone map ``{0..dom} -> {0..cod}`` acting on chains by reindexing."""

    dom: int
    cod: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dom < 0 or self.cod < 0 or len(self.values) != self.dom + 1:
            raise TreeError("operator arity mismatch")
        for a, b in zip(self.values, self.values[1:]):
            if a > b:
                raise TreeError("operator is not monotone")
        if self.values and not (0 <= self.values[0] and self.values[-1] <= self.cod):
            raise TreeError("operator values out of range")

    def __call__(self, j: int) -> int:
        return self.values[j]

    @staticmethod
    def identity(n: int) -> "SimplicialOperator":
        return SimplicialOperator(n, n, tuple(range(n + 1)))

    @staticmethod
    def face(n: int, i: int) -> "SimplicialOperator":
        """The injection ``{0..n-1} -> {0..n}`` that skips ``i``."""
        return SimplicialOperator(
            n - 1, n, tuple(j if j < i else j + 1 for j in range(n))
        )

    @staticmethod
    def degeneracy(n: int, i: int) -> "SimplicialOperator":
        """The surjection ``{0..n+1} -> {0..n}`` that repeats ``i``."""
        return SimplicialOperator(
            n + 1, n, tuple(j if j <= i else j - 1 for j in range(n + 2))
        )

    def after(self, other: "SimplicialOperator") -> "SimplicialOperator":
        """Composite ``self ∘ other``."""
        if other.cod != self.dom:
            raise TreeError("operator composition mismatch")
        return SimplicialOperator(
            other.dom, self.cod, tuple(self.values[v] for v in other.values)
        )


def restrict(a: FinSimplex, phi: SimplicialOperator) -> FinSimplex:
    """Reindex the chain along ``phi`` (levels ``phi(0), ..., phi(dom)``)."""
    if phi.cod != a.n:
        raise TreeError(f"operator lands in {phi.cod}, chain has length {a.n}")
    levels = tuple(a.levels[phi(j)] for j in range(phi.dom + 1))
    maps = tuple(
        tuple(sorted(a.comp(phi(j - 1), phi(j)).items()))
        for j in range(1, phi.dom + 1)
    )
    return FinSimplex(levels, maps)


def omega_obj(a: FinSimplex) -> Forest:
    """The forest generated by a chain.

    Component order: top-level elements first (in level order), then dying
    elements by ascending level, preserving level order within a level.
    """
    n = a.n
    roots: list[tuple[int, str]] = [(n, x) for x in a.levels[n]]
    for i in range(n):
        step = a.alpha(i + 1)
        roots.extend((i, x) for x in a.levels[i] if step[x] == STAR)

    preim: dict[tuple[int, str], list[str]] = {}
    for i in range(1, n + 1):
        step = a.alpha(i)
        for x in a.levels[i]:
            preim[(i, x)] = [b for b in a.levels[i - 1] if step[b] == x]

    def build(root_level: int, root_elem: str) -> Tree:
        verts: list[Vertex] = []
        pending = [(root_level, root_elem)]
        while pending:
            i, x = pending.pop()
            if i == 0:
                continue
            below = preim[(i, x)]
            verts.append(
                Vertex(edge_name(i, x), tuple(edge_name(i - 1, b) for b in below))
            )
            pending.extend((i - 1, b) for b in below)
        return Tree(edge_name(root_level, root_elem), tuple(verts))

    return Forest(tuple(build(i, x) for i, x in roots))


def omega_mor(phi: SimplicialOperator, a: FinSimplex) -> OperadMap:
    """The operad map from the forest of the reindexed chain to the forest of
    ``a``: edges keep their element and move to the reindexed level, vertices
    land on the level-uniform cuts."""
    src = omega_obj(restrict(a, phi))
    tgt = omega_obj(a)

    def rename(e: str) -> str:
        lvl, elem = e[1:].split(":", 1)
        return edge_name(phi(int(lvl)), elem)

    edge_map = {e: rename(e) for e in src.edges}
    vertex_map = {
        v.out_edge: Operation(
            rename(v.out_edge), tuple(rename(d) for d in v.in_edges)
        )
        for t in src.components
        for v in t.vertices
    }
    return OperadMap.build(src, tgt, edge_map, vertex_map)


@dataclass(frozen=True)
class RetractWitness:
    """Exhibits a forest as a retract of the forest of a chain.

    ``section`` embeds the forest into ``omega`` (the forest generated by
    ``simplex``); ``retraction`` collapses the padding chains back, and their
    composite is the identity.  ``padded`` is ``omega`` with its plain edge
    names.
    """

    simplex: FinSimplex
    padded: Forest
    omega: Forest
    section: OperadMap
    retraction: OperadMap


def retract_witness(f: Tree | Forest) -> RetractWitness:
    forest = as_forest(f)
    used = set(forest.edge_set)

    def fresh(base: str) -> str:
        nm = base
        while nm in used:
            nm += "_"
        check_name(nm)
        used.add(nm)
        return nm

    padded_comps: list[Tree] = []
    heights: list[int] = []
    base_of: dict[str, str] = {}
    for t in forest.components:
        depth = t.depth
        h_leaf = max((depth[l] for l in t.leaves), default=0)
        h_stump = max((depth[s] + 1 for s in t.stump_edges), default=0)
        height = max(h_leaf, h_stump)
        verts = list(t.vertices)
        for leaf in t.leaves:
            below = leaf
            for k in range(1, height - depth[leaf] + 1):
                nm = fresh(f"{leaf}{k}")
                base_of[nm] = leaf
                verts.append(Vertex(below, (nm,)))
                below = nm
        padded_comps.append(Tree(t.root, tuple(verts)))
        heights.append(height)

    padded = Forest(tuple(padded_comps))
    n = max(heights, default=0)

    level_of: dict[str, int] = {}
    for t, height in zip(padded_comps, heights):
        for e in t.edges:
            level_of[e] = height - t.depth[e]

    levels = tuple(
        tuple(e for t in padded_comps for e in sorted(t.edges) if level_of[e] == i)
        for i in range(n + 1)
    )
    maps = []
    for i in range(n):
        row = []
        for e in levels[i]:
            t = padded.component_of[e]
            parent = t.parent.get(e)
            row.append((e, parent if parent is not None else STAR))
        maps.append(tuple(sorted(row)))
    simplex = FinSimplex(levels, tuple(maps))
    omega = omega_obj(simplex)

    def up(e: str) -> str:
        return edge_name(level_of[e], e)

    section = OperadMap.build(
        forest,
        omega,
        {e: up(e) for e in forest.edges},
        {
            v.out_edge: Operation(up(v.out_edge), tuple(up(d) for d in v.in_edges))
            for t in forest.components
            for v in t.vertices
        },
    )

    def down(e: str) -> str:
        return base_of.get(e, e)

    r_edge = {up(e): down(e) for e in padded.edges}
    r_vertex: dict[str, Operation] = {}
    for t in padded_comps:
        for v in t.vertices:
            if v.out_edge in base_of or v.out_edge in forest.component_of[t.root].leaves:
                img = down(v.out_edge)
                r_vertex[up(v.out_edge)] = Operation(img, (img,))
            else:
                r_vertex[up(v.out_edge)] = Operation(
                    v.out_edge, tuple(v.in_edges)
                )
    retraction = OperadMap.build(omega, forest, r_edge, r_vertex)
    return RetractWitness(simplex, padded, omega, section, retraction)
