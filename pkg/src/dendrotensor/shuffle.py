"""Shuffles of tuples of trees: the tensor calculus at the edge level.

A shuffle of trees ``S_1, ..., S_k`` is a tree whose edges are named by
tuples ``(e_1|...|e_k)`` of factor edges, grown from the root tuple by two
moves: advance one coordinate that still has a non-stump vertex above it
(placing that vertex's copies), or — when every coordinate is maximal in its
factor and at least one is a stump edge — close the tuple with a stump.  A
tuple all of whose coordinates are leaves is a leaf.  This is the unique
closing discipline for which the maximal edges of every shuffle are exactly
the tuples of factor-maximal edges.

The module also exposes the standard structure of the set of shuffles:
pairwise (and wider) intersections by contracting the non-shared inner
edges, transport of shuffles along closing a factor leaf with a stump,
recovery of all shuffles from the shuffles of the stump-free interiors, the
inclusion of nested (bracketed) shuffles into flat ones, and maps from a
probe forest into all shuffles at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .omegacat import OperadMap, Operation, hom, validate
from .treecore import (
    Forest,
    Tree,
    TreeError,
    Vertex,
    add_stumps,
    as_forest,
    contract_inner,
    interior,
    max_edges,
    serialize_tree,
)

__all__ = [
    "encode",
    "decode",
    "flatten_name",
    "shuffles",
    "count_shuffles",
    "intersect",
    "inclusion_map",
    "stump_transport",
    "TransportResult",
    "interior_decomposition",
    "InteriorDecomposition",
    "assoc_inclusion",
    "AssocResult",
    "tensor_hom",
    "TensorHom",
]


def encode(coords: Sequence[str]) -> str:
    return "(" + "|".join(coords) + ")"


def _check_tuplable(name: str) -> None:
    """Names entering tuples must decode back unambiguously: balanced
    parentheses and no separator outside them."""
    depth = 0
    for ch in name:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise TreeError(f"unbalanced parentheses in edge name {name!r}")
        elif ch == "|" and depth == 0:
            raise TreeError(f"bare separator in edge name {name!r}")
    if depth != 0:
        raise TreeError(f"unbalanced parentheses in edge name {name!r}")


def decode(name: str) -> tuple[str, ...]:
    """Split a tuple edge name into its (top-level) coordinates."""
    if not (name.startswith("(") and name.endswith(")")):
        raise TreeError(f"{name!r} is not a tuple edge name")
    inner = name[1:-1]
    parts: list[str] = []
    depth = 0
    cur: list[str] = []
    for ch in inner:
        if ch == "|" and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    parts.append("".join(cur))
    return tuple(parts)


def flatten_name(name: str) -> tuple[str, ...]:
    """Fully flatten a (possibly nested) tuple edge name to factor edges."""
    if name.startswith("(") and name.endswith(")"):
        out: list[str] = []
        for part in decode(name):
            out.extend(flatten_name(part))
        return tuple(out)
    return (name,)


def shuffles(factors: Sequence[Tree]) -> tuple[Tree, ...]:
    """All shuffles of the given trees, in a deterministic order.

    A single factor is its own (only) shuffle and keeps its edge names.
    """
    if not factors:
        raise TreeError("need at least one factor")
    if len(factors) == 1:
        return (factors[0],)
    for t in factors:
        for e in t.edges:
            _check_tuplable(e)
    seen: set[str] = set()
    for t in factors:
        dup = seen & set(t.edges)
        if dup:
            raise TreeError(f"factors share edge names: {sorted(dup)}")
        seen |= t.edge_set

    memo: dict[tuple[str, ...], tuple[tuple[Vertex, ...], ...]] = {}

    def build(state: tuple[str, ...]) -> tuple[tuple[Vertex, ...], ...]:
        if state in memo:
            return memo[state]
        verts = [factors[i].vertex_above.get(e) for i, e in enumerate(state)]
        if all(v is None for v in verts):
            memo[state] = ((),)
            return memo[state]
        if all(v is None or v.is_stump for v in verts):
            memo[state] = ((Vertex(encode(state), ()),),)
            return memo[state]
        opts: list[tuple[Vertex, ...]] = []
        for i, v in enumerate(verts):
            if v is None or v.is_stump:
                continue
            children = [state[:i] + (d,) + state[i + 1 :] for d in v.in_edges]
            branches = [build(c) for c in children]
            head = Vertex(encode(state), tuple(encode(c) for c in children))
            for combo in product(*branches):
                acc: tuple[Vertex, ...] = (head,)
                for part in combo:
                    acc = acc + part
                opts.append(acc)
        memo[state] = tuple(opts)
        return memo[state]

    root = tuple(t.root for t in factors)
    return tuple(Tree(encode(root), vs) for vs in build(root))


def count_shuffles(factors: Sequence[Tree]) -> int:
    """How many shuffles the factors admit, by the same recursion as
    :func:`shuffles` but summing counts instead of materializing trees —
    cheap even when the answer is astronomically large."""
    if not factors:
        raise TreeError("need at least one factor")
    if len(factors) == 1:
        return 1
    memo: dict[tuple[str, ...], int] = {}

    def count(state: tuple[str, ...]) -> int:
        if state in memo:
            return memo[state]
        verts = [factors[i].vertex_above.get(e) for i, e in enumerate(state)]
        total = 1
        if not all(v is None or v.is_stump for v in verts):
            total = 0
            for i, v in enumerate(verts):
                if v is None or v.is_stump:
                    continue
                branches = 1
                for d in v.in_edges:
                    branches *= count(state[:i] + (d,) + state[i + 1 :])
                total += branches
        memo[state] = total
        return total

    return count(tuple(t.root for t in factors))


def intersect(shuffs: Sequence[Tree]) -> Tree:
    """The common face of several shuffles of one factor tuple, computed by
    contracting, in each tree, the inner edges the others lack.  All the
    contractions must agree; anything else means the inputs were not
    shuffles of a common tuple."""
    if not shuffs:
        raise TreeError("need at least one tree to intersect")
    common = set(shuffs[0].edge_set)
    for t in shuffs[1:]:
        common &= t.edge_set
    results = [contract_inner(t, t.edge_set - common) for t in shuffs]
    keys = {serialize_tree(r) for r in results}
    if len(keys) != 1:
        raise TreeError("inconsistent intersection: inputs do not share a face")
    return results[0]


def inclusion_map(sub: Tree, sup: Tree) -> OperadMap:
    """The operad map realizing a common face inside a shuffle: edges go to
    themselves, a vertex goes to the cut of ``sup`` over its output with the
    same inputs."""
    if not sub.edge_set <= sup.edge_set:
        raise TreeError("not a face: edges missing from the bigger tree")
    m = OperadMap.build(
        sub,
        sup,
        {e: e for e in sub.edges},
        {v.out_edge: Operation(v.out_edge, v.in_edges) for v in sub.vertices},
    )
    validate(m)
    return m


@dataclass(frozen=True)
class TransportResult:
    """Pairing of shuffles before/after closing one factor leaf with a stump."""

    factors_after: tuple[Tree, ...]
    pairs: tuple[tuple[Tree, Tree], ...]


def stump_transport(factors: Sequence[Tree], i: int, leaf: str) -> TransportResult:
    """Close leaf ``leaf`` of factor ``i`` with a stump and transport every
    shuffle across: in each shuffle, close the leaves whose ``i``-th
    coordinate is that leaf.  The transported trees are checked to be
    exactly the shuffles of the modified factors."""
    if not 0 <= i < len(factors):
        raise TreeError(f"no factor {i}")
    after_factors = tuple(
        add_stumps(t, [leaf]) if j == i else t for j, t in enumerate(factors)
    )
    before = shuffles(factors)
    pairs = []
    for a in before:
        if len(factors) == 1:
            targets: Iterable[str] = [leaf]
        else:
            targets = [e for e in a.leaves if decode(e)[i] == leaf]
        pairs.append((a, add_stumps(a, targets)))
    direct = sorted(serialize_tree(t) for t in shuffles(after_factors))
    moved = sorted(serialize_tree(p[1]) for p in pairs)
    if direct != moved:
        raise TreeError("stump transport failed to match the direct shuffles")
    return TransportResult(after_factors, tuple(pairs))


@dataclass(frozen=True)
class InteriorDecomposition:
    """Every shuffle of the factors, recovered from a shuffle of their
    stump-free interiors by closing the boundary tuples."""

    interiors: tuple[Tree, ...]
    boundary: tuple[str, ...]
    pairs: tuple[tuple[Tree, Tree], ...]


def interior_decomposition(factors: Sequence[Tree]) -> InteriorDecomposition:
    ints = tuple(interior(t) for t in factors)
    if len(factors) == 1:
        boundary = tuple(sorted(set(max_edges(factors[0])) - set(factors[0].leaves)))
        pairs = ((ints[0], add_stumps(ints[0], boundary)),)
        return InteriorDecomposition(ints, boundary, pairs)
    max_tuples = {
        encode(c) for c in product(*(max_edges(t) for t in factors))
    }
    leaf_tuples = {encode(c) for c in product(*(t.leaves for t in factors))}
    boundary = tuple(sorted(max_tuples - leaf_tuples))
    bset = set(boundary)
    pairs = []
    for b in shuffles(ints):
        to_close = [e for e in b.leaves if e in bset]
        pairs.append((b, add_stumps(b, to_close)))
    direct = sorted(serialize_tree(t) for t in shuffles(factors))
    closed = sorted(serialize_tree(p[1]) for p in pairs)
    if direct != closed:
        raise TreeError("interior decomposition failed to recover the shuffles")
    return InteriorDecomposition(ints, boundary, tuple(pairs))


Bracketing = int | Sequence["Bracketing"]


def _flatten_bracketing(br: Bracketing) -> list[int]:
    if isinstance(br, int):
        return [br]
    out: list[int] = []
    for b in br:
        out.extend(_flatten_bracketing(b))
    return out


def _rename(t: Tree) -> Tree:
    def flat(e: str) -> str:
        parts = flatten_name(e)
        return encode(parts) if len(parts) > 1 else parts[0]

    return Tree(
        flat(t.root),
        tuple(
            Vertex(flat(v.out_edge), tuple(flat(d) for d in v.in_edges))
            for v in t.vertices
        ),
    )


@dataclass(frozen=True)
class AssocResult:
    """Nested shuffles (per a bracketing), flattened, sit inside the flat
    shuffles of the same factors; ``nested`` lists them, ``flat`` all of
    them, and every member of ``nested`` occurs in ``flat``."""

    nested: tuple[Tree, ...]
    flat: tuple[Tree, ...]
    unreached: tuple[str, ...]


def assoc_inclusion(factors: Sequence[Tree], bracketing: Bracketing) -> AssocResult:
    order = _flatten_bracketing(bracketing)
    if order != list(range(len(factors))):
        raise TreeError(
            f"bracketing must cover factors 0..{len(factors) - 1} in order, got {order}"
        )
    if isinstance(bracketing, int) or len(list(bracketing)) < 2:
        raise TreeError("bracketing must group at least two blocks")

    def evaluate(br: Bracketing) -> list[Tree]:
        if isinstance(br, int):
            return [factors[br]]
        blocks = [evaluate(b) for b in br]
        out: list[Tree] = []
        for combo in product(*blocks):
            out.extend(shuffles(list(combo)))
        return out

    nested: dict[str, Tree] = {}
    for t in evaluate(bracketing):
        r = _rename(t)
        nested[serialize_tree(r)] = r
    flat = shuffles(list(factors))
    flat_keys = {serialize_tree(t) for t in flat}
    unreached = tuple(sorted(k for k in nested if k not in flat_keys))
    return AssocResult(
        tuple(nested[k] for k in sorted(nested)), flat, unreached
    )


@dataclass(frozen=True)
class TensorHom:
    """A map from a probe forest into the shuffle tensor: edge images are
    tuple edges, vertex images are cuts; two maps into different shuffles
    with the same tuple data are the same map."""

    edge_map: tuple[tuple[str, str], ...]
    vertex_map: tuple[tuple[str, Operation], ...]
    witness: Tree


def tensor_hom(probe: Tree | Forest, factors: Sequence[Tree]) -> tuple[TensorHom, ...]:
    """All maps from the free operad of ``probe`` into the tensor of the
    factors: maps into each shuffle, deduplicated by their tuple data."""
    src = as_forest(probe)
    found: dict[tuple, TensorHom] = {}
    for a in shuffles(factors):
        for m in hom(src, a):
            key = (m.edge_map, m.vertex_map)
            if key not in found:
                found[key] = TensorHom(m.edge_map, m.vertex_map, a)
    return tuple(found[k] for k in sorted(found))
