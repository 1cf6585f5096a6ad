"""Maps between the free colored operads generated by forests.

The free operad on a forest has one color per edge.  An operation with output
``e`` is a *cut*: a finite set of edges obtained from ``{e}`` by repeatedly
replacing an edge by the inputs of the vertex above it (a stump contributes
nothing, so nullary operations appear exactly when stumps can close every
branch).  Because each edge has at most one vertex above it, an operation is
determined by its output edge together with its set of input edges.

A map between such operads is recorded by where the colors go (``edge_map``)
and where each generating vertex goes (``vertex_map``, an operation of the
target).  Composition pushes operations through the second map; no relations
ever have to be checked beyond cut validity, which is what :func:`validate`
does.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Mapping

from .treecore import Forest, Tree, TreeError, as_forest, serialize_forest

__all__ = [
    "Operation",
    "OperadMap",
    "operations",
    "is_cut",
    "hom",
    "identity_map",
    "compose",
    "validate",
    "is_valid",
    "classify_elementary",
]


@dataclass(frozen=True, order=True)
class Operation:
    """An operation of a free forest operad: output edge plus input edge set.

    Ordered lexicographically by (output, inputs) so operation-keyed results
    can be listed deterministically."""

    output: str
    inputs: tuple[str, ...]

    def __post_init__(self) -> None:
        ins = tuple(sorted(self.inputs))
        if len(set(ins)) != len(ins):
            raise TreeError(f"duplicate inputs in operation at {self.output!r}")
        object.__setattr__(self, "inputs", ins)

    @property
    def input_set(self) -> frozenset[str]:
        return frozenset(self.inputs)

    @property
    def is_identity(self) -> bool:
        return self.inputs == (self.output,)

    def __str__(self) -> str:
        return f"{self.output}<-({','.join(self.inputs)})"


def operations(scope: Tree | Forest, e: str) -> tuple[Operation, ...]:
    """All operations of the free operad on ``scope`` with output color ``e``.

    Computed as the closure of ``{e}`` under single-edge expansion; distinct
    expansion orders converge, so cuts are deduplicated as edge sets.
    """
    forest = as_forest(scope)
    t = forest.component_of.get(e)
    if t is None:
        raise TreeError(f"no edge {e!r} in {serialize_forest(forest)}")
    seen: set[frozenset[str]] = {frozenset((e,))}
    frontier: list[frozenset[str]] = [frozenset((e,))]
    while frontier:
        cut = frontier.pop()
        for d in cut:
            v = t.vertex_above.get(d)
            if v is None:
                continue
            new = (cut - {d}) | set(v.in_edges)
            if new not in seen:
                seen.add(new)
                frontier.append(new)
    return tuple(
        Operation(e, tuple(sorted(c)))
        for c in sorted(seen, key=lambda c: (len(c), tuple(sorted(c))))
    )


def is_cut(t: Tree, e: str, members: Iterable[str]) -> bool:
    """Decide whether ``members`` is a valid input set for output ``e``."""
    mem = frozenset(members)
    if not mem <= t.subtree_edges(e):
        return False

    def go(d: str, m: frozenset[str]) -> bool:
        if m == frozenset((d,)):
            return True
        if d in m:
            return False
        v = t.vertex_above.get(d)
        if v is None:
            return False
        return all(go(c, m & t.subtree_edges(c)) for c in v.in_edges)

    return go(e, mem)


@dataclass(frozen=True)
class OperadMap:
    """A map of free forest operads, stored as sorted association tuples."""

    source: Forest
    target: Forest
    edge_map: tuple[tuple[str, str], ...]
    vertex_map: tuple[tuple[str, Operation], ...]

    @staticmethod
    def build(
        source: Tree | Forest,
        target: Tree | Forest,
        edge_map: Mapping[str, str],
        vertex_map: Mapping[str, Operation],
    ) -> "OperadMap":
        return OperadMap(
            as_forest(source),
            as_forest(target),
            tuple(sorted(edge_map.items())),
            tuple(sorted(vertex_map.items())),
        )

    @cached_property
    def edge(self) -> dict[str, str]:
        return dict(self.edge_map)

    @cached_property
    def vertex(self) -> dict[str, Operation]:
        return dict(self.vertex_map)


def identity_map(scope: Tree | Forest) -> OperadMap:
    f = as_forest(scope)
    return OperadMap.build(
        f,
        f,
        {e: e for e in f.edges},
        {
            v.out_edge: Operation(v.out_edge, v.in_edges)
            for t in f.components
            for v in t.vertices
        },
    )


def _embeddings(
    s_tree: Tree,
    target: Forest,
    ops_at: dict[str, tuple[Operation, ...]],
    s_edge: str,
    t_edge: str,
    memo: dict[tuple[str, str], list[tuple[dict[str, str], dict[str, Operation]]]],
) -> list[tuple[dict[str, str], dict[str, Operation]]]:
    key = (s_edge, t_edge)
    if key in memo:
        return memo[key]
    v = s_tree.vertex_above.get(s_edge)
    if v is None:
        memo[key] = [({s_edge: t_edge}, {})]
        return memo[key]
    if t_edge not in ops_at:
        ops_at[t_edge] = operations(target, t_edge)
    out: list[tuple[dict[str, str], dict[str, Operation]]] = []
    k = len(v.in_edges)
    for op in ops_at[t_edge]:
        if len(op.inputs) != k:
            continue
        for image in permutations(op.inputs):
            branches = [
                _embeddings(s_tree, target, ops_at, d, image[i], memo)
                for i, d in enumerate(v.in_edges)
            ]
            if any(not b for b in branches):
                continue
            for combo in product(*branches):
                e_map: dict[str, str] = {s_edge: t_edge}
                v_map: dict[str, Operation] = {s_edge: op}
                for fe, fv in combo:
                    e_map.update(fe)
                    v_map.update(fv)
                out.append((e_map, v_map))
    memo[key] = out
    return out


def hom(source: Tree | Forest, target: Tree | Forest) -> tuple[OperadMap, ...]:
    """Enumerate every operad map between the generated free operads.

    Down each source component the root may land on any target edge; a vertex
    of arity ``k`` then lands on any arity-``k`` operation above its output's
    image, in any of the ``k!`` input matchings.  The empty source forest has
    exactly one (empty) map anywhere.
    """
    src = as_forest(source)
    tgt = as_forest(target)
    ops_at: dict[str, tuple[Operation, ...]] = {}
    per_component: list[list[tuple[dict[str, str], dict[str, Operation]]]] = []
    for t in src.components:
        memo: dict[tuple[str, str], list] = {}
        frags: list[tuple[dict[str, str], dict[str, Operation]]] = []
        for root_image in tgt.edges:
            frags.extend(_embeddings(t, tgt, ops_at, t.root, root_image, memo))
        per_component.append(frags)
    maps = []
    for combo in product(*per_component):
        e_map: dict[str, str] = {}
        v_map: dict[str, Operation] = {}
        for fe, fv in combo:
            e_map.update(fe)
            v_map.update(fv)
        maps.append(OperadMap.build(src, tgt, e_map, v_map))
    return tuple(maps)


def _push(g: OperadMap, op: Operation) -> Operation:
    """Image of a source operation under ``g``, by splitting the cut over
    the branches of the tree between output and inputs."""
    t = g.source.component_of[op.output]
    ge = g.edge

    def img(d: str, mem: frozenset[str]) -> frozenset[str]:
        if mem == frozenset((d,)):
            return frozenset((ge[d],))
        v = t.vertex_above.get(d)
        if v is None:
            raise TreeError(f"invalid cut {op} pushed through map")
        out: frozenset[str] = frozenset()
        for c in v.in_edges:
            out |= img(c, mem & t.subtree_edges(c))
        return out

    return Operation(ge[op.output], tuple(sorted(img(op.output, op.input_set))))


def compose(g: OperadMap, f: OperadMap) -> OperadMap:
    """The composite ``g`` after ``f`` (``f`` lands where ``g`` starts)."""
    if f.target.canonical_key() != g.source.canonical_key():
        raise TreeError("compose: middle forests disagree")
    edge_map = {d: g.edge[img] for d, img in f.edge.items()}
    vertex_map = {w: _push(g, op) for w, op in f.vertex.items()}
    return OperadMap.build(f.source, g.target, edge_map, vertex_map)


def validate(f: OperadMap) -> None:
    """Raise unless ``f`` is a well-formed operad map."""
    src, tgt = f.source, f.target
    if set(f.edge) != set(src.edges):
        raise TreeError("edge_map keys do not match source edges")
    for e, img in f.edge.items():
        if img not in tgt.edge_set:
            raise TreeError(f"edge image {img!r} not in target")
    expected_vertices = {v.out_edge for t in src.components for v in t.vertices}
    if set(f.vertex) != expected_vertices:
        raise TreeError("vertex_map keys do not match source vertices")
    for t in src.components:
        for v in t.vertices:
            op = f.vertex[v.out_edge]
            if op.output != f.edge[v.out_edge]:
                raise TreeError(f"vertex {v.out_edge!r}: output color mismatch")
            images = [f.edge[d] for d in v.in_edges]
            if len(set(images)) != len(images):
                raise TreeError(f"vertex {v.out_edge!r}: inputs collapse")
            if frozenset(images) != op.input_set:
                raise TreeError(f"vertex {v.out_edge!r}: input colors mismatch")
            comp = tgt.component_of.get(op.output)
            if comp is None or not is_cut(comp, op.output, op.input_set):
                raise TreeError(f"vertex {v.out_edge!r}: image is not a cut")


def is_valid(f: OperadMap) -> bool:
    try:
        validate(f)
    except TreeError:
        return False
    return True


def _maps_to_generator(f: OperadMap, out_edge: str) -> bool:
    op = f.vertex[out_edge]
    tgt = f.target.component_of[op.output]
    w = tgt.vertex_above.get(op.output)
    return w is not None and frozenset(w.in_edges) == op.input_set


def classify_elementary(f: OperadMap) -> str:
    """Tag a map as one of the elementary shapes, or ``other``.

    Tags: ``iso``, ``edge_of_corolla``, ``degeneracy``, ``inner_face``,
    ``outer_face``.  The source and target must be single trees for any tag
    except ``iso`` to apply.
    """
    src, tgt = f.source, f.target
    src_edges = [e for t in src.components for e in t.edges]
    values = [f.edge[e] for e in src_edges]
    injective = len(set(values)) == len(values)
    surjective = set(values) == set(tgt.edge_set)
    n_src_verts = sum(len(t.vertices) for t in src.components)
    n_tgt_verts = sum(len(t.vertices) for t in tgt.components)
    all_generators = all(_maps_to_generator(f, w) for w in f.vertex)

    if injective and surjective and all_generators and n_src_verts == n_tgt_verts:
        return "iso"
    if len(src.components) != 1 or len(tgt.components) != 1:
        return "other"
    s_tree, t_tree = src.components[0], tgt.components[0]

    if not s_tree.vertices and len(t_tree.vertices) == 1:
        return "edge_of_corolla"

    identity_images = [w for w, op in f.vertex.items() if op.is_identity]
    if (
        len(src_edges) == len(tgt.edge_set) + 1
        and surjective
        and len(identity_images) == 1
        and len(s_tree.vertex_above[identity_images[0]].in_edges) == 1
        and all(
            _maps_to_generator(f, w) for w in f.vertex if w != identity_images[0]
        )
    ):
        return "degeneracy"

    missing = set(tgt.edge_set) - set(values)
    if injective and len(missing) == 1 and n_src_verts == n_tgt_verts - 1:
        (d,) = missing
        non_gen = [w for w in f.vertex if not _maps_to_generator(f, w)]
        if t_tree.is_inner(d) and len(non_gen) == 1:
            return "inner_face"

    if injective and all_generators and n_src_verts == n_tgt_verts - 1:
        used = {op.output for op in f.vertex.values()}
        unused = [w for w in t_tree.vertex_above if w not in used]
        if len(unused) == 1:
            return "outer_face"

    return "other"
