"""Graphviz DOT emission for trees and forests.

Conventions: the root hangs at the bottom, interior vertices are dots,
stumps are filled squares, leaves end in open circles, and every edge is
labeled by its name.  Forests whose edge names all carry level prefixes
(``ℓi:a``) additionally get one rank per level joined by a dashed level
axis, so the drawing reads like a level diagram.
"""

from __future__ import annotations

import re

from .treecore import Forest, Tree, as_forest

__all__ = ["to_dot", "gallery_dot"]

_LEVEL_RE = re.compile(r"^ℓ(\d+):")


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _level_of(edge: str) -> int | None:
    m = _LEVEL_RE.match(edge)
    return int(m.group(1)) if m else None


def _emit_tree(t: Tree, tag: str, lines: list[str], ranks: dict[int, list[str]]) -> None:
    def upper_id(e: str) -> str:
        return f"v:{tag}:{e}" if e in t.vertex_above else f"leaf:{tag}:{e}"

    for v in t.vertices:
        nid = f"v:{tag}:{v.out_edge}"
        if v.is_stump:
            lines.append(
                f"  {_q(nid)} [shape=square, style=filled, fillcolor=black, "
                'label="", width=0.12, fixedsize=true];'
            )
        else:
            lines.append(f"  {_q(nid)} [shape=point, width=0.08];")
    for e in t.leaves:
        lines.append(
            f"  {_q(f'leaf:{tag}:{e}')} [shape=circle, label=\"\", width=0.12, "
            "fixedsize=true];"
        )
    anchor = f"root:{tag}"
    lines.append(f"  {_q(anchor)} [shape=none, label=\"\", width=0.01];")
    for e in t.edges:
        parent_v = t.parent.get(e)
        lower = f"v:{tag}:{parent_v}" if parent_v is not None else anchor
        lines.append(
            f"  {_q(lower)} -> {_q(upper_id(e))} [label={_q(e)}, arrowhead=none];"
        )
        lvl = _level_of(e)
        if lvl is not None:
            ranks.setdefault(lvl, []).append(upper_id(e))


def to_dot(scope: Tree | Forest, name: str = "forest") -> str:
    forest = as_forest(scope)
    lines = [
        f"digraph {_q(name)} {{",
        "  rankdir=BT;",
        "  node [fontsize=10];",
        "  edge [fontsize=10];",
    ]
    ranks: dict[int, list[str]] = {}
    leveled = bool(forest.edges) and all(
        _level_of(e) is not None for e in forest.edges
    )
    for i, t in enumerate(forest.components):
        _emit_tree(t, str(i), lines, ranks)
    if leveled and ranks:
        lo, hi = min(ranks), max(ranks)
        for lvl in range(lo, hi + 1):
            axis = f"lvl:{lvl}"
            lines.append(f"  {_q(axis)} [shape=plaintext, label={_q(f'ℓ{lvl}')}];")
            members = " ".join(_q(n) + ";" for n in sorted(set(ranks.get(lvl, []))))
            lines.append(f"  {{ rank=same; {_q(axis)}; {members} }}")
            if lvl > lo:
                lines.append(
                    f"  {_q(f'lvl:{lvl - 1}')} -> {_q(axis)} "
                    "[style=dashed, arrowhead=none];"
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


def gallery_dot(trees: list[Tree] | tuple[Tree, ...], name: str = "gallery") -> str:
    """Several trees side by side as clusters of one digraph."""
    lines = [
        f"digraph {_q(name)} {{",
        "  rankdir=BT;",
        "  node [fontsize=10];",
        "  edge [fontsize=10];",
    ]
    for i, t in enumerate(trees):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="{i}";')
        sub: list[str] = []
        _emit_tree(t, str(i), sub, {})
        lines.extend("  " + ln.strip() for ln in sub)
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
