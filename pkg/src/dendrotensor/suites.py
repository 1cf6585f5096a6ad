"""Seeded verification suites behind the ``check`` command.

Each suite draws instances from its own deterministically derived generator
(``Random(f"{seed}:{suite}")``), runs one family of exact checks, and emits
records ``{check, instance, status, witness?}``.  Reports contain nothing
time-dependent, so identical seeds and configs give byte-identical reports.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from itertools import product
from random import Random
from typing import Any, Callable

from ._rand import random_fin_simplex, random_forest, random_operator, random_tree
from .levelforest import (
    FinSimplex,
    SimplicialOperator,
    omega_mor,
    omega_obj,
    restrict,
    retract_witness,
)
from .lurie import (
    EllPresentation,
    FreeForestOperad,
    check_fibrous,
    chain_to_map,
    defect_fixtures,
    enumerate_chains,
    free_algebra,
    map_to_chain,
    maps_into,
    precompose,
    restrict_chain,
    segal_components_check,
    segal_cut_check,
)
from .omegacat import compose, identity_map, validate
from .shuffle import (
    assoc_inclusion,
    count_shuffles,
    encode,
    inclusion_map,
    interior_decomposition,
    intersect,
    shuffles,
    stump_transport,
)
from .treecore import (
    Forest,
    Tree,
    TreeError,
    Vertex,
    cut_at,
    max_edges,
    serialize_forest,
    serialize_tree,
)

__all__ = ["SuiteConfig", "SUITE_NAMES", "run_check", "report_json"]


@dataclass(frozen=True)
class SuiteConfig:
    """Knobs shared by every suite; ``None`` falls back to the suite's own
    default (the sizes the acceptance runs use)."""

    seed: int = 42
    instances: int | None = None
    max_edges: int | None = None
    max_levels: int | None = None
    max_width: int | None = None
    truncation: int = 4
    stump_probability: float = 0.2


Record = dict[str, Any]


def _rec(check: str, instance: Any, ok: bool, witness: Any = None) -> Record:
    out: Record = {"check": check, "instance": instance, "status": "pass" if ok else "fail"}
    if witness is not None and not ok:
        out["witness"] = witness
    return out


def _rng(cfg: SuiteConfig, suite: str) -> Random:
    return Random(f"{cfg.seed}:{suite}")


def _operator_json(phi: SimplicialOperator) -> dict[str, Any]:
    return {"dom": phi.dom, "cod": phi.cod, "values": list(phi.values)}


# ---------------------------------------------------------------------------
# level-forest suites
# ---------------------------------------------------------------------------


def suite_functoriality(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 200
    width = cfg.max_width or 5
    length = cfg.max_levels or 4
    rng = _rng(cfg, "functoriality")
    records: list[Record] = []
    for i in range(n):
        a = random_fin_simplex(rng, width, length)
        fa = omega_obj(a)
        ident = omega_mor(SimplicialOperator.identity(a.n), a)
        records.append(
            _rec("identity", i, ident == identity_map(fa), {"simplex": a.to_json()})
        )
        phi = random_operator(rng, rng.randint(0, length), a.n)
        psi = random_operator(rng, rng.randint(0, length), phi.dom)
        lhs = omega_mor(phi.after(psi), a)
        rhs = compose(omega_mor(phi, a), omega_mor(psi, restrict(a, phi)))
        records.append(
            _rec(
                "composition",
                i,
                lhs == rhs,
                {
                    "simplex": a.to_json(),
                    "phi": _operator_json(phi),
                    "psi": _operator_json(psi),
                },
            )
        )
    return records, {"instances": n, "max_width": width, "max_levels": length}


def _level_rename_iso(padded: Forest, omega: Forest) -> bool:
    """Whether stripping the level prefixes of ``omega`` recovers ``padded``
    exactly — the explicit isomorphism the padding promises."""
    mapping: dict[str, str] = {}
    for e in omega.edges:
        if ":" not in e:
            return False
        mapping[e.split(":", 1)[1]] = e
    if set(mapping) != padded.edge_set:
        return False
    renamed = Forest(
        tuple(
            Tree(
                mapping[t.root],
                tuple(
                    Vertex(mapping[v.out_edge], tuple(mapping[d] for d in v.in_edges))
                    for v in t.vertices
                ),
            )
            for t in padded.components
        )
    )
    return renamed.canonical_key() == omega.canonical_key()


def suite_retract(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 100
    edges = cfg.max_edges or 10
    rng = _rng(cfg, "retract")
    records: list[Record] = []
    for i in range(n):
        if i == 0:
            f = Forest(())
        else:
            sp = 0.5 if i % 3 == 0 else cfg.stump_probability
            f = random_forest(rng, edges, sp)
        witness = {"forest": serialize_forest(f)}
        try:
            w = retract_witness(f)
            validate(w.section)
            validate(w.retraction)
            ok = (
                compose(w.retraction, w.section) == identity_map(f)
                and _level_rename_iso(w.padded, w.omega)
                and omega_obj(w.simplex).canonical_key() == w.omega.canonical_key()
            )
        except TreeError as exc:
            ok, witness = False, {**witness, "error": str(exc)}
        records.append(_rec("retract", i, ok, witness))
    return records, {"instances": n, "max_edges": edges}


# ---------------------------------------------------------------------------
# Segal suites
# ---------------------------------------------------------------------------


def _tree_with_inner(rng: Random, max_edges_: int, sp: float, prefix: str) -> Tree:
    while True:
        t = random_tree(rng, max_edges_, sp, prefix=prefix)
        if t.inner_edges:
            return t


def suite_segal(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 100
    edges = cfg.max_edges or 7
    rng = _rng(cfg, "segal")
    records: list[Record] = []
    for i in range(n):
        while True:
            g = random_forest(rng, 8, cfg.stump_probability, min_components=1)
            p = FreeForestOperad(g)
            t = _tree_with_inner(rng, edges, cfg.stump_probability, "s")
            b = rng.choice(sorted(t.inner_edges))
            lower, upper = cut_at(t, b)
            try:
                n_low = len(maps_into(lower, p, cap=20000))
                n_up = len(maps_into(upper, p, cap=20000))
            except TreeError:
                continue
            if n_low * n_up <= 50000:
                break
        witness = {"tree": serialize_tree(t), "edge": b, "operad": serialize_forest(g)}
        try:
            ok = segal_cut_check(p, t, b)
        except TreeError as exc:
            ok, witness = False, {**witness, "error": str(exc)}
        records.append(_rec("segal-cut", i, ok, witness))
    return records, {"instances": n, "max_edges": edges}


def suite_d3(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 50
    rng = _rng(cfg, "d3")
    records: list[Record] = []
    for i in range(n):
        while True:
            f = Forest(()) if i == 0 else random_forest(rng, 8, cfg.stump_probability)
            g = random_forest(rng, 6, cfg.stump_probability, min_components=1)
            p = FreeForestOperad(g)
            try:
                sizes = [len(maps_into(t, p, cap=20000)) for t in f.components]
            except TreeError:
                continue
            if math.prod(sizes) <= 20000:
                break
        witness = {"forest": serialize_forest(f), "operad": serialize_forest(g)}
        try:
            ok = segal_components_check(p, f)
        except TreeError as exc:
            ok, witness = False, {**witness, "error": str(exc)}
        records.append(_rec("components", i, ok, witness))
    return records, {"instances": n}


# ---------------------------------------------------------------------------
# nerve suite
# ---------------------------------------------------------------------------


def suite_nerve(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 100
    edges = cfg.max_edges or 8
    width = cfg.max_width or 4
    length = min(cfg.max_levels or 3, 3)
    rng = _rng(cfg, "nerve")
    records: list[Record] = []
    for i in range(n):
        while True:
            g = random_forest(rng, edges, cfg.stump_probability, min_components=1)
            p = FreeForestOperad(g)
            a = random_fin_simplex(rng, width, length)
            if len(p.colors()) ** len(a.levels[0]) > 2000:
                continue
            try:
                chains = enumerate_chains(p, a, cap=30000)
                maps = maps_into(omega_obj(a), p, cap=60000)
            except TreeError:
                continue
            break
        witness: dict[str, Any] = {
            "operad": serialize_forest(g),
            "simplex": a.to_json(),
        }
        try:
            image = [chain_to_map(ch) for ch in chains]
            ok = (
                len(set(image)) == len(chains) == len(maps)
                and set(image) == set(maps)
                and all(
                    map_to_chain(p, a, chain_to_map(ch)) == ch
                    for ch in chains[: min(len(chains), 50)]
                )
            )
            phi = random_operator(rng, rng.randint(0, 3), a.n)
            h = omega_mor(phi, a)
            nat_ok = all(
                chain_to_map(restrict_chain(p, ch, phi)) == precompose(p, chain_to_map(ch), h)
                for ch in chains[: min(len(chains), 20)]
            )
            witness["phi"] = _operator_json(phi)
        except TreeError as exc:
            ok, nat_ok = False, False
            witness["error"] = str(exc)
        records.append(_rec("nerve-bijection", i, ok, witness))
        records.append(_rec("nerve-naturality", i, nat_ok, witness))
    return records, {
        "instances": n,
        "max_edges": edges,
        "max_width": width,
        "max_levels": length,
    }


# ---------------------------------------------------------------------------
# fibrous suite
# ---------------------------------------------------------------------------


def suite_fibrous(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 25
    rng = _rng(cfg, "fibrous")
    records: list[Record] = []
    for i in range(n):
        f = random_forest(rng, cfg.max_edges or 6, cfg.stump_probability, min_components=1)
        rep = check_fibrous(
            EllPresentation(FreeForestOperad(f)),
            truncation=cfg.truncation,
            rng=Random(f"{cfg.seed}:fibrous:{i}"),
        )
        records.append(
            _rec(
                "fibrous",
                i,
                rep.passed,
                {"forest": serialize_forest(f), "failures": rep.failures[:5]},
            )
        )
    for name, fixture in defect_fixtures():
        rep = check_fibrous(
            fixture,
            truncation=2,
            rng=Random(f"{cfg.seed}:fixture:{name}"),
            colorings_per_shape=999,
            inerts_per_shape=999,
            betas_per_lift=999,
            arrows_budget=500,
            pairs_per_fiber=999,
        )
        records.append(
            _rec(
                "defect-detected",
                name,
                not rep.passed,
                {"fixture": name, "note": "defect escaped every check"},
            )
        )
    return records, {
        "instances": n,
        "truncation": cfg.truncation,
        "summary": f"verified up to ⟨{cfg.truncation}⟩",
    }


# ---------------------------------------------------------------------------
# shuffle suites
# ---------------------------------------------------------------------------


def _linear(prefix: str, vertices: int) -> Tree:
    names = [f"{prefix}{k}" for k in range(vertices + 1)]
    return Tree(
        names[0],
        tuple(Vertex(names[k], (names[k + 1],)) for k in range(vertices)),
    )


def _random_factors(
    rng: Random, n_factors: int, max_edges_: int, sp: float, bound: int
) -> list[Tree]:
    prefixes = "abcd"
    while True:
        factors = [
            random_tree(rng, max_edges_, sp, prefix=prefixes[j])
            for j in range(n_factors)
        ]
        if count_shuffles(factors) <= bound:
            return factors


def suite_shuffles(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 100
    edges = cfg.max_edges or 5
    rng = _rng(cfg, "shuffles")
    records: list[Record] = []
    for m in range(1, 8):
        for k in range(1, 9 - m):
            count = len(shuffles([_linear("u", m), _linear("v", k)]))
            records.append(
                _rec(
                    "chain-count",
                    f"{m}+{k}",
                    count == math.comb(m + k, m),
                    {"got": count, "expected": math.comb(m + k, m)},
                )
            )
    for i in range(n):
        factors = _random_factors(rng, rng.randint(1, 3), edges, cfg.stump_probability, 3000)
        witness = {"factors": [serialize_tree(t) for t in factors]}
        try:
            sh = shuffles(factors)
            texts = [serialize_tree(s) for s in sh]
            distinct_ok = len(sh) >= 1 and len(set(texts)) == len(sh)
            if len(factors) == 1:
                root_ok = sh == (factors[0],)
                max_ok = True
            else:
                root = encode(tuple(t.root for t in factors))
                root_ok = all(s.root == root for s in sh)
                expected_max = sorted(
                    encode(c) for c in product(*(max_edges(t) for t in factors))
                )
                max_ok = all(sorted(max_edges(s)) == expected_max for s in sh)
            records.append(_rec("root-law", i, root_ok, witness))
            records.append(_rec("max-law", i, max_ok, witness))
            records.append(_rec("distinct", i, distinct_ok, witness))
            inter_ok = True
            if len(sh) >= 2:
                if len(sh) * (len(sh) - 1) // 2 <= 5:
                    pairs = [
                        (a, b) for a in range(len(sh)) for b in range(a + 1, len(sh))
                    ]
                else:
                    seen_pairs: set[tuple[int, int]] = set()
                    while len(seen_pairs) < 5:
                        a, b = rng.sample(range(len(sh)), 2)
                        seen_pairs.add((min(a, b), max(a, b)))
                    pairs = sorted(seen_pairs)
                for a, b in pairs:
                    inter = intersect([sh[a], sh[b]])
                    for s in (sh[a], sh[b]):
                        inclusion_map(inter, s)
                        removed = s.edge_set - inter.edge_set
                        if not removed <= set(s.inner_edges):
                            inter_ok = False
            records.append(_rec("intersection", i, inter_ok, witness))
            leafy = [j for j, t in enumerate(factors) if t.leaves]
            if leafy:
                j = rng.choice(leafy)
                leaf = rng.choice(sorted(factors[j].leaves))
                stump_transport(factors, j, leaf)
            records.append(_rec("transport", i, True, witness))
        except TreeError as exc:
            records.append(_rec("calculus", i, False, {**witness, "error": str(exc)}))
    return records, {"instances": n, "max_edges": edges}


def suite_assoc(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 25
    rng = _rng(cfg, "assoc")
    records: list[Record] = []
    three = ([[0, 1], 2], [0, [1, 2]])
    four = ([[0, 1], [2, 3]], [[[0, 1], 2], 3])
    for i in range(n):
        nf = 4 if i % 5 == 4 else 3
        factors = _random_factors(rng, nf, 3, cfg.stump_probability, 2000)
        br = rng.choice(four if nf == 4 else three)
        witness = {
            "factors": [serialize_tree(t) for t in factors],
            "bracketing": br,
        }
        try:
            res = assoc_inclusion(factors, br)
            ok = (
                not res.unreached
                and len(set(serialize_tree(t) for t in res.nested)) == len(res.nested)
                and len(res.nested) <= len(res.flat)
            )
        except TreeError as exc:
            ok, witness = False, {**witness, "error": str(exc)}
        records.append(_rec("assoc-inclusion", i, ok, witness))
    return records, {"instances": n}


def suite_interior(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 25
    rng = _rng(cfg, "interior")
    sp = max(cfg.stump_probability, 0.35)
    records: list[Record] = []
    for i in range(n):
        factors = _random_factors(rng, rng.randint(1, 3), 4, sp, 2000)
        witness = {"factors": [serialize_tree(t) for t in factors]}
        try:
            dec = interior_decomposition(factors)
            closed = sorted(serialize_tree(p[1]) for p in dec.pairs)
            direct = sorted(serialize_tree(t) for t in shuffles(factors))
            ok = closed == direct and len(set(closed)) == len(closed)
        except TreeError as exc:
            ok, witness = False, {**witness, "error": str(exc)}
        records.append(_rec("interior", i, ok, witness))
    return records, {"instances": n}


# ---------------------------------------------------------------------------
# free algebra suite
# ---------------------------------------------------------------------------


def _freealg_oracle(p, generators, inputs, output):
    """Independent brute force: enumerate ordered assignments and quotient by
    the orbit key (label, multiset of index/argument pairs)."""
    found = set()
    indices = sorted(generators)
    for kappa, labels in p.ops_by_output(output):
        k = len(kappa)
        for seq in product(indices, repeat=k):
            if tuple(sorted(generators[ix] for ix in seq)) != kappa:
                continue
            pools = [tuple(inputs.get(ix, ())) for ix in seq]
            for lab in labels:
                for args in product(*pools):
                    found.add((lab, tuple(sorted(zip(seq, args)))))
    return found


def suite_freealg(cfg: SuiteConfig) -> tuple[list[Record], dict[str, Any]]:
    n = cfg.instances or 100
    rng = _rng(cfg, "freealg")
    records: list[Record] = []
    for i in range(n):
        g = random_forest(rng, 6, cfg.stump_probability, min_components=1)
        p = FreeForestOperad(g)
        colors = p.colors()
        gens = {
            f"g{j}": rng.choice(colors) for j in range(rng.randint(1, 4))
        }
        inputs = {
            ix: [f"{ix}.{t}" for t in range(rng.randint(0, 3))] for ix in gens
        }
        output = rng.choice(colors)
        witness = {
            "operad": serialize_forest(g),
            "generators": gens,
            "inputs": inputs,
            "output": output,
        }
        try:
            terms = free_algebra(p, gens, inputs, output)
            keys = {(t.label, tuple(sorted(zip(t.indices, t.args)))) for t in terms}
            oracle = _freealg_oracle(p, gens, inputs, output)
            ok = len(keys) == len(terms) and keys == oracle
        except TreeError as exc:
            ok, witness = False, {**witness, "error": str(exc)}
        records.append(_rec("free-algebra", i, ok, witness))
    return records, {"instances": n}


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------


_SUITES: dict[str, Callable[[SuiteConfig], tuple[list[Record], dict[str, Any]]]] = {
    "functoriality": suite_functoriality,
    "retract": suite_retract,
    "segal": suite_segal,
    "d3": suite_d3,
    "nerve": suite_nerve,
    "fibrous": suite_fibrous,
    "shuffles": suite_shuffles,
    "assoc": suite_assoc,
    "interior": suite_interior,
    "freealg": suite_freealg,
}

SUITE_NAMES = tuple(_SUITES)


def run_check(name: str, cfg: SuiteConfig) -> dict[str, Any]:
    """Run one suite (or ``all``) and assemble the deterministic report."""
    if name != "all" and name not in _SUITES:
        raise TreeError(f"unknown suite {name!r}; choose from {('all',) + SUITE_NAMES}")
    names = SUITE_NAMES if name == "all" else (name,)
    suites = []
    total_failures = 0
    for s in names:
        records, params = _SUITES[s](cfg)
        failures = sum(1 for r in records if r["status"] != "pass")
        total_failures += failures
        suites.append(
            {
                "suite": s,
                "params": params,
                "records": records,
                "failures": failures,
            }
        )
    return {
        "command": name,
        "config": asdict(cfg),
        "suites": suites,
        "failures": total_failures,
    }


def report_json(report: dict[str, Any]) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
