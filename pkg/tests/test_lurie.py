from itertools import product
from random import Random

import pytest

from dendrotensor import (
    STAR,
    BVTensorOperad,
    EllObject,
    FinPtdMor,
    FinPtdObj,
    FinSimplex,
    FreeForestOperad,
    Operation,
    SimplicialOperator,
    TableOperad,
    TreeError,
    chain_to_map,
    check_fibrous,
    classify,
    defect_fixtures,
    ell_compose,
    ell_hom,
    ell_identity,
    enumerate_chains,
    factorize,
    free_algebra,
    map_to_chain,
    maps_into,
    omega_mor,
    omega_obj,
    operations,
    parse_forest,
    parse_tree,
    precompose,
    restrict_chain,
    rho,
    segal_components_check,
    segal_cut_check,
    shuffles,
    smash,
)
from dendrotensor.lurie import EllPresentation
from dendrotensor._rand import random_tree

EXHAUSTIVE = dict(
    colorings_per_shape=999,
    inerts_per_shape=999,
    betas_per_lift=999,
    arrows_budget=500,
    pairs_per_fiber=999,
)


# -- pointed sets --------------------------------------------------------------


def test_pointed_map_validation():
    two, one = FinPtdObj.skeleton(2), FinPtdObj.skeleton(1)
    with pytest.raises(TreeError):
        FinPtdMor(two, one, (1,))  # not total
    with pytest.raises(TreeError):
        FinPtdMor(two, one, (1, 2))  # 2 is not in <1>
    f = FinPtdMor(two, one, (1, STAR))
    assert f(1) == 1 and f(2) == STAR
    assert f.fiber(1) == (1,)


def test_classify_tags():
    two, one = FinPtdObj.skeleton(2), FinPtdObj.skeleton(1)
    assert classify(FinPtdMor.identity(two)) == ("active", "inert")
    assert classify(FinPtdMor(two, one, (1, 1))) == ("active",)
    assert classify(rho(2, 1)) == ("inert",)
    assert classify(FinPtdMor(two, two, (1, STAR))) == ()


def test_factorize_inert_then_active():
    src, dst = FinPtdObj.skeleton(3), FinPtdObj.skeleton(2)
    f = FinPtdMor(src, dst, (2, STAR, 2))
    inert, active = factorize(f)
    assert inert.is_inert and active.is_active
    assert active.after(inert) == f
    assert len(inert.dst) == 2  # two survivors


def test_factorize_exhaustive_small():
    for m, n in [(0, 1), (1, 1), (2, 1), (2, 2), (3, 2)]:
        src, dst = FinPtdObj.skeleton(m), FinPtdObj.skeleton(n)
        for vals in product(tuple(dst.elements) + (STAR,), repeat=m):
            f = FinPtdMor(src, dst, vals)
            inert, active = factorize(f)
            assert inert.is_inert and active.is_active
            assert active.after(inert) == f


def test_rho_collapses():
    r = rho(3, 2)
    assert r.values == (STAR, 1, STAR)
    with pytest.raises(TreeError):
        rho(2, 3)


def test_smash_is_lexicographic():
    f = FinPtdMor.identity(FinPtdObj.skeleton(2))
    g = FinPtdMor.identity(FinPtdObj.skeleton(3))
    s = smash(f, g)
    # (i, j) of <2> ^ <3> lands at (i-1)*3 + j
    assert s.values == (1, 2, 3, 4, 5, 6)
    h = FinPtdMor(FinPtdObj.skeleton(2), FinPtdObj.skeleton(1), (1, STAR))
    s2 = smash(h, g)
    assert s2.values == (1, 2, 3, STAR, STAR, STAR)


# -- finite operads --------------------------------------------------------------


def test_free_forest_operad_mirrors_cut_sets():
    f = parse_forest("{r[a[x],b[]]}")
    p = FreeForestOperad(f)
    assert p.colors() == f.edges
    for e in f.edges:
        listed = {op for _, ops in p.ops_by_output(e) for op in ops}
        assert listed == set(operations(f, e))
    assert p.identity("r") == Operation("r", ("r",))


def test_free_forest_operad_subst():
    p = FreeForestOperad(parse_forest("{r[a[x],b[]]}"))
    top = Operation("r", ("a", "b"))
    got = p.subst(
        top, {"a": Operation("a", ("x",)), "b": Operation("b", ())}
    )
    assert got == Operation("r", ("x",))
    with pytest.raises(TreeError):
        p.subst(top, {"a": Operation("a", ("x",))})


def test_table_operad_json_round_trip():
    t = TableOperad.from_json(
        {
            "colors": ["c"],
            "operations": [{"inputs": ["c", "c"], "output": "c", "elements": ["m"]}],
        }
    )
    again = TableOperad.from_json(t.to_json())
    assert again.to_json() == t.to_json()
    assert t.ops(["c", "c"], "c") == ("m",)
    assert t.identity("c") == "id:c"


def test_bv_tensor_operad_collects_shuffle_cuts():
    factors = [parse_tree("p[x]"), parse_tree("q[u]")]
    b = BVTensorOperad(factors)
    edges = {e for s in shuffles(factors) for e in s.edges}
    assert set(b.colors()) == edges
    for s in shuffles(factors):
        for e in s.edges:
            for op in operations(s, e):
                assert op in b.ops(op.inputs, op.output)


# -- fiberwise morphisms ---------------------------------------------------------


def _collapse(m):
    sk = FinPtdObj.skeleton(m)
    return FinPtdMor(sk, FinPtdObj.skeleton(1), tuple(1 for _ in range(m)))


def test_ell_hom_counts_products_of_cut_sets():
    p = FreeForestOperad(parse_forest("{r[a[x],b[]]}"))
    alpha = _collapse(2)
    src = EllObject(FinPtdObj.skeleton(2), ("a", "b"))
    hit = EllObject(FinPtdObj.skeleton(1), ("r",))
    miss = EllObject(FinPtdObj.skeleton(1), ("x",))
    assert len(ell_hom(p, alpha, src, hit)) == 1
    assert len(ell_hom(p, alpha, src, miss)) == 0


def test_ell_identity_and_compose():
    p = FreeForestOperad(parse_forest("{r[a[x],b[]]}"))
    x = EllObject(FinPtdObj.skeleton(2), ("a", "b"))
    ident = ell_identity(p, x)
    assert ident.alpha.is_identity
    alpha = _collapse(2)
    y = EllObject(FinPtdObj.skeleton(1), ("r",))
    (f,) = ell_hom(p, alpha, x, y)
    assert ell_compose(p, f, ident) == f
    assert ell_compose(p, ell_identity(p, y), f) == f


def test_ell_compose_matches_substitution():
    p = FreeForestOperad(parse_forest("{r[a[x,y],b]}"))
    mid = EllObject(FinPtdObj.skeleton(2), ("a", "b"))
    top = EllObject(FinPtdObj.skeleton(3), ("x", "y", "b"))
    out = EllObject(FinPtdObj.skeleton(1), ("r",))
    beta = FinPtdMor(top.base, mid.base, (1, 1, 2))
    (g0,) = ell_hom(p, beta, top, mid)
    (g1,) = ell_hom(p, _collapse(2), mid, out)
    comp = ell_compose(p, g1, g0)
    assert comp.component[1] == Operation("r", ("b", "x", "y"))


# -- fibrous checks ---------------------------------------------------------------


@pytest.mark.parametrize("text", ["{r[a[x],b[]]}", "{p[q,s]}", "{e}"])
def test_honest_presentation_is_fibrous(text):
    pres = EllPresentation(FreeForestOperad(parse_forest(text)))
    report = check_fibrous(pres, truncation=2, rng=Random(0), **EXHAUSTIVE)
    assert report.passed, report.failures
    assert report.cocartesian_checked > 0
    assert report.fiber_products_checked > 0
    assert report.component_formulas_checked > 0


def test_every_defect_fixture_is_detected():
    for name, pres in defect_fixtures():
        report = check_fibrous(pres, truncation=2, rng=Random(0), **EXHAUSTIVE)
        assert not report.passed, f"{name} slipped through"


def test_fixture_detection_is_seed_independent():
    for seed in (0, 1, 7, 42):
        for name, pres in defect_fixtures():
            report = check_fibrous(pres, truncation=2, rng=Random(seed), **EXHAUSTIVE)
            assert not report.passed, f"{name} slipped through at seed {seed}"


# -- nerve ------------------------------------------------------------------------


SMALL_SIMPLEX = FinSimplex.from_json(
    {"levels": [[1, 2], [1]], "maps": [{"1": 1, "2": 1}]}
)


def test_chains_biject_with_maps_from_level_forest():
    p = FreeForestOperad(parse_forest("{r[a[x],b[]]}"))
    chains = enumerate_chains(p, SMALL_SIMPLEX)
    maps = maps_into(omega_obj(SMALL_SIMPLEX), p)
    assert len(chains) == len(maps)
    assert {chain_to_map(ch) for ch in chains} == set(maps)
    for ch in chains:
        back = map_to_chain(p, SMALL_SIMPLEX, chain_to_map(ch))
        assert back == ch


def test_degenerate_chain_round_trip():
    p = FreeForestOperad(parse_forest("{r[a]}"))
    a = FinSimplex.from_json({"levels": [[1]], "maps": []})
    chains = enumerate_chains(p, a)
    # one chain per color
    assert len(chains) == len(p.colors())


def test_restriction_naturality():
    p = FreeForestOperad(parse_forest("{r[a[x],b[]]}"))
    for phi in [
        SimplicialOperator.face(1, 0),
        SimplicialOperator.face(1, 1),
        SimplicialOperator.degeneracy(1, 0),
    ]:
        a = SMALL_SIMPLEX
        h = omega_mor(phi, a)
        for ch in enumerate_chains(p, a):
            lhs = chain_to_map(restrict_chain(p, ch, phi))
            rhs = precompose(p, chain_to_map(ch), h)
            assert lhs == rhs


def test_enumeration_caps_abort():
    p = FreeForestOperad(parse_forest("{r[a[x],b[]]}"))
    with pytest.raises(TreeError):
        enumerate_chains(p, SMALL_SIMPLEX, cap=1)
    with pytest.raises(TreeError):
        maps_into(omega_obj(SMALL_SIMPLEX), p, cap=1)


# -- Segal decompositions ----------------------------------------------------------


def test_segal_cut_fixed():
    p = FreeForestOperad(parse_forest("{r[a[x],b[]]}"))
    t = parse_tree("m[n[o]]")
    assert segal_cut_check(p, t, "n")


def test_segal_cut_random():
    rng = Random(5)
    p = FreeForestOperad(parse_forest("{r[a[x,y],b[]]}"))
    for _ in range(15):
        t = random_tree(rng, 5, 0.25, prefix="m")
        for b in t.inner_edges:
            assert segal_cut_check(p, t, b)


def test_segal_components_fixed():
    p = FreeForestOperad(parse_forest("{r[a[x],b[]]}"))
    assert segal_components_check(p, parse_forest("{m;n[o]}"))
    assert segal_components_check(p, parse_forest("{}"))


# -- free algebras ------------------------------------------------------------------


def brute_free_terms(p, generators, inputs, output):
    """Independent enumeration: fill operation slots with ordered choices of
    generator indices and arguments, then quotient by permutations of equal
    indices (the orbit is the multiset of (index, argument) pairs)."""
    idxs = sorted(generators)
    found = set()
    for kappa, labels in p.ops_by_output(output):
        pools = [[i for i in idxs if generators[i] == c] for c in kappa]
        for seq in product(*pools):
            arg_pools = [list(inputs.get(i, ())) for i in seq]
            for args in product(*arg_pools):
                key = tuple(sorted(zip(seq, args)))
                for lab in labels:
                    found.add((lab, key))
    return found


def _term_key(t):
    return (t.label, tuple(sorted(zip(t.indices, t.args))))


def test_free_algebra_fixed():
    p = TableOperad.from_json(
        {
            "colors": ["c"],
            "operations": [{"inputs": ["c", "c"], "output": "c", "elements": ["m"]}],
        }
    )
    gens = {"i": "c", "j": "c"}
    ins = {"i": ["x"], "j": ["y"]}
    terms = free_algebra(p, gens, ins, "c")
    keys = {_term_key(t) for t in terms}
    assert keys == brute_free_terms(p, gens, ins, "c")
    # m(i, j), m(i, i), m(j, j), plus the identity applied to i and to j
    assert len(terms) == 5


def test_free_algebra_orbit_quotient():
    # two equal indices: swapping their arguments is not a new term
    p = TableOperad.from_json(
        {
            "colors": ["c"],
            "operations": [{"inputs": ["c", "c"], "output": "c", "elements": ["m"]}],
        }
    )
    terms = free_algebra(p, {"i": "c"}, {"i": ["x", "y"]}, "c")
    pairs = [t for t in terms if t.label == "m"]
    # arguments {x,x}, {x,y}, {y,y}: three orbits, not four
    assert len(pairs) == 3


def test_free_algebra_matches_brute_force_random():
    rng = Random(9)
    for _ in range(25):
        base = random_tree(rng, 5, 0.3)
        p = FreeForestOperad(base)
        colors = list(p.colors())
        gens = {
            f"g{k}": rng.choice(colors) for k in range(rng.randint(1, 3))
        }
        ins = {
            i: [f"v{k}" for k in range(rng.randint(1, 2))] for i in gens
        }
        output = rng.choice(colors)
        terms = free_algebra(p, gens, ins, output)
        keys = {_term_key(t) for t in terms}
        assert len(keys) == len(terms)
        assert keys == brute_free_terms(p, gens, ins, output)


def test_free_algebra_multiple_labels_per_family():
    p = TableOperad.from_json(
        {
            "colors": ["c"],
            "operations": [
                {"inputs": ["c", "c"], "output": "c", "elements": ["m", "m2"]}
            ],
        }
    )
    gens = {"i": "c"}
    ins = {"i": ["x"]}
    terms = free_algebra(p, gens, ins, "c")
    keys = {_term_key(t) for t in terms}
    assert keys == brute_free_terms(p, gens, ins, "c")
    assert {t.label for t in terms if len(t.indices) == 2} == {"m", "m2"}
