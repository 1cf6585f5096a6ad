from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dendrotensor import (
    STAR,
    FinSimplex,
    SimplicialOperator,
    TreeError,
    compose,
    identity_map,
    omega_mor,
    omega_obj,
    parse_forest,
    restrict,
    retract_witness,
    serialize_forest,
    validate,
)
from dendrotensor._rand import random_fin_simplex, random_forest, random_operator

seeds = st.integers(min_value=0, max_value=2**32 - 1)

WORKED = FinSimplex.from_json(
    {
        "levels": [[1, 2, 3, 4], [1, 2, 3], [1]],
        "maps": [{"1": 1, "2": 1, "3": 3, "4": 3}, {"1": 1, "2": 1, "3": STAR}],
    }
)
WORKED_FOREST = "{ℓ2:1[ℓ1:1[ℓ0:1,ℓ0:2],ℓ1:2[]];ℓ1:3[ℓ0:3,ℓ0:4]}"


# -- chains ------------------------------------------------------------------


def test_chain_validation():
    with pytest.raises(TreeError):
        FinSimplex((), ())
    with pytest.raises(TreeError):  # map not total
        FinSimplex((("1", "2"), ("1",)), ((("1", "1"),),))
    with pytest.raises(TreeError):  # value outside next level
        FinSimplex((("1",), ("1",)), ((("1", "9"),),))
    with pytest.raises(TreeError):  # '*' cannot be an element
        FinSimplex((("*",),), ())


def test_composites_absorb_star():
    assert WORKED.comp(0, 2) == {"1": "1", "2": "1", "3": "*", "4": "*"}
    assert WORKED.comp(1, 1) == {"1": "1", "2": "2", "3": "3"}


def test_json_round_trip():
    assert FinSimplex.from_json(WORKED.to_json()) == WORKED


# -- the forest of a chain ---------------------------------------------------


def test_worked_example_forest():
    assert serialize_forest(omega_obj(WORKED)) == WORKED_FOREST


def test_single_level_gives_bare_edges():
    a = FinSimplex.from_json({"levels": [[1, 2]], "maps": []})
    assert serialize_forest(omega_obj(a)) == "{ℓ0:1;ℓ0:2}"


def test_empty_level_gives_empty_forest():
    a = FinSimplex.from_json({"levels": [[]], "maps": []})
    assert serialize_forest(omega_obj(a)) == "{}"


def test_everything_dies_gives_stumps():
    a = FinSimplex.from_json({"levels": [[1], [1]], "maps": [{"1": STAR}]})
    assert serialize_forest(omega_obj(a)) == "{ℓ1:1[];ℓ0:1}"


# -- simplicial operators ----------------------------------------------------


def test_operator_validation():
    with pytest.raises(TreeError):
        SimplicialOperator(1, 1, (1, 0))  # not monotone
    with pytest.raises(TreeError):
        SimplicialOperator(1, 1, (0, 2))  # out of range


def test_face_degeneracy_composition_identities():
    # the standard relation d_i s_i = id on operator level
    for n in range(0, 3):
        for i in range(0, n + 1):
            s = SimplicialOperator.degeneracy(n, i)
            d = SimplicialOperator.face(n + 1, i)
            assert s.after(d) == SimplicialOperator.identity(n)


def test_restrict_levels():
    phi = SimplicialOperator.face(2, 1)  # keep levels 0 and 2
    b = restrict(WORKED, phi)
    assert b.levels == (WORKED.levels[0], WORKED.levels[2])
    assert dict(b.maps[0]) == WORKED.comp(0, 2)


def test_restrict_requires_matching_length():
    with pytest.raises(TreeError):
        restrict(WORKED, SimplicialOperator.identity(3))


# -- functoriality of the forest map -----------------------------------------


def test_omega_mor_identity():
    f = omega_mor(SimplicialOperator.identity(WORKED.n), WORKED)
    assert f == identity_map(omega_obj(WORKED))


def test_omega_mor_respects_composition_fixed():
    phi = SimplicialOperator.face(2, 1)
    psi = SimplicialOperator.face(1, 0)
    lhs = omega_mor(phi.after(psi), WORKED)
    rhs = compose(omega_mor(phi, WORKED), omega_mor(psi, restrict(WORKED, phi)))
    assert lhs == rhs
    validate(lhs)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_omega_mor_respects_composition_random(seed):
    rng = Random(seed)
    a = random_fin_simplex(rng, 4, 3)
    phi = random_operator(rng, rng.randint(0, a.n), a.n)
    psi = random_operator(rng, rng.randint(0, phi.dom), phi.dom)
    lhs = omega_mor(phi.after(psi), a)
    rhs = compose(omega_mor(phi, a), omega_mor(psi, restrict(a, phi)))
    assert lhs == rhs


# -- retracts ----------------------------------------------------------------


def _split_names(text):
    out, cur = [], []
    for ch in text:
        if ch in "[],;{}":
            if cur:
                out.append("".join(cur))
                cur = []
            out.append(ch)
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def _strip(forest):
    parts = _split_names(serialize_forest(forest))
    renamed = "".join(
        p.split(":", 1)[1] if p and p[0] == "ℓ" and ":" in p else p for p in parts
    )
    return parse_forest(renamed)


@pytest.mark.parametrize(
    "text",
    ["{}", "{e}", "{r[]}", "{r[a[x,y],b[]]}", "{a[b[c]];d}", "{r[a[],b[c,d[]]]}"],
)
def test_retract_witness_fixed(text):
    f = parse_forest(text)
    w = retract_witness(f)
    validate(w.section)
    validate(w.retraction)
    assert compose(w.retraction, w.section) == identity_map(f)
    assert _strip(w.omega).canonical_key() == w.padded.canonical_key()
    assert omega_obj(w.simplex).canonical_key() == w.omega.canonical_key()


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_retract_witness_random(seed):
    f = random_forest(Random(seed), 8, 0.3)
    w = retract_witness(f)
    assert compose(w.retraction, w.section) == identity_map(f)
    assert _strip(w.omega).canonical_key() == w.padded.canonical_key()


def test_padding_only_extends_leaves():
    f = parse_forest("{r[a,b[x]]}")
    w = retract_witness(f)
    # every original edge survives in the padded forest with the same parent
    orig = f.components[0]
    pad = w.padded.components[0]
    for e in orig.edges:
        assert e in pad.edge_set
        assert orig.parent.get(e) == pad.parent.get(e)
