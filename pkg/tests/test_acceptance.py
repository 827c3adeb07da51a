"""The ten acceptance criteria, one test each; each prints a PASS/FAIL line (run with -s to see them inline)."""
from contextlib import contextmanager

import pytest

from helpers import (
    brute_extremal_combinations,
    catalog_fans,
    centers,
    corpus,
    effective_classes_up_to,
    projective_corpus,
    sato_oracle,
)
from toricmori import blowup, catalog as cat, contract, cycles, fan, lattice, mori
from toricmori.cycles import CycleClass


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title):
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'}  {title}")
    return run


def rel(f, text):
    return cycles.parse_class(f, text)


OMEGAS = ["e1+f2=x", "f1+e3=e1+f3", "e2+f3=f2+e3", "e0+x=f1+f2", "f1+f2+f3=2e0"]
ODA = {
    "g1": "e1+f2=f1+e2", "w2": "f1+e3=e1+f3", "w3": "e2+f3=f2+e3", "g4": "e0+e2=f2",
    "w5": "f1+f2+f3=2e0", "g6": "e0+e1=f1", "g7": "e0+e3=f3",
}
ODA_COLLECTIONS = [
    {"e1", "f2"}, {"f1", "e3"}, {"e2", "f3"}, {"e0", "e2"}, {"f1", "f2", "f3"}, {"e0", "e1"}, {"e0", "e3"},
]


def all_blow_ups(fans):
    for name, f in fans:
        for tau in centers(f):
            yield name, tau, blowup.blow_up(f, tau)


def test_esempio_regression(criterion):
    with criterion(1, "esempio: rho, projectivity, extremal classes, gamma"):
        y = cat.get("oda-y")
        x = blowup.blow_up(y, ["f1", "e2"], label="x").total
        assert x.picard_number == 5
        assert mori.is_projective(x)
        omegas = [rel(x, s) for s in OMEGAS]
        assert set(mori.extremal_classes(x)) == set(omegas)
        gamma = rel(x, "f1+e2=x")
        assert contract.is_contractible_class(x, gamma)
        assert not mori.is_extremal(x, gamma)
        d = mori.decompose_contractible(x, gamma)
        assert set(d.terms) == {(omegas[0], 1), (omegas[1], 1), (omegas[2], 1)}


def test_oda_regression(criterion):
    with criterion(2, "oda 3-fold: relations, contractible classes, identities, LP"):
        y = cat.get("oda-y")
        assert not mori.is_projective(y)
        want = {frozenset(y.index_of(s) for s in c) for c in ODA_COLLECTIONS}
        assert set(cycles.primitive_collections(y)) == want
        r = {k: rel(y, s) for k, s in ODA.items()}
        assert {p.cls for p in cycles.primitive_relations(y)} == set(r.values())
        assert {p.cls for p in contract.contractible_classes(y)} == {r["g1"], r["w2"], r["w3"], r["w5"]}
        assert (r["g1"] + r["w2"] + r["w3"]).is_zero()
        assert r["g4"] == r["w3"] + r["g7"]
        assert r["g6"] == r["g1"] + r["g4"]
        assert r["g7"] == r["w2"] + r["g6"]
        gens = [r[k].coeffs for k in ("g1", "w2", "w3", "w5")]
        for k in ("g4", "g6", "g7"):
            assert lattice.in_rational_cone(gens, r[k].coeffs) is None


def test_invariant_surfaces(criterion):
    with criterion(3, "invariant surfaces of X and condition (i) for gamma"):
        x = cat.get("esempio-x")
        q, _ = fan.star_quotient(x, frozenset({x.index_of("x")}))
        assert (q.n_rays, len(q.max_cones)) == (4, 4)
        assert [r.k for r in cycles.primitive_relations(q)] == [0, 0]
        q, _ = fan.star_quotient(x, frozenset({x.index_of("e1")}))
        assert q.n_rays == 5 and q.picard_number == 3
        gamma = rel(x, "f1+e2=x")
        for a, b in (("e1", "x"), ("f2", "x")):
            wall = frozenset({x.index_of(a), x.index_of(b)})
            assert cycles.curve_class_from_wall(x, wall) == gamma
        assert contract.check_condition_i(x, gamma)


def test_contractibility_oracles_agree(criterion):
    with criterion(4, "three contractibility tests agree on the corpus"):
        fans = corpus()
        assert len(cat.random_blowups()) >= 50
        assert {f.dim for _, f in cat.random_blowups()} == {2, 3, 4}
        bad = []
        for name, f in fans:
            for r in cycles.primitive_relations(f):
                votes = {
                    contract.is_contractible_criterio(f, r),
                    contract.is_contractible_geometric(f, r),
                    contract.check_condition_i(f, r.cls),
                }
                if len(votes) != 1:
                    bad.append((name, str(r)))
        assert bad == []


def test_round_trip(criterion):
    with criterion(5, "contract(blow_up(f, tau), delta) == f"):
        bad = []
        for name, tau, b in all_blow_ups(catalog_fans()):
            target = contract.contract(b.total, b.delta).target
            if not (isinstance(target, fan.Fan) and fan.fans_equal(target, b.base)):
                bad.append((name, sorted(tau)))
        assert bad == []


def test_sato_oracle(criterion):
    with criterion(6, "collection transforms match recomputation"):
        bad = []
        for name, tau, b in all_blow_ups(corpus()):
            fails = sato_oracle(b)
            if fails:
                bad.append((name, sorted(tau), fails))
        assert bad == []


def test_piove(criterion):
    with criterion(7, "contractible classes under blow-down"):
        report = blowup.verify_piove(cat.esempio_blowup())
        assert report.passed
        bad = [(name, sorted(tau)) for name, tau, b in all_blow_ups(corpus())
               if not blowup.verify_piove(b).passed]
        assert bad == []
        s = cat.get("bl-p1xp1")
        zero = frozenset({s.index_of("u3")})
        assert cycles.intersect_divisor(cycles.curve_class_from_wall(s, zero), "u3") == 0
        report = blowup.verify_piove(blowup.blow_up(s, ["u3", "u4"]))
        assert report.passed and report.strict


def test_decomposition_soundness(criterion):
    with criterion(8, "decompositions are exact and contractible"):
        for name, f in projective_corpus():
            good = {r.cls for r in contract.contractible_classes(f)}
            for c in mori.curve_cone(f).generators:
                for extremal_first in (True, False):
                    d = mori.decompose_contractible(f, c, prefer_extremal=extremal_first)
                    assert d.total() == c, name
                    assert all(m > 0 and t in good for t, m in d.terms), name
        for name, f in projective_corpus():
            if f.dim != 2 or f.picard_number > 4:
                continue
            h = mori.ample_divisor(f)
            for coeffs in effective_classes_up_to(f, h, 6):
                d = mori.decompose_surface(f, CycleClass(coeffs, f))
                got = {t.coeffs: m for t, m in d.terms}
                assert got in brute_extremal_combinations(f, h, coeffs), (name, coeffs)


def test_minimal_degree(criterion):
    with criterion(9, "minimal-degree and degree-one classes are extremal"):
        for name, f in projective_corpus():
            h = mori.ample_divisor(f)
            gens = mori.curve_cone(f).generators
            low = min(cycles.pair(h, g) for g in gens)
            for g in gens:
                if cycles.pair(h, g) in (low, 1):
                    assert mori.is_extremal(f, g), (name, str(g))
            assert set(mori.minimal_degree_classes(f, h)[1]) == {g for g in gens if cycles.pair(h, g) == low}


def test_degree_bookkeeping(criterion):
    with criterion(10, "anticanonical degree of primitive relations"):
        for name, f in corpus():
            for r in cycles.primitive_relations(f):
                assert cycles.anticanonical_degree(r.cls) == r.h - sum(r.neg_coeffs), (name, str(r))
                assert r.degree == r.h - sum(r.neg_coeffs)
