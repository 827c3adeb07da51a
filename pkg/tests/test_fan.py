import json
from collections import Counter

import pytest

from helpers import corpus, catalog_fans
from toricmori import catalog as cat
from toricmori import cycles, fan
from toricmori.errors import InputError, InvalidFanError
from toricmori.fan import Fan


def p2():
    return Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def relation_shapes(f):
    """Isomorphism-invariant summary: (size, focus coefficients, degree) per primitive relation."""
    return Counter((r.h, tuple(sorted(r.neg_coeffs)), r.degree) for r in cycles.primitive_relations(f))


def test_p2_is_valid():
    assert fan.validate(p2()) == []


def test_missing_cone_is_reported():
    f = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(1, 2), (0, 2)])
    problems = fan.validate(f)
    assert any("maximal cones" in p for p in problems)


def test_oda_fan_is_valid():
    assert fan.validate(cat.get("oda-y")) == []


def test_non_smooth_cone_is_reported():
    f = Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    assert any("not smooth" in p for p in fan.validate(f))


def test_overlapping_cones_are_reported():
    # a full fan of P2 with a fourth ray inserted without subdividing: walls pair up but cones overlap
    rays = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)]
    f = Fan(2, rays, [(0, 4), (4, 1), (1, 2), (2, 3), (3, 0), (0, 5), (5, 2)])
    assert fan.validate(f) != []


@pytest.mark.parametrize("name,f", catalog_fans())
def test_wall_count(name, f):
    assert len(fan.walls(f)) == f.dim * len(f.max_cones) // 2


def test_wall_counts_of_small_fans():
    assert len(fan.walls(p2())) == 3
    assert len(fan.walls(cat.get("f0"))) == 4


def test_locate_examples():
    f = p2()
    assert fan.locate_minimal_cone(f, (1, 1)) == {0, 1}
    assert fan.locate_minimal_cone(f, (1, 0)) == {0}
    assert fan.locate_minimal_cone(f, (0, 0)) == frozenset()
    y = cat.get("oda-y")
    e1, f2 = y.rays[y.index_of("e1")], y.rays[y.index_of("f2")]
    p = tuple(a + b for a, b in zip(e1, f2))
    assert fan.locate_minimal_cone(y, p) == {y.index_of("f1"), y.index_of("e2")}


@pytest.mark.parametrize("name,f", corpus())
def test_point_location_is_positive_on_own_rays(name, f):
    for p in fan.sample_points(f.dim, 60, seed=11):
        cone, coords = fan.locate_with_coordinates(f, p)
        assert set(coords) == set(cone)
        assert all(x > 0 for x in coords.values())
        back = [sum(coords[i] * f.rays[i][j] for i in cone) for j in range(f.dim)]
        assert back == list(p)


def test_star_quotient_of_p3_ray_is_p2():
    p3 = cat.get("p3")
    q, ray_map = fan.star_quotient(p3, [0])
    assert (q.dim, q.n_rays, len(q.max_cones)) == (2, 3, 3)
    assert fan.validate(q) == []
    assert set(ray_map) == {1, 2, 3}


def test_star_quotient_of_exceptional_divisor_is_quadric():
    x = cat.get("esempio-x")
    q, _ = fan.star_quotient(x, [x.index_of("x")])
    assert (q.n_rays, len(q.max_cones)) == (4, 4)
    assert relation_shapes(q) == Counter({(2, (), 2): 2})


def test_star_quotient_of_e1_has_five_rays():
    x = cat.get("esempio-x")
    q, _ = fan.star_quotient(x, [x.index_of("e1")])
    assert (q.n_rays, len(q.max_cones)) == (5, 5)
    assert fan.validate(q) == []


def test_star_quotient_rejects_non_cone():
    y = cat.get("oda-y")
    with pytest.raises(InputError):
        fan.star_quotient(y, [y.index_of("e1"), y.index_of("f2")])


@pytest.mark.parametrize("name,f", catalog_fans())
def test_star_of_a_wall_is_p1(name, f):
    if f.dim < 2:
        return
    for w in fan.walls(f):
        q, _ = fan.star_quotient(f, w.cone)
        assert sorted(q.rays) == [(-1,), (1,)]


@pytest.mark.parametrize("name,f", corpus()[::3])
def test_star_quotients_compose(name, f):
    if f.dim < 3:
        return
    for tau in sorted((c for c in f.cones if len(c) == 1), key=sorted):
        q, ray_map = fan.star_quotient(f, tau)
        assert fan.validate(q, samples=50) == []
        for sigma in sorted((c for c in f.cones if len(c) == 2 and tau < c), key=sorted):
            direct, _ = fan.star_quotient(f, sigma)
            (extra,) = sigma - tau
            via, _ = fan.star_quotient(q, [ray_map[extra]])
            assert relation_shapes(direct) == relation_shapes(via)
            assert (direct.n_rays, len(direct.max_cones)) == (via.n_rays, len(via.max_cones))


def test_serialization_round_trip():
    doc = {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[2, 0], [1, 0], [2, 1]],
           "labels": ["a", "b", "c"]}
    f = fan.parse_fan(json.dumps(doc))
    out = json.loads(fan.serialize_fan(f))
    assert out["max_cones"] == [[0, 1], [0, 2], [1, 2]]
    assert out["rays"] == doc["rays"] and out["labels"] == doc["labels"]
    assert fan.serialize_fan(fan.parse_fan(fan.serialize_fan(f))) == fan.serialize_fan(f)


def test_oda_round_trip():
    y = cat.get("oda-y")
    again = fan.parse_fan(fan.serialize_fan(y))
    assert fan.fans_equal(again, y)


@pytest.mark.parametrize("doc,msg", [
    ({"dim": 2, "rays": [[2, 2], [0, 1]], "max_cones": [[0, 1]]}, "non-primitive"),
    ({"dim": 2, "rays": [[1, 0, 0]], "max_cones": []}, "dimension mismatch"),
    ({"dim": 2, "rays": [[1, 0]]}, "missing"),
    ({"dim": 2, "rays": [[1, 0]], "max_cones": [[3]]}, "ray indices"),
])
def test_parse_rejects(doc, msg):
    with pytest.raises(InputError, match=msg):
        fan.parse_fan(json.dumps(doc))


def test_parse_rejects_malformed_json():
    with pytest.raises(InputError):
        fan.parse_fan("{not json")


def test_check_raises_with_violations():
    f = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(1, 2), (0, 2)])
    with pytest.raises(InvalidFanError) as e:
        fan.check(f)
    assert e.value.violations


def test_general_fan_validation_of_contraction_targets():
    from toricmori.fan import GeneralFan
    # the fan of P(1,1,2): a simplicial, non-smooth complete surface
    g = GeneralFan(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    assert fan.validate_general(g) == []
    broken = GeneralFan(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2)])
    assert fan.validate_general(broken) != []
