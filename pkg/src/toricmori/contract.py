"""Contractible classes and the contraction morphisms they define."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from . import lattice
from .cycles import (
    CycleClass,
    PrimitiveRelation,
    primitive_collections,
    primitive_relations,
    relation_with_class,
    restrict_class,
    wall_classes,
)
from .errors import DomainError, NotContractibleError
from .fan import Fan, GeneralFan, Wall, fan_document, quotient_projection, star_quotient, walls


@dataclass(frozen=True)
class ContractionProfile:
    kind: str
    h: int
    k: int
    bundle_fiber_dim: int
    locus_A: Optional[frozenset]
    image_B: Optional[frozenset]
    target_simplicial: bool
    target_smooth: bool

    def to_json(self, f: Fan) -> dict:
        return {
            "kind": self.kind,
            "h": self.h,
            "k": self.k,
            "fiber_dim": self.bundle_fiber_dim,
            "locus_A": f.names(self.locus_A) if self.locus_A is not None else None,
            "image_B": f.names(self.image_B) if self.image_B is not None else None,
            "target_simplicial": self.target_simplicial,
            "target_smooth": self.target_smooth,
        }


@dataclass(frozen=True)
class Contraction:
    source: Fan
    target: Union[Fan, GeneralFan]
    profile: ContractionProfile
    relation: PrimitiveRelation
    removed_walls: tuple
    merged_cones: tuple
    quotient_map: Optional[tuple] = None

    @property
    def kind(self) -> str:
        return self.profile.kind

    def to_json(self) -> dict:
        f = self.source
        return {
            "kind": self.kind,
            "relation": self.relation.to_json(),
            "removed_walls": [f.names(w.cone) for w in self.removed_walls],
            "target": fan_document(self.target),
            "profile": self.profile.to_json(f),
        }


def is_contractible_criterio(f: Fan, r: PrimitiveRelation) -> bool:
    """Combinatorial test through the other primitive collections meeting ``r``."""
    colls = primitive_collections(f)
    for q in colls:
        if q == r.collection or not (q & r.collection):
            continue
        rest = (q - r.collection) | r.focus
        if not any(p <= rest for p in colls):
            return False
    return True


def _cones_around(f: Fan, y: frozenset):
    """Cones ``nu`` with ``y + nu`` a cone and ``nu`` disjoint from ``y``."""
    out = set()
    for c in f.max_cones:
        if y <= c:
            free = sorted(c - y)
            for k in range(len(free) + 1):
                out.update(frozenset(s) for s in itertools.combinations(free, k))
    return out


def is_contractible_geometric(f: Fan, r: PrimitiveRelation) -> bool:
    """Direct check that every cone around the focus extends to all cones ``(X - x_i) + Y + nu``."""
    x, y = r.collection, r.focus
    for nu in _cones_around(f, y):
        if nu & x:
            continue
        for xi in x:
            if not f.is_cone((x - {xi}) | y | nu):
                return False
    return True


def check_condition_i(f: Fan, c: CycleClass) -> bool:
    """``c`` is a wall class and every wall of that class is extremal in each invariant surface through it."""
    from .mori import is_extremal

    classes = wall_classes(f)
    hits = [w for w in sorted(classes, key=sorted) if classes[w] == c]
    if not hits:
        return False
    if f.dim < 2:
        return True
    for w in hits:
        for z in sorted(w):
            tau = w - {z}
            surf, _ = star_quotient(f, tau)
            if not is_extremal(surf, restrict_class(f, tau, c)):
                return False
    return True


def negative_locus(f: Fan, c: CycleClass) -> frozenset:
    neg = frozenset(i for i, x in enumerate(c.coeffs) if x < 0)
    if not f.is_cone(neg):
        raise DomainError(f"class {c} has no invariant locus: its negative rays span no cone")
    return neg


def is_contractible_class(f: Fan, c: CycleClass) -> bool:
    r = relation_with_class(f, c)
    return r is not None and is_contractible_criterio(f, r)


@lru_cache(maxsize=256)
def contractible_classes(f: Fan) -> tuple:
    return tuple(r for r in primitive_relations(f) if is_contractible_criterio(f, r))


def _as_relation(f: Fan, r) -> PrimitiveRelation:
    if isinstance(r, PrimitiveRelation):
        return r
    c = CycleClass(r.coeffs, f)
    if c.is_zero():
        raise NotContractibleError("the zero class is not contractible")
    found = relation_with_class(f, c.primitive())
    if found is None:
        raise NotContractibleError(f"{c} is not proportional to a primitive relation")
    return found


def _profile(r: PrimitiveRelation) -> ContractionProfile:
    if r.k == 0:
        return ContractionProfile("fiber", r.h, 0, r.h - 1, None, None, True, True)
    return ContractionProfile(
        "birational", r.h, r.k, r.h - 1, r.focus, r.support,
        r.k == 1, r.k == 1 and r.neg_coeffs == (1,),
    )


def _components(f: Fan, removed: list) -> list:
    parent = list(range(len(f.max_cones)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for w in removed:
        a, b = find(w.left), find(w.right)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict = {}
    for i in range(len(f.max_cones)):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def _extremal_generators(f: Fan, rays: frozenset) -> frozenset:
    keep = set(rays)
    for i in sorted(rays):
        others = [f.rays[j] for j in sorted(keep) if j != i]
        if lattice.in_rational_cone(others, f.rays[i]) is not None:
            keep.discard(i)
    return frozenset(keep)


def contract(f: Fan, r) -> Contraction:
    """Contract a contractible class: remove the walls of that class and merge or project cones."""
    r = _as_relation(f, r)
    if not is_contractible_criterio(f, r):
        raise NotContractibleError(f"{r} is not contractible")
    removed = [w for w in walls(f) if wall_classes(f)[w.cone] == r.cls]
    profile = _profile(r)
    if r.k == 0:
        return _contract_fiber(f, r, removed, profile)

    merged = []
    cones = []
    for group in _components(f, removed):
        union = frozenset().union(*(f.max_cones[i] for i in group))
        if len(group) > 1:
            nu = union - r.support
            assert union == r.support | nu and f.is_cone(r.focus | nu)
            merged.append(union)
        cones.append(_extremal_generators(f, union))
    used = sorted(set().union(*cones))
    index = {i: k for k, i in enumerate(used)}
    rays = [f.rays[i] for i in used]
    labels = [f.labels[i] for i in used]
    new_cones = [[index[i] for i in c] for c in cones]
    if profile.target_smooth:
        target = Fan(f.dim, rays, new_cones, labels)
    else:
        target = GeneralFan(f.dim, rays, new_cones, labels)
    merged.sort(key=sorted)
    return Contraction(f, target, profile, r, tuple(removed), tuple(merged))


def _contract_fiber(f, r, removed, profile) -> Contraction:
    x = sorted(r.collection)
    proj = quotient_projection(f, frozenset(x[:-1]))
    assert not any(lattice.mat_vec(proj, f.rays[x[-1]]))
    others = [i for i in range(f.n_rays) if i not in r.collection]
    images = [lattice.mat_vec(proj, f.rays[i]) for i in others]
    if len(set(images)) != len(images):
        raise AssertionError("distinct rays collapse under the fiber projection")
    index = {i: k for k, i in enumerate(others)}
    dim = f.dim - r.h + 1
    merged = []
    cones = []
    for nu in sorted(_cones_around(f, frozenset()), key=sorted):
        if len(nu) == dim and not (nu & r.collection):
            merged.append(r.collection | nu)
            cones.append([index[i] for i in nu])
    target = Fan(dim, images, cones, [f.labels[i] for i in others])
    return Contraction(f, target, profile, r, tuple(removed), tuple(merged), tuple(proj))
