"""Fans of smooth complete toric varieties.

A :class:`Fan` stores primitive ray generators and its maximal cones as
sets of ray indices.  Because every cone of a smooth fan is simplicial,
a set of rays spans a cone exactly when it is contained in some maximal
cone, and all combinatorics below is done on index sets.
"""
from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import lattice
from .errors import InputError, InvalidFanError

ConeRef = frozenset  # frozenset[int]


def _canonical_cones(cones) -> tuple:
    cs = [frozenset(int(i) for i in c) for c in cones]
    return tuple(sorted(cs, key=lambda c: sorted(c)))


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple
    max_cones: tuple
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", _canonical_cones(self.max_cones))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(f"u{i}" for i in range(len(rays))))
        else:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        if len(self.labels) != len(rays):
            raise InputError("one label per ray required")
        if len(set(self.labels)) != len(self.labels):
            raise InputError("ray labels must be distinct")
        for r in rays:
            if len(r) != self.dim:
                raise InputError(f"ray {r} does not have dimension {self.dim}")

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.dim, self.rays, self.max_cones))

    def __repr__(self):
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @property
    def picard_number(self) -> int:
        return len(self.rays) - self.dim

    @cached_property
    def cones(self) -> frozenset:
        """Every cone of the fan (as index sets), the zero cone included."""
        out = set()
        for c in self.max_cones:
            items = sorted(c)
            for k in range(len(items) + 1):
                out.update(frozenset(s) for s in itertools.combinations(items, k))
        return frozenset(out)

    def is_cone(self, rays: Iterable[int]) -> bool:
        return frozenset(rays) in self.cones

    @cached_property
    def label_index(self) -> dict:
        return {s: i for i, s in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise InputError(f"unknown ray label {label!r}") from None

    def names(self, idx: Iterable[int]) -> list:
        return [self.labels[i] for i in sorted(idx)]

    @cached_property
    def ray_index(self) -> dict:
        return {r: i for i, r in enumerate(self.rays)}

    def matrix(self, idx: Sequence[int]) -> list:
        """Rays ``idx`` as the columns of an ``dim x len(idx)`` matrix."""
        return [[self.rays[j][i] for j in idx] for i in range(self.dim)]

    @cached_property
    def _cone_inverses(self) -> dict:
        inv = {}
        for c in self.max_cones:
            idx = sorted(c)
            if len(idx) != self.dim:
                continue
            m = self.matrix(idx)
            if lattice.det(m) == 0:
                continue
            inv[c] = (idx, lattice.inverse(m))
        return inv

    def coordinates(self, cone: ConeRef, p: Sequence) -> dict:
        """Coordinates of ``p`` in the basis given by a maximal cone."""
        idx, inv = self._cone_inverses[cone]
        vals = lattice.mat_vec(inv, [Fraction(x) for x in p])
        return dict(zip(idx, vals))

    @cached_property
    def wall_map(self) -> dict:
        """Each (n-1)-face of a maximal cone -> indices of maximal cones containing it."""
        walls: dict = {}
        for k, c in enumerate(self.max_cones):
            for i in c:
                walls.setdefault(c - {i}, []).append(k)
        return walls

    def adjacent_rays(self, tau: ConeRef) -> list:
        """Rays ``x`` not in ``tau`` such that ``tau + <x>`` is a cone."""
        out = set()
        for c in self.max_cones:
            if tau <= c:
                out.update(c - tau)
        return sorted(out)


@dataclass(frozen=True)
class GeneralFan:
    """A fan with arbitrary (possibly non-simplicial) maximal cones.

    Only produced as the target of a contraction; supports validation and
    serialization.
    """
    dim: int
    rays: tuple
    max_cones: tuple
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "max_cones", _canonical_cones(self.max_cones))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(f"u{i}" for i in range(len(self.rays))))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def simplicial(self) -> bool:
        return all(len(c) == self.dim for c in self.max_cones)

    def names(self, idx: Iterable[int]) -> list:
        return [self.labels[i] for i in sorted(idx)]


@dataclass(frozen=True)
class Wall:
    cone: frozenset
    left: int
    right: int


def walls(f: Fan) -> list:
    """Every wall with its two adjacent maximal cones, in canonical order."""
    out = []
    for w in sorted(f.wall_map, key=sorted):
        adj = f.wall_map[w]
        if len(adj) != 2:
            raise InvalidFanError([f"wall {f.names(w)} lies in {len(adj)} maximal cones"])
        out.append(Wall(w, adj[0], adj[1]))
    return out


def wall_opposites(f: Fan, w: Wall) -> tuple:
    """The two rays completing ``w`` to its adjacent maximal cones."""
    (a,) = f.max_cones[w.left] - w.cone
    (b,) = f.max_cones[w.right] - w.cone
    return a, b


def _separable(f, s1: frozenset, s2: frozenset) -> bool:
    # the two cones meet along the cone on their common rays iff some linear
    # form vanishes on the common rays and separates the rest strictly
    common = s1 & s2
    cons = [(f.rays[i], lattice.GE, 1) for i in sorted(s1 - common)]
    cons += [(tuple(-x for x in f.rays[i]), lattice.GE, 1) for i in sorted(s2 - common)]
    cons += [(f.rays[i], lattice.EQ, 0) for i in sorted(common)]
    return lattice.lp_feasible(cons, dim=f.dim) is not None


def default_seed() -> int:
    return int(os.environ.get("TORIC_SEED", "0"))


def sample_points(dim: int, count: int, seed: Optional[int] = None, bound: int = 12) -> list:
    """Deterministic pseudo-random rational points, never the origin."""
    rng = random.Random(default_seed() if seed is None else seed)
    pts = []
    while len(pts) < count:
        den = rng.randint(1, 7)
        p = tuple(Fraction(rng.randint(-bound, bound), den) for _ in range(dim))
        if any(p):
            pts.append(p)
    return pts


def validate(f: Fan, samples: int = 1000, seed: Optional[int] = None, pairwise: bool = True) -> list:
    """List every violated fan invariant; an empty list means the fan is valid.

    ``pairwise=False`` skips the LP check that maximal cones meet in faces.
    """
    v = []
    n = f.dim
    if n < 1:
        return ["dimension must be positive"]
    for i, r in enumerate(f.rays):
        if not any(r):
            v.append(f"ray {f.labels[i]} is zero")
        elif not lattice.is_primitive(r):
            v.append(f"ray {f.labels[i]} = {list(r)} is not primitive")
    if len(set(f.rays)) != len(f.rays):
        v.append("rays are not pairwise distinct")
    if len(set(f.max_cones)) != len(f.max_cones):
        v.append("two maximal cones share all their rays")
    for c in f.max_cones:
        if any(not 0 <= i < f.n_rays for i in c):
            v.append(f"cone {sorted(c)} refers to a missing ray")
            return v
        if len(c) != n:
            v.append(f"cone {f.names(c)} has {len(c)} rays, expected {n}")
        elif abs(lattice.det(f.matrix(sorted(c)))) != 1:
            v.append(f"cone {f.names(c)} is not smooth")
    used = set().union(*f.max_cones) if f.max_cones else set()
    for i in range(f.n_rays):
        if i not in used:
            v.append(f"ray {f.labels[i]} lies in no maximal cone")
    for w, adj in sorted(f.wall_map.items(), key=lambda kv: sorted(kv[0])):
        if len(adj) != 2:
            v.append(f"wall {f.names(w)} lies in {len(adj)} maximal cones")
    if v or not pairwise:
        return v
    for a, b in itertools.combinations(f.max_cones, 2):
        if not _separable(f, a, b):
            v.append(f"cones {f.names(a)} and {f.names(b)} do not meet along a common face")
    if v or samples <= 0:
        return v
    for p in sample_points(n, samples, seed):
        if _locate(f, p) is None:
            v.append(f"point {[str(x) for x in p]} lies in no cone")
            break
    return v


def check(f: Fan, samples: int = 0) -> Fan:
    """Raise :class:`InvalidFanError` unless ``f`` validates."""
    v = validate(f, samples=samples)
    if v:
        raise InvalidFanError(v)
    return f


def _locate(f: Fan, p):
    for c in f.max_cones:
        coords = f.coordinates(c, p)
        if all(x >= 0 for x in coords.values()):
            return c, coords
    return None


def locate_minimal_cone(f: Fan, p: Sequence) -> ConeRef:
    """The unique cone containing ``p`` in its relative interior."""
    cone, _ = locate_with_coordinates(f, p)
    return cone


def locate_with_coordinates(f: Fan, p: Sequence) -> tuple:
    """``(cone, coords)`` with ``p = sum coords[i] * rays[i]`` and every coefficient positive."""
    hit = _locate(f, p)
    if hit is None:
        raise InvalidFanError([f"point {list(p)} lies in no cone; the fan is not complete"])
    _, coords = hit
    support = {i: x for i, x in coords.items() if x != 0}
    return frozenset(support), support


def quotient_projection(f: Fan, tau: ConeRef) -> tuple:
    """An integral projection ``N -> N / span(tau)`` as a list of row vectors.

    ``tau`` is completed to a lattice basis by a maximal cone containing it;
    the rows are the dual-basis functionals of the remaining rays.
    """
    for c in f.max_cones:
        if tau <= c:
            idx, inv = f._cone_inverses[c]
            rows = [tuple(int(x) for x in inv[k]) for k, i in enumerate(idx) if i not in tau]
            return rows
    raise InputError(f"{f.names(tau)} is not a cone of the fan")


def star_quotient(f: Fan, tau: Iterable[int]) -> tuple:
    """Fan of the invariant subvariety ``V(tau)`` and the ray map into it.

    Returns ``(quotient_fan, ray_map)`` where ``ray_map`` sends each ambient
    ray adjacent to ``tau`` to its index in the quotient fan.
    """
    tau = frozenset(tau)
    if not f.is_cone(tau):
        raise InputError(f"{f.names(tau)} is not a cone of the fan")
    if len(tau) >= f.dim:
        raise InputError("star quotient needs a cone of dimension < n")
    proj = quotient_projection(f, tau)
    adj = f.adjacent_rays(tau)
    ray_map = {x: k for k, x in enumerate(adj)}
    rays = [lattice.mat_vec(proj, f.rays[x]) for x in adj]
    cones = [[ray_map[x] for x in c - tau] for c in f.max_cones if tau <= c]
    q = Fan(f.dim - len(tau), rays, cones, [f.labels[x] for x in adj])
    return q, ray_map


def fans_equal(f, g) -> bool:
    """Equality up to relabeling and reordering of rays."""
    if f.dim != g.dim or len(f.rays) != len(g.rays):
        return False
    if set(f.rays) != set(g.rays):
        return False
    fc = {frozenset(f.rays[i] for i in c) for c in f.max_cones}
    gc = {frozenset(g.rays[i] for i in c) for c in g.max_cones}
    return fc == gc


def general_facets(g, cone: frozenset) -> list:
    """Facets of a full-dimensional cone given by generator indices."""
    idx = sorted(cone)
    facets = set()
    for sub in itertools.combinations(idx, g.dim - 1):
        m = [g.rays[i] for i in sub]
        if lattice.rank(m) != g.dim - 1:
            continue
        (normal,) = lattice.kernel_basis(m)
        vals = [lattice.dot(normal, g.rays[i]) for i in idx]
        if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
            facets.add(frozenset(i for i, x in zip(idx, vals) if x == 0))
    return sorted(facets, key=sorted)


def validate_general(g) -> list:
    """Weaker validation for fans with non-simplicial cones."""
    v = []
    for i, r in enumerate(g.rays):
        if not any(r) or not lattice.is_primitive(r):
            v.append(f"ray {g.labels[i]} is not a primitive nonzero vector")
    count: dict = {}
    for c in g.max_cones:
        if lattice.rank([g.rays[i] for i in c]) != g.dim:
            v.append(f"cone {g.names(c)} is not full-dimensional")
            continue
        for fct in general_facets(g, c):
            count[fct] = count.get(fct, 0) + 1
    for fct, k in sorted(count.items(), key=lambda kv: sorted(kv[0])):
        if k != 2:
            v.append(f"facet {g.names(fct)} lies in {k} maximal cones")
    for a, b in itertools.permutations(g.max_cones, 2):
        if a < b:
            v.append(f"cone {g.names(a)} is contained in {g.names(b)}")
    return v


def fan_document(f) -> dict:
    return {
        "dim": f.dim,
        "rays": [list(r) for r in f.rays],
        "max_cones": [sorted(c) for c in f.max_cones],
        "labels": list(f.labels),
    }


def serialize_fan(f) -> str:
    return json.dumps(fan_document(f), sort_keys=True)


def fan_from_document(doc) -> Fan:
    if not isinstance(doc, dict):
        raise InputError("fan document must be a JSON object")
    try:
        dim = doc["dim"]
        rays = doc["rays"]
        cones = doc["max_cones"]
    except KeyError as e:
        raise InputError(f"fan document is missing {e.args[0]!r}") from None
    labels = doc.get("labels")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError("'dim' must be a positive integer")
    if not isinstance(rays, list) or not isinstance(cones, list):
        raise InputError("'rays' and 'max_cones' must be lists")
    for r in rays:
        if not isinstance(r, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise InputError(f"ray {r!r} is not a list of integers")
        if len(r) != dim:
            raise InputError(f"dimension mismatch: ray {r} in a fan of dimension {dim}")
        if not any(r):
            raise InputError("zero ray")
        if not lattice.is_primitive(r):
            raise InputError(f"non-primitive ray {r}")
    for c in cones:
        if not isinstance(c, list) or not all(isinstance(i, int) and 0 <= i < len(rays) for i in c):
            raise InputError(f"cone {c!r} must list valid ray indices")
        if len(set(c)) != len(c):
            raise InputError(f"cone {c!r} repeats a ray")
    if labels is not None and (not isinstance(labels, list) or len(labels) != len(rays)):
        raise InputError("'labels' must give one name per ray")
    return Fan(dim, rays, cones, labels)


def parse_fan(text: str) -> Fan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed fan document: {e}") from None
    return fan_from_document(doc)
