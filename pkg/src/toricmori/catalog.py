"""Built-in fans used as ground truth, plus a seeded corpus of random blow-ups."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .blowup import blow_up
from .cycles import primitive_collections
from .errors import InputError, InvalidFanError
from .fan import Fan, validate


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    fan: Fan
    provenance: str


def projective_space(n: int) -> Fan:
    if n < 1:
        raise InputError("projective space needs n >= 1")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = itertools.combinations(range(n + 1), n)
    labels = [f"e{i + 1}" for i in range(n)] + ["e0"]
    return Fan(n, rays, cones, labels)


def hirzebruch(a: int) -> Fan:
    if a < 0:
        raise InputError("Hirzebruch surfaces need a >= 0")
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    return Fan(2, rays, [(0, 1), (1, 2), (2, 3), (3, 0)], ["u1", "u2", "u3", "u4"])


def product(f: Fan, g: Fan) -> Fan:
    rays = [r + (0,) * g.dim for r in f.rays] + [(0,) * f.dim + r for r in g.rays]
    cones = [a | {i + f.n_rays for i in b} for a in f.max_cones for b in g.max_cones]
    labels = list(f.labels)
    for s in g.labels:
        while s in labels:
            s += "'"
        labels.append(s)
    return Fan(f.dim + g.dim, rays, cones, labels)


def fan_from_primitive_collections(dim: int, rays, collections, labels=None) -> Fan:
    """The fan whose maximal cones are the ``dim``-subsets containing no listed collection."""
    colls = [frozenset(c) for c in collections]
    cones = [c for c in itertools.combinations(range(len(rays)), dim)
             if not any(p <= set(c) for p in colls)]
    f = Fan(dim, rays, cones, labels)
    problems = validate(f, samples=200)
    if problems:
        raise InvalidFanError(problems)
    if set(primitive_collections(f)) != set(colls):
        raise InputError("the listed sets are not exactly the primitive collections of the resulting fan")
    return f


_Y_LABELS = ["e1", "e2", "e3", "e0", "f1", "f2", "f3"]
_Y_COLLECTIONS = [
    ("e1", "f2"), ("f1", "e3"), ("e2", "f3"), ("e0", "e2"),
    ("f1", "f2", "f3"), ("e0", "e1"), ("e0", "e3"),
]


def oda_nonprojective_3fold() -> Fan:
    """The smooth complete non-projective 3-fold of Picard number 4."""
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    e0 = (-1, -1, -1)
    f = [tuple(a + b for a, b in zip(e0, e)) for e in (e1, e2, e3)]
    rays = [e1, e2, e3, e0] + f
    idx = {s: i for i, s in enumerate(_Y_LABELS)}
    colls = [[idx[s] for s in c] for c in _Y_COLLECTIONS]
    return fan_from_primitive_collections(3, rays, colls, _Y_LABELS)


def esempio_total_space() -> Fan:
    """Blow-up of the non-projective 3-fold along the curve of the cone <f1, e2>."""
    return esempio_blowup().total


@lru_cache(maxsize=1)
def esempio_blowup():
    y = oda_nonprojective_3fold()
    return blow_up(y, ["f1", "e2"], label="x")


def blown_up_quadric_surface() -> Fan:
    """P1 x P1 blown up at one fixed point."""
    rays = [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)]
    return Fan(2, rays, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def blown_up_p3_line() -> Fan:
    return blow_up(projective_space(3), ["e1", "e2"], label="v").total


@lru_cache(maxsize=1)
def catalog() -> dict:
    p1 = projective_space(1)
    entries = [
        CatalogEntry("p1", p1, "standard fan"),
        CatalogEntry("p2", projective_space(2), "standard fan"),
        CatalogEntry("p3", projective_space(3), "standard fan"),
        CatalogEntry("p4", projective_space(4), "standard fan"),
        CatalogEntry("f0", hirzebruch(0), "Hirzebruch surface a=0"),
        CatalogEntry("f1", hirzebruch(1), "Hirzebruch surface a=1"),
        CatalogEntry("f2", hirzebruch(2), "Hirzebruch surface a=2"),
        CatalogEntry("f3", hirzebruch(3), "Hirzebruch surface a=3"),
        CatalogEntry("p2xp1", product(projective_space(2), p1), "product"),
        CatalogEntry("p1xp1xp1", product(product(p1, p1), p1), "product"),
        CatalogEntry("p1xp3", product(p1, projective_space(3)), "product"),
        CatalogEntry("bl-p1xp1", blown_up_quadric_surface(), "P1xP1 blown up at a fixed point"),
        CatalogEntry("bl-p3-line", blown_up_p3_line(), "P3 blown up along the line V(<e1,e2>)"),
        CatalogEntry("oda-y", oda_nonprojective_3fold(), "from its seven primitive collections"),
        CatalogEntry("esempio-x", esempio_total_space(), "oda-y blown up along V(<f1,e2>)"),
    ]
    return {e.name: e for e in entries}


def get(name: str) -> Fan:
    try:
        return catalog()[name].fan
    except KeyError:
        raise InputError(f"unknown catalog fan {name!r}; known: {', '.join(sorted(catalog()))}") from None


def random_blowups(count: int = 60, seed: int = 20240501, max_depth: int = 3, dims=(2, 3, 4)) -> list:
    """Seeded sequences of blow-ups of small catalog fans, as ``(name, fan)`` pairs."""
    bases = {
        2: ["p2", "f0", "f1", "f2"],
        3: ["p3", "p2xp1", "p1xp1xp1", "oda-y"],
        4: ["p4", "p1xp3"],
    }
    rng = random.Random(seed)
    out = []
    for k in range(count):
        dim = dims[k % len(dims)]
        name = rng.choice(bases[dim])
        f = get(name)
        steps = []
        for _ in range(rng.randint(1, max_depth)):
            cone = sorted(rng.choice(f.max_cones))
            size = rng.randint(2, len(cone))
            center = rng.sample(cone, size)
            label = f"b{len(steps) + 1}"
            steps.append("+".join(f.labels[i] for i in sorted(center)))
            f = blow_up(f, center, label=label).total
        out.append((f"{name}/" + "/".join(steps), f))
    return out
