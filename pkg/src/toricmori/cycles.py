"""One-cycles, intersection numbers and primitive relations.

A 1-cycle class is stored as its vector of intersection numbers with the
invariant divisors, one integer per ray; the vector is an integral linear
relation among the rays, and every integral relation arises this way.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from . import lattice
from .errors import DomainError, InputError
from .fan import Fan, Wall, locate_with_coordinates, star_quotient, walls, wall_opposites


@dataclass(frozen=True)
class CycleClass:
    coeffs: tuple
    fan: Optional[Fan] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(x) for x in self.coeffs))
        if self.fan is not None:
            if len(self.coeffs) != self.fan.n_rays:
                raise InputError(f"class has {len(self.coeffs)} coefficients, fan has {self.fan.n_rays} rays")
            total = [0] * self.fan.dim
            for c, r in zip(self.coeffs, self.fan.rays):
                if c:
                    for i, x in enumerate(r):
                        total[i] += c * x
            if any(total):
                raise InputError(f"{list(self.coeffs)} is not a relation among the rays")

    def _wrap(self, coeffs):
        return CycleClass(coeffs, self.fan)

    def __add__(self, other):
        return self._wrap(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return self._wrap(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return self._wrap(-a for a in self.coeffs)

    def __mul__(self, m: int):
        return self._wrap(m * a for a in self.coeffs)

    __rmul__ = __mul__

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def content(self) -> int:
        return lattice.content(self.coeffs)

    def primitive(self) -> "CycleClass":
        return self._wrap(lattice.primitive_part(self.coeffs))

    def relation_string(self, labels=None) -> str:
        labels = labels or (self.fan.labels if self.fan else [f"u{i}" for i in range(len(self.coeffs))])

        def side(pairs):
            if not pairs:
                return "0"
            return "+".join((f"{m}{labels[i]}" if m != 1 else labels[i]) for i, m in pairs)

        plus = [(i, c) for i, c in enumerate(self.coeffs) if c > 0]
        minus = [(i, -c) for i, c in enumerate(self.coeffs) if c < 0]
        return f"{side(plus)}={side(minus)}"

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs)}

    def __str__(self):
        return self.relation_string()


def intersect_divisor(c: CycleClass, ray) -> int:
    """Intersection number of ``c`` with the invariant divisor of ``ray`` (index or label)."""
    if isinstance(ray, str):
        if c.fan is None:
            raise InputError("label lookup needs a class attached to a fan")
        ray = c.fan.index_of(ray)
    return c.coeffs[ray]


def anticanonical_degree(c: CycleClass) -> int:
    return sum(c.coeffs)


def pair(divisor, c: CycleClass):
    """Intersection of a torus-invariant divisor (coefficients per ray) with ``c``."""
    return lattice.dot(divisor, c.coeffs)


def cycle_lattice_basis(f: Fan) -> list:
    m = f.matrix(range(f.n_rays))
    return [CycleClass(v, f) for v in lattice.kernel_basis(m, cols=f.n_rays)]


def curve_class_from_wall(f: Fan, w) -> CycleClass:
    """Class of the invariant curve of a wall.

    With opposite rays ``a`` and ``b`` this is the relation
    ``a + b + sum c_i w_i = 0``.
    """
    if not isinstance(w, Wall):
        w = _wall_for(f, frozenset(w))
    a, b = wall_opposites(f, w)
    coords = f.coordinates(f.max_cones[w.left], f.rays[b])
    if coords[a] != -1:
        raise DomainError(f"wall {f.names(w.cone)} is not a smooth wall")
    coeffs = [0] * f.n_rays
    coeffs[a] = 1
    coeffs[b] = 1
    for i in w.cone:
        coeffs[i] = -int(coords[i])
    return CycleClass(coeffs, f)


def _wall_for(f: Fan, cone: frozenset) -> Wall:
    adj = f.wall_map.get(cone)
    if adj is None or len(adj) != 2:
        raise InputError(f"{f.names(cone)} is not a wall of the fan")
    return Wall(cone, adj[0], adj[1])


@lru_cache(maxsize=256)
def wall_classes(f: Fan) -> dict:
    """Map from each wall cone to the class of its invariant curve."""
    return {w.cone: curve_class_from_wall(f, w) for w in walls(f)}


@lru_cache(maxsize=256)
def distinct_wall_classes(f: Fan) -> tuple:
    seen = {}
    for cone in sorted(wall_classes(f), key=sorted):
        c = wall_classes(f)[cone]
        seen.setdefault(c.coeffs, c)
    return tuple(sorted(seen.values(), key=lambda c: c.coeffs))


@lru_cache(maxsize=256)
def primitive_collections(f: Fan) -> tuple:
    """All minimal non-faces, ordered by size and then lexicographically."""
    found = []
    for size in range(2, f.dim + 2):
        candidates = set()
        for base in f.cones:
            if len(base) != size - 1:
                continue
            top = max(base)
            for x in range(top + 1, f.n_rays):
                s = base | {x}
                if s in f.cones:
                    continue
                if all((s - {y}) in f.cones for y in s):
                    candidates.add(s)
        found.extend(sorted(candidates, key=sorted))
    return tuple(found)


@dataclass(frozen=True)
class PrimitiveRelation:
    collection: frozenset
    focus: frozenset
    neg_coeffs: tuple
    cls: CycleClass
    degree: int

    @property
    def h(self) -> int:
        return len(self.collection)

    @property
    def k(self) -> int:
        return len(self.focus)

    @property
    def support(self) -> frozenset:
        return self.collection | self.focus

    @classmethod
    def from_class(cls, c: CycleClass) -> "PrimitiveRelation":
        plus = frozenset(i for i, x in enumerate(c.coeffs) if x > 0)
        focus = frozenset(i for i, x in enumerate(c.coeffs) if x < 0)
        if any(c.coeffs[i] != 1 for i in plus):
            raise DomainError(f"{c} has positive coefficients other than 1")
        neg = tuple(-c.coeffs[i] for i in sorted(focus))
        return cls(plus, focus, neg, c, len(plus) - sum(neg))

    def to_json(self) -> dict:
        f = self.cls.fan
        return {
            "plus": f.names(self.collection),
            "minus": [[f.labels[i], a] for i, a in zip(sorted(self.focus), self.neg_coeffs)],
            "degree": self.degree,
        }

    def __str__(self):
        return self.cls.relation_string()


def primitive_relation(f: Fan, collection: Iterable[int]) -> PrimitiveRelation:
    p = frozenset(collection)
    total = [sum(f.rays[i][j] for i in p) for j in range(f.dim)]
    focus, coords = locate_with_coordinates(f, total)
    if focus & p:
        raise DomainError(
            f"collection {f.names(p)} meets its focus cone {f.names(focus)}; "
            "this fan violates the disjointness assumption"
        )
    coeffs = [0] * f.n_rays
    for i in p:
        coeffs[i] = 1
    neg = []
    for i in sorted(focus):
        a = coords[i]
        if a.denominator != 1:
            raise DomainError(f"non-integral coefficient {a} in the relation of {f.names(p)}")
        coeffs[i] = -int(a)
        neg.append(int(a))
    cls = CycleClass(coeffs, f)
    return PrimitiveRelation(p, focus, tuple(neg), cls, len(p) - sum(neg))


@lru_cache(maxsize=256)
def primitive_relations(f: Fan) -> tuple:
    return tuple(primitive_relation(f, p) for p in primitive_collections(f))


def relation_with_class(f: Fan, c: CycleClass) -> Optional[PrimitiveRelation]:
    for r in primitive_relations(f):
        if r.cls == c:
            return r
    return None


def restrict_class(f: Fan, tau, c: CycleClass) -> CycleClass:
    """Image of ``c`` in the fan of ``V(tau)``; coefficients on ``tau`` are dropped."""
    tau = frozenset(tau)
    q, ray_map = star_quotient(f, tau)
    coeffs = [0] * q.n_rays
    for i, x in enumerate(c.coeffs):
        if x == 0 or i in tau:
            continue
        if i not in ray_map:
            raise InputError(
                f"class {c} involves ray {f.labels[i]} outside the star of {f.names(tau)}"
            )
        coeffs[ray_map[i]] = x
    try:
        return CycleClass(coeffs, q)
    except InputError:
        raise InputError(f"class {c} does not restrict to V({','.join(f.names(tau))})") from None


def negative_rays_span_cone(f: Fan, c: CycleClass) -> bool:
    """Sufficient condition for effectivity: the negative-coefficient rays span a cone."""
    return f.is_cone(i for i, x in enumerate(c.coeffs) if x < 0)


def in_curve_cone(f: Fan, c: CycleClass):
    """Rational witness that ``c`` is a nonnegative combination of wall classes, or ``None``."""
    gens = distinct_wall_classes(f)
    return lattice.in_rational_cone([g.coeffs for g in gens], c.coeffs)


_TERM = re.compile(r"^(\d*)\*?([A-Za-z_][A-Za-z0-9_'.]*)$")


def parse_class(f: Fan, text: str) -> CycleClass:
    """Parse ``"e1+f2=f1+e2"``, ``"f1+f2+f3=2e0"`` or a coefficient vector ``"1,0,-1"``/``"[1,0,-1]"``."""
    s = text.strip().replace(" ", "")
    if "=" not in s:
        body = s.strip("[]()")
        try:
            vec = [int(x) for x in body.split(",") if x != ""]
        except ValueError:
            raise InputError(f"cannot parse class {text!r}") from None
        return CycleClass(vec, f)
    lhs, _, rhs = s.partition("=")
    if "=" in rhs:
        raise InputError(f"class {text!r} has more than one '='")
    coeffs = [0] * f.n_rays
    for side, sign in ((lhs, 1), (rhs, -1)):
        if side in ("", "0"):
            continue
        for term in side.split("+"):
            m = _TERM.match(term)
            if not m:
                raise InputError(f"cannot parse term {term!r} in {text!r}")
            mult = int(m.group(1)) if m.group(1) else 1
            coeffs[f.index_of(m.group(2))] += sign * mult
    return CycleClass(coeffs, f)
