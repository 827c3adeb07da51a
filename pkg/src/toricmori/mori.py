"""The cone of curves: projectivity, extremal classes and integral decompositions."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional

from . import lattice
from .cycles import (
    CycleClass,
    curve_class_from_wall,
    distinct_wall_classes,
    pair,
    restrict_class,
    wall_classes,
)
from .errors import DomainError, InputError, NotProjectiveError
from .fan import Fan, star_quotient


@dataclass(frozen=True)
class CurveCone:
    generators: tuple
    ambient_rank: int
    pointed: bool
    ample_witness: Optional[tuple]


@dataclass(frozen=True)
class Decomposition:
    cls: CycleClass
    terms: tuple  # ((CycleClass, mult), ...)

    def total(self) -> CycleClass:
        acc = CycleClass([0] * len(self.cls.coeffs), self.cls.fan)
        for c, m in self.terms:
            acc = acc + m * c
        return acc

    def to_json(self) -> dict:
        return {
            "class": self.cls.to_json(),
            "terms": [{"class": c.to_json(), "mult": m} for c, m in self.terms],
        }


def _decomposition(c: CycleClass, counts: Counter) -> Decomposition:
    f = c.fan
    terms = tuple((CycleClass(k, f), m) for k, m in sorted(counts.items()) if m)
    d = Decomposition(c, terms)
    if d.total() != c:
        raise AssertionError(f"decomposition of {c} does not sum to it")
    return d


@lru_cache(maxsize=256)
def curve_cone(f: Fan) -> CurveCone:
    gens = distinct_wall_classes(f)
    witness = lattice.lp_feasible([(g.coeffs, lattice.GE, 1) for g in gens], dim=f.n_rays)
    return CurveCone(gens, f.picard_number, witness is not None, witness)


def is_projective(f: Fan) -> bool:
    return curve_cone(f).pointed


def _require_projective(f: Fan):
    if not is_projective(f):
        raise NotProjectiveError("the fan is not projective: its cone of curves is not strictly convex")


@lru_cache(maxsize=256)
def ample_divisor(f: Fan) -> tuple:
    """Integral divisor (one coefficient per ray) positive on every wall class."""
    cone = curve_cone(f)
    if not cone.pointed:
        raise NotProjectiveError("the fan is not projective: no ample divisor exists")
    den = lcm(*(Fraction(x).denominator for x in cone.ample_witness))
    h = tuple(int(x * den) for x in cone.ample_witness)
    assert all(pair(h, g) >= 1 for g in cone.generators)
    return h


def _proportional(a: CycleClass, b: CycleClass) -> bool:
    return lattice.primitive_part(a.coeffs) == lattice.primitive_part(b.coeffs)


def is_extremal(f: Fan, c: CycleClass) -> bool:
    _require_projective(f)
    if c.is_zero():
        raise InputError("the zero class spans no ray")
    gens = curve_cone(f).generators
    if lattice.in_rational_cone([g.coeffs for g in gens], c.coeffs) is None:
        raise DomainError(f"{c} is not in the cone of curves")
    others = [g.coeffs for g in gens if not _proportional(g, c)]
    return lattice.in_rational_cone(others, c.coeffs) is None


@lru_cache(maxsize=256)
def extremal_classes(f: Fan) -> tuple:
    _require_projective(f)
    out = {}
    for g in curve_cone(f).generators:
        p = g.primitive()
        if p.coeffs not in out and is_extremal(f, p):
            out[p.coeffs] = p
    return tuple(out[k] for k in sorted(out))


def wall_expansion(f: Fan, c: CycleClass, h: Optional[tuple] = None) -> Counter:
    """Nonnegative integral combination of wall classes equal to ``c``."""
    if h is None:
        h = ample_divisor(f)
    found = integral_expansion(distinct_wall_classes(f), c, h)
    if found is None:
        raise DomainError(f"{c} is not a nonnegative integral combination of invariant curves")
    return found


def integral_expansion(generators, c: CycleClass, h: tuple) -> Optional[Counter]:
    """Some nonnegative integral combination of ``generators`` equal to ``c``, or ``None``.

    Depth-first search; the multiplicity of each generator is bounded by the
    remaining ``h``-degree and branches whose remainder leaves the rational
    cone of the unused generators are cut.
    """
    gens = sorted(generators, key=lambda g: (-pair(h, g), g.coeffs))
    if c.is_zero():
        return Counter()
    for g in gens:
        if g == c:
            return Counter({g.coeffs: 1})
    if pair(h, c) <= 0:
        return None
    degs = [pair(h, g) for g in gens]
    dead = set()

    def search(j, rem):
        if not any(rem):
            return []
        if j == len(gens) or (j, rem) in dead:
            return None
        if lattice.in_rational_cone([g.coeffs for g in gens[j:]], rem) is None:
            dead.add((j, rem))
            return None
        for m in range(lattice.dot(h, rem) // degs[j], -1, -1):
            nxt = tuple(r - m * x for r, x in zip(rem, gens[j].coeffs))
            sub = search(j + 1, nxt)
            if sub is not None:
                return ([(gens[j].coeffs, m)] if m else []) + sub
        dead.add((j, rem))
        return None

    found = search(0, c.coeffs)
    return None if found is None else Counter(dict(found))


# -- surfaces ---------------------------------------------------------------

def _ray_curve(s: Fan, r: int) -> CycleClass:
    return curve_class_from_wall(s, frozenset([r]))


def _minus_one_ray(s: Fan) -> Optional[int]:
    for r in range(s.n_rays):
        if _ray_curve(s, r).coeffs[r] == -1:
            return r
    return None


def _blow_down_surface(s: Fan, e: int):
    """Contract the (-1)-curve ``V(e)``; returns the smaller fan and the index map."""
    (x,), (xp,) = [tuple(c - {e}) for c in s.max_cones if e in c]
    keep = [i for i in range(s.n_rays) if i != e]
    index = {i: k for k, i in enumerate(keep)}
    cones = [[index[i] for i in c] for c in s.max_cones if e not in c]
    cones.append([index[x], index[xp]])
    t = Fan(2, [s.rays[i] for i in keep], cones, [s.labels[i] for i in keep])
    return t, index, x, xp


def _surface_base_case(s: Fan, c: CycleClass) -> Counter:
    ext = extremal_classes(s)
    if len(ext) == 1:
        (g,) = ext
        m = lattice.solve_rational([[x] for x in g.coeffs], c.coeffs)
        sol = [m[0]] if m else None
    else:
        m = [[g.coeffs[i] for g in ext] for i in range(s.n_rays)]
        sub = _independent_rows(m)
        sol = lattice.solve_rational([m[i] for i in sub], [c.coeffs[i] for i in sub])
        if sol is not None and any(
            lattice.dot(m[i], sol) != c.coeffs[i] for i in range(s.n_rays)
        ):
            sol = None
    if sol is None or any(x < 0 or x.denominator != 1 for x in sol):
        raise AssertionError(f"{c} has no nonnegative integral expansion on a minimal surface")
    return Counter({g.coeffs: int(x) for g, x in zip(ext, sol) if x})


def _independent_rows(m):
    rows = []
    for i in range(len(m)):
        if lattice.rank([m[j] for j in rows + [i]]) > len(rows):
            rows.append(i)
    return rows


def _pull_back(s: Fan, t: Fan, index: dict, x: int, xp: int, e: int, counts: Counter) -> Counter:
    """Pull extremal classes of ``t`` back to ``s`` through invariant representatives."""
    back = {k: i for i, k in index.items()}
    through_p = (index[x], index[xp])
    out = Counter()
    exc = 0
    for key, m in counts.items():
        reps = [r for r in range(t.n_rays) if _ray_curve(t, r).coeffs == key]
        reps.sort(key=lambda r: (r not in through_p, r))
        r = reps[0]
        out[_ray_curve(s, back[r]).coeffs] += m
        if r in through_p:
            exc += m
    if exc:
        out[_ray_curve(s, e).coeffs] += exc
    return out


def _decompose_curve(s: Fan, r: int) -> Counter:
    c = _ray_curve(s, r)
    if is_extremal(s, c):
        return Counter({c.coeffs: 1})
    if s.n_rays <= 4:
        return _surface_base_case(s, c)
    e = _minus_one_ray(s)
    if e is None:
        raise AssertionError("a smooth complete surface with five or more rays has a (-1)-curve")
    t, index, x, xp = _blow_down_surface(s, e)
    if r not in (x, xp):
        below = _decompose_curve(t, index[r])
        out = _pull_back(s, t, index, x, xp, e, below)
    else:
        other = xp if r == x else x
        diff = _ray_curve(t, index[r]) - _ray_curve(t, index[other])
        below = _decompose_class(t, diff)
        out = _pull_back(s, t, index, x, xp, e, below)
        out[_ray_curve(s, other).coeffs] += 1
    for key in out:
        if not is_extremal(s, CycleClass(key, s)):
            raise AssertionError(f"non-extremal term {key} in a surface decomposition")
    return out


def _decompose_class(s: Fan, c: CycleClass) -> Counter:
    out = Counter()
    for key, m in wall_expansion(s, c).items():
        (r,) = [i for i in range(s.n_rays) if _ray_curve(s, i).coeffs == key][:1]
        for k, v in _decompose_curve(s, r).items():
            out[k] += m * v
    return out


def decompose_surface(s: Fan, c: CycleClass) -> Decomposition:
    """Write a class on a smooth complete surface as a positive integral sum of extremal classes."""
    if s.dim != 2:
        raise InputError("decompose_surface needs a 2-dimensional fan")
    if c.fan is not None and c.fan != s:
        raise InputError("class belongs to a different fan")
    c = CycleClass(c.coeffs, s)
    return _decomposition(c, _decompose_class(s, c))


# -- arbitrary dimension ----------------------------------------------------

def _decompose_wall_class(f: Fan, c: CycleClass, h: tuple, memo: dict) -> Counter:
    from .contract import is_contractible_class

    if c.coeffs in memo:
        return memo[c.coeffs]
    if is_contractible_class(f, c):
        memo[c.coeffs] = Counter({c.coeffs: 1})
        return memo[c.coeffs]
    deg = pair(h, c)
    classes = wall_classes(f)
    for w in sorted(classes, key=sorted):
        if classes[w] != c:
            continue
        for z in sorted(w):
            tau = w - {z}
            surf, ray_map = star_quotient(f, tau)
            rc = restrict_class(f, tau, c)
            if is_extremal(surf, rc):
                continue
            pieces = decompose_surface(surf, rc)
            back = {k: i for i, k in ray_map.items()}
            out = Counter()
            for term, m in pieces.terms:
                (r,) = [i for i in range(surf.n_rays) if _ray_curve(surf, i) == term][:1]
                lifted = classes[tau | {back[r]}]
                if pair(h, lifted) >= deg:
                    raise AssertionError("surface decomposition failed to lower the degree")
                for k, v in _decompose_wall_class(f, lifted, h, memo).items():
                    out[k] += m * v
            memo[c.coeffs] = out
            return out
    raise AssertionError(f"{c} is not contractible yet extremal in every invariant surface")


def decompose_contractible(f: Fan, c: CycleClass, prefer_extremal: bool = True) -> Decomposition:
    """Write an effective class as a positive integral sum of contractible classes.

    With ``prefer_extremal`` an expansion into extremal classes (which are
    contractible) is tried first; otherwise, or when none exists, each wall
    class is broken up inside invariant surfaces until every piece is
    contractible.
    """
    _require_projective(f)
    c = CycleClass(c.coeffs, f)
    h = ample_divisor(f)
    if prefer_extremal:
        found = integral_expansion(extremal_classes(f), c, h)
        if found is not None:
            return _decomposition(c, found)
    memo: dict = {}
    out = Counter()
    for key, m in wall_expansion(f, c, h).items():
        for k, v in _decompose_wall_class(f, CycleClass(key, f), h, memo).items():
            out[k] += m * v
    return _decomposition(c, out)


def minimal_degree_classes(f: Fan, h) -> tuple:
    """Wall classes of least ``h``-degree; each is checked to be extremal."""
    _require_projective(f)
    h = tuple(int(x) for x in h)
    if len(h) != f.n_rays:
        raise InputError("divisor needs one coefficient per ray")
    gens = curve_cone(f).generators
    degs = [pair(h, g) for g in gens]
    if any(d <= 0 for d in degs):
        raise DomainError("divisor is not ample")
    low = min(degs)
    out = tuple(g for g, d in zip(gens, degs) if d == low)
    for g in out:
        if not is_extremal(f, g):
            raise AssertionError(f"minimal-degree class {g} is not extremal")
    return low, out
