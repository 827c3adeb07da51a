"""Shared corpus and independent oracles for the test suite."""
import itertools
import random
from functools import lru_cache

from toricmori import catalog as cat
from toricmori import cycles, mori
from toricmori.fan import Fan


@lru_cache(maxsize=1)
def catalog_fans():
    return [(e.name, e.fan) for e in cat.catalog().values()]


@lru_cache(maxsize=1)
def random_fans():
    return cat.random_blowups()


def corpus():
    return catalog_fans() + random_fans()


def projective_corpus():
    return [(n, f) for n, f in corpus() if mori.is_projective(f)]


def centers(f: Fan):
    return sorted((c for c in f.cones if len(c) >= 2), key=lambda c: (len(c), sorted(c)))


def brute_primitive_collections(f: Fan):
    """Minimal non-faces by testing every subset against the maximal cones directly."""
    def spans_cone(s):
        return any(set(s) <= c for c in f.max_cones)

    out = set()
    for k in range(1, f.n_rays + 1):
        for s in itertools.combinations(range(f.n_rays), k):
            if not spans_cone(s) and all(spans_cone(t) for t in itertools.combinations(s, k - 1)):
                out.add(frozenset(s))
    return out


def sato_oracle(b):
    """Recompute the total fan from scratch and compare against the predicted transforms.

    Returns a list of failures (empty when every prediction holds).
    """
    from toricmori import contract
    from toricmori.blowup import sato_transform

    x = b.total
    colls = set(brute_primitive_collections(x))
    expected = {b.center_in_total}
    fails = []
    for s in sato_transform(b):
        if s.case in ("a", "b"):
            if s.p_prime not in colls:
                fails.append(("not primitive", s.case, sorted(s.p_prime)))
                continue
            if cycles.primitive_relation(x, s.p_prime).cls != s.predicted_relation:
                fails.append(("relation", s.case, sorted(s.p_prime)))
            expected.add(s.p_prime)
            continue
        src = frozenset(b.base_to_total[i] for i in s.source)
        if src not in colls:
            fails.append(("case c source lost", sorted(src)))
            continue
        if cycles.primitive_relation(x, src).cls != s.persisting_relation:
            fails.append(("case c relation changed", sorted(src)))
        expected.add(src)
        if s.p_prime in colls:
            expected.add(s.p_prime)
            r = cycles.primitive_relation(x, s.p_prime)
            if contract.is_contractible_criterio(x, r) and r.cls != s.conditional_relation:
                fails.append(("case c conditional relation", sorted(s.p_prime)))
        else:
            transformed = {
                (frozenset(b.base_to_total[i] for i in p) - b.center_in_total) | {b.new_ray}
                for p in cycles.primitive_collections(b.base)
            }
            ok = any(q <= s.p_prime and q in transformed for q in colls)
            if not ok:
                fails.append(("case c prime has no transformed sub-collection", sorted(s.p_prime)))
    if colls != expected:
        fails.append(("collection set", sorted(map(sorted, colls ^ expected))))
    return fails


def effective_classes_up_to(f: Fan, h, bound):
    """All nonnegative integral combinations of wall classes with h-degree at most ``bound``."""
    gens = list(mori.curve_cone(f).generators)
    zero = tuple(0 for _ in range(f.n_rays))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for c in frontier:
            for g in gens:
                s = tuple(a + b for a, b in zip(c, g.coeffs))
                if s not in seen and sum(a * b for a, b in zip(h, s)) <= bound:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    seen.discard(zero)
    return sorted(seen)


def brute_extremal_combinations(f: Fan, h, c):
    """Every multiplicity vector over the extremal classes summing to ``c``."""
    ext = mori.extremal_classes(f)
    deg = sum(a * b for a, b in zip(h, c))
    ranges = [range(deg // max(1, sum(a * b for a, b in zip(h, g.coeffs))) + 1) for g in ext]
    out = []
    for ms in itertools.product(*ranges):
        total = [sum(m * g.coeffs[i] for m, g in zip(ms, ext)) for i in range(f.n_rays)]
        if tuple(total) == tuple(c):
            out.append({g.coeffs: m for g, m in zip(ext, ms) if m})
    return out


def random_nef_divisors(f: Fan, count=40, seed=7, spread=3):
    """Integral invariant divisors whose support function is convex across every wall."""
    rng = random.Random(seed)
    walls = mori.curve_cone(f).generators
    found = [tuple(0 for _ in range(f.n_rays))]
    tries = 0
    while len(found) < count and tries < 4000:
        tries += 1
        d = tuple(rng.randint(-spread, spread) for _ in range(f.n_rays))
        if all(cycles.pair(d, g) >= 0 for g in walls):
            found.append(d)
    return found
