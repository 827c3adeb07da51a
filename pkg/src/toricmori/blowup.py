"""Smooth equivariant blow-ups along invariant subvarieties and their bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .contract import contract, contractible_classes
from .cycles import CycleClass, primitive_relations
from .errors import DomainError, InputError, InvalidFanError
from .fan import Fan, fan_document, fans_equal, validate


@dataclass(frozen=True)
class BlowUp:
    base: Fan
    total: Fan
    center: frozenset          # indices in base
    new_ray: int               # index in total
    delta: CycleClass          # on total
    base_to_total: tuple       # base index -> total index

    @property
    def center_in_total(self) -> frozenset:
        return frozenset(self.base_to_total[i] for i in self.center)

    def lift(self, c: CycleClass) -> CycleClass:
        """A base class written over the total fan's rays, zero on the new ray."""
        coeffs = [0] * self.total.n_rays
        for i, x in enumerate(c.coeffs):
            coeffs[self.base_to_total[i]] = x
        return CycleClass(coeffs, self.total)

    def to_json(self) -> dict:
        return {
            "center": self.base.names(self.center),
            "new_ray": self.total.labels[self.new_ray],
            "delta": self.delta.to_json(),
            "base": fan_document(self.base),
            "total": fan_document(self.total),
        }


def _fresh_label(labels, stem="x") -> str:
    if stem not in labels:
        return stem
    k = 1
    while f"{stem}{k}" in labels:
        k += 1
    return f"{stem}{k}"


def blow_up(f: Fan, center, label: Optional[str] = None) -> BlowUp:
    """Star subdivision of ``f`` at the sum of the center's rays."""
    tau = frozenset(f.index_of(c) if isinstance(c, str) else int(c) for c in center)
    if len(tau) < 2:
        raise InputError("a blow-up center needs at least two rays")
    if not f.is_cone(tau):
        raise InputError(f"{sorted(tau)} is not a cone of the fan")
    v = tuple(sum(f.rays[i][j] for i in tau) for j in range(f.dim))
    new = f.n_rays
    cones = []
    for c in f.max_cones:
        if tau <= c:
            cones.extend((c - {i}) | {new} for i in tau)
        else:
            cones.append(c)
    label = label or _fresh_label(f.labels)
    total = Fan(f.dim, f.rays + (v,), cones, f.labels + (label,))
    problems = validate(total, samples=0, pairwise=False)
    if problems:
        raise InvalidFanError(problems)
    coeffs = [0] * total.n_rays
    for i in tau:
        coeffs[i] = 1
    coeffs[new] = -1
    delta = CycleClass(coeffs, total)
    return BlowUp(f, total, tau, new, delta, tuple(range(f.n_rays)))


def detect_blow_downs(f: Fan) -> tuple:
    """Contractible relations whose contraction is a smooth blow-down."""
    return tuple(r for r in contractible_classes(f) if r.k == 1 and r.neg_coeffs == (1,))


def blow_down(f: Fan, r) -> BlowUp:
    """Contract a blow-down relation and return the blow-up it inverts."""
    con = contract(f, r)
    rel = con.relation
    if not con.profile.target_smooth or con.profile.kind != "birational":
        raise DomainError(f"{rel} does not contract to a smooth blow-down")
    base = con.target
    (y,) = rel.focus
    index = {s: i for i, s in enumerate(base.labels)}
    base_to_total = tuple(f.index_of(s) for s in base.labels)
    center = frozenset(index[f.labels[i]] for i in rel.collection)
    check = blow_up(base, center, label=f.labels[y])
    assert fans_equal(check.total, f)
    return BlowUp(base, f, center, y, rel.cls, base_to_total)


def pushforward(b: BlowUp, c: CycleClass) -> CycleClass:
    """Image of a total-space class in the base: add ``delta`` to clear the new ray, then drop it."""
    lam = c.coeffs[b.new_ray]
    full = [x + lam * d for x, d in zip(c.coeffs, b.delta.coeffs)]
    assert full[b.new_ray] == 0
    return CycleClass([full[b.base_to_total[i]] for i in range(b.base.n_rays)], b.base)


@dataclass(frozen=True)
class SatoCase:
    source: frozenset                  # collection of the base
    case: str                          # "a", "b" or "c"
    p_prime: frozenset                 # in total indices
    predicted_relation: Optional[CycleClass]
    persisting_relation: Optional[CycleClass] = None    # case c: the relation of P itself
    conditional_relation: Optional[CycleClass] = None   # case c: r(P') whenever it is contractible

    def to_json(self, b: BlowUp) -> dict:
        out = {
            "source": b.base.names(self.source),
            "case": self.case,
            "p_prime": b.total.names(self.p_prime),
        }
        if self.predicted_relation is not None:
            out["predicted"] = self.predicted_relation.relation_string()
        if self.persisting_relation is not None:
            out["persisting"] = self.persisting_relation.relation_string()
        if self.conditional_relation is not None:
            out["if_contractible"] = self.conditional_relation.relation_string()
        return out


def sato_transform(b: BlowUp) -> tuple:
    """Classify each base collection by how it meets the center and predict its transform."""
    out = []
    center = b.center
    for rel in primitive_relations(b.base):
        p = rel.collection
        meet = p & center
        lifted = b.lift(rel.cls)
        p_in_total = frozenset(b.base_to_total[i] for i in p)
        prime = frozenset(b.base_to_total[i] for i in p - center) | {b.new_ray}
        if not meet:
            c = min(abs(rel.cls.coeffs[i]) for i in center)
            out.append(SatoCase(p, "a", p_in_total, lifted + c * b.delta))
        elif meet == center:
            out.append(SatoCase(p, "b", prime, lifted - b.delta))
        else:
            out.append(SatoCase(p, "c", prime, None, lifted, lifted - b.delta))
    return tuple(out)


def sato_expected_collections(b: BlowUp, cases=None) -> tuple:
    """The collections of the total fan predicted from the base: the center plus each transform."""
    cases = cases if cases is not None else sato_transform(b)
    return tuple([b.center_in_total] + [
        s.p_prime for s in cases if s.case in "ab"
    ] + [frozenset(b.base_to_total[i] for i in s.source) for s in cases if s.case == "c"])


@dataclass(frozen=True)
class PioveReport:
    checks: tuple   # ((name, passed, witnesses), ...)
    strict: bool    # base contractible classes form a proper subset of the images

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "strict_containment": self.strict,
            "checks": [{"name": n, "passed": ok, "witnesses": w} for n, ok, w in self.checks],
        }


def verify_piove(b: BlowUp) -> PioveReport:
    """Check how contractible classes of the total space push forward to the base."""
    cx = [r for r in contractible_classes(b.total) if r.cls != b.delta]
    cy = {r.cls.coeffs for r in contractible_classes(b.base)}
    base_rel = {r.cls.coeffs for r in primitive_relations(b.base)}
    images = [pushforward(b, r.cls) for r in cx]
    keys = [c.coeffs for c in images]

    dup = sorted({str(c) for c in images if keys.count(c.coeffs) > 1})
    not_primitive = [f"{r} -> {c}" for r, c in zip(cx, images) if c.coeffs not in base_rel]
    missing = [
        r.cls.relation_string() for r in contractible_classes(b.base) if r.cls.coeffs not in keys
    ]
    bad_moreover = []
    center = b.center_in_total
    for r, c in zip(cx, images):
        if c.coeffs in cy:
            continue
        ok = r.cls.coeffs[b.new_ray] == 1 and any(r.cls.coeffs[i] == -1 for i in center)
        if not ok:
            bad_moreover.append(str(r))
    checks = (
        ("injective", not dup, dup),
        ("images_primitive", not not_primitive, not_primitive),
        ("base_covered", not missing, missing),
        ("non_contractible_images", not bad_moreover, bad_moreover),
    )
    strict = set(keys) > cy
    return PioveReport(checks, strict)
