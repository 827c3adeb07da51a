"""``toric`` command-line front end.  Every verb prints one JSON document."""
from __future__ import annotations

import argparse
import json
import sys

from . import blowup, catalog, contract, cycles, fan, mori
from .errors import DomainError, InputError, InvalidFanError

VERBS = (
    "validate", "collections", "relations", "contractible", "extremal", "projective",
    "contract", "blowup", "blowdown", "decompose", "pushforward", "sato", "piove", "catalog",
)


def _class_json(c: cycles.CycleClass) -> dict:
    return {"coeffs": list(c.coeffs), "relation": c.relation_string()}


def _relation_json(r: cycles.PrimitiveRelation) -> dict:
    out = r.to_json()
    out["relation"] = r.cls.relation_string()
    return out


def _load(args, check=True) -> fan.Fan:
    if args.catalog and args.fan:
        raise InputError("give either --catalog or --fan, not both")
    if args.catalog:
        return catalog.get(args.catalog)
    if not args.fan:
        raise InputError("an input fan is required: --catalog NAME or --fan PATH")
    try:
        with open(args.fan, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {args.fan}: {e.strerror}") from None
    f = fan.parse_fan(text)
    if check:
        problems = fan.validate(f)
        if problems:
            raise InvalidFanError(problems)
    return f


def _class(args, f) -> cycles.CycleClass:
    if not args.cls:
        raise InputError("this verb needs --class")
    return cycles.parse_class(f, args.cls)


def _center(args, f) -> list:
    if not args.center:
        raise InputError("this verb needs --center")
    return [f.index_of(s.strip()) for s in args.center.split(",") if s.strip()]


def _blow(args):
    f = _load(args)
    return blowup.blow_up(f, _center(args, f))


def cmd_validate(args):
    f = _load(args, check=False)
    problems = fan.validate(f)
    return {"valid": not problems, "violations": problems}


def cmd_collections(args):
    f = _load(args)
    return {"collections": [f.names(p) for p in cycles.primitive_collections(f)]}


def cmd_relations(args):
    f = _load(args)
    return {"relations": [_relation_json(r) for r in cycles.primitive_relations(f)]}


def cmd_contractible(args):
    f = _load(args)
    rels = cycles.primitive_relations(f)
    good = set(contract.contractible_classes(f))
    items = []
    for r in rels:
        d = _relation_json(r)
        d["contractible"] = r in good
        items.append(d)
    return {"relations": items, "contractible": len(good), "total": len(rels)}


def cmd_extremal(args):
    f = _load(args)
    return {"extremal": [_class_json(c) for c in mori.extremal_classes(f)]}


def cmd_projective(args):
    f = _load(args)
    ok = mori.is_projective(f)
    return {"projective": ok, "ample_divisor": list(mori.ample_divisor(f)) if ok else None}


def cmd_contract(args):
    f = _load(args)
    return contract.contract(f, _class(args, f)).to_json()


def cmd_blowup(args):
    b = _blow(args)
    out = b.to_json()
    out["delta"] = _class_json(b.delta)
    return out


def cmd_blowdown(args):
    f = _load(args)
    if not args.cls:
        return {"blow_downs": [_relation_json(r) for r in blowup.detect_blow_downs(f)]}
    b = blowup.blow_down(f, _class(args, f))
    out = b.to_json()
    out["delta"] = _class_json(b.delta)
    return out


def cmd_decompose(args):
    f = _load(args)
    c = _class(args, f)
    d = mori.decompose_contractible(f, c, prefer_extremal=args.method == "extremal")
    return {
        "class": _class_json(d.cls),
        "terms": [{"class": _class_json(t), "mult": m} for t, m in d.terms],
    }


def cmd_pushforward(args):
    b = _blow(args)
    c = cycles.parse_class(b.total, args.cls) if args.cls else None
    if c is None:
        raise InputError("this verb needs --class (written over the blown-up fan)")
    return {"class": _class_json(c), "image": _class_json(blowup.pushforward(b, c))}


def cmd_sato(args):
    b = _blow(args)
    return {"cases": [s.to_json(b) for s in blowup.sato_transform(b)]}


def cmd_piove(args):
    return blowup.verify_piove(_blow(args)).to_json()


def cmd_catalog(args):
    if args.catalog:
        return fan.fan_document(catalog.get(args.catalog))
    return {"catalog": [{"name": e.name, "provenance": e.provenance, "dim": e.fan.dim,
                         "rays": e.fan.n_rays} for e in catalog.catalog().values()]}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric", description="Cones of curves and contractions of smooth complete toric varieties.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--catalog", metavar="NAME", help="built-in fan (see `toric catalog`)")
    p.add_argument("--fan", metavar="PATH", help="fan document (JSON)")
    p.add_argument("--class", dest="cls", metavar="EXPR", help='class as "a+b=2c" or a coefficient vector')
    p.add_argument("--center", metavar="R1,R2,...", help="ray labels of a blow-up center")
    p.add_argument("--method", choices=("extremal", "descent"), default="extremal",
                   help="decompose: try extremal classes first, or always descend through surfaces")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="compact JSON (default)")
    fmt.add_argument("--pretty", action="store_true", help="indented JSON")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    handler = globals()[f"cmd_{args.verb}"]
    try:
        result, code = handler(args), 0
    except InputError as e:
        result, code = {"error": {"kind": "input", "message": str(e)}}, 1
    except DomainError as e:
        result, code = {"error": {"kind": "domain", "type": type(e).__name__, "message": str(e)}}, 2
    indent = 2 if args.pretty else None
    out.write(json.dumps(result, sort_keys=True, indent=indent) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
