"""JSON encoding of every value the command line reads or writes.

Each encoded object carries a ``"type"`` tag so :func:`from_json` can rebuild
it.  Output uses sorted keys and sorted collections, so equal values always
serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from clonekit.catalog import catalog_entry, ell_family
from clonekit.characteristic import Characteristic, NTupleRelation
from clonekit.clone import ArityVerdict, FunctionSet, GeneratorSet, TraceSet, symmetric_closure
from clonekit.conditions import DeltaReport
from clonekit.core import CellFamily, FiniteFunction
from clonekit.decomposition import FamilyReport, SubsetFamily
from clonekit.errors import InputError
from clonekit.galois import QSet
from clonekit.post import PiFamily, PostClassId
from clonekit.verify import VerificationReport, plain


def tuples(value: Any) -> Any:
    """Lists back to tuples, recursively."""
    if isinstance(value, list):
        return tuple(tuples(v) for v in value)
    return value


def _function(f: FiniteFunction) -> dict:
    return {"type": "function", "k": f.k, "n": f.n, "table": list(f.table)}


def _family(fam: CellFamily) -> dict:
    return {"type": "family", "k": fam.k, "n": fam.n, "allowed": list(fam.allowed)}


def _relation(rel: NTupleRelation) -> dict:
    return {"type": "relation", "n": rel.n, "k": rel.k, "pairs": plain(rel.sorted_pairs())}


def _verdict(r: ArityVerdict) -> dict:
    return {"value": r.value, "exact": r.exact}


def _pi(pi: PiFamily) -> dict:
    return {
        "type": "pi",
        "k": pi.k,
        "restrictions": [
            {"B": list(B), "class": to_json(pi.classes[B]), "labeling": list(pi.labelings[B])}
            for B in sorted(pi.classes)
        ],
    }


def to_json(obj: Any) -> Any:
    """A JSON-ready value for any supported object."""
    if isinstance(obj, FiniteFunction):
        return _function(obj)
    if isinstance(obj, CellFamily):
        return _family(obj)
    if isinstance(obj, GeneratorSet):
        return {
            "type": "generators",
            "k": obj.k,
            "functions": [_function(f) for f in obj.functions],
            "families": [_family(f) for f in obj.families],
        }
    if isinstance(obj, FunctionSet):
        return {
            "type": "function_set",
            "k": obj.k,
            "closed_up_to": obj.closed_up_to,
            "arities": {str(n): [list(f.table) for f in obj.arity(n)] for n in sorted(obj.by_arity)},
        }
    if isinstance(obj, TraceSet):
        return {"type": "traces", "k": obj.k, "m": obj.m, "cells": plain(obj.cells), "traces": plain(sorted(obj.traces))}
    if isinstance(obj, QSet):
        return {"type": "qset", "k": obj.k, "m": obj.m, "rows": plain(obj.rows)}
    if isinstance(obj, SubsetFamily):
        return {"type": "subsets", "m": obj.m, "sets": plain(obj.sets)}
    if isinstance(obj, PostClassId):
        return {"type": "post_class", "name": obj.name, "fingerprint": plain(obj.fingerprint)}
    if isinstance(obj, PiFamily):
        return _pi(obj)
    if isinstance(obj, ArityVerdict):
        return {"type": "arity", **_verdict(obj)}
    if isinstance(obj, NTupleRelation):
        return _relation(obj)
    if isinstance(obj, DeltaReport):
        return {
            "type": "delta",
            "name": obj.name,
            "holds": obj.holds,
            "vacuous": obj.vacuous,
            "witness_index": obj.witness_index,
            "counterexample": plain(obj.counterexample),
            "witnesses": sorted([plain(k), plain(v)] for k, v in obj.witnesses.items()),
            "cells": sorted([plain(k), plain(v)] for k, v in obj.cells.items()),
        }
    if isinstance(obj, Characteristic):
        return {
            "type": "characteristic",
            "k": obj.k,
            "bound": obj.bound,
            "r": _verdict(obj.r),
            "R": {str(n): _relation(rel) for n, rel in sorted(obj.R.items())},
            "D": {str(n): _relation(rel) for n, rel in sorted(obj.D.items())},
            "Pi": _pi(obj.Pi),
        }
    if isinstance(obj, VerificationReport):
        return {
            "type": "report",
            "statement": obj.statement,
            "mode": obj.mode,
            "seed": obj.seed,
            "instances": obj.instances,
            "skipped": obj.skipped,
            "passed": obj.passed,
            "failures": plain(obj.failures),
            "parts": [to_json(p) for p in obj.parts],
            "notes": plain(obj.notes),
        }
    if isinstance(obj, FamilyReport):
        return {
            "type": "index_families",
            "n": obj.n,
            "permutation_pairs": plain(obj.permutation_pairs),
            "identity_pairs": plain(obj.identity_pairs),
            "disjunctive_pairs": plain(obj.disjunctive_pairs),
            "small_columns": plain(obj.small_columns),
            "within": [{"B": list(B), "positions": list(P)} for B, P in sorted(obj.within.items())],
        }
    if isinstance(obj, dict):
        return {k if isinstance(k, str) else str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return plain(obj)
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    raise InputError(f"no JSON encoding for {type(obj).__name__}")


def _need(data: dict, *keys: str) -> None:
    missing = [k for k in keys if k not in data]
    if missing:
        raise InputError(f"missing field(s) {missing} in {data.get('type', 'object')}")


def _load_function(data: dict, k: int | None = None) -> FiniteFunction:
    k = data.get("k", k)
    if k is None:
        raise InputError("function needs a carrier size k")
    _need(data, "n", "table")
    return FiniteFunction(int(k), int(data["n"]), tuple(int(v) for v in data["table"]))


_FAMILY_KINDS = {
    "conservative": lambda k, n: CellFamily.conservative(k, n),
    "minority": lambda k, n: ell_family(k),
}


def _load_family(data: dict, k: int | None = None) -> CellFamily:
    k = int(data.get("k", k))
    if "kind" in data:
        kind = data["kind"]
        if kind not in _FAMILY_KINDS:
            raise InputError(f"unknown family kind {kind!r}; known: {sorted(_FAMILY_KINDS)}")
        return _FAMILY_KINDS[kind](k, int(data.get("n", 3)))
    _need(data, "n", "allowed")
    return CellFamily(k, int(data["n"]), tuple(int(v) for v in data["allowed"]))


def load_generators(data: Any) -> GeneratorSet:
    """Generators from an object, or from ``"catalog:<k>/<name>"``.

    An object takes ``k``, optional ``functions`` and ``families`` (explicit
    masks or ``{"kind": "conservative" | "minority", "n": ...}``) and an
    optional ``"symmetrize": true``.
    """
    if isinstance(data, str):
        if not data.startswith("catalog:"):
            raise InputError(f"generator reference {data!r} must start with 'catalog:'")
        return catalog_entry(data[len("catalog:"):]).gens
    if not isinstance(data, dict):
        raise InputError("generators must be an object or a catalog reference")
    _need(data, "k")
    k = int(data["k"])
    gens = GeneratorSet.of(
        k,
        [_load_function(f, k) for f in data.get("functions", [])],
        [_load_family(f, k) for f in data.get("families", [])],
    )
    return symmetric_closure(gens) if data.get("symmetrize") else gens


def _load_relation(data: dict) -> NTupleRelation:
    return NTupleRelation(int(data["n"]), int(data["k"]), frozenset(tuples(p) for p in data["pairs"]))


def _load_pi(data: dict) -> PiFamily:
    classes, labelings = {}, {}
    for item in data["restrictions"]:
        B = tuple(item["B"])
        classes[B] = from_json(item["class"])
        labelings[B] = tuple(item["labeling"])
    return PiFamily(int(data["k"]), classes, labelings)


def _load_verdict(data: dict) -> ArityVerdict:
    return ArityVerdict(int(data["value"]), bool(data["exact"]))


def from_json(data: Any) -> Any:
    """Rebuild an object written by :func:`to_json`."""
    if not isinstance(data, dict) or "type" not in data:
        raise InputError("expected an object with a 'type' field")
    kind = data["type"]
    if kind == "function":
        return _load_function(data)
    if kind == "family":
        return _load_family(data)
    if kind == "generators":
        return load_generators(data)
    if kind == "function_set":
        k = int(data["k"])
        by_arity = {int(n): tuple(FiniteFunction(k, int(n), tuple(t)) for t in ts) for n, ts in data["arities"].items()}
        return FunctionSet(k, by_arity, data.get("closed_up_to"))
    if kind == "traces":
        return TraceSet(int(data["k"]), int(data["m"]), tuples(data["cells"]), tuples(data["traces"]))
    if kind == "qset":
        _need(data, "k", "m", "rows")
        return QSet.of(int(data["k"]), int(data["m"]), data["rows"])
    if kind == "subsets":
        _need(data, "m", "sets")
        return SubsetFamily.of(int(data["m"]), data["sets"])
    if kind == "index_families":
        return FamilyReport(
            permutation_pairs=tuples(data["permutation_pairs"]),
            identity_pairs=tuples(data["identity_pairs"]),
            disjunctive_pairs=tuples(data["disjunctive_pairs"]),
            small_columns=tuples(data["small_columns"]),
            n=int(data["n"]),
            within={tuple(item["B"]): tuple(item["positions"]) for item in data["within"]},
        )
    if kind == "post_class":
        fp = data.get("fingerprint")
        return PostClassId(data["name"], tuples(fp) if fp is not None else None)
    if kind == "pi":
        return _load_pi(data)
    if kind == "arity":
        return _load_verdict(data)
    if kind == "relation":
        return _load_relation(data)
    if kind == "delta":
        return DeltaReport(
            data["name"],
            data["holds"],
            data["vacuous"],
            data["witness_index"],
            tuples(data["counterexample"]),
            {tuples(k): tuples(v) for k, v in data["witnesses"]},
            {tuples(k): tuples(v) for k, v in data["cells"]},
        )
    if kind == "characteristic":
        return Characteristic(
            k=int(data["k"]),
            r=_load_verdict(data["r"]),
            R={int(n): _load_relation(v) for n, v in data["R"].items()},
            D={int(n): _load_relation(v) for n, v in data["D"].items()},
            Pi=_load_pi(data["Pi"]),
            bound=int(data["bound"]),
        )
    if kind == "report":
        return VerificationReport(
            statement=data["statement"],
            mode=data["mode"],
            seed=data["seed"],
            instances=data["instances"],
            skipped=data["skipped"],
            failures=data["failures"],
            parts=[from_json(p) for p in data["parts"]],
            notes=data["notes"],
        )
    raise InputError(f"unknown type tag {kind!r}")


def dumps(obj: Any) -> str:
    return json.dumps(to_json(obj), sort_keys=True, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return data


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write_text(path: str | Path | None, text: str) -> None:
    """Write to a file, or to standard output when no path is given."""
    if path is None or str(path) == "-":
        print(text, end="")
        return
    Path(path).write_text(text)
