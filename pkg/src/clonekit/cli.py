"""Command-line entry point.

Exit status: 0 when the command succeeds and any tested property holds,
1 when a tested property fails (the counterexample is in the output),
2 on bad input or an exceeded capacity limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from typing import Any, Sequence

from clonekit import io
from clonekit.catalog import builtin_catalog, catalog_entry
from clonekit.characteristic import (
    Characteristic,
    arity_parameter,
    characteristic,
    chi_difference,
    classify_case,
)
from clonekit.clone import DEFAULT_CAP, restrict_generators, slice, symmetric_closure
from clonekit.conditions import delta_2, delta_partial, delta_s
from clonekit.core import FiniteFunction, classify_function
from clonekit.decomposition import SubsetFamily, decomposition_apply, index_families, is_decomposable
from clonekit.errors import CapacityError, InputError
from clonekit.galois import QSet, in_inv, invariant_closure, pol_bounded, preserves
from clonekit.post import identify_generated, pi_family, pi_zero
from clonekit.verify import (
    chi_injectivity_check,
    verify_decomposition_theorem,
    verify_lemma_suite,
    verify_main,
)

OK, FAILED, BAD_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise InputError(message)


def _gens(ref: str):
    if ref.startswith("catalog:"):
        return io.load_generators(ref)
    return io.load_generators(io.read_json(ref))


def _load(path: str, kind: type):
    obj = io.from_json(io.read_json(path))
    if not isinstance(obj, kind):
        raise InputError(f"{path} holds a {type(obj).__name__}, expected {kind.__name__}")
    return obj


def _qset(path: str) -> QSet:
    return _load(path, QSet)


def _emit(args, payload: Any) -> None:
    io.write_text(args.out, json.dumps(io.to_json(payload), sort_keys=True, indent=2) + "\n")


def _verdict(args, holds: bool, payload: dict) -> int:
    _emit(args, {"holds": holds, **payload})
    return OK if holds else FAILED


# ---------------------------------------------------------------- handlers


def cmd_fn(args) -> int:
    f = _load(args.fn, FiniteFunction)
    report = classify_function(f)
    _emit(args, {**asdict(report), "is_projection": report.is_projection})
    return OK


def cmd_clone(args) -> int:
    gens = _gens(args.gens)
    if args.action == "slice":
        cells = io.tuples(io.read_json(args.cells)) if args.cells else None
        _emit(args, slice(gens, args.arity, cells, args.cap))
    elif args.action == "r":
        _emit(args, arity_parameter(gens, args.cap))
    elif args.action == "restrict":
        _emit(args, restrict_generators(gens, args.subset))
    elif args.action == "symmetrize":
        _emit(args, symmetric_closure(gens))
    return OK


def cmd_galois(args) -> int:
    if args.action == "preserves":
        f = _load(args.fn, FiniteFunction)
        return _verdict(args, preserves(f, _qset(args.set)), {})
    if args.action == "pol":
        sets = [io.from_json(item) for item in io.read_json(args.sets)]
        _emit(args, pol_bounded(sets, args.max_arity, args.k, args.cap))
        return OK
    gens = _gens(args.gens)
    H = _qset(args.set)
    if args.action == "inv":
        holds = in_inv(gens, H)
        payload = {} if holds else {"closure": invariant_closure(gens, H)}
        return _verdict(args, holds, payload)
    _emit(args, invariant_closure(gens, H))
    return OK


def cmd_decomp(args) -> int:
    H = _qset(args.set)
    if args.action == "families":
        _emit(args, index_families(H, args.n))
        return OK
    fam = _load(args.family, SubsetFamily)
    if args.action == "apply":
        cylinders, meet = decomposition_apply(H, fam)
        _emit(args, {"cylinders": cylinders, "intersection": meet})
        return OK
    holds = is_decomposable(H, fam)
    extra = {} if holds else {"intersection": decomposition_apply(H, fam)[1]}
    return _verdict(args, holds, extra)


def cmd_delta(args) -> int:
    gens = _gens(args.gens)
    if args.kind == "partial":
        rep = delta_partial(gens, args.cap)
    elif args.kind == "2":
        rep = delta_2(gens, args.cap)
    else:
        if args.n is None:
            raise InputError("--n is required for the rank-n condition")
        rep = delta_s(gens, args.n, args.cap)
    _emit(args, rep)
    return OK if rep.holds else FAILED


def cmd_post(args) -> int:
    gens = _gens(args.gens)
    if args.action == "identify":
        _emit(args, identify_generated(gens, args.bound))
    else:
        fam = pi_family(gens, args.bound)
        try:
            common = pi_zero(fam)
        except InputError:
            common = None
        _emit(args, {"family": fam, "common": common})
    return OK


def cmd_chi(args) -> int:
    if args.action == "compare":
        a, b = _load(args.a, Characteristic), _load(args.b, Characteristic)
        diff = chi_difference(a, b)
        _emit(args, {"equal": not diff, "differences": diff})
        return OK if not diff else FAILED
    chi = characteristic(_gens(args.gens), args.bound, args.cap)
    if args.action == "compute":
        _emit(args, chi)
    else:
        _emit(args, {"case": classify_case(chi), "r": str(chi.r)})
    return OK


def _mode(args) -> str:
    if args.exhaustive:
        return "exhaustive"
    if args.seed is None:
        raise InputError("sampled runs need --seed")
    return "sampled"


def cmd_verify(args) -> int:
    if args.action == "theorem":
        report = verify_decomposition_theorem(
            args.which, _gens(args.gens), args.m, _mode(args), args.samples, args.seed, args.n, name=args.gens
        )
    elif args.action == "main":
        report = verify_main(catalog_entry(args.entry), args.m, _mode(args), args.samples, args.seed)
    elif args.action == "lemmas":
        if args.seed is None:
            raise InputError("lemma suites need --seed")
        catalog = [e for k in args.k for e in builtin_catalog(k)]
        report = verify_lemma_suite(catalog, args.seed, args.samples)
    else:
        catalog = [e for k in args.k for e in builtin_catalog(k)]
        report = chi_injectivity_check(catalog, args.bound)
    _emit(args, report)
    return OK if report.passed else FAILED


def cmd_catalog(args) -> int:
    entries = []
    for e in builtin_catalog(args.k):
        entries.append(
            {
                "name": e.name,
                "expected_case": e.expected_case,
                "expected_delta": dict(sorted(e.expected_delta.items())),
                "note": e.note,
                "gens": e.gens,
            }
        )
    _emit(args, entries)
    return OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clonekit", description="Exact computations with clones on a finite carrier.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(parent, name: str, handler, help_text: str):
        q = parent.add_parser(name, help=help_text)
        q.set_defaults(handler=handler)
        q.add_argument("--out", default=None, help="output file (default: stdout)")
        return q

    def gens_arg(q):
        q.add_argument("--gens", required=True, help="generator JSON file or catalog:<k>/<name>")

    def cap_arg(q):
        q.add_argument("--cap", type=int, default=DEFAULT_CAP)

    q = leaf(sub, "fn", cmd_fn, "classify a function table")
    q.add_argument("--fn", required=True)

    clone = sub.add_parser("clone", help="slices, r, restriction, symmetric closure").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    q = leaf(clone, "slice", cmd_clone, "the n-ary slice, optionally projected onto cells")
    gens_arg(q)
    cap_arg(q)
    q.add_argument("--arity", type=int, required=True)
    q.add_argument("--cells", default=None, help="JSON list of cells to project onto")
    q = leaf(clone, "r", cmd_clone, "least arity of a non-projection")
    gens_arg(q)
    cap_arg(q)
    q = leaf(clone, "restrict", cmd_clone, "restrict conservative generators to a subset")
    gens_arg(q)
    q.add_argument("--subset", type=int, nargs="+", required=True)
    q = leaf(clone, "symmetrize", cmd_clone, "close generators under conjugation")
    gens_arg(q)

    galois = sub.add_parser("galois", help="invariance and polymorphisms").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    q = leaf(galois, "preserves", cmd_galois, "does one function preserve a set")
    q.add_argument("--fn", required=True)
    q.add_argument("--set", required=True)
    for name, text in (("inv", "is a set invariant under the clone"), ("closure", "smallest invariant superset")):
        q = leaf(galois, name, cmd_galois, text)
        gens_arg(q)
        q.add_argument("--set", required=True)
    q = leaf(galois, "pol", cmd_galois, "all functions up to an arity preserving the sets")
    q.add_argument("--sets", required=True, help="JSON list of sets")
    q.add_argument("--max-arity", type=int, default=2)
    q.add_argument("--k", type=int, default=None)
    cap_arg(q)

    decomp = sub.add_parser("decomp", help="cylinder decompositions").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    for name, text in (("apply", "cylinders and their intersection"), ("check", "is the set decomposable")):
        q = leaf(decomp, name, cmd_decomp, text)
        q.add_argument("--set", required=True)
        q.add_argument("--family", required=True)
    q = leaf(decomp, "families", cmd_decomp, "derived index families of a set")
    q.add_argument("--set", required=True)
    q.add_argument("--n", type=int, default=3)

    q = leaf(sub, "delta", cmd_delta, "richness conditions")
    gens_arg(q)
    cap_arg(q)
    q.add_argument("--kind", choices=["partial", "2", "s"], required=True)
    q.add_argument("--n", type=int, default=None)

    post = sub.add_parser("post", help="Boolean class identification").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    for name, text in (("identify", "class of a Boolean clone"), ("pi", "classes of all two-element restrictions")):
        q = leaf(post, name, cmd_post, text)
        gens_arg(q)
        q.add_argument("--bound", type=int, default=3)

    chi = sub.add_parser("chi", help="characteristic of a conservative clone").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    for name, text in (("compute", "the characteristic"), ("classify", "the case tag")):
        q = leaf(chi, name, cmd_chi, text)
        gens_arg(q)
        cap_arg(q)
        q.add_argument("--bound", type=int, default=3)
    q = leaf(chi, "compare", cmd_chi, "compare two characteristic files")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)

    verify = sub.add_parser("verify", help="verification runs").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )

    def sampling(q):
        q.add_argument("--exhaustive", action="store_true")
        q.add_argument("--samples", type=int, default=1000)
        q.add_argument("--seed", type=int, default=None)

    q = leaf(verify, "theorem", cmd_verify, "a decomposition theorem on all or sampled sets")
    gens_arg(q)
    sampling(q)
    q.add_argument("--which", choices=["partial", "s3", "d2"], required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, default=None)
    q = leaf(verify, "main", cmd_verify, "the case-specific characterization for a catalog entry")
    sampling(q)
    q.add_argument("--entry", required=True, help="<k>/<name>")
    q.add_argument("--m", type=int, required=True)
    q = leaf(verify, "lemmas", cmd_verify, "the lemma suites over built-in catalogs")
    q.add_argument("--k", type=int, nargs="+", default=[2, 3])
    q.add_argument("--samples", type=int, default=100)
    q.add_argument("--seed", type=int, default=None)
    q = leaf(verify, "chi-injectivity", cmd_verify, "distinct clones have distinct characteristics")
    q.add_argument("--k", type=int, nargs="+", default=[2, 3])
    q.add_argument("--bound", type=int, default=3)

    q = leaf(sub, "catalog", cmd_catalog, "list a built-in catalog")
    q.add_argument("--k", type=int, required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except (InputError, CapacityError) as exc:
        print(f"clonekit: error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except SystemExit as exc:
        # --help exits through argparse
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
