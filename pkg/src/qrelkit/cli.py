"""Command line interface: JSON documents in, one JSON report out.

Every command reads documents from file paths (``-`` for stdin), hands them
to the library, and prints a single JSON document to stdout.  Exit codes:
0 on success, 1 for invalid input (including usage errors), 2 when an
internal cross-check failed or a verification suite reported a failure.
All numerical work happens in the library modules; this file only adapts
documents to objects and back.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import adjacency, cpmap, qfunc, qrel, serialize, suites
from .config import VERSION, eq_tol
from .errors import InternalConsistencyError, ValidationError
from .mvnalg import MultiMatrixAlgebra, gns


class _Parser(argparse.ArgumentParser):
    """Argparse parser whose usage errors follow the exit-code contract."""

    def error(self, message):
        raise ValidationError(f"usage error: {message}\n{self.format_usage()}")


# -- document input ------------------------------------------------------------


def _read_doc(path: str, want: str | tuple[str, ...], where: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {where} from {path!r}: {exc}") from exc
    doc = serialize.loads(text)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError(f"{where}: expected an object with a 'kind' field")
    kinds = (want,) if isinstance(want, str) else want
    if doc["kind"] not in kinds:
        raise ValidationError(
            f"{where}: kind {doc['kind']!r}, expected one of {list(kinds)}"
        )
    return doc


def _guard_blocks(algebra, limit, where: str):
    if limit is not None and max(algebra.blocks) > limit:
        raise ValidationError(
            f"{where}: block size {max(algebra.blocks)} exceeds --max-block {limit}"
        )


def _relation_from_doc(doc: dict, args, where: str = "relation"):
    """A relation plus the two states carried by its representation docs."""
    for field in ("source", "target", "space"):
        if field not in doc:
            raise ValidationError(f"{where}: missing field {field!r}")
    src, src_state = serialize.representation_from_doc(doc["source"], f"{where}.source")
    tgt, tgt_state = serialize.representation_from_doc(doc["target"], f"{where}.target")
    _guard_blocks(src.algebra, args.max_block, f"{where}.source")
    _guard_blocks(tgt.algebra, args.max_block, f"{where}.target")
    dims, gens = serialize.subspace_doc_parts(doc["space"], f"{where}.space")
    if dims != (tgt.hilbert_dim, src.hilbert_dim):
        raise ValidationError(
            f"{where}.space.dims: {list(dims)} does not match the representations "
            f"{[tgt.hilbert_dim, src.hilbert_dim]}"
        )
    v = qrel.make_relation(src, tgt, gens, close=bool(doc.get("close", False)),
                           tol=args.tol)
    return v, src_state, tgt_state


def _map_from_doc(doc: dict, args, where: str = "map", need_hom: bool = False):
    for field in ("source", "target", "action"):
        if field not in doc:
            raise ValidationError(f"{where}: missing field {field!r}")
    src, src_state = serialize.representation_from_doc(doc["source"], f"{where}.source")
    tgt, tgt_state = serialize.representation_from_doc(doc["target"], f"{where}.target")
    _guard_blocks(src.algebra, args.max_block, f"{where}.source")
    _guard_blocks(tgt.algebra, args.max_block, f"{where}.target")
    action = serialize.matrix_from_doc(doc["action"], f"{where}.action")
    make = qfunc.make_hom if (need_hom or doc["kind"] == "hom") else cpmap.make_cp
    return make(src, tgt, action, source_state=src_state, target_state=tgt_state,
                tol=args.tol)


def _gns_operator_from_doc(doc: dict, args, where: str = "adjacency"):
    for field in ("source_state", "target_state", "gns_matrix"):
        if field not in doc:
            raise ValidationError(f"{where}: missing field {field!r}")
    alg_s, f_s = serialize.algebra_from_doc(doc["source_state"], f"{where}.source_state")
    alg_t, f_t = serialize.algebra_from_doc(doc["target_state"], f"{where}.target_state")
    _guard_blocks(alg_s, args.max_block, f"{where}.source_state")
    _guard_blocks(alg_t, args.max_block, f"{where}.target_state")
    g_s, g_t = gns(alg_s, f_s), gns(alg_t, f_t)
    m = serialize.matrix_from_doc(doc["gns_matrix"], f"{where}.gns_matrix")
    return adjacency.GNSOperator(g_s, g_t, m)


# -- document output -----------------------------------------------------------


def _relation_to_doc(v, src_state=None, tgt_state=None) -> dict:
    return {
        "kind": "relation",
        "source": serialize.representation_to_doc(v.source, src_state),
        "target": serialize.representation_to_doc(v.target, tgt_state),
        "space": {
            "dims": [v.target.hilbert_dim, v.source.hilbert_dim],
            "generators": [serialize.matrix_to_doc(b) for b in v.space.basis],
        },
        "dim": v.dim,
    }


def _map_to_doc(theta) -> dict:
    doc = {
        "kind": "hom" if theta.hom else "cpmap",
        "source": serialize.representation_to_doc(theta.source_rep, theta.source_state),
        "target": serialize.representation_to_doc(theta.target_rep, theta.target_state),
        "action": serialize.matrix_to_doc(theta.action),
        "flags": {
            "unital": bool(theta.unital),
            "hom": bool(theta.hom),
            "state_preserving": theta.state_preserving,
        },
    }
    return doc


def _gns_operator_to_doc(a) -> dict:
    return {
        "kind": "adjacency",
        "source_state": serialize.algebra_to_doc(a.source.algebra, a.source.functional),
        "target_state": serialize.algebra_to_doc(a.target.algebra, a.target.functional),
        "gns_matrix": serialize.matrix_to_doc(a.matrix),
    }


def _emit(doc: dict, args) -> None:
    text = serialize.dumps(doc) + "\n"
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)


# -- command handlers ----------------------------------------------------------


def _cmd_relation_check(args) -> int:
    doc = _read_doc(args.doc, "relation", "relation")
    v, _, _ = _relation_from_doc(doc, args)
    flags = qrel.properties(v, tol=args.tol)
    report = {
        "kind": "report",
        "command": "relation check",
        "version": VERSION,
        "ok": True,
        "dim": v.dim,
        "endomorphic": v.endomorphic(),
        "flags": flags.as_dict(),
        "tol": eq_tol(args.tol),
    }
    _emit(report, args)
    return 0


def _cmd_relation_compose(args) -> int:
    v, _, vt = _relation_from_doc(_read_doc(args.left, "relation", "left relation"),
                                  args, "left relation")
    w, ws, _ = _relation_from_doc(_read_doc(args.right, "relation", "right relation"),
                                  args, "right relation")
    out = qrel.compose_relations(v, w, tol=args.tol)
    _emit(_relation_to_doc(out, src_state=ws, tgt_state=vt), args)
    return 0


def _cmd_relation_adjoint(args) -> int:
    v, vs, vt = _relation_from_doc(_read_doc(args.doc, "relation", "relation"), args)
    out = qrel.adjoint_relation(v, tol=args.tol)
    _emit(_relation_to_doc(out, src_state=vt, tgt_state=vs), args)
    return 0


def _cmd_hom_to_relation(args) -> int:
    theta = _map_from_doc(_read_doc(args.doc, ("hom", "cpmap"), "hom"), args,
                          "hom", need_hom=True)
    v = qfunc.relation_of_hom(theta, tol=args.tol)
    _emit(_relation_to_doc(v, src_state=theta.target_state,
                           tgt_state=theta.source_state), args)
    return 0


def _cmd_hom_from_relation(args) -> int:
    v, vs, vt = _relation_from_doc(_read_doc(args.doc, "relation", "relation"), args)
    theta = qfunc.hom_of_relation(v, tol=args.tol)
    doc = _map_to_doc(theta)
    doc["certificate"] = serialize.certificate(
        "relation of the recovered hom equals the input relation",
        v.dim, v.dim, float(theta.recovery_residual),
    )
    _emit(doc, args)
    return 0


def _cmd_cp_to_relation(args) -> int:
    theta = _map_from_doc(_read_doc(args.doc, ("cpmap", "hom"), "cp map"), args)
    v = cpmap.relation_of_cp(theta, tol=args.tol)
    _emit(_relation_to_doc(v, src_state=theta.target_state,
                           tgt_state=theta.source_state), args)
    return 0


def _cmd_cp_confusability(args) -> int:
    theta = _map_from_doc(_read_doc(args.doc, ("cpmap", "hom"), "cp map"), args)
    v = cpmap.confusability_graph(theta, tol=args.tol)
    _emit(_relation_to_doc(v, src_state=theta.target_state,
                           tgt_state=theta.target_state), args)
    return 0


def _cmd_cp_pullback(args) -> int:
    v, _, _ = _relation_from_doc(_read_doc(args.relation, "relation", "relation"),
                                 args)
    theta_m = _map_from_doc(_read_doc(args.source_map, ("cpmap", "hom"),
                                      "source-side map"), args, "source-side map")
    theta_n = _map_from_doc(_read_doc(args.target_map, ("cpmap", "hom"),
                                      "target-side map"), args, "target-side map")
    out = cpmap.pullback(v, theta_m, theta_n, tol=args.tol)
    _emit(_relation_to_doc(out, src_state=theta_m.target_state,
                           tgt_state=theta_n.target_state), args)
    return 0


def _cmd_adjacency_of_relation(args) -> int:
    doc = _read_doc(args.doc, "relation", "relation")
    v, src_state, tgt_state = _relation_from_doc(doc, args)
    g_s = gns(v.source.algebra, src_state)
    g_t = gns(v.target.algebra, tgt_state)
    a = adjacency.adjacency_of_relation(v, g_s, g_t, tol=args.tol)
    out = _gns_operator_to_doc(a)
    out["flags"] = adjacency.classify(a, tol=args.tol)
    _emit(out, args)
    return 0


def _cmd_adjacency_of_hom(args) -> int:
    theta = _map_from_doc(_read_doc(args.doc, ("hom", "cpmap"), "hom"), args,
                          "hom", need_hom=True)
    if theta.source_state is None or theta.target_state is None:
        raise ValidationError("both representations need a state")
    a, data = adjacency.adjacency_of_hom(
        theta, theta.source_state, theta.target_state, tol=args.tol
    )
    out = _gns_operator_to_doc(a)
    out["flags"] = data.flags
    out["certificates"] = data.certificates
    _emit(out, args)
    return 0


def _cmd_adjacency_classify(args) -> int:
    a = _gns_operator_from_doc(_read_doc(args.doc, "adjacency", "adjacency"), args)
    flags = adjacency.classify(a, tol=args.tol)
    report = {
        "kind": "report",
        "command": "adjacency classify",
        "version": VERSION,
        "flags": flags,
        "state_preserving": adjacency.state_preservation_check(a, tol=args.tol),
        "tol": eq_tol(args.tol),
    }
    _emit(report, args)
    return 0


def _cmd_construct_verdon(args) -> int:
    v, _, _ = _relation_from_doc(_read_doc(args.doc, "relation", "relation"), args)
    theta, cert = adjacency.verdon_construct(v, tol=args.tol)
    doc = _map_to_doc(theta)
    doc["certificate"] = cert
    _emit(doc, args)
    return 0


def _cmd_construct_qg_from_cp(args) -> int:
    doc = _read_doc(args.doc, "relation", "relation")
    v, _, _ = _relation_from_doc(doc, args)
    if "seed_element" in doc:
        mats = doc["seed_element"]
        if not isinstance(mats, list):
            raise ValidationError("seed_element: expected a list of matrices")
        x0 = [serialize.matrix_from_doc(m, f"seed_element[{i}]")
              for i, m in enumerate(mats)]
    else:
        x0 = adjacency.find_x0(v, seed=args.seed, tol=args.tol)
        if x0 is None:
            raise ValidationError(
                "no suitable seed element found; supply one in 'seed_element'"
            )
    theta, cert = adjacency.qg_from_cp_construct(v, x0, tol=args.tol)
    out = _map_to_doc(theta)
    out["certificate"] = cert
    out["seed_element"] = [serialize.matrix_to_doc(b)
                           for b in v.source.algebra.element(x0)]
    _emit(out, args)
    return 0


def _cmd_classical_import(args) -> int:
    doc = _read_doc(args.doc, ("channel", "classical_relation"), "classical input")
    if doc["kind"] == "channel":
        if "kernel" not in doc:
            raise ValidationError("channel: missing field 'kernel'")
        p = serialize.matrix_from_doc(doc["kernel"], "channel.kernel")
        if float(abs(p.imag).max()) > 0:
            raise ValidationError("channel.kernel: entries must be real")
        theta = cpmap.classical_channel(p.real, tol=args.tol)
        v = cpmap.relation_of_cp(theta, tol=args.tol)
    else:
        for field in ("pairs", "source_points", "target_points"):
            if field not in doc:
                raise ValidationError(f"classical_relation: missing field {field!r}")
        nx, ny = int(doc["source_points"]), int(doc["target_points"])
        src = qrel.gns_representation(MultiMatrixAlgebra([1] * nx))
        tgt = qrel.gns_representation(MultiMatrixAlgebra([1] * ny))
        v = qrel.from_classical(doc["pairs"], src, tgt, tol=args.tol)
    out = _relation_to_doc(v)
    out["pairs"] = [list(p) for p in qrel.to_classical(v, tol=args.tol)]
    _emit(out, args)
    return 0


def _cmd_classical_export(args) -> int:
    v, _, _ = _relation_from_doc(_read_doc(args.doc, "relation", "relation"), args)
    pairs = qrel.to_classical(v, tol=args.tol)
    report = {
        "kind": "classical_relation",
        "pairs": [list(p) for p in pairs],
        "source_points": len(v.source.algebra.blocks),
        "target_points": len(v.target.algebra.blocks),
    }
    _emit(report, args)
    return 0


def _cmd_verify(args) -> int:
    suite = args.suite_opt or args.suite_pos
    if args.suite_opt and args.suite_pos and args.suite_opt != args.suite_pos:
        raise ValidationError(
            f"usage error: suite given twice ({args.suite_pos!r} and {args.suite_opt!r})"
        )
    if suite is None:
        suite = "all"
    if suite == "all":
        report = suites.run_all(seed=args.seed, trials=args.trials, tol=args.tol)
    else:
        report = suites.run_suite(suite, seed=args.seed, trials=args.trials,
                                  tol=args.tol)
    _emit(report, args)
    return 0 if report["passed"] else 2


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="comparison tolerance (default QRELKIT_TOL or 1e-8)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized searches and trials")
    common.add_argument("--trials", type=int, default=None,
                        help="trial count for verification suites")
    common.add_argument("--max-block", type=int, default=None,
                        help="reject input algebras with larger blocks")
    common.add_argument("--out", default=None,
                        help="also write the report to this file")
    common.add_argument("--format", choices=["json"], default="json",
                        help="output format")

    parser = _Parser(prog="qrelkit",
                     description="Quantum relations over multimatrix algebras.")
    parser.add_argument("--version", action="version", version=f"qrelkit {VERSION}")
    top = parser.add_subparsers(dest="command", required=True, metavar="command")

    def leaf(group, name, fn, doc, *positional):
        p = group.add_parser(name, parents=[common], help=doc, description=doc)
        for arg_name, arg_help in positional:
            p.add_argument(arg_name, help=arg_help)
        p.set_defaults(fn=fn)
        return p

    relation = top.add_parser("relation", help="validate and combine relations")
    rel_sub = relation.add_subparsers(dest="subcommand", required=True)
    leaf(rel_sub, "check", _cmd_relation_check,
         "validate a relation document and report its flags",
         ("doc", "relation document (path or -)"))
    leaf(rel_sub, "compose", _cmd_relation_compose,
         "compose two relations (left after right)",
         ("left", "outer relation document"),
         ("right", "inner relation document"))
    leaf(rel_sub, "adjoint", _cmd_relation_adjoint,
         "the adjoint relation",
         ("doc", "relation document (path or -)"))

    hom = top.add_parser("hom", help="*-homomorphisms and their relations")
    hom_sub = hom.add_subparsers(dest="subcommand", required=True)
    leaf(hom_sub, "to-relation", _cmd_hom_to_relation,
         "the intertwiner relation of a *-homomorphism",
         ("doc", "hom document (path or -)"))
    leaf(hom_sub, "from-relation", _cmd_hom_from_relation,
         "recover a *-homomorphism from an injective relation",
         ("doc", "relation document (path or -)"))

    cp = top.add_parser("cp", help="completely positive maps")
    cp_sub = cp.add_subparsers(dest="subcommand", required=True)
    leaf(cp_sub, "to-relation", _cmd_cp_to_relation,
         "the relation spanned by the Kraus operators",
         ("doc", "cp map document (path or -)"))
    leaf(cp_sub, "confusability", _cmd_cp_confusability,
         "the confusability graph of a cp map",
         ("doc", "cp map document (path or -)"))
    leaf(cp_sub, "pullback", _cmd_cp_pullback,
         "pull a relation back along two cp maps",
         ("relation", "relation document"),
         ("source_map", "cp map into the relation's source"),
         ("target_map", "cp map into the relation's target"))

    adj = top.add_parser("adjacency", help="operators on GNS spaces")
    adj_sub = adj.add_subparsers(dest="subcommand", required=True)
    leaf(adj_sub, "of-relation", _cmd_adjacency_of_relation,
         "the CP Schur-idempotent operator of a relation",
         ("doc", "relation document with states (path or -)"))
    leaf(adj_sub, "of-hom", _cmd_adjacency_of_hom,
         "the adjacency operator of a *-homomorphism",
         ("doc", "hom document with states (path or -)"))
    leaf(adj_sub, "classify", _cmd_adjacency_classify,
         "flags of an operator between GNS spaces",
         ("doc", "adjacency document (path or -)"))

    construct = top.add_parser("construct", help="realize relations by cp maps")
    con_sub = construct.add_subparsers(dest="subcommand", required=True)
    leaf(con_sub, "verdon", _cmd_construct_verdon,
         "unital cp map whose confusability graph is the given reflexive "
         "symmetric relation",
         ("doc", "relation document (path or -)"))
    leaf(con_sub, "qg-from-cp", _cmd_construct_qg_from_cp,
         "cp map whose confusability graph is the given symmetric relation",
         ("doc", "relation document, optionally with 'seed_element'"))

    classical = top.add_parser("classical", help="set relations and channels")
    cls_sub = classical.add_subparsers(dest="subcommand", required=True)
    leaf(cls_sub, "import", _cmd_classical_import,
         "import a stochastic kernel or pair list as a relation",
         ("doc", "channel or classical_relation document"))
    leaf(cls_sub, "export", _cmd_classical_export,
         "export a relation over commutative algebras as pairs",
         ("doc", "relation document (path or -)"))

    verify = top.add_parser("verify", parents=[common],
                            help="run randomized verification suites",
                            description="Run one suite (or all) and report "
                            "residuals; failing trials carry reproducer seeds.")
    verify.add_argument("suite_pos", nargs="?", default=None, metavar="suite",
                        help="suite name or 'all' (known: %s)"
                        % ", ".join(suites.SUITE_NAMES))
    verify.add_argument("--suite", dest="suite_opt", default=None,
                        help="suite name (same as the positional argument)")
    verify.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
