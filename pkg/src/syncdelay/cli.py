"""Command-line entry point.

Reports are ``key: value`` lines (or one JSON object with ``--json``).  Exit
status is 2 for unreadable input or bad options, 1 for a negative verdict or a
failed verification, and 0 otherwise.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .automata import (
    AutomatonError,
    Dfa,
    concat,
    equivalence_counterexample,
    from_function,
    minimize,
    parse_dfa,
    preimage_dfa,
    random_word,
    recognizing_set,
    syntactic_monoid,
    transition_monoid,
    with_alphabet,
    word_str,
)
from .codes import CodeError, is_prefix_code, min_sync_delay
from .constructions import ConstructionError, birget_rhodes, schutzenberger_product
from .corpus import example14_dfa
from .decompose import decompose, flatten_to_rees, leaf_names, to_dot, verify_tree
from .groups import group_embeds_in_monoid, group_name, parse_group_name, symmetric_group
from .monoid import Monoid, MonoidError, SizeCapExceeded, is_aperiodic, maximal_subgroups, parse_monoid, verify_division
from .omega import buchi_of_dba, dba_monoid, lasso_in_buchi, parse_lasso
from .sdexpr import (
    ExprError,
    NotRecognizable,
    SynthesisError,
    compile_finite,
    format_expr,
    parse_expr,
    synthesize_omega,
    validate,
)
from .sdexpr.ast import dag_size, letters_of, tree_size
from .sdexpr.synth import synthesize_language
from .varieties import ABELIAN, SOLVABLE, monoid_in_Hbar, parse_variety

MAX_SEXP_NODES = 1_000_000


class UsageError(Exception):
    pass


class Report:
    """Ordered ``key: value`` report."""

    def __init__(self):
        self.items: list[tuple[str, object]] = []
        self.failed = False

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def fail(self, key: str, value) -> None:
        self.add(key, value)
        self.failed = True

    def render(self, as_json: bool) -> str:
        if as_json:
            obj = {}
            for k, v in self.items:
                obj[k] = v
            return json.dumps(obj, sort_keys=False) + "\n"
        return "".join(f"{k}: {_fmt(v)}\n" for k, v in self.items)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_dfa(path: str) -> Dfa:
    return parse_dfa(_read(path))


def _load_monoid(args) -> Monoid:
    if getattr(args, "monoid", None):
        return parse_monoid(_read(args.monoid))
    if getattr(args, "dfa", None):
        return syntactic_monoid(_load_dfa(args.dfa)).monoid
    raise UsageError("need --dfa or --monoid")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SYNCDELAY_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"SYNCDELAY_SEED is not an integer: {env!r}") from None


def _subgroup_orders(M: Monoid) -> list[int]:
    return [G.order for G in maximal_subgroups(M)]


# -- commands ------------------------------------------------------------------------------


def cmd_analyze(args, rep: Report) -> None:
    D = minimize(_load_dfa(args.dfa))
    V = parse_variety(args.variety)
    res = syntactic_monoid(D)
    M = res.monoid
    rep.add("states", D.n_states)
    rep.add("monoid_size", M.size)
    rep.add("aperiodic", is_aperiodic(M))
    rep.add("subgroup_orders", _subgroup_orders(M))
    rep.add("subgroup_names", [group_name(G) for G in maximal_subgroups(M)])
    h = monoid_in_Hbar(M, V)
    rep.add("variety", str(V))
    if h.verdict:
        rep.add("verdict", True)
    else:
        rep.fail("verdict", False)


def cmd_decompose(args, rep: Report) -> None:
    M = _load_monoid(args)
    t = decompose(M)
    v = verify_tree(t, M)
    rep.add("monoid_size", M.size)
    rep.add("nodes", t.size)
    rep.add("leaves", leaf_names(t))
    if v:
        rep.add("verified", True)
    else:
        rep.fail("verified", False)
        rep.add("reason", v.reason)
    if args.flatten:
        fl = flatten_to_rees(t)
        if fl.capped:
            rep.add("flatten", "capped")
            rep.add("flatten_reason", fl.reason)
        else:
            fv = verify_division(M, fl.monoid, fl.witness)
            rep.add("flatten_size", fl.monoid.size)
            if fv:
                rep.add("flatten_verified", True)
            else:
                rep.fail("flatten_verified", False)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(t))
        rep.add("dot", args.dot)


def cmd_synthesize(args, rep: Report) -> None:
    D = minimize(_load_dfa(args.dfa))
    G = parse_group_name(args.group)
    rep.add("group", group_name(G))
    if args.omega:
        lassos = [parse_lasso(ln.strip()) for ln in _read(args.omega).splitlines() if ln.strip() and not ln.startswith("#")]
        phi, _ = dba_monoid(D)
        B = buchi_of_dba(D)
        rep.add("monoid_size", phi.target.size)
        nf = synthesize_omega(phi, G, B, bound=args.bound, n_random=args.random, seed=_seed(args))
        e = nf.expr()
        rep.add("summands", len(nf.summands))
        rep.add("sampled_agreement", True)
        C_B = nf.buchi()
        for w in lassos:
            got = lasso_in_buchi(w, C_B)
            want = lasso_in_buchi(w, B)
            rep.add(f"lasso {w}", got)
            if got != want:
                rep.fail(f"mismatch {w}", True)
    else:
        res = syntactic_monoid(D)
        rep.add("monoid_size", res.monoid.size)
        e = synthesize_language(res.hom, G, recognizing_set(D, res))
        cx = equivalence_counterexample(compile_finite(e, D.alphabet), D)
        if cx is None:
            rep.add("equivalent", True)
        else:
            rep.fail("equivalent", False)
            rep.add("counterexample", word_str(cx))
    rep.add("expression_nodes", dag_size(e))
    if args.out:
        # the s-expression form has no sharing, so it can be exponentially larger than the DAG
        n = tree_size(e)
        if n > MAX_SEXP_NODES:
            rep.fail("written", f"no (tree size {n} exceeds {MAX_SEXP_NODES})")
        else:
            with open(args.out, "w") as fh:
                fh.write(format_expr(e) + "\n")
            rep.add("written", args.out)


def cmd_check_code(args, rep: Report) -> None:
    K = minimize(_load_dfa(args.dfa))
    p = is_prefix_code(K)
    rep.add("prefix_code", p.ok)
    if not p.ok:
        rep.add("prefix_witness", f"{word_str(p.u)} < {word_str(p.uv)}")
        rep.fail("delay", "undefined")
        return
    r = min_sync_delay(K, args.dmax)
    if r.delay is None:
        rep.fail("delay", f"none<={args.dmax}")
    else:
        rep.add("delay", r.delay)
    if r.counterexample is not None:
        u, v, w = r.counterexample
        rep.add("counterexample", f"u={word_str(u) or '_'} v={word_str(v) or '_'} w={word_str(w) or '_'}")


def _alphabet_for(e, D: Dfa | None):
    if D is not None:
        extra = letters_of(e) - set(D.alphabet)
        if extra:
            raise UsageError(f"expression uses letters outside the DFA alphabet: {sorted(extra)}")
        return D.alphabet
    return tuple(sorted(letters_of(e), key=str))


def cmd_verify_expr(args, rep: Report) -> None:
    e = parse_expr(_read(args.expr))
    D = _load_dfa(args.dfa)
    E = compile_finite(e, _alphabet_for(e, D))
    cx = equivalence_counterexample(E, D)
    if cx is None:
        rep.add("equivalent", True)
    else:
        rep.fail("equivalent", False)
        rep.add("counterexample", word_str(cx) or "_")


def cmd_validate_expr(args, rep: Report) -> None:
    e = parse_expr(_read(args.expr))
    V = parse_variety(args.variety)
    r = validate(e, V, args.dmax)
    rep.add("variety", str(V))
    rep.add("star_nodes", len(r.nodes))
    rep.add("delays", [n.delay for n in r.nodes])
    problems = list(r.problems) + [p for n in r.nodes for p in n.problems]
    for i, p in enumerate(problems):
        rep.add(f"problem {i}", p)
    if r.ok:
        rep.add("valid", True)
    else:
        rep.fail("valid", False)


def cmd_expand(args, rep: Report) -> None:
    hom = None
    if args.dfa and not args.monoid:
        res = syntactic_monoid(_load_dfa(args.dfa))
        M, hom = res.monoid, res.hom
    else:
        M = _load_monoid(args)
    E = birget_rhodes(M, args.mode, hom if args.mode == "reachable" else None)
    rep.add("monoid_size", M.size)
    rep.add("mode", args.mode)
    rep.add("expansion_size", E.monoid.size)
    subs = maximal_subgroups(E.monoid)
    rep.add("subgroup_count", len(subs))
    rep.add("subgroup_orders", sorted({G.order for G in subs}))
    ok = all(group_embeds_in_monoid(G, M) for G in subs)
    if ok:
        rep.add("subgroups_embed", True)
    else:
        rep.fail("subgroups_embed", False)


def cmd_product(args, rep: Report) -> None:
    if args.via != "schutzenberger":
        raise UsageError(f"unknown product {args.via!r}")
    L = minimize(_load_dfa(args.left))
    K = minimize(_load_dfa(args.right))
    if set(L.alphabet) != set(K.alphabet):
        raise UsageError("DFAs over different alphabets")
    A = L.alphabet
    K = with_alphabet(K, A)
    nK = K.n_states
    pair = from_function(A, L.n_states * nK, lambda q, a: L.step(q // nK, a) * nK + K.step(q % nK, a), L.initial * nK + K.initial, [])
    res = transition_monoid(pair)  # finals are irrelevant here
    phi = res.hom
    start = pair.initial
    left = {m for m, t in enumerate(res.transformations) if t[start] // nK in L.finals}
    right = {m for m, t in enumerate(res.transformations) if t[start] % nK in K.finals}
    S = schutzenberger_product(phi)
    acc = S.recognizes_concat(left, right)
    rep.add("base_size", phi.target.size)
    rep.add("product_size", S.monoid.size)
    target = concat(L, K)
    cx = equivalence_counterexample(preimage_dfa(S.hom, acc), target)
    if cx is None:
        rep.add("equivalent", True)
    else:
        rep.fail("equivalent", False)
        rep.add("counterexample", word_str(cx) or "_")
    rng = np.random.default_rng(_seed(args))
    bad = 0
    for _ in range(args.samples):
        w = random_word(rng, A, 12)
        if (S.hom(w) in acc) != target.accepts(w):
            bad += 1
    rep.add("sampled_words", args.samples)
    if bad:
        rep.fail("sample_mismatches", bad)
    else:
        rep.add("sample_mismatches", 0)


def cmd_demo_example14(args, rep: Report) -> None:
    t0 = time.perf_counter()
    D = example14_dfa()
    res = syntactic_monoid(D)
    M = res.monoid
    rep.add("dfa_states", D.n_states)
    rep.add("monoid_size", M.size)
    subs = maximal_subgroups(M)
    rep.add("subgroup_orders", [G.order for G in subs])
    rep.add("subgroup_names", [group_name(G) for G in subs])
    rep.add("solvable", monoid_in_Hbar(M, SOLVABLE).verdict)
    rep.add("abelian", monoid_in_Hbar(M, ABELIAN).verdict)
    t = decompose(M)
    v = verify_tree(t, M)
    rep.add("decomposition_nodes", t.size)
    rep.add("decomposition_leaves", leaf_names(t))
    if v:
        rep.add("decomposition_verified", True)
    else:
        rep.fail("decomposition_verified", False)
    G = symmetric_group(3)
    e = synthesize_language(res.hom, G, recognizing_set(D, res))
    cx = equivalence_counterexample(compile_finite(e, D.alphabet), D)
    if cx is None:
        rep.add("synthesis_equivalent", True)
    else:
        rep.fail("synthesis_equivalent", False)
    r = validate(e, SOLVABLE, args.dmax, D.alphabet)
    if r.ok:
        rep.add("synthesis_valid", True)
    else:
        rep.fail("synthesis_valid", False)
    rep.add("max_delay", r.max_delay)
    if args.timing:
        rep.add("seconds", round(time.perf_counter() - t0, 2))


# -- argument parsing -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="syncdelay", description="Monoids, prefix codes and group-labelled star expressions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for sampled checks (default: $SYNCDELAY_SEED or 0)")
    common.add_argument("--json", action="store_true", help="print the report as one JSON object")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="syntactic monoid and H-bar membership")
    s.add_argument("--dfa", required=True)
    s.add_argument("--variety", default="solvable")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("decompose", parents=[common], help="local Rees decomposition")
    s.add_argument("--dfa")
    s.add_argument("--monoid")
    s.add_argument("--dot", help="write the tree in DOT format to this path")
    s.add_argument("--flatten", action="store_true")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("synthesize", parents=[common], help="expression for a DFA language")
    s.add_argument("--dfa", required=True)
    s.add_argument("--group", default="trivial")
    s.add_argument("--omega", help="read the DFA as a deterministic Büchi automaton; lassos to report on")
    s.add_argument("--bound", type=int, default=8)
    s.add_argument("--random", type=int, default=1000)
    s.add_argument("--out", help="write the expression here")
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("check-code", parents=[common], help="prefix code and synchronization delay")
    s.add_argument("--dfa", required=True)
    s.add_argument("--dmax", type=int, default=5)
    s.set_defaults(func=cmd_check_code)

    s = sub.add_parser("verify-expr", parents=[common], help="expression equals a DFA language")
    s.add_argument("--expr", required=True)
    s.add_argument("--dfa", required=True)
    s.set_defaults(func=cmd_verify_expr)

    s = sub.add_parser("validate-expr", parents=[common], help="side conditions of an expression")
    s.add_argument("--expr", required=True)
    s.add_argument("--variety", default="all")
    s.add_argument("--dmax", type=int, default=8)
    s.set_defaults(func=cmd_validate_expr)

    s = sub.add_parser("expand", parents=[common], help="Birget-Rhodes expansion")
    s.add_argument("--dfa")
    s.add_argument("--monoid")
    s.add_argument("--mode", choices=("full", "reachable"), default="reachable")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("product", parents=[common], help="recognize a concatenation through a product monoid")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--via", default="schutzenberger")
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("demo-example14", parents=[common], help="S3 marker language end to end")
    s.add_argument("--dmax", type=int, default=8)
    s.add_argument("--timing", action="store_true", help="include wall-clock time (not byte-stable)")
    s.set_defaults(func=cmd_demo_example14)
    return p


INPUT_ERRORS = (UsageError, AutomatonError, MonoidError, ExprError, CodeError, ValueError, OSError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    rep = Report()
    try:
        args.func(args, rep)
    except NotRecognizable as exc:
        rep.fail("error", f"not recognizable: {exc}")
    except (SynthesisError, SizeCapExceeded, ConstructionError) as exc:
        rep.fail("error", str(exc))
    except INPUT_ERRORS as exc:
        sys.stderr.write(f"syncdelay: {exc}\n")
        return 2
    sys.stdout.write(rep.render(args.json))
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
