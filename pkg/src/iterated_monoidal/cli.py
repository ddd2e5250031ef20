"""Command-line front end (``mol``).

Exit status: 0 on success (a "no" answer is still a success), 1 on domain
errors and refused requests, 2 on usage errors.  Long arguments can be read
from a file with ``@path`` (one argument per line).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import cubes
from .coherence import hom_exists, reachability_matrix, reachability_witness, leq_matrix, witness_to_json
from .config import LIMITS, SAMPLING, default_jobs
from .enumeration import build_poset, enumerate_objects, shape_counts, shape_recurrence
from .expressions import ExpressionError, ParseError, PairTable, from_pair_table, leaves, pair_table, parse, render
from .graph_operads import GammaSimplex, gamma_member, gamma_simplices, k_enumerate
from .milgram import downset, q_intermediates, q_map
from .poset import Poset
from .topology import gamma_chain_complex, homology, order_complex


class UsageError(Exception):
    """Bad invocation; carries a one-line hint."""

    def __init__(self, message: str, hint: str):
        super().__init__(message)
        self.hint = hint


class Refused(Exception):
    pass


# ------------------------------------------------------------------ helpers

def _expr(text: str, n: int) -> object:
    try:
        return parse(text, n, distinct=True)
    except ParseError as exc:
        raise UsageError(
            f"cannot parse {text!r}: {exc}",
            'quote expressions, e.g. "(2 #2 3) #1 1"; #i needs 1 <= i <= --n',
        ) from exc


def _estimate_objects(n: int, k: int) -> int:
    return math.factorial(k) * shape_recurrence(n, k)[k]


def _guard(n: int, k: int, what: str, limit: int | None = None):
    limit = LIMITS.max_objects if limit is None else limit
    est = _estimate_objects(n, k)
    if est > limit:
        raise Refused(f"refused: {what} for n={n}, k={k} needs about {est} objects (limit {limit})")
    return est


def _guard_gamma(n: int, k: int):
    # Gamma^(2)(4) has ~15k simplices; Gamma^(3)(4) is already in the millions
    if not (k <= 3 and n <= 4) and not (k == 4 and n <= 2):
        raise Refused(f"refused: Gamma^({n})({k}) is beyond desk scale (k <= 3 with n <= 4, or k = 4 with n <= 2)")


def _load_json(text: str):
    """Inline JSON, or the contents of a file if ``text`` names one."""
    p = Path(text)
    if not text.lstrip().startswith(("{", "[")) and p.exists():
        text = p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}", "pass inline JSON or a path to a JSON file") from exc


def _config(text: str) -> cubes.Configuration:
    try:
        return cubes.Configuration.from_json(_load_json(text))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"invalid configuration: {exc}",
                         'format: {"n":2,"boxes":[{"label":1,"intervals":[["0","1/2"],["0","1"]]}]}') from exc


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _chain(text: str) -> GammaSimplex:
    """Parse '123 213 231', '123 -> 213', '[1,2,3] [2,1,3]' or a JSON list of lists."""
    hint = 'write vertices as permutations, e.g. "123 213 231 213"'
    try:
        data = json.loads(text)
    except ValueError:
        data = None
    try:
        if isinstance(data, list) and all(isinstance(v, list) for v in data):
            verts = [tuple(int(x) for x in v) for v in data]
        else:
            cleaned = text.replace("->", " ").replace("→", " ").replace("] [", " ").replace("],[", " ")
            verts = []
            for tok in cleaned.strip("[] ").split():
                tok = tok.strip("[],")
                verts.append(tuple(int(x) for x in (tok.split(",") if "," in tok else tok)))
        return GammaSimplex(tuple(verts))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc), hint) from exc


def _poset_for(kind: str, n: int, k: int) -> Poset:
    if kind == "order":
        return build_poset(n, k)
    if kind == "milgram":
        return build_poset(n, k, milgram_only=True)
    if kind == "kgraph":
        tables = k_enumerate(n, k)
        return Poset(tables, leq_matrix(tables), [json.dumps(t.to_json(), sort_keys=True) for t in tables])
    raise UsageError(f"unknown complex {kind!r}", "choose order, milgram, kgraph or gamma")


def _homology_report(kind: str, n: int, k: int):
    if kind == "gamma":
        _guard_gamma(n, k)
        return homology(gamma_chain_complex(n, k))
    if kind == "kgraph":
        size = n ** (k * (k - 1) // 2) * math.factorial(k)
        if size > 200:
            raise Refused(f"refused: K^({n})({k}) has {size} elements (limit 200 for homology)")
    else:
        _guard(n, k, "homology", limit=200)
    return homology(order_complex(_poset_for(kind, n, k)))


# ------------------------------------------------------------------ commands

def cmd_enumerate(a):
    _guard(a.n, a.k, "enumeration")
    objs = enumerate_objects(a.n, a.k, a.milgram)
    if a.json:
        return _dump([render(e) for e in objs])
    return "".join(render(e) + "\n" for e in objs)


def cmd_counts(a):
    return shape_counts(a.n, a.kmax, cross_check_upto=a.cross_check).to_csv()


def cmd_hom(a):
    x, y = _expr(a.source, a.n), _expr(a.target, a.n)
    return "yes\n" if hom_exists(x, y) else "no\n"


def cmd_witness(a):
    x, y = _expr(a.source, a.n), _expr(a.target, a.n)
    chain = reachability_witness(x, y, a.n)
    if chain is None:
        return "no\n" if not a.json else _dump({"source": render(x), "target": render(y), "steps": None})
    if a.json:
        return _dump(witness_to_json(x, chain))
    lines = [render(x)]
    for step, e in chain:
        split = " ".join(f"{k}={render(v)}" for k, v in zip("xyzw", (step.x, step.y, step.z, step.w)))
        lines.append(f"  -> {render(e)}    [interchange {step.i}<{step.j} at {list(step.path)}: {split}]")
    return "\n".join(lines) + "\n"


def cmd_hasse(a):
    _guard(a.n, a.k, "Hasse diagram")
    return build_poset(a.n, a.k, a.milgram).to_dot(f"M{a.n}_{a.k}", a.edges)


def cmd_homology(a):
    return _dump(_homology_report(a.complex, a.n, a.k).to_json())


def cmd_downset(a):
    x = _expr(a.expr, a.n)
    _guard(a.n, len(leaves(x)), "downset")
    p = downset(a.n, x, milgram_only=not a.full)
    if a.dot:
        return p.to_dot("downset")
    return "".join(k + "\n" for k in p.keys)


def cmd_qmap(a):
    cells = [_expr(c, 2) for c in a.cells]
    if a.k is not None and any(len(leaves(c)) != a.k for c in cells):
        raise ExpressionError(f"every cell must have {a.k} generators")
    out = render(q_map(a.n, cells))
    if a.verbose:
        mids = [render(b) for b in q_intermediates(cells)]
        return "".join(f"B{i + 1} = {m}\n" for i, m in enumerate(mids)) + f"q = {out}\n"
    return out + "\n"


def cmd_gamma(a):
    if a.member:
        s = _chain(a.member)
        ok = gamma_member(s, a.n)
        return "yes\n" if ok else "no\n"
    _guard_gamma(a.n, a.k)
    graded = gamma_simplices(a.n, a.k)
    if a.json:
        return _dump({str(d): [s.to_json()["chain"] for s in v] for d, v in graded.items()})
    return "".join(f"{d},{len(v)}\n" for d, v in graded.items())


def cmd_kgraph(a):
    if a.table:
        t = PairTable.from_json(_load_json(a.table))
        e = from_pair_table(t)
        return (render(e) if e is not None else "not realizable") + "\n"
    size = a.n ** (a.k * (a.k - 1) // 2) * math.factorial(a.k)
    if size > LIMITS.max_objects:
        raise Refused(f"refused: K^({a.n})({a.k}) has {size} elements (limit {LIMITS.max_objects})")
    tables = k_enumerate(a.n, a.k)
    realizable = sum(from_pair_table(t) is not None for t in tables)
    return _dump({"n": a.n, "k": a.k, "elements": len(tables), "realizable": realizable,
                  "unrealizable": len(tables) - realizable})


def cmd_cubes(a):
    if a.action == "realize":
        c = cubes.realize(_expr(a.expr, a.n), a.n)
        return c.to_svg() if a.svg else _dump(c.to_json())
    if a.action == "compose":
        outer = _config(a.config)
        c = cubes.cubes_compose(outer, [_config(x) for x in a.inner])
        return _dump(c.to_json())
    c = _config(a.config)
    if a.action == "check":
        e = _expr(a.expr, c.n)
        ans = cubes.in_F(c, e) if a.F else cubes.in_G(c, e)
        return "yes\n" if ans else "no\n"
    if a.action == "decompose":
        return "yes\n" if cubes.decomposable(c, a.mode) else "no\n"
    if a.action == "shrink":
        s = cubes.shrink(c)
        return s.to_svg() if a.svg else _dump(s.to_json())
    raise UsageError(f"unknown cubes action {a.action!r}", "use check, decompose, shrink, compose or realize")


def cmd_compatible(a):
    x, y = _expr(a.a, a.n), _expr(a.b, a.n)
    ok, w = cubes.g_compatible(x, y, a.n)
    return _dump({"compatible": ok, "witness": w.to_json() if w else None})


def cmd_verify(a):
    from .recipes import run_recipes

    results = run_recipes()
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results]
    if a.exhaustive:
        for n, k in ((2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4)):
            objs = enumerate_objects(n, k)
            m = leq_matrix([pair_table(e, n) for e in objs])
            r = reachability_matrix(objs, n, jobs=a.jobs)
            ok = bool((m == r).all())
            results.append((f"oracle-{n}-{k}", ok, ""))
            lines.append(f"{'PASS' if ok else 'FAIL'} oracle M_{n}({k}): {len(objs)} objects, {len(objs) ** 2} pairs")
    failed = sum(not ok for _, ok, _ in results)
    lines.append(f"{len(results) - failed}/{len(results)} passed")
    out = "\n".join(lines) + "\n"
    return out, (1 if failed else 0)


def cmd_export(a):
    if a.kind == "hasse":
        _guard(a.n, a.k, "Hasse diagram")
        out = build_poset(a.n, a.k, a.milgram).to_dot(f"M{a.n}_{a.k}", a.edges)
    elif a.kind == "homology":
        out = _dump(_homology_report(a.complex, a.n, a.k).to_json())
    elif a.kind == "gamma":
        _guard_gamma(a.n, a.k)
        graded = gamma_simplices(a.n, a.k)
        out = _dump({"n": a.n, "k": a.k,
                     "simplices": {str(d): [s.to_json()["chain"] for s in v] for d, v in graded.items()}})
    elif a.kind == "qmap":
        if not a.cells:
            raise UsageError("qmap export needs --cells", "pass n-1 permutohedron cells after --cells")
        cells = [_expr(c, 2) for c in a.cells]
        if a.k is not None and any(len(leaves(c)) != a.k for c in cells):
            raise ExpressionError(f"every cell must have {a.k} generators")
        out = render(q_map(a.n, cells)) + "\n"
    elif a.kind == "cubes":
        if not a.expr:
            raise UsageError("cubes export needs --expr", 'e.g. --expr "(1 #2 2) #1 3"')
        c = cubes.realize(_expr(a.expr, a.n), a.n)
        out = c.to_svg() if a.svg else _dump(c.to_json())
    else:
        raise UsageError(f"unknown export kind {a.kind!r}", "choose hasse, homology, gamma, qmap or cubes")
    if a.out:
        Path(a.out).write_text(out)
        return f"wrote {a.out}\n"
    return out


# ------------------------------------------------------------------- parser

def _positive(name: str, lo: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"{name} must be >= {lo}")
        return v

    return conv


N = _positive("--n", 1)
K = _positive("--k", 0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mol", fromfile_prefix_chars="@",
                                description="Iterated monoidal categories: coherence, enumeration, homology, cubes.")
    p.add_argument("--seed", type=int, default=SAMPLING.seed, help="seed for randomized checks")
    p.add_argument("--jobs", type=_positive("--jobs", 1), default=None,
                   help="worker processes (default: $MOL_JOBS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", help="list the objects of M_n(k)")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("--k", type=K, required=True)
    s.add_argument("--milgram", action="store_true", help="level-ordered objects only")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("counts", help="shape counts a_k and object counts k! a_k as CSV")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("--kmax", type=K, required=True)
    s.add_argument("--cross-check", type=K, default=0, help="verify rows up to this k by enumeration")
    s.set_defaults(func=cmd_counts)

    s = sub.add_parser("hom", help="decide whether a morphism A -> B exists")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(func=cmd_hom)

    s = sub.add_parser("witness", help="shortest interchange chain A -> B")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("hasse", help="Hasse diagram of M_n(k) as DOT")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("--k", type=K, required=True)
    s.add_argument("--milgram", action="store_true")
    s.add_argument("--edges", choices=["covers", "relations"], default="covers",
                   help="covering relations (Hasse) or every morphism")
    s.set_defaults(func=cmd_hasse)

    s = sub.add_parser("homology", help="integer homology of a nerve or Gamma complex (JSON)")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("--k", type=K, required=True)
    s.add_argument("--complex", choices=["order", "milgram", "kgraph", "gamma"], default="order")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("downset", help="all objects mapping into X")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("expr")
    s.add_argument("--full", action="store_true", help="use all of M_n(k), not just the Milgram objects")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_downset)

    s = sub.add_parser("qmap", help="q(A_1, ..., A_{n-1}) for permutohedron cells")
    s.add_argument("--n", type=_positive("--n", 2), required=True)
    s.add_argument("--k", type=K, default=None)
    s.add_argument("--verbose", action="store_true", help="also print the retracted cells")
    s.add_argument("cells", nargs="+")
    s.set_defaults(func=cmd_qmap)

    s = sub.add_parser("gamma", help="Gamma^(n)(k) simplex counts or membership")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("--k", type=K, default=3)
    s.add_argument("--member", help='chain of permutations, e.g. "123 213 231 213"')
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("kgraph", help="K^(n)(k) summary, or realize a pair table")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("--k", type=K, default=3)
    s.add_argument("--table", help="pair table JSON (inline or path)")
    s.set_defaults(func=cmd_kgraph)

    s = sub.add_parser("cubes", help="little cubes: check | decompose | shrink | compose | realize")
    s.add_argument("action", choices=["check", "decompose", "shrink", "compose", "realize"])
    s.add_argument("--config", help="configuration JSON (inline or path); the outer one for compose")
    s.add_argument("--inner", action="append", default=[], help="inner configuration for compose (repeat)")
    s.add_argument("--expr", help="expression for check and realize")
    s.add_argument("--n", type=N, default=2)
    s.add_argument("--F", action="store_true", help="check membership in F(A) instead of G(A)")
    s.add_argument("--mode", choices=["plain", "milgram"], default="plain")
    s.add_argument("--svg", action="store_true")
    s.set_defaults(func=cmd_cubes)

    s = sub.add_parser("compatible", help="decide whether G(A) and G(B) meet")
    s.add_argument("--n", type=N, required=True)
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_compatible)

    s = sub.add_parser("verify-paper", help="run every stored worked-example recipe")
    s.add_argument("--exhaustive", action="store_true", help="also run the rewrite-oracle comparison")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export", help="write DOT/JSON/text artefacts")
    s.add_argument("kind", choices=["hasse", "homology", "gamma", "qmap", "cubes"])
    s.add_argument("--n", type=N, required=True)
    s.add_argument("--k", type=K, default=None)
    s.add_argument("--milgram", action="store_true")
    s.add_argument("--edges", choices=["covers", "relations"], default="relations",
                   help="every morphism (the 1-skeleton of the nerve, default) or covering relations only")
    s.add_argument("--complex", choices=["order", "milgram", "kgraph", "gamma"], default="order")
    s.add_argument("--cells", nargs="+")
    s.add_argument("--expr")
    s.add_argument("--svg", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_export)
    return p


_NEEDS_K = {"hasse", "homology", "gamma"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs is None:
        args.jobs = default_jobs()
    try:
        if args.command == "export" and args.kind in _NEEDS_K and args.k is None:
            raise UsageError(f"export {args.kind} needs --k", f"e.g. mol export {args.kind} --n 2 --k 3")
        if args.command == "cubes":
            if args.action in ("check", "decompose", "shrink", "compose") and not args.config:
                raise UsageError(f"cubes {args.action} needs --config", "pass configuration JSON or a path")
            if args.action in ("check", "realize") and not args.expr:
                raise UsageError(f"cubes {args.action} needs --expr", 'e.g. --expr "1 #1 2"')
        result = args.func(args)
    except UsageError as exc:
        print(f"mol: error: {exc}", file=sys.stderr)
        print(f"hint: {exc.hint}", file=sys.stderr)
        return 2
    except (Refused, ExpressionError, ValueError) as exc:
        print(f"mol: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(result, tuple):
        result, code = result
    sys.stdout.write(result)
    return code


if __name__ == "__main__":
    sys.exit(main())
