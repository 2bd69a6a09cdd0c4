"""Command-line interface: ``cofree2as VERB ...`` (or ``python -m cofree2as``).

Exit status: 0 on success, 2 on unparseable input, 3 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import bialgebra, binfty, homology, projector, tensor_models
from .errors import ConsistencyError
from .free2as import (
    DOT,
    STAR,
    FreeElement,
    basis_element,
    dot,
    element_to_json,
    format_basis,
    format_element,
    generating_series_check,
    parse_element,
    star,
)
from .linear import format_scalar
from .trees import enumerate_trees, parse_tree, schroeder

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CONSISTENCY = 3


class InputError(ValueError):
    """Bad command-line input (exit status 2)."""


def _basis_json(b) -> dict:
    return {
        "tree": None if b.tree is None else b.tree.encoding,
        "tag": None if b.tree is None else ("star" if b.tag == STAR else "dot"),
        "labels": [str(x) for x in b.labels],
    }


def _tensor_json(t) -> list[dict]:
    items = sorted(t.items(), key=lambda kv: tuple(b.sort_key() for b in kv[0]))
    return [{"coeff": str(Fraction(c)), "factors": [_basis_json(b) for b in key]} for key, c in items]


def _binfty_json(x) -> list[dict]:
    return [{"coeff": str(Fraction(c)), "tree": t.tree.encoding, "labels": list(map(str, t.labels))} for t, c in x.sorted_items()]


class Runner:
    def __init__(self, args: argparse.Namespace, out):
        self.args = args
        self.out = out

    def emit(self, text: str, data=None) -> None:
        if self.args.json:
            self.out.write(json.dumps(data, sort_keys=False) + "\n")
        else:
            self.out.write(text + "\n")

    def element(self, text: str) -> FreeElement:
        try:
            x = parse_element(text)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if any(d > self.args.degree_bound for d in x.degrees()):
            raise InputError(f"element degree exceeds --degree-bound {self.args.degree_bound}")
        return x

    def degree(self, n: int, what: str) -> int:
        if n > self.args.degree_bound:
            raise InputError(f"{what} {n} exceeds --degree-bound {self.args.degree_bound}")
        return n

    def emit_element(self, x: FreeElement) -> None:
        self.emit(format_element(x), element_to_json(x))

    # --- verbs ---------------------------------------------------------------

    def trees(self) -> int:
        a = self.args
        if a.action == "enumerate":
            if a.n < 1:
                raise InputError("no trees of degree 0")
            ts = enumerate_trees(self.degree(a.n, "degree"))
            self.emit("\n".join(t.encoding for t in ts), [t.encoding for t in ts])
        else:
            if a.n < 0:
                raise InputError("n must be nonnegative")
            v = schroeder(a.n)
            self.emit(str(v), v)
        return EXIT_OK

    def mul(self) -> int:
        x, y = self.element(self.args.A), self.element(self.args.B)
        self.emit_element(star(x, y) if self.args.op == "star" else dot(x, y))
        return EXIT_OK

    def coprod(self) -> int:
        x = self.element(self.args.A)
        t = bialgebra.coproduct(x, bialgebra.DELTA if self.args.which == "delta" else bialgebra.DELTA2)
        self.emit(bialgebra.format_tensor(t), _tensor_json(t))
        return EXIT_OK

    def antipode(self) -> int:
        self.emit_element(bialgebra.antipode(self.element(self.args.A)))
        return EXIT_OK

    def prim(self) -> int:
        a = self.args
        n = self.degree(a.n, "degree")
        labels = None
        if a.generator_mode == "decorated":
            if not a.labels:
                raise InputError("decorated mode needs --labels (one per leaf)")
            labels = [s.strip() for s in a.labels.split(",")]
        basis = bialgebra.primitive_basis(n, labels)
        if a.json:
            self.emit("", [element_to_json(x) for x in basis])
        else:
            self.emit("\n".join(format_element(x) for x in basis) if basis else "(none)")
        return EXIT_OK

    def project(self) -> int:
        a = self.args
        if a.matrix is None:
            if a.A is None:
                raise InputError("project needs an element or --matrix N")
            self.emit_element(projector.project(self.element(a.A)))
            return EXIT_OK
        n = self.degree(a.matrix, "degree")
        if n < 1:
            raise InputError("degree must be positive")
        e = projector.idempotent_e(projector.Free2asModel(DOT, bialgebra.DELTA), check=False)
        text = e.dump(n)
        lines = text.splitlines()
        entries = [[int(i), int(j), v] for i, j, v in (ln.split() for ln in lines[1:])]
        size = len(e.model.basis(n))
        basis = [format_basis(b) for b in e.model.basis(n)]
        self.emit(text.rstrip("\n"), {"name": "e", "degree": n, "rows": size, "cols": size, "basis": basis, "entries": entries})
        return EXIT_OK

    def omega(self) -> int:
        try:
            t = parse_tree(self.args.t)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        self.degree(t.degree, "tree degree")
        labels = [s.strip() for s in self.args.labels.split(",")] if self.args.labels else None
        if labels is not None and len(labels) != t.degree:
            raise InputError(f"{len(labels)} labels for a tree of degree {t.degree}")
        if t.degree < 2:
            raise InputError("omega needs a tree of degree >= 2")
        self.emit_element(projector.omega(t, labels))
        return EXIT_OK

    def mpq(self) -> int:
        a = self.args
        if a.p < 1 or a.q < 1:
            raise InputError("p and q must be positive")
        if len(a.ARGS) != a.p + a.q:
            raise InputError(f"M_{a.p}{a.q} takes {a.p + a.q} arguments, got {len(a.ARGS)}")
        if a.free:
            try:
                trees = [binfty.DecoratedTree.parse(s) if s[:1] in "(|" else binfty.DecoratedTree(parse_tree("|"), (s,)) for s in a.ARGS]
            except ValueError as exc:
                raise InputError(str(exc)) from exc
            self.degree(sum(t.degree for t in trees), "total degree")
            value = binfty.free_compose_mpq(trees[:a.p], trees[a.p:])
            self.emit(str(value), _binfty_json(value))
        else:
            elems = [self.element(s) if s[:1] in "(|0123456789-" else FreeElement.of(basis_element(parse_tree("|"), DOT, (s,))) for s in a.ARGS]
            self.emit_element(binfty.mpq_in_2as(elems[:a.p], elems[a.p:]))
        return EXIT_OK

    def expand(self) -> int:
        try:
            t = parse_tree(self.args.t)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if t.is_leaf:
            raise InputError("the trivial tree carries no operation")
        self.degree(t.degree, "tree degree")
        labels = [s.strip() for s in self.args.labels.split(",")] if self.args.labels else None
        if labels is not None and len(labels) != t.degree:
            raise InputError(f"{len(labels)} labels for a tree of degree {t.degree}")
        expr = binfty.expand_Mt(t, labels)
        value = binfty.evaluate(expr)
        target = binfty.DecoratedTree(t, tuple(labels) if labels else tuple(f"v{i + 1}" for i in range(t.degree)))
        if value != binfty.BInftyElement.basis(target):
            raise ConsistencyError("expansion does not evaluate to the tree")
        text = binfty.to_sexpr(expr)
        self.emit(text, {"tree": t.encoding, "sexpr": text})
        return EXIT_OK

    def check(self) -> int:
        a = self.args
        i, j, k = a.i, a.j, a.k
        if min(i, j, k) < 1:
            raise InputError("i, j, k must be positive")
        self.degree(i + j + k, "i+j+k")
        ok = binfty.check_Rijk(i, j, k, samples=a.samples, seed=a.seed)
        self.emit(f"R_{i}{j}{k}: {'ok' if ok else 'FAILED'}", {"relation": [i, j, k], "seed": a.seed, "samples": a.samples, "ok": ok})
        return EXIT_OK if ok else EXIT_CONSISTENCY

    def iso(self) -> int:
        n = self.degree(self.args.n, "degree")
        if n < 1:
            raise InputError("degree must be positive")
        labels = None
        if self.args.generator_mode == "decorated":
            labels = [s.strip() for s in (self.args.labels or "u,v").split(",")]
        model = projector.Free2asModel(DOT, bialgebra.DELTA, labels)
        prims = projector.primitive_data(model, n)
        e = projector.idempotent_e(model)
        G, F = projector.iso_G(model, prims, e), projector.iso_F(model, prims)
        alphabet = prims.alphabet()
        report = []
        ok_all = True
        for d in range(0, n + 1):
            fg = all(F(G({k: 1}).terms) == ({} if d == 0 else {k: 1}) for k in model.basis(d))
            gf = all(G(F({w: 1})).terms == {w: 1} for w in alphabet.words(d)) if d else True
            ok_all &= fg and gf
            report.append({"degree": d, "dim": len(model.basis(d)), "FG_is_J": fg, "GF_is_Id": gf})
        text = "\n".join(f"degree {r['degree']}: dim {r['dim']} F.G=J {'ok' if r['FG_is_J'] else 'FAILED'} G.F=Id {'ok' if r['GF_is_Id'] else 'FAILED'}" for r in report)
        self.emit(text, report)
        return EXIT_OK if ok_all else EXIT_CONSISTENCY

    def theta(self) -> int:
        x = self.element(self.args.A)
        try:
            v = tensor_models.theta(x)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        self.emit(format_scalar(v), str(Fraction(v)))
        return EXIT_OK

    def homology(self) -> int:
        a = self.args
        try:
            ranks = homology.homology_ranks(a.product, a.d, a.degree_bound)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        self.emit(" ".join(map(str, ranks)), {"product": a.product, "degree": a.d, "ranks": ranks})
        return EXIT_OK

    def series(self) -> int:
        ok = generating_series_check(self.args.order)
        self.emit("true" if ok else "false", ok)
        return EXIT_OK if ok else EXIT_CONSISTENCY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cofree2as", description="Exact computations in the free 2as bialgebra on planar trees.")
    p.add_argument("--degree-bound", type=int, default=6, help="largest degree accepted (default 6)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--generator-mode", choices=["single", "decorated"], default="single")
    p.add_argument("--labels", help="comma-separated labels for decorated mode")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    sub = p.add_subparsers(dest="verb", required=True)

    t = sub.add_parser("trees", help="enumerate trees or count them")
    t.add_argument("action", choices=["enumerate", "schroeder"])
    t.add_argument("-n", type=int, required=True)

    m = sub.add_parser("mul", help="product of two elements")
    m.add_argument("--op", choices=["star", "dot"], required=True)
    m.add_argument("A")
    m.add_argument("B")

    c = sub.add_parser("coprod", help="coproduct of an element")
    c.add_argument("--which", choices=["delta", "delta2"], default="delta")
    c.add_argument("A")

    s = sub.add_parser("antipode", help="antipode of (2as, *, delta)")
    s.add_argument("A")

    pr = sub.add_parser("prim", help="primitive basis in a degree")
    pr.add_argument("action", choices=["basis"])
    pr.add_argument("-n", type=int, required=True)
    pr.add_argument("--labels", dest="local_labels", help="comma-separated leaf labels")

    pj = sub.add_parser("project", help="apply the idempotent e, or dump its matrix")
    pj.add_argument("A", nargs="?")
    pj.add_argument("--matrix", type=int, metavar="N", help="dump the matrix of e on degree N (one generator)")

    o = sub.add_parser("omega", help="e(t*) - t*")
    o.add_argument("-t", required=True)
    o.add_argument("--labels", dest="local_labels", help="comma-separated leaf labels")

    q = sub.add_parser("mpq", help="M_pq in 2as (default) or in the free B-infinity algebra (--free)")
    q.add_argument("-p", type=int, required=True)
    q.add_argument("-q", type=int, required=True)
    q.add_argument("--free", action="store_true")
    q.add_argument("ARGS", nargs="+")

    ex = sub.add_parser("expand", help="write a tree operation through generators M_pq")
    ex.add_argument("-t", required=True)
    ex.add_argument("--labels", dest="local_labels", help="comma-separated leaf labels")

    ck = sub.add_parser("check", help="check a relation R_ijk on random inputs")
    ck.add_argument("relation", choices=["rijk"])
    ck.add_argument("-i", type=int, required=True)
    ck.add_argument("-j", type=int, required=True)
    ck.add_argument("-k", type=int, required=True)
    ck.add_argument("--samples", type=int, default=3)
    ck.add_argument("--seed", dest="local_seed", type=int, help="seed for the random inputs")

    iso = sub.add_parser("iso", help="check F.G = J and G.F = Id up to a degree")
    iso.add_argument("action", choices=["roundtrip"])
    iso.add_argument("-n", type=int, required=True)
    iso.add_argument("--labels", dest="local_labels", help="comma-separated leaf labels")

    th = sub.add_parser("theta", help="theta of a one-generator element")
    th.add_argument("A")

    h = sub.add_parser("homology", help="ranks of the b' complex")
    h.add_argument("--product", choices=["star", "dot", "2as"], required=True)
    h.add_argument("-d", type=int, required=True)

    se = sub.add_parser("series", help="generating series identity")
    se.add_argument("action", choices=["check"])
    se.add_argument("--order", type=int, default=10)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "local_labels", None):
        args.labels = args.local_labels
    if getattr(args, "local_seed", None) is not None:
        args.seed = args.local_seed
    runner = Runner(args, out)
    try:
        return getattr(runner, args.verb)()
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except ConsistencyError as exc:
        err.write(f"consistency failure: {exc}\n")
        return EXIT_CONSISTENCY


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
