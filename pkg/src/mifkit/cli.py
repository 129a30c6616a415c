"""Command line front end: ``mifkit <group> <command> [options]``.

Every run prints a JSON document with a ``config`` block echoing the
resolved arguments and a ``result`` block (or, with ``--format csv``, a CSV
table on stdout and the configuration on stderr).

Exit codes: 0 success, 2 heuristic or inconclusive verdict, 1 numerical or
library error, 64 usage error, 65 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import bm, clark, debranges as db, inner_core as ic, model_fd as mf, toeplitz_order as to
from .errors import InputError, MifError

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_SCHEMA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """``ArgumentParser`` that raises instead of exiting with status 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ----------------------------------------------------------------------------
# Input helpers
# ----------------------------------------------------------------------------


def _load_json(spec: str) -> Any:
    """Inline JSON (starting with ``{`` or ``[``) or a path to a JSON file."""
    text = spec.strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(spec).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {spec!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {spec!r}: {exc.msg}") from None


def _mif(spec: str) -> ic.MifDescriptor:
    return ic.MifDescriptor.from_json(_load_json(spec))


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InputError(f"not a complex number: {text!r}") from None


def _unimodular(text: str) -> complex:
    a = _complex(text)
    if abs(abs(a) - 1) > 1e-12:
        raise InputError(f"alpha must be unimodular, got {text}")
    return a


def _grid(args) -> np.ndarray:
    if args.x:
        return np.asarray(args.x, dtype=float)
    lo, hi = args.window
    return np.linspace(lo, hi, args.n)


def _cnum(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


class Output:
    """Result payload, optional CSV rendering and the exit status."""

    def __init__(self, result: dict, csv_text: str | None = None, status: int = EXIT_OK):
        self.result, self.csv_text, self.status = result, csv_text, status


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------


def cmd_mif(args) -> Output:
    desc = _mif(args.mif)
    if args.command == "eval":
        zs = [_complex(z) for z in args.z]
        vals = np.atleast_1d(ic.eval_mif(desc, np.asarray(zs), tol=args.tol))
        rows = [(z.real, z.imag, v.real, v.imag) for z, v in zip(zs, vals)]
        return Output({"points": [_cnum(z) for z in zs], "values": [_cnum(v) for v in vals]},
                      _csv(["z_re", "z_im", "re", "im"], rows))
    xs = _grid(args)
    fn = ic.arg_mif if args.command == "arg" else ic.darg_mif
    ys = np.atleast_1d(fn(desc, xs, tol=args.tol))
    return Output({"x": xs.tolist(), args.command: ys.tolist()}, _csv(["x", args.command], zip(xs, ys)))


def cmd_clark(args) -> Output:
    alpha = _unimodular(args.alpha)
    if args.command == "forward":
        mu = clark.clark_measure(_mif(args.mif), alpha, args.window)
        return Output(mu.to_json(), mu.to_csv())
    if args.command == "inverse":
        mu = clark.AtomicMeasure.from_json(_load_json(args.measure))
        zs = [_complex(z) for z in args.z]
        vals = np.atleast_1d(clark.mif_from_measure(mu, np.asarray(zs), alpha))
        rows = [(z.real, z.imag, v.real, v.imag) for z, v in zip(zs, vals)]
        return Output({"points": [_cnum(z) for z in zs], "values": [_cnum(v) for v in vals]},
                      _csv(["z_re", "z_im", "re", "im"], rows))
    # recover
    desc = _mif(args.mif)
    mu = clark.clark_measure(desc, alpha, args.window)
    rec = _load_json(args.samples)
    try:
        xs = np.asarray(rec["x"], float)
        vals = np.asarray([complex(v[0], v[1]) for v in rec["values"]])
    except (KeyError, TypeError, IndexError, ValueError):
        raise InputError("samples need 'x' and 'values' ([re, im] pairs)") from None
    if xs.size != mu.xs.size or not np.allclose(xs, mu.xs, atol=1e-8, rtol=0):
        raise InputError("sample locations must match the atoms of the Clark measure in the window")
    zs = [_complex(z) for z in args.z]
    out = np.atleast_1d(clark.clark_recover(vals, desc, np.asarray(zs), alpha=alpha, measure=mu))
    rows = [(z.real, z.imag, v.real, v.imag) for z, v in zip(zs, out)]
    return Output({"points": [_cnum(z) for z in zs], "values": [_cnum(v) for v in out]},
                  _csv(["z_re", "z_im", "re", "im"], rows))


def cmd_kernel(args) -> Output:
    I = mf.RationalInner.from_json(_load_json(args.I))
    J = mf.RationalInner.from_json(_load_json(args.J))
    res = mf.toeplitz_kernel(I, J)
    basis = [f.to_json() for f in res.basis]
    return Output({"dim": res.dim, "certified": res.certified, "basis": basis,
                   "relation": mf.order_relation(I, J)}, mf.kernel_basis_csv(res))


def _verdict_status(v: to.OrderVerdict) -> int:
    return EXIT_OK if v.exact else EXIT_INCONCLUSIVE


def cmd_order(args) -> Output:
    I, J = _mif(args.I), _mif(args.J)
    v = to.order_verdict(I, J, xmax=args.xmax)
    rows = [(e.test, e.value, e.threshold, e.outcome) for e in v.evidence]
    return Output(v.to_json(), _csv(["test", "value", "threshold", "outcome"], rows), _verdict_status(v))


def _points(args):
    if args.generator:
        params = _load_json(args.params) if args.params else {}
        return ic.generator_from_spec(args.generator, params)
    data = _load_json(args.points)
    if isinstance(data, dict):
        data = data.get("points")
    try:
        return np.asarray([complex(p[0], p[1]) if isinstance(p, list) else float(p) for p in data])
    except (TypeError, ValueError, IndexError):
        raise InputError("points must be numbers or [re, im] pairs") from None


def cmd_bm(args) -> Output:
    if args.command == "density":
        r = bm.bm_density(_points(args), extent=args.extent)
        return Output(r.to_json(), _csv(["l", "r"], r.witness.intervals.tolist()))
    if args.command == "kappa":
        rec = _load_json(args.profile)
        try:
            g = ic.GridFunction(np.asarray(rec["x"], float), np.asarray(rec["y"], float))
        except (KeyError, TypeError, ValueError):
            raise InputError("profile needs numeric 'x' and 'y' arrays") from None
        prof = bm.gamma_decompose(g, args.kappa)
        total, verdict = bm.kappa_almost_decreasing(g, args.kappa)
        status = EXIT_INCONCLUSIVE if verdict == "window-limited" else EXIT_OK
        return Output({"weight_sum": total, "verdict": verdict,
                       "components": prof.components.intervals.tolist()},
                      _csv(["x", "gamma", "gstar"], zip(g.xs, g.ys, prof.gstar.ys)), status)
    if args.command == "theorem10":
        r = bm.theorem10_diagnostic(_mif(args.U), _mif(args.J), args.eps, args.kappa, xmax=args.xmax)
        return Output(r.to_json(), None, EXIT_INCONCLUSIVE if r.verdict == "gap" else EXIT_OK)
    # type
    mu = clark.AtomicMeasure.from_json(_load_json(args.measure))
    r = bm.type_estimate(mu, args.window, tol=args.tol)
    return Output(r.to_json(), None, EXIT_INCONCLUSIVE)


def _entire(spec: str, E: db.HBFunction):
    kind, _, rest = spec.partition(":")
    if kind == "E":
        return E
    if kind == "kernel":
        lam = _complex(rest)
        return lambda z: db.reproducing_kernel(E, lam, z)
    if kind == "poly":
        coeffs = np.asarray([_complex(c) for c in rest.split(",")])
        return lambda z: np.polynomial.polynomial.polyval(np.asarray(z, complex), coeffs)
    if kind == "sinc":
        ts = np.asarray([float(t) for t in rest.split(",")])
        return lambda z: np.sum(np.sinc(np.asarray(z, complex)[..., None] - ts), axis=-1)
    raise InputError(f"unknown entire-function spec {spec!r} (use E, kernel:LAM, poly:C0,C1,..., sinc:T1,...)")


def cmd_db(args) -> Output:
    E = db.HBFunction.from_json(_load_json(args.E))
    if args.command == "kernel":
        lam = _complex(args.lam)
        zs = [_complex(z) for z in args.z]
        vals = np.atleast_1d(db.reproducing_kernel(E, lam, np.asarray(zs)))
        rows = [(z.real, z.imag, v.real, v.imag) for z, v in zip(zs, vals)]
        return Output({"lambda": _cnum(lam), "points": [_cnum(z) for z in zs],
                       "values": [_cnum(v) for v in vals]}, _csv(["z_re", "z_im", "re", "im"], rows))
    if args.command == "basis":
        pts, G = db.clark_basis_gram(E, _unimodular(args.alpha), args.window)
        off = G - np.diag(np.diag(G))
        mu = db.spectral_measure(E, _unimodular(args.alpha), args.window)
        return Output({"points": pts.tolist(), "gram_diag": np.real(np.diag(G)).tolist(),
                       "max_offdiag": float(np.max(np.abs(off), initial=0.0)),
                       "spectral_masses": mu.masses.tolist()},
                      _csv(["x", "gram_diag", "spectral_mass"], zip(pts, np.real(np.diag(G)), mu.masses)))
    m = db.db_membership(_entire(args.F, E), E)
    return Output(m.to_json())


# ----------------------------------------------------------------------------
# Worked examples
# ----------------------------------------------------------------------------


def _random_zeros(rng, n):
    return rng.uniform(-5, 5, n) + 1j * rng.uniform(0.2, 3, n)


def example1(args) -> Output:
    rng = np.random.default_rng(args.seed)
    rows, ok = [], True
    for n in range(6):
        for k in range(6):
            Bn = mf.RationalInner(_random_zeros(rng, n))
            Bk = mf.RationalInner(_random_zeros(rng, k))
            dim = mf.kernel_dim(Bn, Bk)
            rel = mf.order_relation(Bn, Bk)
            incl = rel in ("dominated", "equivalent")
            equiv = rel == "equivalent"
            match = dim == max(0, n - k) and incl == (n <= k) and equiv == (n == k)
            ok &= match
            rows.append({"n": n, "k": k, "kernel_dim": dim, "inclusion": incl,
                         "equivalent": equiv, "matches_formula": match})
    csv_text = _csv(["n", "k", "kernel_dim", "inclusion", "equivalent", "matches_formula"],
                    [tuple(r.values()) for r in rows])
    return Output({"table": rows, "all_match": ok}, csv_text, EXIT_OK if ok else EXIT_ERROR)


def example2(args) -> Output:
    I = ic.MifDescriptor(generator=ic.example2_generator("I", args.decay))
    J = ic.MifDescriptor(generator=ic.example2_generator("J", args.decay))
    spikes = np.array([2.0 ** (2**k) for k in range(1, 5)])
    conj = to.conjugate_closed_form(J, I, spikes)
    g = np.geomspace(1.0, 2.0**22, 200)
    grid = np.unique(np.concatenate([-g[::-1], [0.0], g, spikes]))
    l3 = to.lemma3_check(I, J, grid)
    rows = [(x, c) for x, c in zip(spikes, conj)]
    return Output({"decay": args.decay, "spikes": spikes.tolist(),
                   "conjugate_at_spikes": conj.tolist(),
                   "lemma3_spread": l3.spread, "lemma3_passed": l3.passed},
                  _csv(["x", "conjugate"], rows), EXIT_INCONCLUSIVE)


def example3(args) -> Output:
    d = {w: ic.MifDescriptor(generator=ic.example3_generator(w, args.C)) for w in "IJL"}
    report, status = {}, EXIT_OK
    for a, b in (("I", "J"), ("J", "L"), ("I", "L")):
        v = to.order_verdict(d[a], d[b], xmax=args.xmax)
        report[f"{a}{b}"] = v.to_json()
        status = max(status, _verdict_status(v))
    rows = [(k, r["relation"], r["exact"]) for k, r in report.items()]
    return Output({"C": args.C, "pairs": report}, _csv(["pair", "relation", "exact"], rows), status)


def example4(args) -> Output:
    d = {k: ic.MifDescriptor(generator=ic.example4_generator(k, args.C)) for k in (1, 2, 3)}
    out = {}
    for a, b in ((1, 2), (2, 3), (1, 3)):
        out[f"I{a}I{b}"] = to.argument_jump(d[a], d[b], xmax=args.xmax)
    rows = [(k, r["left"], r["right"], r["jump"]) for k, r in out.items()]
    return Output({"C": args.C, "jumps": out}, _csv(["pair", "left", "right", "jump"], rows))


def cmd_paper(args) -> Output:
    return {1: example1, 2: example2, 3: example3, 4: example4}[args.number](args)


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="mifkit", description="Meromorphic inner functions, Clark measures and Toeplitz order.")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(group, name, handler, **kw):
        sp = group.add_parser(name, parents=[common], **kw)
        sp.set_defaults(handler=handler, command=name)
        return sp

    g = groups.add_parser("mif").add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub(g, "eval", cmd_mif)
    s.add_argument("--mif", required=True)
    s.add_argument("--z", nargs="+", required=True)
    for name in ("arg", "darg"):
        s = sub(g, name, cmd_mif)
        s.add_argument("--mif", required=True)
        s.add_argument("--x", nargs="+", type=float)
        s.add_argument("--window", nargs=2, type=float, default=(-10.0, 10.0))
        s.add_argument("--n", type=int, default=201)

    g = groups.add_parser("clark").add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub(g, "forward", cmd_clark)
    s.add_argument("--mif", required=True)
    s.add_argument("--alpha", default="1")
    s.add_argument("--window", nargs=2, type=float)
    s = sub(g, "inverse", cmd_clark)
    s.add_argument("--measure", required=True)
    s.add_argument("--alpha", default="1")
    s.add_argument("--z", nargs="+", required=True)
    s = sub(g, "recover", cmd_clark)
    s.add_argument("--mif", required=True)
    s.add_argument("--samples", required=True)
    s.add_argument("--alpha", default="1")
    s.add_argument("--window", nargs=2, type=float)
    s.add_argument("--z", nargs="+", required=True)

    g = groups.add_parser("kernel").add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub(g, "rational", cmd_kernel)
    s.add_argument("--I", required=True)
    s.add_argument("--J", required=True)

    g = groups.add_parser("order").add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub(g, "verdict", cmd_order)
    s.add_argument("--I", required=True)
    s.add_argument("--J", required=True)
    s.add_argument("--xmax", type=float, default=1e4)

    g = groups.add_parser("bm").add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub(g, "density", cmd_bm)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--points")
    src.add_argument("--generator", choices=sorted(ic.GENERATORS))
    s.add_argument("--params")
    s.add_argument("--extent", type=float)
    s = sub(g, "kappa", cmd_bm)
    s.add_argument("--profile", required=True)
    s.add_argument("--kappa", type=float, default=0.0)
    s = sub(g, "theorem10", cmd_bm)
    s.add_argument("--U", required=True)
    s.add_argument("--J", required=True)
    s.add_argument("--eps", type=float, default=0.05)
    s.add_argument("--kappa", type=float, default=0.0)
    s.add_argument("--xmax", type=float, default=1e3)
    s = sub(g, "type", cmd_bm)
    s.add_argument("--measure", required=True)
    s.add_argument("--window", nargs=2, type=float)

    g = groups.add_parser("db").add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub(g, "kernel", cmd_db)
    s.add_argument("--E", required=True)
    s.add_argument("--lam", required=True)
    s.add_argument("--z", nargs="+", required=True)
    s = sub(g, "basis", cmd_db)
    s.add_argument("--E", required=True)
    s.add_argument("--alpha", default="1")
    s.add_argument("--window", nargs=2, type=float)
    s = sub(g, "member", cmd_db)
    s.add_argument("--E", required=True)
    s.add_argument("--F", required=True, help="E, kernel:LAM, poly:C0,C1,... or sinc:T1,T2,...")

    g = groups.add_parser("paper").add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub(g, "example", cmd_paper)
    s.add_argument("number", type=int, choices=(1, 2, 3, 4))
    s.add_argument("--C", type=float, default=10.0)
    s.add_argument("--decay", default="1/k")
    s.add_argument("--xmax", type=float, default=1e4)
    return p


def _config(args) -> dict:
    skip = {"handler"}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serialisable: {type(o).__name__}")


def _finite(o):
    """Replace non-finite floats so the output stays strict JSON."""
    if isinstance(o, dict):
        return {k: _finite(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_finite(v) for v in o]
    if isinstance(o, (float, np.floating)) and not math.isfinite(o):
        return "nan" if math.isnan(o) else ("inf" if o > 0 else "-inf")
    return o


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    config = _config(args)
    try:
        out = args.handler(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except MifError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "csv" and out.csv_text is not None:
        sys.stdout.write(out.csv_text)
        print(json.dumps({"config": config}, default=_default), file=sys.stderr)
    else:
        doc = {"config": config, "result": _finite(out.result)}
        print(json.dumps(doc, default=_default, indent=2, allow_nan=False))
    return out.status


if __name__ == "__main__":
    sys.exit(main())
