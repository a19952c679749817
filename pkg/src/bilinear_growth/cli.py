"""Command line front end.

System files are JSON::

    {
      "dim": 2,
      "sign_class": "nonnegative",
      "operators": [{"name": "*", "coeffs": [{"k": 1, "i": 1, "j": 2, "c": "1"}, ...]}],
      "seeds": [{"name": "s", "entries": ["1", "1"]}]
    }

Indices are 1-based and every number is a string (``"3"``, ``"-2/5"``,
``"0.125"``).  Matrix files are ``{"rows": [["1", "1"], ["0", "1"]]}``.
Exit codes: 0 success, 1 verification failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds as B
from . import reductions as R
from .catalog import CATALOG
from .core import (BilinearMap, BilinearSystem, SignClass, as_scalar,
                   format_scalar, growth_table, live_dimensions, parse_tree,
                   tree_to_string)
from .patterns import LinearPattern, pattern_matrix


class InputError(Exception):
    """Malformed file or argument; maps to exit code 2."""


class VerificationFailure(Exception):
    """A check ran and failed; maps to exit code 1."""


# --- serialisation -------------------------------------------------------------------

def system_to_doc(system: BilinearSystem) -> dict:
    return {
        "dim": system.dim,
        "sign_class": system.sign_class.value,
        "operators": [
            {"name": name,
             "coeffs": [{"k": k + 1, "i": i + 1, "j": j + 1, "c": format_scalar(c)}
                        for (k, i, j), c in sorted(op.coeffs.items())]}
            for name, op in zip(system.op_names, system.operators)
        ],
        "seeds": [{"name": name, "entries": [format_scalar(x) for x in s]}
                  for name, s in zip(system.seed_names, system.seeds)],
    }


def format_system(system: BilinearSystem) -> str:
    return json.dumps(system_to_doc(system), indent=2, ensure_ascii=False) + "\n"


def _scalar(x, where):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InputError(f"{where}: expected a number string, got {x!r}")
    try:
        return as_scalar(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: bad number {x!r}") from exc


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: expected an integer, got {x!r}")
    return x


def system_from_doc(doc) -> BilinearSystem:
    if not isinstance(doc, dict):
        raise InputError("system file must be a JSON object")
    for key in ("dim", "operators", "seeds"):
        if key not in doc:
            raise InputError(f"missing field {key!r}")
    dim = _int(doc["dim"], "dim")
    ops, op_names = [], []
    for n, op in enumerate(doc["operators"]):
        coeffs = {}
        for t, term in enumerate(op.get("coeffs", [])):
            where = f"operators[{n}].coeffs[{t}]"
            try:
                key = tuple(_int(term[x], where) - 1 for x in ("k", "i", "j"))
                c = _scalar(term["c"], where)
            except (KeyError, TypeError) as exc:
                raise InputError(f"{where}: needs k, i, j, c") from exc
            if key in coeffs:
                raise InputError(f"{where}: duplicate coefficient")
            coeffs[key] = c
        ops.append(BilinearMap(dim, coeffs))
        op_names.append(str(op.get("name", "*")))
    seeds, seed_names = [], []
    for n, seed in enumerate(doc["seeds"]):
        entries = seed.get("entries") if isinstance(seed, dict) else None
        if not isinstance(entries, list):
            raise InputError(f"seeds[{n}]: needs an entries list")
        seeds.append(tuple(_scalar(x, f"seeds[{n}]") for x in entries))
        seed_names.append(str(seed.get("name", "s")))
    sign = doc.get("sign_class")
    try:
        sign_class = SignClass(sign) if sign is not None else None
    except ValueError as exc:
        raise InputError(f"unknown sign_class {sign!r}") from exc
    if sign_class is None:
        from .core import infer_sign_class
        sign_class = infer_sign_class(ops, seeds)
    return BilinearSystem(dim, tuple(ops), tuple(seeds), sign_class, tuple(seed_names), tuple(op_names))


def parse_system(text: str) -> BilinearSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc
    try:
        return system_from_doc(doc)
    except InputError:
        raise
    except (ValueError, TypeError, AttributeError) as exc:
        raise InputError(str(exc)) from exc


def parse_matrix(text: str) -> tuple:
    try:
        doc = json.loads(text)
        rows = doc["rows"]
        return tuple(tuple(_scalar(x, "rows") for x in row) for row in rows)
    except InputError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"bad matrix file: {exc}") from exc


def format_matrix(a) -> str:
    return json.dumps({"rows": [[format_scalar(x) for x in row] for row in a]}) + "\n"


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def load_system(path) -> BilinearSystem:
    if path in CATALOG:
        return CATALOG[path]()
    return parse_system(_read(path))


def load_matrix(path):
    return parse_matrix(_read(path))


def _num(text, what):
    try:
        return as_scalar(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"bad {what} {text!r}") from exc


def _vec(text, what):
    return tuple(_num(x, what) for x in text.split(","))


def _fmt_vec(v):
    return "(" + ", ".join(format_scalar(x) for x in v) + ")"


def _tree(system, tree):
    return tree_to_string(tree, system.seed_names, system.op_names)


# --- commands ------------------------------------------------------------------------------

def cmd_growth(args, out):
    system = load_system(args.file)
    table = growth_table(system, args.n)
    head = ["n", "g(n)", "≈ g(n)^(1/n)"]
    if args.per_dim:
        head += [f"g_{k + 1}(n)" for k in range(system.dim)]
    print("\t".join(head), file=out)
    for n in range(1, args.n + 1):
        g = table.g(n)
        row = [str(n), format_scalar(g), f"{float(g) ** (1 / n):.6f}" if g > 0 else "0"]
        if args.per_dim:
            row += [format_scalar(x) for x in table.g_i(n)]
        print("\t".join(row), file=out)


def cmd_bounds(args, out):
    system = load_system(args.file)
    rep = B.bounds_report(system, args.pattern_size, args.cert_depth)
    print("lower bounds  x_n = max_i max_{|P|=n} M(P)_ii", file=out)
    for step in rep.lower_steps:
        pat = step.pattern.to_string(system) if step.pattern else "-"
        idx = step.index + 1 if step.index is not None else "-"
        print(f"  n={step.n}\tx_n={format_scalar(step.x)}\t≈ {step.root:.9f}\ti={idx}\t{pat}", file=out)
    if rep.pattern_rate is not None:
        enc = rep.pattern_rate
        print(f"pattern rate  ≈ [{enc.lo:.9f}, {enc.hi:.9f}]  |P|={len(rep.rate_pattern)}  "
              f"{rep.rate_pattern.to_string(system)}", file=out)
    w = rep.weight
    print(f"weight cert   lambda <= {format_scalar(w.bound)}  w={_fmt_vec(w.w)} gamma={format_scalar(w.gamma)} "
          f"c={format_scalar(w.c)}", file=out)
    g = rep.graded
    print(f"graded cert   lambda <= {format_scalar(g.gamma)} ≈ {float(g.gamma):.9f}  depth N={g.N}", file=out)
    print(f"sandwich      ≈ {rep.lower:.9f} <= lambda <= ≈ {rep.upper:.9f}  "
          f"({rep.lower_source} / {rep.upper_source})", file=out)
    if not rep.consistent:
        raise VerificationFailure("lower bound exceeds upper bound")


def cmd_decide(args, out):
    system = load_system(args.file)
    theta = _num(args.theta, "theta")
    verdict = B.decide_threshold(system, theta, args.budget)
    if isinstance(verdict, B.GreaterThan):
        n = verdict.pattern.leaf_count
        i = verdict.index + 1
        print(f"GREATER: pattern |P|={n}, M[{i},{i}]={format_scalar(verdict.value)} > "
              f"{format_scalar(Fraction(theta) ** n)}", file=out)
        print(f"pattern: {verdict.pattern.to_string(system)}", file=out)
        print(f"replay: verify certificate {args.file} --pattern '{verdict.pattern.to_string(system)}' "
              f"--index {i} --theta {format_scalar(theta)}", file=out)
    elif isinstance(verdict, B.AtMostCertified):
        cert = verdict.certificate
        if isinstance(cert, B.WeightCertificate):
            print(f"AT-MOST: weight certificate w={_fmt_vec(cert.w)}, gamma={format_scalar(cert.gamma)}, "
                  f"c={format_scalar(cert.c)} gives lambda <= {format_scalar(cert.bound)}", file=out)
            print(f"replay: verify certificate {args.file} --weight {','.join(map(format_scalar, cert.w))} "
                  f"--gamma {format_scalar(cert.gamma)}", file=out)
        else:
            print(f"AT-MOST: graded certificate N={cert.N}, gamma={format_scalar(cert.gamma)} "
                  f"gives lambda <= {format_scalar(cert.gamma)}", file=out)
            print(f"replay: verify certificate {args.file} --graded {cert.N} "
                  f"--gamma {format_scalar(cert.gamma)}", file=out)
    else:
        print(f"UNRESOLVED: budget spent ({verdict.spent} units), pattern levels <= {verdict.pattern_levels}, "
              f"best lower ≈ {verdict.best_lower:.9f}", file=out)


def cmd_embed(args, out):
    kind = args.kind
    if kind in ("two-seeds", "two-ops"):
        if len(args.inputs) != 1:
            raise InputError(f"embed {kind} takes one system file")
        system = load_system(args.inputs[0])
        try:
            emb = R.embed_system(system)
        except R.MisuseError as exc:
            raise InputError(str(exc)) from exc
        if emb.provenance["construction"] != kind:
            raise InputError(f"system shape does not match {kind}")
    else:
        if len(args.inputs) != 2:
            raise InputError(f"embed {kind} takes two matrix files")
        a, b = (load_matrix(p) for p in args.inputs)
        if kind == "jsr":
            emb = R.embed_jsr(a, b)
        elif kind == "mortality":
            emb = R.embed_mortality(a, b, "repaired" if args.repaired else "stated")
        else:
            emb = R.embed_positive(a, b, _num(args.eps0, "eps0"))
    out.write(format_system(emb.system))


def cmd_transform(args, out):
    system = load_system(args.file)
    if args.kind == "insert-zero-odd":
        result = R.transform_insert_zero_odd(system)
    elif args.kind == "append-one":
        result = R.transform_append_one(system)
    else:
        if args.alpha is None:
            raise InputError("ensure-limit needs --alpha")
        result = R.transform_ensure_limit(system, _num(args.alpha, "alpha"))
    out.write(format_system(result))


def _report(rep, system, out):
    if rep.passed:
        print(f"PASS {rep.name}: {rep.checked} checks", file=out)
        return
    check, n, tree = rep.counterexamples[0]
    shown = _tree(system, tree) if tree is not None else "-"
    print(f"FAIL {rep.name}: {len(rep.counterexamples)} counterexamples; first at n={n}: {check}: {shown}",
          file=out)
    raise VerificationFailure(rep.name)


def cmd_verify(args, out):
    if args.kind == "buffer-analysis":
        if len(args.inputs) != 2:
            raise InputError("buffer-analysis takes two matrix files")
        a, b = (load_matrix(p) for p in args.inputs)
        rep = R.verify_buffer_analysis(a, b, args.n_max or 9)
        _report(rep, R.embed_jsr(a, b).system, out)
        return
    if len(args.inputs) != 1:
        raise InputError(f"{args.kind} takes one system file")
    system = load_system(args.inputs[0])
    if args.kind == "congruences":
        if len(system.operators) != 2 or len(system.seeds) != 1:
            raise InputError("congruences expects a system with two operators and one seed")
        emb = R.embed_two_ops(*system.operators, system.seeds[0])
        _report(R.verify_block_congruences(emb, args.n_max or 8), emb.system, out)
    elif args.kind == "insert-zero-odd":
        _report(R.verify_insert_zero_odd(system, args.m_max), system, out)
    else:
        _verify_certificate(system, args, out)


def _verify_certificate(system, args, out):
    modes = [args.weight is not None, args.graded is not None, args.pattern is not None]
    if sum(modes) != 1:
        raise InputError("give exactly one of --weight, --graded, --pattern")
    if args.pattern is not None:
        if args.theta is None or args.index is None:
            raise InputError("--pattern needs --index and --theta")
        tree, mark = parse_tree(args.pattern, system.seed_names, system.op_names)
        if mark is None:
            raise InputError("pattern has no marked leaf u")
        pat = LinearPattern(tree, mark)
        theta = _num(args.theta, "theta")
        i = args.index - 1
        if not 0 <= i < system.dim:
            raise InputError("index out of range")
        if i not in live_dimensions(system):
            print(f"FAIL pattern: dimension {i + 1} is never positive", file=out)
            raise VerificationFailure("pattern")
        value = pattern_matrix(system, pat)[i][i]
        bound = Fraction(theta) ** pat.leaf_count
        if Fraction(value) > bound:
            print(f"PASS pattern: |P|={pat.leaf_count}, M[{i + 1},{i + 1}]={format_scalar(value)} > "
                  f"{format_scalar(bound)}, so lambda > {format_scalar(theta)}", file=out)
            return
        print(f"FAIL pattern: M[{i + 1},{i + 1}]={format_scalar(value)} <= {format_scalar(bound)}", file=out)
        raise VerificationFailure("pattern")
    if args.gamma is None:
        raise InputError("certificate needs --gamma")
    gamma = _num(args.gamma, "gamma")
    if args.weight is not None:
        w = _vec(args.weight, "weight")
        if len(w) != system.dim:
            raise InputError("weight has the wrong length")
        try:
            cert = B.verify_weight_certificate(system, w, gamma)
        except B.CertificateRefusal as exc:
            print(f"FAIL weight: {exc}", file=out)
            raise VerificationFailure("weight") from exc
        print(f"PASS weight: c={format_scalar(cert.c)}, lambda <= {format_scalar(cert.bound)}", file=out)
        return
    try:
        cert = B.verify_graded_certificate(system, args.graded, gamma)
    except B.CertificateRefusal as exc:
        print(f"FAIL graded: {exc}", file=out)
        raise VerificationFailure("graded") from exc
    print(f"PASS graded: depth N={cert.N}, lambda <= {format_scalar(cert.gamma)}", file=out)


def cmd_zero(args, out):
    system = load_system(args.file)
    tree = R.find_zero_vector(system, args.n_max)
    if tree is None:
        print("none", file=out)
    else:
        print(f"{_tree(system, tree)}\t(n={tree.leaves})", file=out)


def cmd_catalog(args, out):
    out.write(format_system(CATALOG[args.name]()))


# --- entry point -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bilinear-growth",
                                description="Exact growth, bounds and embeddings for bilinear systems.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("growth", help="exact g(n) via Pareto fronts")
    s.add_argument("file")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--per-dim", action="store_true")
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("bounds", help="certified lower and upper bounds on the growth rate")
    s.add_argument("file")
    s.add_argument("--pattern-size", type=int, default=8)
    s.add_argument("--cert-depth", type=int, default=8)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("decide", help="semi-decide lambda > theta with a replayable witness")
    s.add_argument("file")
    s.add_argument("--theta", required=True)
    s.add_argument("--budget", type=int, default=1000)
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("embed", help="build an embedded system")
    s.add_argument("kind", choices=["jsr", "mortality", "two-seeds", "two-ops", "positive"])
    s.add_argument("inputs", nargs="+")
    s.add_argument("--repaired", action="store_true", help="mortality: block-tagged variant")
    s.add_argument("--eps0", default="1/10", help="positive: starting epsilon")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("transform", help="limit transforms")
    s.add_argument("kind", choices=["insert-zero-odd", "append-one", "ensure-limit"])
    s.add_argument("file")
    s.add_argument("--alpha")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("verify", help="brute-force checks and certificate replay")
    s.add_argument("kind", choices=["buffer-analysis", "congruences", "insert-zero-odd", "certificate"])
    s.add_argument("inputs", nargs="+")
    s.add_argument("--n-max", type=int)
    s.add_argument("--m-max", type=int, default=4)
    s.add_argument("--weight")
    s.add_argument("--graded", type=int)
    s.add_argument("--gamma")
    s.add_argument("--pattern")
    s.add_argument("--index", type=int)
    s.add_argument("--theta")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("zero", help="search for a combination giving the zero vector")
    s.add_argument("file")
    s.add_argument("--n-max", type=int, required=True)
    s.set_defaults(func=cmd_zero)

    s = sub.add_parser("catalog", help="print a named example system")
    s.add_argument("name", choices=sorted(CATALOG))
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure:
        return 1
    except (ValueError, TypeError) as exc:
        # structural and misuse errors from the library: the input was not acceptable
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
