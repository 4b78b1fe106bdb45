"""Command-line entry point: ``tropibary <command> [flags]``.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import barycenter as bc
from . import bundlecheck as bd
from . import measure as ms
from . import metric as mt
from .document import Document, load_document
from .errors import DocumentError, TropibaryError, ValidationError
from .maxplus import parse_scalar
from .report import Check, Report, emit_report
from .sampling import interval_space, random_interval_measure, random_mr_samples, random_non_dirac
from .space import PointConfig, TropicalHull, candidate_weights, extremal_witness
from .verify import run_battery, tw_summary

COMMANDS = ("eval", "barycenter", "distance", "extremal", "fiber", "decompose", "tw-check", "verify")


def parse_vector(text: str) -> list[float]:
    """Parse ``"[1, -2]"``, ``"1,-2"`` or ``"0.5"``; ``-Inf`` is accepted."""
    text = text.strip()
    try:
        tokens = json.loads(text) if text.startswith("[") else [t.strip() for t in text.split(",")]
    except json.JSONDecodeError as exc:
        raise ValidationError(f"cannot parse vector {text!r}: {exc.msg}") from None
    if not isinstance(tokens, list):
        tokens = [tokens]
    out = []
    for t in tokens:
        if isinstance(t, str) and t != "-Inf":
            try:
                t = float(t)
            except ValueError:
                raise ValidationError(f"not a number: {t!r}") from None
        out.append(parse_scalar(t, name="vector"))
    return out


def fmt_vector(v: Sequence[float]) -> str:
    def num(x: float) -> str:
        x = float(x)
        return str(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)

    return "(" + ", ".join(num(x) for x in v) + ")"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="document file (tropibary/1 JSON)")
    common.add_argument("--json", action="store_true", help="structured JSON output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon", type=float)
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--grid", type=int, default=101, help="points in the [0,1] grid")
    common.add_argument("--n", type=int, help="Lipschitz constant for a single d_n")

    parser = argparse.ArgumentParser(prog="tropibary", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("eval", parents=[common], help="evaluate a measure on a function")
    p.add_argument("--measure", required=True)
    p.add_argument("--phi", required=True, help="function values, e.g. '[2, 5]'")

    p = sub.add_parser("barycenter", parents=[common], help="barycenter of a measure or meta-measure")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--measure")
    g.add_argument("--meta")

    p = sub.add_parser("distance", parents=[common], help="d_n (--n) or certified d_I (--tol)")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    for name, text in (("extremal", "search a two-term witness of non-extremality"),
                       ("fiber", "search a non-Dirac measure in the fiber over a point")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--point", required=True)
        p.add_argument("--weights", help="weight grid; default: complete candidate set")

    p = sub.add_parser("decompose", parents=[common], help="split a measure along a support partition")
    p.add_argument("--measure", required=True)
    p.add_argument("--block", required=True, help="indices of the first block, e.g. '0,2'")

    p = sub.add_parser("tw-check", parents=[common], help="check the deformation hypotheses on random samples")
    p.add_argument("--mode", choices=("mr", "interval"), required=True)
    p.add_argument("--samples", type=int, default=20)

    p = sub.add_parser("verify", parents=[common], help="run the invariant battery")
    p.add_argument("--scale", type=float, default=1.0, help="multiply every check's instance count")
    p.add_argument("--only", help="run only checks whose name starts with this prefix")
    return parser


def _doc(args: argparse.Namespace) -> Document:
    if not args.input:
        raise ValidationError(f"{args.command} needs --input")
    return load_document(args.input)


def _point_grid(args: argparse.Namespace, sample: PointConfig, x: list[float]) -> list[float]:
    return parse_vector(args.weights) if args.weights else candidate_weights(sample, x)


def cmd_eval(args: argparse.Namespace) -> Report:
    doc = _doc(args)
    mu = doc.measure(args.measure)
    return Report("eval", {"value": ms.evaluate(mu, parse_vector(args.phi))})


def cmd_barycenter(args: argparse.Namespace) -> Report:
    doc = _doc(args)
    if args.meta:
        beta = bc.barycenter_meta(doc.meta(args.meta))
        return Report("barycenter", {"weights": beta.weights})
    b = bc.barycenter(doc.space, doc.measure(args.measure))
    return Report("barycenter", {"point": b if args.json else fmt_vector(b)})


def cmd_distance(args: argparse.Namespace) -> Report:
    doc = _doc(args)
    metas = doc.meta_specs
    if args.a in metas or args.b in metas:
        if args.n is not None:
            raise ValidationError("--n is only available for first-level measures")
        r = mt.meta_dI(doc.meta(args.a), doc.meta(args.b), args.tol)
    elif args.n is not None:
        r = mt.DistanceResult(mt.dn_exact(doc.measure(args.a), doc.measure(args.b), args.n), 0.0)
    else:
        r = mt.dI(doc.measure(args.a), doc.measure(args.b), args.tol)
    return Report("distance", r.as_dict())


def cmd_extremal(args: argparse.Namespace) -> Report:
    doc = _doc(args)
    sample = _coords(doc)
    x = parse_vector(args.point)
    w = extremal_witness(sample, x, _point_grid(args, sample, x))
    if w is None:
        return Report("extremal", {"witness": "none"})
    return Report("extremal", {"witness": {"y": w.y, "z": w.z, "t": w.weight, "y_index": w.y_index, "z_index": w.z_index}})


def cmd_fiber(args: argparse.Namespace) -> Report:
    doc = _doc(args)
    sample = _coords(doc)
    es = bc.EmbeddedSpace(doc.space, TropicalHull(sample))
    x = parse_vector(args.point)
    mu = bc.fiber_witness(es, x, _point_grid(args, sample, x))
    return Report("fiber", {"witness": "none" if mu is None else mu.weights})


def _coords(doc: Document) -> PointConfig:
    if doc.space.coords is None:
        raise ValidationError("this command needs a space with points")
    return doc.space.coords


def cmd_decompose(args: argparse.Namespace) -> Report:
    doc = _doc(args)
    mu = doc.measure(args.measure)
    b1 = [int(x) for x in parse_vector(args.block)]
    b2 = [i for i in range(len(doc.space)) if i not in b1]
    a1, m1, a2, m2 = ms.decompose(mu, (b1, b2))
    return Report("decompose", {"a1": a1, "mu1": m1.weights, "a2": a2, "mu2": m2.weights})


def cmd_tw_check(args: argparse.Namespace) -> Report:
    if args.epsilon is None or not args.epsilon > 0:
        raise ValidationError("tw-check needs a positive --epsilon")
    if args.samples < 1:
        raise ValidationError("--samples must be positive")
    rng = np.random.default_rng(args.seed)
    if args.mode == "mr":
        doc = _doc(args)
        gens = [m for m in doc.measures.values() if not m.is_dirac]
        if not gens:
            gens = [random_non_dirac(rng, doc.space) for _ in range(3)]
        rep = bd.tw_verify_mr(random_mr_samples(rng, gens, args.samples), args.epsilon, gens, args.tol)
    else:
        space = _doc(args).space if args.input else interval_space(args.grid)
        samples = [random_interval_measure(rng, space) for _ in range(args.samples)]
        rep = bd.tw_verify_interval(samples, args.epsilon, args.tol)
    out = Report("tw-check", tw_summary(rep))
    eps = rep.epsilon
    out.add(Check("fiber_preserved", rep.fiber_preserved, rep.checked))
    out.add(Check("g_close <= epsilon", rep.g_close <= eps, rep.checked, f"{rep.g_close!r} > {eps!r}"))
    out.add(Check("h_close <= epsilon", rep.h_close <= eps, rep.checked, f"{rep.h_close!r} > {eps!r}"))
    out.add(Check("images_disjoint", rep.images_disjoint, rep.checked))
    if args.mode == "interval":
        out.add(Check("l(nu, 1) == nu", all(d["ok"] for d in rep.details), rep.checked))
    out.add(Check("samples checked", rep.checked > 0, rep.checked, "every sample was skipped"))
    bad = next((d for d in rep.details if not (d["fiber_preserved"] and d["images_disjoint"])), None)
    if bad is not None:
        out.checks[0].counterexample = bad
    return out


def cmd_verify(args: argparse.Namespace) -> Report:
    return run_battery(args.seed, args.scale, args.only)


HANDLERS = {
    "eval": cmd_eval,
    "barycenter": cmd_barycenter,
    "distance": cmd_distance,
    "extremal": cmd_extremal,
    "fiber": cmd_fiber,
    "decompose": cmd_decompose,
    "tw-check": cmd_tw_check,
    "verify": cmd_verify,
}


def run_command(argv: Sequence[str]) -> tuple[Report, argparse.Namespace]:
    args = build_parser().parse_args(list(argv))
    return HANDLERS[args.command](args), args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        report, args = run_command(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except (DocumentError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TropibaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(emit_report(report, args.json))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
