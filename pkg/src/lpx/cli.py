"""Command line interface: ``lpx analyze|verify|gen|realize``."""
from __future__ import annotations

import argparse
import math
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import report
from .cover import lp_partial_norm, spherical_function, unfold
from .errors import LpxError
from .generate import random_regular
from .graph import Graph, classify, graph_to_dict, parse_edge_list
from .satake import dominant_modulus, tempered_threshold, temperedness_exponent
from .spectral import biregular_report, expander_exponent
from .verify import run_verification

EXIT_OK, EXIT_INPUT, EXIT_CLASS, EXIT_VERIFY = 0, 1, 2, 3
EMPIRICAL_BAND = 0.05
# decimal literals such as 1.41421356 should still hit the tempered circle
BOUNDARY_RTOL = 1e-6


def _dec(s: str) -> Decimal:
    try:
        return Decimal(s)
    except InvalidOperation as exc:
        raise ValueError(f"bad number {s!r}") from exc


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi`` or ``a+bi`` (``i`` or ``j``), each part through Decimal."""
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise ValueError("empty complex literal")
    if not s.endswith("i"):
        return complex(float(_dec(s)), 0.0)
    body = s[:-1]
    # split at the last sign that is not leading and not part of an exponent
    cut = max(
        (k for k, ch in enumerate(body) if ch in "+-" and k > 0 and body[k - 1] not in "eE"),
        default=0,
    )
    real, imag = body[:cut], body[cut:]
    if imag in ("", "+", "-"):
        imag += "1"
    return complex(float(_dec(real)) if real else 0.0, float(_dec(imag)))


def _load(path: str) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LpxError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_edge_list(text)


def _check_p(p: float | None) -> None:
    if p is not None and not p >= 2:
        raise LpxError(f"--p must be >= 2, got {p}")


def cmd_analyze(args) -> int:
    _check_p(args.p)
    g = _load(args.file)
    cls = classify(g)
    if cls.kind == "neither":
        print(f"error: {args.file}: graph is neither (q+1)-regular with q >= 2 nor biregular", file=sys.stderr)
        return EXIT_CLASS
    if cls.kind == "regular":
        rep = expander_exponent(g, p=args.p, with_nb=True)
        payload = rep.to_dict()
        payload["p_star"] = report.p_star_json(rep.p_star)
        payload["p_star_value"] = rep.p_star
        if args.json:
            print(report.dumps({"command": "analyze", "graph": graph_to_dict(g), "report": payload}))
            return EXIT_OK
        nb = rep.nb
        print(f"class: regular q={rep.q}{' (bipartite)' if rep.bipartite else ''}  n={g.n} m={g.m}")
        print(f"lambda(X): {rep.lambda_x:.12g}")
        print(f"p_star: {report.p_star_text(rep.p_star)}")
        print(f"ramanujan: {str(rep.ramanujan).lower()}{'  (boundary)' if rep.boundary else ''}")
        if args.p is not None:
            print(f"L^{args.p:g}-expander: {str(rep.verdicts['lp_expander']).lower()}")
        print(
            f"nb spectrum: {nb.size} values, max |theta| nontrivial "
            f"{nb.max_nontrivial_modulus(rep.bipartite):.6g}, verified: "
            f"{'n/a' if nb.verified is None else str(nb.verified).lower()}"
        )
        return EXIT_OK
    rep = biregular_report(g, p=args.p)
    payload = rep.to_dict()
    payload["p_star"] = report.p_star_json(rep.p_star)
    if args.json:
        print(report.dumps({"command": "analyze", "graph": graph_to_dict(g), "report": payload}))
        return EXIT_OK
    print(f"class: biregular q0={rep.q0} q1={rep.q1}  |V0|={rep.n0} |V1|={rep.n1}")
    print(f"zero multiplicity: {rep.zero_multiplicity} (expected {rep.expected_zero_multiplicity})")
    print(f"band check: {str(rep.band_check).lower()}")
    print(f"p_star: {report.p_star_text(rep.p_star)}")
    print(f"ramanujan: {str(rep.ramanujan).lower()}")
    return EXIT_OK


def cmd_verify(args) -> int:
    extra = {}
    for path in args.graph or []:
        extra[path] = _load(path)
    summary = run_verification(extra_graphs=extra, seed=args.seed)
    print(report.dumps({"command": "verify", **summary}))
    return EXIT_OK if summary["passed"] else EXIT_VERIFY


def cmd_gen(args) -> int:
    g = random_regular(args.n, args.d, args.seed)
    sys.stdout.write(g.to_edge_list())
    return EXIT_OK


def analytic_verdict(theta: complex, q: int, p: float) -> str:
    dom = dominant_modulus(theta, q)
    thr = tempered_threshold(p, q)
    if abs(dom - thr) <= BOUNDARY_RTOL * thr:
        return f"boundary: {p:g}-tempered, not {p:g}-finite"
    return f"{p:g}-finite" if dom < thr else f"not {p:g}-finite"


def empirical_verdict(exponent: float) -> str:
    if exponent < -EMPIRICAL_BAND:
        return "convergent"
    if exponent > EMPIRICAL_BAND:
        return "divergent"
    return "inconclusive"


def consistency(analytic: str, empirical: str) -> bool | None:
    """True when the two agree, False on a contradiction, None when the
    partial sums cannot decide a non-boundary case."""
    if analytic.startswith("boundary"):
        return empirical == "inconclusive" or None
    if empirical == "inconclusive":
        return None
    return (analytic.startswith("not")) == (empirical == "divergent")


def cmd_realize(args) -> int:
    if args.p < 1:
        raise LpxError(f"--p must be >= 1, got {args.p}")
    theta = parse_complex(args.theta)
    g = _load(args.file)
    cls = classify(g)
    if cls.kind != "regular":
        print(f"error: {args.file}: realize needs a (q+1)-regular graph", file=sys.stderr)
        return EXIT_CLASS
    cover = unfold(g, 0, args.radius)
    f = spherical_function(cover, theta)
    pn = lp_partial_norm(cover, f, args.p)
    tv = temperedness_exponent(theta, cover.q)
    analytic = analytic_verdict(theta, cover.q, args.p)
    empirical = empirical_verdict(pn.growth_exponent)
    out = {
        "command": "realize",
        "theta": theta,
        "q": cover.q,
        "p": args.p,
        "radius": args.radius,
        "shells": pn.shells,
        "partial_sums": pn.partial_sums,
        "growth_exponent": pn.growth_exponent,
        "fit_window": list(pn.window),
        "shell_ratio_limit": cover.q ** (1 - args.p) * tv.dominant**args.p,
        "empirical": empirical,
        "analytic": analytic,
        "p_star": report.p_star_json(tv.p_star),
        "consistent": consistency(analytic, empirical),
    }
    if args.json:
        print(report.dumps(out))
        return EXIT_OK
    print(f"theta = {theta}, q = {cover.q}, p = {args.p:g}, radius = {args.radius}")
    print(f"growth exponent: {pn.growth_exponent:.6g} (window {pn.window[0]}..{pn.window[1]})")
    print(f"limit of log shell ratio: {math.log(out['shell_ratio_limit']):.6g}")
    print(f"empirical: {empirical}")
    print(f"analytic: {analytic} (p_star = {report.p_star_text(tv.p_star)})")
    c = out["consistent"]
    print(f"consistent: {'undecided' if c is None else str(c).lower()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpx", description="L^p-expander analysis of regular and biregular graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="spectral classification of an edge-list graph")
    a.add_argument("file")
    a.add_argument("--p", type=float, default=None)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run the invariant battery on the built-in fixtures")
    v.add_argument("--graph", action="append", help="extra edge-list file (repeatable)")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    gn = sub.add_parser("gen", help="random d-regular graph (configuration model)")
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--d", type=int, required=True)
    gn.add_argument("--seed", type=int, required=True)
    gn.set_defaults(func=cmd_gen)

    r = sub.add_parser("realize", help="L^p growth of the spherical function on the covering tree")
    r.add_argument("file")
    r.add_argument("--theta", required=True)
    r.add_argument("--p", type=float, required=True)
    r.add_argument("--radius", type=int, default=10)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_realize)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LpxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
