"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 a verification or certificate
check failed. Outputs are written atomically; nothing is written when an
input fails validation.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import __version__
from .approximation import MODES, convergence_report
from .config import default_tol
from .curves import densify_polyline, discrete_frechet, parametric_length, spiral_suite
from .decomposition import Check, decompose, extract_cycles, verify_decomposition
from .documents import (
    current_from_doc,
    current_to_doc,
    dumps,
    grid_from_doc,
    load,
    measure_from_doc,
    measure_to_doc,
    space_from_doc,
    space_to_doc,
    transport_to_doc,
    write_atomic,
)
from .errors import PolyCurrentsError
from .measures import flat_norm_0, total_variation
from .spaces import parse_p
from .transport import beckmann

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2


def parse_levels(text: str) -> list[int]:
    """``"1..6"``, ``"1,2,4"`` or a mix such as ``"1..3,8"``."""
    levels = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                levels.extend(range(int(lo), int(hi) + 1))
            else:
                levels.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None
    if not levels or min(levels) < 1:
        raise argparse.ArgumentTypeError(f"levels must be positive integers, got {text!r}")
    return levels


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def cmd_decompose(args) -> int:
    T = current_from_doc(load(args.input, "current"), args.input)
    tol = args.tol
    C, rest = extract_cycles(T)
    eta = decompose(rest)
    report = verify_decomposition(rest, eta, rtol=tol, seed=args.seed)
    scale = max(T.mass(), 1.0)
    r = total_variation(C.boundary())
    report.checks.append(Check("cycle: zero boundary", r <= tol * scale, r))
    r = (C + rest - T).mass()
    report.checks.append(Check("cycle: T equals C + T'", r <= tol * scale, r))
    doc = {
        "transport": transport_to_doc(eta),
        "cycle": current_to_doc(C, with_space=False),
        "acyclic_part": current_to_doc(rest, with_space=False),
        "report": report.to_dict(),
    }
    _emit(dumps(doc), args.out)
    print(report.format(), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK if report.passed else EXIT_CHECK


def _space_arg(args, *docs):
    if args.space:
        return space_from_doc(load(args.space, "space"), args.space)
    for src, doc in docs:
        if "space" in doc:
            return space_from_doc(doc["space"], src, "$.space")
    raise PolyCurrentsError("no space given: pass --space or embed one in the input document")


def cmd_transport(args) -> int:
    plus_doc = load(args.plus, "measure")
    minus_doc = load(args.minus, "measure")
    space = _space_arg(args, (args.plus, plus_doc), (args.minus, minus_doc))
    plus = measure_from_doc(plus_doc, space, args.plus)
    minus = measure_from_doc(minus_doc, space, args.minus)
    res = beckmann(plus, minus, space, k=args.k, tol=args.tol)
    doc = {
        "w1": res.w1,
        "plan": [[i, j, m] for i, j, m in res.plan.entries],
        "potentials": [[z, f] for z, f in sorted(res.potentials.items())],
        "current": current_to_doc(res.current),
        "transport": transport_to_doc(res.transport),
        "certificate": res.certificate,
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK if res.certified else EXIT_CHECK


def cmd_approx(args) -> int:
    src = args.grid or args.input
    if not src:
        raise PolyCurrentsError("approx needs --grid")
    G = grid_from_doc(load(src, "grid"), src)
    rows = convergence_report(G, args.levels, args.mode)
    text = _csv(
        ("nu", "mass_err", "boundary_flat_gap", "correction_mass"),
        ((r.nu, r.mass_err, r.boundary_flat_gap, r.correction_mass) for r in rows),
    )
    _emit(text, args.out)
    return EXIT_OK


def cmd_spiral(args) -> int:
    rows = spiral_suite(args.levels)
    text = _csv(
        ("nu", "eta_mass", "boundary_tv", "max_form_err"),
        ((r.nu, r.eta_mass, r.boundary_tv, r.max_form_err) for r in rows),
    )
    _emit(text, args.out)
    return EXIT_OK


def cmd_frechet(args) -> int:
    doc = load(args.input, "curves")
    densify = args.densify if args.densify is not None else doc.get("densify", 16.0)
    p = parse_p(doc.get("p", 2))
    c1, c2 = doc["curves"]
    value = discrete_frechet(densify_polyline(c1, densify, p), densify_polyline(c2, densify, p), p)
    out = {
        "distance": value,
        "densify": densify,
        "lengths": [parametric_length(c, p=p) for c in (c1, c2)],
    }
    _emit(dumps(out), args.out)
    return EXIT_OK


def cmd_flatnorm(args) -> int:
    doc = load(args.input, "measure")
    space = _space_arg(args, (args.input, doc))
    mu = measure_from_doc(doc, space, args.input)
    value, (A, B) = flat_norm_0(mu, space, creation_cost=args.creation_cost)
    out = {
        "value": value,
        "A": measure_to_doc(A),
        "B": current_to_doc(B, with_space=False),
        "space": space_to_doc(space),
    }
    _emit(dumps(out), args.out)
    return EXIT_OK


def _tol(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polycurrents", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    common.add_argument(
        "--tol", type=_tol, default=None, help="relative tolerance for checks (default: $POLYCURRENTS_TOL or 1e-9)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="split a current into cycles and weighted arcs")
    p.add_argument("--input", required=True, help="current document")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("transport", parents=[common], help="W1 plan, potentials and minimal current")
    p.add_argument("--plus", required=True, help="measure document for the target")
    p.add_argument("--minus", required=True, help="measure document for the source")
    p.add_argument("--space", help="space document")
    p.add_argument("--k", type=int, default=1, help="chord subdivisions per plan entry (default: 1)")
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("approx", parents=[common], help="polyhedral approximation convergence table (CSV)")
    p.add_argument("--grid", help="grid document")
    p.add_argument("--input", help="alias for --grid")
    p.add_argument("--levels", type=parse_levels, default=parse_levels("1..6"))
    p.add_argument("--mode", choices=MODES, default="directional")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("spiral", parents=[common], help="spiral convergence table (CSV)")
    p.add_argument("--levels", type=parse_levels, default=parse_levels("1,2,4,8,16,32"))
    p.set_defaults(func=cmd_spiral)

    p = sub.add_parser("frechet", parents=[common], help="discrete Frechet distance of two polylines")
    p.add_argument("--input", required=True, help="curves document")
    p.add_argument("--densify", type=float, default=None, help="samples per unit length")
    p.set_defaults(func=cmd_frechet)

    p = sub.add_parser("flatnorm", parents=[common], help="flat norm of an atomic measure")
    p.add_argument("--input", required=True, help="measure document")
    p.add_argument("--space", help="space document")
    p.add_argument("--creation-cost", type=float, default=1.0, help="cost per unit of created mass (default: 1)")
    p.set_defaults(func=cmd_flatnorm)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol is None:
            args.tol = default_tol()
        return args.func(args)
    except (PolyCurrentsError, ValueError, IndexError) as exc:
        print(f"polycurrents {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
