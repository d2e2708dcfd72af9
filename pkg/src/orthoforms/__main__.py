"""Allows ``python -m orthoforms ...`` and the ``orthoforms`` console script."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from pydantic import BaseModel

from .arrangements import arrangement_of, build_arrangement, looijenga_check
from .constants import HILBERT_ORDER, LOG_LEVEL, Q_SCALE, QMAX, TMAX, XIMAX
from .errors import InsufficientPrecision, OrthoformsError
from .families import enumerate_families
from .fanout import run_entries
from .hilbert import BigradedAlgebra, hilbert_series, minimal_generators, paramodular_bigradings, parse_bigradings
from .jacobi import JacobiExpansion, ThetaBlockSpec, certification_bound, classify, divisor_data, hecke, theta_block
from .lattice import build
from .lifts import (
    borch,
    grit,
    psi_from_block,
    theta_identity_precisions,
    verify_theta_identity,
    xi_order,
    zeta_label,
)
from .models import ClassRow, ComponentRow, DivisorRow, LatticeReport, LiftReport, ThetaBlockReport
from .table_data import appendix_rows
from .tables import (
    APPENDIX_COLUMNS,
    check_row,
    generator_weights,
    jacobian_weight,
    norm2_classification,
    principal_part,
    rows_to_frame,
)

logger = logging.getLogger("orthoforms")

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3

Payload = BaseModel | Sequence[BaseModel] | Mapping[str, Any]


class Outcome:
    """What a subcommand produced: a payload, its text rendering and the exit code."""

    def __init__(self, payload: Payload, text: str, code: int = EXIT_OK,
                 columns: Mapping[str, str] | None = None):
        self.payload = payload
        self.text = text
        self.code = code
        self.columns = columns


# ── argument helpers ─────────────────────────────────────────────────────────


def _positive(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def _classical(text: str) -> dict[int, int]:
    """``"0:4,1:4,2:3"`` -> ``{0: 4, 1: 4, 2: 3}``."""
    try:
        pairs = (token.split(":") for token in text.split(","))
        return {int(a): int(mult) for a, mult in pairs}
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a:mult pairs, got {text!r}") from exc


def _block_spec(args: argparse.Namespace) -> ThetaBlockSpec:
    if getattr(args, "classical", None):
        return ThetaBlockSpec.classical(args.classical)
    if getattr(args, "family", None):
        if args.n is None:
            raise OrthoformsError("--family needs --n")
        return ThetaBlockSpec.of_lattice(f"{args.family}{args.n}")
    if getattr(args, "lattice", None):
        return ThetaBlockSpec.of_lattice(args.lattice)
    raise OrthoformsError("give --lattice or --classical")


def _algebra(args: argparse.Namespace) -> BigradedAlgebra:
    if args.paramodular:
        return BigradedAlgebra.single(paramodular_bigradings(args.paramodular), f"A1({args.paramodular})")
    if args.bigradings:
        return BigradedAlgebra.single(parse_bigradings(args.bigradings), "custom")
    if args.lattice:
        return BigradedAlgebra.of_lattice(args.lattice)
    raise OrthoformsError("give a lattice, --bigradings or --paramodular")


def _coords(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in text.split(","))


# ── lattice / jacobi ─────────────────────────────────────────────────────────


def cmd_lattice_info(args: argparse.Namespace) -> Outcome:
    lattice = build(args.lattice)
    report = LatticeReport(
        lattice=str(lattice.spec),
        rank=lattice.rank,
        gram=[list(row) for row in lattice.gram],
        det=lattice.det,
        elementary_divisors=list(lattice.elementary_divisors),
        classes=[ClassRow(representative=str(c.representative), delta=c.delta) for c in lattice.discriminant_classes],
        delta=lattice.delta,
        components=[
            ComponentRow(label=info.component.label, coxeter_number=info.coxeter_number,
                         root_count=info.root_count, bigradings=[str(b) for b in info.weyl_bigradings])
            for info in lattice.components
        ],
    )
    lines = [
        f"lattice  {report.lattice}   rank {report.rank}   det {report.det}",
        f"L'/L     {' x '.join(f'Z/{d}' for d in report.elementary_divisors) or 'trivial'}",
        f"delta_L  {lattice.delta}",
        "classes:",
        *(f"  {c.representative:<30} delta {c.delta}" for c in report.classes),
        "components:",
        *(f"  {c.label:<6} h={c.coxeter_number:<3} roots={c.root_count:<4} {' '.join(c.bigradings)}"
          for c in report.components),
    ]
    return Outcome(report, "\n".join(lines), columns={"lattice": "lattice", "rank": "rank", "det": "det",
                                                       "delta": "delta"})


def cmd_theta_block(args: argparse.Namespace) -> Outcome:
    spec = _block_spec(args)
    index = spec.computed_index()
    prec = Q_SCALE * args.qmax
    if args.classify and index is not None:
        shell = JacobiExpansion.zero(spec.lattice, spec.weight, index, 0)
        prec = max(prec, certification_bound(shell))
    phi = theta_block(spec, prec)
    label = classify(phi) if args.classify else None
    report = ThetaBlockReport(
        lattice=str(spec.lattice.spec), weight=phi.weight, index=phi.index, q_order=spec.q_order,
        half_dual=phi.half_dual, classification=label, expansion=phi.to_json(),
    )
    head = f"weight {phi.weight}  index {phi.index}  q-order {spec.q_order}"
    if label:
        head += f"  {label}"
    return Outcome(report, f"{head}\n{phi.to_text()}")


def cmd_hecke(args: argparse.Namespace) -> Outcome:
    spec = _block_spec(args)
    phi = theta_block(spec, Q_SCALE * (args.m * (args.qmax - 1) + 1))
    image = hecke(phi, args.m, Q_SCALE * args.qmax)
    return Outcome(image.to_json(), f"weight {image.weight}  index {image.index}\n{image.to_text()}")


# ── lifts ────────────────────────────────────────────────────────────────────


def _series_text(terms: Sequence[JacobiExpansion]) -> str:
    return "\n".join(f"xi^{m}: {term.to_text()}" for m, term in enumerate(terms))


def cmd_grit(args: argparse.Namespace) -> Outcome:
    spec = _block_spec(args)
    phi = theta_block(spec, Q_SCALE * ((args.ximax - 1) * (args.qmax - 1) + 1))
    series = grit(phi, args.ximax, args.qmax)
    report = LiftReport(kind="grit", lattice=str(spec.lattice.spec), weight=series.weight,
                        ximax=args.ximax, qmax=args.qmax, terms=series.to_json())
    return Outcome(report, _series_text(series.terms))


def cmd_borch(args: argparse.Namespace) -> Outcome:
    spec = ThetaBlockSpec.of_lattice(f"D{args.psi_dm}" if args.psi_dm else args.lattice)
    _, p_psi = theta_identity_precisions(spec, args.ximax, args.qmax)
    psi = psi_from_block(spec, p_psi)
    orientation = [tuple(2 * x for x in f) for f in spec.factors]
    series = borch(psi, args.ximax, args.qmax, orientation=orientation)
    divisors = [
        DivisorRow(n=Fraction(n, Q_SCALE), zeta=zeta_label(spec.lattice, y), multiplicity=mult)
        for (n, y), mult in divisor_data(psi)
    ]
    c = xi_order(psi)
    report = LiftReport(kind="borch", lattice=str(spec.lattice.spec), weight=series.weight, xi_order=c,
                        ximax=args.ximax, qmax=args.qmax, terms=series.to_json(), divisors=divisors)
    lines = [f"weight {series.weight}  xi-order {c}", _series_text(series.terms), "divisors:"]
    lines += [f"  q^{d.n} z{d.zeta}: {d.multiplicity}" for d in divisors]
    return Outcome(report, "\n".join(lines))


def cmd_verify_theta(args: argparse.Namespace) -> Outcome:
    report = verify_theta_identity(_block_spec(args), args.ximax, args.qmax)
    ok = report.equal and report.symmetry_ok
    lines = [f"{report.block}: {report.verdict} ({report.compared} coefficients, symmetry "
             f"{'ok' if report.symmetry_ok else 'broken'})"]
    lines += [f"  xi^{x.m} q^{x.n} z{x.zeta}: grit {x.grit} borch {x.borch}" for x in report.mismatches]
    return Outcome(report, "\n".join(lines), EXIT_OK if ok else EXIT_FALSE)


# ── arrangements ─────────────────────────────────────────────────────────────


def _certificate_text(cert: Any) -> str:
    buckets = " ".join(f"b{k}={b}" for k, b in cert.buckets.items()) or "none"
    clique = "" if cert.clique_sum is None else f"  clique {cert.clique_sum}"
    gram = "" if cert.gram_rank is None else f"  gram {cert.gram_rank}"
    return (f"{cert.lattice}: {cert.verdict}  sum {cert.weighted_sum}{clique}{gram}  bound {cert.bound}  "
            f"margin {cert.margin}  buckets {buckets}  codim <= {cert.codimension_bound}")


def cmd_arrange_check(args: argparse.Namespace) -> Outcome:
    columns = {"lattice": "lattice", "verdict": "verdict", "sum": "weighted_sum", "clique": "clique_sum",
               "gram": "gram_rank", "bound": "bound", "codim": "codimension_bound"}
    if args.all:
        entries = enumerate_families(include_predicted=args.include_predicted)
        certs = run_entries(lambda e: looijenga_check(arrangement_of(e)), entries)
        ok = all(c.verdict == "pass" for c in certs)
        return Outcome(certs, "\n".join(_certificate_text(c) for c in certs), EXIT_OK if ok else EXIT_FALSE,
                       columns)
    if not args.lattice:
        raise OrthoformsError("give --lattice L0:L1 or --all")
    arrangement = build_arrangement(args.lattice, strict=not args.allow_unlisted)
    for a, coords in args.divisor or ():
        arrangement = arrangement.with_divisor(Fraction(a), _coords(coords))
    cert = looijenga_check(arrangement)
    return Outcome(cert, _certificate_text(cert), EXIT_OK if cert.verdict == "pass" else EXIT_FALSE, columns)


# ── tables ───────────────────────────────────────────────────────────────────


def _weights_text(row: Any) -> str:
    def fmt(ws: Sequence[int]) -> str:
        return ", ".join(map(str, ws)) or "-"
    return f"{row.l0:<10} {row.l1:<4} {fmt(row.eisenstein):<6} {fmt(row.abelian):<22} {fmt(row.jacobi):<36} {row.jacobian_weight}"


def cmd_tables_weights(args: argparse.Namespace) -> Outcome:
    if args.all:
        rows = run_entries(generator_weights, enumerate_families(include_predicted=args.include_predicted))
        return Outcome(rows, "\n".join(_weights_text(r) for r in rows), columns=APPENDIX_COLUMNS)
    if not args.lattice:
        raise OrthoformsError("give --lattice L0:L1 or --all")
    row = generator_weights(args.lattice)
    return Outcome(row, _weights_text(row), columns=APPENDIX_COLUMNS)


def cmd_tables_hilbert(args: argparse.Namespace) -> Outcome:
    algebra = _algebra(args)
    coefficients = hilbert_series(algebra, args.order)
    text = " + ".join(f"{c}t^{k}" for k, c in enumerate(coefficients) if c)
    return Outcome({"lattice": algebra.label, "order": args.order, "coefficients": coefficients}, text)


def cmd_tables_generators(args: argparse.Namespace) -> Outcome:
    algebra = _algebra(args)
    weights = minimal_generators(algebra, args.tmax)
    return Outcome({"lattice": algebra.label, "count": len(weights), "weights": weights},
                   f"{algebra.label}: {len(weights)} generators: {', '.join(map(str, weights))}")


def cmd_tables_norm2(args: argparse.Namespace) -> Outcome:
    names = [str(spec) for spec in norm2_classification()]
    return Outcome({"count": len(names), "lattices": names}, f"{len(names)} lattices: {', '.join(names)}")


def cmd_tables_principal_part(args: argparse.Namespace) -> Outcome:
    part = principal_part(args.lattice)
    weights = jacobian_weight(args.lattice)
    mults = ", ".join(map(str, part.multiplicities)) or "-"
    text = (f"{part.entry}: k = {part.k} (formula {weights.k_formula}, solver {weights.k_solver}, "
            f"sum rule {weights.k_sumrule})  h = {part.coxeter_number}  multiplicities {mults}")
    return Outcome(part, text)


def cmd_tables_check(args: argparse.Namespace) -> Outcome:
    rows = [r for r in appendix_rows() if args.include_predicted or not r.predicted]
    checks = run_entries(check_row, rows)
    bad = [c for c in checks if c.status == "disagree"]
    lines = [f"{c.row:<14} {c.status:<9} printed {c.printed_jacobian:<4} computed {c.computed_jacobian}"
             for c in checks if c.status != "agree" or args.verbose]
    lines.append(f"{len(checks)} rows: {sum(c.status == 'agree' for c in checks)} agree, "
                 f"{sum(c.status == 'erratum' for c in checks)} known errata, {len(bad)} disagree")
    return Outcome(checks, "\n".join(lines), EXIT_FALSE if bad else EXIT_OK)


# ── output ───────────────────────────────────────────────────────────────────


def _jsonable(payload: Payload) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, Mapping):
        return dict(payload)
    return [item.model_dump(mode="json") for item in payload]


def _emit(outcome: Outcome, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(_jsonable(outcome.payload), indent=2))
    elif fmt == "csv":
        payload = outcome.payload
        if isinstance(payload, Mapping):
            raise OrthoformsError("this command has no CSV layout; use --format json")
        rows = [payload] if isinstance(payload, BaseModel) else list(payload)
        columns = outcome.columns or ({name: name for name in type(rows[0]).model_fields} if rows else {})
        rows_to_frame(rows, columns).to_csv(sys.stdout, index=False)
    else:
        print(outcome.text)


# ── parser ───────────────────────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--log-level", default=LOG_LEVEL, help="logging level (default: %(default)s)")

    parser = argparse.ArgumentParser(prog="orthoforms", description="Orthogonal modular forms toolkit.")
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(group: Any, name: str, func: Callable[[argparse.Namespace], Outcome], help_: str) -> argparse.ArgumentParser:
        p = group.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    def block_args(p: argparse.ArgumentParser) -> None:
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--lattice", help='root lattice whose own theta block is used, e.g. "D4"')
        src.add_argument("--classical", type=_classical, help='A1 block as a:mult pairs, e.g. "0:4,1:4,2:3,3:2,4:1"')

    def lift_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--ximax", type=_positive, default=XIMAX, help="xi-terms (default: %(default)s)")
        p.add_argument("--qmax", type=_positive, default=QMAX, help="q-terms (default: %(default)s)")

    def algebra_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("lattice", nargs="?", help='root lattice, e.g. "2A1"')
        p.add_argument("--bigradings", help='single-factor generators as weight:index, e.g. "0:1,-2:1,-4:1,-1:1"')
        p.add_argument("--paramodular", type=int, choices=(2, 3), help="A1(N) presets")

    lattice = groups.add_parser("lattice", help="lattice invariants").add_subparsers(dest="cmd", required=True)
    p = leaf(lattice, "info", cmd_lattice_info, "Gram matrix, discriminant group and delta")
    p.add_argument("lattice", help='root lattice, e.g. "A2+2A1"')

    jacobi = groups.add_parser("jacobi", help="Jacobi forms").add_subparsers(dest="cmd", required=True)
    p = leaf(jacobi, "theta-block", cmd_theta_block, "expand a theta block")
    block_args(p)
    p.add_argument("--qmax", type=_positive, default=QMAX)
    p.add_argument("--classify", action="store_true", help="certify holomorphic / weak / nearly holomorphic")
    p = leaf(jacobi, "hecke", cmd_hecke, "apply T_-(m) to a theta block")
    block_args(p)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--qmax", type=_positive, default=QMAX)

    lift = groups.add_parser("lift", help="additive lifts and Borcherds products").add_subparsers(dest="cmd", required=True)
    p = leaf(lift, "grit", cmd_grit, "Gritsenko lift of an index-1 theta block")
    block_args(p)
    lift_args(p)
    p = leaf(lift, "borch", cmd_borch, "Borcherds product of -(theta | T_-(2)) / theta")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--lattice", help="lattice whose theta block defines the input")
    src.add_argument("--psi-dm", type=int, choices=range(1, 12), metavar="M", help="use the D_M input")
    lift_args(p)
    p = leaf(lift, "verify-theta", cmd_verify_theta, "compare additive lift and Borcherds product")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--lattice")
    src.add_argument("--family", choices=("A", "D"))
    p.add_argument("--n", type=_positive)
    lift_args(p)

    arrange = groups.add_parser("arrange", help="Heegner arrangements").add_subparsers(dest="cmd", required=True)
    p = leaf(arrange, "check", cmd_arrange_check, "Looijenga certificate")
    p.add_argument("--lattice", help='split "L0:L1", e.g. "0:D9"')
    p.add_argument("--all", action="store_true", help="every family arrangement")
    p.add_argument("--include-predicted", action="store_true")
    p.add_argument("--allow-unlisted", action="store_true", help="accept splits outside the families")
    p.add_argument("--divisor", nargs=2, action="append", metavar=("A", "COORDS"),
                   help='extra divisor H(a, gamma), gamma in basis coordinates, e.g. 1/4 "1/2,0"')

    tables = groups.add_parser("tables", help="structure tables").add_subparsers(dest="cmd", required=True)
    p = leaf(tables, "weights", cmd_tables_weights, "generator weights")
    p.add_argument("--lattice", help='split "L0:L1"')
    p.add_argument("--all", action="store_true")
    p.add_argument("--include-predicted", action="store_true")
    p = leaf(tables, "hilbert", cmd_tables_hilbert, "Hilbert-Poincare series")
    algebra_args(p)
    p.add_argument("--order", type=_positive, default=HILBERT_ORDER)
    p = leaf(tables, "generators", cmd_tables_generators, "minimal generator weights")
    algebra_args(p)
    p.add_argument("--tmax", type=_positive, default=TMAX)
    leaf(tables, "norm2", cmd_tables_norm2, "lattices with delta_L <= 2")
    p = leaf(tables, "principal-part", cmd_tables_principal_part, "Jacobian weight and pole multiplicities")
    p.add_argument("--lattice", required=True, help='split "L0:L1"')
    p = leaf(tables, "check", cmd_tables_check, "recompute the reference tables")
    p.add_argument("--include-predicted", action="store_true")
    p.add_argument("--verbose", action="store_true", help="list agreeing rows too")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        outcome = args.func(args)
        _emit(outcome, args.format)
    except InsufficientPrecision as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except OrthoformsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
