"""
Command-line front end.

    mtc.py check MODEL
    mtc.py cohomology MODEL [--max-degree D]
    mtc.py ring MODEL
    mtc.py nil-ker-mu MODEL [--max-n N]
    mtc.py join MODEL --n K [--dump]
    mtc.py pathfib MODEL
    mtc.py mtc MODEL [--max-n N] [--require-conclusive]

Every command accepts --max-degree, --format text|records and --csv [PATH].
"""
import argparse
import logging
from typing import List, Optional
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from config.config import (
    EXIT_INCONCLUSIVE,
    EXIT_INTEGRITY_ERROR,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    EXIT_USAGE_ERROR,
    LOG_LEVEL,
    MAX_DEGREE,
    MAX_N,
)
from errors import IntegrityError, MtcError, ParseError, UsageError
from graded.algebra import format_terms, tensor_algebra
from dga.cohomology import algebra_complex, cohomology, cohomology_ring
from dga.derivation import check_d_squared, check_ideal_stable
from semifree.base_module import is_minimal
from semifree.joins import iterated_join
from secat.bounds import nil_ker_mu_ideal
from secat.path_fibration import path_fibration_model
from cli.model_file import ModelFile, load_model
from cli.report_exporter import Report, export_to_csv, render_records, render_text
from mtc_report import check_model_algebra, mtc_report

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors get our exit status."""

    def error(self, message):
        raise UsageError(message)


# =============================================================================
# Commands
# =============================================================================

def run_check(model: ModelFile, args) -> Report:
    report = Report("check", model.name, args.max_degree)
    free = model.free_algebra(args.max_degree)
    failure = check_d_squared(free, args.max_degree)
    if failure is not None:
        name, residual = failure
        report.summary.append(f"d^2({name}) = {residual} != 0")
        report.facts.update(status="fail", generator=name, residual=str(residual))
        return report
    unstable = check_ideal_stable(model.quotient_algebra(args.max_degree), args.max_degree + 1)
    if unstable is not None:
        relation, residual = unstable
        report.summary.append(f"d({relation}) = {residual} is not in the ideal")
        report.facts.update(status="fail", relation=str(relation), residual=str(residual))
        return report
    report.summary.append(f"d^2 = 0 on all {len(model.generators)} generators; ideal is d-stable")
    report.facts.update(status="ok", generators=len(model.generators))
    return report


def run_cohomology(model: ModelFile, args) -> Report:
    algebra = check_model_algebra(model, args.max_degree)
    result = cohomology(algebra_complex(algebra, args.max_degree))
    betti = result.betti_numbers()
    report = Report("cohomology", model.name, args.max_degree)
    report.summary.append("Betti " + ",".join(str(b) for b in betti))
    report.facts["betti"] = ",".join(str(b) for b in betti)
    report.add_table("degree", [
        {
            "degree": entry.degree,
            "dimension": len(entry.basis),
            "cocycles": entry.kernel_dimension,
            "coboundaries": entry.coboundary_rank,
            "betti": entry.betti,
        }
        for _, entry in sorted(result.per_degree.items())
    ])
    return report


def run_ring(model: ModelFile, args) -> Report:
    algebra = check_model_algebra(model, args.max_degree)
    ring = cohomology_ring(algebra, args.max_degree)
    report = Report("ring", model.name, args.max_degree)
    report.summary.append(f"{ring.size} classes up to degree {args.max_degree}")
    report.facts.update(classes=ring.size, top_degree=ring.top_degree)
    report.add_table("class", [
        {"class": i, "degree": degree, "representative": str(rep)}
        for i, (degree, rep) in enumerate(zip(ring.degrees, ring.representatives))
    ])
    products = []
    for (i, j), coordinates in sorted(ring.structure.items()):
        if i > j or not coordinates or ring.degrees[i] == 0 or ring.degrees[j] == 0:
            continue
        products.append({
            "left": i,
            "right": j,
            "product": format_terms([(f"[{k}]", c, False) for k, c in sorted(coordinates.items())]),
        })
    report.add_table("product", products)
    return report


def run_nil_ker_mu(model: ModelFile, args) -> Report:
    algebra = check_model_algebra(model, args.max_degree)
    verdict = nil_ker_mu_ideal(algebra, args.max_n, args.max_degree)
    report = Report("nil-ker-mu", model.name, args.max_degree)
    report.summary.append(f"nil ker μ = {verdict}")
    report.facts.update(
        value=verdict.value,
        at_least=verdict.at_least,
        witness=" ".join(verdict.witness) if verdict.witness else None,
    )
    return report


def _path_module(model: ModelFile, max_degree: int):
    algebra = check_model_algebra(model, max_degree)
    path_model = path_fibration_model(model.free_algebra(max_degree), max_degree)
    return algebra, path_model, path_model.over(tensor_algebra(algebra))


def run_join(model: ModelFile, args) -> Report:
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    _, _, module = _path_module(model, args.max_degree)
    joined = iterated_join(module, args.n, verify_up_to=args.max_degree)
    result = cohomology(joined.complex(args.max_degree))
    report = Report("join", model.name, args.max_degree)
    report.summary.append(f"{args.n}-fold join of the path-fibration module over A⊗A")
    report.facts.update(n=args.n, betti=",".join(str(b) for b in result.betti_numbers()))
    report.add_table("degree", [
        {
            "degree": degree,
            "generators": len(joined.generators_of_degree(degree)) if degree > 0 else 0,
            "dimension": len(entry.basis),
            "betti": entry.betti,
        }
        for degree, entry in sorted(result.per_degree.items())
    ])
    if args.dump:
        report.add_table("generator", [
            {"generator": str(label), "degree": label.degree, "d": str(joined.differential(label))}
            for label in joined.generators_up_to(args.max_degree)
        ])
    return report


def run_pathfib(model: ModelFile, args) -> Report:
    _, path_model, module = _path_module(model, args.max_degree)
    minimal = is_minimal(module, args.max_degree)
    report = Report("pathfib", model.name, args.max_degree)
    report.summary.append(f"path-fibration model on {len(model.generators)} generators")
    report.facts["minimal"] = minimal
    report.add_table("bar", [
        {
            "generator": path_model.bar_names[g.name],
            "degree": g.degree - 1,
            "d": str(path_model.bar_differential(g.name)),
        }
        for g in model.generators
    ])
    return report


def run_mtc(model: ModelFile, args) -> Report:
    result = mtc_report(model, args.max_n, args.max_degree)
    report = Report("mtc", model.name, args.max_degree)
    report.summary.append(result.headline())
    report.summary.extend(f"  {c.summary()}" for c in result.certificates)
    report.facts.update(
        lower=result.lower,
        upper=result.upper,
        exact=result.exact,
        nil_ker_cup=str(result.nil_ker_cup),
        nil_ker_mu=str(result.nil_ker_mu),
    )
    report.add_table("certificate", [
        {
            "kind": c.kind,
            "value": c.value,
            "conclusive": c.conclusive,
            "n": c.n,
            "degree": c.degree,
            "validity_degree": c.validity_degree,
            "witness": "; ".join(f"{key}={value}" for key, value in c.witness.items()) or None,
        }
        for c in result.certificates
    ])
    report.add_table("level", result.table())
    return report


COMMANDS = {
    "check": run_check,
    "cohomology": run_cohomology,
    "ring": run_ring,
    "nil-ker-mu": run_nil_ker_mu,
    "join": run_join,
    "pathfib": run_pathfib,
    "mtc": run_mtc,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="mtc", description="Exact bounds for Msecat and MTC of Sullivan models")
    commands = parser.add_subparsers(dest="command", required=True)

    common = _ArgumentParser(add_help=False)
    common.add_argument("model", help="path to a model file")
    common.add_argument("--max-degree", type=int, default=MAX_DEGREE)
    common.add_argument("--format", choices=("text", "records"), default="text")
    common.add_argument("--csv", nargs="?", const="", default=None, metavar="PATH",
                        help="also write the tables as CSV (default: timestamped file in the output dir)")
    common.add_argument("--require-conclusive", action="store_true",
                        help="exit with the inconclusive status unless the verdict is exact")

    for name in ("check", "cohomology", "ring", "pathfib"):
        commands.add_parser(name, parents=[common])
    for name in ("nil-ker-mu", "mtc"):
        sub = commands.add_parser(name, parents=[common])
        sub.add_argument("--max-n", type=int, default=MAX_N)
    sub = commands.add_parser("join", parents=[common])
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--dump", action="store_true")
    return parser


def _exit_status(args, report: Report) -> int:
    if report.command == "check" and report.facts.get("status") == "fail":
        return EXIT_INTEGRITY_ERROR
    if args.require_conclusive:
        if report.command == "mtc" and not report.facts.get("exact"):
            return EXIT_INCONCLUSIVE
        if report.command == "nil-ker-mu" and report.facts.get("value") is None:
            return EXIT_INCONCLUSIVE
    return EXIT_OK


def main(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = None
    try:
        args = build_parser().parse_args(argv)
        if args.max_degree < 1:
            raise UsageError("--max-degree must be positive")
        model = load_model(args.model)
        report = COMMANDS[args.command](model, args)
    except ParseError as error:
        print(f"parse error: {getattr(args, 'model', '')}:{error.line}:{error.column}: {error.message}", file=stderr)
        return EXIT_PARSE_ERROR
    except IntegrityError as error:
        print(f"integrity error: {error}", file=stderr)
        return EXIT_INTEGRITY_ERROR
    except (UsageError, MtcError) as error:
        print(f"usage error: {error}", file=stderr)
        return EXIT_USAGE_ERROR
    except OSError as error:
        print(f"usage error: {error}", file=stderr)
        return EXIT_USAGE_ERROR

    render = render_records if args.format == "records" else render_text
    stdout.write(render(report))
    if args.csv is not None:
        for path in export_to_csv(report, args.csv):
            print(f"CSV written: {path}", file=stderr)
    return _exit_status(args, report)
