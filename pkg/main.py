# main.py
import argparse
import sys
from typing import Callable, Dict, List, Optional, Sequence, TextIO

from model_manager import ModelManager
from modules.cohomology import BASIC, DELTA, DERHAM, CohomologyModule
from modules.contact import (ContactError, ContactModule, LefschetzInconsistency, cup_length, gysin_bookkeeping,
                             boothby_wang_lefschetz_check)
from modules.hodge import HodgeInconsistency
from modules.model import FoliatedModel, ModelError, boothby_wang_extend, model_to_text, validation_report
from modules.reports import SKIPPED, CheckReport, ReportsModule
from utils import SymplHodgeError, get_logger, load_settings, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_MODEL = 1
EXIT_INCONSISTENT = 2
EXIT_USAGE = 64

EXPORT_SUFFIXES = (".csv", ".xlsx", ".pdf", ".json")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------- COMMAND CONTEXT ----------------
class Command:
    """Parsed arguments plus the resolved model and its analysis modules."""

    def __init__(self, args: argparse.Namespace, settings: Dict, manager: ModelManager):
        self.args = args
        self.settings = settings
        self.manager = manager
        self.model: FoliatedModel = manager.resolve(args.model)
        self.coh = CohomologyModule(self.model)
        self.contact = ContactModule(self.model, self.coh) if self.model.is_contact else None

    @property
    def seed(self) -> int:
        return self.settings["seed"]

    @property
    def samples(self) -> int:
        return self.settings["random_samples"]

    @property
    def coefficient_range(self):
        return tuple(self.settings["coefficient_range"])


# ---------------- REPORT GROUPS ----------------
def validate_reports(cmd: Command) -> List[CheckReport]:
    return [validation_report(cmd.model)]


def cohomology_reports(cmd: Command) -> List[CheckReport]:
    kinds = [k for k, flag in ((BASIC, cmd.args.basic), (DERHAM, cmd.args.derham), (DELTA, cmd.args.delta)) if flag]
    return [cmd.coh.betti_report(kinds or (BASIC, DERHAM, DELTA))]


def hodge_reports(cmd: Command) -> List[CheckReport]:
    return [cmd.coh.hodge.identity_report(cmd.seed, cmd.samples, cmd.coefficient_range)]


def lefschetz_reports(cmd: Command) -> List[CheckReport]:
    reports = [cmd.coh.transverse_lefschetz().to_check_report(), cmd.coh.harmonic_flatness_check(),
               cmd.coh.primitive_decomposition_check(), cmd.coh.closed_primitive_check()]
    if cmd.contact:
        reports += [cmd.contact.contact_lefschetz().to_check_report(), cmd.contact.contact_transverse_check(),
                    cmd.contact.primitive_restriction_check(), cmd.contact.contact_zero_lefschetz_check()]
    return reports


def ddlemma_reports(cmd: Command) -> List[CheckReport]:
    return [cmd.coh.dd_lemma().to_check_report(), cmd.coh.lefschetz_dd_equivalence_check(), cmd.coh.exact_coexact_check(),
            cmd.coh.harmonic_exact_spotcheck(cmd.seed, cmd.samples, cmd.coefficient_range),
            cmd.coh.delta_homology_duality_check(), cmd.coh.harmonic_lefschetz_check()]


def cup_reports(cmd: Command) -> List[CheckReport]:
    if cmd.contact:
        return [cmd.contact.cup_length().to_check_report(), cmd.contact.cup_vanishing_check(),
                cmd.contact.cup_length_bound_check(), cmd.contact.sasakian_obstructions()]
    return [cup_length(cmd.model, cmd.coh).to_check_report()]


def suite_reports(cmd: Command) -> List[CheckReport]:
    reports = validate_reports(cmd)
    reports.append(cmd.coh.betti_report())
    reports += hodge_reports(cmd)
    reports += lefschetz_reports(cmd)
    reports += ddlemma_reports(cmd)
    reports += [cmd.coh.cup_well_defined_report(DERHAM), cmd.coh.cup_well_defined_report(BASIC)]
    reports += cup_reports(cmd)
    if cmd.contact:
        reports += [cmd.contact.long_exact_sequence().to_check_report(), cmd.contact.pairing_report()]
    if not cmd.model.foliation_dirs:
        try:
            reports.append(boothby_wang_lefschetz_check(cmd.model))
            s = cmd.coh.transverse_lefschetz().max_s
            if s >= 0:
                reports.append(gysin_bookkeeping(cmd.model, s))
        except ContactError as e:
            skipped = CheckReport(cmd.model.name, "boothby_wang_lefschetz", SKIPPED)
            skipped.details["reason"] = str(e)
            reports.append(skipped)
    return reports


REPORT_GROUPS: Dict[str, Callable[[Command], List[CheckReport]]] = {
    "validate": validate_reports,
    "cohomology": cohomology_reports,
    "hodge": hodge_reports,
    "lefschetz": lefschetz_reports,
    "ddlemma": ddlemma_reports,
    "cup": cup_reports,
    "suite": suite_reports,
}


# ---------------- PARSER ----------------
def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report instead of tables")
    common.add_argument("--seed", type=int, help="seed for random-form checks")
    common.add_argument("--samples", type=int, help="random forms per check")
    common.add_argument("--max-degree", type=int, dest="max_degree", help="only show degrees up to k")
    common.add_argument("--export", help="also write the reports to a .csv, .xlsx, .pdf or .json file")
    common.add_argument("-v", "--verbose", action="count", default=0, help="log to stderr (-vv for debug)")

    parser = _Parser(prog="symplhodge", description="Symplectic Hodge theory on foliated cochain models")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "validate": "load a model and report d² = 0 and the basic subcomplex",
        "cohomology": "Betti tables",
        "hodge": "operator identity suite",
        "lefschetz": "transverse and contact Lefschetz reports",
        "ddlemma": "dδ-lemma report and its cross-checks",
        "cup": "cup length and vanishing bounds",
        "suite": "every check; exit 0 iff all pass",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("model", help="zoo:<name> or a model file")
        if name == "cohomology":
            p.add_argument("--basic", action="store_true")
            p.add_argument("--derham", action="store_true")
            p.add_argument("--delta", action="store_true")

    bw = sub.add_parser("boothby-wang", parents=[common], help="adjoin a contact generator with dη = ω")
    bw.add_argument("model", help="symplectic base model (no foliation)")
    bw.add_argument("-o", "--output", help="file to write (.json or text format); stdout if omitted")
    bw.add_argument("--name", help="name of the extended model")

    sub.add_parser("models", parents=[common], help="list the builtin zoo")
    return parser


# ---------------- RUN ----------------
def _settings_from(args: argparse.Namespace) -> Dict:
    settings = load_settings()
    if args.seed is not None:
        settings["seed"] = args.seed
    if args.samples is not None:
        if args.samples < 0:
            raise UsageError("--samples must be non-negative")
        settings["random_samples"] = args.samples
    if args.max_degree is not None:
        settings["max_degree"] = args.max_degree
    if args.export and not args.export.lower().endswith(EXPORT_SUFFIXES):
        raise UsageError(f"--export needs one of {', '.join(EXPORT_SUFFIXES)}")
    return settings


def _emit(reports: Sequence[CheckReport], args: argparse.Namespace, settings: Dict, out: TextIO) -> int:
    source = getattr(args, "model", "")
    module = ReportsModule(reports, args.command, source).filter_degrees(settings["max_degree"])
    out.write(module.to_json() if args.json else module.render_text())
    if args.export:
        module.export(args.export)
    failed = [r.checker for r in reports if not r.passed]
    if failed:
        logger.warning("Failed checks: %s", ", ".join(failed))
        return EXIT_INCONSISTENT
    return EXIT_OK


def _boothby_wang(args: argparse.Namespace, manager: ModelManager, out: TextIO) -> int:
    base = manager.resolve(args.model)
    try:
        total = boothby_wang_extend(base, args.name)
    except ModelError as e:
        raise ContactError(str(e)) from e
    if args.output:
        manager.save(total, args.output)
        out.write(f"{total.name} written to {args.output}\n")
    else:
        out.write(model_to_text(total))
    return EXIT_OK


def _models(args: argparse.Namespace, out: TextIO) -> int:
    rows = ModelManager.list_zoo()
    report = CheckReport("zoo", "models", per_degree=[dict(row, degree=n) for n, row in enumerate(rows)])
    module = ReportsModule([report], "models")
    out.write(module.to_json() if args.json else module.render_text())
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse argv, run one subcommand and return its exit code."""
    out = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        setup_logging(args.verbose)
        settings = _settings_from(args)
        manager = ModelManager()
        if args.command == "models":
            return _models(args, out)
        if args.command == "boothby-wang":
            return _boothby_wang(args, manager, out)
        cmd = Command(args, settings, manager)
        reports = REPORT_GROUPS[args.command](cmd)
        return _emit(reports, args, settings, out)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except (ModelError, ContactError, FileNotFoundError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_MODEL
    except (HodgeInconsistency, LefschetzInconsistency) as e:
        sys.stderr.write(f"inconsistency: {e}\n")
        return EXIT_INCONSISTENT
    except SymplHodgeError as e:
        sys.stderr.write(f"inconsistency: {e}\n")
        return EXIT_INCONSISTENT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
