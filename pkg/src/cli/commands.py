"""Command-line verbs.

Every verb reads the JSON formats of ``core.serialization``, prints either a
short text summary or (with ``--json``) a machine-readable document, and
returns an exit code: 0 when no law was violated, 1 otherwise.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO

from config import resolve_cache_dir
from core.canonical import content_key
from core.classify import classify
from core.colimit import colimit, leg_generators
from core.corpus import enumerate_semilattices
from core.counterexample import counterexample
from core.cover import SparseCover, cover_or_sparse, retract_system, trim_zero
from core.cover_store import CoverStore
from core.diagram import DirectSystem
from core.errors import CodecError, SizeCapExceeded, UnknownSetting
from core.gs import gs_checks, gs_object
from core.models import LawReport
from core.preferences import PreferencesService
from core.serialization import (
    diagram_from_document,
    dump_document,
    encode_diagram,
    encode_semilattice,
    load_document,
    morphism_from_document,
    semilattice_from_document,
)
from core.simult import Found, search_simultaneous
from core.suites import SuiteConfig, run_suite, suite_names
from utils.bitsets import format_mask
from utils.dot_export import export_dot

logger = logging.getLogger(__name__)


@dataclass
class Workbench:
    """What a verb needs besides its arguments."""

    prefs: PreferencesService
    out: TextIO = field(default_factory=lambda: sys.stdout)

    def store(self, args: argparse.Namespace) -> CoverStore:
        cache_dir = resolve_cache_dir(
            getattr(args, "cache_dir", None),
            self.prefs.get("cache.dir", ""),
            self.prefs.get("cache.enabled", True),
        )
        logger.debug("cover cache: %s", cache_dir or "memory only")
        return CoverStore(
            cache_dir,
            phi_max_size=self.prefs.get("limits.phi_max_size"),
            canonical_cap=self.prefs.get("limits.canonical_max_size"),
            free_algebra_cap=self.prefs.get("limits.free_algebra_cap"),
            dense_cap=self.prefs.get("limits.dense_max_size"),
        )

    def emit(self, args: argparse.Namespace, document: Dict[str, Any], lines: List[str]) -> None:
        if getattr(args, "json", False):
            self.out.write(dump_document(document) + "\n")
        else:
            for line in lines:
                self.out.write(line + "\n")


def _exit_code(*reports: LawReport) -> int:
    return 0 if all(r.passed for r in reports) else 1


def _report_lines(report: LawReport) -> List[str]:
    status = "pass" if report.passed else "FAIL" if report.violations else "INCOMPLETE"
    lines = [f"{report.name}: {status} ({report.cases} cases, {len(report.violations)} violations)"]
    lines += [f"  violation: {v.law} on {v.subject} (witness {v.witness})" for v in report.violations]
    lines += [f"  skipped: {s}" for s in report.skipped]
    return lines


def _maps(**morphisms) -> Dict[str, List[int]]:
    return {name: list(f.map) for name, f in morphisms.items()}


# --- verbs ---

def cmd_analyze(args: argparse.Namespace, wb: Workbench) -> int:
    s = semilattice_from_document(load_document(args.file), args.name)
    flags = classify(s)
    document = {"key": content_key(s), "classification": flags.to_dict()}
    lines = [
        f"{s.size} elements, key {content_key(s)}",
        f"distributive: {flags.distributive}  boolean: {flags.boolean}  "
        f"atomistic: {flags.atomistic}  lattice-simple: {flags.lattice_simple}",
        f"J: {[s.label(x) for x in flags.join_irreducibles]}",
        f"M: {[s.label(x) for x in flags.meet_irreducibles]}",
    ]
    if flags.distributivity_witness is not None:
        lines.append(f"distributivity fails at {flags.distributivity_witness}")
    wb.emit(args, document, lines)
    return 0


def cmd_phi(args: argparse.Namespace, wb: Workbench) -> int:
    a = semilattice_from_document(load_document(args.file), args.name)
    store = wb.store(args)
    entry = cover_or_sparse(a, store)
    if isinstance(entry, SparseCover):
        if args.trim_zero:
            raise SizeCapExceeded("--trim-zero needs a dense Φ(A)", witness=entry.key)
        lines = [
            f"Φ(A): 2^{entry.atoms} elements, kept sparse (Φ_*(A): {entry.phi_star_size})",
            f"ε: {[format_mask(m) for m in entry.eps]}",
            f"μ on atoms: {list(entry.mu_atoms)}",
        ]
        report = LawReport("phi")
        entry.check(report, f"entry {entry.key}")
        wb.emit(args, {**entry.summary(), "sparse": True, "report": report.to_dict()}, lines + _report_lines(report))
        return _exit_code(report)
    document: Dict[str, Any] = {
        "key": entry.key,
        "phi": encode_semilattice(entry.phi),
        "phi_star_size": entry.phi_star.size,
        **_maps(eps=entry.eps, mu=entry.mu),
    }
    lines = [
        f"Φ(A): {entry.phi.size} elements (Φ_*(A): {entry.phi_star.size})",
        f"ε: {list(entry.eps.map)}",
        f"μ: {list(entry.mu.map)}",
    ]
    reports = []
    if args.trim_zero:
        trimmed = trim_zero(store)
        eps, mu = trimmed.cover_of(a)
        document["trimmed"] = {"size": eps.dst.size, **_maps(eps=eps, mu=mu), "report": trimmed.report.to_dict()}
        lines += [f"trimmed Φ(A): {eps.dst.size} elements", f"ε: {list(eps.map)}", f"μ: {list(mu.map)}"]
        lines += _report_lines(trimmed.report)
        reports.append(trimmed.report)
    wb.emit(args, document, lines)
    return _exit_code(*reports)


def cmd_gs(args: argparse.Namespace, wb: Workbench) -> int:
    k = semilattice_from_document(load_document(args.file), args.name)
    res = gs_object(k)
    report = gs_checks(k)
    document = {
        "extended": encode_semilattice(res.extended),
        **_maps(eps=res.eps, mu=res.mu),
        "new_atoms": {str(a): list(pair) for a, pair in res.new_atoms.items()},
        "report": report.to_dict(),
    }
    lines = [f"GS(K): {res.extended.size} elements, {len(res.extended.atoms)} atoms"] + _report_lines(report)
    wb.emit(args, document, lines)
    return _exit_code(report)


def cmd_colimit(args: argparse.Namespace, wb: Workbench) -> int:
    d = diagram_from_document(load_document(args.file))
    prefs = wb.prefs
    c = colimit(
        d,
        prefs.get("limits.free_algebra_cap"),
        prefs.get("limits.dense_max_size"),
        prefs.get("limits.canonical_max_size"),
    )
    document = {
        "apex": encode_semilattice(c.apex),
        "legs": {str(d.names[i]): list(leg.map) for i, leg in enumerate(c.legs)},
        "generators": {str(e): [[str(d.names[i]), x] for i, x in gens] for e, gens in c.generator_map.items()},
    }
    lines = [f"colimit: {c.apex.size} elements, generated by {len(leg_generators(c))} leg images"]
    lines += [f"leg {d.names[i]!r}: {list(leg.map)}" for i, leg in enumerate(c.legs)]
    wb.emit(args, document, lines)
    return 0


def cmd_retract_system(args: argparse.Namespace, wb: Workbench) -> int:
    d = diagram_from_document(load_document(args.file))
    result = retract_system(d, wb.store(args))
    document = {
        "system": encode_diagram(result.system),
        "eps": [list(e.map) for e in result.eps],
        "mu": [list(m.map) for m in result.mu],
        "report": result.report.to_dict(),
    }
    lines = [f"point {d.names[i]!r}: Φ has {v.size} elements" for i, v in enumerate(result.system.vertices)]
    wb.emit(args, document, lines + _report_lines(result.report))
    return _exit_code(result.report)


def cmd_counterexample(args: argparse.Namespace, wb: Workbench) -> int:
    report = run_suite("counterexample", _suite_config(args, wb))
    document = {"system": encode_diagram(counterexample().system), "report": report.to_dict()}
    wb.emit(args, document, _report_lines(report))
    return _exit_code(report)


def cmd_search(args: argparse.Namespace, wb: Workbench) -> int:
    d = diagram_from_document(load_document(args.file))
    system = d if isinstance(d, DirectSystem) else DirectSystem.from_diagram(d)
    max_atoms = args.max_atoms or wb.prefs.get("search.max_atoms")
    result = search_simultaneous(
        system,
        max_atoms,
        work_limit=wb.prefs.get("search.work_limit"),
        workers=args.workers or wb.prefs.get("search.workers"),
    )
    if isinstance(result, Found):
        emb = result.embedding
        document = {
            "found": True,
            "work": result.work,
            "targets": encode_diagram(emb.targets),
            "eps": [list(e.map) for e in emb.eps],
        }
        lines = [f"found after {result.work} steps"]
        lines += [f"point {d.names[i]!r}: {v.size} elements" for i, v in enumerate(emb.targets.vertices)]
        wb.emit(args, document, lines)
        return 0
    document = {
        "found": False,
        "work": result.work,
        "reason": result.reason,
        "failures": [
            {"i": i, "j": j, "p": p, "obstructions": [vars(ob) for ob in fail.obstructions]}
            for i, j, p, fail in result.failures
        ],
    }
    wb.emit(args, document, [f"exhausted after {result.work} steps: {result.reason}"])
    return 1


def _suite_config(args: argparse.Namespace, wb: Workbench) -> SuiteConfig:
    prefs = wb.prefs
    return SuiteConfig(
        max_size=getattr(args, "max_size", None),
        store=wb.store(args),
        workers=getattr(args, "workers", None) or prefs.get("search.workers"),
        max_atoms=prefs.get("search.max_atoms"),
        work_limit=prefs.get("search.work_limit"),
        corpus_cap=prefs.get("limits.corpus_max_size"),
        sample_limit=getattr(args, "sample_limit", None),
    )


def cmd_suite(args: argparse.Namespace, wb: Workbench) -> int:
    config = _suite_config(args, wb)
    names = suite_names() if args.suite == "all" else [args.suite]
    reports = [run_suite(name, config) for name in names]
    document = {"reports": [r.to_dict() for r in reports]}
    lines = []
    for r in reports:
        lines += _report_lines(r)
        lines.append(f"  wall time: {r.wall_time_ms} ms")
    wb.emit(args, document, lines)
    return _exit_code(*reports)


def cmd_corpus(args: argparse.Namespace, wb: Workbench) -> int:
    corpus = enumerate_semilattices(args.n, wb.prefs.get("limits.corpus_max_size"))
    document = corpus.to_dict()
    if args.output:
        Path(args.output).write_text(dump_document(document) + "\n", encoding="utf-8")
    counts = ", ".join(f"{n}: {c}" for n, c in corpus.counts().items())
    wb.emit(args, document, [f"{len(corpus.members)} lattices ({counts})"])
    return 0


def cmd_config(args: argparse.Namespace, wb: Workbench) -> int:
    prefs = wb.prefs
    action = args.action
    key = getattr(args, "key", None)
    if key is not None and not prefs.known(key):
        raise UnknownSetting(f"unknown setting {key!r}", witness=key)
    changed: List[str] = []
    document: Dict[str, Any] = {"action": action}
    prefs.on_setting_changed(lambda k, v: changed.append(f"{k} = {v}"))
    prefs.on_settings_applied(lambda snapshot: document.update(settings=snapshot))

    if action == "get":
        document["settings"] = {key: prefs.get(key)}
    elif action == "set":
        prefs.set(key, args.value)
    elif action == "unset":
        prefs.unset(key)
    elif action == "reset":
        if args.section:
            prefs.reset_section(args.section.rstrip(".") + ".")
        else:
            prefs.reset_to_defaults()
    elif action == "export":
        if not prefs.export(args.path):
            raise CodecError(f"cannot write settings to {args.path}", witness=args.path)
    elif action == "import":
        if not prefs.import_from(args.path, merge=not args.replace):
            raise CodecError(f"cannot import settings from {args.path}", witness=args.path)
    document.setdefault("settings", prefs.all())
    document["changed"] = changed

    if action in ("get", "list"):
        lines = [f"{k} = {v}" for k, v in sorted(document["settings"].items())]
    else:
        lines = changed or ["no setting changed"]
    wb.emit(args, document, lines)
    return 0


def cmd_export_dot(args: argparse.Namespace, wb: Workbench) -> int:
    document = load_document(args.file)
    if "index" in document or "diagram" in document:
        obj = diagram_from_document(document)
    elif "morphisms" in document:
        obj = morphism_from_document(document, args.name)
    else:
        obj = semilattice_from_document(document, args.name)
    text = export_dot(obj)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        wb.out.write(text)
    return 0


Command = Callable[[argparse.Namespace, Workbench], int]

COMMANDS: Dict[str, Command] = {
    "analyze": cmd_analyze,
    "phi": cmd_phi,
    "gs": cmd_gs,
    "colimit": cmd_colimit,
    "retract-system": cmd_retract_system,
    "counterexample": cmd_counterexample,
    "search": cmd_search,
    "suite": cmd_suite,
    "corpus": cmd_corpus,
    "export-dot": cmd_export_dot,
    "config": cmd_config,
}


def add_subcommands(parser: argparse.ArgumentParser) -> None:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print a machine-readable JSON document")
    common.add_argument("--cache-dir", help="Directory of the persistent Φ cache")

    sub = parser.add_subparsers(dest="command", required=True)

    def verb(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    p = verb("analyze", "Classify a semilattice")
    p.add_argument("file")
    p.add_argument("--name", help="Semilattice to pick from a multi-object document")

    p = verb("phi", "Canonical Boolean cover Φ(A) with ε and μ")
    p.add_argument("file")
    p.add_argument("--name")
    p.add_argument("--trim-zero", action="store_true", help="Also cut Φ(A) down so that μ separates zero")

    p = verb("gs", "Grätzer–Schmidt extension and its checks")
    p.add_argument("file")
    p.add_argument("--name")

    p = verb("colimit", "Colimit of a finite diagram")
    p.add_argument("file")

    p = verb("retract-system", "Apply Φ pointwise to a direct system")
    p.add_argument("file")

    p = verb("counterexample", "Certify the square without a simultaneous lattice embedding")
    p.add_argument("--workers", type=int)

    p = verb("search", "Search a simultaneous lattice embedding into Boolean systems")
    p.add_argument("file")
    p.add_argument("--max-atoms", type=int)
    p.add_argument("--workers", type=int)

    p = verb("suite", "Run an invariant suite over the corpus")
    p.add_argument("suite", choices=suite_names() + ["all"])
    p.add_argument("--max-size", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument(
        "--sample-limit",
        type=_sample_limit,
        metavar="N|unlimited",
        help="Cap on homomorphisms, cocones and diagrams per case (default: unlimited)",
    )

    p = verb("corpus", "Enumerate lattices up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("--output", "-o")

    p = verb("export-dot", "Hasse diagram in DOT")
    p.add_argument("file")
    p.add_argument("--name")
    p.add_argument("--output", "-o")

    # --json sits on each action so it may follow the action's arguments
    json_only = argparse.ArgumentParser(add_help=False)
    json_only.add_argument("--json", action="store_true", help="Print a machine-readable JSON document")
    actions = sub.add_parser("config", help="Show or change persistent settings").add_subparsers(
        dest="action", required=True
    )

    def action(name: str, help_text: str) -> argparse.ArgumentParser:
        return actions.add_parser(name, parents=[json_only], help=help_text)

    action("list", "Every setting in effect")
    action("get", "One setting").add_argument("key")
    a = action("set", "Persist a setting")
    a.add_argument("key")
    a.add_argument("value")
    action("unset", "Drop a persisted setting").add_argument("key")
    action("reset", "Restore defaults").add_argument("section", nargs="?", help="e.g. search")
    action("export", "Write the settings file elsewhere").add_argument("path")
    a = action("import", "Read settings from a file")
    a.add_argument("path")
    a.add_argument("--replace", action="store_true", help="Drop settings the file does not mention")


def _sample_limit(text: str) -> Optional[int]:
    if text == "unlimited":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'unlimited', got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'unlimited', got {text!r}")
    return value


def dispatch(args: argparse.Namespace, wb: Workbench) -> int:
    return COMMANDS[args.command](args, wb)
