"""Command-line front end: ``fickle <command> ...``.

Exit status: 0 on success, 3 for unreadable input (parse errors), 4 when the
input is well formed but the requested analysis does not apply to it.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import analysis, classifier, requirements, trace_machine
from .lattice_core import (
    LATTICE,
    POSET,
    USL,
    ParseError,
    StructureError,
    classify_structure,
    load_structure,
    missing_joins,
    missing_meets,
    rep_str,
    to_dot,
)
from .ordinal import OrdinalSyntaxError, format_ordinal, parse_ordinal

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 3
EXIT_CONFLICT = 4

_REJECTED_LINE = "rejected as >ω² candidate; witness sublattice: {}"


class Report:
    """Named sections of text lines plus a structured twin."""

    def __init__(self, source: str | None = None):
        self.lines = []
        self.data = {"input": source} if source else {}

    def add(self, key, value, *lines):
        self.data[key] = value
        self.lines.extend(lines)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"

    def structured(self) -> str:
        return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"


def _pairs(pairs) -> str:
    return ",".join(f"({a},{b})" for a, b in pairs)


def _validation(s, report: Report):
    kind = classify_structure(s)
    if kind == LATTICE:
        head = f"lattice, {len(s)} elements"
    elif kind == USL:
        head = f"upper-semilattice; missing meets: {_pairs(missing_meets(s))}"
    else:
        head = f"poset-only; missing joins: {_pairs(missing_joins(s))}"
    labels = {n: rep_str(g) for n, g in sorted(s.labels.items())}
    lines = [head, f"elements: {len(s)}, covers: {len(s.covers)}"]
    if s.removed:
        lines.append("removed meets: " + ", ".join(sorted(s.removed)))
    lines.append("labels: " + (", ".join(f"{n}={g}" for n, g in labels.items()) if labels else "none"))
    report.add("validation", {
        "kind": kind, "elements": len(s), "covers": len(s.covers),
        "missing_meets": [list(p) for p in missing_meets(s)],
        "missing_joins": [list(p) for p in missing_joins(s)],
        "removed": sorted(s.removed), "labels": labels,
    }, *lines)
    return kind


def cmd_validate(path) -> Report:
    s = load_structure(path)
    report = Report(str(path))
    _validation(s, report)
    return report


def cmd_analyze(path) -> Report:
    s = load_structure(path)
    report = Report(str(path))
    kind = _validation(s, report)
    if kind != LATTICE:
        raise StructureError(f"analysis needs a lattice, got {kind}")
    ok, triple = analysis.is_distributive(s)
    report.add("distributive", {"value": ok, "counterexample": list(triple) if triple else None},
               "distributive: yes" if ok else "distributive: no, a∧(b∨c) ≠ (a∧b)∨(a∧c) at " + ", ".join(triple))
    irr, primes = analysis.join_irreducibles(s), analysis.join_primes(s)
    report.add("join_irreducibles", irr, "join-irreducible: " + " ".join(irr))
    report.add("join_primes", primes, "join-prime: " + " ".join(primes))
    w = analysis.birkhoff_witness(s)
    if w:
        assert w.check(s)
        line = f"irreducible but not prime: {w.element} ≤ {w.cover[0]} ∨ {w.cover[1]}"
        report.add("birkhoff", {"element": w.element, "cover": list(w.cover)}, line)
    else:
        report.add("birkhoff", None, "every join-irreducible is join-prime")
    direct = {}
    for n in range(2, analysis.MAX_DIRECT + 1):
        ok, gens = analysis.is_n_direct(s, n)
        direct[n] = list(gens) if ok else None
        report.lines.append(f"{n}-direct: " + (f"yes, generated by {' '.join(gens)}" if ok else "no"))
    report.data["direct"] = direct
    return report


def _classification_lines(c: classifier.Classification) -> list:
    lines = []
    for f in c.findings:
        if f == classifier.REJECTED:
            lines.append(_REJECTED_LINE.format(c.embedding.render()))
        elif f == classifier.CATALOG_KNOWN:
            lines.append(f"catalog-known: {c.catalog}, level {c.level or 'unknown'}")
        elif f == classifier.OMEGA_OMEGA:
            lines.append("omega-omega-necessary; triple: " + ", ".join(c.triple))
        elif f == classifier.DISTRIBUTIVE:
            lines.append("distributive: bounded below any nonzero r.e. degree")
    if not c.findings:
        lines.append("open-candidate")
    lines.extend(f"note: {n}" for n in c.notes)
    return lines


def cmd_classify(path) -> Report:
    s = load_structure(path)
    report = Report(str(path))
    c = classifier.classify(s)
    if c.triple:
        assert classifier.is_omega_omega_triple(s, *c.triple)
    if c.embedding:
        assert c.embedding.check(s)
    report.add("classification", c.as_dict(), *_classification_lines(c))
    return report


def cmd_requirements(path) -> Report:
    s = load_structure(path)
    report = Report(str(path))
    table = requirements.generate_requirements(s)
    report.add("requirements", table.as_dict(), table.render())
    return report


def cmd_enumerate(n: int) -> Report:
    report = Report()
    found = analysis.enumerate_direct(n)
    rows, lines = [], [f"{len(found)} lattices that are m-direct for some 2 <= m <= {n}"]
    for L in found:
        entry = classifier.catalog_match(L)
        name = entry.name if entry else "-"
        covers = " ".join(f"{a}<{b}" for a, b in L.covers)
        rows.append({"size": len(L), "catalog": entry.name if entry else None, "covers": [list(c) for c in L.covers]})
        lines.append(f"{len(L):>2} elements  {name:<8} {covers}")
    report.add("lattices", rows, *lines)
    return report


def _load_config(path):
    with open(path, encoding="utf-8") as fh:
        return trace_machine.parse_config(fh.read())


def cmd_simulate(config_path, script_path) -> Report:
    config = _load_config(config_path)
    with open(script_path, encoding="utf-8") as fh:
        script = trace_machine.parse_script(fh.read())
    report = Report(str(config_path))
    log = trace_machine.run(config, script)
    report.add("log", log.as_dict(), log.render())
    return report


def cmd_bound(config_path) -> Report:
    config = _load_config(config_path)
    report = Report(str(config_path))
    bound = trace_machine.fickleness_bound(config)
    factors = trace_machine.bound_factors(config)
    ceiling = trace_machine.rho_ceiling(config)
    shown = ["w" if f is None else str(f) for f in factors]
    relation = "<" if bound < ceiling else "=" if bound == ceiling else ">"
    report.add("bound", {
        "bound": format_ordinal(bound),
        "factors": shown,
        "factor_product": format_ordinal(trace_machine.factor_product(factors)),
        "rho_size": config.rho_size,
        "ceiling": format_ordinal(ceiling),
    }, f"bound: {format_ordinal(bound)}",
       "stopped trace per gate (lowest priority first): " + " ".join(shown),
       f"product of per-gate factors: {format_ordinal(trace_machine.factor_product(factors))}",
       f"rho_size {config.rho_size}: bound {relation} {format_ordinal(ceiling)}")
    return report


def cmd_ord(expression: str) -> Report:
    value = parse_ordinal(expression, strict=False)
    report = Report()
    report.add("ordinal", format_ordinal(value), format_ordinal(value))
    return report


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("text", "structured"))
    common.add_argument("--dot", metavar="OUT", help="write the Hasse diagram in DOT ('-' for stdout)")
    p = argparse.ArgumentParser(prog="fickle", parents=[common],
                                description="Finite lattice fickleness toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("validate", "structure kind and counts"),
                           ("analyze", "distributivity, irreducibles, directness"),
                           ("classify", "fickleness verdict"),
                           ("requirements", "embedding requirement table")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("path")
    sp = sub.add_parser("enumerate", parents=[common], help="list small direct lattices")
    sp.add_argument("--direct", type=int, required=True, metavar="N")
    sp = sub.add_parser("simulate", parents=[common], help="replay a trace-machine script")
    sp.add_argument("--config", required=True)
    sp.add_argument("--script", required=True)
    sp = sub.add_parser("bound", parents=[common], help="ordinal bound on permissions")
    sp.add_argument("--config", required=True)
    sp = sub.add_parser("ord", parents=[common], help="normalise an ordinal expression")
    sp.add_argument("expression")
    return p


def _dispatch(args) -> Report:
    cmd = args.command
    if cmd == "validate":
        return cmd_validate(args.path)
    if cmd == "analyze":
        return cmd_analyze(args.path)
    if cmd == "classify":
        return cmd_classify(args.path)
    if cmd == "requirements":
        return cmd_requirements(args.path)
    if cmd == "enumerate":
        return cmd_enumerate(args.direct)
    if cmd == "simulate":
        return cmd_simulate(args.config, args.script)
    if cmd == "bound":
        return cmd_bound(args.config)
    return cmd_ord(args.expression)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    fmt = getattr(args, "format", "text")
    dot = getattr(args, "dot", None)
    try:
        report = _dispatch(args)
        if dot is not None:
            if not hasattr(args, "path"):
                raise StructureError("--dot applies to structure commands only")
            diagram = to_dot(load_structure(args.path))
            if dot == "-":
                sys.stdout.write(diagram)
            else:
                with open(dot, "w", encoding="utf-8") as fh:
                    fh.write(diagram)
    except (ParseError, OrdinalSyntaxError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (StructureError, trace_machine.ExtensionConflict, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(report.structured() if fmt == "structured" else report.text())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
