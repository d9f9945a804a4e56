"""Command-line interface: resolve, classpath, scan, hijack, check, compare."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Any, NoReturn, Sequence

from shadowscan.analysis import (
    EcosystemComparison,
    ShadowFinding,
    compare_ecosystems,
    detect_shadowing,
    effective_classes,
    hijack_reach,
    hijack_surface,
    included_nodes,
)
from shadowscan.errors import (
    DepthLimitExceeded,
    PomNotFound,
    ShadowscanError,
    UnknownArtifact,
    UnresolvableDependency,
)
from shadowscan.inventory import inventory_all, load_inventory
from shadowscan.mitigations import (
    DuplicateClassViolation,
    MitigationRule,
    MitigationVerdict,
    SealedPackageViolation,
    SplitPackageViolation,
    check_ban_duplicate_classes,
    check_modules,
    check_sealed,
    load_allowlist,
)
from shadowscan.model import Coordinate, OmittedConflict, OmittedDuplicate, ResolvedNode
from shadowscan.ordering import Ecosystem, LayoutMode, build_classpath, emit_layout
from shadowscan.pom import Repository, fetch_pom, load_repository
from shadowscan.resolver import DEFAULT_MAX_DEPTH, ResolutionReport, resolve

SCHEMA_VERSION = 1
REPO_ENV_VAR = "SHADOWSCAN_REPO"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_RESOLUTION_ERROR = 2
EXIT_SHADOWS_FOUND = 3
EXIT_MITIGATION_FAILED = 4

_RULE_TOKENS = {
    "dup": MitigationRule.BAN_DUPLICATE_CLASSES,
    "sealed": MitigationRule.SEALED_JARS,
    "modules": MitigationRule.JAVA_MODULES,
}


@dataclass(frozen=True)
class Report:
    """Versioned, JSON-serializable result of one command invocation."""

    schema_version: int
    command: str
    inputs: dict[str, Any]
    payload: dict[str, Any]

    def to_json(self) -> str:
        data = {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "payload": self.payload,
        }
        return json.dumps(data, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# payload serialization

def _status_payload(node: ResolvedNode) -> dict[str, Any]:
    if isinstance(node.status, OmittedConflict):
        return {"kind": "omitted-conflict", "winner": str(node.status.winner)}
    if isinstance(node.status, OmittedDuplicate):
        return {
            "kind": "omitted-duplicate",
            "first_occurrence_path": list(node.status.first_occurrence_path),
        }
    return {"kind": "included"}


def _node_payload(node: ResolvedNode) -> dict[str, Any]:
    return {
        "coordinate": str(node.coordinate),
        "path": list(node.path),
        "depth": node.depth,
        "bfs_index": node.bfs_index,
        "status": _status_payload(node),
        "children": [_node_payload(child) for child in node.children],
    }


def _conflicts_payload(resolution: ResolutionReport) -> list[dict[str, Any]]:
    return [
        {
            "group_artifact": str(conflict.group_artifact),
            "winner": {
                "coordinate": str(conflict.winner.coordinate),
                "path": list(conflict.winner.path),
            },
            "losers": [
                {"coordinate": str(loser.coordinate), "path": list(loser.path)}
                for loser in conflict.losers
            ],
        }
        for conflict in resolution.conflicts
    ]


def _findings_payload(findings: list[ShadowFinding]) -> list[dict[str, Any]]:
    return [
        {
            "class_name": str(finding.class_name),
            "winner": str(finding.winner),
            "winner_depth": finding.winner_depth,
            "winner_path": list(finding.winner_path),
            "shadowed_victims": [str(victim) for victim in finding.shadowed_victims],
        }
        for finding in findings
    ]


def _violation_payload(violation: Any) -> dict[str, Any]:
    if isinstance(violation, DuplicateClassViolation):
        return {
            "class_name": str(violation.class_name),
            "winner": str(violation.winner),
            "shadowed": [str(coordinate) for coordinate in violation.shadowed],
        }
    if isinstance(violation, SealedPackageViolation):
        return {
            "package": violation.package,
            "sealed_by": str(violation.sealed_by),
            "winners": [str(coordinate) for coordinate in violation.winners],
        }
    if isinstance(violation, SplitPackageViolation):
        return {
            "package": violation.package,
            "providers": [str(coordinate) for coordinate in violation.providers],
        }
    raise TypeError(f"unexpected violation type {type(violation).__name__}")


def _verdict_payload(verdict: MitigationVerdict) -> dict[str, Any]:
    return {
        "rule": verdict.rule.value,
        "passed": verdict.passed,
        "diagnostic": verdict.diagnostic,
        "violations": [_violation_payload(violation) for violation in verdict.violations],
    }


# ---------------------------------------------------------------------------
# text rendering

def _status_suffix(node: ResolvedNode) -> str:
    if isinstance(node.status, OmittedConflict):
        return f" (omitted: conflict, winner {node.status.winner})"
    if isinstance(node.status, OmittedDuplicate):
        return f" (omitted: duplicate of path {list(node.status.first_occurrence_path)})"
    return ""


def _tree_lines(root: ResolvedNode) -> list[str]:
    lines = [str(root.coordinate)]

    def visit(node: ResolvedNode, prefix: str) -> None:
        for index, child in enumerate(node.children):
            last = index == len(node.children) - 1
            lines.append(f"{prefix}+-{child.coordinate}{_status_suffix(child)}")
            visit(child, prefix + ("   " if last else "|  "))

    visit(root, "")
    return lines


def _conflict_lines(resolution: ResolutionReport) -> list[str]:
    if not resolution.conflicts:
        return ["no conflicts"]
    lines = ["conflicts:"]
    for conflict in resolution.conflicts:
        losers = ", ".join(
            f"{loser.coordinate} at {list(loser.path)}" for loser in conflict.losers
        )
        lines.append(
            f"  {conflict.group_artifact}: winner {conflict.winner.coordinate} "
            f"at {list(conflict.winner.path)}; losers: {losers}"
        )
    return lines


def _finding_lines(findings: list[ShadowFinding]) -> list[str]:
    if not findings:
        return ["no class collisions"]
    lines = [f"{len(findings)} class collision(s):"]
    for finding in findings:
        lines.append(f"  {finding.class_name}")
        lines.append(
            f"    winner: {finding.winner} "
            f"(depth {finding.winner_depth}, path {list(finding.winner_path)})"
        )
        lines.append(
            "    shadowed: " + ", ".join(str(victim) for victim in finding.shadowed_victims)
        )
    return lines


def _verdict_lines(verdict: MitigationVerdict) -> list[str]:
    note = f" ({verdict.diagnostic})" if verdict.diagnostic else ""
    if verdict.passed:
        return [f"{verdict.rule.value}: PASS{note}"]
    lines = [f"{verdict.rule.value}: FAIL ({len(verdict.violations)} violation(s)){note}"]
    for violation in verdict.violations:
        if isinstance(violation, DuplicateClassViolation):
            shadowed = ", ".join(str(coordinate) for coordinate in violation.shadowed)
            lines.append(f"  {violation.class_name}: winner {violation.winner} shadows {shadowed}")
        elif isinstance(violation, SealedPackageViolation):
            winners = ", ".join(str(coordinate) for coordinate in violation.winners)
            lines.append(
                f"  package {violation.package} sealed by {violation.sealed_by} "
                f"splits across {winners}"
            )
        elif isinstance(violation, SplitPackageViolation):
            providers = ", ".join(str(coordinate) for coordinate in violation.providers)
            lines.append(f"  package {violation.package} provided by {providers}")
    return lines


def _comparison_lines(comparison: EcosystemComparison) -> list[str]:
    if not comparison.entries:
        return ["no duplicated classes"]
    lines = []
    for entry in comparison.entries:
        marker = " DIFFERS" if entry.differs else ""
        lines.append(
            f"{entry.class_name}: maven={entry.maven_winner} "
            f"gradle={entry.gradle_winner}{marker}"
        )
    return lines


# ---------------------------------------------------------------------------
# commands

def _load_resolution(args: argparse.Namespace) -> tuple[Repository, ResolutionReport]:
    repo = load_repository(args.repo)
    root_document = fetch_pom(repo, Coordinate.parse(args.root))
    return repo, resolve(repo, root_document, max_depth=args.max_depth)


def _base_inputs(args: argparse.Namespace) -> dict[str, Any]:
    return {"repo": args.repo, "root": args.root, "max_depth": args.max_depth}


def cmd_resolve(args: argparse.Namespace) -> tuple[int, Report, str]:
    _, resolution = _load_resolution(args)
    report = Report(
        SCHEMA_VERSION,
        "resolve",
        _base_inputs(args),
        {
            "tree": _node_payload(resolution.tree.root),
            "conflicts": _conflicts_payload(resolution),
        },
    )
    text = "\n".join(_tree_lines(resolution.tree.root) + [""] + _conflict_lines(resolution))
    return EXIT_OK, report, text


def cmd_classpath(args: argparse.Namespace) -> tuple[int, Report, str]:
    _, resolution = _load_resolution(args)
    classpath = build_classpath(resolution.tree, Ecosystem(args.ecosystem))
    layout_payload = None
    lines = [str(entry) for entry in classpath.entries] or ["(empty classpath)"]
    if args.layout != "none":
        layout = emit_layout(resolution.tree, LayoutMode(args.layout))
        layout_payload = {"mode": layout.mode.value, "lines": list(layout.lines)}
        lines += [""] + list(layout.lines)
    inputs = _base_inputs(args) | {"ecosystem": args.ecosystem, "layout": args.layout}
    report = Report(
        SCHEMA_VERSION,
        "classpath",
        inputs,
        {
            "ecosystem": classpath.ecosystem.value,
            "root_precedes": classpath.root_precedes,
            "entries": [str(entry) for entry in classpath.entries],
            "layout": layout_payload,
        },
    )
    return EXIT_OK, report, "\n".join(lines)


def cmd_scan(args: argparse.Namespace) -> tuple[int, Report, str]:
    repo, resolution = _load_resolution(args)
    classpath = build_classpath(resolution.tree, Ecosystem(args.ecosystem))
    inventories = inventory_all(repo, classpath)
    findings = detect_shadowing(effective_classes(inventories), resolution.tree)
    inputs = _base_inputs(args) | {
        "ecosystem": args.ecosystem,
        "fail_on_shadow": args.fail_on_shadow,
    }
    report = Report(
        SCHEMA_VERSION,
        "scan",
        inputs,
        {"ecosystem": args.ecosystem, "findings": _findings_payload(findings)},
    )
    code = EXIT_SHADOWS_FOUND if findings and args.fail_on_shadow else EXIT_OK
    return code, report, "\n".join(_finding_lines(findings))


def cmd_hijack(args: argparse.Namespace) -> tuple[int, Report, str]:
    _, resolution = _load_resolution(args)
    ecosystem = Ecosystem(args.ecosystem)
    classpath = build_classpath(resolution.tree, ecosystem)
    nodes = included_nodes(resolution.tree)
    if args.attacker:
        subject = Coordinate.parse(args.attacker)
        mode = "reach"
        members = hijack_reach(resolution.tree, ecosystem, subject).reachable_victims
    else:
        subject = Coordinate.parse(args.target)
        mode = "surface"
        members = hijack_surface(resolution.tree, ecosystem, subject)
    ordered = [entry for entry in classpath.entries if entry in members]
    artifacts = [
        {"coordinate": str(entry), "path": list(nodes[entry].path)} for entry in ordered
    ]
    inputs = _base_inputs(args) | {
        "ecosystem": args.ecosystem,
        "attacker": args.attacker,
        "target": args.target,
    }
    report = Report(
        SCHEMA_VERSION,
        "hijack",
        inputs,
        {"mode": mode, "subject": str(subject), "artifacts": artifacts},
    )
    lines = [f"{mode} of {subject} ({ecosystem.value}):"]
    if artifacts:
        lines += [f"  {a['coordinate']} (path {a['path']})" for a in artifacts]
    else:
        lines.append("  (empty)")
    return EXIT_OK, report, "\n".join(lines)


def cmd_check(args: argparse.Namespace) -> tuple[int, Report, str]:
    repo, resolution = _load_resolution(args)
    classpath = build_classpath(resolution.tree, Ecosystem.MAVEN)
    inventories = inventory_all(repo, classpath)
    class_map = effective_classes(inventories)
    allowlist = load_allowlist(args.allowlist) if args.allowlist else ()
    verdicts: list[MitigationVerdict] = []
    for rule in args.rules:
        if rule is MitigationRule.BAN_DUPLICATE_CLASSES:
            verdicts.append(check_ban_duplicate_classes(class_map, allowlist))
        elif rule is MitigationRule.SEALED_JARS:
            verdicts.append(check_sealed(inventories, class_map))
        else:
            verdicts.append(check_modules(inventories, args.root_module))
    inputs = _base_inputs(args) | {
        "rules": [rule.value for rule in args.rules],
        "allowlist": args.allowlist,
        "root_module": args.root_module,
    }
    report = Report(
        SCHEMA_VERSION,
        "check",
        inputs,
        {"verdicts": [_verdict_payload(verdict) for verdict in verdicts]},
    )
    lines: list[str] = []
    for verdict in verdicts:
        lines.extend(_verdict_lines(verdict))
    code = EXIT_OK if all(verdict.passed for verdict in verdicts) else EXIT_MITIGATION_FAILED
    return code, report, "\n".join(lines)


def cmd_compare(args: argparse.Namespace) -> tuple[int, Report, str]:
    repo, resolution = _load_resolution(args)
    classpath = build_classpath(resolution.tree, Ecosystem.MAVEN)
    inventories_by_coord = {
        coordinate: load_inventory(repo, coordinate) for coordinate in classpath.entries
    }
    comparison = compare_ecosystems(resolution.tree, inventories_by_coord)
    report = Report(
        SCHEMA_VERSION,
        "compare",
        _base_inputs(args),
        {
            "classes": [
                {
                    "class_name": str(entry.class_name),
                    "maven_winner": str(entry.maven_winner),
                    "gradle_winner": str(entry.gradle_winner),
                    "differs": entry.differs,
                }
                for entry in comparison.entries
            ]
        },
    )
    return EXIT_OK, report, "\n".join(_comparison_lines(comparison))


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    # usage problems are input errors: keep exit code 1, not argparse's 2
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT_ERROR)


def _rules_argument(value: str) -> tuple[MitigationRule, ...]:
    rules: list[MitigationRule] = []
    for token in value.split(","):
        token = token.strip()
        if token not in _RULE_TOKENS:
            choices = ", ".join(sorted(_RULE_TOKENS))
            raise argparse.ArgumentTypeError(f"unknown rule {token!r} (choose from {choices})")
        rule = _RULE_TOKENS[token]
        if rule not in rules:
            rules.append(rule)
    return tuple(rules)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument(
        "--repo",
        default=os.environ.get(REPO_ENV_VAR),
        help=f"repository root directory (default: ${REPO_ENV_VAR})",
    )
    common.add_argument("--root", required=True, help="root project coordinate group:artifact:version")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)

    parser = _Parser(prog="shadowscan", description=__doc__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser("resolve", parents=[common], help="print the resolved tree")
    sub.set_defaults(handler=cmd_resolve)

    sub = subparsers.add_parser("classpath", parents=[common], help="print the ordered classpath")
    sub.add_argument("--ecosystem", choices=("maven", "gradle"), default="maven")
    sub.add_argument("--layout", choices=("flat", "nested", "none"), default="none")
    sub.set_defaults(handler=cmd_classpath)

    sub = subparsers.add_parser("scan", parents=[common], help="report shadowed classes")
    sub.add_argument("--ecosystem", choices=("maven", "gradle"), default="maven")
    sub.add_argument("--fail-on-shadow", action="store_true")
    sub.set_defaults(handler=cmd_scan)

    sub = subparsers.add_parser("hijack", parents=[common], help="hijack reach or surface of an artifact")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--attacker", help="coordinate whose reach to compute")
    group.add_argument("--target", help="coordinate whose surface to compute")
    sub.add_argument("--ecosystem", choices=("maven", "gradle"), default="maven")
    sub.set_defaults(handler=cmd_hijack)

    sub = subparsers.add_parser("check", parents=[common], help="run mitigation checks")
    sub.add_argument("--rules", type=_rules_argument, default=tuple(_RULE_TOKENS.values()))
    sub.add_argument("--allowlist", help="file of allowed collision patterns")
    sub.add_argument("--root-module", action="store_true", dest="root_module")
    sub.set_defaults(handler=cmd_check)

    sub = subparsers.add_parser("compare", parents=[common], help="diff Maven vs Gradle winners")
    sub.set_defaults(handler=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(message)s")
    if not args.repo:
        print(f"error: no repository given (--repo or ${REPO_ENV_VAR})", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        code, report, text = args.handler(args)
    except (PomNotFound, UnresolvableDependency, UnknownArtifact, DepthLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION_ERROR
    except ShadowscanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if args.format == "json":
        sys.stdout.write(report.to_json())
    else:
        print(text)
    return code
