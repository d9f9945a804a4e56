"""The three mitigation checks, run as pure analyses over the class map."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence

from shadowscan.analysis import EffectiveClassMap
from shadowscan.errors import InvalidClassName, InvalidPattern, IoFailure
from shadowscan.inventory import ClassInventory
from shadowscan.model import Coordinate, FullyQualifiedClassName


class MitigationRule(str, Enum):
    BAN_DUPLICATE_CLASSES = "ban-duplicate-classes"
    SEALED_JARS = "sealed-jars"
    JAVA_MODULES = "java-modules"


@dataclass(frozen=True)
class DuplicateClassViolation:
    class_name: FullyQualifiedClassName
    winner: Coordinate
    shadowed: tuple[Coordinate, ...]


@dataclass(frozen=True)
class SealedPackageViolation:
    package: str
    sealed_by: Coordinate
    winners: tuple[Coordinate, ...]


@dataclass(frozen=True)
class SplitPackageViolation:
    package: str
    providers: tuple[Coordinate, ...]


@dataclass(frozen=True)
class MitigationVerdict:
    """Pass/fail outcome of one rule with its structured violations."""

    rule: MitigationRule
    passed: bool
    violations: tuple = ()
    diagnostic: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "violations", tuple(self.violations))
        if self.passed != (not self.violations):
            raise ValueError("passed must mirror an empty violation list")


def compile_pattern(pattern: str) -> Callable[[str], bool]:
    """Validate an allowlist pattern and return its matcher.

    Three forms are supported: an exact class name, a package prefix such as
    ``org.test.*`` (matching everything under the package), and a trailing
    name prefix such as ``org.test.Nice*``. The wildcard may only appear as
    the final character.
    """
    if not pattern:
        raise InvalidPattern("empty pattern")
    if "*" in pattern[:-1]:
        raise InvalidPattern(f"{pattern!r}: '*' may only appear as the final character")
    if pattern.endswith("*"):
        prefix = pattern[:-1]
        dotted = prefix[:-1] if prefix.endswith(".") else prefix
        if dotted:
            _require_dotted(dotted, pattern)
        elif prefix:
            raise InvalidPattern(f"{pattern!r} has an empty package prefix")
        return lambda name: name.startswith(prefix)
    _require_dotted(pattern, pattern)
    return lambda name: name == pattern


def _require_dotted(value: str, pattern: str) -> None:
    try:
        FullyQualifiedClassName(value)
    except InvalidClassName:
        raise InvalidPattern(f"{pattern!r} is not a valid class or package pattern") from None


def load_allowlist(path: Path | str) -> tuple[str, ...]:
    """Read one pattern per line; blank lines and ``#`` comments are skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoFailure(f"cannot read allowlist {path}: {exc}") from exc
    patterns: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            patterns.append(line)
    return tuple(patterns)


def check_ban_duplicate_classes(
    class_map: EffectiveClassMap, allowlist: Iterable[str] = ()
) -> MitigationVerdict:
    """Fail on any shadowed class not covered by the allowlist.

    Collisions are sometimes expected (artifacts that were split or
    repackaged), hence the allowlist; left empty this is the strict CI gate.
    """
    matchers = [compile_pattern(pattern) for pattern in allowlist]
    violations = tuple(
        DuplicateClassViolation(class_name, binding.winner, binding.shadowed)
        for class_name, binding in sorted(class_map.bindings.items())
        if binding.shadowed and not any(match(class_name) for match in matchers)
    )
    return MitigationVerdict(MitigationRule.BAN_DUPLICATE_CLASSES, not violations, violations)


def check_sealed(
    inventories: Sequence[ClassInventory], class_map: EffectiveClassMap
) -> MitigationVerdict:
    """Detect partial hijacks of sealed packages.

    A sealed package whose classes load from more than one artifact, one of
    them the sealing artifact itself, fails at runtime when the second
    archive is consulted. An attacker replacing the entire package defeats
    sealing, so that case passes here by design.
    """
    winners_by_package: dict[str, list[Coordinate]] = {}
    for class_name, binding in class_map.bindings.items():
        bucket = winners_by_package.setdefault(class_name.package, [])
        if binding.winner not in bucket:
            bucket.append(binding.winner)
    violations: list[SealedPackageViolation] = []
    for inventory in inventories:
        for package in sorted(inventory.sealed_packages):
            winners = winners_by_package.get(package, [])
            if len(winners) >= 2 and inventory.coordinate in winners:
                violations.append(
                    SealedPackageViolation(package, inventory.coordinate, tuple(winners))
                )
    return MitigationVerdict(MitigationRule.SEALED_JARS, not violations, tuple(violations))


def check_modules(
    inventories: Sequence[ClassInventory], root_is_module: bool
) -> MitigationVerdict:
    """Split-package detection under the module system.

    Protection only engages when the project itself is a module; every
    dependency then participates, named module or automatic. Without a
    modular root the check passes vacuously and says so.
    """
    if not root_is_module:
        return MitigationVerdict(
            MitigationRule.JAVA_MODULES,
            True,
            diagnostic="module protection inactive: the project is not a module",
        )
    providers: dict[str, list[Coordinate]] = {}
    for inventory in inventories:
        for package in sorted(inventory.packages):
            bucket = providers.setdefault(package, [])
            if inventory.coordinate not in bucket:
                bucket.append(inventory.coordinate)
    violations = tuple(
        SplitPackageViolation(package, tuple(coordinates))
        for package, coordinates in sorted(providers.items())
        if len(coordinates) >= 2
    )
    return MitigationVerdict(MitigationRule.JAVA_MODULES, not violations, violations)
