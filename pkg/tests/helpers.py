"""Builders and independent oracles shared by the test suite."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from random import Random

from shadowscan.analysis import EffectiveClassMap, effective_classes
from shadowscan.inventory import ClassInventory, inventory_all
from shadowscan.model import (
    INCLUDED,
    Coordinate,
    DependencyDeclaration,
    FullyQualifiedClassName,
    NodeStatus,
    PomDocument,
    ResolvedNode,
    ResolvedTree,
)
from shadowscan.ordering import Classpath, Ecosystem, build_classpath
from shadowscan.pom import Repository, RepositoryEntry, fetch_pom, load_repository
from shadowscan.resolver import ResolutionReport, resolve

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def coord(text: str) -> Coordinate:
    return Coordinate.parse(text)


# ---------------------------------------------------------------------------
# in-memory tree construction

# A shape is ("g:a:v", [child shapes]) with an optional third status element.
Shape = tuple


def build_tree(shape: Shape) -> ResolvedTree:
    """Build a ResolvedTree from nested shape tuples, assigning level-order indices."""
    indices: dict[tuple[int, ...], int] = {}
    queue: deque[tuple[Shape, tuple[int, ...]]] = deque([(shape, ())])
    counter = 0
    while queue:
        node, path = queue.popleft()
        indices[path] = counter
        counter += 1
        for child_index, child in enumerate(node[1]):
            queue.append((child, path + (child_index,)))

    def freeze(node: Shape, path: tuple[int, ...]) -> ResolvedNode:
        status: NodeStatus = node[2] if len(node) > 2 else INCLUDED
        return ResolvedNode(
            coordinate=Coordinate.parse(node[0]),
            path=path,
            depth=len(path),
            bfs_index=indices[path],
            status=status,
            children=tuple(
                freeze(child, path + (child_index,))
                for child_index, child in enumerate(node[1])
            ),
        )

    return ResolvedTree(freeze(shape, ()))


def sample_tree() -> ResolvedTree:
    """The ten-node example tree used throughout the fixtures."""
    e = "com.example"
    return build_tree(
        (f"{e}:Project:1.0", [
            (f"{e}:D1:1.0", [
                (f"{e}:D11:1.0", [
                    (f"{e}:D111:1.0", []),
                    (f"{e}:D112:1.0", []),
                ]),
            ]),
            (f"{e}:D2:1.0", [
                (f"{e}:D21:1.0", [(f"{e}:D211:1.0", [])]),
                (f"{e}:D22:1.0", [(f"{e}:D221:1.0", [])]),
            ]),
        ])
    )


def random_tree(rng: Random, max_depth: int = 5, max_children: int = 4) -> ResolvedTree:
    """Random all-included tree with distinct artifacts; the root keeps >= 1 child."""
    counter = [0]

    def gen(depth: int, min_children: int = 0) -> Shape:
        ident = counter[0]
        counter[0] += 1
        children = []
        if depth < max_depth:
            for _ in range(rng.randint(min_children, max_children)):
                children.append(gen(depth + 1))
        return (f"org.gen:lib{ident}:1.0", children)

    return build_tree(gen(0, min_children=1))


# ---------------------------------------------------------------------------
# on-disk repository construction

def write_pom(directory: Path, coordinate: Coordinate, dependencies: list[Coordinate]) -> None:
    lines = [
        "<project>",
        f"  <groupId>{coordinate.group_id}</groupId>",
        f"  <artifactId>{coordinate.artifact_id}</artifactId>",
        f"  <version>{coordinate.version}</version>",
    ]
    if dependencies:
        lines.append("  <dependencies>")
        for dep in dependencies:
            lines += [
                "    <dependency>",
                f"      <groupId>{dep.group_id}</groupId>",
                f"      <artifactId>{dep.artifact_id}</artifactId>",
                f"      <version>{dep.version}</version>",
                "    </dependency>",
            ]
        lines.append("  </dependencies>")
    lines.append("</project>")
    (directory / "pom.xml").write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_repo(
    root: Path,
    poms: dict[str, list[str]],
    classes: dict[str, list[str]] | None = None,
) -> Path:
    """Write a repository layout; keys and dependency lists are 'g:a:v' strings.

    ``classes`` values are raw classes.txt lines, so directives are allowed.
    """
    classes = classes or {}
    for text, dependency_texts in poms.items():
        coordinate = Coordinate.parse(text)
        directory = root / coordinate.group_id / coordinate.artifact_id / coordinate.version
        directory.mkdir(parents=True, exist_ok=True)
        write_pom(directory, coordinate, [Coordinate.parse(t) for t in dependency_texts])
        if text in classes:
            (directory / "classes.txt").write_text(
                "".join(line + "\n" for line in classes[text]), encoding="utf-8"
            )
    return root


def memory_repo(poms: dict[str, list[str]]) -> Repository:
    """An in-memory Repository, for sweeps that would otherwise hit the disk."""
    entries = {}
    for text, dependency_texts in poms.items():
        coordinate = Coordinate.parse(text)
        document = PomDocument(
            coordinate,
            tuple(
                DependencyDeclaration(Coordinate.parse(dep), index)
                for index, dep in enumerate(dependency_texts)
            ),
        )
        entries[coordinate] = RepositoryEntry(Path("<memory>/pom.xml"), document, None)
    return Repository(Path("<memory>"), entries)


# ---------------------------------------------------------------------------
# resolution oracle

def full_expansion_winners(
    poms: dict[str, list[str]], root_text: str, max_depth: int = 32
) -> dict[str, tuple[str, tuple[int, ...]]]:
    """Materialize the unpruned expansion, then pick winners level by level.

    Every declaration position is materialized first, with no conflict logic.
    The scan then walks positions in level order: the first live occurrence
    of a group:artifact wins, later live occurrences lose, and positions
    below a losing occurrence are dead because a build never fetches them.
    Returns ``group:artifact`` mapped to the winning ``(version, path)``.
    """
    nodes: list[tuple[tuple[int, ...], str, int | None]] = []
    queue: deque[tuple[tuple[int, ...], str, int | None]] = deque([((), root_text, None)])
    while queue:
        path, text, parent = queue.popleft()
        position = len(nodes)
        nodes.append((path, text, parent))
        if len(path) >= max_depth:
            continue
        for child_index, child_text in enumerate(poms[text]):
            queue.append((path + (child_index,), child_text, position))

    expandable = [False] * len(nodes)
    winners: dict[str, tuple[str, tuple[int, ...]]] = {}
    for position, (path, text, parent) in enumerate(nodes):
        if parent is not None and not expandable[parent]:
            continue
        ga, _, version = text.rpartition(":")
        if ga not in winners:
            winners[ga] = (version, path)
            expandable[position] = True
    return winners


def random_conflict_repo(rng: Random) -> tuple[dict[str, list[str]], str]:
    """Acyclic POM set where several group:artifact pairs ship two versions.

    Dependencies always point at strictly later list positions, so the full
    expansion is finite; version conflicts come from the shuffled order.
    """
    ga_count = rng.randint(3, 6)
    coords: list[str] = []
    for i in range(ga_count):
        for version in range(1, rng.randint(1, 2) + 1):
            coords.append(f"org.gen:lib{i}:{version}.0")
    rng.shuffle(coords)
    poms: dict[str, list[str]] = {}
    for index, text in enumerate(coords):
        own_ga = text.rsplit(":", 1)[0]
        later_by_ga: dict[str, list[str]] = {}
        for candidate in coords[index + 1 :]:
            ga = candidate.rsplit(":", 1)[0]
            if ga != own_ga:
                later_by_ga.setdefault(ga, []).append(candidate)
        chosen = rng.sample(sorted(later_by_ga), k=min(len(later_by_ga), rng.randint(0, 2)))
        poms[text] = [rng.choice(later_by_ga[ga]) for ga in chosen]
    by_ga: dict[str, list[str]] = {}
    for candidate in coords:
        by_ga.setdefault(candidate.rsplit(":", 1)[0], []).append(candidate)
    root_text = "org.gen:root:1.0"
    chosen = rng.sample(sorted(by_ga), k=min(len(by_ga), rng.randint(1, 4)))
    poms[root_text] = [rng.choice(by_ga[ga]) for ga in chosen]
    return poms, root_text


# ---------------------------------------------------------------------------
# inventory generation and the class-lookup oracle

def random_inventories(
    rng: Random, max_artifacts: int = 50, max_classes: int = 200
) -> list[ClassInventory]:
    """Inventories with deliberate class-name collisions across artifacts."""
    pool_size = rng.randint(1, max_classes)
    pool = [f"org.pool.p{i % 7}.Class{i}" for i in range(pool_size)]
    inventories = []
    for n in range(rng.randint(1, max_artifacts)):
        names = rng.sample(pool, k=rng.randint(0, min(8, pool_size)))
        inventories.append(
            ClassInventory(
                Coordinate.of("org.gen", f"art{n}", "1.0"),
                tuple(FullyQualifiedClassName(name) for name in names),
            )
        )
    return inventories


def first_provider_scan(
    inventories: list[ClassInventory],
) -> dict[str, tuple[Coordinate, tuple[Coordinate, ...]]]:
    """Per class name, walk the classpath front to back and stop at the first provider."""
    names: list[FullyQualifiedClassName] = []
    seen: set[str] = set()
    for inventory in inventories:
        for cls in inventory.classes:
            if cls not in seen:
                seen.add(cls)
                names.append(cls)
    result = {}
    for name in names:
        providers = [inv.coordinate for inv in inventories if name in inv.classes]
        result[name] = (providers[0], tuple(providers[1:]))
    return result


# ---------------------------------------------------------------------------
# fixture pipeline

@dataclass
class Pipeline:
    repo: Repository
    resolution: ResolutionReport
    classpath: Classpath
    inventories: list[ClassInventory]
    class_map: EffectiveClassMap


def run_pipeline(fixture: str, root_text: str, ecosystem: Ecosystem = Ecosystem.MAVEN) -> Pipeline:
    """Load a bundled fixture end to end, up to its effective class map."""
    repo = load_repository(FIXTURES / fixture)
    resolution = resolve(repo, fetch_pom(repo, coord(root_text)))
    classpath = build_classpath(resolution.tree, ecosystem)
    inventories = inventory_all(repo, classpath)
    return Pipeline(repo, resolution, classpath, inventories, effective_classes(inventories))
