"""Breadth-first expansion and nearest-wins conflict resolution."""

from __future__ import annotations

from random import Random

import pytest

from shadowscan.errors import DepthLimitExceeded, UnresolvableDependency
from shadowscan.model import OmittedConflict, OmittedDuplicate, bfs_order
from shadowscan.pom import fetch_pom, load_repository
from shadowscan.resolver import resolve
from tests.helpers import (
    FIXTURES,
    coord,
    full_expansion_winners,
    make_repo,
    random_conflict_repo,
)


def resolve_repo(tmp_path, poms, root_text, **kwargs):
    repo = load_repository(make_repo(tmp_path, poms))
    return resolve(repo, fetch_pom(repo, coord(root_text)), **kwargs)


def status_by_artifact(tree):
    return {str(node.coordinate): node.status for node in bfs_order(tree)}


class TestCleanResolution:
    def test_sample_fixture_has_ten_included_nodes(self):
        repo = load_repository(FIXTURES / "sample-app")
        report = resolve(repo, fetch_pom(repo, coord("com.example:Project:1.0")))
        nodes = bfs_order(report.tree)
        assert len(nodes) == 10
        assert all(node.included for node in nodes)
        assert report.conflicts == ()

    def test_children_follow_declaration_order(self):
        repo = load_repository(FIXTURES / "sample-app")
        report = resolve(repo, fetch_pom(repo, coord("com.example:Project:1.0")))
        for node in bfs_order(report.tree):
            declared = fetch_pom(repo, node.coordinate).dependencies
            assert [c.coordinate for c in node.children] == [d.coordinate for d in declared]


class TestConflicts:
    def test_shallower_version_wins(self, tmp_path):
        report = resolve_repo(
            tmp_path,
            {
                "g:root:1": ["g:d1:1", "g:d2:1"],
                "g:d1:1": ["g:d11:1"],
                "g:d11:1": ["g:x:1.0"],
                "g:d2:1": ["g:x:2.0"],
                "g:x:1.0": [],
                "g:x:2.0": [],
            },
            "g:root:1",
        )
        statuses = status_by_artifact(report.tree)
        assert statuses["g:x:2.0"].__class__.__name__ == "Included"
        assert statuses["g:x:1.0"] == OmittedConflict(winner=coord("g:x:2.0"))
        assert len(report.conflicts) == 1
        conflict = report.conflicts[0]
        assert str(conflict.winner.coordinate) == "g:x:2.0"
        assert [str(loser.coordinate) for loser in conflict.losers] == ["g:x:1.0"]

    def test_equal_depth_breaks_by_declaration_order(self, tmp_path):
        report = resolve_repo(
            tmp_path,
            {
                "g:root:1": ["g:d1:1", "g:d2:1"],
                "g:d1:1": ["g:x:1.0"],
                "g:d2:1": ["g:x:2.0"],
                "g:x:1.0": [],
                "g:x:2.0": [],
            },
            "g:root:1",
        )
        statuses = status_by_artifact(report.tree)
        assert statuses["g:x:1.0"].__class__.__name__ == "Included"
        assert statuses["g:x:2.0"] == OmittedConflict(winner=coord("g:x:1.0"))

    def test_identical_coordinate_is_a_duplicate_not_a_conflict(self, tmp_path):
        report = resolve_repo(
            tmp_path,
            {
                "g:root:1": ["g:d1:1", "g:d2:1"],
                "g:d1:1": ["g:x:1.0"],
                "g:d2:1": ["g:x:1.0"],
                "g:x:1.0": [],
            },
            "g:root:1",
        )
        statuses = status_by_artifact(report.tree)
        # the first occurrence sits under d1 at path (0, 0)
        duplicates = [
            node for node in bfs_order(report.tree)
            if isinstance(node.status, OmittedDuplicate)
        ]
        assert len(duplicates) == 1
        assert duplicates[0].path == (1, 0)
        assert duplicates[0].status.first_occurrence_path == (0, 0)
        assert statuses["g:x:1.0"].__class__.__name__ in ("Included", "OmittedDuplicate")
        assert report.conflicts == ()

    def test_losing_subtree_never_expands(self, tmp_path):
        # the loser g:e:1.0 would pull in g:hidden:1, which must not appear
        report = resolve_repo(
            tmp_path,
            {
                "g:root:1": ["g:e:2.0", "g:c:1"],
                "g:c:1": ["g:e:1.0"],
                "g:e:1.0": ["g:hidden:1"],
                "g:e:2.0": [],
                "g:hidden:1": [],
            },
            "g:root:1",
        )
        coordinates = {str(node.coordinate) for node in bfs_order(report.tree)}
        assert "g:hidden:1" not in coordinates
        for node in bfs_order(report.tree):
            if not node.included:
                assert node.children == ()

    def test_losing_version_of_a_loser_still_points_at_the_winner(self, tmp_path):
        report = resolve_repo(
            tmp_path,
            {
                "g:root:1": ["g:a:1", "g:b:1", "g:c:1"],
                "g:a:1": ["g:x:1.0"],
                "g:b:1": ["g:x:2.0"],
                "g:c:1": ["g:x:2.0"],
                "g:x:1.0": [],
                "g:x:2.0": [],
            },
            "g:root:1",
        )
        losers = report.conflicts[0].losers
        assert [str(loser.coordinate) for loser in losers] == ["g:x:2.0", "g:x:2.0"]
        for node in bfs_order(report.tree):
            if str(node.coordinate) == "g:x:2.0":
                assert node.status == OmittedConflict(winner=coord("g:x:1.0"))


class TestCycles:
    def test_two_artifact_cycle_terminates(self, tmp_path):
        report = resolve_repo(
            tmp_path,
            {"g:root:1": ["g:a:1"], "g:a:1": ["g:b:1"], "g:b:1": ["g:a:1"]},
            "g:root:1",
        )
        nodes = bfs_order(report.tree)
        assert [str(node.coordinate) for node in nodes] == [
            "g:root:1", "g:a:1", "g:b:1", "g:a:1",
        ]
        assert isinstance(nodes[-1].status, OmittedDuplicate)
        assert nodes[-1].status.first_occurrence_path == (0,)

    def test_self_cycle(self, tmp_path):
        report = resolve_repo(tmp_path, {"g:root:1": ["g:a:1"], "g:a:1": ["g:a:1"]}, "g:root:1")
        nodes = bfs_order(report.tree)
        assert len(nodes) == 3
        assert isinstance(nodes[-1].status, OmittedDuplicate)

    def test_version_cycle_is_a_conflict(self, tmp_path):
        report = resolve_repo(
            tmp_path,
            {"g:root:1": ["g:a:1.0"], "g:a:1.0": ["g:a:2.0"], "g:a:2.0": []},
            "g:root:1",
        )
        statuses = status_by_artifact(report.tree)
        assert statuses["g:a:2.0"] == OmittedConflict(winner=coord("g:a:1.0"))

    def test_dependency_on_root_group_artifact_loses_to_root(self, tmp_path):
        report = resolve_repo(
            tmp_path,
            {"g:root:1": ["g:a:1"], "g:a:1": ["g:root:2"], "g:root:2": []},
            "g:root:1",
        )
        statuses = status_by_artifact(report.tree)
        assert statuses["g:root:2"] == OmittedConflict(winner=coord("g:root:1"))


class TestErrors:
    def test_unresolvable_dependency_carries_requester(self, tmp_path):
        make_repo(tmp_path, {"g:root:1": ["g:a:1"], "g:a:1": ["g:ghost:1"]})
        repo = load_repository(tmp_path)
        with pytest.raises(UnresolvableDependency) as excinfo:
            resolve(repo, fetch_pom(repo, coord("g:root:1")))
        assert excinfo.value.coordinate == coord("g:ghost:1")
        assert excinfo.value.requester_path == (0,)

    def test_depth_limit(self, tmp_path):
        chain = {f"g:a{i}:1": [f"g:a{i + 1}:1"] for i in range(70)}
        chain["g:a70:1"] = []
        repo = load_repository(make_repo(tmp_path, chain))
        with pytest.raises(DepthLimitExceeded):
            resolve(repo, fetch_pom(repo, coord("g:a0:1")))

    def test_depth_limit_is_configurable(self, tmp_path):
        poms = {"g:root:1": ["g:a:1"], "g:a:1": ["g:b:1"], "g:b:1": []}
        with pytest.raises(DepthLimitExceeded):
            resolve_repo(tmp_path, poms, "g:root:1", max_depth=1)

    def test_zero_depth_keeps_only_the_root(self, tmp_path):
        report = resolve_repo(tmp_path, {"g:root:1": []}, "g:root:1", max_depth=0)
        assert len(bfs_order(report.tree)) == 1


class TestResolutionProperties:
    def test_deterministic(self, tmp_path):
        poms, root_text = random_conflict_repo(Random(3))
        repo = load_repository(make_repo(tmp_path, poms))
        document = fetch_pom(repo, coord(root_text))
        assert resolve(repo, document) == resolve(repo, document)

    @pytest.mark.parametrize("seed", range(150))
    def test_matches_full_expansion_oracle(self, seed, tmp_path):
        poms, root_text = random_conflict_repo(Random(seed))
        repo = load_repository(make_repo(tmp_path, poms))
        report = resolve(repo, fetch_pom(repo, coord(root_text)))

        expected = full_expansion_winners(poms, root_text)
        included = {
            str(node.coordinate.ga): (node.coordinate.version, node.path)
            for node in bfs_order(report.tree)
            if node.included
        }
        assert included == expected

        # shape: included nodes mirror their POM declarations, losers are leaves
        for node in bfs_order(report.tree):
            if node.included:
                declared = poms[str(node.coordinate)]
                assert [str(child.coordinate) for child in node.children] == declared
            else:
                assert node.children == ()

        # every multiply-occurring group:artifact is either in the conflict
        # table or only repeats as literal duplicates
        occurrences: dict[str, list] = {}
        for node in bfs_order(report.tree):
            occurrences.setdefault(str(node.coordinate.ga), []).append(node)
        conflicted = {str(conflict.group_artifact) for conflict in report.conflicts}
        for ga, nodes in occurrences.items():
            if len(nodes) >= 2 and ga not in conflicted:
                assert all(
                    isinstance(node.status, OmittedDuplicate)
                    for node in nodes
                    if not node.included
                )
