# Copyright 2026 arrangekit contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools
import random

import pytest

from arrangekit import CapExceededError
from arrangekit.combinatorics import bell, partition_count
from arrangekit.core import Arrangement, Cluster, Composition
from arrangekit.domain import BindingMode, ConfigDocument, LimitsConfig
from arrangekit.enumeration import (
    BindingPredicate,
    SystemSpec,
    check_constraints,
    count_arrangements,
    enumerate_arrangements,
    estimate_arrangement_count,
    ionization_allowlist,
)
from arrangekit.notation import format_arrangement, parse


def labeled_set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in labeled_set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1 :]
        yield [[first]] + partition


def quotient_arrangements(spec: SystemSpec) -> set[Arrangement]:
    # label every particle, enumerate set partitions, keep the bindable ones and forget the labels
    labels = [(name, k) for name, count in spec.composition.items() for k in range(count)]
    result = set()
    for partition in labeled_set_partitions(labels):
        clusters = [Cluster.of(*(name for name, _ in block)) for block in partition]
        if all(spec.binding.can_bind(cluster.members) for cluster in clusters):
            result.add(Arrangement.from_clusters(clusters, spec.composition))
    return result


def cluster_compositions(counts: dict[str, int]):
    names = sorted(counts)
    for vec in itertools.product(*(range(counts[name] + 1) for name in names)):
        if sum(vec) >= 2:
            yield Composition(tuple((name, c) for name, c in zip(names, vec) if c))


def notations(spec: SystemSpec, **kwargs) -> list[str]:
    return [format_arrangement(a) for a in enumerate_arrangements(spec, **kwargs)]


def integer_partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - part, part):
            yield (part,) + rest


class TestWorkedSets:
    def test_three_identical_bind_all(self):
        assert notations(SystemSpec.identical("A", 3)) == ["(A_3)", "(A_2)(A)", "(A)_3"]

    def test_three_distinguishable_bind_all(self):
        arrangements = enumerate_arrangements(SystemSpec.distinguishable(["A", "B", "C"]))
        assert arrangements.count == 5
        assert {format_arrangement(a) for a in arrangements} == {
            "(A,B,C)",
            "(A,B)(C)",
            "(A,C)(B)",
            "(B,C)(A)",
            "(A)(B)(C)",
        }
        assert arrangements.has_all_bound and arrangements.has_all_free

    @pytest.mark.parametrize("z", [1, 2, 3, 4, 5])
    def test_atom_has_z_plus_one_arrangements(self, z):
        spec = SystemSpec.from_counts({"X": 1, "e": z}, binding=ionization_allowlist("X", "e", z))
        arrangements = enumerate_arrangements(spec)
        expected = {parse(f"(X,e_{k})(e)_{z - k}") if k < z else parse(f"(X,e_{z})") for k in range(1, z + 1)}
        expected.add(parse(f"(X)(e)_{z}"))
        assert set(arrangements) == expected
        assert arrangements.count == z + 1
        assert count_arrangements(spec) == z + 1

    def test_atom_with_two_electrons_has_no_all_bound(self):
        spec = SystemSpec.from_counts({"X": 1, "e": 2}, binding=ionization_allowlist("X", "e", 1))
        arrangements = enumerate_arrangements(spec)
        assert [format_arrangement(a) for a in arrangements] == ["(X,e)(e)", "(X)(e)_2"]
        assert not arrangements.has_all_bound
        assert arrangements.all_bound is None

    def test_bind_none_has_single_arrangement(self):
        spec = SystemSpec.from_counts({"A": 2, "B": 3}, binding=BindingPredicate.bind_none())
        assert notations(spec) == ["(A)_2(B)_3"]

    def test_single_particle(self):
        arrangements = enumerate_arrangements(SystemSpec.identical("A", 1))
        assert [format_arrangement(a) for a in arrangements] == ["(A)"]
        assert arrangements.has_all_bound and arrangements.has_all_free

    def test_mixture_of_two_species(self):
        # multiset partitions of {A, A, B}
        assert notations(SystemSpec.from_counts({"A": 2, "B": 1})) == [
            "(A_2,B)",
            "(A,B)(A)",
            "(A_2)(B)",
            "(A)_2(B)",
        ]

    def test_non_monotone_allowlist(self):
        # (X,e_2) binds although (X,e) does not
        spec = SystemSpec.from_counts({"X": 1, "e": 2}, binding=BindingPredicate.from_allowlist(["(X,e_2)"]))
        assert notations(spec) == ["(X,e_2)", "(X)(e)_2"]


class TestAllowlistGrowth:
    counts = {"X": 1, "e": 3}
    entries = ["(X,e)", "(e_2)", "(X,e_2)", "(e_3)", "(X,e_3)"]

    def arrangements(self, entries: list[str]) -> set[Arrangement]:
        spec = SystemSpec.from_counts(self.counts, binding=BindingPredicate.from_allowlist(entries))
        return set(enumerate_arrangements(spec))

    def test_empty_allowlist_leaves_only_free_particles(self):
        assert self.arrangements([]) == {parse("(X)(e)_3")}

    def test_adding_entries_never_removes_arrangements(self):
        previous = self.arrangements([])
        for k in range(1, len(self.entries) + 1):
            current = self.arrangements(self.entries[:k])
            assert previous < current
            previous = current
        assert previous == set(enumerate_arrangements(SystemSpec.from_counts(self.counts)))

    def test_every_order_of_additions_is_monotone(self):
        rng = random.Random(3)
        for _ in range(10):
            entries = rng.sample(self.entries, len(self.entries))
            sizes = [len(self.arrangements(entries[:k])) for k in range(len(entries) + 1)]
            assert sizes == sorted(sizes)
            assert sizes[0] == 1


class TestCanonicalOrder:
    @pytest.mark.parametrize("counts", [{"A": 5}, {"A": 3, "B": 2}, {"A": 1, "B": 1, "C": 1, "D": 1}])
    def test_sorted_and_unique(self, counts):
        arrangements = list(enumerate_arrangements(SystemSpec.from_counts(counts)))
        keys = [a.sort_key for a in arrangements]
        assert keys == sorted(keys)
        assert len(set(arrangements)) == len(arrangements)

    def test_parallel_result_is_identical(self):
        spec = SystemSpec.from_counts({"A": 3, "B": 2, "C": 1})
        assert notations(spec, n_jobs=2) == notations(spec, n_jobs=1)


class TestCounting:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_identical_bind_all_is_partition_count(self, n):
        spec = SystemSpec.identical("A", n)
        assert count_arrangements(spec) == partition_count(n)
        if n <= 8:
            assert enumerate_arrangements(spec).count == partition_count(n)

    @pytest.mark.parametrize("n", [1, 5, 12, 20])
    def test_identical_cluster_sizes_are_integer_partitions(self, n):
        arrangements = enumerate_arrangements(SystemSpec.identical("A", n))
        sizes = [
            tuple(sorted((cluster.size for cluster, m in a.groups for _ in range(m)), reverse=True))
            for a in arrangements
        ]
        assert len(sizes) == partition_count(n)
        assert sorted(sizes) == sorted(integer_partitions(n))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_distinguishable_bind_all_is_bell(self, n):
        spec = SystemSpec.distinguishable([f"P{i}" for i in range(n)])
        assert count_arrangements(spec) == bell(n)
        assert enumerate_arrangements(spec).count == bell(n)

    def test_fast_paths_avoid_the_cap(self):
        spec = SystemSpec.distinguishable([f"P{i}" for i in range(30)])
        assert count_arrangements(spec, cap=10) == bell(30)
        with pytest.raises(CapExceededError):
            enumerate_arrangements(spec, cap=10)

    def test_cap_is_checked_before_enumerating(self):
        spec = SystemSpec.identical("A", 60)
        with pytest.raises(CapExceededError) as excinfo:
            enumerate_arrangements(spec, limits=LimitsConfig(max_arrangements=1000))
        assert excinfo.value.requested == partition_count(60)
        assert excinfo.value.cap == 1000

    def test_estimate_is_exact_for_small_allowlists(self):
        spec = SystemSpec.from_counts({"X": 1, "e": 20}, binding=ionization_allowlist("X", "e", 20))
        assert estimate_arrangement_count(spec) == 21
        assert enumerate_arrangements(spec, cap=21).count == 21

    def test_count_only_agrees_with_enumeration(self):
        rng = random.Random(3)
        for _ in range(30):
            counts = {name: rng.randint(1, 3) for name in rng.sample(["A", "B", "C"], rng.randint(1, 3))}
            spec = SystemSpec.from_counts(counts)
            assert count_arrangements(spec) == enumerate_arrangements(spec).count


class TestConstraints:
    def test_report_bind_all(self):
        report = check_constraints(SystemSpec.from_counts({"A": 2, "B": 2}))
        assert report.m == 9
        assert report.lower == partition_count(4)
        assert report.upper == bell(4)
        assert report.within_general_bounds and report.within_binding_bounds
        assert report.passed

    def test_report_allowlist(self):
        report = check_constraints(SystemSpec.from_counts({"X": 1, "e": 2}, binding=ionization_allowlist("X", "e", 1)))
        assert report.m == 2
        assert report.lower == 1
        assert report.within_binding_bounds is None
        assert report.passed

    def test_random_compositions(self):
        rng = random.Random(2026)
        for _ in range(200):
            n_species = rng.randint(1, 4)
            names = [f"S{i}" for i in range(n_species)]
            counts = {name: rng.randint(1, 3) for name in names}
            while sum(counts.values()) > 7:
                name = max(counts, key=counts.get)
                counts[name] -= 1
            distinguishable = [name for name in names if counts[name] == 1 and rng.random() < 0.5]
            mode = rng.choice(list(BindingMode))
            if mode == BindingMode.allowlist:
                candidates = list(cluster_compositions(counts))
                binding = BindingPredicate.from_allowlist(rng.sample(candidates, rng.randint(0, len(candidates))))
            else:
                binding = BindingPredicate(mode)
            spec = SystemSpec.from_counts(counts, binding=binding, distinguishable=distinguishable)
            n = spec.size
            arrangements = enumerate_arrangements(spec)
            m = arrangements.count
            assert 1 <= m <= bell(n)
            if mode == BindingMode.all:
                assert partition_count(n) <= m
            assert set(arrangements) == quotient_arrangements(spec)
            assert len(set(arrangements)) == m
            assert check_constraints(spec).passed


class TestSystemSpec:
    def test_from_config(self):
        doc = ConfigDocument.model_validate(
            {
                "species": [{"name": "X", "identical": False}, {"name": "e"}],
                "composition": {"X": 1, "e": 2},
                "binding": {"mode": "allowlist", "allowlist": ["(X,e)", "(X,e_2)"]},
            }
        )
        spec = SystemSpec.from_config(doc)
        assert spec.species_names == {"X", "e"}
        assert spec.binding.mode == BindingMode.allowlist
        assert count_arrangements(spec) == 3

    def test_distinguishable_needs_multiplicity_one(self):
        with pytest.raises(ValueError):
            SystemSpec.from_counts({"A": 2}, distinguishable=["A"])

    def test_allowlist_with_undeclared_species(self):
        with pytest.raises(ValueError):
            SystemSpec.from_counts({"A": 2}, binding=BindingPredicate.from_allowlist(["(A,B)"]))

    def test_allowlist_only_in_allowlist_mode(self):
        with pytest.raises(ValueError):
            BindingPredicate(BindingMode.all, frozenset({Composition.of("A", "A")}))

    def test_singletons_always_bind(self):
        assert BindingPredicate.bind_none().can_bind(Composition.of("A"))
        assert not BindingPredicate.bind_none().can_bind(Composition.of("A", "A"))
