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

import pytest

from arrangekit import EmptyCompositionError
from arrangekit.core import Arrangement, Cluster, Composition, Species, canonicalize, total_size


class TestComposition:
    def test_counts_are_merged_and_sorted(self):
        c = Composition((("B", 1), ("A", 2), ("B", 1)))
        assert c.counts == (("A", 2), ("B", 2))
        assert c.size == 4
        assert c.species == ("A", "B")

    def test_of_and_from_counts_agree(self):
        assert Composition.of("A", "B", "A") == Composition.from_counts({"A": 2, "B": 1})

    def test_total_size(self):
        assert total_size(Composition.from_counts({"A": 3})) == 3
        assert total_size(Composition.from_counts({"A": 1, "B": 1, "C": 1})) == 3
        assert total_size(Composition.from_counts({"Rb": 5})) == 5

    def test_empty_composition_is_rejected(self):
        with pytest.raises(EmptyCompositionError):
            Composition(())

    @pytest.mark.parametrize("count", [0, -1, 1.5])
    def test_non_positive_count_is_rejected(self, count):
        with pytest.raises(ValueError):
            Composition((("A", count),))

    def test_arithmetic(self):
        a2b = Composition.from_counts({"A": 2, "B": 1})
        a = Composition.of("A")
        assert a + a == Composition.of("A", "A")
        assert a.issubset(a2b)
        assert not a2b.issubset(a)
        assert a2b - a == Composition.of("A", "B")
        with pytest.raises(ValueError):
            a - a2b

    def test_getitem_and_contains(self):
        c = Composition.from_counts({"A": 2})
        assert c["A"] == 2
        assert c["B"] == 0
        assert "A" in c and "B" not in c

    def test_body(self):
        assert Composition.from_counts({"B": 1, "A": 2}).body() == "A_2,B"

    def test_rename_merges_species(self):
        assert Composition.of("A1", "A2").rename({"A1": "A", "A2": "A"}) == Composition.of("A", "A")


class TestCluster:
    def test_key_orders_larger_clusters_first(self):
        clusters = sorted([Cluster.of("A"), Cluster.of("A", "A", "A"), Cluster.of("A", "A")], key=lambda c: c.key)
        assert [str(c) for c in clusters] == ["(A_3)", "(A_2)", "(A)"]

    def test_singleton(self):
        assert Cluster.of("e-").is_singleton
        assert not Cluster.from_counts({"X": 1, "e-": 1}).is_singleton


class TestArrangement:
    def test_canonical_form_ignores_input_order(self):
        composition = Composition.of("A", "B", "C")
        a1 = Arrangement.from_clusters([Cluster.of("A"), Cluster.of("B", "C")], composition)
        a2 = Arrangement.from_clusters([Cluster.of("C", "B"), Cluster.of("A")], composition)
        assert a1 == a2
        assert hash(a1) == hash(a2)
        assert str(a1) == "(B,C)(A)"

    def test_equal_clusters_are_contracted(self):
        arrangement = Arrangement.from_clusters([Cluster.of("A")] * 3)
        assert arrangement.groups == ((Cluster.of("A"), 3),)
        assert arrangement.n_clusters == 3
        assert str(arrangement) == "(A)_3"

    def test_particle_conservation(self):
        with pytest.raises(ValueError):
            Arrangement.from_clusters([Cluster.of("A", "A")], Composition.of("A", "A", "A"))

    def test_flags(self):
        all_bound = Arrangement.from_clusters([Cluster.of("A", "A", "A")])
        mixed = Arrangement.from_clusters([Cluster.of("A", "A"), Cluster.of("A")])
        all_free = Arrangement.from_clusters([Cluster.of("A")] * 3)
        assert all_bound.is_all_bound and not all_bound.is_continuum
        assert mixed.is_continuum and not mixed.is_all_free
        assert mixed.n_bound_groups == 1
        assert all_free.is_all_free and all_free.n_bound_groups == 0

    def test_single_particle_is_free_not_bound(self):
        one = Arrangement.from_clusters([Cluster.of("A")])
        assert one.is_single_cluster
        assert not one.is_all_bound
        assert one.is_all_free

    def test_canonicalize_is_idempotent(self):
        arrangement = Arrangement.from_clusters([Cluster.of("A"), Cluster.of("A", "A"), Cluster.of("B")])
        assert canonicalize(arrangement) == arrangement
        assert canonicalize(canonicalize(arrangement)) == canonicalize(arrangement)

    def test_sort_key_follows_canonical_order(self):
        arrangement = Arrangement.from_clusters([Cluster.of("A"), Cluster.of("A", "A")])
        assert arrangement.sort_key == ((-2, "A_2"), (-1, "A"))

    def test_rename_requotients_labeled_particles(self):
        labeled = Arrangement.from_clusters([Cluster.of("A1", "A2"), Cluster.of("A3")])
        relabeled = labeled.rename({"A1": "A", "A2": "A", "A3": "A"})
        assert str(relabeled) == "(A_2)(A)"


@pytest.mark.parametrize("name", ["A", "Rb", "e-", "e^-", "A^+", "A^2+", "X1"])
def test_species_token_accepted(name):
    assert Species(name).name == name


@pytest.mark.parametrize("name", ["", "1A", "A_2", "A,B", "(A)", "A\n", " A", "A+ "])
def test_species_token_rejected(name):
    with pytest.raises(ValueError):
        Species(name)
