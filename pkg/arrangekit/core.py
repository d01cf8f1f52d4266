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

"""
Value types for species, compositions, clusters and arrangements.

Identical particles exist only as species multiplicities; individual particle labels never appear. All types are
immutable and hashable, and an `Arrangement` is always held in canonical form, so equality and deduplication are
plain value comparisons.
"""

import re
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

from arrangekit._common import EmptyCompositionError

SPECIES_TOKEN_PATTERN = r"[A-Za-z][A-Za-z0-9]*(?:\^?[0-9]*[+-])?"
_SPECIES_TOKEN_RE = re.compile(SPECIES_TOKEN_PATTERN)


def is_species_token(name: str) -> bool:
    return _SPECIES_TOKEN_RE.fullmatch(name) is not None


@dataclass(frozen=True)
class Species:
    name: str
    identical: bool = True

    def __post_init__(self):
        if not is_species_token(self.name):
            raise ValueError(f"`{self.name}` is not a valid species token")


@dataclass(frozen=True)
class Composition:
    """
    Species multiplicities, stored sorted by species name.
    """

    counts: tuple[tuple[str, int], ...]

    def __post_init__(self):
        merged: Counter[str] = Counter()
        for name, count in self.counts:
            if not isinstance(count, int) or count < 1:
                raise ValueError(f"multiplicity of `{name}` must be a positive integer, got {count!r}")
            merged[name] += count
        if not merged:
            raise EmptyCompositionError("a composition needs at least one particle")
        object.__setattr__(self, "counts", tuple(sorted(merged.items())))

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "Composition":
        return cls(tuple(counts.items()))

    @classmethod
    def of(cls, *names: str) -> "Composition":
        """
        Build from a flat list of species names, e.g. `Composition.of("A", "A", "B")`.
        """
        return cls(tuple((name, 1) for name in names))

    @cached_property
    def size(self) -> int:
        return sum(count for _, count in self.counts)

    @property
    def species(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.counts)

    def __getitem__(self, name: str) -> int:
        return dict(self.counts).get(name, 0)

    def __contains__(self, name: str) -> bool:
        return name in self.species

    def items(self) -> tuple[tuple[str, int], ...]:
        return self.counts

    def as_dict(self) -> dict[str, int]:
        return dict(self.counts)

    def __add__(self, other: "Composition") -> "Composition":
        return Composition(self.counts + other.counts)

    def __sub__(self, other: "Composition") -> "Composition":
        if not other.issubset(self):
            raise ValueError(f"cannot remove ({other.body()}) from ({self.body()})")
        return Composition(tuple((name, count - other[name]) for name, count in self.counts if count > other[name]))

    def issubset(self, other: "Composition") -> bool:
        return all(count <= other[name] for name, count in self.counts)

    def rename(self, mapping: Mapping[str, str]) -> "Composition":
        return Composition(tuple((mapping.get(name, name), count) for name, count in self.counts))

    def body(self) -> str:
        """
        Canonical member string, e.g. `A_2,B`.
        """
        return ",".join(name if count == 1 else f"{name}_{count}" for name, count in self.counts)


def total_size(composition: Composition) -> int:
    """
    Total number of particles N of a composition.
    """
    return composition.size


@dataclass(frozen=True)
class Cluster:
    """
    A bound group of particles; a singleton cluster is a free particle.
    """

    members: Composition

    @classmethod
    def of(cls, *names: str) -> "Cluster":
        return cls(Composition.of(*names))

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "Cluster":
        return cls(Composition.from_counts(counts))

    @property
    def size(self) -> int:
        return self.members.size

    @property
    def is_singleton(self) -> bool:
        return self.size == 1

    @cached_property
    def key(self) -> tuple[int, str]:
        # largest group first, then lexicographic on the member string
        return -self.size, self.members.body()

    def rename(self, mapping: Mapping[str, str]) -> "Cluster":
        return Cluster(self.members.rename(mapping))

    def __str__(self) -> str:
        return f"({self.members.body()})"


@dataclass(frozen=True)
class Arrangement:
    """
    A grouping of a composition into clusters.

    `groups` holds `(cluster, multiplicity)` pairs; on construction they are merged and sorted into canonical order,
    so any two arrangements of the same clusters compare equal regardless of input order.
    """

    groups: tuple[tuple[Cluster, int], ...]
    composition: Composition

    def __post_init__(self):
        merged: Counter[Cluster] = Counter()
        for cluster, multiplicity in self.groups:
            if multiplicity < 1:
                raise ValueError(f"multiplicity of cluster {cluster} must be at least 1")
            merged[cluster] += multiplicity
        groups = tuple(sorted(merged.items(), key=lambda group: group[0].key))
        object.__setattr__(self, "groups", groups)
        # conservation of particles
        total: Counter[str] = Counter()
        for cluster, multiplicity in groups:
            for name, count in cluster.members.items():
                total[name] += count * multiplicity
        if dict(total) != self.composition.as_dict():
            raise ValueError(
                f"clusters {dict(total)} do not partition the composition {self.composition.as_dict()}"
            )

    @classmethod
    def from_clusters(cls, clusters: Iterable[Cluster], composition: Composition | None = None) -> "Arrangement":
        clusters = list(clusters)
        if composition is None:
            if not clusters:
                raise EmptyCompositionError("an arrangement needs at least one cluster")
            composition = Composition(tuple(item for cluster in clusters for item in cluster.members.items()))
        return cls(tuple((cluster, 1) for cluster in clusters), composition)

    @cached_property
    def clusters(self) -> tuple[Cluster, ...]:
        return tuple(cluster for cluster, multiplicity in self.groups for _ in range(multiplicity))

    @property
    def size(self) -> int:
        return self.composition.size

    @property
    def n_clusters(self) -> int:
        return sum(multiplicity for _, multiplicity in self.groups)

    @property
    def bound_clusters(self) -> tuple[Cluster, ...]:
        return tuple(cluster for cluster in self.clusters if not cluster.is_singleton)

    @property
    def n_bound_groups(self) -> int:
        return len(self.bound_clusters)

    @property
    def is_single_cluster(self) -> bool:
        return self.n_clusters == 1

    @property
    def is_all_bound(self) -> bool:
        # a lone free particle is not a bound group
        return self.is_single_cluster and self.size >= 2

    @property
    def is_all_free(self) -> bool:
        return all(cluster.is_singleton for cluster, _ in self.groups)

    @property
    def is_continuum(self) -> bool:
        return not self.is_all_bound

    @cached_property
    def sort_key(self) -> tuple[tuple[int, str], ...]:
        return tuple(cluster.key for cluster in self.clusters)

    def rename(self, mapping: Mapping[str, str]) -> "Arrangement":
        """
        Rename species, e.g. to re-identify particles that were labeled as distinct species.
        """
        return Arrangement(
            tuple((cluster.rename(mapping), multiplicity) for cluster, multiplicity in self.groups),
            self.composition.rename(mapping),
        )

    def __str__(self) -> str:
        from arrangekit.notation import format_arrangement

        return format_arrangement(self)


def canonicalize(arrangement: Arrangement) -> Arrangement:
    """
    Return the canonical representative: clusters sorted by size (descending) and member string, equal clusters
    contracted to a multiplicity. Idempotent.
    """
    return Arrangement.from_clusters(arrangement.clusters, arrangement.composition)
