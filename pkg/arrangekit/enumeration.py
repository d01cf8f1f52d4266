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
Enumerate and count the arrangements of a composition under a binding rule.

An arrangement of distinguishable particles is a set partition, of identical particles an integer partition, and of a
general mixture a multiset partition; clusters of two or more particles must pass the binding predicate.
"""

import bisect
import itertools
import logging
import math
import time
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from joblib import Parallel, delayed, parallel_config

from arrangekit._common import CapExceededError, ProgressCallback, ProgressCallbackWrapper, check_cap, get_limits
from arrangekit.combinatorics import bell, partition_count
from arrangekit.core import Arrangement, Cluster, Composition, Species
from arrangekit.domain import BindingConfig, BindingMode, ConfigDocument, LimitsConfig
from arrangekit.notation import parse_cluster

_LOG = logging.getLogger(__name__)

# largest number of sub-compositions for which counting runs as a knapsack over cluster vectors
_KNAPSACK_MAX_STATES = 4096


@dataclass(frozen=True)
class BindingPredicate:
    """
    Decides whether a cluster composition can bind. Free particles (singletons) are always permitted; no closure
    under subsets is assumed, so e.g. `(X,e)` may bind while `(X,e_2)` does not.
    """

    mode: BindingMode = BindingMode.all
    allowlist: frozenset[Composition] = frozenset()

    def __post_init__(self):
        if self.mode != BindingMode.allowlist and self.allowlist:
            raise ValueError(f"an allowlist is only used in {BindingMode.allowlist.value} mode")
        for members in self.allowlist:
            if members.size < 2:
                raise ValueError(f"allowlist entry ({members.body()}) must contain at least 2 particles")

    @classmethod
    def bind_all(cls) -> "BindingPredicate":
        return cls(BindingMode.all)

    @classmethod
    def bind_none(cls) -> "BindingPredicate":
        return cls(BindingMode.none)

    @classmethod
    def from_allowlist(cls, entries: Iterable[Composition | Cluster | str]) -> "BindingPredicate":
        allowlist = set()
        for entry in entries:
            if isinstance(entry, str):
                entry = parse_cluster(entry)
            allowlist.add(entry.members if isinstance(entry, Cluster) else entry)
        return cls(BindingMode.allowlist, frozenset(allowlist))

    @classmethod
    def from_config(cls, config: BindingConfig) -> "BindingPredicate":
        if config.mode == BindingMode.allowlist:
            return cls.from_allowlist(config.allowlist)
        return cls(config.mode)

    def can_bind(self, members: Composition) -> bool:
        if members.size == 1:
            return True
        if self.mode == BindingMode.all:
            return True
        if self.mode == BindingMode.none:
            return False
        return members in self.allowlist


def ionization_allowlist(nucleus: str, electron: str, max_electrons: int) -> BindingPredicate:
    """
    Binding rule of an atom: the nucleus binds with 1..max_electrons electrons; electrons never bind to each other.
    """
    return BindingPredicate.from_allowlist(
        Composition.from_counts({nucleus: 1, electron: k}) for k in range(1, max_electrons + 1)
    )


@dataclass(frozen=True)
class SystemSpec:
    """
    Species declarations, the composition of the system and its binding rule.
    """

    species: tuple[Species, ...]
    composition: Composition
    binding: BindingPredicate = field(default_factory=BindingPredicate.bind_all)

    def __post_init__(self):
        names = [s.name for s in self.species]
        if len(set(names)) != len(names):
            raise ValueError("species names must be unique")
        declared = {s.name: s for s in self.species}
        for name, count in self.composition.items():
            if name not in declared:
                raise ValueError(f"composition references undeclared species `{name}`")
            if not declared[name].identical and count != 1:
                raise ValueError(f"distinguishable species `{name}` must have multiplicity 1")
        for members in self.binding.allowlist:
            undeclared = set(members.species) - set(declared)
            if undeclared:
                raise ValueError(f"allowlist entry ({members.body()}) uses undeclared species {sorted(undeclared)}")

    @property
    def species_names(self) -> frozenset[str]:
        return frozenset(s.name for s in self.species)

    @property
    def size(self) -> int:
        return self.composition.size

    @property
    def is_single_species(self) -> bool:
        return len(self.composition.counts) == 1

    @property
    def is_all_distinguishable(self) -> bool:
        return all(count == 1 for _, count in self.composition.counts)

    @classmethod
    def from_counts(
        cls, counts: dict[str, int], binding: BindingPredicate | None = None, distinguishable: Iterable[str] = ()
    ) -> "SystemSpec":
        distinguishable = set(distinguishable)
        species = tuple(Species(name, identical=name not in distinguishable) for name in sorted(counts))
        return cls(species, Composition.from_counts(counts), binding or BindingPredicate.bind_all())

    @classmethod
    def identical(cls, name: str, n: int, binding: BindingPredicate | None = None) -> "SystemSpec":
        return cls.from_counts({name: n}, binding=binding)

    @classmethod
    def distinguishable(cls, names: Iterable[str], binding: BindingPredicate | None = None) -> "SystemSpec":
        names = list(names)
        return cls.from_counts({name: 1 for name in names}, binding=binding, distinguishable=names)

    @classmethod
    def from_config(cls, doc: ConfigDocument) -> "SystemSpec":
        if doc.composition is None:
            raise ValueError("the configuration document has no composition section")
        species = tuple(Species(s.name, s.identical) for s in doc.resolved_species())
        return cls(species, Composition.from_counts(doc.composition), BindingPredicate.from_config(doc.binding))


@dataclass(frozen=True)
class ArrangementSet:
    """
    All arrangements of a system, each once, in canonical order.
    """

    arrangements: tuple[Arrangement, ...]
    composition: Composition

    @property
    def count(self) -> int:
        return len(self.arrangements)

    @property
    def has_all_bound(self) -> bool:
        return any(a.is_single_cluster for a in self.arrangements)

    @property
    def has_all_free(self) -> bool:
        return any(a.is_all_free for a in self.arrangements)

    @property
    def all_bound(self) -> Arrangement | None:
        return next((a for a in self.arrangements if a.is_all_bound), None)

    @property
    def all_free(self) -> Arrangement | None:
        return next((a for a in self.arrangements if a.is_all_free), None)

    def __len__(self) -> int:
        return len(self.arrangements)

    def __iter__(self) -> Iterator[Arrangement]:
        return iter(self.arrangements)

    def __contains__(self, arrangement: Arrangement) -> bool:
        return arrangement in self.arrangements


class _ClusterSpace:
    """
    Clusters as count vectors over the sorted species of a composition, with memoised bindability and candidate
    lists.
    """

    def __init__(self, composition: Composition, binding: BindingPredicate):
        self.species = composition.species
        self.total = tuple(count for _, count in composition.counts)
        self.binding = binding
        self._clusters: dict[tuple[int, ...], Cluster] = {}
        self._bindable: dict[tuple[int, ...], bool] = {}
        self._candidates: dict[tuple[int, ...], tuple[list[tuple[int, str]], list[tuple[int, ...]]]] = {}

    def cluster(self, vec: tuple[int, ...]) -> Cluster:
        cluster = self._clusters.get(vec)
        if cluster is None:
            cluster = Cluster(Composition(tuple((name, c) for name, c in zip(self.species, vec) if c)))
            self._clusters[vec] = cluster
        return cluster

    def can_bind(self, vec: tuple[int, ...]) -> bool:
        bindable = self._bindable.get(vec)
        if bindable is None:
            bindable = self.binding.can_bind(self.cluster(vec).members)
            self._bindable[vec] = bindable
        return bindable

    def bound_candidates(self, remaining: tuple[int, ...]) -> tuple[list[tuple[int, str]], list[tuple[int, ...]]]:
        """
        All bindable sub-vectors of `remaining` with at least 2 particles, sorted by canonical cluster key.
        """
        cached = self._candidates.get(remaining)
        if cached is None:
            vectors = [
                vec
                for vec in itertools.product(*(range(r + 1) for r in remaining))
                if sum(vec) >= 2 and self.can_bind(vec)
            ]
            vectors.sort(key=lambda vec: self.cluster(vec).key)
            cached = [self.cluster(vec).key for vec in vectors], vectors
            self._candidates[remaining] = cached
        return cached

    def singletons(self, remaining: tuple[int, ...]) -> list[tuple[int, ...]]:
        unit = [tuple(int(i == j) for j in range(len(remaining))) for i in range(len(remaining))]
        return [unit[i] for i, r in enumerate(remaining) for _ in range(r)]

    def arrangement(self, vectors: list[tuple[int, ...]], composition: Composition) -> Arrangement:
        return Arrangement.from_clusters((self.cluster(vec) for vec in vectors), composition)


def _subtract(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def _extend(
    space: _ClusterSpace, remaining: tuple[int, ...], lower_key: tuple[int, str] | None, prefix: list[tuple[int, ...]]
) -> Iterator[list[tuple[int, ...]]]:
    # bound clusters in non-decreasing canonical key order, then the forced all-singleton tail; DFS order is the
    # canonical order of the resulting arrangements
    keys, vectors = space.bound_candidates(remaining)
    start = 0 if lower_key is None else bisect.bisect_left(keys, lower_key)
    for key, vec in zip(keys[start:], vectors[start:]):
        yield from _extend(space, _subtract(remaining, vec), key, prefix + [vec])
    yield prefix + space.singletons(remaining)


def _enumerate_branch(
    composition: Composition, binding: BindingPredicate, first: tuple[int, ...] | None
) -> list[Arrangement]:
    space = _ClusterSpace(composition, binding)
    if first is None:
        vectors_list: Iterable[list[tuple[int, ...]]] = [space.singletons(space.total)]
    else:
        key = space.cluster(first).key
        vectors_list = _extend(space, _subtract(space.total, first), key, [first])
    return [space.arrangement(vectors, composition) for vectors in vectors_list]


def _count_by_knapsack(composition: Composition, binding: BindingPredicate) -> int:
    # number of multisets of bound clusters that fit into the composition; the rest are free particles
    total = tuple(count for _, count in composition.counts)
    space = _ClusterSpace(composition, binding)
    states = list(itertools.product(*(range(r + 1) for r in total)))
    radix = [math.prod(r + 1 for r in total[i + 1 :]) for i in range(len(total))]
    ways = [0] * len(states)
    ways[0] = 1
    _, items = space.bound_candidates(total)
    for item in items:
        offset = sum(c * w for c, w in zip(item, radix))
        for index, state in enumerate(states):
            if all(s >= c for s, c in zip(state, item)):
                ways[index] += ways[index - offset]
    return sum(ways)


def _n_states(composition: Composition) -> int:
    return math.prod(count + 1 for _, count in composition.counts)


def _fast_count(spec: SystemSpec) -> int | None:
    n = spec.size
    if spec.binding.mode == BindingMode.none:
        return 1
    if spec.binding.mode == BindingMode.all and spec.is_single_species:
        return partition_count(n)
    if spec.binding.mode == BindingMode.all and spec.is_all_distinguishable:
        return bell(n)
    if _n_states(spec.composition) <= _KNAPSACK_MAX_STATES:
        return _count_by_knapsack(spec.composition, spec.binding)
    return None


def estimate_arrangement_count(spec: SystemSpec) -> int:
    """
    Upper bound on the number of arrangements: the exact count where a fast path exists, B(N) otherwise.
    """
    count = _fast_count(spec)
    return count if count is not None else bell(spec.size)


def enumerate_arrangements(
    spec: SystemSpec,
    *,
    cap: int | None = None,
    n_jobs: int = 1,
    limits: LimitsConfig | None = None,
    update_progress: ProgressCallback | None = None,
) -> ArrangementSet:
    """
    Enumerates every arrangement of the system, each exactly once and in canonical order.

    The work is split over the choices of the first (canonically largest) bound cluster; these branches run in
    parallel with joblib when `n_jobs` != 1 and are concatenated in order, so the result does not depend on `n_jobs`.

    Args:
        spec: The system: species, composition and binding rule.
        cap: Largest admissible number of arrangements. Defaults to `LimitsConfig.max_arrangements` (10^7).
        n_jobs: Number of joblib workers.
        limits: Limits to take the default cap from.
        update_progress: Optional callback, advanced once per finished branch.

    Raises:
        CapExceededError: if the estimated number of arrangements exceeds the cap; raised before enumerating.
    """
    _LOG.info("ENUMERATE started")
    t0 = time.time()
    cap = cap if cap is not None else get_limits(limits).max_arrangements
    estimate = estimate_arrangement_count(spec)
    check_cap("estimated number of arrangements", estimate, cap)

    space = _ClusterSpace(spec.composition, spec.binding)
    _, firsts = space.bound_candidates(space.total)
    branches: list[tuple[int, ...] | None] = list(firsts) + [None]
    arrangements: list[Arrangement] = []
    with ProgressCallbackWrapper(update_progress) as progress:
        progress.update(completed=0, total=len(branches))
        with parallel_config("loky", n_jobs=n_jobs):
            results = Parallel(return_as="generator")(
                delayed(_enumerate_branch)(spec.composition, spec.binding, first) for first in branches
            )
            for result in results:
                arrangements.extend(result)
                progress.update(advance=1)
    _LOG.info(f"enumerated {len(arrangements)} arrangements of N={spec.size} ({spec.binding.mode.value})")
    _LOG.info(f"ENUMERATE finished in {time.time() - t0:.2f}s")
    return ArrangementSet(tuple(arrangements), spec.composition)


def count_arrangements(
    spec: SystemSpec, *, cap: int | None = None, n_jobs: int = 1, limits: LimitsConfig | None = None
) -> int:
    """
    Number of arrangements M of the system.

    Fast paths: no binding gives 1, one species binding in all configurations gives p(N), distinguishable particles
    binding in all configurations give B(N), and small compositions are counted by a knapsack over cluster vectors.
    Otherwise the arrangements are enumerated.

    Raises:
        CapExceededError: only when no fast path applies and enumeration would exceed the cap.
    """
    count = _fast_count(spec)
    if count is not None:
        return count
    return enumerate_arrangements(spec, cap=cap, n_jobs=n_jobs, limits=limits).count


@dataclass(frozen=True)
class ConstraintReport:
    """
    The bounds 1 <= M <= B(N) always, and p(N) <= M <= B(N) when all configurations bind.
    """

    n: int
    m: int
    lower: int
    upper: int
    partitions: int
    within_general_bounds: bool
    # None unless the binding mode is ALL
    within_binding_bounds: bool | None

    @property
    def passed(self) -> bool:
        return self.within_general_bounds and self.within_binding_bounds is not False


def check_constraints(
    spec: SystemSpec, *, cap: int | None = None, n_jobs: int = 1, limits: LimitsConfig | None = None
) -> ConstraintReport:
    """
    Checks the arrangement count of the system against the Bell and partition bounds.

    Raises:
        CapExceededError: propagated from counting.
    """
    n = spec.size
    m = count_arrangements(spec, cap=cap, n_jobs=n_jobs, limits=limits)
    upper = bell(n, limits=limits)
    partitions = partition_count(n, limits=limits)
    binds_all = spec.binding.mode == BindingMode.all
    report = ConstraintReport(
        n=n,
        m=m,
        lower=partitions if binds_all else 1,
        upper=upper,
        partitions=partitions,
        within_general_bounds=1 <= m <= upper,
        within_binding_bounds=(partitions <= m <= upper) if binds_all else None,
    )
    if not report.passed:
        _LOG.warning(f"arrangement count {m} violates the bounds [{report.lower}, {upper}]")
    return report


__all__ = [
    "ArrangementSet",
    "BindingPredicate",
    "CapExceededError",
    "ConstraintReport",
    "SystemSpec",
    "check_constraints",
    "count_arrangements",
    "enumerate_arrangements",
    "estimate_arrangement_count",
    "ionization_allowlist",
]
