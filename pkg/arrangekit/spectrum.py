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
Arrangement-resolved structure of an N-body energy spectrum.

Energies are measured from the all-free threshold: all particles free and at rest is E = 0, and every bound-state
energy in a catalog is negative. Each continuum arrangement opens at its lowest threshold, the sum of the ground
energies of its bound groups; arrangements are numbered g = 1, 2, ... in ascending order of that threshold, and the
all-bound arrangement, if it exists, is g = 0.
"""

import itertools
import logging
import math
import time
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from arrangekit._common import MissingClusterEnergyError, check_cap, get_limits, round_energy
from arrangekit.core import Arrangement, Cluster, Composition
from arrangekit.domain import ConfigDocument, LimitsConfig
from arrangekit.enumeration import ArrangementSet
from arrangekit.notation import format_arrangement, format_cluster, parse_cluster

_LOG = logging.getLogger(__name__)


def _as_composition(key: str | Cluster | Composition) -> Composition:
    if isinstance(key, str):
        key = parse_cluster(key)
    return key.members if isinstance(key, Cluster) else key


@dataclass(frozen=True)
class EnergyCatalog:
    """
    Bound-state energies per cluster composition, ground state first.
    """

    levels: dict[Composition, tuple[float, ...]] = field(default_factory=dict)
    annotations: dict[Composition, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        levels = {}
        for members, energies in self.levels.items():
            energies = tuple(sorted(float(e) for e in energies))
            if members.size < 2:
                raise ValueError(f"catalog cluster ({members.body()}) must contain at least 2 particles")
            if not energies:
                raise ValueError(f"catalog cluster ({members.body()}) needs at least one energy")
            if any(not math.isfinite(e) or e >= 0 for e in energies):
                raise ValueError(f"energies of ({members.body()}) must be finite and negative, got {list(energies)}")
            levels[members] = energies
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "annotations", {k: tuple(v) for k, v in self.annotations.items()})

    @classmethod
    def from_mapping(
        cls,
        mapping: Mapping[str | Cluster | Composition, Iterable[float]],
        annotations: Mapping[str | Cluster | Composition, Iterable[str]] | None = None,
    ) -> "EnergyCatalog":
        """
        Build from cluster notations, e.g. `{"(A_2)": [-1.0, -0.1], "(A_3)": [-2.5]}`.
        """
        return cls(
            levels={_as_composition(k): tuple(v) for k, v in mapping.items()},
            annotations={_as_composition(k): tuple(v) for k, v in (annotations or {}).items()},
        )

    @classmethod
    def from_config(cls, doc: ConfigDocument) -> "EnergyCatalog":
        return cls.from_mapping(doc.catalog, doc.annotations)

    def __contains__(self, cluster: Cluster) -> bool:
        return cluster.members in self.levels

    def levels_of(self, cluster: Cluster) -> tuple[float, ...]:
        try:
            return self.levels[cluster.members]
        except KeyError:
            raise MissingClusterEnergyError(format_cluster(cluster)) from None

    def ground(self, cluster: Cluster) -> float:
        return self.levels_of(cluster)[0]


def _check_continuum(arrangement: Arrangement) -> None:
    if arrangement.is_all_bound:
        raise ValueError(f"{arrangement} is all-bound; it has bound states, not continuum thresholds")


def lowest_threshold(arrangement: Arrangement, catalog: EnergyCatalog) -> float:
    """
    Lowest threshold of a continuum arrangement: every bound group in its ground state, free particles at rest.

    Raises:
        MissingClusterEnergyError: if a bound group has no catalog entry.
        ValueError: for the all-bound arrangement.
    """
    _check_continuum(arrangement)
    return math.fsum(catalog.ground(cluster) for cluster in arrangement.bound_clusters)


def threshold_ladder(
    arrangement: Arrangement,
    catalog: EnergyCatalog,
    *,
    cap: int | None = None,
    limits: LimitsConfig | None = None,
) -> list[tuple[float, int]]:
    """
    All thresholds of an arrangement: every combination of one level per bound group, summed, with equal sums merged
    into a multiplicity. Sorted ascending; the first entry is the lowest threshold, the last has every bound group in
    its highest listed state. The all-bound arrangement has an empty ladder.

    Raises:
        MissingClusterEnergyError: if a bound group has no catalog entry.
        CapExceededError: if the number of combinations exceeds the cap (default 10^6).
    """
    if arrangement.is_all_bound:
        return []
    level_lists = [catalog.levels_of(cluster) for cluster in arrangement.bound_clusters]
    cap = cap if cap is not None else get_limits(limits).max_ladder_size
    check_cap("threshold ladder size", math.prod(len(levels) for levels in level_lists), cap)
    sums = Counter(math.fsum(combo) for combo in itertools.product(*level_lists))
    return sorted(sums.items())


@dataclass(frozen=True)
class SpectrumEntry:
    arrangement: Arrangement
    g: int
    # None for the all-bound arrangement
    lowest_threshold: float | None
    ladder: tuple[tuple[float, int], ...] = ()
    # bound-state levels of the all-bound arrangement, when the catalog has them
    bound_levels: tuple[float, ...] = ()

    @property
    def notation(self) -> str:
        return format_arrangement(self.arrangement)

    @property
    def is_all_bound(self) -> bool:
        return self.arrangement.is_all_bound

    @property
    def is_all_free(self) -> bool:
        return self.arrangement.is_all_free


@dataclass(frozen=True)
class SpectrumLayout:
    """
    The g-numbered arrangements of a system, sorted by g.
    """

    entries: tuple[SpectrumEntry, ...]
    # notations of continuum arrangements sharing a lowest threshold, in g order
    degenerate_thresholds: tuple[tuple[str, ...], ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def continuum(self) -> tuple[SpectrumEntry, ...]:
        return tuple(entry for entry in self.entries if not entry.is_all_bound)

    @property
    def all_bound(self) -> SpectrumEntry | None:
        return next((entry for entry in self.entries if entry.is_all_bound), None)

    def entry_for(self, arrangement: Arrangement) -> SpectrumEntry:
        for entry in self.entries:
            if entry.arrangement == arrangement:
                return entry
        raise KeyError(f"{arrangement} is not part of this layout")

    def open_arrangements(self, energy: float) -> tuple[int, list[Arrangement]]:
        """
        Continuum arrangements open at `energy`, i.e. with lowest threshold T <= energy, in g order. A threshold
        exactly at `energy` counts as open.
        """
        if not math.isfinite(energy):
            raise ValueError(f"energy must be finite, got {energy!r}")
        opened = [entry.arrangement for entry in self.continuum if entry.lowest_threshold <= energy]
        return len(opened), opened

    def degeneracy(self, energy: float) -> int:
        """
        Arrangement degeneracy of continuum states at `energy`: g between thresholds T_g and T_{g+1}.
        """
        return self.open_arrangements(energy)[0]


def assign_g(
    arrangements: ArrangementSet,
    catalog: EnergyCatalog,
    *,
    cap: int | None = None,
    limits: LimitsConfig | None = None,
) -> SpectrumLayout:
    """
    Numbers the arrangements of a system by the energy ordering of their lowest thresholds.

    The all-bound arrangement, if it exists, gets g = 0 and needs no catalog entry. Continuum arrangements get
    g = 1, 2, ... by ascending lowest threshold; ties are broken by canonical notation and reported in
    `degenerate_thresholds`. The all-free arrangement, at threshold 0, gets the greatest g.

    Args:
        arrangements: All arrangements of the system.
        catalog: Bound-state energies covering every bound group of the continuum arrangements.
        cap: Largest admissible threshold ladder per arrangement.
        limits: Limits to take the default cap from.

    Raises:
        MissingClusterEnergyError: naming the first bound group without catalog entry.
    """
    _LOG.info("ASSIGN_G started")
    t0 = time.time()
    continuum = []
    all_bound_entry = None
    for arrangement in arrangements:
        if arrangement.is_all_bound:
            cluster = arrangement.clusters[0]
            levels = catalog.levels[cluster.members] if cluster in catalog else ()
            all_bound_entry = SpectrumEntry(arrangement, 0, None, bound_levels=levels)
        else:
            ladder = threshold_ladder(arrangement, catalog, cap=cap, limits=limits)
            threshold = lowest_threshold(arrangement, catalog)
            continuum.append((threshold, format_arrangement(arrangement), arrangement, ladder))
    continuum.sort(key=lambda item: (item[0], item[1]))

    entries = [all_bound_entry] if all_bound_entry is not None else []
    for g, (threshold, _, arrangement, ladder) in enumerate(continuum, start=1):
        entries.append(SpectrumEntry(arrangement, g, threshold, tuple(ladder)))

    degenerate = []
    for _, group in itertools.groupby(continuum, key=lambda item: item[0]):
        notations = tuple(item[1] for item in group)
        if len(notations) > 1:
            degenerate.append(notations)
            _LOG.info(f"degenerate lowest thresholds: {', '.join(notations)}")

    warnings = []
    if all_bound_entry is not None and all_bound_entry.bound_levels and continuum:
        ground, t1 = all_bound_entry.bound_levels[0], continuum[0][0]
        if ground >= t1:
            message = (
                f"all-bound ground energy {ground} of {all_bound_entry.notation} is not below the lowest threshold "
                f"{t1} of {continuum[0][1]}"
            )
            _LOG.warning(message)
            warnings.append(message)

    _LOG.info(f"ASSIGN_G finished in {time.time() - t0:.2f}s")
    return SpectrumLayout(tuple(entries), tuple(degenerate), tuple(warnings))


def export_spectrum(layout: SpectrumLayout, catalog: EnergyCatalog | None = None) -> dict[str, Any]:
    """
    A JSON-compatible document with everything needed to redraw the spectrum: one record per arrangement in g order,
    energies rounded to 12 significant digits.
    """
    records = [
        {
            "arrangement": entry.notation,
            "g": entry.g,
            "lowest_threshold": None if entry.lowest_threshold is None else round_energy(entry.lowest_threshold),
            "ladder": [[round_energy(energy), multiplicity] for energy, multiplicity in entry.ladder],
            "bound_levels": [round_energy(energy) for energy in entry.bound_levels],
        }
        for entry in layout.entries
    ]
    annotations = {}
    if catalog is not None:
        annotations = {
            format_cluster(Cluster(members)): list(notes)
            for members, notes in sorted(catalog.annotations.items(), key=lambda item: Cluster(item[0]).key)
        }
    return {
        "arrangements": records,
        "degenerate_thresholds": [list(notations) for notations in layout.degenerate_thresholds],
        "annotations": annotations,
        "warnings": list(layout.warnings),
    }


__all__ = [
    "EnergyCatalog",
    "SpectrumEntry",
    "SpectrumLayout",
    "assign_g",
    "export_spectrum",
    "lowest_threshold",
    "threshold_ladder",
]
