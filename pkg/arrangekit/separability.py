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
Mass geometry of an N_sb-particle subsystem and a numerical check of its separable limit.

For subsystem masses m_i at positions r_i with total mass M and center of mass c, the reduced mass is
mu = (prod m_i / M)^(1 / (N_sb - 1)) and the hyperradius R satisfies mu R^2 = sum m_i |r_i - c|^2. As R -> 0 the
cross interaction between the subsystem and the remaining particles approaches the interaction of those particles
with the center of mass alone.
"""

import logging
import math
import time
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from arrangekit._common import PotentialDomainError, ProgressCallback, ProgressCallbackWrapper
from arrangekit.domain import PotentialConfig, PotentialKind, RandomDrawConfig, SeparabilityConfig
from arrangekit.random_state import make_rng

_LOG = logging.getLogger(__name__)

DEFAULT_SCALES = tuple(2.0**-k for k in range(4, 13))
CONFINEMENT_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class MassedConfiguration:
    """
    Masses and positions of N particles and the indices of a subsystem.
    """

    masses: np.ndarray
    positions: np.ndarray
    subsystem: tuple[int, ...]
    species: tuple[str, ...] | None = None

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=float)
        positions = np.asarray(self.positions, dtype=float)
        n = len(masses)
        if masses.ndim != 1 or positions.shape != (n, 3):
            raise ValueError(f"expected {n} positions of shape (3,), got array of shape {positions.shape}")
        if not np.all(np.isfinite(masses) & (masses > 0)):
            raise ValueError("masses must be positive and finite")
        if not np.all(np.isfinite(positions)):
            raise ValueError("positions must be finite")
        subsystem = tuple(int(i) for i in self.subsystem)
        if len(set(subsystem)) != len(subsystem) or any(not 0 <= i < n for i in subsystem):
            raise ValueError(f"subsystem indices must be unique and lie in [0, {n})")
        if len(subsystem) < 2:
            raise ValueError("subsystem must contain at least 2 particles")
        if self.species is not None and len(self.species) != n:
            raise ValueError(f"expected {n} species labels, got {len(self.species)}")
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "subsystem", subsystem)
        if self.species is not None:
            object.__setattr__(self, "species", tuple(self.species))

    @property
    def n_particles(self) -> int:
        return len(self.masses)

    @property
    def spectators(self) -> tuple[int, ...]:
        members = set(self.subsystem)
        return tuple(i for i in range(self.n_particles) if i not in members)

    def species_of(self, index: int) -> str | None:
        return None if self.species is None else self.species[index]

    def translated(self, shift: Sequence[float]) -> "MassedConfiguration":
        positions = self.positions + np.asarray(shift, dtype=float)
        return MassedConfiguration(self.masses, positions, self.subsystem, self.species)

    def scaled(self, scale: float, center: np.ndarray | None = None) -> "MassedConfiguration":
        """
        Move the subsystem particles toward `center` (default: their center of mass), r_i -> c + s (r_i - c);
        spectators stay in place.
        """
        if not scale >= 0:
            raise ValueError(f"scale must be non-negative, got {scale!r}")
        c = subsystem_geometry(self).center if center is None else center
        positions = self.positions.copy()
        index = list(self.subsystem)
        positions[index] = c + scale * (positions[index] - c)
        return MassedConfiguration(self.masses, positions, self.subsystem, self.species)

    @classmethod
    def from_config(cls, config: SeparabilityConfig, rng: np.random.Generator | None = None) -> "MassedConfiguration":
        if config.random_draw is not None:
            return random_configuration_from_config(config.random_draw, rng=rng)
        return cls(np.array(config.masses), np.array(config.positions), tuple(config.subsystem), config.species)


@dataclass(frozen=True, eq=False)
class SubsystemGeometry:
    center: np.ndarray
    total_mass: float
    reduced_mass: float
    hyperradius: float
    # |r_i - c| for the subsystem particles, in subsystem order
    distances: np.ndarray
    masses: np.ndarray
    # |r_j - c| for the spectators
    spectator_distances: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def emergent_length(self) -> float | None:
        """
        Mean distance of the spectators from the subsystem center of mass. Diagnostic only.
        """
        if len(self.spectator_distances) == 0:
            return None
        return float(np.mean(self.spectator_distances))


def subsystem_geometry(config: MassedConfiguration) -> SubsystemGeometry:
    """
    Center of mass, total mass, N_sb-body reduced mass and hyperradius of the subsystem.
    """
    index = list(config.subsystem)
    m = config.masses[index]
    r = config.positions[index]
    total_mass = float(m.sum())
    center = (m[:, None] * r).sum(axis=0) / total_mass
    distances = np.linalg.norm(r - center, axis=1)
    # in log-space; the mass product over- or underflows for large subsystems
    reduced_mass = math.exp((float(np.log(m).sum()) - math.log(total_mass)) / (len(m) - 1))
    hyperradius = math.sqrt(float((m * distances**2).sum()) / reduced_mass)
    spectator_distances = np.linalg.norm(config.positions[list(config.spectators)] - center, axis=1)
    return SubsystemGeometry(
        center=center,
        total_mass=total_mass,
        reduced_mass=reduced_mass,
        hyperradius=hyperradius,
        distances=distances,
        masses=m,
        spectator_distances=spectator_distances,
    )


@dataclass(frozen=True, eq=False)
class ConfinementReport:
    holds: bool
    # sqrt(mu / m_i) R per subsystem particle
    bounds: np.ndarray
    # bound minus distance; non-negative up to rounding
    margins: np.ndarray


def confinement_check(geometry: SubsystemGeometry, rtol: float = CONFINEMENT_RTOL) -> ConfinementReport:
    """
    Checks that every subsystem particle lies within sqrt(mu / m_i) R of the center of mass. Coincident particles
    (R = 0) pass trivially.
    """
    bounds = np.sqrt(geometry.reduced_mass / geometry.masses) * geometry.hyperradius
    margins = bounds - geometry.distances
    holds = bool(np.all(geometry.distances <= bounds * (1 + rtol)))
    if not holds:
        _LOG.warning(f"confinement bound violated, margins: {margins.tolist()}")
    return ConfinementReport(holds=holds, bounds=bounds, margins=margins)


class PairPotential(ABC):
    """
    A central pair potential v(r) on r > 0. `smoothness` is the declared number of continuous derivatives.
    """

    smoothness: float = math.inf

    @abstractmethod
    def _evaluate(self, r: np.ndarray) -> np.ndarray: ...

    def __call__(self, r: float | np.ndarray) -> float | np.ndarray:
        values = np.asarray(r, dtype=float)
        if np.any(values <= 0):
            raise PotentialDomainError(f"{type(self).__name__} evaluated at r = 0 (coincident particles)")
        result = self._evaluate(values)
        return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class InversePowerPotential(PairPotential):
    """
    v(r) = -C / r^k.
    """

    strength: float
    power: float

    def _evaluate(self, r: np.ndarray) -> np.ndarray:
        return -self.strength / r**self.power


@dataclass(frozen=True)
class LennardJonesPotential(PairPotential):
    """
    v(r) = 4 eps [(sigma / r)^12 - (sigma / r)^6].
    """

    epsilon: float
    sigma: float

    def _evaluate(self, r: np.ndarray) -> np.ndarray:
        x6 = (self.sigma / r) ** 6
        return 4 * self.epsilon * (x6 * x6 - x6)


@dataclass(frozen=True)
class ScreenedCoulombPotential(PairPotential):
    """
    v(r) = q exp(-r / lambda) / r.
    """

    charge_product: float
    screening_length: float

    def __post_init__(self):
        if self.screening_length <= 0:
            raise ValueError("screening_length must be positive")

    def _evaluate(self, r: np.ndarray) -> np.ndarray:
        return self.charge_product * np.exp(-r / self.screening_length) / r


@dataclass(frozen=True)
class CallablePotential(PairPotential):
    """
    A user-supplied potential; its smoothness is declared, not inferred.
    """

    func: Callable[[np.ndarray], np.ndarray]
    smoothness: float = 0

    def _evaluate(self, r: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(r), dtype=float)


def build_potential(config: PotentialConfig) -> PairPotential:
    p = config.params
    if config.kind == PotentialKind.inverse_power:
        return InversePowerPotential(strength=p["strength"], power=p["power"])
    if config.kind == PotentialKind.lennard_jones:
        return LennardJonesPotential(epsilon=p["epsilon"], sigma=p["sigma"])
    return ScreenedCoulombPotential(charge_product=p["charge_product"], screening_length=p["screening_length"])


@dataclass(frozen=True)
class PotentialTable:
    """
    Pair potentials per unordered species pair, with an optional default for all other pairs.
    """

    default: PairPotential | None = None
    pairs: Mapping[tuple[str, str], PairPotential] = field(default_factory=dict)

    def resolve(self, a: str | None, b: str | None) -> PairPotential:
        potential = self.pairs.get((a, b)) or self.pairs.get((b, a)) or self.default
        if potential is None:
            raise KeyError(f"no pair potential for ({a}, {b}) and no default")
        return potential

    @classmethod
    def from_configs(cls, configs: Iterable[PotentialConfig]) -> "PotentialTable":
        default = None
        pairs = {}
        for config in configs:
            if config.pair is None:
                default = build_potential(config)
            else:
                pairs[tuple(config.pair)] = build_potential(config)
        return cls(default=default, pairs=pairs)


def _as_table(potentials: PotentialTable | PairPotential) -> PotentialTable:
    return potentials if isinstance(potentials, PotentialTable) else PotentialTable(default=potentials)


@dataclass(frozen=True)
class SeparabilityResidual:
    scale: float
    # cross interaction with the subsystem particles at their scaled positions
    vtilde: float
    # the same interaction with every subsystem particle placed at the center of mass
    vlimit: float
    residual: float
    hyperradius: float


def separability_residual(
    config: MassedConfiguration, potentials: PotentialTable | PairPotential, scale: float
) -> SeparabilityResidual:
    """
    Cross interaction between subsystem and spectators after scaling the subsystem toward its center of mass by
    `scale`, compared with its separable limit.

    Args:
        config: Configuration with at least one spectator.
        potentials: Pair potentials, resolved per (subsystem species, spectator species).
        scale: Non-negative scale s; s = 0 places all subsystem particles at the center of mass.

    Raises:
        PotentialDomainError: if a subsystem particle and a spectator coincide.
    """
    spectators = config.spectators
    if not spectators:
        raise ValueError("the subsystem must be strictly smaller than the whole configuration")
    table = _as_table(potentials)
    center = subsystem_geometry(config).center
    scaled = config.scaled(scale, center=center)
    vtilde_terms = []
    vlimit_terms = []
    for j in spectators:
        rj = config.positions[j]
        r_cj = float(np.linalg.norm(rj - center))
        for i in config.subsystem:
            v = table.resolve(config.species_of(i), config.species_of(j))
            vtilde_terms.append(v(float(np.linalg.norm(rj - scaled.positions[i]))))
            vlimit_terms.append(v(r_cj))
    vtilde = math.fsum(vtilde_terms)
    vlimit = math.fsum(vlimit_terms)
    return SeparabilityResidual(
        scale=scale,
        vtilde=vtilde,
        vlimit=vlimit,
        residual=abs(vtilde - vlimit),
        hyperradius=subsystem_geometry(scaled).hyperradius,
    )


def expected_order(config: MassedConfiguration, potentials: PotentialTable | PairPotential) -> int:
    """
    Order q at which the residual vanishes: 2 for an equal-mass subsystem whose particles all interact with each
    spectator through the same twice-differentiable potential, 1 otherwise.
    """
    table = _as_table(potentials)
    masses = config.masses[list(config.subsystem)]
    if np.ptp(masses) > 1e-12 * masses.max():
        return 1
    for j in config.spectators:
        per_member = {table.resolve(config.species_of(i), config.species_of(j)) for i in config.subsystem}
        if len(per_member) > 1:
            return 1
        if table.resolve(config.species_of(config.subsystem[0]), config.species_of(j)).smoothness < 2:
            return 1
    return 2


@dataclass(frozen=True)
class ScaleSweep:
    records: tuple[SeparabilityResidual, ...]
    # fitted log-log slope of residual against scale; None with fewer than 2 non-zero residuals
    slope: float | None
    expected_order: int


def scale_sweep(
    config: MassedConfiguration,
    potentials: PotentialTable | PairPotential,
    scales: Sequence[float] | None = None,
    update_progress: ProgressCallback | None = None,
) -> ScaleSweep:
    """
    Residuals over a decreasing geometric sequence of scales (default 2^-4 .. 2^-12) and the fitted rate q in
    residual ~ s^q.
    """
    _LOG.info("SCALE_SWEEP started")
    t0 = time.time()
    scales = DEFAULT_SCALES if scales is None else tuple(scales)
    records = []
    with ProgressCallbackWrapper(update_progress) as progress:
        progress.update(completed=0, total=len(scales))
        for scale in scales:
            records.append(separability_residual(config, potentials, scale))
            progress.update(advance=1)
    points = [(r.scale, r.residual) for r in records if r.scale > 0 and r.residual > 0]
    slope = None
    if len(points) >= 2:
        x, y = np.log2(np.array(points)).T
        slope = float(np.polyfit(x, y, 1)[0])
    order = expected_order(config, potentials)
    _LOG.info(f"fitted slope q={slope} (expected >= {order})")
    _LOG.info(f"SCALE_SWEEP finished in {time.time() - t0:.2f}s")
    return ScaleSweep(records=tuple(records), slope=slope, expected_order=order)


def random_configuration(
    n_particles: int,
    subsystem_size: int,
    rng: np.random.Generator,
    *,
    equal_masses: bool = False,
    mass_range: tuple[float, float] = (0.5, 5.0),
) -> MassedConfiguration:
    """
    Draw a configuration: subsystem particles 0..subsystem_size-1 normally scattered around the origin, spectators
    on random directions 8 to 12 length units away.
    """
    if not 2 <= subsystem_size < n_particles:
        raise ValueError(f"need 2 <= subsystem_size < n_particles, got {subsystem_size} and {n_particles}")
    low, high = mass_range
    masses = rng.uniform(low, high, size=n_particles)
    if equal_masses:
        masses[:subsystem_size] = masses[0]
    n_spectators = n_particles - subsystem_size
    directions = rng.normal(size=(n_spectators, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    spectators = directions * rng.uniform(8.0, 12.0, size=(n_spectators, 1))
    positions = np.vstack([rng.normal(size=(subsystem_size, 3)), spectators])
    return MassedConfiguration(masses, positions, tuple(range(subsystem_size)))


def random_configuration_from_config(
    config: RandomDrawConfig, rng: np.random.Generator | None = None
) -> MassedConfiguration:
    return random_configuration(
        config.n_particles,
        config.subsystem_size,
        rng if rng is not None else make_rng(),
        equal_masses=config.equal_masses,
        mass_range=config.mass_range,
    )


__all__ = [
    "CallablePotential",
    "ConfinementReport",
    "InversePowerPotential",
    "LennardJonesPotential",
    "MassedConfiguration",
    "PairPotential",
    "PotentialTable",
    "ScaleSweep",
    "ScreenedCoulombPotential",
    "SeparabilityResidual",
    "SubsystemGeometry",
    "build_potential",
    "confinement_check",
    "expected_order",
    "random_configuration",
    "scale_sweep",
    "separability_residual",
    "subsystem_geometry",
]
