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
Schema of the configuration document that drives all `arrangekit` commands.
"""

import math
import os
from enum import Enum
from typing import Annotated, Any

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_core import PydanticCustomError


class CustomBaseModel(BaseModel):
    model_config = ConfigDict(protected_namespaces=(), populate_by_name=True, extra="forbid")


class BindingMode(str, Enum):
    """
    Which clusters of two or more particles are able to bind.

    - `ALL`: Every cluster binds.
    - `NONE`: No cluster binds; the only arrangement is the all-free one.
    - `ALLOWLIST`: Only the listed cluster compositions bind.
    """

    all = "ALL"
    none = "NONE"
    allowlist = "ALLOWLIST"


class PotentialKind(str, Enum):
    """
    Built-in central pair potentials.

    - `INVERSE_POWER`: v(r) = -C / r^k. Params: `strength` (C), `power` (k).
    - `LENNARD_JONES`: v(r) = 4 eps [(sigma/r)^12 - (sigma/r)^6]. Params: `epsilon`, `sigma`.
    - `SCREENED_COULOMB`: v(r) = q exp(-r/lambda) / r. Params: `charge_product` (q), `screening_length` (lambda).
    """

    inverse_power = "INVERSE_POWER"
    lennard_jones = "LENNARD_JONES"
    screened_coulomb = "SCREENED_COULOMB"


class AsymptoticMethod(str, Enum):
    """
    Leading-order asymptotic approximations of arrangement counts.

    - `BELL`: Bell numbers, B(N) ~ K^N e^(K-N-1) / sqrt(1 + ln K) with K ln K = N.
    - `HARDY_RAMANUJAN`: partition numbers, p(N) ~ exp(pi sqrt(2N/3)) / (4 sqrt(3) N).
    """

    bell = "BELL"
    hardy_ramanujan = "HARDY_RAMANUJAN"


def _upper(v: Any) -> Any:
    return v.upper() if isinstance(v, str) else v


def _species_token(v: str) -> str:
    from arrangekit.core import is_species_token

    if not is_species_token(v):
        raise ValueError(f"`{v}` is not a valid species token")
    return v


def _bound_cluster(v: str) -> str:
    from arrangekit.notation import parse_cluster

    if parse_cluster(v).size < 2:
        raise ValueError(f"`{v}` must be a cluster of at least 2 particles")
    return v


def _bound_energies(v: list[float]) -> list[float]:
    if not v:
        raise ValueError("at least one energy is needed")
    if any(not math.isfinite(e) or e >= 0 for e in v):
        raise ValueError("energies must be finite and negative")
    return v


SpeciesToken = Annotated[str, AfterValidator(_species_token)]
ClusterNotation = Annotated[str, AfterValidator(_bound_cluster)]
BoundEnergies = Annotated[list[float], AfterValidator(_bound_energies)]


def _document_error(error_type: str, path: str, message: str, **context: str) -> PydanticCustomError:
    # cross-field checks run on the whole document; `path` names the offending entry
    return PydanticCustomError(error_type, message, {"path": path, **context})


class SpeciesConfig(CustomBaseModel):
    """
    A particle kind. Particles of an identical species are mutually indistinguishable.
    """

    name: SpeciesToken = Field(..., description="Species token, e.g. `A`, `Rb`, `e-`, `A^2+`.")
    identical: bool = Field(default=True, description="Whether particles of this species are mutually identical.")


class BindingConfig(CustomBaseModel):
    """
    The rule deciding which clusters can bind. Free particles are always permitted.
    """

    mode: BindingMode = Field(default=BindingMode.all, description="Binding mode.")
    allowlist: list[ClusterNotation] = Field(
        default_factory=list,
        description="Cluster notations that can bind, e.g. `(X,e)`. Only used in `ALLOWLIST` mode.",
    )

    @field_validator("mode", mode="before")
    @classmethod
    def normalize_mode(cls, v):
        return _upper(v)


class PotentialConfig(CustomBaseModel):
    """
    A pair potential selection. Without `pair`, the potential applies to all cross pairs without a specific entry.
    """

    kind: PotentialKind = Field(..., description="Built-in potential.")
    pair: tuple[str, str] | None = Field(default=None, description="The species pair this potential applies to.")
    params: dict[str, float] = Field(default_factory=dict, description="Potential parameters.")

    @field_validator("kind", mode="before")
    @classmethod
    def normalize_kind(cls, v):
        return _upper(v)

    @model_validator(mode="after")
    def validate_params(self):
        required = {
            PotentialKind.inverse_power: {"strength", "power"},
            PotentialKind.lennard_jones: {"epsilon", "sigma"},
            PotentialKind.screened_coulomb: {"charge_product", "screening_length"},
        }[self.kind]
        missing = required - set(self.params)
        if missing:
            raise ValueError(f"missing parameters for {self.kind.value}: {sorted(missing)}")
        unknown = set(self.params) - required
        if unknown:
            raise ValueError(f"unknown parameters for {self.kind.value}: {sorted(unknown)}")
        if not all(math.isfinite(p) for p in self.params.values()):
            raise ValueError("potential parameters must be finite")
        return self


class RandomDrawConfig(CustomBaseModel):
    """
    Draw a configuration from the seeded random generator instead of listing masses and positions.
    """

    n_particles: int = Field(..., ge=3, description="Total number of particles.")
    subsystem_size: int = Field(..., ge=2, description="Number of particles in the subsystem.")
    equal_masses: bool = Field(default=False, description="Give all subsystem particles the same mass.")
    mass_range: tuple[float, float] = Field(default=(0.5, 5.0), description="Uniform mass range.")

    @model_validator(mode="after")
    def validate_sizes(self):
        if self.subsystem_size >= self.n_particles:
            raise ValueError("subsystem_size must be smaller than n_particles")
        low, high = self.mass_range
        if not 0 < low <= high:
            raise ValueError("mass_range must satisfy 0 < low <= high")
        return self


class SeparabilityConfig(CustomBaseModel):
    """
    Masses, positions and subsystem of an N-particle configuration, plus the pair potentials between the subsystem
    and the remaining particles.
    """

    masses: list[float] | None = Field(default=None, description="Particle masses, all positive.")
    positions: list[tuple[float, float, float]] | None = Field(default=None, description="Particle positions.")
    subsystem: list[int] | None = Field(default=None, description="Indices of the subsystem particles.")
    species: list[str] | None = Field(default=None, description="Per-particle species, used to resolve potentials.")
    potentials: list[PotentialConfig] = Field(default_factory=list, description="Pair potential selections.")
    random_draw: RandomDrawConfig | None = Field(default=None, alias="randomDraw")

    @model_validator(mode="after")
    def validate_configuration(self):
        if self.random_draw is not None:
            if self.masses is not None or self.positions is not None:
                raise ValueError("use either random_draw or masses/positions, not both")
            return self
        if self.masses is None or self.positions is None or self.subsystem is None:
            raise ValueError("masses, positions and subsystem are required unless random_draw is given")
        n = len(self.masses)
        if any(not (m > 0 and math.isfinite(m)) for m in self.masses):
            raise ValueError("masses must be positive and finite")
        if len(self.positions) != n:
            raise ValueError(f"expected {n} positions, got {len(self.positions)}")
        if self.species is not None and len(self.species) != n:
            raise ValueError(f"expected {n} species labels, got {len(self.species)}")
        if len(set(self.subsystem)) != len(self.subsystem):
            raise ValueError("subsystem indices must be unique")
        if any(not 0 <= i < n for i in self.subsystem):
            raise ValueError(f"subsystem indices must lie in [0, {n})")
        if len(self.subsystem) < 2:
            raise ValueError("subsystem must contain at least 2 particles")
        return self


class LimitsConfig(CustomBaseModel):
    """
    Resource caps. Exceeding a cap raises `CapExceededError` instead of starting an impossible computation.
    """

    max_bell_n: int = Field(default=2000, ge=0, alias="maxBellN")
    max_partition_n: int = Field(default=100_000, ge=0, alias="maxPartitionN")
    max_arrangements: int = Field(default=10**7, ge=1, alias="maxArrangements")
    max_ladder_size: int = Field(default=10**6, ge=1, alias="maxLadderSize")

    @classmethod
    def from_env(cls) -> "LimitsConfig":
        """
        Defaults, overridden by `ARRANGEKIT_MAX_*` environment variables.
        """
        overrides = {}
        for field in cls.model_fields:
            value = os.getenv(f"ARRANGEKIT_{field.upper()}", default=None)
            if value:
                overrides[field] = int(value)
        return cls(**overrides)


class ConfigDocument(CustomBaseModel):
    """
    One document describing a physical system. Every section is optional; each command reads the sections it needs.
    """

    species: list[SpeciesConfig] | None = Field(
        default=None,
        description="Species declarations. Defaults to one identical species per composition entry.",
    )
    composition: dict[SpeciesToken, int] | None = Field(default=None, description="Species multiplicities.")
    binding: BindingConfig = Field(default_factory=BindingConfig)
    catalog: dict[ClusterNotation, BoundEnergies] = Field(
        default_factory=dict,
        description="Bound-state energies per cluster notation, e.g. `{\"(A_2)\": [-1.0, -0.1]}`.",
    )
    annotations: dict[str, list[str]] = Field(
        default_factory=dict,
        description="Free-text notes per cluster notation, e.g. resonances below a threshold.",
    )
    separability: SeparabilityConfig | None = None
    limits: LimitsConfig | None = None

    @field_validator("composition")
    @classmethod
    def validate_composition(cls, v):
        if v is None:
            return v
        if not v:
            raise ValueError("composition must not be empty")
        for name, count in v.items():
            if count < 1:
                raise ValueError(f"multiplicity of `{name}` must be at least 1")
        return v

    @model_validator(mode="after")
    def validate_species(self):
        if self.species is not None:
            names = [s.name for s in self.species]
            if len(set(names)) != len(names):
                raise ValueError("species names must be unique")
            if self.composition is not None:
                declared = {s.name: s for s in self.species}
                for name, count in self.composition.items():
                    if name not in declared:
                        raise _document_error(
                            "undeclared_species", f"composition.{name}", "species `{name}` is not declared", name=name
                        )
                    if not declared[name].identical and count != 1:
                        raise _document_error(
                            "distinguishable_multiplicity",
                            f"composition.{name}",
                            "distinguishable species `{name}` must have multiplicity 1",
                            name=name,
                        )
        if self.species is not None or self.composition is not None:
            self._check_cluster_species()
        return self

    def _check_cluster_species(self) -> None:
        from arrangekit.notation import parse_cluster

        declared = {s.name for s in self.resolved_species()}
        entries = [(f"binding.allowlist[{i}]", notation) for i, notation in enumerate(self.binding.allowlist)]
        entries += [(f"catalog.{notation}", notation) for notation in self.catalog]
        for path, notation in entries:
            unknown = sorted({name for name, _ in parse_cluster(notation).members.items()} - declared)
            if unknown:
                raise _document_error(
                    "undeclared_species",
                    path,
                    "`{notation}` uses undeclared species {names}",
                    notation=notation,
                    names=", ".join(unknown),
                )

    def resolved_species(self) -> list[SpeciesConfig]:
        if self.species is not None:
            return self.species
        return [SpeciesConfig(name=name) for name in (self.composition or {})]
