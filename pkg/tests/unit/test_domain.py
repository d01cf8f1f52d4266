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
from pydantic import ValidationError

from arrangekit.domain import (
    BindingConfig,
    BindingMode,
    ConfigDocument,
    LimitsConfig,
    PotentialConfig,
    PotentialKind,
    RandomDrawConfig,
    SeparabilityConfig,
    SpeciesConfig,
)


def test_config_document_valid():
    doc = ConfigDocument.model_validate(
        {
            "composition": {"A": 3},
            "catalog": {"(A_2)": [-1.0, -0.1], "(A_3)": [-2.5]},
            "limits": {"maxArrangements": 100},
        }
    )
    assert doc.binding.mode == BindingMode.all
    assert doc.limits.max_arrangements == 100
    assert [s.name for s in doc.resolved_species()] == ["A"]


def test_config_document_everything_is_optional():
    doc = ConfigDocument()
    assert doc.composition is None
    assert doc.resolved_species() == []


def test_unknown_field_is_rejected():
    with pytest.raises(ValidationError):
        ConfigDocument.model_validate({"composition": {"A": 2}, "compositon": {"A": 2}})


@pytest.mark.parametrize("composition", [{}, {"A": 0}, {"A": -1}])
def test_invalid_composition(composition):
    with pytest.raises(ValidationError):
        ConfigDocument(composition=composition)


@pytest.mark.parametrize(
    "catalog",
    [{"(A)": [-1.0]}, {"(A_2)": []}, {"(A_2)": [0.0]}, {"(A_2)": [-1.0, 0.3]}, {"(A_2)(A)": [-1.0]}, {"A_2": [-1.0]}],
)
def test_invalid_catalog(catalog):
    with pytest.raises(ValidationError):
        ConfigDocument(catalog=catalog)


def test_validation_error_names_the_field():
    with pytest.raises(ValidationError) as excinfo:
        ConfigDocument.model_validate({"composition": {"A": 2}, "binding": {"mode": "sometimes"}})
    assert excinfo.value.errors()[0]["loc"] == ("binding", "mode")


def test_species_checks():
    with pytest.raises(ValidationError):
        ConfigDocument(species=[SpeciesConfig(name="A"), SpeciesConfig(name="A")])
    with pytest.raises(ValidationError):
        ConfigDocument(species=[SpeciesConfig(name="A")], composition={"B": 1})
    with pytest.raises(ValidationError):
        ConfigDocument(species=[SpeciesConfig(name="A", identical=False)], composition={"A": 2})
    with pytest.raises(ValidationError):
        SpeciesConfig(name="A B")


@pytest.mark.parametrize("mode", ["all", "All", "ALL"])
def test_binding_mode_is_case_insensitive(mode):
    assert BindingConfig(mode=mode).mode == BindingMode.all


def test_allowlist_entries_need_two_particles():
    assert BindingConfig(mode="allowlist", allowlist=["(X,e)"]).allowlist == ["(X,e)"]
    with pytest.raises(ValidationError):
        BindingConfig(mode="allowlist", allowlist=["(X)"])


class TestPotentialConfig:
    def test_valid(self):
        config = PotentialConfig(kind="screened_coulomb", params={"charge_product": 1.0, "screening_length": 2.0})
        assert config.kind == PotentialKind.screened_coulomb
        assert config.pair is None

    @pytest.mark.parametrize(
        "params",
        [{"strength": 1.0}, {"strength": 1.0, "power": 1.0, "sigma": 1.0}, {"strength": float("inf"), "power": 1.0}],
    )
    def test_invalid_params(self, params):
        with pytest.raises(ValidationError):
            PotentialConfig(kind="inverse_power", params=params)

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            PotentialConfig(kind="morse", params={})


class TestSeparabilityConfig:
    def test_explicit(self):
        config = SeparabilityConfig(masses=[1.0, 2.0, 3.0], positions=[(0, 0, 0)] * 3, subsystem=[0, 1])
        assert config.random_draw is None

    def test_random_draw(self):
        config = SeparabilityConfig.model_validate({"randomDraw": {"n_particles": 5, "subsystem_size": 3}})
        assert config.random_draw.mass_range == (0.5, 5.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"masses": [1.0, 1.0], "positions": [(0, 0, 0)] * 2},
            {"masses": [1.0, -1.0], "positions": [(0, 0, 0)] * 2, "subsystem": [0, 1]},
            {"masses": [1.0, 1.0], "positions": [(0, 0, 0)], "subsystem": [0, 1]},
            {"masses": [1.0, 1.0], "positions": [(0, 0, 0)] * 2, "subsystem": [0, 0]},
            {"masses": [1.0, 1.0], "positions": [(0, 0, 0)] * 2, "subsystem": [0, 2]},
            {"masses": [1.0, 1.0], "positions": [(0, 0, 0)] * 2, "subsystem": [0]},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            SeparabilityConfig(**kwargs)

    def test_random_draw_sizes(self):
        with pytest.raises(ValidationError):
            RandomDrawConfig(n_particles=3, subsystem_size=3)
        with pytest.raises(ValidationError):
            RandomDrawConfig(n_particles=4, subsystem_size=2, mass_range=(2.0, 1.0))


class TestLimitsConfig:
    def test_defaults(self):
        limits = LimitsConfig()
        assert limits.max_bell_n == 2000
        assert limits.max_partition_n == 100_000

    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("ARRANGEKIT_MAX_BELL_N", "50")
        monkeypatch.delenv("ARRANGEKIT_MAX_ARRANGEMENTS", raising=False)
        limits = LimitsConfig.from_env()
        assert limits.max_bell_n == 50
        assert limits.max_arrangements == LimitsConfig().max_arrangements

    def test_alias_and_name(self):
        assert LimitsConfig(maxBellN=5).max_bell_n == 5
        assert LimitsConfig(max_bell_n=5).max_bell_n == 5


class TestErrorLocations:
    def first_error(self, data: dict) -> dict:
        with pytest.raises(ValidationError) as excinfo:
            ConfigDocument.model_validate(data)
        return excinfo.value.errors()[0]

    def test_allowlist_entry_syntax(self):
        error = self.first_error({"binding": {"mode": "allowlist", "allowlist": ["(X,e)", "(X"]}})
        assert error["loc"] == ("binding", "allowlist", 1)

    def test_composition_key(self):
        error = self.first_error({"composition": {"A": 1, "1A": 2}})
        assert error["loc"][:2] == ("composition", "1A")

    def test_catalog_energies(self):
        error = self.first_error({"catalog": {"(A_2)": [-1.0], "(A_3)": [0.5]}})
        assert error["loc"] == ("catalog", "(A_3)")

    def test_allowlist_undeclared_species(self):
        error = self.first_error(
            {
                "species": [{"name": "X"}, {"name": "e"}],
                "composition": {"X": 1, "e": 2},
                "binding": {"mode": "allowlist", "allowlist": ["(X,e)", "(Q,e)"]},
            }
        )
        assert error["type"] == "undeclared_species"
        assert error["ctx"]["path"] == "binding.allowlist[1]"
        assert "Q" in error["msg"]

    def test_catalog_undeclared_species(self):
        error = self.first_error({"composition": {"A": 3}, "catalog": {"(A_2)": [-1.0], "(Q_2)": [-1.0]}})
        assert error["type"] == "undeclared_species"
        assert error["ctx"]["path"] == "catalog.(Q_2)"

    def test_composition_undeclared_species(self):
        error = self.first_error({"species": [{"name": "A"}], "composition": {"A": 1, "B": 1}})
        assert error["ctx"]["path"] == "composition.B"

    def test_catalog_without_species_is_not_cross_checked(self):
        assert list(ConfigDocument(catalog={"(Q_2)": [-1.0]}).catalog) == ["(Q_2)"]
