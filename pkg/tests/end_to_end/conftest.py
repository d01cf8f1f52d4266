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

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from arrangekit.random_state import SEED_ENV_VAR

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_path():
    def _path(name: str) -> str:
        return str(FIXTURES / name)

    return _path


@pytest.fixture
def write_config(tmp_path):
    def _write(doc: dict, name: str = "config.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def runner(monkeypatch):
    # keep caps and seeds from the surrounding environment out of the tests
    monkeypatch.setenv(SEED_ENV_VAR, "0")
    monkeypatch.delenv(SEED_ENV_VAR)
    for field in ["MAX_BELL_N", "MAX_PARTITION_N", "MAX_ARRANGEMENTS", "MAX_LADDER_SIZE"]:
        monkeypatch.delenv(f"ARRANGEKIT_{field}", raising=False)
    return CliRunner()
