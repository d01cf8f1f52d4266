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
import logging
import math
import platform
from pathlib import Path
from typing import Any, Protocol

import numpy as np
from pydantic import BaseModel

from arrangekit.domain import LimitsConfig

_LOG = logging.getLogger(__name__)

_LOG.debug(f"running on Python ({platform.python_version()})")

ENERGY_SIGNIFICANT_DIGITS = 12


class ArrangeKitError(Exception):
    pass


class CapExceededError(ArrangeKitError):
    def __init__(self, what: str, requested: int, cap: int):
        self.what = what
        self.requested = requested
        self.cap = cap
        super().__init__(f"{what}: {_format_big(requested)} exceeds the configured cap of {cap}")


class EmptyCompositionError(ArrangeKitError, ValueError):
    pass


class MissingClusterEnergyError(ArrangeKitError, KeyError):
    def __init__(self, cluster: str):
        self.cluster = cluster
        super().__init__(cluster)

    def __str__(self) -> str:
        return f"no bound-state energy in catalog for cluster {self.cluster}"


class PotentialDomainError(ArrangeKitError, ValueError):
    pass


def _format_big(value: int) -> str:
    # keep messages readable for astronomically large estimates
    digits = str(value)
    return digits if len(digits) <= 24 else f"~1e{len(digits) - 1}"


def get_limits(limits: LimitsConfig | None = None) -> LimitsConfig:
    return limits if limits is not None else LimitsConfig.from_env()


def check_cap(what: str, requested: int, cap: int) -> None:
    if requested > cap:
        raise CapExceededError(what, requested, cap)


def round_energy(value: float) -> float:
    return float(f"{value:.{ENERGY_SIGNIFICANT_DIGITS}g}")


class ProgressCallback(Protocol):
    def __call__(
        self,
        total: int | None = None,
        completed: int | None = None,
        advance: int | None = None,
        message: dict | None = None,
        **kwargs,
    ) -> dict | None: ...


class ProgressCallbackWrapper:
    def update(
        self,
        total: int | None = None,
        completed: int | None = None,
        advance: int | None = None,
        message: dict | BaseModel | None = None,
        **kwargs,
    ) -> dict | None:
        if isinstance(message, BaseModel):
            message = message.model_dump(mode="json")
        if message is not None:
            _LOG.info(message)
        return self._update_progress(total=total, completed=completed, advance=advance, message=message, **kwargs)

    def __init__(self, update_progress: ProgressCallback | None = None, **kwargs):
        self._update_progress = update_progress if update_progress is not None else (lambda *args, **kwargs: None)

    def __enter__(self):
        self._update_progress(completed=0, total=1)
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        if exc_type is None:
            self._update_progress(completed=1, total=1)


def to_jsonable(data: Any) -> Any:
    """
    Recursively convert numpy scalars and arrays, tuples and enums into plain JSON types.
    """
    if isinstance(data, dict):
        return {(int(k) if isinstance(k, np.integer) else k): to_jsonable(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_jsonable(v) for v in data]
    if isinstance(data, np.ndarray):
        return to_jsonable(data.tolist())
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, np.floating):
        return float(data)
    if isinstance(data, BaseModel):
        return data.model_dump(mode="json")
    if isinstance(data, float) and not math.isfinite(data):
        return None
    return data


def dump_json(data: Any) -> str:
    # insertion order is the stable key order; no sort_keys
    return json.dumps(to_jsonable(data), ensure_ascii=False, indent=2)


def write_text(text: str, fn: Path) -> None:
    fn.parent.mkdir(parents=True, exist_ok=True)
    with open(fn, "w", encoding="utf-8") as outfile:
        outfile.write(text)
        outfile.write("\n")


def write_json(data: Any, fn: Path) -> None:
    write_text(dump_json(data), fn)


def read_json(path: Path, default: dict | None = None, raises: bool | None = None) -> dict:
    """
    Reads JSON.

    :param path: path to json
    :param default: default used in case path does not exist
    :param raises: if True, raises exception if path does not exist,
        otherwise returns default
    :return: dict representation of JSON
    """

    if default is None:
        default = {}
    if not path.exists():
        if raises:
            raise FileNotFoundError(f"File [{path}] does not exist")
        else:
            return default
    with open(path, encoding="utf-8") as json_file:
        data = json.load(json_file)
    return data
