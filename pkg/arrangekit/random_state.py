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

import logging
import os
import struct

import numpy as np

_LOG = logging.getLogger(__name__)

SEED_ENV_VAR = "ARRANGEKIT_SEED"


def set_random_state(random_state: int | None = None) -> int:
    """
    Export the seed for random draws via `ARRANGEKIT_SEED` and return it.

    Without an explicit seed a 32-bit seed is drawn from the OS, so the run can still be reproduced from the log.
    """
    if random_state is None:
        # 32-bit, cryptographically secure random int from os
        random_state = int(struct.unpack("I", os.urandom(4))[0])
    _LOG.info(f"random_state set to `{random_state}`")
    os.environ[SEED_ENV_VAR] = str(random_state)
    return random_state


def make_rng(random_state: int | None = None) -> np.random.Generator:
    """
    Create a numpy generator; falls back to the exported seed, if any.
    """
    if random_state is None and SEED_ENV_VAR in os.environ:
        random_state = int(os.environ[SEED_ENV_VAR])
    return np.random.default_rng(random_state)
