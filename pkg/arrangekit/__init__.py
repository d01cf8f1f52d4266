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
import warnings

from arrangekit._common import (
    ArrangeKitError,
    CapExceededError,
    EmptyCompositionError,
    MissingClusterEnergyError,
    PotentialDomainError,
)
from arrangekit.combinatorics import (
    asymptotic,
    bell,
    bell_asymptotic,
    growth_exponents,
    growth_series,
    hardy_ramanujan,
    partition_count,
    pentagonal,
)
from arrangekit.core import Arrangement, Cluster, Composition, Species, canonicalize, total_size
from arrangekit.enumeration import (
    ArrangementSet,
    BindingPredicate,
    SystemSpec,
    check_constraints,
    count_arrangements,
    enumerate_arrangements,
    ionization_allowlist,
)
from arrangekit.logging import init_logging
from arrangekit.notation import ParseError, format_arrangement, parse, parse_cluster, parse_display
from arrangekit.random_state import set_random_state
from arrangekit.separability import (
    MassedConfiguration,
    PotentialTable,
    confinement_check,
    scale_sweep,
    separability_residual,
    subsystem_geometry,
)
from arrangekit.spectrum import EnergyCatalog, assign_g, export_spectrum, lowest_threshold, threshold_ladder

__all__ = [
    "Arrangement",
    "ArrangementSet",
    "ArrangeKitError",
    "BindingPredicate",
    "CapExceededError",
    "Cluster",
    "Composition",
    "EmptyCompositionError",
    "EnergyCatalog",
    "MassedConfiguration",
    "MissingClusterEnergyError",
    "ParseError",
    "PotentialDomainError",
    "PotentialTable",
    "Species",
    "SystemSpec",
    "assign_g",
    "asymptotic",
    "bell",
    "bell_asymptotic",
    "canonicalize",
    "check_constraints",
    "confinement_check",
    "count_arrangements",
    "enumerate_arrangements",
    "export_spectrum",
    "format_arrangement",
    "growth_exponents",
    "growth_series",
    "hardy_ramanujan",
    "init_logging",
    "ionization_allowlist",
    "lowest_threshold",
    "parse",
    "parse_cluster",
    "parse_display",
    "partition_count",
    "pentagonal",
    "scale_sweep",
    "separability_residual",
    "set_random_state",
    "subsystem_geometry",
    "threshold_ladder",
    "total_size",
]
__version__ = "0.1.0"

# suppress specific warning related to os.fork() in multi-threaded processes
warnings.filterwarnings("ignore", category=DeprecationWarning, message=".*multi-threaded.*fork.*")
