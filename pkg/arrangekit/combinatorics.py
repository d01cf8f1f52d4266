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
Exact Bell numbers B(N) and partition numbers p(N), the extreme arrangement counts for N particles that bind in all
configurations (all distinguishable, all identical), and their leading asymptotics.
"""

import logging
import math
import sys
import threading
from dataclasses import dataclass

from scipy.optimize import newton

from arrangekit._common import check_cap, get_limits
from arrangekit.domain import AsymptoticMethod, LimitsConfig

_LOG = logging.getLogger(__name__)

# largest x with exp(x) representable as a float
_MAX_LOG_FLOAT = math.log(sys.float_info.max)

NEWTON_RTOL = 1e-12


class _BellTriangle:
    """
    Bell numbers via the additive Bell triangle: each row starts with the last entry of the previous row, and every
    further entry is the sum of its left neighbour and the entry above that neighbour. Row n starts with B(n).
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._row = [1]
        self._values = [1]

    def prefix(self, n: int) -> list[int]:
        with self._lock:
            while len(self._values) <= n:
                row = [self._row[-1]]
                for above in self._row:
                    row.append(row[-1] + above)
                self._row = row
                self._values.append(row[0])
            return self._values[: n + 1]


class _PartitionTable:
    """
    Partition numbers via Euler's pentagonal recurrence, p(m) = sum_k (-1)^(k+1) [p(m - w(k)) + p(m - w(-k))].
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._values = [1]

    def prefix(self, n: int) -> list[int]:
        with self._lock:
            values = self._values
            for m in range(len(values), n + 1):
                total = 0
                k = 1
                while True:
                    first = m - pentagonal(k)
                    if first < 0:
                        break
                    second = m - pentagonal(-k)
                    term = values[first] + (values[second] if second >= 0 else 0)
                    total += term if k % 2 == 1 else -term
                    k += 1
                values.append(total)
            return values[: n + 1]


_BELL_TRIANGLE = _BellTriangle()
_PARTITION_TABLE = _PartitionTable()


def _check_index(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")


def bell_numbers(n: int, cap: int | None = None, limits: LimitsConfig | None = None) -> list[int]:
    """
    Exact Bell numbers B(0), ..., B(n).
    """
    _check_index(n)
    check_cap("Bell number index", n, cap if cap is not None else get_limits(limits).max_bell_n)
    return _BELL_TRIANGLE.prefix(n)


def bell(n: int, cap: int | None = None, limits: LimitsConfig | None = None) -> int:
    """
    Exact Bell number B(n): the number of partitions of a set of n distinguishable elements, i.e. the number of
    arrangements of n distinguishable particles that bind in all configurations.

    Args:
        n: Number of particles, n >= 0.
        cap: Largest admissible n. Defaults to `LimitsConfig.max_bell_n` (2000).
        limits: Limits to take the default cap from.

    Raises:
        CapExceededError: if n exceeds the cap.
    """
    return bell_numbers(n, cap=cap, limits=limits)[n]


def pentagonal(k: int) -> int:
    """
    Generalized pentagonal number w(k) = (3k^2 - k) / 2 for k = +1, -1, +2, -2, ...
    """
    if k == 0:
        raise ValueError("pentagonal numbers are defined for k != 0")
    return k * (3 * k - 1) // 2


def partition_numbers(n: int, cap: int | None = None, limits: LimitsConfig | None = None) -> list[int]:
    """
    Exact partition numbers p(0), ..., p(n), produced in one memoised pass.
    """
    _check_index(n)
    check_cap("partition number index", n, cap if cap is not None else get_limits(limits).max_partition_n)
    return _PARTITION_TABLE.prefix(n)


def partition_count(n: int, cap: int | None = None, limits: LimitsConfig | None = None) -> int:
    """
    Exact partition number p(n): the number of partitions of the natural number n, i.e. the number of arrangements
    of n identical particles that bind in all configurations.

    Raises:
        CapExceededError: if n exceeds the cap (default 100000).
    """
    return partition_numbers(n, cap=cap, limits=limits)[n]


@dataclass(frozen=True)
class AsymptoticEstimate:
    n: int
    method: AsymptoticMethod
    log_value: float
    # None when exp(log_value) is not representable as a float
    value: float | None
    k_root: float | None = None

    @property
    def overflowed(self) -> bool:
        return self.value is None


def _from_log(n: int, method: AsymptoticMethod, log_value: float, k_root: float | None = None) -> AsymptoticEstimate:
    value = math.exp(log_value) if log_value < _MAX_LOG_FLOAT else None
    if value is None:
        _LOG.info(f"{method.value} estimate for n={n} exceeds the float range; reporting log-value only")
    return AsymptoticEstimate(n=n, method=method, log_value=log_value, value=value, k_root=k_root)


def solve_k_ln_k(n: float) -> float:
    """
    Solve K ln K = n for K by Newton iteration, i.e. K = exp(W(n)) with W the Lambert function.
    """
    if n <= 0:
        raise ValueError(f"n must be positive, got {n!r}")
    k0 = max(n / math.log(n + 1), 1.5)
    return float(
        newton(
            lambda k: k * math.log(k) - n,
            k0,
            fprime=lambda k: math.log(k) + 1.0,
            tol=1e-300,
            rtol=NEWTON_RTOL,
            maxiter=200,
        )
    )


def _check_positive(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def bell_asymptotic(n: int) -> AsymptoticEstimate:
    """
    Leading asymptotic of the Bell numbers, B(n) ~ K^n e^(K - n - 1) / sqrt(1 + ln K) with K ln K = n.

    Evaluated in log-space; `value` is None beyond the float range.
    """
    _check_positive(n)
    k = solve_k_ln_k(n)
    log_k = math.log(k)
    log_value = n * log_k + k - n - 1 - 0.5 * math.log1p(log_k)
    return _from_log(n, AsymptoticMethod.bell, log_value, k_root=k)


def hardy_ramanujan(n: int) -> AsymptoticEstimate:
    """
    Hardy-Ramanujan asymptotic of the partition numbers, p(n) ~ exp(pi sqrt(2n/3)) / (4 sqrt(3) n).
    """
    _check_positive(n)
    log_value = math.pi * math.sqrt(2.0 * n / 3.0) - math.log(4.0 * math.sqrt(3.0) * n)
    return _from_log(n, AsymptoticMethod.hardy_ramanujan, log_value)


def asymptotic(n: int, method: AsymptoticMethod | str) -> AsymptoticEstimate:
    method = AsymptoticMethod(method.upper() if isinstance(method, str) else method)
    return bell_asymptotic(n) if method == AsymptoticMethod.bell else hardy_ramanujan(n)


def exact_count(n: int, method: AsymptoticMethod, limits: LimitsConfig | None = None) -> int:
    """
    The exact count an asymptotic method approximates.
    """
    return bell(n, limits=limits) if method == AsymptoticMethod.bell else partition_count(n, limits=limits)


def asymptotic_ratio(estimate: AsymptoticEstimate, exact: int) -> float:
    """
    estimate / exact, computed in log-space so that neither side needs to fit in a float.
    """
    return math.exp(estimate.log_value - math.log(exact))


def growth_exponents(n: int, limits: LimitsConfig | None = None) -> tuple[float, float]:
    """
    (ln B(n) / (n ln n), ln p(n) / sqrt(n)): the two growth laws, B ~ e^(n ln n) and p ~ e^(alpha sqrt(n)), as
    exponents that level off for large n.
    """
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"n must be an integer >= 4, got {n!r}")
    return (
        math.log(bell(n, limits=limits)) / (n * math.log(n)),
        math.log(partition_count(n, limits=limits)) / math.sqrt(n),
    )


def growth_series(n_max: int, limits: LimitsConfig | None = None) -> list[dict[str, float | int]]:
    """
    Plot-ready rows for N = 1..n_max: exact and asymptotic log-counts of both extreme cases.
    """
    _check_positive(n_max)
    bells = bell_numbers(n_max, limits=limits)
    partitions = partition_numbers(n_max, limits=limits)
    return [
        {
            "n": n,
            "ln_partitions": math.log(partitions[n]),
            "ln_hardy_ramanujan": hardy_ramanujan(n).log_value,
            "ln_bell": math.log(bells[n]),
            "ln_bell_asymptotic": bell_asymptotic(n).log_value,
        }
        for n in range(1, n_max + 1)
    ]
