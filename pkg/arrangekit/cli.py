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
The `arrangekit` command line.

Every command reads the sections it needs from one JSON configuration document and writes either an aligned table
or a JSON document to stdout (or to `--out`). Exit codes: 0 on success, 2 on invalid input, 3 when a resource cap
would be exceeded.
"""

import functools
import logging
from pathlib import Path
from typing import Any

import click
import pandas as pd
from pydantic import ValidationError

from arrangekit._common import (
    ArrangeKitError,
    CapExceededError,
    dump_json,
    read_json,
    round_energy,
    write_json,
    write_text,
)
from arrangekit.combinatorics import (
    asymptotic,
    asymptotic_ratio,
    bell,
    bell_numbers,
    exact_count,
    growth_series,
    partition_count,
    partition_numbers,
)
from arrangekit.domain import AsymptoticMethod, ConfigDocument, LimitsConfig
from arrangekit.enumeration import SystemSpec, count_arrangements, enumerate_arrangements
from arrangekit.logging import init_logging
from arrangekit.notation import ParseError, format_arrangement, format_display, parse, parse_display
from arrangekit.random_state import make_rng, set_random_state
from arrangekit.separability import (
    DEFAULT_SCALES,
    MassedConfiguration,
    PotentialTable,
    confinement_check,
    scale_sweep,
    subsystem_geometry,
)
from arrangekit.spectrum import EnergyCatalog, assign_g, export_spectrum

_LOG = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_CAP_EXCEEDED = 3

_METHODS = {
    "bell": AsymptoticMethod.bell,
    "hr": AsymptoticMethod.hardy_ramanujan,
    "hardy-ramanujan": AsymptoticMethod.hardy_ramanujan,
    "hardy_ramanujan": AsymptoticMethod.hardy_ramanujan,
}


def _format_loc(loc: tuple) -> str:
    path = ""
    for part in loc:
        if part == "[key]":
            continue
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path


def _format_validation_error(error: ValidationError) -> str:
    lines = []
    for detail in error.errors():
        # document-level checks carry the offending entry in their context
        path = (detail.get("ctx") or {}).get("path") or _format_loc(detail["loc"]) or "document"
        lines.append(f"{path}: {detail['msg']}")
    return "\n".join(lines)


def _handle_errors(func):
    """
    Map library errors to exit codes; nothing is written to stdout for a failed command.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except CapExceededError as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_CAP_EXCEEDED)
        except ValidationError as e:
            click.echo(f"Error: invalid configuration\n{_format_validation_error(e)}", err=True)
            ctx.exit(EXIT_INVALID)
        except ParseError as e:
            click.echo(f"Error: {e.render()}", err=True)
            ctx.exit(EXIT_INVALID)
        except (ArrangeKitError, ValueError) as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_INVALID)
        except KeyError as e:
            click.echo(f"Error: {e.args[0]}", err=True)
            ctx.exit(EXIT_INVALID)

    return wrapper


def _output_options(func):
    func = click.option(
        "--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write output to this file."
    )(func)
    func = click.option(
        "--format",
        "fmt",
        type=click.Choice(["table", "json"], case_sensitive=False),
        default="table",
        show_default=True,
        help="Output format.",
    )(func)
    return func


def _config_options(func):
    func = click.option(
        "--config",
        "config_option",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="Configuration document (alternative to the positional argument).",
    )(func)
    func = click.argument(
        "config_path", required=False, type=click.Path(exists=True, dir_okay=False, path_type=Path)
    )(func)
    return func


def _load_config(config_path: Path | None, config_option: Path | None, required: bool = True) -> ConfigDocument | None:
    path = config_option or config_path
    if path is None:
        if required:
            raise click.UsageError("a configuration document is required (positional or --config)")
        return None
    doc = ConfigDocument.model_validate(read_json(path, raises=True))
    _LOG.info(f"loaded configuration from {path}")
    return doc


def _resolve_limits(doc: ConfigDocument | None, **overrides: int | None) -> LimitsConfig:
    # defaults < environment < document < command line
    values = LimitsConfig.from_env().model_dump()
    if doc is not None and doc.limits is not None:
        values.update(doc.limits.model_dump(include=doc.limits.model_fields_set))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return LimitsConfig(**values)


def _emit(fmt: str, out: Path | None, data: Any, table: str) -> None:
    as_json = fmt.lower() == "json"
    if out is None:
        click.echo(dump_json(data) if as_json else table)
    elif as_json:
        write_json(data, out)
    else:
        write_text(table, out)


def _rounded(value: float | None) -> float | None:
    # every float in the asymptotics output carries the same number of significant digits
    return None if value is None else round_energy(value)


def _key_values(rows: dict[str, Any]) -> str:
    return pd.Series({k: "" if v is None else v for k, v in rows.items()}, dtype=object).to_string()


def _frame(records: list[dict[str, Any]]) -> str:
    return pd.DataFrame.from_records(records).to_string(index=False)


def _ladder_text(ladder: list[list]) -> str:
    return "; ".join(f"{energy:.12g}" + (f" (x{m})" if m > 1 else "") for energy, m in ladder)


@click.group(help="Arrangements of N-body systems: notation, counting, spectra and separability checks.")
@click.version_option(package_name="arrangekit")
@click.option("--verbose", is_flag=True, help="Log progress to stderr.")
@click.option("--seed", type=int, default=None, help="Random seed for random draws.")
def cli(verbose: bool, seed: int | None):
    if verbose:
        init_logging()
    if seed is not None:
        set_random_state(seed)


@cli.command("parse", help="Print the canonical form of an arrangement and its composition.")
@click.argument("text")
@_config_options
@click.option("--display", is_flag=True, help="Accept display notation with `_inf` group multiplicities.")
@_output_options
@_handle_errors
def cmd_parse(text: str, config_path, config_option, display: bool, fmt: str, out: Path | None):
    doc = _load_config(config_path, config_option, required=False)
    system = None
    if doc is not None and (doc.species is not None or doc.composition is not None):
        system = [s.name for s in doc.resolved_species()]
    if display:
        arrangement = parse_display(text, system)
        if not arrangement.is_finite:
            canonical = format_display(arrangement)
            _emit(fmt, out, {"arrangement": canonical, "finite": False}, canonical)
            return
        arrangement = arrangement.to_arrangement()
    else:
        arrangement = parse(text, system)
    canonical = format_arrangement(arrangement)
    composition = arrangement.composition.as_dict()
    data = {
        "arrangement": canonical,
        "composition": composition,
        "n_particles": arrangement.size,
        "n_clusters": arrangement.n_clusters,
    }
    table = canonical + "\n" + " ".join(f"{name}:{count}" for name, count in composition.items())
    _emit(fmt, out, data, table)


@cli.command("enumerate", help="List all arrangements of the configured system in canonical order.")
@_config_options
@click.option("--count-only", is_flag=True, help="Only print the number of arrangements M.")
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Largest admissible number of arrangements.")
@click.option("--n-jobs", type=int, default=1, show_default=True, help="Parallel workers for enumeration.")
@_output_options
@_handle_errors
def cmd_enumerate(config_path, config_option, count_only: bool, cap: int | None, n_jobs: int, fmt: str, out):
    doc = _load_config(config_path, config_option)
    limits = _resolve_limits(doc, max_arrangements=cap)
    spec = SystemSpec.from_config(doc)
    header = {"n_particles": spec.size, "composition": spec.composition.as_dict(), "binding": spec.binding.mode.value}
    if count_only:
        m = count_arrangements(spec, n_jobs=n_jobs, limits=limits)
        _emit(fmt, out, {**header, "count": m}, str(m))
        return
    arrangements = enumerate_arrangements(spec, n_jobs=n_jobs, limits=limits)
    notations = [format_arrangement(a) for a in arrangements]
    data = {
        **header,
        "count": arrangements.count,
        "has_all_bound": arrangements.has_all_bound,
        "has_all_free": arrangements.has_all_free,
        "arrangements": notations,
    }
    _emit(fmt, out, data, "\n".join(notations))


@cli.command("counts", help="Exact Bell numbers B(N) and partition numbers p(N).")
@click.option("--bell", "bell_n", type=click.IntRange(min=0), default=None, help="Print B(N).")
@click.option("--partitions", "partitions_n", type=click.IntRange(min=0), default=None, help="Print p(N).")
@click.option("--table", "table_n", type=click.IntRange(min=1), default=None, help="Tabulate p(N) and B(N), N=1..N.")
@click.option("--cap", type=click.IntRange(min=0), default=None, help="Largest admissible N.")
@_output_options
@_handle_errors
def cmd_counts(bell_n, partitions_n, table_n, cap: int | None, fmt: str, out: Path | None):
    selected = [v for v in (bell_n, partitions_n, table_n) if v is not None]
    if len(selected) != 1:
        raise click.UsageError("give exactly one of --bell, --partitions or --table")
    limits = _resolve_limits(None, max_bell_n=cap, max_partition_n=cap)
    if bell_n is not None:
        value = bell(bell_n, limits=limits)
        _emit(fmt, out, {"n": bell_n, "bell": value}, str(value))
    elif partitions_n is not None:
        value = partition_count(partitions_n, limits=limits)
        _emit(fmt, out, {"n": partitions_n, "partitions": value}, str(value))
    else:
        partitions = partition_numbers(table_n, limits=limits)
        bells = bell_numbers(table_n, limits=limits)
        rows = [{"N": n, "p(N)": partitions[n], "B(N)": bells[n]} for n in range(1, table_n + 1)]
        data = {"rows": [{"n": n, "partitions": partitions[n], "bell": bells[n]} for n in range(1, table_n + 1)]}
        _emit(fmt, out, data, _frame(rows))


@cli.command("asymptotics", help="Leading asymptotic estimate of B(N) or p(N), compared with the exact value.")
@click.argument("n", type=click.IntRange(min=1))
@click.option(
    "--method",
    type=click.Choice(sorted(_METHODS), case_sensitive=False),
    default="bell",
    show_default=True,
    help="`bell` for B(N), `hr` (Hardy-Ramanujan) for p(N).",
)
@click.option("--series", is_flag=True, help="Emit plot data: exact and asymptotic ln-values for 1..N.")
@click.option("--cap", type=click.IntRange(min=0), default=None, help="Largest N for which exact values are computed.")
@_output_options
@_handle_errors
def cmd_asymptotics(n: int, method: str, series: bool, cap: int | None, fmt: str, out: Path | None):
    limits = _resolve_limits(None, max_bell_n=cap, max_partition_n=cap)
    if series:
        rows = [
            {key: _rounded(value) if isinstance(value, float) else value for key, value in row.items()}
            for row in growth_series(n, limits=limits)
        ]
        _emit(fmt, out, {"rows": rows}, _frame(rows))
        return
    method = _METHODS[method.lower()]
    estimate = asymptotic(n, method)
    try:
        exact = exact_count(n, method, limits=limits)
    except CapExceededError as e:
        _LOG.info(f"exact value omitted: {e}")
        exact = None
    data = {
        "n": n,
        "method": method.value,
        "estimate": _rounded(estimate.value),
        "ln_estimate": _rounded(estimate.log_value),
        "exact": exact,
        "ratio": _rounded(asymptotic_ratio(estimate, exact)) if exact is not None else None,
    }
    _emit(fmt, out, data, _key_values(data))


@cli.command("spectrum", help="Number the arrangements by their lowest thresholds (g), or query the open ones.")
@_config_options
@click.option(
    "--at-energy",
    type=float,
    default=None,
    help="List the arrangements open at this energy; a threshold equal to the energy counts as open.",
)
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Largest admissible number of arrangements.")
@click.option("--n-jobs", type=int, default=1, show_default=True, help="Parallel workers for enumeration.")
@_output_options
@_handle_errors
def cmd_spectrum(config_path, config_option, at_energy: float | None, cap: int | None, n_jobs: int, fmt: str, out):
    doc = _load_config(config_path, config_option)
    limits = _resolve_limits(doc, max_arrangements=cap)
    spec = SystemSpec.from_config(doc)
    catalog = EnergyCatalog.from_config(doc)
    layout = assign_g(enumerate_arrangements(spec, n_jobs=n_jobs, limits=limits), catalog, limits=limits)
    if at_energy is not None:
        count, opened = layout.open_arrangements(at_energy)
        records = [
            {"g": e.g, "arrangement": e.notation, "lowest_threshold": round_energy(e.lowest_threshold)}
            for e in layout.continuum[:count]
        ]
        data = {"energy": at_energy, "open": count, "arrangements": [format_arrangement(a) for a in opened]}
        table = f"open arrangements: {count}" + (f"\n{_frame(records)}" if records else "")
        _emit(fmt, out, data, table)
        return
    document = export_spectrum(layout, catalog)
    records = [
        {
            "g": r["g"],
            "arrangement": r["arrangement"],
            "lowest_threshold": "" if r["lowest_threshold"] is None else r["lowest_threshold"],
            "ladder": _ladder_text(r["ladder"]),
            "bound_levels": ", ".join(f"{e:.12g}" for e in r["bound_levels"]),
        }
        for r in document["arrangements"]
    ]
    _emit(fmt, out, document, _frame(records))


@cli.command("separability", help="Subsystem mass geometry, confinement margins and the separable-limit residual.")
@_config_options
@click.option(
    "--scale-sweep",
    "n_scales",
    type=click.IntRange(min=2, max=len(DEFAULT_SCALES)),
    default=None,
    help="Number of scales 2^-4, 2^-5, ... at which to evaluate the residual and fit its rate.",
)
@_output_options
@_handle_errors
def cmd_separability(config_path, config_option, n_scales: int | None, fmt: str, out: Path | None):
    doc = _load_config(config_path, config_option)
    if doc.separability is None:
        raise ValueError("the configuration document has no separability section")
    config = MassedConfiguration.from_config(doc.separability, rng=make_rng())
    geometry = subsystem_geometry(config)
    confinement = confinement_check(geometry)
    data: dict[str, Any] = {
        "n_particles": config.n_particles,
        "subsystem": list(config.subsystem),
        "center": [round_energy(x) for x in geometry.center],
        "total_mass": round_energy(geometry.total_mass),
        "reduced_mass": round_energy(geometry.reduced_mass),
        "hyperradius": round_energy(geometry.hyperradius),
        "emergent_length": None if geometry.emergent_length is None else round_energy(geometry.emergent_length),
        "confinement": {
            "holds": confinement.holds,
            "margins": [round_energy(x) for x in confinement.margins],
        },
    }
    table = _key_values(
        {
            "reduced_mass": data["reduced_mass"],
            "hyperradius": data["hyperradius"],
            "center": data["center"],
            "total_mass": data["total_mass"],
            "emergent_length": data["emergent_length"],
            "confined": confinement.holds,
            "margins": data["confinement"]["margins"],
        }
    )
    if n_scales is not None:
        if not doc.separability.potentials:
            raise ValueError("a scale sweep needs at least one entry in separability.potentials")
        potentials = PotentialTable.from_configs(doc.separability.potentials)
        sweep = scale_sweep(config, potentials, DEFAULT_SCALES[:n_scales])
        rows = [
            {
                "scale": r.scale,
                "hyperradius": round_energy(r.hyperradius),
                "vtilde": round_energy(r.vtilde),
                "vlimit": round_energy(r.vlimit),
                "residual": round_energy(r.residual),
            }
            for r in sweep.records
        ]
        slope = None if sweep.slope is None else round_energy(sweep.slope)
        data["sweep"] = {"rows": rows, "slope": slope, "expected_order": sweep.expected_order}
        table += f"\n\n{_frame(rows)}\n\nslope q = {slope} (expected >= {sweep.expected_order})"
    _emit(fmt, out, data, table)
