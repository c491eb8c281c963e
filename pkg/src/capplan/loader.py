"""CSV ingestion for scenario directories.

A scenario directory holds one CSV file per table (UTF-8, header row,
``.`` decimal separator).  ``load_scenario`` reads them all, resolves
cross-references and enforces every data invariant before returning an
immutable :class:`~capplan.scenario.Scenario`.  Errors identify the file,
line and column that triggered them; non-fatal issues raise
:class:`~capplan.errors.ScenarioWarning`.
"""

from __future__ import annotations

import csv
import warnings
from pathlib import Path

from .errors import (
    BrokenReference,
    InvariantViolation,
    MalformedRow,
    MissingFile,
    ScenarioWarning,
)
from .scenario import (
    ASSET_KINDS,
    CONSUMER,
    INVESTMENT_METHODS,
    METHOD_NONE,
    Asset,
    AssetVintageParams,
    AssetYearParams,
    FlowEdge,
    RepPeriod,
    Scenario,
    TimeBlock,
)

REQUIRED_FILES = {
    "years.csv": ("year",),
    "assets.csv": ("name", "kind", "investment_method", "technical_lifetime", "unit_capacity"),
    "asset_year.csv": (
        "asset",
        "year",
        "investment_cost",
        "fixed_cost",
        "capacity",
        "initial_units",
        "investable",
    ),
    "rep_periods.csv": ("year", "rep_period", "weight"),
    "time_blocks.csv": ("year", "rep_period", "block", "duration"),
    "flows.csv": ("flow", "from_asset", "to_asset"),
    "flow_year.csv": ("flow", "year", "variable_cost"),
    "profiles.csv": ("asset", "vintage", "year", "rep_period", "block", "value"),
    "demand.csv": ("asset", "year", "rep_period", "block", "value"),
}

OPTIONAL_FILES = {
    "asset_vintage.csv": ("asset", "year", "vintage", "fixed_cost", "initial_units"),
}


def _read_rows(directory: Path, filename: str, columns: tuple[str, ...], required: bool):
    path = directory / filename
    if not path.is_file():
        if required:
            raise MissingFile(f"{filename} not found in {directory}")
        return None
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for col in columns:
            if col not in header:
                raise MalformedRow(filename, 1, col, "missing column in header")
        rows = []
        for row in reader:
            line = reader.line_num
            if None in row.values() or row.get(None) is not None:
                raise MalformedRow(filename, line, "*", "wrong number of fields")
            rows.append((line, row))
    return rows


def _parse_float(filename: str, line: int, column: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise MalformedRow(filename, line, column, f"expected a number, got {raw!r}") from None


def _parse_int(filename: str, line: int, column: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise MalformedRow(filename, line, column, f"expected an integer, got {raw!r}") from None


def _parse_choice(filename: str, line: int, column: str, raw: str, choices: tuple[str, ...]) -> str:
    value = raw.strip()
    if value not in choices:
        raise MalformedRow(filename, line, column, f"expected one of {choices}, got {raw!r}")
    return value


def load_scenario(directory: str | Path) -> Scenario:
    """Load and validate one scenario directory."""
    directory = Path(directory)
    if not directory.is_dir():
        raise MissingFile(f"scenario directory {directory} does not exist")

    tables = {
        name: _read_rows(directory, name, cols, required=True)
        for name, cols in REQUIRED_FILES.items()
    }
    for name, cols in OPTIONAL_FILES.items():
        tables[name] = _read_rows(directory, name, cols, required=False)

    years = _load_years(tables["years.csv"])
    year_set = set(years)

    raw_assets = _load_raw_assets(tables["assets.csv"])
    asset_year, investable = _load_asset_year(tables["asset_year.csv"], raw_assets, year_set)

    assets: dict[str, Asset] = {}
    for name, (kind, method, lifetime, unit_capacity) in raw_assets.items():
        inv_years = tuple(sorted(investable.get(name, set())))
        if method == METHOD_NONE and inv_years:
            raise InvariantViolation(
                f"asset {name} has investment_method none but investable years {inv_years}"
            )
        if method != METHOD_NONE and not inv_years:
            raise InvariantViolation(
                f"asset {name} has investment_method {method} but no investable years"
            )
        assets[name] = Asset(name, kind, method, lifetime, unit_capacity, inv_years)

    asset_vintage = _load_asset_vintage(tables["asset_vintage.csv"], assets, asset_year, year_set)
    rep_periods = _load_rep_periods(tables["rep_periods.csv"], tables["time_blocks.csv"], years)
    flows, flow_cost = _load_flows(
        tables["flows.csv"], tables["flow_year.csv"], assets, asset_year, year_set
    )

    scenario = Scenario(
        name=directory.name,
        years=years,
        assets=assets,
        asset_year=asset_year,
        asset_vintage=asset_vintage,
        rep_periods=rep_periods,
        flows=flows,
        flow_cost=flow_cost,
    )
    _load_profiles(tables["profiles.csv"], scenario)
    _load_demand(tables["demand.csv"], scenario)
    _check_completeness(scenario)
    return scenario


def _load_years(rows) -> tuple[int, ...]:
    years: list[int] = []
    for line, row in rows:
        year = _parse_int("years.csv", line, "year", row["year"])
        if years and year <= years[-1]:
            raise InvariantViolation("milestone years must be strictly increasing and unique")
        years.append(year)
    if not years:
        raise InvariantViolation("a scenario needs at least one milestone year")
    return tuple(years)


def _load_raw_assets(rows) -> dict[str, tuple[str, str, int, float]]:
    raw: dict[str, tuple[str, str, int, float]] = {}
    for line, row in rows:
        name = row["name"].strip()
        if not name:
            raise MalformedRow("assets.csv", line, "name", "empty asset name")
        if name in raw:
            raise InvariantViolation(f"asset name {name} is not unique")
        kind = _parse_choice("assets.csv", line, "kind", row["kind"], ASSET_KINDS)
        method = _parse_choice(
            "assets.csv", line, "investment_method", row["investment_method"], INVESTMENT_METHODS
        )
        lifetime = _parse_int("assets.csv", line, "technical_lifetime", row["technical_lifetime"])
        unit_capacity = _parse_float("assets.csv", line, "unit_capacity", row["unit_capacity"])
        if lifetime < 1:
            raise InvariantViolation(f"asset {name}: technical_lifetime must be >= 1")
        if kind == CONSUMER and method != METHOD_NONE:
            raise InvariantViolation(f"asset {name}: a consumer must have investment_method none")
        if kind != CONSUMER and unit_capacity <= 0:
            raise InvariantViolation(f"asset {name}: unit_capacity must be > 0 for producers")
        raw[name] = (kind, method, lifetime, unit_capacity)
    return raw


def _load_asset_year(rows, raw_assets, year_set):
    asset_year: dict[tuple[str, int], AssetYearParams] = {}
    investable: dict[str, set[int]] = {}
    for line, row in rows:
        asset = row["asset"].strip()
        if asset not in raw_assets:
            raise BrokenReference(f"asset_year.csv:{line}: unknown asset {asset!r}")
        year = _parse_int("asset_year.csv", line, "year", row["year"])
        if year not in year_set:
            raise BrokenReference(f"asset_year.csv:{line}: {year} is not a milestone year")
        if (asset, year) in asset_year:
            raise InvariantViolation(f"duplicate asset_year row for ({asset}, {year})")
        kind, _method, _lifetime, unit_capacity = raw_assets[asset]
        investment_cost = _parse_float("asset_year.csv", line, "investment_cost", row["investment_cost"])
        fixed_cost = _parse_float("asset_year.csv", line, "fixed_cost", row["fixed_cost"])
        capacity_raw = row["capacity"].strip()
        capacity = (
            unit_capacity
            if capacity_raw == ""
            else _parse_float("asset_year.csv", line, "capacity", capacity_raw)
        )
        initial_units = _parse_float("asset_year.csv", line, "initial_units", row["initial_units"])
        investable_flag = _parse_choice(
            "asset_year.csv", line, "investable", row["investable"], ("0", "1")
        )
        if investment_cost < 0 or fixed_cost < 0:
            raise InvariantViolation(f"asset {asset} year {year}: costs must be >= 0")
        if initial_units < 0:
            raise InvariantViolation(f"asset {asset} year {year}: initial_units must be >= 0")
        if kind != CONSUMER and capacity <= 0:
            raise InvariantViolation(f"asset {asset} year {year}: capacity must be > 0 for producers")
        asset_year[(asset, year)] = AssetYearParams(
            asset, year, investment_cost, fixed_cost, capacity, initial_units
        )
        if investable_flag == "1":
            investable.setdefault(asset, set()).add(year)
    return asset_year, investable


def _load_asset_vintage(rows, assets, asset_year, year_set):
    asset_vintage: dict[tuple[str, int, int], AssetVintageParams] = {}
    if rows is None:
        rows = []
    parsed = []
    initial_vintages: dict[str, set[int]] = {}
    for line, row in rows:
        asset = row["asset"].strip()
        if asset not in assets:
            raise BrokenReference(f"asset_vintage.csv:{line}: unknown asset {asset!r}")
        year = _parse_int("asset_vintage.csv", line, "year", row["year"])
        if year not in year_set:
            raise BrokenReference(f"asset_vintage.csv:{line}: {year} is not a milestone year")
        vintage = _parse_int("asset_vintage.csv", line, "vintage", row["vintage"])
        fixed_raw = row["fixed_cost"].strip()
        fixed_cost = (
            None if fixed_raw == "" else _parse_float("asset_vintage.csv", line, "fixed_cost", fixed_raw)
        )
        initial_units = _parse_float(
            "asset_vintage.csv", line, "initial_units", row["initial_units"]
        )
        if fixed_cost is not None and fixed_cost < 0:
            raise InvariantViolation(f"asset {asset} vintage {vintage}: fixed_cost must be >= 0")
        if initial_units < 0:
            raise InvariantViolation(f"asset {asset} vintage {vintage}: initial_units must be >= 0")
        if initial_units > 0:
            initial_vintages.setdefault(asset, set()).add(vintage)
        parsed.append((line, asset, year, vintage, fixed_cost, initial_units))

    for line, asset, year, vintage, fixed_cost, initial_units in parsed:
        a = assets[asset]
        legitimate = set(a.investable_years) | initial_vintages.get(asset, set())
        if vintage not in legitimate:
            raise InvariantViolation(
                f"asset_vintage.csv:{line}: vintage {vintage} of {asset} is neither investable "
                "nor backed by initial units"
            )
        if not vintage <= year < vintage + a.technical_lifetime:
            raise InvariantViolation(
                f"asset_vintage.csv:{line}: ({asset}, {year}, {vintage}) is outside the "
                "technical-lifetime window"
            )
        if (asset, year, vintage) in asset_vintage:
            raise InvariantViolation(f"duplicate asset_vintage row for ({asset}, {year}, {vintage})")
        asset_vintage[(asset, year, vintage)] = AssetVintageParams(
            asset, year, vintage, fixed_cost, initial_units
        )

    _warn_on_vintage_inconsistencies(assets, asset_year, asset_vintage)
    return asset_vintage


def _warn_on_vintage_inconsistencies(assets, asset_year, asset_vintage):
    years_by_asset: dict[str, list[int]] = {}
    for (asset, year), params in asset_year.items():
        years_by_asset.setdefault(asset, []).append(year)

    for name, asset in assets.items():
        if not asset.is_producer:
            continue
        has_vintage_rows = any(key[0] == name for key in asset_vintage)
        simple_totals = {
            year: asset_year[(name, year)].initial_units for year in years_by_asset.get(name, [])
        }
        if any(v > 0 for v in simple_totals.values()) and not has_vintage_rows:
            warnings.warn(
                f"asset {name} has initial units in asset_year.csv but no vintage attribution; "
                "vintage and compact builds will see zero initial units",
                ScenarioWarning,
                stacklevel=3,
            )
            continue
        if not has_vintage_rows:
            continue
        # trajectory of one vintage may shrink over time (retirement) but not grow
        per_vintage: dict[int, list[tuple[int, float]]] = {}
        for (a, year, vintage), params in asset_vintage.items():
            if a == name:
                per_vintage.setdefault(vintage, []).append((year, params.initial_units))
        for vintage, series in per_vintage.items():
            series.sort()
            for (y0, u0), (y1, u1) in zip(series, series[1:]):
                if u1 > u0:
                    warnings.warn(
                        f"asset {name} vintage {vintage}: initial units increase from "
                        f"{u0} in {y0} to {u1} in {y1}",
                        ScenarioWarning,
                        stacklevel=3,
                    )
        for year, total in simple_totals.items():
            vintage_total = sum(
                params.initial_units
                for (a, y, _v), params in asset_vintage.items()
                if a == name and y == year
            )
            if abs(vintage_total - total) > 1e-9:
                warnings.warn(
                    f"asset {name} year {year}: vintage-attributed initial units "
                    f"({vintage_total}) do not sum to the year total ({total}); "
                    "methods will diverge",
                    ScenarioWarning,
                    stacklevel=3,
                )


def _load_rep_periods(rp_rows, block_rows, years):
    weights: dict[tuple[int, int], float] = {}
    for line, row in rp_rows:
        year = _parse_int("rep_periods.csv", line, "year", row["year"])
        if year not in set(years):
            raise BrokenReference(f"rep_periods.csv:{line}: {year} is not a milestone year")
        rp = _parse_int("rep_periods.csv", line, "rep_period", row["rep_period"])
        weight = _parse_float("rep_periods.csv", line, "weight", row["weight"])
        if weight < 0:
            raise InvariantViolation(f"rep period ({year}, {rp}): weight must be >= 0")
        if (year, rp) in weights:
            raise InvariantViolation(f"duplicate rep period ({year}, {rp})")
        weights[(year, rp)] = weight

    blocks: dict[tuple[int, int], list[TimeBlock]] = {key: [] for key in weights}
    for line, row in block_rows:
        year = _parse_int("time_blocks.csv", line, "year", row["year"])
        rp = _parse_int("time_blocks.csv", line, "rep_period", row["rep_period"])
        if (year, rp) not in weights:
            raise BrokenReference(f"time_blocks.csv:{line}: unknown rep period ({year}, {rp})")
        block = _parse_int("time_blocks.csv", line, "block", row["block"])
        duration = _parse_float("time_blocks.csv", line, "duration", row["duration"])
        if duration <= 0:
            raise InvariantViolation(f"time block ({year}, {rp}, {block}): duration must be > 0")
        if any(b.id == block for b in blocks[(year, rp)]):
            raise InvariantViolation(f"duplicate time block ({year}, {rp}, {block})")
        blocks[(year, rp)].append(TimeBlock(block, duration))

    rep_periods: dict[int, tuple[RepPeriod, ...]] = {}
    for (year, rp), weight in weights.items():
        if not blocks[(year, rp)]:
            raise InvariantViolation(f"rep period ({year}, {rp}) has no time blocks")
        rep_periods.setdefault(year, ())
        rep_periods[year] = rep_periods[year] + (
            RepPeriod(year, rp, weight, tuple(blocks[(year, rp)])),
        )
    for year in years:
        if year not in rep_periods:
            raise InvariantViolation(f"milestone year {year} has no representative periods")
    return rep_periods


def _load_flows(flow_rows, cost_rows, assets, asset_year, year_set):
    flows: dict[str, FlowEdge] = {}
    for line, row in flow_rows:
        fid = row["flow"].strip()
        if not fid:
            raise MalformedRow("flows.csv", line, "flow", "empty flow id")
        if fid in flows:
            raise InvariantViolation(f"flow id {fid} is not unique")
        src = row["from_asset"].strip()
        dst = row["to_asset"].strip()
        for name in (src, dst):
            if name not in assets:
                raise BrokenReference(f"flows.csv:{line}: unknown asset {name!r}")
        if not assets[src].is_producer:
            raise InvariantViolation(f"flow {fid}: from_asset {src} must be a producer")
        if assets[dst].is_producer:
            raise InvariantViolation(f"flow {fid}: to_asset {dst} must be a consumer")
        flows[fid] = FlowEdge(fid, src, dst)

    flow_cost: dict[tuple[str, int], float] = {}
    for line, row in cost_rows:
        fid = row["flow"].strip()
        if fid not in flows:
            raise BrokenReference(f"flow_year.csv:{line}: unknown flow {fid!r}")
        year = _parse_int("flow_year.csv", line, "year", row["year"])
        if year not in year_set:
            raise BrokenReference(f"flow_year.csv:{line}: {year} is not a milestone year")
        if (fid, year) in flow_cost:
            raise InvariantViolation(f"duplicate flow_year row for ({fid}, {year})")
        src = flows[fid].from_asset
        if (src, year) not in asset_year:
            raise InvariantViolation(
                f"flow {fid} is active in {year} but {src} is not a producer in that year"
            )
        flow_cost[(fid, year)] = _parse_float(
            "flow_year.csv", line, "variable_cost", row["variable_cost"]
        )
    return flows, flow_cost


def _load_profiles(rows, scenario: Scenario):
    time_index = {
        year: {(rp.id, b.id) for rp in rps for b in rp.blocks}
        for year, rps in scenario.rep_periods.items()
    }
    for line, row in rows:
        asset = row["asset"].strip()
        if asset not in scenario.assets:
            raise BrokenReference(f"profiles.csv:{line}: unknown asset {asset!r}")
        if not scenario.assets[asset].is_producer:
            raise InvariantViolation(f"profiles.csv:{line}: {asset} is not a producer")
        year = _parse_int("profiles.csv", line, "year", row["year"])
        rp = _parse_int("profiles.csv", line, "rep_period", row["rep_period"])
        block = _parse_int("profiles.csv", line, "block", row["block"])
        if year not in time_index or (rp, block) not in time_index[year]:
            raise BrokenReference(
                f"profiles.csv:{line}: unknown time step ({year}, {rp}, {block})"
            )
        value = _parse_float("profiles.csv", line, "value", row["value"])
        if not 0.0 <= value <= 1.0:
            raise InvariantViolation(
                f"profiles.csv:{line}: availability in [0,1] violated by value {value}"
            )
        vintage_raw = row["vintage"].strip()
        if vintage_raw == "":
            key = (asset, year, rp, block)
            if key in scenario.profile:
                raise InvariantViolation(f"duplicate profile row for {key}")
            scenario.profile[key] = value
        else:
            vintage = _parse_int("profiles.csv", line, "vintage", vintage_raw)
            if vintage not in scenario.vintages(asset):
                raise BrokenReference(
                    f"profiles.csv:{line}: {asset} has no vintage {vintage}"
                )
            vkey = (asset, vintage, year, rp, block)
            if vkey in scenario.vintage_profile:
                raise InvariantViolation(f"duplicate profile row for {vkey}")
            scenario.vintage_profile[vkey] = value


def _load_demand(rows, scenario: Scenario):
    time_index = {
        year: {(rp.id, b.id) for rp in rps for b in rp.blocks}
        for year, rps in scenario.rep_periods.items()
    }
    for line, row in rows:
        asset = row["asset"].strip()
        if asset not in scenario.assets:
            raise BrokenReference(f"demand.csv:{line}: unknown asset {asset!r}")
        if scenario.assets[asset].is_producer:
            raise InvariantViolation(f"demand.csv:{line}: {asset} is not a consumer")
        year = _parse_int("demand.csv", line, "year", row["year"])
        rp = _parse_int("demand.csv", line, "rep_period", row["rep_period"])
        block = _parse_int("demand.csv", line, "block", row["block"])
        if year not in time_index or (rp, block) not in time_index[year]:
            raise BrokenReference(f"demand.csv:{line}: unknown time step ({year}, {rp}, {block})")
        value = _parse_float("demand.csv", line, "value", row["value"])
        if value < 0:
            raise InvariantViolation(f"demand.csv:{line}: demand must be >= 0")
        key = (asset, year, rp, block)
        if key in scenario.demand:
            raise InvariantViolation(f"duplicate demand row for {key}")
        scenario.demand[key] = value


def _check_completeness(scenario: Scenario):
    # every producer-year needs a vintage-less profile value on every time step
    for asset in scenario.producers():
        for year in scenario.years:
            if not scenario.is_producer_in(asset.name, year):
                continue
            for rp, block, _w, _d in scenario.time_steps(year):
                if (asset.name, year, rp, block) not in scenario.profile:
                    raise InvariantViolation(
                        f"missing availability profile for {asset.name} at ({year}, {rp}, {block})"
                    )
    # demand without a connected, active inflow edge cannot be met
    for (consumer, year, rp, block), value in scenario.demand.items():
        if value > 0 and not scenario.in_edges(consumer, year):
            warnings.warn(
                f"consumer {consumer} has demand in {year} but no active inflow edge",
                ScenarioWarning,
                stacklevel=2,
            )
