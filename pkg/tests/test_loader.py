"""CSV ingestion: happy paths, every error class, determinism."""

from __future__ import annotations

import shutil
import warnings

import pytest

from capplan.errors import (
    BrokenReference,
    InvariantViolation,
    MalformedRow,
    MissingFile,
    ScenarioWarning,
)
from capplan.loader import load_scenario
from conftest import fixture_path


def copy_fixture(tmp_path, name: str):
    target = tmp_path / name
    shutil.copytree(fixture_path(name), target)
    return target


def edit(path, old: str, new: str):
    path.write_text(path.read_text().replace(old, new))


class TestHappyPath:
    def test_toy1_shape(self, toy1):
        assert toy1.years == (2030, 2040)
        assert len(toy1.flows) == 1
        assert toy1.assets["wind"].is_producer
        assert not toy1.assets["city"].is_producer
        assert toy1.assets["wind"].investable_years == (2030, 2040)
        assert toy1.initial_units("wind", 2040) == 1.0

    def test_blank_capacity_defaults_to_unit_capacity(self, toy1):
        assert toy1.capacity_in_year("wind", 2030) == 100.0

    def test_vintage_fixed_cost_falls_back_to_year_cost(self, toy1):
        # no explicit vintage fixed cost in the fixture
        assert toy1.vintage_fixed_cost("wind", 2030, 2021) == 10.0

    def test_loading_twice_is_deterministic(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            first = load_scenario(fixture_path("toy1"))
            second = load_scenario(fixture_path("toy1"))
        assert first == second

    def test_optional_vintage_table_may_be_absent(self, wind3):
        assert wind3.asset_vintage == {}


class TestErrors:
    def test_missing_directory(self, tmp_path):
        with pytest.raises(MissingFile):
            load_scenario(tmp_path / "nope")

    def test_missing_assets_file(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        (target / "assets.csv").unlink()
        with pytest.raises(MissingFile, match="assets.csv"):
            load_scenario(target)

    def test_profile_above_one_violates_invariant(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "profiles.csv", "wind,,2030,1,1,1.0", "wind,,2030,1,1,1.2")
        with pytest.raises(InvariantViolation, match=r"availability in \[0,1\]"):
            load_scenario(target)

    def test_non_numeric_cell_names_file_line_column(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "asset_year.csv", "wind,2030,65", "wind,2030,abc")
        with pytest.raises(MalformedRow, match="asset_year.csv:2 column 'investment_cost'"):
            load_scenario(target)

    def test_missing_header_column(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "years.csv", "year", "years")
        with pytest.raises(MalformedRow, match="missing column"):
            load_scenario(target)

    def test_unknown_asset_reference(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "flows.csv", "f1,wind,city", "f1,wynd,city")
        with pytest.raises(BrokenReference, match="wynd"):
            load_scenario(target)

    def test_years_must_strictly_increase(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        (target / "years.csv").write_text("year\n2040\n2030\n")
        with pytest.raises(InvariantViolation, match="strictly increasing"):
            load_scenario(target)

    def test_consumer_cannot_be_investable(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(
            target / "assets.csv",
            "city,consumer,none,1,0",
            "city,consumer,simple,1,0",
        )
        with pytest.raises(InvariantViolation, match="consumer"):
            load_scenario(target)

    def test_investable_method_needs_investable_years(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "asset_year.csv", "wind,2030,65,10,,1,1", "wind,2030,65,10,,1,0")
        edit(target / "asset_year.csv", "wind,2040,60,10,,1,1", "wind,2040,60,10,,1,0")
        with pytest.raises(InvariantViolation, match="no investable years"):
            load_scenario(target)

    def test_missing_profile_entry(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "profiles.csv", "wind,,2040,1,1,1.0\n", "")
        with pytest.raises(InvariantViolation, match="missing availability profile"):
            load_scenario(target)

    def test_flow_needs_producer_in_active_year(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "asset_year.csv", "wind,2040,60,10,,1,1\n", "")
        with pytest.raises(InvariantViolation, match="not a producer in that year"):
            load_scenario(target)

    def test_vintage_row_outside_lifetime_window(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        # vintage 2021, lifetime 20: dead from 2041 on, so a 2040+ row is the
        # last valid one; shift the vintage to make 2040 fall outside
        edit(target / "asset_vintage.csv", "wind,2040,2021,,1", "wind,2040,2019,,1")
        with pytest.raises(InvariantViolation):
            load_scenario(target)

    def test_negative_demand_rejected(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "demand.csv", "city,2030,1,1,150", "city,2030,1,1,-5")
        with pytest.raises(InvariantViolation, match="demand"):
            load_scenario(target)

    def test_duplicate_asset_year_row(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        with open(target / "asset_year.csv", "a") as handle:
            handle.write("wind,2030,65,10,,1,1\n")
        with pytest.raises(InvariantViolation, match="duplicate"):
            load_scenario(target)


class TestWarnings:
    def test_unattributed_initial_units_warn(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        (target / "asset_vintage.csv").unlink()
        with pytest.warns(ScenarioWarning, match="no vintage attribution"):
            load_scenario(target)

    def test_growing_vintage_initials_warn(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "asset_vintage.csv", "wind,2040,2021,,1", "wind,2040,2021,,2")
        with pytest.warns(ScenarioWarning, match="increase"):
            load_scenario(target)

    def test_vintage_totals_mismatch_warns(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        edit(target / "asset_vintage.csv", "wind,2030,2021,,1", "wind,2030,2021,,0.5")
        with pytest.warns(ScenarioWarning, match="do not sum"):
            load_scenario(target)

    def test_demand_without_inflow_edge_warns(self, tmp_path):
        target = copy_fixture(tmp_path, "toy1")
        (target / "flow_year.csv").write_text("flow,year,variable_cost\nf1,2030,0.25\n")
        with pytest.warns(ScenarioWarning, match="no active inflow edge"):
            load_scenario(target)
