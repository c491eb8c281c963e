"""Lifetime windows, vintage domains and their cross-checks."""

from __future__ import annotations

import numpy as np

from conftest import make_single_asset_scenario


class TestActiveWindow:
    def test_long_lifetime_keeps_old_vintages(self):
        sc = make_single_asset_scenario((2030, 2040), lifetime=20, investable=(2030, 2040))
        # 2040 - 20 + 1 = 2021 <= 2030, so both years are live
        assert sc.active_window("gen", 2040) == (2030, 2040)

    def test_short_lifetime_drops_older_years(self):
        sc = make_single_asset_scenario((2030, 2040), lifetime=5, investable=(2030, 2040))
        assert sc.active_window("gen", 2040) == (2040,)

    def test_thirty_year_lifetime_covers_three_decades(self):
        sc = make_single_asset_scenario(
            (2030, 2040, 2050), lifetime=30, investable=(2030, 2040, 2050)
        )
        # bound: 2050 - 30 + 1 = 2021 <= i <= 2050
        assert sc.active_window("gen", 2050) == (2030, 2040, 2050)

    def test_year_is_always_inside_its_own_window(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            years = tuple(sorted(rng.choice(range(2020, 2080), size=4, replace=False)))
            lifetime = int(rng.integers(1, 60))
            sc = make_single_asset_scenario(years, lifetime=lifetime, investable=years)
            for year in years:
                window = sc.active_window("gen", year)
                assert year in window
                assert set(window) <= set(years)


class TestDomainTriples:
    def test_three_decades_lifetime_thirty(self):
        sc = make_single_asset_scenario(
            (2030, 2040, 2050), lifetime=30, investable=(2030, 2040, 2050)
        )
        assert sc.domain_triples("gen") == (
            (2030, 2030),
            (2040, 2030),
            (2040, 2040),
            (2050, 2030),
            (2050, 2040),
            (2050, 2050),
        )

    def test_lifetime_one_collapses_to_diagonal(self):
        sc = make_single_asset_scenario(
            (2030, 2040, 2050), lifetime=1, investable=(2030, 2040, 2050)
        )
        assert sc.domain_triples("gen") == ((2030, 2030), (2040, 2040), (2050, 2050))

    def test_lifetime_fifteen_excludes_expired_pair(self):
        # hand enumeration of v <= y < v + 15:
        #   v=2030: years 2030, 2040; v=2040: 2040, 2050; v=2050: 2050
        # (2050, 2030) is excluded because 2050 - 2030 = 20 >= 15
        sc = make_single_asset_scenario(
            (2030, 2040, 2050), lifetime=15, investable=(2030, 2040, 2050)
        )
        assert sc.domain_triples("gen") == (
            (2030, 2030),
            (2040, 2030),
            (2040, 2040),
            (2050, 2040),
            (2050, 2050),
        )

    def test_initial_vintages_join_the_domain(self, toy1):
        assert toy1.vintages("wind") == (2021, 2030, 2040)
        assert toy1.domain_triples("wind") == (
            (2030, 2021),
            (2030, 2030),
            (2040, 2021),
            (2040, 2030),
            (2040, 2040),
        )

    def test_triples_match_window_brute_force(self, scenarios):
        """Membership agrees with enumerating all (year, vintage) pairs."""
        for scenario in scenarios.values():
            for asset in scenario.producers():
                triples = set(scenario.domain_triples(asset.name))
                for year in scenario.years:
                    window = set(scenario.active_window(asset.name, year))
                    for vintage in scenario.vintages(asset.name):
                        lifetime = asset.technical_lifetime
                        expected = vintage <= year < vintage + lifetime
                        assert ((year, vintage) in triples) == expected
                        # milestone vintages in the domain sit inside the window
                        if expected and vintage in scenario.years:
                            assert vintage in window
