"""Domain model for a multi-year planning scenario.

A :class:`Scenario` is an immutable snapshot of one problem instance:
milestone years, assets with per-year and per-vintage parameters,
representative periods with time blocks, flow edges, availability
profiles and demands.  Formulation builders only read from it.

Unit conventions: capacities in MW per unit, durations in hours,
demands in MW (average over a block), costs in currency per MW,
per MW-year or per MWh.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PRODUCER = "producer"
CONSUMER = "consumer"

METHOD_NONE = "none"
METHOD_SIMPLE = "simple"
METHOD_COMPACT = "compact"

ASSET_KINDS = (PRODUCER, CONSUMER)
INVESTMENT_METHODS = (METHOD_NONE, METHOD_SIMPLE, METHOD_COMPACT)


@dataclass(frozen=True)
class Asset:
    name: str
    kind: str
    investment_method: str
    technical_lifetime: int
    unit_capacity: float
    investable_years: tuple[int, ...]

    @property
    def is_producer(self) -> bool:
        return self.kind == PRODUCER

    @property
    def is_investable(self) -> bool:
        return self.investment_method != METHOD_NONE


@dataclass(frozen=True)
class AssetYearParams:
    asset: str
    year: int
    investment_cost: float
    fixed_cost: float
    capacity: float
    initial_units: float


@dataclass(frozen=True)
class AssetVintageParams:
    asset: str
    year: int
    vintage: int
    # None falls back to the year-indexed fixed cost of the operational year.
    fixed_cost: float | None
    initial_units: float


@dataclass(frozen=True)
class TimeBlock:
    id: int
    duration: float


@dataclass(frozen=True)
class RepPeriod:
    year: int
    id: int
    weight: float
    blocks: tuple[TimeBlock, ...]


@dataclass(frozen=True)
class FlowEdge:
    id: str
    from_asset: str
    to_asset: str


@dataclass
class Scenario:
    """One fully cross-referenced problem instance; treat as read-only."""

    name: str
    years: tuple[int, ...]
    assets: dict[str, Asset]
    asset_year: dict[tuple[str, int], AssetYearParams]
    asset_vintage: dict[tuple[str, int, int], AssetVintageParams]
    rep_periods: dict[int, tuple[RepPeriod, ...]]
    flows: dict[str, FlowEdge]
    flow_cost: dict[tuple[str, int], float]
    # availability profiles, values in [0, 1]
    profile: dict[tuple[str, int, int, int], float] = field(default_factory=dict)
    vintage_profile: dict[tuple[str, int, int, int, int], float] = field(default_factory=dict)
    demand: dict[tuple[str, int, int, int], float] = field(default_factory=dict)

    # -- membership helpers ---------------------------------------------

    def is_producer_in(self, asset: str, year: int) -> bool:
        """An asset operates as producer in a year iff it is a producer and
        has a parameter row for that year."""
        a = self.assets[asset]
        return a.is_producer and (asset, year) in self.asset_year

    def producers(self) -> list[Asset]:
        return [a for a in self.assets.values() if a.is_producer]

    def consumers(self) -> list[Asset]:
        return [a for a in self.assets.values() if not a.is_producer]

    def tracked_producers(self, allow_compact: bool = True) -> list[Asset]:
        """Producers whose available units are tracked by a formulation.

        Covers both investable assets and operation-only assets (method
        ``none``, capacity from initial units alone).
        """
        out = []
        for a in self.producers():
            if a.investment_method == METHOD_COMPACT and not allow_compact:
                continue
            out.append(a)
        return out

    # -- parameter access -------------------------------------------------

    def unit_capacity(self, asset: str) -> float:
        return self.assets[asset].unit_capacity

    def capacity_in_year(self, asset: str, year: int) -> float:
        params = self.asset_year.get((asset, year))
        if params is None:
            return 0.0
        return params.capacity

    def initial_units(self, asset: str, year: int) -> float:
        params = self.asset_year.get((asset, year))
        return 0.0 if params is None else params.initial_units

    def vintage_initial_units(self, asset: str, year: int, vintage: int) -> float:
        params = self.asset_vintage.get((asset, year, vintage))
        return 0.0 if params is None else params.initial_units

    def vintage_fixed_cost(self, asset: str, year: int, vintage: int) -> float:
        """Fixed cost of one unit of a given vintage in an operational year.

        Falls back to the year-indexed fixed cost, which makes year-indexed
        data embed losslessly into the vintage-indexed formulations.
        """
        params = self.asset_vintage.get((asset, year, vintage))
        if params is not None and params.fixed_cost is not None:
            return params.fixed_cost
        year_params = self.asset_year.get((asset, year))
        return 0.0 if year_params is None else year_params.fixed_cost

    # -- lifetime and vintage arithmetic -----------------------------------

    def active_window(self, asset: str, year: int) -> tuple[int, ...]:
        """Milestone years whose investments are still live in ``year``.

        The window is ``year - lifetime + 1 <= i <= year`` on calendar
        values, so non-consecutive milestone years behave correctly.
        """
        lifetime = self.assets[asset].technical_lifetime
        return tuple(i for i in self.years if year - lifetime + 1 <= i <= year)

    def vintages(self, asset: str) -> tuple[int, ...]:
        """All commissioning years of an asset: investable years plus any
        vintage that carries initial units."""
        a = self.assets[asset]
        found = set(a.investable_years)
        for (name, _year, vintage), params in self.asset_vintage.items():
            if name == asset and params.initial_units > 0:
                found.add(vintage)
        return tuple(sorted(found))

    def domain_triples(self, asset: str) -> tuple[tuple[int, int], ...]:
        """(operational year, vintage) pairs on which vintage accounting is
        defined for an asset, sorted by (year, vintage).

        A pair is in the domain iff the vintage is still within its
        technical lifetime in the operational year.
        """
        lifetime = self.assets[asset].technical_lifetime
        vintages = self.vintages(asset)
        triples = []
        for year in self.years:
            for vintage in vintages:
                if vintage <= year < vintage + lifetime:
                    triples.append((year, vintage))
        triples.sort()
        return tuple(triples)

    # -- flow and time topology -------------------------------------------

    def out_edges(self, asset: str, year: int) -> list[FlowEdge]:
        return [
            f
            for f in self.flows.values()
            if f.from_asset == asset and (f.id, year) in self.flow_cost
        ]

    def in_edges(self, asset: str, year: int) -> list[FlowEdge]:
        return [
            f
            for f in self.flows.values()
            if f.to_asset == asset and (f.id, year) in self.flow_cost
        ]

    def time_steps(self, year: int) -> list[tuple[int, int, float, float]]:
        """(rep-period id, block id, weight, duration) in file order."""
        out = []
        for rp in self.rep_periods.get(year, ()):
            for block in rp.blocks:
                out.append((rp.id, block.id, rp.weight, block.duration))
        return out
