"""Band plans, LTE frame patterns, reserved-subframe rules and the FDD->TDD reuse table.

The module owns the static spectrum knowledge of the simulator:

* the resource-block grid (50 RBs of 180 kHz per 10 MHz carrier, 1 ms subframes),
* the scheme-specific splits of the reused carrier (frequency multiplexing,
  time multiplexing, and the baseline),
* which subframes carry system information and are therefore not reusable,
* PUCCH placement at the band edges,
* the E-UTRA operating-band database mapping each FDD band to the TDD bands
  whose spectrum overlaps it.

Everything is immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

CARRIER_RBS = 50
RB_BANDWIDTH_HZ = 180_000.0
SUBFRAME_S = 1e-3
SUBFRAMES_PER_FRAME = 10

ROLE_DL = "DL"
ROLE_UL = "UL"
ROLE_GUARD = "GUARD"
ROLE_HOST = "HOST"
ROLE_RESERVED = "RESERVED_CTRL"
ROLES = (ROLE_DL, ROLE_UL, ROLE_GUARD, ROLE_HOST, ROLE_RESERVED)


@dataclass(frozen=True)
class FramePattern:
    """Ten subframe roles owned by one cell.  HOST marks subframes left to the host system."""

    subframes: tuple
    owner: str

    def __post_init__(self):
        if len(self.subframes) != SUBFRAMES_PER_FRAME:
            raise ValueError("a frame has exactly 10 subframes")
        for role in self.subframes:
            if role not in ROLES:
                raise ValueError(f"unknown subframe role {role!r}")
        if all(r == ROLE_GUARD for r in self.subframes):
            raise ValueError("frame pattern must have at least one non-guard subframe")

    def count(self, role: str) -> int:
        return self.subframes.count(role)

    def indices(self, role: str) -> frozenset:
        return frozenset(i for i, r in enumerate(self.subframes) if r == role)


@dataclass(frozen=True)
class Segment:
    """A contiguous-or-split RB range owned by one cell in one duplexing mode.

    ``rb_ranges`` is a tuple of half-open ``(start, stop)`` index ranges; the
    host keeps both band edges in the frequency-multiplexed plans so the PUCCH
    regions never fall inside the guest's segment.
    """

    owner: str  # "menb" | "senb"
    duplexing: str  # "FDD_DL" | "FDD_UL" | "TDD"
    rb_ranges: tuple
    frame: FramePattern | None = None

    def __post_init__(self):
        for start, stop in self.rb_ranges:
            if not (0 <= start < stop):
                raise ValueError(f"bad rb range ({start}, {stop})")
        if self.duplexing == "TDD" and self.frame is None:
            raise ValueError("TDD segments carry a frame pattern")

    @property
    def n_rbs(self) -> int:
        return sum(stop - start for start, stop in self.rb_ranges)

    @property
    def rb_set(self) -> frozenset:
        out = set()
        for start, stop in self.rb_ranges:
            out.update(range(start, stop))
        return frozenset(out)


@dataclass(frozen=True)
class BandPlan:
    """Partition of one reused carrier into per-owner segments.

    ``reused_band`` names which half of the FDD pair the plan carves up;
    ``aci_coupled`` marks whether the owners are frequency-adjacent (FMA) or
    time-orthogonal on the same RBs (TMA / baseline).
    """

    reused_band: str  # "UL" | "DL" | None for the baseline
    segments: tuple
    total_rbs: int = CARRIER_RBS
    guard_rbs: int = 0
    aci_coupled: bool = False

    def __post_init__(self):
        if self.aci_coupled:
            # frequency-multiplexed: RB sets must be disjoint and fit the carrier
            seen = set()
            for seg in self.segments:
                rbs = seg.rb_set
                if rbs & seen:
                    raise ValueError("band plan segments overlap")
                seen |= rbs
            if len(seen) + self.guard_rbs > self.total_rbs:
                raise ValueError("segments plus guards exceed the carrier")

    def segment(self, owner: str) -> Segment:
        for seg in self.segments:
            if seg.owner == owner:
                return seg
        raise KeyError(owner)


def make_fma_plan(reuse_direction: str) -> BandPlan:
    """Frequency-multiplexed split of the reused FDD carrier.

    UL reuse: host keeps 30% (15 RBs, split across both band edges so the
    PUCCH regions stay host-owned), guest gets 70% (35 RBs) with a 7 DL : 3 UL
    pattern.  DL reuse: host keeps 7 RBs, guest 43 with a 1 DL : 9 UL pattern
    (the advertised 14%/87% split sums above one; 7+43 RBs is the consistent
    partition).
    """
    if reuse_direction == "UL":
        menb = Segment("menb", "FDD_UL", ((0, 13), (48, 50)))
        pattern = FramePattern((ROLE_DL,) * 7 + (ROLE_UL,) * 3, "senb")
        senb = Segment("senb", "TDD", ((13, 48),), pattern)
    elif reuse_direction == "DL":
        menb = Segment("menb", "FDD_DL", ((0, 7),))
        pattern = FramePattern((ROLE_DL,) + (ROLE_UL,) * 9, "senb")
        senb = Segment("senb", "TDD", ((7, 50),), pattern)
    else:
        raise ValueError("reuse_direction must be 'UL' or 'DL'")
    return BandPlan(reuse_direction, (menb, senb), aci_coupled=True)


def make_tma_plan() -> BandPlan:
    """Time-multiplexed reuse of the FDD-UL carrier.

    Full 50 RBs, partitioned in time: subframes {0,1,2} host uplink, {3..6}
    guest DL, {7,8} guest UL, {9} guard.  Same band at different instants, so
    no adjacent-channel coupling.
    """
    pattern = FramePattern(
        (ROLE_HOST, ROLE_HOST, ROLE_HOST, ROLE_DL, ROLE_DL, ROLE_DL, ROLE_DL, ROLE_UL, ROLE_UL, ROLE_GUARD),
        "senb",
    )
    menb = Segment("menb", "FDD_UL", ((0, 50),))
    senb = Segment("senb", "TDD", ((0, 50),), pattern)
    return BandPlan("UL", (menb, senb), aci_coupled=False)


def make_baseline_plan() -> BandPlan:
    """Host-only carrier: the full 50 RBs stay with the macro cell."""
    menb = Segment("menb", "FDD_UL", ((0, 50),))
    return BandPlan(None, (menb,), aci_coupled=False)


def reserved_subframes(system: str) -> frozenset:
    """Subframes carrying synchronization / system information / paging.

    FDD downlink reserves {0, 4, 5, 9}; TDD reserves {0, 1, 5, 6} (1 and 6
    being special subframes).
    """
    key = system.upper()
    if key == "FDD_DL":
        return frozenset({0, 4, 5, 9})
    if key == "TDD":
        return frozenset({0, 1, 5, 6})
    raise ValueError(f"unknown system {system!r}; expected 'FDD_DL' or 'TDD'")


class ReusableSubframes(NamedTuple):
    indices: frozenset
    cited_count: int


def reusable_subframes(host: str = "FDD_DL", guest: str = "TDD") -> ReusableSubframes:
    """Subframes a TDD guest could seize inside a host frame, plus the commonly cited count.

    The set arithmetic on the two reserved sets yields {2, 3, 7, 8}, while the
    standard-analysis discussions put the usable figure at two subframes; both
    are returned instead of silently reconciling them.
    """
    indices = frozenset(range(SUBFRAMES_PER_FRAME)) - reserved_subframes(host) - reserved_subframes(guest)
    return ReusableSubframes(indices, 2)


def pucch_edge_rbs(total_rbs: int, edge_width: int) -> frozenset:
    """Indices of the PUCCH regions: ``edge_width`` RBs at each band edge."""
    if edge_width < 0:
        raise ValueError("edge_width must be >= 0")
    if 2 * edge_width >= total_rbs:
        raise ValueError("PUCCH edges would cover the whole band")
    return frozenset(range(edge_width)) | frozenset(range(total_rbs - edge_width, total_rbs))


class BandEntry(NamedTuple):
    band: int
    ul_range_mhz: tuple | None
    ul_tdd: frozenset | None
    dl_range_mhz: tuple | None
    dl_tdd: frozenset | None


def _entry(band, ul_range, ul_tdd, dl_range, dl_tdd):
    to_set = lambda v: None if v is None else frozenset(v)
    return BandEntry(band, ul_range, to_set(ul_tdd), dl_range, to_set(dl_tdd))


#: E-UTRA FDD operating bands and the TDD bands overlapping their UL/DL halves.
#: ``None`` in a tdd column means no TDD band covers that spectrum.
OPERATING_BANDS = {
    e.band: e
    for e in [
        _entry(1, (1920.0, 1980.0), {36}, (2110.0, 2170.0), None),
        _entry(2, (1850.0, 1910.0), {33, 35}, (1930.0, 1990.0), {36}),
        _entry(3, (1710.0, 1785.0), None, (1805.0, 1880.0), {35, 39}),
        _entry(4, (1710.0, 1755.0), None, (2110.0, 2155.0), None),
        _entry(5, (824.0, 849.0), None, (869.0, 894.0), None),
        _entry(6, (830.0, 840.0), None, (875.0, 885.0), None),
        _entry(7, (2500.0, 2570.0), {41}, (2620.0, 2690.0), {41}),
        _entry(8, (880.0, 915.0), None, (925.0, 960.0), None),
        _entry(9, (1749.9, 1784.9), None, (1844.9, 1879.9), {35, 39}),
        _entry(10, (1710.0, 1770.0), None, (2110.0, 2170.0), None),
        _entry(11, (1427.9, 1447.9), None, (1475.9, 1495.9), {32}),
        _entry(12, (699.0, 716.0), {44}, (729.0, 746.0), {44}),
        _entry(13, (777.0, 787.0), {44}, (746.0, 756.0), {44}),
        _entry(14, (788.0, 798.0), {44}, (758.0, 768.0), {44}),
        _entry(17, (704.0, 716.0), {44}, (734.0, 746.0), {44}),
        _entry(18, (815.0, 830.0), None, (860.0, 875.0), None),
        _entry(19, (830.0, 845.0), None, (875.0, 890.0), None),
        _entry(20, (832.0, 862.0), None, (791.0, 821.0), {44}),
        _entry(21, (1447.9, 1462.9), {32}, (1495.9, 1510.9), None),
        _entry(22, (3410.0, 3490.0), {42}, (3510.0, 3590.0), {42}),
        _entry(23, (2000.0, 2020.0), {34}, (2180.0, 2200.0), None),
        _entry(24, (1626.5, 1660.5), None, (1525.0, 1559.0), None),
        _entry(25, (1850.0, 1915.0), {39}, (1930.0, 1995.0), {36}),
        _entry(26, (814.0, 849.0), None, (859.0, 894.0), None),
        _entry(27, (807.0, 824.0), None, (852.0, 869.0), None),
        _entry(28, (703.0, 748.0), {44}, (758.0, 803.0), {44}),
        _entry(29, None, None, (717.0, 728.0), {44}),
        _entry(30, (2305.0, 2315.0), {40}, (2350.0, 2360.0), {40}),
        _entry(31, (452.5, 457.5), None, (462.5, 467.5), None),
        _entry(32, None, None, (1452.0, 1496.0), None),
    ]
}


class UnknownBandError(KeyError):
    pass


def tdd_reuse_lookup(band: int, direction: str) -> frozenset | None:
    """TDD band numbers whose spectrum overlaps the given FDD band half, or None."""
    try:
        entry = OPERATING_BANDS[band]
    except KeyError:
        raise UnknownBandError(f"band {band} not in the operating-band table") from None
    d = direction.upper()
    if d == "UL":
        return entry.ul_tdd
    if d == "DL":
        return entry.dl_tdd
    raise ValueError(f"direction must be 'UL' or 'DL', got {direction!r}")


def validate_cc_plan(ul_cc_bandwidth_mhz: float, dl_cc_bandwidth_mhz: float) -> bool:
    """Carrier-aggregation asymmetry rule: UL component carriers may not exceed the DL ones.

    Returns True when the plan is valid.  Equality is allowed (the rule is
    'must be smaller', read as 'must not be larger' for the boundary).
    """
    if ul_cc_bandwidth_mhz <= 0 or dl_cc_bandwidth_mhz <= 0:
        raise ValueError("CC bandwidths must be > 0")
    return ul_cc_bandwidth_mhz <= dl_cc_bandwidth_mhz


def validate_band_plan(plan: BandPlan, pucch_edge_width: int = 2) -> list:
    """Return a list of rule violations for a plan (empty when valid).

    Checks segment disjointness inside FMA plans and, on UL-band plans, that
    the guest never sits on the PUCCH edge RBs.
    """
    violations = []
    if plan.aci_coupled:
        seen = set()
        for seg in plan.segments:
            if seg.rb_set & seen:
                violations.append(f"segment overlap at owner {seg.owner}")
            seen |= seg.rb_set
    if plan.reused_band == "UL" and pucch_edge_width > 0:
        edges = pucch_edge_rbs(plan.total_rbs, pucch_edge_width)
        for seg in plan.segments:
            if seg.owner != "menb" and plan.aci_coupled and seg.rb_set & edges:
                violations.append(f"guest segment covers PUCCH edge RBs {sorted(seg.rb_set & edges)}")
    for seg in plan.segments:
        if seg.duplexing == "TDD" and seg.frame is None:
            violations.append(f"TDD segment of {seg.owner} lacks a frame pattern")
    return violations


def bands_to_csv() -> str:
    """Operating-band table as CSV (multi-band cells joined with ';')."""
    lines = ["band,ul_low_mhz,ul_high_mhz,ul_tdd,dl_low_mhz,dl_high_mhz,dl_tdd"]
    fmt_range = lambda r: ("", "") if r is None else (f"{r[0]:g}", f"{r[1]:g}")
    fmt_tdd = lambda s: "" if s is None else ";".join(str(b) for b in sorted(s))
    for band in sorted(OPERATING_BANDS):
        e = OPERATING_BANDS[band]
        ul_lo, ul_hi = fmt_range(e.ul_range_mhz)
        dl_lo, dl_hi = fmt_range(e.dl_range_mhz)
        lines.append(f"{band},{ul_lo},{ul_hi},{fmt_tdd(e.ul_tdd)},{dl_lo},{dl_hi},{fmt_tdd(e.dl_tdd)}")
    return "\n".join(lines) + "\n"
