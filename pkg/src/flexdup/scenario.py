"""Deployment geometry: hexagonal macro grid, observed sector, UE drop and cell association.

One macro sector is observed in detail; the surrounding ring(s) of sites are
interference-only.  The observed sector is the 120-degree wedge of the site's
hexagonal cell around boresight (azimuth 0 points along +x), the small cell
sits on the boresight at a configurable distance, and UEs fall uniformly over
the wedge.  Interfering sites aim their modeled sector at the observed site
(worst-case downlink coupling); their representative uplink user is drawn
uniformly over the site's cell footprint.

All construction is pure given a seed: identical (seed, parameters) rebuild
bit-identical layouts and drops.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .radio import LinkBudget, PropagationModel, antenna_gain, pathloss

MENB = "menb"
SENB = "senb"
INTERFERER = "interferer"


@dataclass(frozen=True)
class Cell:
    id: str
    kind: str  # menb | senb | interferer
    position: tuple
    azimuth_deg: float | None  # None -> omnidirectional

    def distance_to(self, point) -> float:
        return math.hypot(point[0] - self.position[0], point[1] - self.position[1])

    def angle_to(self, point) -> float:
        return math.degrees(math.atan2(point[1] - self.position[1], point[0] - self.position[0]))


@dataclass
class UserTerminal:
    id: int
    position: tuple
    serving_cell: str | None = None
    is_sue: bool = False


@dataclass(frozen=True)
class NetworkLayout:
    macro_sites: tuple  # (position, azimuth_deg) per site; index 0 is observed
    inter_site_distance: float
    senb_position: tuple
    interferer_ring_count: int
    observed_sector: int = 0
    _hex_dirs: tuple = field(init=False, repr=False, default=())

    def __post_init__(self):
        dirs = tuple(
            (math.cos(math.radians(60.0 * k)), math.sin(math.radians(60.0 * k))) for k in range(6)
        )
        object.__setattr__(self, "_hex_dirs", dirs)

    @property
    def observed_site(self) -> tuple:
        return self.macro_sites[0][0]

    @property
    def interferer_sites(self) -> tuple:
        return self.macro_sites[1:]

    @property
    def sector_radius(self) -> float:
        """Circumradius of the hexagonal cell (largest in-cell distance)."""
        return self.inter_site_distance / math.sqrt(3.0)

    def in_cell(self, point, site=(0.0, 0.0)) -> bool:
        """Inside the hexagonal Voronoi cell of ``site`` (flat sides facing the neighbors)."""
        half = self.inter_site_distance / 2.0 + 1e-9
        dx, dy = point[0] - site[0], point[1] - site[1]
        return all(dx * ux + dy * uy <= half for ux, uy in self._hex_dirs)

    def in_observed_sector(self, point) -> bool:
        """Inside the 120-degree boresight wedge of the observed cell."""
        x, y = point[0] - self.observed_site[0], point[1] - self.observed_site[1]
        if x == 0.0 and y == 0.0:
            return True
        if abs(math.degrees(math.atan2(y, x))) > 60.0 + 1e-9:
            return False
        return self.in_cell(point, self.observed_site)


def hex_sites(isd: float, rings: int) -> list:
    """Hexagonal lattice positions out to ``rings`` rings, observed site first.

    Deterministic order: by ring then by angle.  Nearest-neighbor spacing is
    exactly ``isd``.
    """
    a1 = (isd, 0.0)
    a2 = (isd / 2.0, isd * math.sqrt(3.0) / 2.0)
    out = []
    for u in range(-rings, rings + 1):
        for v in range(-rings, rings + 1):
            ring = max(abs(u), abs(v), abs(u + v))
            if ring > rings:
                continue
            pos = (u * a1[0] + v * a2[0], u * a1[1] + v * a2[1])
            out.append((ring, math.atan2(pos[1], pos[0]) % (2 * math.pi), pos))
    out.sort(key=lambda t: (t[0], t[1]))
    return [pos for _, _, pos in out]


def build_layout(isd: float, senb_distance: float, ring_count: int) -> NetworkLayout:
    """Hexagonal grid with ``ring_count`` interference rings and the small cell on boresight."""
    if isd <= 0:
        raise ValueError("inter-site distance must be > 0")
    if not 0 < senb_distance < isd / 2:
        raise ValueError(
            f"senb_distance must be in (0, {isd / 2:g}) to stay inside the observed sector, "
            f"got {senb_distance:g}"
        )
    if ring_count < 0:
        raise ValueError("ring_count must be >= 0")
    positions = hex_sites(isd, ring_count)
    sites = [(positions[0], 0.0)]
    for pos in positions[1:]:
        # interference-worst-case convention: neighbor sectors aim at the observed site
        azimuth = math.degrees(math.atan2(-pos[1], -pos[0]))
        sites.append((pos, azimuth))
    senb_position = (senb_distance, 0.0)
    layout = NetworkLayout(tuple(sites), isd, senb_position, ring_count)
    if not layout.in_observed_sector(senb_position):
        raise ValueError(f"small cell at {senb_position} falls outside the observed sector")
    return layout


def layout_cells(layout: NetworkLayout) -> list:
    """Cell records for the layout: observed macro, small cell, then interferers."""
    cells = [
        Cell("menb", MENB, layout.observed_site, 0.0),
        Cell("senb", SENB, layout.senb_position, None),
    ]
    for k, (pos, az) in enumerate(layout.interferer_sites):
        cells.append(Cell(f"ext{k}", INTERFERER, pos, az))
    return cells


def drop_ues(count: int, layout: NetworkLayout, rng) -> list:
    """``count`` UEs i.i.d. uniform over the observed sector wedge (rejection from the circular wedge)."""
    if count <= 0:
        raise ValueError("UE count must be > 0")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    radius = layout.sector_radius
    ox, oy = layout.observed_site
    ues = []
    while len(ues) < count:
        r = radius * math.sqrt(rng.random())
        theta = math.radians(rng.uniform(-60.0, 60.0))
        p = (ox + r * math.cos(theta), oy + r * math.sin(theta))
        if layout.in_observed_sector(p):
            ues.append(UserTerminal(len(ues), p))
    return ues


def neighbor_ue_positions(layout: NetworkLayout, rng) -> list:
    """One representative uplink user per interfering site, uniform over that site's cell."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    radius = layout.sector_radius
    out = []
    for pos, _ in layout.interferer_sites:
        while True:
            r = radius * math.sqrt(rng.random())
            theta = rng.uniform(0.0, 2.0 * math.pi)
            p = (pos[0] + r * math.cos(theta), pos[1] + r * math.sin(theta))
            if layout.in_cell(p, pos):
                out.append(p)
                break
    return out


def rsrp(
    ue: UserTerminal,
    cell: Cell,
    budget: LinkBudget,
    prop: PropagationModel,
    shadowing_db: float = 0.0,
    pattern_width_deg: float = 70.0,
    pattern_max_att_db: float = 25.0,
) -> float:
    """Reference-signal received power in dBm over the reference band."""
    if cell.kind == SENB:
        tx_power, peak = budget.tx_power_senb_dbm, budget.gain_senb_dbi
        link_class = "small_ue"
    else:
        tx_power, peak = budget.tx_power_menb_dbm, budget.gain_menb_dbi
        link_class = "macro_ue"
    gain = antenna_gain(peak, cell.azimuth_deg, cell.angle_to(ue.position), pattern_width_deg, pattern_max_att_db)
    pl = pathloss(link_class, cell.distance_to(ue.position), prop)
    return tx_power + gain + budget.gain_ue_dbi - pl - shadowing_db


def associate(ues: list, cells: list, cre_bias_db: float, rsrp_fn) -> dict:
    """Serve each UE from the cell maximizing RSRP plus the small-cell bias.

    ``rsrp_fn(ue, cell) -> dBm``.  Ties break toward the small cell (the bias
    exists to offload users there).  Mutates ``serving_cell``/``is_sue`` and
    returns the ue-id -> cell-id mapping.
    """
    mapping = {}
    for ue in ues:
        best_cell, best_metric = None, -math.inf
        for cell in cells:
            metric = rsrp_fn(ue, cell) + (cre_bias_db if cell.kind == SENB else 0.0)
            better = metric > best_metric or (
                metric == best_metric and cell.kind == SENB and best_cell is not None and best_cell.kind != SENB
            )
            if best_cell is None or better:
                best_cell, best_metric = cell, metric
        ue.serving_cell = best_cell.id
        ue.is_sue = best_cell.kind == SENB
        mapping[ue.id] = best_cell.id
    return mapping


class CreTargetError(ValueError):
    """CRE grid exhausted before reaching the offload target."""

    def __init__(self, target: int, max_achievable: int, at_bias_db: float):
        super().__init__(
            f"target of {target} small-cell users unreachable; best {max_achievable} at {at_bias_db:g} dB"
        )
        self.target = target
        self.max_achievable = max_achievable
        self.at_bias_db = at_bias_db


def calibrate_cre(
    ues: list,
    cells: list,
    target_sue_count: int,
    rsrp_fn,
    grid_max_db: float = 30.0,
    grid_step_db: float = 1.0,
) -> tuple:
    """Smallest grid bias whose association reaches the target small-cell user count.

    Returns ``(bias_db, achieved_count)``; raises :class:`CreTargetError` with
    the best achievable count when the grid cannot reach the target.
    """
    if target_sue_count > len(ues):
        raise ValueError("target exceeds the UE population")
    best_count, best_bias = -1, 0.0
    bias = 0.0
    while bias <= grid_max_db + 1e-9:
        mapping = associate(ues, cells, bias, rsrp_fn)
        count = sum(1 for cid in mapping.values() if cid == "senb")
        if count > best_count:
            best_count, best_bias = count, bias
        if count >= target_sue_count:
            return bias, count
        bias += grid_step_db
    raise CreTargetError(target_sue_count, best_count, best_bias)


def layout_to_csv(layout: NetworkLayout, ues: list | None = None) -> str:
    """Position table (id, type, x_m, y_m, azimuth_deg) for plotting."""
    buf = io.StringIO()
    buf.write("id,type,x_m,y_m,azimuth_deg\n")
    for cell in layout_cells(layout):
        az = "" if cell.azimuth_deg is None else f"{cell.azimuth_deg:.6g}"
        buf.write(f"{cell.id},{cell.kind},{cell.position[0]:.6g},{cell.position[1]:.6g},{az}\n")
    for ue in ues or ():
        buf.write(f"ue{ue.id},ue,{ue.position[0]:.6g},{ue.position[1]:.6g},\n")
    return buf.getvalue()
