"""Utilization-driven resource sizing and min-max fair multi-cell allocation.

Each cell-direction pair reduces to an equivalent demand ``a = lambda * L / C``
(resources needed at full utilization).  Sizing for a target utilization is a
direct inversion of the utilization formula; splitting a shared pool across
cells minimizes the maximum utilization, which the real-valued solution
equalizes exactly and the integer solution approaches by largest-remainder
rounding plus a local repair pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .traffic import max_ru_for_delay


@dataclass(frozen=True)
class CellDemand:
    cell: str
    direction: str
    offered_load_bps: float
    efficiency_bps_per_resource: float

    def __post_init__(self):
        if self.offered_load_bps < 0:
            raise ValueError("offered load must be >= 0")
        if self.efficiency_bps_per_resource <= 0:
            raise ValueError("efficiency must be > 0")

    @classmethod
    def from_rate(cls, cell, direction, lam, packet_bits, efficiency):
        return cls(cell, direction, lam * packet_bits, efficiency)

    @property
    def equivalent_demand(self) -> float:
        """Resources that would run at utilization exactly 1."""
        return self.offered_load_bps / self.efficiency_bps_per_resource


class Sizing(NamedTuple):
    resources_real: float
    resources_int: int


def required_resources(demand: CellDemand, rho_max: float) -> Sizing:
    """Resources needed to keep the cell's utilization at ``rho_max``; integer form rounds up."""
    if not 0.0 < rho_max < 1.0:
        raise ValueError("rho_max must be in (0, 1)")
    x = demand.equivalent_demand / rho_max
    return Sizing(x, math.ceil(x - 1e-12))


class Allocation(NamedTuple):
    real: tuple
    integer: tuple
    max_ru_real: float
    max_ru_int: float
    infeasible: tuple  # cell names whose utilization exceeds 1 even under sole ownership


def _max_ru(demands, alloc) -> float:
    worst = 0.0
    for d, x in zip(demands, alloc):
        a = d.equivalent_demand
        if a == 0:
            continue
        worst = max(worst, math.inf if x == 0 else a / x)
    return worst


def minmax_allocation(demands: list, total_resources: int) -> Allocation:
    """Split ``total_resources`` across cells minimizing the maximum utilization.

    Real-valued optimum is proportional to the equivalent demands (all
    utilizations equal).  The integer allocation starts from largest-remainder
    rounding and then moves single resources toward the current worst cell
    while that strictly lowers the maximum; zero-demand cells receive nothing.
    """
    if total_resources <= 0:
        raise ValueError("total_resources must be > 0")
    if not demands:
        raise ValueError("demands must be non-empty")
    a = [d.equivalent_demand for d in demands]
    total_a = sum(a)
    if total_a == 0:
        raise ValueError("all demands are zero")

    real = [total_resources * ai / total_a for ai in a]

    # largest-remainder start
    floors = [math.floor(x) for x in real]
    remainder = total_resources - sum(floors)
    order = sorted(range(len(a)), key=lambda i: (-(real[i] - floors[i]), i))
    integer = list(floors)
    for i in order[:remainder]:
        integer[i] += 1
    for i, ai in enumerate(a):
        if ai == 0 and integer[i] > 0:
            # return the rounding leftovers of zero-demand cells to the pool
            spare = integer[i]
            integer[i] = 0
            for j in sorted(range(len(a)), key=lambda k: (-a[k], k)):
                if a[j] > 0:
                    integer[j] += spare
                    break

    # local repair: donate one resource at a time to the current worst cell
    def ru(i):
        return math.inf if integer[i] == 0 else a[i] / integer[i]

    while True:
        current = _max_ru(demands, integer)
        best_move, best_val = None, current
        worst = max((i for i in range(len(a)) if a[i] > 0), key=ru)
        for j in range(len(a)):
            if j == worst or integer[j] == 0:
                continue
            integer[j] -= 1
            integer[worst] += 1
            val = _max_ru(demands, integer)
            if val < best_val - 1e-15:
                best_move, best_val = j, val
            integer[j] += 1
            integer[worst] -= 1
        if best_move is None:
            break
        integer[best_move] -= 1
        integer[worst] += 1

    infeasible = tuple(d.cell for d in demands if d.equivalent_demand > total_resources)
    return Allocation(
        tuple(real),
        tuple(integer),
        _max_ru(demands, real),
        _max_ru(demands, integer),
        infeasible,
    )


def provision_for_delay(demands: list, w_target_bits: float, mean_bits: float, mean_sq_bits: float) -> list:
    """Per-cell sizing for a target mean queue: invert the queue law, then size each cell."""
    if w_target_bits <= 0:
        raise ValueError("w_target must be > 0")
    rho_max = max_ru_for_delay(w_target_bits, mean_bits, mean_sq_bits)
    return [required_resources(d, rho_max) for d in demands]
