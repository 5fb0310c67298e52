"""Poisson packet generation, per-UE FIFO backlog and the analytic utilization/queue formulas.

The traffic model is fixed-size file transfers: packets of ``mean_packet_bits``
arrive per UE as independent Poisson processes, one rate per direction.  The
closed-form expressions used for provisioning live here as well:

* resource utilization  ``rho = (lambda * L / x) * (1 / C)``
* mean queued bits      ``W = rho / (1 - rho) * l2 / (2 L)``  (valid for rho < 1)
* and the inversion of the latter, ``rho_max = W / (W + l2 / (2 L))``.

``l2`` is the mean of the squared packet length; with the default fixed packet
size it equals ``L**2``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


class SaturationError(ValueError):
    """Raised when a queue formula is evaluated at or beyond rho = 1."""


@dataclass(frozen=True)
class TrafficDescriptor:
    lambda_dl: float
    lambda_ul: float
    mean_packet_bits: float = 2e6
    mean_sq_packet_bits: float | None = None

    def __post_init__(self):
        if self.lambda_dl < 0 or self.lambda_ul < 0:
            raise ValueError("arrival rates must be >= 0")
        if self.mean_packet_bits <= 0:
            raise ValueError("packet size must be > 0")
        l2 = self.mean_sq_packet_bits
        if l2 is None:
            object.__setattr__(self, "mean_sq_packet_bits", self.mean_packet_bits**2)
        elif l2 < self.mean_packet_bits**2:
            raise ValueError("mean_sq_packet_bits must be >= mean_packet_bits**2")

    @classmethod
    def from_ratio(cls, lambda_dl: float, asymmetry_ratio: float, packet_bits: float = 2e6):
        """UL rate tied to the DL rate: ``lambda_ul = ratio * lambda_dl``."""
        return cls(lambda_dl, asymmetry_ratio * lambda_dl, packet_bits)


class PacketQueue:
    """FIFO backlog of one UE in one direction.

    Entries are ``[arrival_time, bits_remaining, original_bits]``; service
    drains the head first and spills leftover capacity into the next packet.
    """

    def __init__(self, direction: str, owner_ue: int):
        self.direction = direction
        self.owner_ue = owner_ue
        self.entries = deque()

    def push(self, arrival_time: float, bits: float) -> None:
        if bits <= 0:
            raise ValueError("packet must carry bits")
        if self.entries and arrival_time < self.entries[-1][0]:
            raise ValueError("arrival times must be nondecreasing")
        self.entries.append([arrival_time, bits, bits])

    def serve(self, capacity_bits: float) -> list:
        """Drain up to ``capacity_bits``; returns the fully served (arrival, bits) entries."""
        done = []
        while capacity_bits > 0 and self.entries:
            head = self.entries[0]
            take = min(capacity_bits, head[1])
            head[1] -= take
            capacity_bits -= take
            if head[1] == 0:
                done.append((head[0], head[2]))
                self.entries.popleft()
        return done

    @property
    def bits(self) -> float:
        return sum(e[1] for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def generate_arrivals(lam: float, horizon_s: float, rng) -> np.ndarray:
    """Poisson arrival instants in [0, horizon_s), exponential inter-arrival times.

    ``rng`` is an integer seed or a numpy Generator; a fixed seed gives an
    identical sequence.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if horizon_s <= 0:
        raise ValueError("horizon must be > 0")
    if lam == 0.0:
        return np.empty(0)
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    out = []
    t = rng.exponential(1.0 / lam)
    while t < horizon_s:
        out.append(t)
        t += rng.exponential(1.0 / lam)
    return np.asarray(out)


def analytic_ru(lam: float, mean_bits: float, x_resources: float, c_per_resource: float) -> float:
    """Resource utilization: offered traffic over serving capacity."""
    if x_resources <= 0:
        raise ValueError("x_resources must be > 0")
    if c_per_resource <= 0:
        raise ValueError("c_per_resource must be > 0")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    return (lam * mean_bits / x_resources) * (1.0 / c_per_resource)


def analytic_queue(rho: float, mean_bits: float, mean_sq_bits: float) -> float:
    """Mean queued bits at utilization ``rho`` (Poisson arrivals); diverges at rho -> 1."""
    if not 0.0 <= rho < 1.0:
        raise SaturationError(f"queue formula needs 0 <= rho < 1, got {rho}")
    return (rho / (1.0 - rho)) * (mean_sq_bits / (2.0 * mean_bits))


def max_ru_for_delay(w_target_bits: float, mean_bits: float, mean_sq_bits: float) -> float:
    """Largest utilization whose mean queue stays at ``w_target_bits`` (inversion of the queue law)."""
    if w_target_bits < 0:
        raise ValueError("w_target must be >= 0")
    return w_target_bits / (w_target_bits + mean_sq_bits / (2.0 * mean_bits))
