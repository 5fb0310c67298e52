"""Link budgets, propagation, antenna patterns, noise, interference and link adaptation.

All interfaces work in dB/dBm; helpers convert to the linear mW domain where
powers have to be summed.  Everything here is pure and side-effect free, so the
simulation engine can call it concurrently and precompute link gains once per
drop.

Default constants follow the simulation assumptions of a 2.5 GHz LTE macro
deployment: 46/24/23 dBm transmit powers, 17/5/0 dBi antennas, noise figures
5 dB (eNB) and 9 dB (UE), -174 dBm/Hz thermal noise.  Pathloss profiles are
``intercept + slope * log10(d_km)`` per link class; the shipped intercepts and
slopes are TR 36.828-style defaults and every one of them can be overridden
through the scenario configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

LN2 = math.log(2.0)


def db_to_lin(db: float) -> float:
    """dB (or dBm) to linear ratio (or mW)."""
    return 10.0 ** (db / 10.0)


def lin_to_db(x: float) -> float:
    """Linear ratio (or mW) to dB (or dBm)."""
    if x <= 0.0:
        return float("-inf")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class LinkBudget:
    """Transmit powers, antenna peaks and receiver noise figures (Table-1 style defaults)."""

    tx_power_menb_dbm: float = 46.0
    tx_power_senb_dbm: float = 24.0
    tx_power_ue_dbm: float = 23.0
    gain_menb_dbi: float = 17.0
    gain_senb_dbi: float = 5.0
    gain_ue_dbi: float = 0.0
    nf_enb_db: float = 5.0
    nf_ue_db: float = 9.0
    noise_density_dbm_hz: float = -174.0
    # Two antennas everywhere are abstracted into a scalar gain offset on the
    # desired link, off by default.
    mimo_gain_db: float = 0.0

    def __post_init__(self):
        for name in ("tx_power_menb_dbm", "tx_power_senb_dbm", "tx_power_ue_dbm"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.noise_density_dbm_hz >= 0:
            raise ValueError("noise_density_dbm_hz must be negative")


#: link classes understood by :func:`pathloss`
LINK_CLASSES = ("macro_ue", "small_ue", "enb_enb", "ue_ue")

DEFAULT_PROFILES = {
    "macro_ue": (128.1, 37.6),
    "small_ue": (140.7, 36.7),
    # macro-to-small-cell backhaul-distance coupling; defaults to the macro
    # profile, overridable like every other class.
    "enb_enb": (128.1, 37.6),
    "ue_ue": (145.4, 40.0),
}

DEFAULT_SHADOWING_SIGMA = {
    "macro_ue": 8.0,
    "small_ue": 10.0,
    "enb_enb": 10.0,
    "ue_ue": 10.0,
}


@dataclass(frozen=True)
class PropagationModel:
    """Pathloss profiles (dB intercept at 1 km, dB/decade slope) and shadowing sigmas per link class."""

    profiles: dict = field(default_factory=lambda: dict(DEFAULT_PROFILES))
    shadowing_sigma: dict = field(default_factory=lambda: dict(DEFAULT_SHADOWING_SIGMA))
    shadowing_enabled: bool = True
    fading_enabled: bool = False
    min_distance_m: float = 10.0

    def __post_init__(self):
        for cls, (intercept, slope) in self.profiles.items():
            if slope <= 0:
                raise ValueError(f"pathloss slope for {cls!r} must be > 0")

    def with_profile(self, link_class: str, intercept: float, slope: float) -> "PropagationModel":
        profiles = dict(self.profiles)
        profiles[link_class] = (intercept, slope)
        return replace(self, profiles=profiles)


def pathloss(link_class: str, distance_m: float, prop: PropagationModel) -> float:
    """Distance-law pathloss in dB; distance is floored at ``prop.min_distance_m``."""
    if distance_m < 0:
        raise ValueError("distance must be >= 0")
    try:
        intercept, slope = prop.profiles[link_class]
    except KeyError:
        raise KeyError(f"unknown link class {link_class!r}; known: {sorted(prop.profiles)}") from None
    d_km = max(distance_m, prop.min_distance_m) / 1000.0
    return intercept + slope * math.log10(d_km)


def sector_attenuation_db(delta_deg: float, width_3db_deg: float = 70.0, max_att_db: float = 25.0) -> float:
    """3GPP-style parabolic sector pattern: ``min(12*(delta/width)^2, A_max)``."""
    # wrap to [-180, 180]
    delta = (delta_deg + 180.0) % 360.0 - 180.0
    return min(12.0 * (delta / width_3db_deg) ** 2, max_att_db)


def antenna_gain(
    peak_gain_dbi: float,
    azimuth_deg: float | None,
    angle_to_rx_deg: float,
    width_3db_deg: float = 70.0,
    max_att_db: float = 25.0,
) -> float:
    """Antenna gain toward ``angle_to_rx_deg``.

    ``azimuth_deg is None`` means omnidirectional (constant peak gain);
    otherwise the sectorized parabolic pattern is applied.
    """
    if azimuth_deg is None:
        return peak_gain_dbi
    return peak_gain_dbi - sector_attenuation_db(angle_to_rx_deg - azimuth_deg, width_3db_deg, max_att_db)


def noise_floor(bandwidth_hz: float, nf_db: float, noise_density_dbm_hz: float = -174.0) -> float:
    """Thermal noise power over ``bandwidth_hz`` plus receiver noise figure, in dBm."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be > 0")
    return noise_density_dbm_hz + 10.0 * math.log10(bandwidth_hz) + nf_db


def sinr_db(
    desired_dbm: float,
    noise_dbm: float,
    cochannel_dbm: tuple | list = (),
    adjacent_dbm: tuple | list = (),
    acir_db: float = float("inf"),
) -> float:
    """Per-RB SINR in dB.

    Co-channel powers add linearly; adjacent-channel powers are attenuated by
    the ACIR before adding.  ``acir_db=inf`` removes adjacent interference
    entirely.
    """
    denom = db_to_lin(noise_dbm)
    for p in cochannel_dbm:
        denom += db_to_lin(p)
    if math.isfinite(acir_db):
        eps = db_to_lin(-acir_db)
        for p in adjacent_dbm:
            denom += db_to_lin(p) * eps
    return lin_to_db(db_to_lin(desired_dbm) / denom)


def spectral_efficiency(
    sinr_in_db: float,
    eta: float = 0.6,
    cap_bps_hz: float = 4.8,
    sinr_min_db: float = -7.0,
) -> float:
    """Truncated-Shannon link adaptation, bits/s/Hz.

    Zero below ``sinr_min_db``, ``eta*log2(1+sinr)`` in between, saturating at
    ``cap_bps_hz``.
    """
    if sinr_in_db < sinr_min_db:
        return 0.0
    se = eta * math.log2(1.0 + db_to_lin(sinr_in_db))
    return min(se, cap_bps_hz)


@dataclass(frozen=True)
class AciCoupling:
    """Adjacent-channel coupling: a single ACIR scalar plus the segment adjacency map.

    ``adjacency`` maps unordered segment-owner pairs to a bool; it must be
    symmetric.  ``acir_db=inf`` models ideal filters (no ACI).
    """

    acir_db: float = 30.0
    adjacency: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.acir_db > 0):
            raise ValueError("acir_db must be > 0")
        for (a, b), adj in self.adjacency.items():
            if self.adjacency.get((b, a), adj) != adj:
                raise ValueError("adjacency map must be symmetric")

    def is_adjacent(self, a: str, b: str) -> bool:
        return self.adjacency.get((a, b), self.adjacency.get((b, a), False))

    @property
    def leak_factor(self) -> float:
        """Linear fraction of PSD leaking into the adjacent segment."""
        if math.isinf(self.acir_db):
            return 0.0
        return db_to_lin(-self.acir_db)
