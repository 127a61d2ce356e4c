"""Air-ground wireless link model.

A link between a hovering server and a node on the ground is described by its
bandwidth, transmit power and geometry (vertical offset H, horizontal
distance R). The achievable rate is the Shannon capacity under a
distance-squared path loss:

    rate = B * log2(1 + alpha0 * p / (sigma2 * (H^2 + R^2)))

Everything internal is in SI linear units (Hz, W, m). dB / dBm values are
converted once at the configuration boundary.
"""

import math
from dataclasses import dataclass

__all__ = [
    "ChannelParams",
    "LinkBudget",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watts",
    "watts_to_dbm",
    "link_rate",
    "tx_time",
    "per_client_bandwidth",
]


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** (x_dbm / 10.0) * 1e-3


def watts_to_dbm(x_w: float) -> float:
    return 10.0 * math.log10(x_w / 1e-3)


@dataclass(frozen=True)
class ChannelParams:
    """Physical constants shared by every link in a scenario.

    Defaults: B = 1 MHz total uplink spectrum, reference gain -50 dB,
    noise power -90 dBm, user transmit power 100 mW, server (UAV) transmit
    power 10 mW over its own 1 MHz downlink band.
    """

    total_bandwidth: float = 1e6
    ref_gain: float = 1e-5
    noise: float = 1e-12
    user_tx_power: float = 0.1
    uav_tx_power: float = 0.01
    uav_downlink_bandwidth: float = 1e6
    payload_bits_per_param: int = 32
    uplink_bandwidth_override: float | None = None

    def __post_init__(self):
        for name in ("total_bandwidth", "ref_gain", "noise", "user_tx_power",
                     "uav_tx_power", "uav_downlink_bandwidth"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.payload_bits_per_param < 1:
            raise ValueError("payload_bits_per_param must be >= 1")


@dataclass(frozen=True)
class LinkBudget:
    """Per-link quantities: bandwidth, transmit power and geometry."""

    bandwidth: float
    tx_power: float
    altitude: float
    horizontal_distance: float

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        if self.tx_power <= 0:
            raise ValueError("tx_power must be positive")
        # altitude 0 is allowed for same-layer links as long as the nodes
        # are not co-located
        if self.altitude < 0 or self.horizontal_distance < 0:
            raise ValueError("distances must be non-negative")
        if self.altitude == 0 and self.horizontal_distance == 0:
            raise ValueError("link endpoints coincide")


def link_rate(link: LinkBudget, params: ChannelParams) -> float:
    """Shannon rate of the link in bit/s."""
    dist_sq = link.altitude ** 2 + link.horizontal_distance ** 2
    snr = params.ref_gain * link.tx_power / (params.noise * dist_sq)
    return link.bandwidth * math.log2(1.0 + snr)


def tx_time(payload_bits: float, rate: float) -> float:
    """Seconds needed to push `payload_bits` through a link at `rate` bit/s."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    if payload_bits < 0:
        raise ValueError("payload_bits must be non-negative")
    return payload_bits / rate


def per_client_bandwidth(params: ChannelParams, cohort_size: int) -> float:
    """Uplink bandwidth per selected client: B / m, unless overridden."""
    if params.uplink_bandwidth_override is not None:
        return params.uplink_bandwidth_override
    if cohort_size < 1:
        raise ValueError("cohort_size must be >= 1")
    return params.total_bandwidth / cohort_size
