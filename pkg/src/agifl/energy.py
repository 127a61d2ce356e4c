"""Per-round timing and energy accounting.

A round starts with the server broadcasting the global model (one
transmission at the rate of the worst recipient), after which the selected
clients compute and upload in parallel on orthogonal sub-bands:

    t_round = t_down + max_u (t_comp_u + t_up_u)

The hovering server burns propulsion power for the whole round and
transmit power during the downlink only. Users pay transmit energy during
their upload; their compute energy (effective-capacitance model
kappa * f^2 * cycles) is tracked only when enabled, since the headline
comparison concerns the server's energy.
"""

import math
from dataclasses import dataclass, field

__all__ = [
    "UavProfile",
    "NodeProfile",
    "RoundEnergy",
    "EnergyLedger",
    "CONTINUE",
    "HALT",
    "user_compute_time",
    "user_compute_energy",
    "round_duration",
    "uav_round_energy",
    "apply_budget",
]

CONTINUE = "continue"
HALT = "halt"

DEFAULT_KAPPA = 1e-28


@dataclass(frozen=True)
class UavProfile:
    """Aerial parameter server: 10 mW transmitter, 100 W rotors."""

    tx_power: float = 0.01
    propulsion_power: float = 100.0
    altitude: float = 100.0

    def __post_init__(self):
        if self.tx_power <= 0 or self.propulsion_power <= 0 or self.altitude <= 0:
            raise ValueError("UavProfile fields must be positive")


@dataclass(frozen=True)
class NodeProfile:
    """A training participant's compute and radio characteristics."""

    cpu_freq: float  # Hz
    cycles_per_bit: int = 10
    tx_power: float = 0.1
    position: tuple[float, float] = (0.0, 0.0)
    altitude: float = 0.0
    propulsion_power: float = 0.0  # > 0 for aerial clients

    def __post_init__(self):
        if self.cpu_freq <= 0:
            raise ValueError("cpu_freq must be positive")
        if self.cycles_per_bit < 1:
            raise ValueError("cycles_per_bit must be >= 1")
        if self.tx_power <= 0:
            raise ValueError("tx_power must be positive")


@dataclass(frozen=True)
class RoundEnergy:
    """Energy breakdown of one completed round, joules."""

    hover: float = 0.0
    uav_tx: float = 0.0
    user_tx: dict = field(default_factory=dict)  # user id -> J
    user_compute: dict = field(default_factory=dict)
    user_hover: dict = field(default_factory=dict)  # aerial clients only

    def server_total(self) -> float:
        return self.hover + self.uav_tx

    def user_total(self, user: int) -> float:
        return (self.user_tx.get(user, 0.0) + self.user_compute.get(user, 0.0)
                + self.user_hover.get(user, 0.0))


class EnergyLedger:
    """Cumulative per-entity energy, updated once per completed round.

    Entities are "uav" (the server) and "user:<id>". Rounds can be dropped
    again while a budget decision is pending, so a round that would
    overdraw the budget is never counted. One-off costs (such as a flat
    flight-to-hover-point charge) count toward the totals without
    affecting the round count.
    """

    def __init__(self):
        self.rounds: list[RoundEnergy] = []
        self._totals: dict[str, float] = {}

    def charge(self, entity: str, joules: float) -> None:
        if joules < 0:
            raise ValueError("charge must be non-negative")
        self._bump(entity, joules)

    def add_round(self, entry: RoundEnergy) -> None:
        self.rounds.append(entry)
        self._bump("uav", entry.server_total())
        for user, joules in entry.user_tx.items():
            self._bump(f"user:{user}", joules)
        for user, joules in entry.user_compute.items():
            self._bump(f"user:{user}", joules)
        for user, joules in entry.user_hover.items():
            self._bump(f"user:{user}", joules)

    def drop_last_round(self) -> RoundEnergy:
        entry = self.rounds.pop()
        self._bump("uav", -entry.server_total())
        for user in set(entry.user_tx) | set(entry.user_compute) | set(entry.user_hover):
            self._bump(f"user:{user}", -entry.user_total(user))
        return entry

    def total(self, entity: str = "uav") -> float:
        return self._totals.get(entity, 0.0)

    def _bump(self, entity: str, joules: float) -> None:
        self._totals[entity] = self._totals.get(entity, 0.0) + joules

    def __len__(self):
        return len(self.rounds)


def user_compute_time(samples: int, bits_per_sample: int, cycles_per_bit: int,
                      cpu_freq: float, epochs: int) -> float:
    """Seconds a user spends on local training.

    Every bit of the local data costs `cycles_per_bit` CPU cycles, once per
    epoch: epochs * samples * bits_per_sample * cycles_per_bit / cpu_freq.
    """
    if cpu_freq <= 0:
        raise ValueError("cpu_freq must be positive")
    return epochs * samples * bits_per_sample * cycles_per_bit / cpu_freq


def user_compute_energy(cpu_freq: float, total_cycles: float,
                        kappa: float = DEFAULT_KAPPA) -> float:
    """Effective-capacitance compute energy: kappa * f^2 * cycles."""
    return kappa * cpu_freq ** 2 * total_cycles


def round_duration(t_down: float, per_client) -> float:
    """t_down + max over clients of (t_comp + t_up).

    Clients compute and upload in parallel; uploads use orthogonal
    sub-bands, so the slowest client gates the round.
    """
    per_client = list(per_client)
    if not per_client:
        raise ValueError("round has no clients")
    if t_down < 0 or any(tc < 0 or tu < 0 for tc, tu in per_client):
        raise ValueError("times must be non-negative")
    return t_down + max(tc + tu for tc, tu in per_client)


def uav_round_energy(t_round: float, t_down: float, profile: UavProfile) -> float:
    """Server energy for one round: hover the whole round, transmit during
    the downlink only."""
    if t_down > t_round:
        raise ValueError("downlink time exceeds round duration")
    return profile.propulsion_power * t_round + profile.tx_power * t_down


def apply_budget(ledger: EnergyLedger, budget: float, entity: str = "uav") -> str:
    """Budget check after recording a round.

    Returns HALT when the entity's cumulative energy, including the round
    just recorded, exceeds the budget; the caller then drops that round so
    a partial round is never counted. An infinite budget never halts.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if math.isinf(budget):
        return CONTINUE
    return HALT if ledger.total(entity) > budget else CONTINUE
