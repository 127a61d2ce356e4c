"""Experiment orchestration.

A Scenario fixes everything about one experiment: the topology form (which
layer hosts the server and the clients), the training task and federation
settings, the channel and energy constants, the server placement scheme
and the energy budget. `run_scenario` executes `repeats` independent
instances with seeds derived from the master seed, simulating per round:

    place server -> select cohort -> downlink broadcast -> parallel local
    compute + uplink -> aggregate -> evaluate -> account energy

and halts on the round budget or when the monitored entity's energy budget
would be exceeded (the partial round is then discarded). Repeats are
embarrassingly parallel; per-round means are reported over the rounds all
repeats completed, so every mean covers exactly `repeats` instances.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelParams, LinkBudget, link_rate, per_client_bandwidth, tx_time
from .data import Dataset, load_idx, partition, synth_blobs
from .energy import (CONTINUE, EnergyLedger, NodeProfile, RoundEnergy, UavProfile,
                     apply_budget, round_duration, uav_round_energy,
                     user_compute_energy, user_compute_time)
from .fedavg import FlConfig, FlState, run_round, select_clients
from .models import ModelSpec, evaluate, init_model, param_count
from .placement import Area, Placement, min_sum_dist, random_placement
from .seeding import child_seed, rng as _rng

__all__ = [
    "BlobSource",
    "IdxSource",
    "ShapeSource",
    "load_source",
    "Scenario",
    "Topology",
    "RoundMetrics",
    "RepeatResult",
    "ExperimentResult",
    "build_topology",
    "place_server",
    "run_scenario",
]

FORMS = ("g2a", "a2g", "a2a", "mixed")
PLACEMENT_SCHEMES = ("min_sum_dist", "random", "fixed")


@dataclass(frozen=True)
class BlobSource:
    """Synthetic Gaussian-blob corpus with a held-out test split."""

    num_classes: int = 10
    samples_per_class: int = 600
    test_samples_per_class: int = 100
    input_dim: int = 32
    spread: float = 0.18


@dataclass(frozen=True)
class IdxSource:
    """IDX image/label file pairs (MNIST layout)."""

    train_images: str
    train_labels: str
    test_images: str
    test_labels: str


@dataclass(frozen=True)
class ShapeSource:
    """Data described only by its shape, for timing-only runs.

    Carries the counts the timing model needs (shard sizes, bits per
    sample) without materializing features. Training and evaluation are
    impossible with this source.
    """

    num_samples: int = 60_000
    input_dim: int = 784
    num_classes: int = 10
    bits_per_sample: int = 0  # 0 = (input_dim + 1) * 8


def load_source(source, seed: int):
    """Materialize (train, test) datasets; test is None for ShapeSource."""
    if isinstance(source, BlobSource):
        train = synth_blobs(source.num_classes, source.samples_per_class,
                            source.input_dim, source.spread,
                            seed=child_seed(seed, "train"))
        test = synth_blobs(source.num_classes, source.test_samples_per_class,
                           source.input_dim, source.spread,
                           seed=child_seed(seed, "test"))
        return train, test
    if isinstance(source, IdxSource):
        return (load_idx(source.train_images, source.train_labels),
                load_idx(source.test_images, source.test_labels))
    if isinstance(source, ShapeSource):
        bits = source.bits_per_sample or (source.input_dim + 1) * 8
        labels = np.arange(source.num_samples, dtype=np.int64) % source.num_classes
        train = Dataset(features=np.empty((source.num_samples, 0)),
                        labels=labels, bits_per_sample=bits)
        return train, None
    raise TypeError(f"unknown data source {type(source).__name__}")


_SOURCE_CACHE: dict = {}


def _cached_source(source, seed):
    key = (source, seed)
    if key not in _SOURCE_CACHE:
        _SOURCE_CACHE.clear()  # keep at most one corpus in memory
        _SOURCE_CACHE[key] = load_source(source, seed)
    return _SOURCE_CACHE[key]


@dataclass(frozen=True)
class Scenario:
    fl: FlConfig = FlConfig()
    source: object = BlobSource()
    model_kind: str = "logistic"
    hidden_dim: int = 32
    channel: ChannelParams = ChannelParams()
    uav: UavProfile = UavProfile()
    area: Area = Area()
    form: str = "g2a"
    placement_scheme: str = "min_sum_dist"
    fixed_position: tuple[float, float] = (500.0, 500.0)
    partition_scheme: str = "sharded"
    shards_per_user: int = 2
    energy_budget: float = math.inf
    budget_entity: str = "uav"
    repeats: int = 20
    master_seed: int = 0
    eval_stride: int = 1
    train: bool = True
    broadcast_all: bool = False
    cpu_freq_range: tuple[float, float] = (1.8e9, 2.0e9)
    cycles_per_bit: int = 10
    include_user_compute_energy: bool = False
    kappa: float = 1e-28
    initial_flight_energy: float = 0.0  # flat cost of reaching the hover point
    ground_height: float = 10.0  # server antenna height in the a2g form
    aerial_fraction: float = 0.5  # aerial share of clients in the mixed form
    user_positions: tuple | None = None  # ((x, y), ...) overrides random deployment

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown form {self.form!r}")
        if self.placement_scheme not in PLACEMENT_SCHEMES:
            raise ValueError(f"unknown placement scheme {self.placement_scheme!r}")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.eval_stride < 1:
            raise ValueError("eval_stride must be >= 1")
        if self.energy_budget <= 0:
            raise ValueError("energy_budget must be positive")
        if self.train and isinstance(self.source, ShapeSource):
            raise ValueError("ShapeSource supports timing-only runs (train=False)")


@dataclass
class Topology:
    """Node geometry for one repeat: star links between server and users."""

    user_xy: np.ndarray  # (U, 2)
    user_alt: np.ndarray  # (U,)
    server_alt: float
    placement: Placement | None = None

    def vertical_offsets(self) -> np.ndarray:
        return np.abs(self.server_alt - self.user_alt)

    def horizontal_distances(self) -> np.ndarray:
        if self.placement is None:
            raise ValueError("server not placed yet")
        delta = self.user_xy - np.array([self.placement.x, self.placement.y])
        return np.hypot(delta[:, 0], delta[:, 1])


def build_topology(scenario: Scenario, generator: np.random.Generator) -> Topology:
    """Draw user positions and assign per-layer altitudes for the form."""
    num_users = scenario.fl.num_users
    if scenario.user_positions is not None:
        user_xy = np.asarray(scenario.user_positions, dtype=float)
        if user_xy.shape != (num_users, 2):
            raise ValueError("user_positions shape does not match num_users")
    else:
        user_xy = np.column_stack([
            generator.uniform(0.0, scenario.area.width, size=num_users),
            generator.uniform(0.0, scenario.area.height, size=num_users),
        ])

    flying = scenario.uav.altitude
    if scenario.form == "g2a":
        user_alt = np.zeros(num_users)
        server_alt = flying
    elif scenario.form == "a2g":
        user_alt = np.full(num_users, flying)
        server_alt = scenario.ground_height
    elif scenario.form == "a2a":
        user_alt = np.full(num_users, flying)
        server_alt = flying
    else:  # mixed
        aerial = generator.random(num_users) < scenario.aerial_fraction
        user_alt = np.where(aerial, flying, 0.0)
        server_alt = flying
    return Topology(user_xy=user_xy, user_alt=user_alt, server_alt=server_alt)


def place_server(scenario: Scenario, topo: Topology,
                 generator: np.random.Generator) -> Placement:
    """Apply the configured hovering-placement scheme to a topology."""
    if scenario.placement_scheme == "min_sum_dist":
        p = min_sum_dist(topo.user_xy, topo.vertical_offsets(), tol=1e-6)
        return Placement(p.x, p.y, topo.server_alt)
    if scenario.placement_scheme == "random":
        p = random_placement(scenario.area, generator)
        return Placement(p.x, p.y, topo.server_alt)
    x, y = scenario.fixed_position
    return Placement(float(x), float(y), topo.server_alt)


@dataclass(frozen=True)
class RoundMetrics:
    round: int  # 1-based
    duration: float
    uav_energy: float
    cum_uav_energy: float
    test_loss: float
    test_acc: float
    selected: tuple[int, ...]


@dataclass
class RepeatResult:
    repeat: int
    metrics: list[RoundMetrics]
    halt_reason: str  # "budget" | "max_rounds"
    placement: Placement
    ledger: EnergyLedger

    @property
    def best_accuracy(self) -> float:
        accs = [m.test_acc for m in self.metrics if not math.isnan(m.test_acc)]
        return max(accs) if accs else math.nan

    def cum_energy(self) -> np.ndarray:
        return np.array([m.cum_uav_energy for m in self.metrics])


@dataclass
class ExperimentResult:
    repeats: list[RepeatResult]
    common_rounds: int
    mean_duration: np.ndarray = field(default_factory=lambda: np.empty(0))
    mean_uav_energy: np.ndarray = field(default_factory=lambda: np.empty(0))
    mean_cum_uav_energy: np.ndarray = field(default_factory=lambda: np.empty(0))
    std_cum_uav_energy: np.ndarray = field(default_factory=lambda: np.empty(0))
    mean_test_loss: np.ndarray = field(default_factory=lambda: np.empty(0))
    mean_test_acc: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def halt_reasons(self) -> list[str]:
        return [r.halt_reason for r in self.repeats]

    @property
    def mean_best_accuracy(self) -> float:
        return float(np.mean([r.best_accuracy for r in self.repeats]))


def _downlink_time(scenario, topo, payload_bits, recipients):
    """Broadcast time at the rate of the worst (farthest) recipient."""
    horiz = topo.horizontal_distances()[recipients]
    vert = topo.vertical_offsets()[recipients]
    rates = [link_rate(LinkBudget(scenario.channel.uav_downlink_bandwidth,
                                  scenario.channel.uav_tx_power, v, h),
                       scenario.channel)
             for v, h in zip(vert, horiz)]
    return tx_time(payload_bits, min(rates))


def run_repeat(scenario: Scenario, repeat: int) -> RepeatResult:
    """Simulate one seeded instance of the scenario."""
    seed = scenario.master_seed
    train_data, test_data = _cached_source(scenario.source, child_seed(seed, "data"))
    if scenario.train and test_data is None:
        raise ValueError("training runs need a held-out test dataset")

    topo = build_topology(scenario, _rng(seed, repeat, "positions"))
    topo.placement = place_server(scenario, topo, _rng(seed, repeat, "placement"))

    cpu = _rng(seed, repeat, "cpu").uniform(scenario.cpu_freq_range[0],
                                            scenario.cpu_freq_range[1],
                                            size=scenario.fl.num_users)
    nodes = [NodeProfile(cpu_freq=float(cpu[u]),
                         cycles_per_bit=scenario.cycles_per_bit,
                         tx_power=scenario.channel.user_tx_power,
                         position=(float(topo.user_xy[u, 0]), float(topo.user_xy[u, 1])),
                         altitude=float(topo.user_alt[u]),
                         propulsion_power=(scenario.uav.propulsion_power
                                           if topo.user_alt[u] > 0 else 0.0))
             for u in range(scenario.fl.num_users)]

    shards = partition(train_data, scenario.fl.num_users,
                       scheme=scenario.partition_scheme,
                       shards_per_user=scenario.shards_per_user,
                       seed=child_seed(seed, repeat, "partition"))

    if scenario.train:
        spec = ModelSpec(kind=scenario.model_kind, input_dim=train_data.input_dim,
                         num_classes=int(train_data.labels.max()) + 1,
                         hidden_dim=scenario.hidden_dim if scenario.model_kind == "mlp" else 0,
                         init_seed=child_seed(seed, repeat, "init"))
        state = FlState(global_params=init_model(spec), round_index=0,
                        master_seed=child_seed(seed, repeat))
        n_params = param_count(spec)
    else:
        spec = None
        state = FlState(global_params=np.empty(0), round_index=0,
                        master_seed=child_seed(seed, repeat))
        # payload reflects the model the scenario stands in for
        k = (int(train_data.labels.max()) + 1) if train_data.num_samples else 2
        d = train_data.input_dim
        if isinstance(scenario.source, ShapeSource):
            d, k = scenario.source.input_dim, scenario.source.num_classes
        n_params = param_count(ModelSpec(kind=scenario.model_kind, input_dim=d,
                                         num_classes=k,
                                         hidden_dim=scenario.hidden_dim
                                         if scenario.model_kind == "mlp" else 0))
    payload_bits = n_params * scenario.channel.payload_bits_per_param

    ledger = EnergyLedger()
    if scenario.initial_flight_energy > 0:
        ledger.charge("uav", scenario.initial_flight_energy)
    metrics: list[RoundMetrics] = []
    halt_reason = "max_rounds"
    horiz_all = topo.horizontal_distances()
    vert_all = topo.vertical_offsets()
    all_users = np.arange(scenario.fl.num_users)

    for rnd in range(scenario.fl.max_rounds):
        selected = select_clients(scenario.fl.num_users, scenario.fl.fraction,
                                  _rng(state.master_seed, rnd, "select"))
        b_up = per_client_bandwidth(scenario.channel, len(selected))

        per_client = []
        entry_user_tx, entry_user_comp, entry_user_hover = {}, {}, {}
        for u in selected:
            u = int(u)
            rate_up = link_rate(LinkBudget(b_up, nodes[u].tx_power,
                                           float(vert_all[u]), float(horiz_all[u])),
                                scenario.channel)
            t_up = tx_time(payload_bits, rate_up)
            t_comp = user_compute_time(len(shards[u]), train_data.bits_per_sample,
                                       nodes[u].cycles_per_bit, nodes[u].cpu_freq,
                                       scenario.fl.hyper.local_epochs)
            per_client.append((t_comp, t_up))
            entry_user_tx[u] = nodes[u].tx_power * t_up
            if scenario.include_user_compute_energy:
                cycles = (scenario.fl.hyper.local_epochs * len(shards[u])
                          * train_data.bits_per_sample * nodes[u].cycles_per_bit)
                entry_user_comp[u] = user_compute_energy(nodes[u].cpu_freq, cycles,
                                                         scenario.kappa)

        recipients = all_users if scenario.broadcast_all else selected
        t_down = _downlink_time(scenario, topo, payload_bits, recipients)
        duration = round_duration(t_down, per_client)
        server_energy = uav_round_energy(duration, t_down, scenario.uav)

        for u in selected:
            u = int(u)
            if nodes[u].propulsion_power > 0:
                entry_user_hover[u] = nodes[u].propulsion_power * duration

        ledger.add_round(RoundEnergy(
            hover=scenario.uav.propulsion_power * duration,
            uav_tx=scenario.uav.tx_power * t_down,
            user_tx=entry_user_tx, user_compute=entry_user_comp,
            user_hover=entry_user_hover))
        if apply_budget(ledger, scenario.energy_budget, scenario.budget_entity) != CONTINUE:
            ledger.drop_last_round()
            halt_reason = "budget"
            break

        test_loss = test_acc = math.nan
        if scenario.train:
            state, sel2, _ = run_round(state, scenario.fl, shards, spec, train_data)
            assert np.array_equal(sel2, selected)
            if (rnd + 1) % scenario.eval_stride == 0:
                test_loss, test_acc = evaluate(state.global_params, spec,
                                               test_data.features, test_data.labels)
        else:
            state = FlState(state.global_params, rnd + 1, state.master_seed)

        metrics.append(RoundMetrics(
            round=rnd + 1, duration=duration, uav_energy=server_energy,
            cum_uav_energy=ledger.total("uav"), test_loss=test_loss,
            test_acc=test_acc, selected=tuple(int(u) for u in selected)))

    return RepeatResult(repeat=repeat, metrics=metrics, halt_reason=halt_reason,
                        placement=topo.placement, ledger=ledger)


def _summarize(repeats: list[RepeatResult]) -> ExperimentResult:
    common = min((len(r.metrics) for r in repeats), default=0)
    result = ExperimentResult(repeats=repeats, common_rounds=common)
    if common == 0:
        return result

    def grid(attr):
        return np.array([[getattr(m, attr) for m in r.metrics[:common]]
                         for r in repeats])

    result.mean_duration = grid("duration").mean(axis=0)
    result.mean_uav_energy = grid("uav_energy").mean(axis=0)
    cum = grid("cum_uav_energy")
    result.mean_cum_uav_energy = cum.mean(axis=0)
    result.std_cum_uav_energy = cum.std(axis=0)
    result.mean_test_loss = grid("test_loss").mean(axis=0)
    result.mean_test_acc = grid("test_acc").mean(axis=0)
    return result


def run_scenario(scenario: Scenario, jobs: int = 1) -> ExperimentResult:
    """Run all repeats (optionally in parallel) and aggregate the metrics.

    The result is deterministic for a fixed master seed regardless of
    `jobs`: every repeat derives its own seed streams and the merge is by
    repeat index.
    """
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    indices = range(scenario.repeats)
    if jobs == 1 or scenario.repeats == 1:
        repeats = [run_repeat(scenario, r) for r in indices]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, scenario.repeats)) as pool:
            repeats = list(pool.map(run_repeat, [scenario] * scenario.repeats, indices))
    return _summarize(repeats)
