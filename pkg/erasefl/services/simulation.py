"""
Federated learning simulation under symbol-time accounting.

Builds non-i.i.d. datasets, runs the round loop, replicates it with
independent seeded streams and sweeps rate, SNR and memory depth.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from erasefl.exceptions import ConfigurationError, DomainError
from erasefl.models.aggregation import RoundReception, SchemeKind
from erasefl.models.channel import LinkBudget
from erasefl.models.learning import Dataset, FeatureMap
from erasefl.models.simulation import MonteCarloResult, RoundLog
from erasefl.schemas.experiment import ExperimentBase, ExperimentConfig, SweepSpec
from erasefl.schemas.reports import SummaryRow, SweepRow
from erasefl.services.aggregation import Aggregator
from erasefl.services.analysis import fluctuation_stats
from erasefl.services.channel import ChannelService, average_erasure_probability
from erasefl.services.learning import LocalLearner, stability_threshold

logger = logging.getLogger(__name__)

# spawn_key = (replica, stream)
DATA_STREAM = 0
CHANNEL_STREAM = 1


def replica_streams(base_seed: int, replica: int) -> tuple[np.random.Generator, np.random.Generator]:
    """
    Independent generators for one replica's data and channel draws.

    Each stream is seeded by SeedSequence(base_seed, spawn_key=(replica, s)),
    so adding replicas never changes the streams of existing ones.
    """
    data = np.random.SeedSequence(base_seed, spawn_key=(replica, DATA_STREAM))
    channel = np.random.SeedSequence(base_seed, spawn_key=(replica, CHANNEL_STREAM))
    return np.random.default_rng(data), np.random.default_rng(channel)


def build_feature_map(config: ExperimentBase) -> FeatureMap:
    """Feature map whose domain is the pooled input range [0, U * width)."""
    return FeatureMap(
        degree=config.features.degree,
        basis=config.features.basis,
        domain=(0.0, config.num_users * config.dataset.interval_width),
    )


def generate_noniid_datasets(
    num_users: int,
    dataset_sizes: int | Sequence[int],
    rng: np.random.Generator,
    interval_width: float = 1.0,
    noise_variance: float = 5.0,
    feature_map: FeatureMap | None = None,
) -> list[Dataset]:
    """
    Draw y = x^2 + noise with user u's inputs uniform on its own interval.

    Users are indexed 1..U and user u samples x from [(u-1) w, u w), so the
    datasets occupy disjoint input ranges.

    Args:
        num_users: Number of devices U
        dataset_sizes: D_u for every user, or one size per user
        rng: Generator for inputs and noise
        interval_width: Width w of each user's input interval
        noise_variance: Variance of the zero-mean Gaussian label noise
        feature_map: Feature map stored with each dataset

    Returns:
        One dataset per user, in user order
    """
    if num_users < 1:
        raise DomainError(f"need at least one user, got {num_users}")
    if isinstance(dataset_sizes, int):
        dataset_sizes = [dataset_sizes] * num_users
    if len(dataset_sizes) != num_users or any(size < 1 for size in dataset_sizes):
        raise DomainError(f"invalid dataset sizes {list(dataset_sizes)} for {num_users} users")
    if feature_map is None:
        feature_map = FeatureMap(domain=(0.0, num_users * interval_width))

    datasets = []
    for u, size in enumerate(dataset_sizes):
        x = rng.uniform(u * interval_width, (u + 1) * interval_width, size)
        # uniform() may return the upper endpoint after rounding
        x = np.minimum(x, np.nextafter((u + 1) * interval_width, -np.inf))
        noise = rng.normal(0.0, np.sqrt(noise_variance), size)
        datasets.append(Dataset(x=x, y=x ** 2 + noise, feature_map=feature_map))
    return datasets


def derive_rounds(config: ExperimentConfig, link: LinkBudget) -> int:
    """Rounds that fit the time budget (each lasts n symbols), capped by num_rounds."""
    candidates = []
    if config.time_budget is not None:
        candidates.append(config.time_budget // link.n_symbols)
    if config.num_rounds is not None:
        candidates.append(config.num_rounds)
    rounds = min(candidates)
    if rounds < 1:
        raise ConfigurationError(
            f"time budget of {config.time_budget} symbols is shorter than one "
            f"packet of n = {link.n_symbols} symbols (k = {link.k_bits}, R = {link.rate}); "
            "no round fits"
        )
    return rounds


@dataclass
class SimulationState:
    """Everything one replica of an experiment mutates or reads per round."""

    config: ExperimentConfig
    link: LinkBudget
    channel: ChannelService
    learner: LocalLearner
    aggregator: Aggregator
    round_index: int = 0


def initialize(config: ExperimentConfig, data_rng: np.random.Generator) -> SimulationState:
    """Generate the datasets and set up the CN with omega^(0) = 0."""
    link = LinkBudget.from_config(config.channel)
    feature_map = build_feature_map(config)
    datasets = generate_noniid_datasets(
        config.num_users,
        config.dataset_sizes(),
        data_rng,
        interval_width=config.dataset.interval_width,
        noise_variance=config.dataset.noise_variance,
        feature_map=feature_map,
    )
    learner = LocalLearner(datasets, config.learner)
    aggregator = Aggregator(config.scheme, np.zeros(feature_map.dimension), config.num_users)
    return SimulationState(
        config=config,
        link=link,
        channel=ChannelService(link),
        learner=learner,
        aggregator=aggregator,
    )


def run_round(state: SimulationState, rng: np.random.Generator) -> RoundLog:
    """
    One communication round: local updates, uplink, aggregation, broadcast.

    The channel is drawn for every scheme so that all schemes consume the
    channel stream identically; the error-free scheme then ignores erasures.
    """
    num_users = state.config.num_users
    local_params = state.learner.train(state.aggregator.current_global)
    transmission = state.channel.transmit(rng, num_users)
    indicators = transmission.indicators
    if state.config.scheme.kind == SchemeKind.ERROR_FREE:
        indicators = np.ones(num_users, dtype=np.int8)

    reception = RoundReception.from_arrays(indicators, local_params, state.learner.dataset_sizes)
    new_global = state.aggregator.aggregate(reception)
    mse = state.learner.mse(new_global)

    t = state.round_index
    state.round_index += 1
    logger.debug("round %d: %d/%d received, mse %.6g", t, reception.participation, num_users, mse)
    return RoundLog(
        round=t,
        elapsed_symbols=(t + 1) * state.link.n_symbols,
        indicators=indicators,
        participation=reception.participation,
        mse=mse,
        snr=np.asarray(transmission.fading.gamma),
    )


def run_experiment(config: ExperimentConfig, replica: int = 0) -> list[RoundLog]:
    """Run every round of one replica and return the round logs."""
    data_rng, channel_rng = replica_streams(config.base_seed, replica)
    state = initialize(config, data_rng)
    rounds = derive_rounds(config, state.link)
    if replica == 0:
        threshold = stability_threshold(state.learner.datasets)
        if config.learner.eta > threshold:
            logger.warning(
                "learning rate %.4g exceeds 1/L = %.4g of the pooled data; "
                "descent is not guaranteed", config.learner.eta, threshold
            )
    return [run_round(state, channel_rng) for _ in range(rounds)]


def _replica_series(config: ExperimentConfig, replica: int) -> tuple[np.ndarray, np.ndarray]:
    logs = run_experiment(config, replica)
    return (
        np.array([log.mse for log in logs]),
        np.array([log.participation for log in logs], dtype=int),
    )


class SimulationService:
    """Monte Carlo replication and parameter sweeps over a worker pool."""

    def __init__(self, workers: int = 1):
        self.workers = max(1, workers)

    def run_monte_carlo(self, config: ExperimentConfig) -> MonteCarloResult:
        """
        Run config.replicas independent replicas and average their MSE.

        Replica i uses the streams of (base_seed, i); the reduction runs in
        replica order after all replicas finish, so the result does not
        depend on the worker count.
        """
        link = LinkBudget.from_config(config.channel)
        rounds = derive_rounds(config, link)
        logger.info(
            "%s: scheme %s, R = %g, gamma0 = %g dB, n = %d, %d rounds x %d replicas on %d workers",
            config.name, config.scheme.label, config.channel.rate, config.channel.gamma0_db,
            link.n_symbols, rounds, config.replicas, self.workers,
        )
        replicas = range(config.replicas)
        if self.workers == 1 or config.replicas == 1:
            series = [_replica_series(config, i) for i in replicas]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                series = list(pool.map(lambda i: _replica_series(config, i), replicas))

        replica_mse = np.vstack([mse for mse, _ in series])
        window = min(config.trailing_window, rounds)
        trailing = (
            float(np.mean([fluctuation_stats(s, window).variance for s in replica_mse]))
            if window >= 2 else 0.0
        )
        finals = replica_mse[:, -1]
        result = MonteCarloResult(
            replica_mse=replica_mse,
            replica_participation=np.vstack([p for _, p in series]),
            mean_mse=replica_mse.mean(axis=0),
            final_mse_mean=float(finals.mean()),
            final_mse_var=float(finals.var(ddof=1)) if finals.size > 1 else 0.0,
            trailing_mse_var=trailing,
            rounds=rounds,
            n_symbols=link.n_symbols,
            mean_erasure=average_erasure_probability(link),
        )
        logger.info("%s: final mean MSE %.6g", config.scheme.label, result.final_mse_mean)
        return result

    @staticmethod
    def summarize(config: ExperimentConfig, result: MonteCarloResult) -> SummaryRow:
        """Summary row of one Monte Carlo run."""
        return SummaryRow(
            scheme=config.scheme.label,
            rate=config.channel.rate,
            gamma0_db=config.channel.gamma0_db,
            m=config.scheme.depth,
            rounds=result.rounds,
            final_mse_mean=result.final_mse_mean,
            final_mse_var=result.final_mse_var,
            trailing_mse_var=result.trailing_mse_var,
            mean_erasure=result.mean_erasure,
        )

    def sweep(self, spec: SweepSpec, base_config: ExperimentConfig) -> list[SweepRow]:
        """
        Run the Monte Carlo experiment at every (rate, SNR, depth) grid point.

        Duplicate axis values are dropped with a warning. The depth axis
        only applies to the global-memory scheme.
        """
        rates = _deduplicate(spec.rates, "rates")
        snrs = _deduplicate(spec.gamma0_db, "gamma0_db")
        scheme = base_config.scheme
        if scheme.kind == SchemeKind.GLOBAL_MEMORY and spec.memory_depths:
            schemes = [scheme.with_depth(m) for m in _deduplicate(spec.memory_depths, "memory_depths")]
        else:
            if spec.memory_depths:
                logger.warning("memory_depths ignored for scheme %s", scheme.label)
            schemes = [scheme]
        time_budget = spec.time_budget if spec.time_budget is not None else base_config.time_budget
        logger.info("sweep grid: %d rates x %d SNRs x %d depths",
                    len(rates), len(snrs), len(schemes))

        rows = []
        for rate in rates:
            for gamma0_db in snrs:
                for point_scheme in schemes:
                    config = base_config.model_copy(update={
                        "channel": base_config.channel.model_copy(
                            update={"rate": rate, "gamma0_db": gamma0_db}
                        ),
                        "scheme": point_scheme,
                        "time_budget": time_budget,
                    })
                    result = self.run_monte_carlo(config)
                    rows.append(SweepRow(
                        scheme=point_scheme.label,
                        rate=rate,
                        gamma0_db=gamma0_db,
                        m=point_scheme.depth,
                        rounds=result.rounds,
                        final_mse=result.final_mse_mean,
                    ))
        return rows


def _deduplicate(values: Sequence, axis: str) -> list:
    unique = list(dict.fromkeys(values))
    if len(unique) != len(values):
        logger.warning("duplicate %s values removed: %s -> %s", axis, list(values), unique)
    return unique
