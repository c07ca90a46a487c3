"""The T-round admission process: single trials and trial ensembles.

Seeding contract: trial i of an ensemble uses a 64-bit seed derived from
(master_seed, i) via numpy's SeedSequence spawn keys, so results are
independent of worker count and schedule. Ensemble aggregates are integer
sums reduced in the coordinating thread, which makes them bit-identical
across any parallel execution order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import run_rounds
from .geometry import Domain

RESERVE_PAIRS = 16


@dataclass
class Trajectory:
    """Per-round record of one trial."""

    seed: int
    sizes: np.ndarray  # (T + 1,) group cardinality, index 0 = initial size k
    accepted: np.ndarray  # (T,) bool
    hull_vertex_counts: np.ndarray  # (T + 1,)
    redraws: int = 0


@dataclass
class EnsembleStats:
    """Cross-trial aggregates of an ensemble run."""

    domain: str
    rounds: int
    trials: int
    k: int
    master_seed: int
    mean_size: np.ndarray  # (T + 1,)
    stderr_size: np.ndarray  # (T + 1,)
    acceptance_rate: np.ndarray  # (T,) empirical Pr[acceptance in round t]


def trial_seed(master_seed: int, index: int) -> int:
    """Counter-based 64-bit seed for trial `index` of an ensemble."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _draw_trial_arrays(domain: Domain, rounds: int, k: int, seed: int):
    """Fixed draw order: k initial members, T candidate pairs, reserve pairs."""
    rng = np.random.default_rng(seed)
    init = domain.sample(rng, k)
    cand = domain.sample(rng, 2 * rounds).reshape(rounds, 4)
    reserve = domain.sample(rng, 2 * RESERVE_PAIRS).reshape(RESERVE_PAIRS, 4)
    return init, cand, reserve


def run_trial(domain: Domain, rounds: int, k: int = 1, seed: int = 0) -> Trajectory:
    """Run one T-round trial; deterministic given (domain, rounds, k, seed).

    Each round draws two candidates uniformly, elects the one (if any) that
    every current hull vertex weakly prefers, and inserts the winner.
    Exactly coincident candidate draws are replaced from a reserve block and
    counted in `redraws`.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    init, cand, reserve = _draw_trial_arrays(domain, rounds, k, seed)
    accepted = np.zeros(rounds, dtype=np.bool_)
    hull_counts = np.zeros(rounds + 1, dtype=np.int64)
    redraws = run_rounds(init, cand, reserve, accepted, hull_counts)
    sizes = np.empty(rounds + 1, dtype=np.int64)
    sizes[0] = k
    np.cumsum(accepted, out=sizes[1:])
    sizes[1:] += k
    return Trajectory(
        seed=seed,
        sizes=sizes,
        accepted=accepted,
        hull_vertex_counts=hull_counts,
        redraws=int(redraws),
    )


def run_ensemble(
    domain: Domain,
    rounds: int,
    trials: int,
    k: int = 1,
    master_seed: int = 0,
    workers: int = 1,
) -> EnsembleStats:
    """Run `trials` independent trials and aggregate per-round statistics.

    mean_size[t] and stderr_size[t] are the sample mean and standard error
    of the group size after round t; acceptance_rate[t - 1] estimates the
    probability of an acceptance in round t.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    workers = max(1, int(workers))
    seeds = [trial_seed(master_seed, i) for i in range(trials)]

    acc_count = np.zeros(rounds, dtype=np.int64)
    size_sum = np.zeros(rounds + 1, dtype=np.int64)
    size_sq = np.zeros(rounds + 1, dtype=np.int64)

    def one(seed: int) -> tuple[np.ndarray, np.ndarray]:
        traj = run_trial(domain, rounds, k=k, seed=seed)
        return traj.accepted, traj.sizes

    if workers == 1:
        results = map(one, seeds)
        for accepted, sizes in results:
            acc_count += accepted
            size_sum += sizes
            size_sq += sizes * sizes
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for accepted, sizes in pool.map(one, seeds):
                acc_count += accepted
                size_sum += sizes
                size_sq += sizes * sizes

    n = float(trials)
    mean = size_sum / n
    if trials > 1:
        var = (size_sq - n * mean * mean) / (n - 1.0)
        stderr = np.sqrt(np.maximum(var, 0.0) / n)
    else:
        stderr = np.zeros(rounds + 1)
    return EnsembleStats(
        domain=domain.kind,
        rounds=rounds,
        trials=trials,
        k=k,
        master_seed=master_seed,
        mean_size=mean,
        stderr_size=stderr,
        acceptance_rate=acc_count / n,
    )
