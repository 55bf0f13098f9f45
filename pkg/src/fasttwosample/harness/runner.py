"""Power and Type-I experiments over a sweep of sample size, dimension or noise.

Every replication is a pure function of derived seeds::

    rep_seed  = mix(seed, sweep_index, test_index, replication)
    data_seed = mix(rep_seed, 1)
    test_seed = mix(rep_seed, 2)

so rows come out identical whatever the worker count or completion order.
Elapsed times cover the test call only, not data generation.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from .. import core, datagen, tuning
from ..analytic_tests import run_analytic_test
from ..errors import DataError, DomainError
from ..mmd_tests import block_mmd_test, permutation_mmd_test, subsampled_mmd_test
from .csvio import load_csv_pair

__all__ = [
    "PowerRow",
    "TuningRecord",
    "wald_interval",
    "make_test",
    "run_replication",
    "run_power_curve",
    "run_type1",
]

WALD_Z = 2.57
_TUNE_TAG = 0x74756E65


def wald_interval(alpha, replications):
    """The 99% band ``alpha +- 2.57 sqrt(alpha (1 - alpha) / m)``."""
    half = WALD_Z * math.sqrt(alpha * (1.0 - alpha) / replications)
    return alpha - half, alpha + half


@dataclass(frozen=True)
class PowerRow:
    """Rejection rate of one test at one sweep value.

    ``wald_low``/``wald_high`` bound the rate expected from a level-alpha test
    under the null; a power estimate above ``wald_high`` is a significant
    excess over the nominal size.
    """

    sweep_value: object
    test: str
    rate: float
    wald_low: float
    wald_high: float
    mean_elapsed: float
    replications: int
    flags: tuple = ()


@dataclass(frozen=True)
class TuningRecord:
    sweep_value: object
    test: str
    gamma: float
    table: list = field(default_factory=list)


def make_test(entry, alpha):
    """Wrap a config test entry as ``f(X, Y, gamma, seed) -> TestOutcome``."""
    m = entry.method
    if m in ("me", "scf", "cf"):
        return partial(_analytic, m, entry.J, alpha)
    if m == "block":
        return partial(_block, entry.B, alpha)
    if m == "mmd":
        return partial(_perm, entry.permutations, alpha)
    if m == "sub":
        return partial(_sub, entry.permutations, alpha)
    raise DomainError(f"unknown test method {m!r}")


def _analytic(kind, J, alpha, X, Y, gamma, seed):
    return run_analytic_test(kind, X, Y, J, gamma, alpha=alpha, seed=seed)


def _block(B, alpha, X, Y, gamma, seed):
    return block_mmd_test(X, Y, gamma, B, alpha=alpha)


def _perm(b, alpha, X, Y, gamma, seed):
    return permutation_mmd_test(X, Y, gamma, permutations=b, alpha=alpha, seed=seed)


def _sub(b, alpha, X, Y, gamma, seed):
    return subsampled_mmd_test(X, Y, gamma, permutations=b, alpha=alpha, seed=seed)


class DataSource:
    """Draws (X, Y) pairs for one sweep value.

    ``null=True`` draws both samples from P. For CSV data, the rows of each
    file are split once into a training part (for bootstrap tuning) and an
    evaluation part that replications subsample without replacement.
    """

    def __init__(self, config, sweep_value, csv_data=None):
        self.config = config
        self.n = config.n
        self.D = config.D
        self.noise = config.noise
        if config.sweep == "n":
            self.n = int(sweep_value)
        elif config.sweep == "D":
            self.D = int(sweep_value)
        else:
            self.noise = float(sweep_value)
        self.csv = csv_data

    def draw(self, seed, null=False, n=None):
        n = n or self.n
        cfg = self.config
        gen = cfg.generator
        if gen in ("dataset_one", "dataset_two"):
            fn = datagen.dataset_one if gen == "dataset_one" else datagen.dataset_two
            if null:
                # both samples from P = N(0, I)
                X, _ = fn(n, self.D, core.mix(seed, 0))
                Y, _ = fn(n, self.D, core.mix(seed, 1))
            else:
                X, Y = fn(n, self.D, seed)
        elif gen == "blobs":
            X = datagen.blobs(n, cfg.blobs, "P", core.mix(seed, 0))
            Y = datagen.blobs(n, cfg.blobs, "P" if null else "Q", core.mix(seed, 1))
        else:
            X, Y = self._draw_csv(seed, null, n)
        if self.noise > 0:
            X = datagen.add_noise(X, self.noise, core.mix(seed, 2))
            Y = datagen.add_noise(Y, self.noise, core.mix(seed, 3))
        return X, Y

    def _draw_csv(self, seed, null, n):
        (_, X_eval), (_, Y_eval) = self.csv
        gen = core.rng(seed)
        if null:
            if 2 * n > len(X_eval):
                raise DataError(f"null draw needs {2 * n} evaluation rows of {self.config.csv_x}, have {len(X_eval)}")
            idx = gen.permutation(len(X_eval))
            return X_eval[idx[:n]], X_eval[idx[n : 2 * n]]
        if n > min(len(X_eval), len(Y_eval)):
            raise DataError(
                f"sample size {n} exceeds evaluation rows ({self.config.csv_x}: {len(X_eval)}, "
                f"{self.config.csv_y}: {len(Y_eval)})"
            )
        return (
            X_eval[gen.choice(len(X_eval), n, replace=False)],
            Y_eval[gen.choice(len(Y_eval), n, replace=False)],
        )


def _split_csv(config):
    X, Y = load_csv_pair(config.csv_x, config.csv_y)
    parts = []
    for i, A in enumerate((X, Y)):
        idx = core.rng(core.mix(config.seed, 0x637376, i)).permutation(len(A))
        k = int(round(config.csv_train_fraction * len(A)))
        parts.append((A[idx[:k]], A[idx[k:]]))
    return parts


def _tune(config, source, entry, test, sweep_index, test_index, null):
    seed = core.mix(config.seed, _TUNE_TAG, sweep_index, test_index)
    grid = tuning.parse_grid(config.tune_grid)
    if config.generator == "csv-pair":
        (X_train, _), (Y_train, _) = source.csv
        if null:
            half = len(X_train) // 2
            X_train, Y_train = X_train[:half], X_train[half : 2 * half]
        return tuning.select_scaling(test, X_train, Y_train, grid, config.tune_reps, "bootstrap", seed)
    n_train = config.tune_n or source.n
    draw = partial(_tuning_draw, source, null, n_train)
    return tuning.select_scaling(test, grid=grid, reps=config.tune_reps, resample="fresh", seed=seed, draw=draw)


def _tuning_draw(source, null, n, seed):
    # tuning seeds live under the tuning tag, so they never coincide with evaluation draws
    return source.draw(core.mix(seed, _TUNE_TAG), null=null, n=n)


def run_replication(config, sweep_index, test_index, replication, gamma=None, null=False, csv_data=None):
    """Generate data for one replication, run one test entry, return its TestOutcome."""
    entry = config.tests[test_index]
    if gamma is None:
        if entry.gamma == "tune":
            raise DomainError(f"test {entry.label()} needs a tuned gamma")
        gamma = entry.gamma
    if config.generator == "csv-pair" and csv_data is None:
        csv_data = _split_csv(config)
    source = DataSource(config, config.values[sweep_index], csv_data)
    rep_seed = core.mix(config.seed, sweep_index, test_index, replication)
    X, Y = source.draw(core.mix(rep_seed, 1), null=null)
    test = make_test(entry, config.alpha)
    start = time.perf_counter()
    out = test(X, Y, gamma, core.mix(rep_seed, 2))
    return replace(out, elapsed=time.perf_counter() - start)


def _replication_task(args):
    config, si, ti, r, gamma, null, csv_data = args
    return run_replication(config, si, ti, r, gamma, null, csv_data)


def _clean(msg):
    return " ".join(str(msg).replace(";", ",").split())


def _run(config, null, tuning_log=None):
    config.validate()
    csv_data = _split_csv(config) if config.generator == "csv-pair" else None
    workers = 1 if config.benchmark else max(1, config.workers)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    lo, hi = wald_interval(config.alpha, config.replications)
    rows = []
    try:
        for si, value in enumerate(config.values):
            source = DataSource(config, value, csv_data)
            for ti, entry in enumerate(config.tests):
                label = entry.label()
                if entry.method == "mmd" and source.n > config.mmd_cap:
                    rows.append(PowerRow(value, label, math.nan, lo, hi, math.nan, 0, ("skipped:n>mmd_cap",)))
                    continue
                flags = []
                try:
                    gamma = entry.gamma
                    if gamma == "tune":
                        test = make_test(entry, config.alpha)
                        gamma, table = _tune(config, source, entry, test, si, ti, null)
                        if tuning_log is not None:
                            tuning_log.append(TuningRecord(value, label, gamma, table))
                    flags.append(f"gamma=2^{math.log2(gamma):g}")
                    tasks = [(config, si, ti, r, gamma, null, csv_data) for r in range(config.replications)]
                    if pool is None:
                        outcomes = [_replication_task(t) for t in tasks]
                    else:
                        outcomes = list(pool.map(_replication_task, tasks))
                except Exception as exc:  # noqa: BLE001 - a failing entry only loses its own row
                    rows.append(
                        PowerRow(value, label, math.nan, lo, hi, math.nan, 0, (f"error:{type(exc).__name__}: {_clean(exc)}",))
                    )
                    continue
                rejects = sum(o.reject for o in outcomes)
                rate = rejects / config.replications
                if any("degenerate" in o.flags for o in outcomes):
                    flags.append("degenerate_blocks")
                if null:
                    flags.append("in_band" if lo <= rate <= hi else "out_of_band")
                mean_elapsed = float(np.mean([o.elapsed for o in outcomes]))
                rows.append(PowerRow(value, label, rate, lo, hi, mean_elapsed, config.replications, tuple(flags)))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


def run_power_curve(config, tuning_log=None):
    """Rejection rates for every (sweep value, test) under the configured alternative."""
    return _run(config, null=False, tuning_log=tuning_log)


def run_type1(config, tuning_log=None):
    """Rejection rates with both samples drawn from P; rows are flagged in/out of the Wald band."""
    return _run(config, null=True, tuning_log=tuning_log)
