"""Monte Carlo sweeps of the two-round game over ``(n, p, q)`` grids."""
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd
from django.core.exceptions import ImproperlyConfigured
from scipy import optimize, stats
from sklearn.isotonic import IsotonicRegression

from ramsey_lab.conf import configure, settings, snapshot
from ramsey_lab.density import CRITICAL_WINDOW, LOWER, completion_threshold
from ramsey_lab.exceptions import BracketingError, FalsificationError
from ramsey_lab.games import FIRST_ROUND_FAILURE, SUCCESS, StrategySpec, two_round_game
from ramsey_lab.graphs import RngSpec

logger = logging.getLogger(__name__)

CSV_HEADER = ('n', 'p', 'q', 'trials', 'successes', 'wilson_lo', 'wilson_hi', 'crrbb_mean', 'crbbbb_mean',
              'dangerous_pairs_mean', 'dangerous_k12_mean', 'first_round_failures', 'runtime_ms')

DEFAULT_Q_MULTIPLES = (1e-2, 1e-1, 1.0, 1e1, 1e2)


def threshold_scale(n, p):
    """The ``q`` that grids of multiples are centred on.

    The formula of the regime ``p`` falls in; the geometric mean of both formulas inside
    the critical window; the upper formula above the range, where the threshold is zero.
    """

    evaluation = completion_threshold(n, p)
    if evaluation.regime == CRITICAL_WINDOW:
        return math.sqrt(evaluation.lower_branch * evaluation.upper_branch)
    if evaluation.regime == LOWER or evaluation.value is None:
        return evaluation.lower_branch
    return evaluation.upper_branch


@dataclass
class SweepConfig:

    """One sweep.

    ``p`` comes from ``gammas`` (``p = n^-gamma``) or explicit ``p_values``. ``q`` comes from
    explicit ``q_values``, from ``q_range`` ``[low, high, count]`` (log-spaced), or from
    ``q_multiples`` of :func:`threshold_scale`, capped at 1.
    """

    n_values: List[int]
    gammas: List[float] = field(default_factory=list)
    p_values: List[float] = field(default_factory=list)
    q_values: List[float] = field(default_factory=list)
    q_multiples: List[float] = field(default_factory=lambda: list(DEFAULT_Q_MULTIPLES))
    q_range: Optional[List[float]] = None
    trials: int = 100
    strategy: StrategySpec = field(default_factory=StrategySpec)
    seed: int = 0
    workers: int = 1
    arrival: str = 'random'
    output: Optional[str] = None
    format: str = 'csv'
    timing: bool = False

    def __post_init__(self):
        if isinstance(self.strategy, dict):
            self.strategy = StrategySpec.from_dict(self.strategy)

    @classmethod
    def from_dict(cls, data):
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ImproperlyConfigured('unknown sweep settings: %s' % ', '.join(unknown))
        config = cls(**data)
        config.validate()
        return config

    @classmethod
    def from_file(cls, path):
        with open(path, encoding='utf-8') as f:
            return cls.from_dict(json.load(f))

    def to_dict(self):
        data = asdict(self)
        data['strategy'] = self.strategy.to_dict()
        return data

    def validate(self):
        if not self.n_values or any(n < 3 for n in self.n_values):
            raise ImproperlyConfigured('n_values must list at least one n >= 3')
        if bool(self.gammas) == bool(self.p_values):
            raise ImproperlyConfigured('give exactly one of gammas and p_values')
        if self.trials < 1:
            raise ImproperlyConfigured('trials must be at least 1')
        if self.workers < 1:
            raise ImproperlyConfigured('workers must be at least 1')
        if self.format not in ('csv', 'json'):
            raise ImproperlyConfigured('format must be csv or json')
        if self.q_range is not None and (len(self.q_range) != 3 or not 0 < self.q_range[0] <= self.q_range[1]):
            raise ImproperlyConfigured('q_range must be [low, high, count] with 0 < low <= high')
        for n, p in self.points():
            if not 0.0 < p < 1.0:
                raise ImproperlyConfigured('p = %r at n = %d is outside (0, 1)' % (p, n))
            qs = self.q_grid(n, p)
            if not qs or any(not 0.0 < q <= 1.0 for q in qs):
                raise ImproperlyConfigured('every q must lie in (0, 1], got %r' % (qs,))
        return self

    def points(self):
        """``(n, p)`` pairs in sweep order."""

        if self.gammas:
            return [(n, float(n) ** -gamma) for n in self.n_values for gamma in self.gammas]
        return [(n, p) for n in self.n_values for p in self.p_values]

    def q_grid(self, n, p):
        if self.q_values:
            return list(self.q_values)
        if self.q_range is not None:
            low, high, count = self.q_range
            return np.geomspace(low, high, int(count)).tolist()
        scale = threshold_scale(n, p)
        return [min(1.0, multiple * scale) for multiple in self.q_multiples]

    def cells(self):
        return [(n, p, q) for n, p in self.points() for q in self.q_grid(n, p)]


@dataclass
class CellResult:

    """Aggregated trials of one ``(n, p, q)`` cell.

    ``trials`` counts the decided trials, split into ``successes``, ``failures`` and
    ``first_round_failures``; trials that raised are counted in ``errors`` only.
    Obstruction statistics average over trials whose first round succeeded.
    """

    n: int
    p: float
    q: float
    trials: int
    successes: int
    failures: int
    first_round_failures: int
    errors: int
    wilson_lo: float
    wilson_hi: float
    crrbb_mean: Optional[float]
    crrbb_median: Optional[float]
    crbbbb_mean: Optional[float]
    crbbbb_median: Optional[float]
    dangerous_pairs_mean: Optional[float]
    dangerous_k12_mean: Optional[float]
    runtime_ms: Optional[float] = None
    flagged: bool = False

    @property
    def rate(self):
        return self.successes / self.trials if self.trials else None

    def to_dict(self):
        return asdict(self)


def wilson_interval(successes, trials, confidence=None):
    """Wilson score interval for a binomial proportion."""

    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError('need 0 <= successes <= trials and trials >= 1')
    confidence = settings.WILSON_CONFIDENCE if confidence is None else confidence
    z = stats.norm.ppf(1 - (1 - confidence) / 2)
    rate = successes / trials
    denominator = 1 + z * z / trials
    centre = (rate + z * z / (2 * trials)) / denominator
    half = z * math.sqrt(rate * (1 - rate) / trials + z * z / (4 * trials * trials)) / denominator
    return max(0.0, centre - half), min(1.0, centre + half)


ERROR = 'error'

#: Obstruction report fields kept per trial.
REPORT_FIELDS = ('crrbb_count', 'crbbbb_count', 'dangerous_pair_count', 'dangerous_k12_count')

TRIAL_COLUMNS = ('outcome', 'runtime_ms') + REPORT_FIELDS


def _init_worker(options):
    configure(**options)


def _dump_path(seed, stream_id):
    return os.path.join(settings.FALSIFICATION_DUMP_DIR, 'falsification-%d-%d.json' % (seed, stream_id))


def _run_trial(task):
    n, p, q, strategy, seed, stream_id, arrival, timing = task
    started = time.perf_counter()
    try:
        transcript = two_round_game(n, p, q, StrategySpec.from_dict(strategy), RngSpec(seed, stream_id),
                                    arrival=arrival, report=True)
    except FalsificationError as exc:
        path = _dump_path(seed, stream_id)
        exc.dump(path)
        logger.error('trial %d of cell (%d, %g, %g) falsified a claim, instance written to %s',
                     stream_id, n, p, q, path)
        raise
    except Exception as exc:
        logger.warning('trial %d of cell (%d, %g, %g) raised %s: %s', stream_id, n, p, q,
                       type(exc).__name__, exc)
        return dict(outcome=ERROR, runtime_ms=None)
    row = dict(outcome=transcript.outcome)
    row['runtime_ms'] = (time.perf_counter() - started) * 1000.0 if timing else None
    if transcript.report is not None:
        row.update((key, transcript.report[key]) for key in REPORT_FIELDS)
    return row


def _stat(series, how):
    series = series.dropna()
    return float(series.agg(how)) if len(series) else None


def _aggregate(n, p, q, frame):
    decided = frame[frame['outcome'] != ERROR]
    trials = len(decided)
    successes = int((decided['outcome'] == SUCCESS).sum())
    first_round_failures = int((decided['outcome'] == FIRST_ROUND_FAILURE).sum())
    lo, hi = wilson_interval(successes, trials) if trials else (0.0, 1.0)
    result = CellResult(
        n=int(n), p=float(p), q=float(q), trials=trials,
        successes=successes,
        failures=trials - successes - first_round_failures,
        first_round_failures=first_round_failures,
        errors=len(frame) - trials,
        wilson_lo=lo, wilson_hi=hi,
        crrbb_mean=_stat(decided['crrbb_count'], 'mean'),
        crrbb_median=_stat(decided['crrbb_count'], 'median'),
        crbbbb_mean=_stat(decided['crbbbb_count'], 'mean'),
        crbbbb_median=_stat(decided['crbbbb_count'], 'median'),
        dangerous_pairs_mean=_stat(decided['dangerous_pair_count'], 'mean'),
        dangerous_k12_mean=_stat(decided['dangerous_k12_count'], 'mean'),
        runtime_ms=_stat(decided['runtime_ms'], 'mean'),
    )
    if first_round_failures > settings.FIRST_ROUND_FLAG_RATE * trials:
        result.flagged = True
        logger.warning('cell (%d, %g, %g): %d of %d first rounds failed', n, p, q, first_round_failures, trials)
    return result


def trial_frame(outcomes):
    """One row per trial outcome, with every column of :data:`TRIAL_COLUMNS` present."""

    return pd.DataFrame(list(outcomes), columns=list(TRIAL_COLUMNS))


def aggregate_cell(n, p, q, outcomes):
    """Aggregate the trial outcomes of one cell.

    :param outcomes: Dicts with an ``outcome`` and optionally ``runtime_ms`` and the
        :data:`REPORT_FIELDS` of the first-round obstruction report.
    """

    return _aggregate(n, p, q, trial_frame(outcomes))


def run_sweep(config, mp_context=None):
    """Run every cell of ``config`` and aggregate it.

    Trial ``t`` of cell ``c`` plays on stream ``c * trials + t`` of the master seed, so the
    output does not depend on the worker count. Worker processes are configured with the
    settings in force in the caller.

    :param mp_context: Optional ``multiprocessing`` context for the worker pool.
    :raises FalsificationError: After writing the instance to ``FALSIFICATION_DUMP_DIR``.
    """

    config.validate()
    cells = config.cells()
    tasks = [(n, p, q, config.strategy.to_dict(), config.seed, index * config.trials + trial,
              config.arrival, config.timing)
             for index, (n, p, q) in enumerate(cells) for trial in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers, mp_context=mp_context,
                                 initializer=_init_worker, initargs=(snapshot(),)) as executor:
            outcomes = list(executor.map(_run_trial, tasks, chunksize=max(1, config.trials // 4)))
    else:
        outcomes = [_run_trial(task) for task in tasks]

    keys = pd.DataFrame([(task[5] // config.trials,) + task[:3] for task in tasks],
                        columns=['cell', 'n', 'p', 'q'])
    frame = pd.concat([keys, trial_frame(outcomes)], axis=1)
    results = []
    for (index, n, p, q), group in frame.groupby(['cell', 'n', 'p', 'q'], sort=False):
        results.append(_aggregate(n, p, q, group))
        logger.info('cell %d/%d (n=%d p=%g q=%g): %d/%d successes, %d errors', index + 1, len(cells), n, p, q,
                    results[-1].successes, results[-1].trials, results[-1].errors)
    return results


def results_frame(results):
    return pd.DataFrame([result.to_dict() for result in results], columns=list(CellResult.__dataclass_fields__))


def _to_csv(results, path=None):
    return results_frame(results).to_csv(path, columns=list(CSV_HEADER), index=False, float_format='%.10g',
                                         lineterminator='\n')


def format_csv(results):
    return _to_csv(results)


def write_csv(results, path):
    _to_csv(results, path)


def write_json(results, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump([result.to_dict() for result in results], f, indent=2, sort_keys=True)


@dataclass
class CrossingEstimate:
    q_hat: float
    lo: Optional[float]
    hi: Optional[float]
    method: str


def _brackets(rates):
    return max(rates) > 0.5 and min(rates) < 0.5


def _logistic_crossing(x, successes, trials):
    centre, scale = x.mean(), x.std() or 1.0
    z = (x - centre) / scale

    def loss(params):
        eta = params[0] + params[1] * z
        return np.sum(successes * np.logaddexp(0, -eta) + (trials - successes) * np.logaddexp(0, eta))

    fit = optimize.minimize(loss, np.zeros(2), method='BFGS')
    a, b = fit.x
    if b == 0 or not np.all(np.isfinite(fit.x)):
        raise BracketingError('logistic fit is flat')
    return centre - a / b * scale


def _isotonic_crossing(x, successes, trials):
    model = IsotonicRegression(increasing=False)
    fitted = model.fit_transform(x, successes / trials, sample_weight=trials)
    for i in range(len(x) - 1):
        hi, lo = fitted[i], fitted[i + 1]
        if hi >= 0.5 >= lo and hi != lo:
            return x[i] + (hi - 0.5) / (hi - lo) * (x[i + 1] - x[i])
    raise BracketingError('isotonic fit does not cross 1/2')


_CROSSING_METHODS = {'logistic': _logistic_crossing, 'isotonic': _isotonic_crossing}


def estimate_crossing(results, method='logistic', n_boot=None, seed=0):
    """Estimate the ``q`` at which the success rate of one ``(n, p)`` curve crosses 1/2.

    The fit runs in ``log q``; the interval is the central 95% of parametric bootstrap
    refits with every cell resampled as a binomial.

    :raises BracketingError: With fewer than three ``q`` values, or when no rate lies on
        each side of 1/2.
    """

    if method not in _CROSSING_METHODS:
        raise ValueError('unknown crossing method %r' % method)
    ordered = sorted((r for r in results if r.trials), key=lambda r: r.q)
    if len(ordered) < 3:
        raise BracketingError('need at least three q values, got %d' % len(ordered))
    rates = [r.successes / r.trials for r in ordered]
    if not _brackets(rates):
        raise BracketingError('success rates %r do not bracket 1/2' % (rates,))
    x = np.log([r.q for r in ordered])
    trials = np.array([r.trials for r in ordered], dtype=float)
    successes = np.array([r.successes for r in ordered], dtype=float)
    fit = _CROSSING_METHODS[method]
    x_hat = fit(x, successes, trials)

    n_boot = settings.BOOTSTRAP_RESAMPLES if n_boot is None else n_boot
    gen = np.random.default_rng(seed)
    draws = []
    for _ in range(n_boot):
        resampled = gen.binomial(trials.astype(np.int64), successes / trials).astype(float)
        if not _brackets(resampled / trials):
            continue
        try:
            draws.append(fit(x, resampled, trials))
        except BracketingError:
            continue
    if draws:
        lo, hi = np.percentile(draws, [2.5, 97.5])
        return CrossingEstimate(float(np.exp(x_hat)), float(np.exp(lo)), float(np.exp(hi)), method)
    return CrossingEstimate(float(np.exp(x_hat)), None, None, method)


__all__ = [
    'SweepConfig', 'CellResult', 'CrossingEstimate', 'CSV_HEADER', 'threshold_scale', 'wilson_interval',
    'run_sweep', 'aggregate_cell', 'trial_frame', 'results_frame', 'format_csv', 'write_csv', 'write_json', 'estimate_crossing',
]
