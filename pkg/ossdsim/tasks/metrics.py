"""Performance metrics of a run and their aggregation over replications.

Waiting time is in days. A developer counts as busy on a day when they
hold at least one assignment at the end of it. Queue length is integrated
as a step function over whole days.
"""

import functools
import math
from dataclasses import dataclass

from scipy import stats


class UndefinedMetricError(ValueError):
    pass


class InsufficientReplicationsError(ValueError):
    pass


@dataclass(frozen=True)
class ReplicationSummary:
    avg_waiting_days: float
    avg_utilization: float
    avg_queue_length: float


METRICS = ("avg_waiting_days", "avg_utilization", "avg_queue_length")


@dataclass(frozen=True)
class IntervalEstimate:
    mean: float
    half_width: float
    n: int
    confidence: float = 0.95

    def __str__(self):
        return "%.4f±%.4f" % (self.mean, self.half_width)


def avg_waiting_time(result):
    waits = [r.start_day - r.arrival_day for r in result.records.values() if r.start_day is not None]
    if not waits:
        raise UndefinedMetricError("no project ever started; waiting time is undefined")
    return math.fsum(waits) / len(waits)


def _check_horizon(result):
    if not result.horizon_days > 0:
        raise UndefinedMetricError("zero-length run")


def avg_utilization(result, n_developers=None):
    _check_horizon(result)
    if n_developers is None:
        n_developers = result.n_developers
    if n_developers <= 0:
        raise UndefinedMetricError("no developers")
    return math.fsum(result.busy_trace) / (n_developers * result.horizon_days)


def time_avg_queue_length(result):
    # The trace holds the queue length at the end of each day, after that
    # day's starts. A project admitted and started on the same day never
    # shows up in it, so this can be 0 while the average wait is not; Little's
    # law only holds here up to that sub-day waiting.
    _check_horizon(result)
    return math.fsum(result.queue_trace) / result.horizon_days


def summarize_run(result):
    return ReplicationSummary(
        avg_waiting_days=avg_waiting_time(result),
        avg_utilization=avg_utilization(result),
        avg_queue_length=time_avg_queue_length(result),
    )


@functools.lru_cache(maxsize=256)
def t_quantile(confidence, df):
    return float(stats.t.ppf((1.0 + confidence) / 2.0, df))


def summarize(values, confidence=0.95):
    values = [float(v) for v in values]
    n = len(values)
    if n < 2:
        raise InsufficientReplicationsError("need at least 2 replications for an interval, got %d" % n)
    # sort first so a permutation of the same values summarizes identically
    values.sort()
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    half_width = t_quantile(confidence, n - 1) * math.sqrt(variance) / math.sqrt(n)
    return IntervalEstimate(mean, half_width, n, confidence)


def improvement_pct(baseline, treated):
    if baseline == 0:
        raise UndefinedMetricError("improvement over a zero baseline is undefined")
    # positive = the treated value is lower
    return 100.0 * (baseline - treated) / baseline


def paired_wins(baseline, treated):
    if len(baseline) != len(treated):
        raise ValueError("paired series differ in length (%d vs %d)" % (len(baseline), len(treated)))
    return sum(1 for b, t in zip(baseline, treated) if t < b)
