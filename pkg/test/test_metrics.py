import random
import unittest

from ossdsim.tasks import metrics
from ossdsim.tasks.engine import ProjectRecord, RunResult


def result_with_waits(waits):
    records = dict((i, ProjectRecord(i, 10.0, 10.0 + w, 50.0 + w, 1)) for i, w in enumerate(waits))
    return RunResult(records=records, horizon_days=100.0, n_developers=2)


class RunMetricsTest(unittest.TestCase):

    def test_waiting_time(self):
        self.assertEqual(metrics.avg_waiting_time(result_with_waits([0, 10, 20])), 10.0)
        self.assertEqual(metrics.avg_waiting_time(result_with_waits([0, 0])), 0.0)
        self.assertEqual(metrics.avg_waiting_time(result_with_waits([7])), 7.0)
        with self.assertRaises(metrics.UndefinedMetricError):
            metrics.avg_waiting_time(RunResult())

    def test_utilization(self):
        one_busy = RunResult(n_developers=2, horizon_days=10.0, busy_trace=[1] * 10)
        self.assertEqual(metrics.avg_utilization(one_busy), 0.5)
        self.assertEqual(metrics.avg_utilization(RunResult(n_developers=2, horizon_days=10.0, busy_trace=[0] * 10)), 0.0)
        self.assertEqual(metrics.avg_utilization(RunResult(n_developers=3, horizon_days=4.0, busy_trace=[3] * 4)), 1.0)
        self.assertEqual(metrics.avg_utilization(one_busy, n_developers=4), 0.25)
        with self.assertRaises(metrics.UndefinedMetricError):
            metrics.avg_utilization(RunResult(n_developers=2))

    def test_queue_length(self):
        self.assertEqual(metrics.time_avg_queue_length(RunResult(horizon_days=10.0, queue_trace=[2] * 5 + [0] * 5)), 1.0)
        self.assertEqual(metrics.time_avg_queue_length(RunResult(horizon_days=3.0, queue_trace=[0, 0, 0])), 0.0)
        self.assertEqual(metrics.time_avg_queue_length(RunResult(horizon_days=4.0, queue_trace=[3] * 4)), 3.0)
        with self.assertRaises(metrics.UndefinedMetricError):
            metrics.time_avg_queue_length(RunResult())


class SummarizeTest(unittest.TestCase):

    def test_small_sample(self):
        estimate = metrics.summarize([1, 2, 3])
        self.assertEqual(estimate.mean, 2.0)
        self.assertAlmostEqual(estimate.half_width, 2.4841, delta=1e-3)
        self.assertEqual(estimate.n, 3)

    def test_constant(self):
        estimate = metrics.summarize([5, 5, 5, 5])
        self.assertEqual((estimate.mean, estimate.half_width), (5.0, 0.0))

    def test_format(self):
        self.assertEqual(str(metrics.IntervalEstimate(80.1486, 12.3681, 10)), "80.1486±12.3681")

    def test_too_few(self):
        with self.assertRaises(metrics.InsufficientReplicationsError):
            metrics.summarize([4.0])

    def test_permutation(self):
        rng = random.Random(12)
        values = [rng.expovariate(0.1) for _ in range(25)]
        expected = metrics.summarize(values)
        for _ in range(10):
            rng.shuffle(values)
            self.assertEqual(metrics.summarize(values), expected)

    def test_t_quantile(self):
        self.assertAlmostEqual(metrics.t_quantile(0.95, 2), 4.302653, delta=1e-6)
        self.assertAlmostEqual(metrics.t_quantile(0.95, 9), 2.262157, delta=1e-6)
        self.assertAlmostEqual(metrics.t_quantile(0.95, 1000), 1.962339, delta=1e-6)

    def test_coverage(self):
        rng = random.Random(95)
        covered = 0
        for _ in range(10000):
            estimate = metrics.summarize([rng.expovariate(1.0 / 30) for _ in range(200)])
            if abs(estimate.mean - 30.0) <= estimate.half_width:
                covered += 1
        self.assertAlmostEqual(covered / 10000.0, 0.95, delta=0.02)


class ComparisonTest(unittest.TestCase):

    def test_reference_improvements(self):
        self.assertAlmostEqual(metrics.improvement_pct(80.1486, 49.3644), 38.41, delta=0.01)
        self.assertAlmostEqual(metrics.improvement_pct(0.3777, 0.3226), 14.59, delta=0.01)
        self.assertAlmostEqual(metrics.improvement_pct(2.6763, 1.9273), 27.9864, delta=1e-3)

    def test_identity_and_scaling(self):
        for x in (0.5, 3.0, -2.0, 1e6):
            self.assertEqual(metrics.improvement_pct(x, x), 0.0)
        self.assertAlmostEqual(metrics.improvement_pct(8.0, 6.0), metrics.improvement_pct(8.0 * 7.5, 6.0 * 7.5), delta=1e-12)
        with self.assertRaises(metrics.UndefinedMetricError):
            metrics.improvement_pct(0.0, 1.0)

    def test_paired_wins(self):
        self.assertEqual(metrics.paired_wins([10, 20, 30], [5, 25, 29]), 2)
        with self.assertRaises(ValueError):
            metrics.paired_wins([1, 2], [1])
