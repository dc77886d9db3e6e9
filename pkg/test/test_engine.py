import math
import unittest
from dataclasses import replace

import mock

from ossdsim.tasks import engine, metrics, scheduling
from ossdsim.tasks.domain import PolicyWeights, Priority, Status
from ossdsim.tasks.gen_scenario import gen_scenario
from ossdsim.tasks.scheduling import SchedulerState

from test.builders import developer, project, scenario


def blocked_pair(first, second):
    # Project 0 takes all four single-slot developers for a year; projects 1
    # and 2 queue behind it and both start on the day it finishes.
    return scenario(
        [
            project(0, Priority.Medium, arrival=0.0, deadline=800.0, effort=4.0, duration=365.0),
            project(1, first, arrival=1.0, deadline=800.0, effort=1.0, duration=365.0),
            project(2, second, arrival=2.0, deadline=800.0, effort=1.0, duration=365.0),
        ],
        [developer(i, 0.5, cap=1) for i in range(4)],
        horizon_days=365.0,
    )


class ArrivalsTest(unittest.TestCase):

    def test_empty(self):
        self.assertEqual(engine.schedule_arrivals(engine.make_rng(1), 30.0, 0), [])

    def test_deterministic(self):
        a = engine.schedule_arrivals(engine.make_rng(99), 30.0, 50)
        b = engine.schedule_arrivals(engine.make_rng(99), 30.0, 50)
        self.assertEqual(a, b)
        self.assertEqual(a, sorted(a))

    def test_mean_gap(self):
        days = engine.schedule_arrivals(engine.make_rng(5), 30.0, 10000)
        self.assertAlmostEqual(days[-1] / len(days), 30.0, delta=1.0)


class StepTest(unittest.TestCase):

    def test_quiescent_day(self):
        state = engine.new_state(scenario([], [developer(0)]), "Dynamic", 1)
        engine.step_day(state)
        self.assertEqual(state.clock_days, 1)
        self.assertEqual(state.scheduler, SchedulerState())
        self.assertEqual((state.result.queue_trace, state.result.busy_trace), ([0], [0]))

    def test_single_project_starts_on_arrival_day(self):
        s = scenario([project(0, arrival=2.5)], [developer(i) for i in range(4)])
        result = engine.run(s, "Dynamic", 1, arrivals="scenario")
        record = result.records[0]
        self.assertEqual((record.arrival_day, record.start_day, record.finish_day), (2.5, 3.0, 368.0))
        # the finishing day is the last one simulated
        self.assertEqual(result.horizon_days, 369.0)

    def test_check_scheduling_moves_high_priority_to_head(self):
        policy_only = scenario(
            [project(0, Priority.Low, arrival=0.0), project(1, Priority.Low, arrival=0.0), project(2, Priority.High, arrival=0.0)],
            [developer(i) for i in range(3)],
        )
        policy_only = replace(policy_only, policy=PolicyWeights(1.0, 0.0, 0.0, 0.0))
        state = engine.new_state(policy_only, "Dynamic", 1, arrivals="scenario")
        engine._admit_arrivals(state)
        self.assertEqual(state.scheduler.waiting_queue, (2, 0, 1))
        self.assertGreater(state.scheduler.last_schedule_rate, 0.0)

    def test_infeasible_team_waits_for_release(self):
        s = scenario(
            [
                project(0, arrival=0.0, effort=3.0, duration=365.0),
                project(1, arrival=1.0, effort=2.0, duration=365.0),
            ],
            [developer(i, 0.5, cap=1) for i in range(4)],
        )
        result = engine.run(s, "Dynamic", 1, arrivals="scenario")
        self.assertEqual((result.records[0].start_day, result.records[0].team_size), (0.0, 3))
        self.assertEqual((result.records[1].start_day, result.records[1].team_size), (365.0, 2))
        self.assertGreater(result.stock_refunded, 0)
        self.assertEqual(result.start_order, [0, 1])

    def test_refunded_project_keeps_the_head(self):
        # Project 1 needs three of the four single-slot developers and fails
        # every day until project 0 finishes; project 2 turns past due on day
        # 10 and would outscore it, but no arrival or release happens until
        # day 365 to reorder the queue.
        s = scenario(
            [
                project(0, arrival=0.0, effort=2.0, duration=365.0),
                project(1, Priority.High, arrival=1.0, deadline=366.0, effort=3.0, duration=365.0),
                project(2, Priority.Low, arrival=2.0, deadline=10.0, effort=1.0, duration=365.0),
            ],
            [developer(i, 0.5, cap=1) for i in range(4)],
            policy=PolicyWeights(1.0, 1.0, 0.0, 0.0),
        )
        heads = []

        def observe(state):
            if 2 <= state.clock_days <= 365:
                heads.append(state.scheduler.waiting_queue[0])

        result = engine.run(s, "Dynamic", 1, arrivals="scenario", observer=observe)
        self.assertGreater(result.stock_refunded, 0)
        self.assertEqual(set(heads), set([1]))
        self.assertEqual(result.start_order, [0, 1, 2])
        self.assertEqual(result.records[1].start_day, 365.0)
        self.assertGreaterEqual(result.records[2].start_day, 365.0)

    def test_wait_bounded_by_schedule_rate(self):
        # one project, idle developers: the stock crosses 1 within ceil(1/rate) days
        for effort in (1.0, 2.0, 4.0, 8.0, 40.0):
            developers = [developer(i, 0.1) for i in range(2)]
            p = project(0, arrival=3.0, effort=effort, duration=365.0 * effort, expertise=0.2)
            rate = scheduling.compute_rates(SchedulerState(), [p], developers).last_schedule_rate
            result = engine.run(scenario([p], developers), "Dynamic", 1, arrivals="scenario")
            wait = result.records[0].start_day - result.records[0].arrival_day
            self.assertGreaterEqual(wait, 0.0)
            self.assertLessEqual(wait, math.ceil(1.0 / rate))


class RunTest(unittest.TestCase):

    def test_zero_projects(self):
        result = engine.run(scenario([], [developer(0)]), "Fifo", 3)
        self.assertEqual(result.records, {})
        self.assertEqual((result.horizon_days, result.queue_trace), (0.0, []))

    def test_invalid_scenario(self):
        with self.assertRaises(engine.ScenarioError) as ctx:
            engine.run(scenario([project(0, expertise=9.0)], [developer(0)]), "Dynamic", 1)
        self.assertIn("project 0: unschedulable project", str(ctx.exception))

    def test_rng_recorded(self):
        result = engine.run(scenario([project(0)], [developer(0), developer(1)]), "Dynamic", 12)
        self.assertEqual((result.rng_algorithm, result.seed, result.mode), ("PCG64", 12, "Dynamic"))

    def test_start_order_follows_policy(self):
        # Low arrives before High: only the dynamic policy swaps them
        s = blocked_pair(Priority.Low, Priority.High)
        self.assertEqual(engine.run(s, "Fifo", 1, arrivals="scenario").start_order, [0, 1, 2])
        self.assertEqual(engine.run(s, "Dynamic", 1, arrivals="scenario").start_order, [0, 2, 1])

        s = blocked_pair(Priority.High, Priority.Low)
        self.assertEqual(engine.run(s, "Fifo", 1, arrivals="scenario").start_order, [0, 1, 2])
        self.assertEqual(engine.run(s, "Dynamic", 1, arrivals="scenario").start_order, [0, 1, 2])

    def test_deterministic(self):
        s = gen_scenario(12, 20, 0.3, 0.7, 30.0, seed=4, effort=(1, 3))
        self.assertEqual(engine.run(s, "Dynamic", 8), engine.run(s, "Dynamic", 8))

    def test_paired_seeds_share_arrivals(self):
        s = gen_scenario(12, 20, 0.3, 0.7, 30.0, seed=4, effort=(1, 3))
        fifo = engine.run(s, "Fifo", 21)
        dynamic = engine.run(s, "Dynamic", 21)
        self.assertEqual(
            dict((id, r.arrival_day) for id, r in fifo.records.items()),
            dict((id, r.arrival_day) for id, r in dynamic.records.items()),
        )

    def test_interleaved_runs_match_sequential(self):
        s = gen_scenario(10, 20, 0.3, 0.7, 30.0, seed=6, effort=(1, 3))
        sequential = [engine.run(s, "Dynamic", seed) for seed in (1, 2)]

        states = [engine.new_state(s, "Dynamic", seed) for seed in (1, 2)]
        while not all(all(p.status == Status.Finished for p in st.projects.values()) for st in states):
            for st in states:
                if not all(p.status == Status.Finished for p in st.projects.values()):
                    engine.step_day(st)

        for st, expected in zip(states, sequential):
            self.assertEqual(st.result.records, expected.records)
            self.assertEqual(st.result.queue_trace, expected.queue_trace)
            self.assertEqual(st.result.start_order, expected.start_order)

    def test_fifo_start_order_is_arrival_order(self):
        # 30 developers always cover six teams of at most 7
        for seed in range(100):
            s = gen_scenario(6, 30, 0.3, 0.7, 30.0, seed=seed, effort=(1, 2))
            result = engine.run(s, "Fifo", seed)
            self.assertEqual(result.stock_refunded, 0)
            by_arrival = sorted(result.records, key=lambda id: (result.records[id].arrival_day, id))
            self.assertEqual(result.start_order, by_arrival)

    def test_conservation_on_default_scenario(self):
        s = gen_scenario(30, 46, 0.3, 0.7, 30.0, seed=20100601)
        ticks = []

        def observe(state):
            for d in state.developers:
                self.assertLessEqual(len(d.assignments), d.concurrency_cap)
            ongoing = sum(len(p.team) for p in state.projects.values() if p.status == Status.Ongoing)
            self.assertEqual(sum(len(d.assignments) for d in state.developers), ongoing)

            # every project sits in exactly one place
            places = [id for day, id in state.pending_arrivals] + list(state.scheduler.waiting_queue)
            for status in (Status.OnHold, Status.Ongoing, Status.Finished):
                places += [id for id, p in state.projects.items() if p.status == status]
            self.assertEqual(sorted(places), sorted(state.projects))
            ticks.append(state.clock_days)

        result = engine.run(s, "Dynamic", 3, observer=observe)
        self.assertEqual(len(ticks), result.horizon_days)
        self.assertEqual(len(result.finished_records()), 30)
        for r in result.records.values():
            self.assertLessEqual(r.arrival_day, r.start_day)
            self.assertLessEqual(r.start_day, r.finish_day)

        accounted = result.stock_released - result.stock_refunded + result.stock_discarded + result.final_stock
        self.assertAlmostEqual(accounted, result.stock_inflow, delta=1e-6)
        self.assertLessEqual(result.stock_released - result.stock_refunded, result.stock_inflow + 1e-6)

    def test_livelock(self):
        s = blocked_pair(Priority.Low, Priority.High)
        with self.assertRaises(engine.LivelockError) as ctx:
            with mock.patch.object(engine, "LIVELOCK_FACTOR", 0.5):
                engine.run(s, "Fifo", 1, arrivals="scenario")
        self.assertEqual(ctx.exception.stuck, [0, 1, 2])


class DirectionTest(unittest.TestCase):
    # Ten paired replications per mode, seeds 1..10.

    def paired(self, mean_interarrival_days):
        s = gen_scenario(30, 46, 0.3, 0.7, mean_interarrival_days, seed=20100601)
        fifo = [metrics.summarize_run(engine.run(s, "Fifo", 1 + r)) for r in range(10)]
        dynamic = [metrics.summarize_run(engine.run(s, "Dynamic", 1 + r)) for r in range(10)]
        return fifo, dynamic

    def test_default_scenario_is_uncongested(self):
        # every project starts on the day it is admitted, whatever the order
        fifo, dynamic = self.paired(30.0)
        for f, d in zip(fifo, dynamic):
            self.assertEqual((f.avg_queue_length, d.avg_queue_length), (0.0, 0.0))
            self.assertAlmostEqual(f.avg_waiting_days, d.avg_waiting_days, delta=1e-9)
        self.assertEqual(metrics.paired_wins([x.avg_waiting_days for x in fifo], [x.avg_waiting_days for x in dynamic]), 0)

    def test_dynamic_waits_less_when_congested(self):
        fifo, dynamic = self.paired(5.0)
        fifo_wait = [x.avg_waiting_days for x in fifo]
        dynamic_wait = [x.avg_waiting_days for x in dynamic]

        improvement = metrics.improvement_pct(metrics.summarize(fifo_wait).mean, metrics.summarize(dynamic_wait).mean)
        self.assertGreater(improvement, 10.0)
        self.assertGreaterEqual(metrics.paired_wins(fifo_wait, dynamic_wait), 8)
        self.assertLess(
            metrics.summarize([x.avg_queue_length for x in dynamic]).mean,
            metrics.summarize([x.avg_queue_length for x in fifo]).mean,
        )
