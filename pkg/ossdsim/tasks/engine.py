# Discrete-time engine coupling the scheduling (stock-and-flow) model with
# the workforce-assignment (agent) model. The clock advances one day per
# tick; within a tick the order is fixed because it is observable:
#
#   1. admit arrivals due by now, then run the scheduling check
#   2. finish projects whose finish day has come, release their teams,
#      then run the scheduling check
#   3. integrate the ProjectToStart stock with the current schedule rate
#   4. start one project per released unit: size it, pick a team, assign;
#      an infeasible team sends the project back to the queue head, refunds
#      one unit of stock and ends this tick's starts
#   5. record the day's queue length and busy-developer count
#   6. advance the clock
#
# The scheduling check recomputes the rates from the current workforce and
# queue and reorders the queue with the active policy. It runs whenever a
# project arrives or workforce availability changes.

import enum
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ossdsim.tasks import assignment, scheduling
from ossdsim.tasks.domain import FIFO_POLICY, Status, validate_scenario

RNG_ALGORITHM = "PCG64"

# Give up after this many multiples of the scenario horizon.
LIVELOCK_FACTOR = 100

STOCK_TOLERANCE = 1e-6


class PolicyMode(enum.Enum):
    Dynamic = "Dynamic"
    Fifo = "Fifo"


class EngineError(RuntimeError):
    pass


class LivelockError(EngineError):

    def __init__(self, clock, stuck):
        self.stuck = stuck
        super(LivelockError, self).__init__("no progress by day %d; unfinished projects: %s" % (clock, ", ".join(str(id) for id in stuck)))


class ScenarioError(ValueError):

    def __init__(self, violations):
        self.violations = violations
        super(ScenarioError, self).__init__("invalid scenario:\n  " + "\n  ".join(str(v) for v in violations))


@dataclass
class ProjectRecord:
    project_id: int
    arrival_day: float
    start_day: float = None
    finish_day: float = None
    team_size: int = 0


@dataclass
class RunResult:
    seed: int = None
    mode: str = None
    rng_algorithm: str = RNG_ALGORITHM
    n_developers: int = 0
    records: dict = field(default_factory=dict)
    start_order: list = field(default_factory=list)
    queue_trace: list = field(default_factory=list)
    busy_trace: list = field(default_factory=list)
    horizon_days: float = 0.0
    stock_inflow: float = 0.0
    stock_released: int = 0
    stock_refunded: int = 0
    stock_discarded: float = 0.0
    final_stock: float = 0.0

    def finished_records(self):
        return [r for r in self.records.values() if r.finish_day is not None]


@dataclass
class EngineState:
    clock_days: int
    scheduler: scheduling.SchedulerState
    developers: tuple
    projects: dict
    pending_arrivals: list
    result: RunResult
    rng_seed: int
    scenario: object = None
    policy: object = None
    exhaustive_limit: int = assignment.EXHAUSTIVE_LIMIT
    slim_basis: str = "duration"
    label: str = ""


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def schedule_arrivals(rng, mean_interarrival_days, n_total):
    if n_total <= 0:
        return []
    gaps = rng.exponential(mean_interarrival_days, size=n_total)
    return [float(day) for day in np.cumsum(gaps)]


def _waiting_projects(state):
    return [state.projects[id] for id in state.scheduler.waiting_queue]


def handle_check_scheduling(state, keep_head=False):
    # keep_head: the head is a project whose start just failed; it stays
    # there and only the rest of the queue is reordered
    waiting = _waiting_projects(state)
    scheduler = scheduling.compute_rates(state.scheduler, waiting, state.developers)
    if keep_head and scheduler.waiting_queue:
        head = scheduler.waiting_queue[0]
        rest = replace(scheduler, waiting_queue=scheduler.waiting_queue[1:])
        rest = scheduling.reorder_queue(rest, state.clock_days, state.developers, state.policy, state.projects)
        scheduler = replace(rest, waiting_queue=(head,) + rest.waiting_queue)
    else:
        scheduler = scheduling.reorder_queue(scheduler, state.clock_days, state.developers, state.policy, state.projects)
    state.scheduler = scheduler
    logging.debug("[%s] day %d: N=%d rate=%.6f queue=%s" % (state.label, state.clock_days, scheduler.n_waiting, scheduler.last_schedule_rate, list(scheduler.waiting_queue)))
    return state


def _admit_arrivals(state):
    admitted = False
    while state.pending_arrivals and state.pending_arrivals[0][0] <= state.clock_days:
        day, project_id = state.pending_arrivals.pop(0)
        state.scheduler = scheduling.enqueue(state.scheduler, project_id)
        state.result.records[project_id] = ProjectRecord(project_id, day)
        logging.info("[%s] day %d: project %s arrived" % (state.label, state.clock_days, project_id))
        admitted = True
    if admitted:
        handle_check_scheduling(state)


def _finish_projects(state):
    done = sorted(p.id for p in state.projects.values() if p.status == Status.Ongoing and p.finish_day <= state.clock_days)
    for project_id in done:
        developers, project = assignment.release(state.projects[project_id], state.developers)
        state.developers = developers
        state.projects[project_id] = project
        state.result.records[project_id].finish_day = project.finish_day
        logging.info("[%s] day %d: project %s finished" % (state.label, state.clock_days, project_id))
    if done:
        handle_check_scheduling(state)


def _try_start(state, project_id):
    # Returns True if the project started, False if no team could be formed.
    project = state.projects[project_id].with_status(Status.OnHold)
    state.projects[project_id] = project

    candidates = [d for d in state.developers if d.available]
    weights = state.scenario.goal_weights[project.goal]
    try:
        k = assignment.project_headcount(project, state.scenario.slim, state.clock_days, state.slim_basis, len(candidates))
        team = assignment.select_team(candidates, k, weights, state.exhaustive_limit, project_id)
    except assignment.InfeasibleTeamError as e:
        state.projects[project_id] = project.with_status(Status.Waiting)
        logging.info("[%s] day %d: project %s on hold, %s" % (state.label, state.clock_days, project_id, e))
        return False

    developers, project = assignment.assign(project, team, state.developers, state.clock_days)
    state.developers = developers
    state.projects[project_id] = project

    record = state.result.records[project_id]
    record.start_day = project.start_day
    record.team_size = len(team.member_ids)
    state.result.start_order.append(project_id)
    logging.info("[%s] day %d: project %s started with %d developers (cost %.4f)" % (state.label, state.clock_days, project_id, len(team.member_ids), team.cost))
    return True


def _start_projects(state, n_released):
    # Only a start changes the workforce. A failed start is not a scheduling
    # event: the project goes back to the head and stays there.
    result = state.result
    started = False
    refunded = False
    for i in range(n_released):
        scheduler, project_id = scheduling.pop_head(state.scheduler)
        state.scheduler = scheduler
        result.stock_released += 1
        if _try_start(state, project_id):
            started = True
            continue

        # back to the head, one unit back into the stock, no more starts today
        state.scheduler = replace(
            scheduling.push_front(state.scheduler, project_id),
            project_to_start_stock=state.scheduler.project_to_start_stock + 1.0,
        )
        result.stock_refunded += 1
        result.stock_discarded += n_released - i - 1
        refunded = True
        break
    if started:
        handle_check_scheduling(state, keep_head=refunded)


def check_invariants(state):
    for d in state.developers:
        if len(d.assignments) > d.concurrency_cap:
            raise assignment.OverAllocationError("developer %s holds %d assignments (cap %d)" % (d.id, len(d.assignments), d.concurrency_cap))

    assigned = sum(len(d.assignments) for d in state.developers)
    team_slots = sum(len(p.team) for p in state.projects.values() if p.status == Status.Ongoing)
    if assigned != team_slots:
        raise EngineError("day %d: %d assignments held but ongoing teams have %d members" % (state.clock_days, assigned, team_slots))

    result = state.result
    accounted = result.stock_released - result.stock_refunded + result.stock_discarded + state.scheduler.project_to_start_stock
    if abs(accounted - result.stock_inflow) > STOCK_TOLERANCE:
        raise EngineError("day %d: stock out of balance (inflow %r, accounted %r)" % (state.clock_days, result.stock_inflow, accounted))


def step_day(state):
    _admit_arrivals(state)
    _finish_projects(state)

    rate = state.scheduler.last_schedule_rate
    scheduler, n_released = scheduling.advance_stock(state.scheduler, rate, 1.0)
    state.scheduler = scheduler
    state.result.stock_inflow += rate

    # a stale stock can't start more projects than are waiting
    n_waiting = scheduler.n_waiting
    if n_released > n_waiting:
        state.result.stock_discarded += n_released - n_waiting
        n_released = n_waiting

    if n_released:
        _start_projects(state, n_released)

    # end-of-day sample, after the starts
    state.result.queue_trace.append(state.scheduler.n_waiting)
    state.result.busy_trace.append(sum(1 for d in state.developers if d.assignments))

    check_invariants(state)

    state.clock_days += 1
    return state


def _arrival_days(scenario, rng, arrivals):
    # sampled: one exponential realization per seed, assigned in project id
    # order; each deadline keeps its slack over the arrival it replaces
    projects = sorted(scenario.projects, key=lambda p: p.id)
    if arrivals == "scenario":
        return [(p, p.arrival_day, p.deadline_day) for p in projects]
    if arrivals != "sampled":
        raise ValueError("unknown arrival source %r" % arrivals)
    days = schedule_arrivals(rng, scenario.mean_interarrival_days, len(projects))
    return [(p, day, day + (p.deadline_day - p.arrival_day)) for p, day in zip(projects, days)]


def new_state(scenario, policy_mode, seed, arrivals="sampled", exhaustive_limit=assignment.EXHAUSTIVE_LIMIT, slim_basis="duration"):
    policy_mode = PolicyMode(policy_mode)
    rng = make_rng(seed)

    projects = {}
    pending = []
    for p, day, deadline in _arrival_days(scenario, rng, arrivals):
        projects[p.id] = replace(p, arrival_day=day, deadline_day=deadline, status=Status.Waiting, start_day=None, finish_day=None, team=())
        pending.append((day, p.id))
    pending.sort()

    developers = tuple(replace(d, assignments=frozenset()) for d in scenario.developers)

    return EngineState(
        clock_days=0,
        scheduler=scheduling.SchedulerState(),
        developers=developers,
        projects=projects,
        pending_arrivals=pending,
        result=RunResult(seed=seed, mode=policy_mode.value, n_developers=len(developers)),
        rng_seed=seed,
        scenario=scenario,
        policy=scenario.policy if policy_mode == PolicyMode.Dynamic else FIFO_POLICY,
        exhaustive_limit=exhaustive_limit,
        slim_basis=slim_basis,
        label="%s#%s" % (policy_mode.value, seed),
    )


def _all_finished(state):
    return all(p.status == Status.Finished for p in state.projects.values())


def run(scenario, policy_mode, seed, arrivals="sampled", exhaustive_limit=assignment.EXHAUSTIVE_LIMIT, slim_basis="duration", observer=None):
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError(violations)

    state = new_state(scenario, policy_mode, seed, arrivals, exhaustive_limit, slim_basis)
    max_days = int(math.ceil(LIVELOCK_FACTOR * scenario.horizon_days))

    while not _all_finished(state):
        if state.clock_days >= max_days:
            stuck = sorted(id for id, p in state.projects.items() if p.status != Status.Finished)
            raise LivelockError(state.clock_days, stuck)
        step_day(state)
        if observer is not None:
            observer(state)

    result = state.result
    result.horizon_days = float(state.clock_days)
    result.final_stock = state.scheduler.project_to_start_stock
    logging.info("[%s] all %d projects finished after %d days" % (state.label, len(state.projects), state.clock_days))
    return result
