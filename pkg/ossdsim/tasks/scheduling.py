# The system-dynamics side of the simulator: a FIFO intake queue, the
# workforce- and skill-based schedule rates, and the ProjectToStart stock
# that releases projects whenever it crosses an integer.
#
#   ScheduleRate       = (WorkforceBasedRate + SkillBasedRate) / 2
#   WorkforceBasedRate = AvailableWorkforce / sum(EstimatedEffort) * N
#   SkillBasedRate     = AvailableSkill / sum(ExpertiseLevel) * N
#
# Everything here is a pure function over an explicit SchedulerState.
# Rates are in projects per day.

import math
from dataclasses import dataclass, replace

from ossdsim.tasks.domain import InvalidParameterError

# Queue scores closer than this many decimal places are a tie.
SCORE_DIGITS = 9


class QueueError(RuntimeError):
    pass


@dataclass(frozen=True)
class SchedulerState:
    waiting_queue: tuple = ()
    project_to_start_stock: float = 0.0
    last_workforce_rate: float = 0.0
    last_skill_rate: float = 0.0
    last_schedule_rate: float = 0.0

    @property
    def n_waiting(self):
        return len(self.waiting_queue)


def available_workforce(developers):
    return math.fsum(1.0 - d.workload for d in developers)


def available_skill(developers):
    # fully loaded developers contribute nothing
    return math.fsum(d.skill for d in developers if d.workload < 1.0)


def workforce_based_rate(state, projects, developers):
    n = len(projects)
    if n == 0:
        return 0.0
    numerator = available_workforce(developers)
    if numerator == 0:
        return 0.0
    return numerator / math.fsum(p.estimated_effort for p in projects) * n


def skill_based_rate(state, projects, developers):
    n = len(projects)
    if n == 0:
        return 0.0
    numerator = available_skill(developers)
    if numerator == 0:
        return 0.0
    return numerator / math.fsum(p.expertise_level for p in projects) * n


def schedule_rate(workforce_rate, skill_rate):
    return (workforce_rate + skill_rate) / 2.0


def compute_rates(state, projects, developers):
    workforce_rate = workforce_based_rate(state, projects, developers)
    skill_rate = skill_based_rate(state, projects, developers)
    return replace(
        state,
        last_workforce_rate=workforce_rate,
        last_skill_rate=skill_rate,
        last_schedule_rate=schedule_rate(workforce_rate, skill_rate),
    )


def advance_stock(state, rate, dt_days):
    if rate < 0:
        raise InvalidParameterError("schedule rate must be nonnegative (got %r)" % rate)
    if not dt_days > 0:
        raise InvalidParameterError("dt_days must be positive (got %r)" % dt_days)

    level = state.project_to_start_stock + rate * dt_days
    n_released = int(math.floor(level))
    # exact: level and n_released are within a factor of two (Sterbenz)
    stock = level - n_released
    return replace(state, project_to_start_stock=stock), n_released


def priority_score(p, t_days, developers, policy):
    # Higher score = schedule earlier. Each term is normalized to [0,1]:
    # higher priority, a closer deadline, less effort and available
    # expertise all move a project forward.
    score = 0.0
    if policy.w_priority:
        score += policy.w_priority * p.priority.rank / 3.0
    if policy.w_urgency:
        slack = max(p.deadline_day - t_days, policy.epsilon_days)
        score += policy.w_urgency * min(1.0, policy.epsilon_days / slack)
    if policy.w_effort:
        score += policy.w_effort * min(1.0, 1.0 / p.estimated_effort)
    if policy.w_skill_match:
        score += policy.w_skill_match * min(1.0, available_skill(developers) / p.expertise_level)
    return score


def normalized_score(p, t_days, developers, policy):
    # Scores over the weight total, rounded so that ties survive a rescaling
    # of the weights and fall through to arrival order.
    total = math.fsum(policy.weights())
    score = priority_score(p, t_days, developers, policy)
    if total > 0:
        score /= total
    return round(score, SCORE_DIGITS)


def reorder_queue(state, t_days, developers, policy, projects):
    # projects: id -> Project, for everything in the queue
    if len(state.waiting_queue) < 2:
        return state

    def sort_key(project_id):
        p = projects[project_id]
        return (-normalized_score(p, t_days, developers, policy), p.arrival_day, p.id)

    return replace(state, waiting_queue=tuple(sorted(state.waiting_queue, key=sort_key)))


def enqueue(state, project_id):
    if project_id in state.waiting_queue:
        raise QueueError("project %s is already in the waiting queue" % project_id)
    return replace(state, waiting_queue=state.waiting_queue + (project_id,))


def push_front(state, project_id):
    if project_id in state.waiting_queue:
        raise QueueError("project %s is already in the waiting queue" % project_id)
    return replace(state, waiting_queue=(project_id,) + state.waiting_queue)


def pop_head(state):
    if not state.waiting_queue:
        raise QueueError("pop from an empty waiting queue")
    return replace(state, waiting_queue=state.waiting_queue[1:]), state.waiting_queue[0]
