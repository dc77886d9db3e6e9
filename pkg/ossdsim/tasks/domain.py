"""Domain types shared by the scheduling, assignment and engine modules.

All types are frozen dataclasses: the engine replaces them instead of
mutating them, so a scenario can be shared between replications.
"""

import enum
import logging
import math
from dataclasses import dataclass, field, replace


class InvalidParameterError(ValueError):
    pass


class Priority(enum.Enum):
    High = 3
    Medium = 2
    Low = 1

    @property
    def rank(self):
        return self.value


class Goal(enum.Enum):
    TimeUrgent = "TimeUrgent"
    QualityOriented = "QualityOriented"


class Status(enum.Enum):
    Waiting = "Waiting"
    OnHold = "OnHold"
    Ongoing = "Ongoing"
    Finished = "Finished"


# Allowed status changes. OnHold -> Waiting is a failed team formation.
TRANSITIONS = {
    Status.Waiting: (Status.OnHold,),
    Status.OnHold: (Status.Ongoing, Status.Waiting),
    Status.Ongoing: (Status.Finished,),
    Status.Finished: (),
}

# Typical range of the SLIM technology constant.
TECHNOLOGY_CONSTANT_RANGE = (610.0, 57314.0)


@dataclass(frozen=True)
class SkillVector:
    technical: float
    experience: float
    leadership: float

    def components(self):
        return (self.technical, self.experience, self.leadership)


@dataclass(frozen=True)
class Developer:
    id: int
    skills: SkillVector
    assignments: frozenset = frozenset()
    concurrency_cap: int = 2

    @property
    def workload(self):
        return len(self.assignments) / self.concurrency_cap

    @property
    def skill(self):
        return scalar_skill(self.skills)

    @property
    def available(self):
        return len(self.assignments) < self.concurrency_cap


@dataclass(frozen=True)
class Project:
    id: int
    priority: Priority
    arrival_day: float
    deadline_day: float
    estimated_effort: float
    expertise_level: float
    duration_days: float
    goal: Goal = Goal.TimeUrgent
    status: Status = Status.Waiting
    source_size: float = None
    start_day: float = None
    finish_day: float = None
    team: tuple = ()

    def with_status(self, status, **changes):
        if status not in TRANSITIONS[self.status]:
            raise InvalidParameterError("project %s: illegal transition %s -> %s" % (self.id, self.status.name, status.name))
        return replace(self, status=status, **changes)


@dataclass(frozen=True)
class SlimParams:
    technology_constant: float = 2000.0


@dataclass(frozen=True)
class GoalWeights:
    alpha: float
    beta: float


DEFAULT_GOAL_WEIGHTS = {
    Goal.TimeUrgent: GoalWeights(alpha=0.7, beta=0.3),
    Goal.QualityOriented: GoalWeights(alpha=0.3, beta=0.7),
}


@dataclass(frozen=True)
class PolicyWeights:
    w_priority: float = 0.4
    w_urgency: float = 0.3
    w_effort: float = 0.15
    w_skill_match: float = 0.15
    epsilon_days: float = 1.0

    def weights(self):
        return (self.w_priority, self.w_urgency, self.w_effort, self.w_skill_match)


# The FIFO baseline: every term switched off, so reordering keeps arrival order.
FIFO_POLICY = PolicyWeights(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Scenario:
    projects: tuple
    developers: tuple
    horizon_days: float = 1095.0
    mean_interarrival_days: float = 30.0
    slim: SlimParams = SlimParams()
    goal_weights: dict = field(default_factory=lambda: dict(DEFAULT_GOAL_WEIGHTS))
    policy: PolicyWeights = PolicyWeights()


@dataclass(frozen=True)
class Violation:
    entity: str
    id: object
    problem: str

    def __str__(self):
        if self.id is None:
            return "%s: %s" % (self.entity, self.problem)
        return "%s %s: %s" % (self.entity, self.id, self.problem)


def scalar_skill(v):
    return (v.technical + v.experience + v.leadership) / 3.0


def total_skill(developers):
    return math.fsum(d.skill for d in developers)


def validate_scenario(s):
    # Every violated invariant, with the offending id. Empty means valid.
    from ossdsim.tasks import assignment

    violations = []

    def bad(entity, id, problem):
        violations.append(Violation(entity, id, problem))

    if not s.horizon_days > 0:
        bad("scenario", None, "horizon_days must be positive (got %r)" % s.horizon_days)
    if not s.mean_interarrival_days > 0:
        bad("scenario", None, "mean_interarrival_days must be positive (got %r)" % s.mean_interarrival_days)

    c_k = s.slim.technology_constant
    if not c_k > 0:
        bad("slim", None, "technology_constant must be positive (got %r)" % c_k)
    elif not TECHNOLOGY_CONSTANT_RANGE[0] <= c_k <= TECHNOLOGY_CONSTANT_RANGE[1]:
        logging.warning("Technology constant %s is outside the typical range %s-%s." % (c_k, TECHNOLOGY_CONSTANT_RANGE[0], TECHNOLOGY_CONSTANT_RANGE[1]))

    for goal in Goal:
        weights = s.goal_weights.get(goal)
        if weights is None:
            bad("goal_weights", goal.name, "missing")
            continue
        if weights.alpha < 0 or weights.beta < 0:
            bad("goal_weights", goal.name, "alpha and beta must be nonnegative")
        if abs(weights.alpha + weights.beta - 1.0) > 1e-9:
            bad("goal_weights", goal.name, "alpha + beta must equal 1 (got %r)" % (weights.alpha + weights.beta))

    if any(w < 0 for w in s.policy.weights()):
        bad("policy", None, "weights must be nonnegative")
    if not s.policy.epsilon_days > 0:
        bad("policy", None, "epsilon_days must be positive")

    seen = set()
    for d in s.developers:
        if d.id in seen:
            bad("developer", d.id, "duplicate id")
        seen.add(d.id)
        if not isinstance(d.id, int) or d.id < 0:
            bad("developer", d.id, "id must be a nonnegative integer")
        if d.concurrency_cap < 1:
            bad("developer", d.id, "concurrency_cap must be at least 1")
        elif len(d.assignments) > d.concurrency_cap:
            bad("developer", d.id, "more assignments than concurrency_cap")
        for name, value in zip(("technical", "experience", "leadership"), d.skills.components()):
            if not 0.0 <= value <= 1.0:
                bad("developer", d.id, "%s skill %r outside [0,1]" % (name, value))

    available = total_skill(s.developers)

    seen = set()
    for p in s.projects:
        if p.id in seen:
            bad("project", p.id, "duplicate id")
        seen.add(p.id)
        if not isinstance(p.id, int) or p.id < 0:
            bad("project", p.id, "id must be a nonnegative integer")
        if not p.arrival_day >= 0:
            bad("project", p.id, "arrival_day must be nonnegative")
        if not p.deadline_day > p.arrival_day:
            bad("project", p.id, "deadline_day must be after arrival_day")
        if not p.duration_days > 0:
            bad("project", p.id, "duration_days must be positive")
        if not p.estimated_effort > 0:
            bad("project", p.id, "estimated_effort must be positive")
        if p.source_size is not None and not p.source_size > 0:
            bad("project", p.id, "source_size must be positive")
        if not p.expertise_level > 0:
            bad("project", p.id, "expertise_level must be positive")
        elif p.expertise_level > available:
            bad("project", p.id, "unschedulable project (expertise %r exceeds total developer skill %r)" % (p.expertise_level, available))

        if p.duration_days > 0 and p.estimated_effort > 0 and c_k > 0 and (p.source_size is None or p.source_size > 0):
            headcount = assignment.project_headcount(p, s.slim)
            if headcount > len(s.developers):
                bad("project", p.id, "unstaffable project (needs %d developers, scenario has %d)" % (headcount, len(s.developers)))

    return violations
