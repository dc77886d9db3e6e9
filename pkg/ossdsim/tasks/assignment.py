"""The agent-based side of the simulator: sizing a project with the Putnam
SLIM macro model, costing candidate teams, picking the cheapest team and
keeping developer workloads in step with assignments and releases.

SLIM relates delivered source size S_s to life-cycle effort K (person-years)
and development time t_d (years) through a technology constant C_k:

    S_s = C_k * K^(1/3) * t_d^(2/3)

A team's cost is the sum over its members of alpha * f(w) + beta * g(s),
where w is the member's workload, s their scalar skill, and (alpha, beta)
the weights of the project's goal. The cheapest team of the required size
is chosen.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from ossdsim.tasks.domain import InvalidParameterError, Status

DAYS_PER_YEAR = 365.0

# Above this many combinations select_team leaves the exhaustive search.
EXHAUSTIVE_LIMIT = 10 ** 6

# ceil() slack for effort that went through the SLIM round trip
HEADCOUNT_TOLERANCE = 1e-9

# Costs within this distance of the vectorized minimum are re-checked exactly.
NEAR_TIE = 1e-9

# Candidate-set chunk for the vectorized enumeration.
CHUNK_COMBINATIONS = 250000


class InfeasibleTeamError(Exception):

    def __init__(self, required, available):
        self.required = required
        self.available = available
        super(InfeasibleTeamError, self).__init__("team of %d needed, %d developers available" % (required, available))


class AssignmentError(RuntimeError):
    pass


class OverAllocationError(AssignmentError):
    pass


@dataclass(frozen=True)
class TeamSelection:
    project_id: int
    member_ids: tuple
    cost: float


def _check_positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise InvalidParameterError("%s must be positive (got %r)" % (name, value))


# SLIM sizing


def slim_source_size(c_k, k_person_years, t_d_years):
    _check_positive(c_k=c_k, k_person_years=k_person_years, t_d_years=t_d_years)
    return c_k * k_person_years ** (1.0 / 3.0) * t_d_years ** (2.0 / 3.0)


def slim_effort(s_s, c_k, t_d_years):
    _check_positive(s_s=s_s, c_k=c_k, t_d_years=t_d_years)
    return (s_s / (c_k * t_d_years ** (2.0 / 3.0))) ** 3


def required_headcount(k_person_years, t_d_years, n_available):
    _check_positive(k_person_years=k_person_years, t_d_years=t_d_years)
    headcount = max(1, int(math.ceil(k_person_years / t_d_years - HEADCOUNT_TOLERANCE)))
    if headcount > n_available:
        raise InfeasibleTeamError(headcount, n_available)
    return headcount


def development_time_years(project, start_day=None, basis="duration"):
    # "deadline" measures development time from the assignment start to the
    # due date, but never shorter than the project's own duration.
    days = project.duration_days
    if basis == "deadline" and start_day is not None:
        days = max(project.deadline_day - start_day, project.duration_days)
    elif basis not in ("duration", "deadline"):
        raise InvalidParameterError("unknown development time basis %r" % basis)
    return days / DAYS_PER_YEAR


def project_source_size(project, slim):
    if project.source_size is not None:
        return project.source_size
    # trust the recorded effort: SLIM then round-trips it
    return slim_source_size(slim.technology_constant, project.estimated_effort, project.duration_days / DAYS_PER_YEAR)


def project_headcount(project, slim, start_day=None, basis="duration", n_available=None):
    t_d = development_time_years(project, start_day, basis)
    k = slim_effort(project_source_size(project, slim), slim.technology_constant, t_d)
    if n_available is None:
        n_available = math.inf
    return required_headcount(k, t_d, n_available)


# Team cost


def load_cost(w):
    if not 0.0 <= w <= 1.0:
        raise InvalidParameterError("workload %r outside [0,1]" % w)
    return w


def skill_cost(s):
    if not 0.0 <= s <= 1.0:
        raise InvalidParameterError("skill %r outside [0,1]" % s)
    return 1.0 - s


def member_cost(developer, weights):
    return weights.alpha * load_cost(developer.workload) + weights.beta * skill_cost(developer.skill)


def team_cost(members, weights):
    if not members:
        raise InvalidParameterError("a team needs at least one member")
    # fsum: the same team costs the same whatever order its members come in
    return math.fsum(member_cost(d, weights) for d in members)


# Team selection


@functools.lru_cache(maxsize=8)
def _combination_table(n, k):
    count = math.comb(n, k)
    dtype = np.uint8 if n <= 256 else np.int32
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(n), k)), dtype=dtype, count=count * k)
    return flat.reshape(count, k)


def _check_selection(candidates, k):
    if k < 1:
        raise InvalidParameterError("team size must be at least 1 (got %r)" % k)
    if k > len(candidates):
        raise InfeasibleTeamError(k, len(candidates))
    for d in candidates:
        if not d.available:
            raise InvalidParameterError("developer %s has no free slot" % d.id)


def select_team_exhaustive(candidates, k, weights, project_id=None):
    _check_selection(candidates, k)
    pool = sorted(candidates, key=lambda d: d.id)
    costs = np.array([member_cost(d, weights) for d in pool])

    # Combinations come in lexicographic index order, which over the
    # id-sorted pool is lexicographic member-id order, so the first
    # minimum is the tie-break winner. Near-ties are settled with the
    # exact team_cost.
    table = _combination_table(len(pool), k)
    best = None
    for start in range(0, len(table), CHUNK_COMBINATIONS):
        chunk = table[start:start + CHUNK_COMBINATIONS]
        sums = costs[chunk].sum(axis=1)
        low = sums.min()
        for row in chunk[sums <= low + NEAR_TIE]:
            members = [pool[i] for i in row]
            key = (team_cost(members, weights), tuple(d.id for d in members))
            if best is None or key < best:
                best = key

    cost, member_ids = best
    return TeamSelection(project_id, member_ids, cost)


def select_team_greedy(candidates, k, weights, project_id=None):
    _check_selection(candidates, k)
    ranked = sorted(candidates, key=lambda d: (member_cost(d, weights), d.id))
    members = sorted(ranked[:k], key=lambda d: d.id)
    return TeamSelection(project_id, tuple(d.id for d in members), team_cost(members, weights))


def select_team(candidates, k, weights, exhaustive_limit=EXHAUSTIVE_LIMIT, project_id=None):
    _check_selection(candidates, k)
    if math.comb(len(candidates), k) <= exhaustive_limit:
        return select_team_exhaustive(candidates, k, weights, project_id)

    logging.debug("[project %s] C(%d, %d) combinations over the limit, using swap search" % (project_id, len(candidates), k))

    by_id = dict((d.id, d) for d in candidates)
    seed = select_team_greedy(candidates, k, weights, project_id)
    members = set(seed.member_ids)
    cost = seed.cost

    # Pairwise swap local search. With separable costs the greedy seed is
    # already optimal and no swap improves it.
    improved = True
    while improved:
        improved = False
        for out_id in sorted(members):
            for in_id in sorted(set(by_id) - members):
                trial = (members - {out_id}) | {in_id}
                trial_cost = team_cost([by_id[i] for i in sorted(trial)], weights)
                if trial_cost < cost:
                    members, cost = trial, trial_cost
                    improved = True
                    break
            if improved:
                break

    return TeamSelection(project_id, tuple(sorted(members)), cost)


# Assignment and release


def assign(project, team, developers, start_day):
    if project.status != Status.OnHold:
        raise AssignmentError("project %s is %s, not OnHold" % (project.id, project.status.name))

    members = set(team.member_ids)
    updated = []
    for d in developers:
        if d.id in members:
            if not d.available:
                raise OverAllocationError("developer %s is already at capacity (%d projects)" % (d.id, len(d.assignments)))
            d = replace(d, assignments=d.assignments | {project.id})
            members.discard(d.id)
        updated.append(d)
    if members:
        raise AssignmentError("unknown developers in team for project %s: %s" % (project.id, sorted(members)))

    project = project.with_status(
        Status.Ongoing,
        start_day=start_day,
        finish_day=start_day + project.duration_days,
        team=tuple(sorted(team.member_ids)),
    )
    return tuple(updated), project


def release(project, developers):
    if project.status != Status.Ongoing:
        raise AssignmentError("project %s is %s, not Ongoing" % (project.id, project.status.name))

    updated = []
    for d in developers:
        if project.id in d.assignments:
            d = replace(d, assignments=d.assignments - {project.id})
        updated.append(d)

    return tuple(updated), project.with_status(Status.Finished)
