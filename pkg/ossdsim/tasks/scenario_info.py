# Scenario files: YAML documents holding the project database (id,
# priority, arrival, deadline, effort, required expertise, duration, goal)
# and the skill database (technical skill, experience, leadership per
# developer), plus the model parameters.
#
#   schema_version: '1.0'
#   horizon_days: 1095.0
#   mean_interarrival_days: 30.0
#   slim: {technology_constant: 2000.0}
#   goal_weights:
#     TimeUrgent: {alpha: 0.7, beta: 0.3}
#     QualityOriented: {alpha: 0.3, beta: 0.7}
#   policy: {w_priority: 0.4, w_urgency: 0.3, w_effort: 0.15, w_skill_match: 0.15, epsilon_days: 1.0}
#   projects:
#   - {id: 0, priority: High, arrival_day: 12.5, deadline_day: 400.0, estimated_effort: 3,
#      expertise_level: 1.2, duration_days: 180.0, goal: TimeUrgent}   # source_size optional
#   developers:
#   - {id: 0, technical: 0.6, experience: 0.3, leadership: 0.9, concurrency_cap: 2}

import logging
from collections import OrderedDict

from packaging.version import Version

from ossdsim.tasks import utils
from ossdsim.tasks.domain import (
    DEFAULT_GOAL_WEIGHTS, Developer, Goal, GoalWeights, PolicyWeights, Priority,
    Project, Scenario, SkillVector, SlimParams,
)
from ossdsim.tasks.engine import ScenarioError

SCHEMA_VERSION = "1.0"


def _bad(problem):
    return ScenarioError([problem])


def _enum(enum_type, value, what):
    try:
        return enum_type[value]
    except KeyError:
        raise _bad("unknown %s %r (expected one of %s)" % (what, value, ", ".join(e.name for e in enum_type)))


def _integer(value):
    # 3 and 3.0 are fine, 1.5 and "3" are not
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(value)
    if isinstance(value, float) and not value.is_integer():
        raise ValueError(value)
    return int(value)


def _field(record, key, what, cast=float, default=KeyError):
    if key not in record or record[key] is None:
        if default is KeyError:
            raise _bad("%s is missing %s" % (what, key))
        return default
    try:
        return cast(record[key])
    except (TypeError, ValueError):
        raise _bad("%s has a bad %s: %r" % (what, key, record[key]))


def check_schema_version(version):
    if version is None:
        raise _bad("scenario file has no schema_version")
    try:
        found = Version(str(version))
    except Exception:
        raise _bad("unreadable schema_version %r" % version)
    supported = Version(SCHEMA_VERSION)
    if found.major > supported.major:
        raise _bad("schema_version %s is newer than the supported %s" % (found, supported))
    if found > supported:
        logging.warning("Scenario schema_version %s is newer than %s; unknown fields are ignored." % (found, supported))


def project_from_dict(record):
    what = "project %s" % record.get("id", "?")
    return Project(
        id=_field(record, "id", what, _integer),
        priority=_enum(Priority, record.get("priority"), "priority"),
        arrival_day=_field(record, "arrival_day", what),
        deadline_day=_field(record, "deadline_day", what),
        estimated_effort=_field(record, "estimated_effort", what),
        expertise_level=_field(record, "expertise_level", what),
        duration_days=_field(record, "duration_days", what),
        goal=_enum(Goal, record.get("goal", Goal.TimeUrgent.name), "goal"),
        source_size=_field(record, "source_size", what, default=None),
    )


def developer_from_dict(record):
    what = "developer %s" % record.get("id", "?")
    return Developer(
        id=_field(record, "id", what, _integer),
        skills=SkillVector(
            technical=_field(record, "technical", what),
            experience=_field(record, "experience", what),
            leadership=_field(record, "leadership", what),
        ),
        concurrency_cap=_field(record, "concurrency_cap", what, _integer, default=2),
    )


def policy_from_dict(record):
    if not record:
        return PolicyWeights()
    defaults = PolicyWeights()
    return PolicyWeights(*[
        _field(record, key, "policy", default=getattr(defaults, key))
        for key in ("w_priority", "w_urgency", "w_effort", "w_skill_match", "epsilon_days")
    ])


def goal_weights_from_dict(record):
    weights = dict(DEFAULT_GOAL_WEIGHTS)
    for name, values in (record or {}).items():
        goal = _enum(Goal, name, "goal")
        weights[goal] = GoalWeights(
            alpha=_field(values, "alpha", "goal_weights %s" % name),
            beta=_field(values, "beta", "goal_weights %s" % name),
        )
    return weights


def scenario_from_dict(data):
    if not isinstance(data, dict):
        raise _bad("scenario file is not a mapping")
    check_schema_version(data.get("schema_version"))

    return Scenario(
        projects=tuple(project_from_dict(p) for p in data.get("projects") or []),
        developers=tuple(developer_from_dict(d) for d in data.get("developers") or []),
        horizon_days=_field(data, "horizon_days", "scenario", default=1095.0),
        mean_interarrival_days=_field(data, "mean_interarrival_days", "scenario", default=30.0),
        slim=SlimParams(_field(data.get("slim") or {}, "technology_constant", "slim", default=2000.0)),
        goal_weights=goal_weights_from_dict(data.get("goal_weights")),
        policy=policy_from_dict(data.get("policy")),
    )


def scenario_to_dict(s):
    data = OrderedDict()
    data["schema_version"] = SCHEMA_VERSION
    data["horizon_days"] = float(s.horizon_days)
    data["mean_interarrival_days"] = float(s.mean_interarrival_days)
    data["slim"] = OrderedDict([("technology_constant", float(s.slim.technology_constant))])
    data["goal_weights"] = OrderedDict(
        (goal.name, OrderedDict([("alpha", float(s.goal_weights[goal].alpha)), ("beta", float(s.goal_weights[goal].beta))]))
        for goal in Goal
    )
    data["policy"] = OrderedDict([
        ("w_priority", float(s.policy.w_priority)),
        ("w_urgency", float(s.policy.w_urgency)),
        ("w_effort", float(s.policy.w_effort)),
        ("w_skill_match", float(s.policy.w_skill_match)),
        ("epsilon_days", float(s.policy.epsilon_days)),
    ])

    projects = []
    for p in s.projects:
        record = OrderedDict([
            ("id", p.id),
            ("priority", p.priority.name),
            ("arrival_day", float(p.arrival_day)),
            ("deadline_day", float(p.deadline_day)),
            ("estimated_effort", float(p.estimated_effort)),
            ("expertise_level", float(p.expertise_level)),
            ("duration_days", float(p.duration_days)),
            ("goal", p.goal.name),
        ])
        if p.source_size is not None:
            record["source_size"] = float(p.source_size)
        projects.append(record)
    data["projects"] = projects

    data["developers"] = [
        OrderedDict([
            ("id", d.id),
            ("technical", float(d.skills.technical)),
            ("experience", float(d.skills.experience)),
            ("leadership", float(d.skills.leadership)),
            ("concurrency_cap", d.concurrency_cap),
        ])
        for d in s.developers
    ]
    return data


def load_scenario(path):
    try:
        data = utils.read_yaml(path)
    except IOError as e:
        raise _bad("cannot read scenario %s: %s" % (path, e))
    return scenario_from_dict(data)


def write_scenario(s, path):
    utils.write_yaml(scenario_to_dict(s), path)


# Model parameters from the command line or config.yml, for generated scenarios.


def policy_from_options(options):
    defaults = PolicyWeights()
    return PolicyWeights(*[
        utils.option(options, key, "policy", getattr(defaults, key), float)
        for key in ("w_priority", "w_urgency", "w_effort", "w_skill_match", "epsilon_days")
    ])


def goal_weights_from_options(options):
    weights = dict(DEFAULT_GOAL_WEIGHTS)
    for goal in Goal:
        values = utils.config_value("goal_weights", goal.name, None) or {}
        alpha = utils.option(options, "alpha_" + goal.name.lower(), None, values.get("alpha", weights[goal].alpha), float)
        beta = utils.option(options, "beta_" + goal.name.lower(), None, values.get("beta", weights[goal].beta), float)
        weights[goal] = GoalWeights(alpha=alpha, beta=beta)
    return weights
