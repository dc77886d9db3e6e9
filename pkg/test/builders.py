# Small constructors for tests.

from ossdsim.tasks.domain import Developer, Goal, Priority, Project, Scenario, SkillVector


def developer(id, skill=0.5, used=0, cap=2):
    # `used` fills that many slots with placeholder project ids
    return Developer(
        id=id,
        skills=SkillVector(skill, skill, skill),
        assignments=frozenset(range(1000, 1000 + used)),
        concurrency_cap=cap,
    )


def project(id, priority=Priority.Medium, arrival=0.0, deadline=None, effort=1.0, expertise=1.0, duration=365.0, goal=Goal.TimeUrgent):
    return Project(
        id=id,
        priority=priority,
        arrival_day=arrival,
        deadline_day=arrival + 2 * duration if deadline is None else deadline,
        estimated_effort=effort,
        expertise_level=expertise,
        duration_days=duration,
        goal=goal,
    )


def scenario(projects, developers, **kwargs):
    return Scenario(projects=tuple(projects), developers=tuple(developers), **kwargs)
