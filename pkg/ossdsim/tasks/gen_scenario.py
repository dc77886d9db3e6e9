# Generate a synthetic scenario file.
#
# ossd-run gen-scenario [--out=data/scenarios/default.yaml] [--seed=N]
#
#   --projects=30 --developers=46
#   Number of projects (enhancement requests) and developers.
#
#   --duration_min=0.3 --duration_max=0.7
#   Project duration range in years (uniform).
#
#   --mean_interarrival=30
#   Mean of the exponential gaps between arrivals, in days.
#
#   --horizon_days=1095
#   Length of the arrival window. With --arrival_window=horizon, arrivals are
#   drawn until the next one would fall past the horizon and --projects is
#   ignored; the default --arrival_window=count draws exactly --projects.
#
#   --slack=1.5-3.0 --effort=1-5 --expertise=0.5-2.5 --skill=0-1
#   Distributions that the survey data would otherwise supply: deadline
#   slack (a multiple of the duration), integer estimated effort, required
#   expertise, and each developer skill component. All uniform.
#
#   --technology_constant=2000 --concurrency_cap=2
#
# Every option can also be set in the `generator` section of config.yml.

import logging
import os.path

from ossdsim.tasks import engine, utils
from ossdsim.tasks.domain import (
    DEFAULT_GOAL_WEIGHTS, Developer, Goal, PolicyWeights, Priority, Project,
    Scenario, SkillVector, SlimParams,
)
from ossdsim.tasks.scenario_info import goal_weights_from_options, policy_from_options, write_scenario

DEFAULT_SEED = 20100601


def run(options):
    seed = utils.option(options, "seed", "generator", DEFAULT_SEED, int)
    out = options.get("out") or os.path.join(utils.data_dir(), "scenarios", "default.yaml")

    scenario = generate_from_options(options, seed)
    write_scenario(scenario, out)

    logging.warning("Wrote %d projects and %d developers to %s (seed %d)" % (len(scenario.projects), len(scenario.developers), out, seed))
    return out


def generate_from_options(options, seed):
    g = "generator"
    return gen_scenario(
        n_projects=utils.option(options, "projects", g, 30, int),
        n_developers=utils.option(options, "developers", g, 46, int),
        duration_min_years=utils.option(options, "duration_min", g, 0.3, float),
        duration_max_years=utils.option(options, "duration_max", g, 0.7, float),
        mean_interarrival_days=utils.option(options, "mean_interarrival", g, 30.0, float),
        seed=seed,
        horizon_days=utils.option(options, "horizon_days", g, 1095.0, float),
        arrival_window=utils.option(options, "arrival_window", g, "count"),
        slack=utils.option_range(options, "slack", g, (1.5, 3.0)),
        effort=utils.option_range(options, "effort", g, (1, 5), int),
        expertise=utils.option_range(options, "expertise", g, (0.5, 2.5)),
        skill=utils.option_range(options, "skill", g, (0.0, 1.0)),
        technology_constant=utils.option(options, "technology_constant", g, 2000.0, float),
        concurrency_cap=utils.option(options, "concurrency_cap", g, 2, int),
        policy=policy_from_options(options),
        goal_weights=goal_weights_from_options(options),
    )


def gen_scenario(n_projects, n_developers, duration_min_years, duration_max_years, mean_interarrival_days, seed,
                 horizon_days=1095.0, arrival_window="count", slack=(1.5, 3.0), effort=(1, 5), expertise=(0.5, 2.5),
                 skill=(0.0, 1.0), technology_constant=2000.0, concurrency_cap=2, policy=None, goal_weights=None):
    if n_projects < 0 or n_developers <= 0:
        raise utils.OptionError("need n_projects >= 0 and n_developers > 0 (got %d, %d)" % (n_projects, n_developers))
    if not 0 < duration_min_years < duration_max_years:
        raise utils.OptionError("need 0 < duration_min < duration_max (got %r, %r)" % (duration_min_years, duration_max_years))
    if not mean_interarrival_days > 0:
        raise utils.OptionError("mean_interarrival must be positive")
    if arrival_window not in ("count", "horizon"):
        raise utils.OptionError("arrival_window must be count or horizon (got %r)" % arrival_window)
    if not 0.0 <= skill[0] <= skill[1] <= 1.0:
        raise utils.OptionError("skill range must lie within [0,1]")

    rng = engine.make_rng(seed)

    if arrival_window == "count":
        arrivals = engine.schedule_arrivals(rng, mean_interarrival_days, n_projects)
    else:
        arrivals = []
        day = 0.0
        while True:
            day += float(rng.exponential(mean_interarrival_days))
            if day > horizon_days:
                break
            arrivals.append(day)

    priorities = list(Priority)
    goals = list(Goal)

    projects = []
    for id, arrival in enumerate(arrivals):
        duration = float(rng.uniform(duration_min_years, duration_max_years)) * 365.0
        projects.append(Project(
            id=id,
            priority=priorities[int(rng.integers(len(priorities)))],
            arrival_day=arrival,
            deadline_day=arrival + duration * float(rng.uniform(slack[0], slack[1])),
            estimated_effort=float(rng.integers(effort[0], effort[1], endpoint=True)),
            expertise_level=float(rng.uniform(expertise[0], expertise[1])),
            duration_days=duration,
            goal=goals[int(rng.integers(len(goals)))],
        ))

    developers = []
    for id in range(n_developers):
        technical, experience, leadership = (float(v) for v in rng.uniform(skill[0], skill[1], size=3))
        developers.append(Developer(
            id=id,
            skills=SkillVector(technical, experience, leadership),
            concurrency_cap=concurrency_cap,
        ))

    return Scenario(
        projects=tuple(projects),
        developers=tuple(developers),
        horizon_days=horizon_days,
        mean_interarrival_days=mean_interarrival_days,
        slim=SlimParams(technology_constant),
        goal_weights=goal_weights or dict(DEFAULT_GOAL_WEIGHTS),
        policy=policy or PolicyWeights(),
    )
