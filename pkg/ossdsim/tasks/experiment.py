# Run paired policy-vs-FIFO replications and write the result tables.
#
# ossd-run run [--scenario=data/scenarios/default.yaml] [--output=data/experiment]
#
#   --scenario=path
#   Scenario file to simulate. Without it, a scenario is generated with the
#   gen-scenario options (and --scenario_seed, default the gen-scenario seed).
#
#   --replications=10
#   Replication r of every mode uses seed --seed + r, so both modes see the
#   same arrivals in the same replication.
#
#   --seed=N
#   Base seed (default 1). Always logged and written to experiment.yml.
#
#   --modes=Fifo,Dynamic
#   Which queue policies to run. The comparison rows need both.
#
#   --workers=N
#   Run replications in N processes. Output does not depend on N.
#
#   --arrivals=sampled|scenario
#   Draw arrival days per seed (default) or replay the scenario's own.
#
#   --slim_basis=duration|deadline
#   Development time used for SLIM sizing: the project duration (default),
#   or the time from team assignment to the deadline.
#
#   --exhaustive_limit=1000000 --confidence=0.95
#
# Output files, all in --output:
#
#   replications.csv  one metrics row per (mode, replication)
#   projects.csv      arrival/start/finish of every project in every run
#   summary.csv       mean±half_width per mode and metric, plus the
#                     improvement and paired-win rows when both modes ran
#   experiment.yml    the resolved configuration

import logging
import os.path
from collections import OrderedDict, namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ossdsim.tasks import engine, metrics, utils
from ossdsim.tasks.assignment import EXHAUSTIVE_LIMIT
from ossdsim.tasks.domain import validate_scenario
from ossdsim.tasks.scenario_info import load_scenario

DEFAULT_SEED = 1

ALL_MODES = (engine.PolicyMode.Fifo.value, engine.PolicyMode.Dynamic.value)

REPLICATIONS_HEADER = ["mode", "replication", "seed"] + list(metrics.METRICS) + ["projects", "horizon_days"]

PROJECTS_HEADER = ["mode", "replication", "project_id", "arrival_day", "start_day", "finish_day", "waiting_days", "team_size"]


@dataclass(frozen=True)
class ExperimentConfig:
    scenario_path: str
    replications: int
    base_seed: int
    modes: tuple
    output: str
    workers: int = 1
    arrivals: str = "sampled"
    slim_basis: str = "duration"
    exhaustive_limit: int = EXHAUSTIVE_LIMIT
    confidence: float = 0.95
    patch: str = None


class Job(namedtuple("Job", ["mode", "replication", "seed"])):

    def __str__(self):
        return "%s#%d" % (self.mode, self.replication)


def experiment_config(options):
    e = "experiment"
    modes = tuple(utils.option_list(options, "modes", e, list(ALL_MODES)))
    for mode in modes:
        if mode not in ALL_MODES:
            raise utils.OptionError("Unknown mode %r (use %s)." % (mode, ", ".join(ALL_MODES)))
    if len(set(modes)) != len(modes):
        raise utils.OptionError("Modes listed twice: %s" % ",".join(modes))

    config = ExperimentConfig(
        scenario_path=options.get("scenario", None),
        replications=utils.option(options, "replications", e, 10, int),
        base_seed=utils.option(options, "seed", e, DEFAULT_SEED, int),
        modes=modes,
        output=options.get("output") or os.path.join(utils.data_dir(), "experiment"),
        workers=utils.option(options, "workers", e, 1, int),
        arrivals=utils.option(options, "arrivals", e, "sampled"),
        slim_basis=utils.option(options, "slim_basis", e, "duration"),
        exhaustive_limit=utils.option(options, "exhaustive_limit", e, EXHAUSTIVE_LIMIT, int),
        confidence=utils.option(options, "confidence", e, 0.95, float),
        patch=options.get("patch", None),
    )
    if config.replications < 1:
        raise utils.OptionError("--replications must be at least 1")
    if not 0 <= config.base_seed < 2 ** 64:
        raise utils.OptionError("--seed must be a 64-bit unsigned integer")
    if config.arrivals not in ("sampled", "scenario"):
        raise utils.OptionError("--arrivals must be sampled or scenario")
    if config.slim_basis not in ("duration", "deadline"):
        raise utils.OptionError("--slim_basis must be duration or deadline")
    if not 0 < config.confidence < 1:
        raise utils.OptionError("--confidence must be between 0 and 1")
    return config


def load_or_generate(options, config):
    if config.scenario_path:
        return load_scenario(config.scenario_path)

    from ossdsim.tasks import gen_scenario
    seed = utils.option(options, "scenario_seed", "generator", gen_scenario.DEFAULT_SEED, int)
    logging.warning("No --scenario given, generating one (scenario seed %d)" % seed)
    return gen_scenario.generate_from_options(options, seed)


def run(options):
    config = experiment_config(options)
    scenario = load_or_generate(options, config)

    violations = validate_scenario(scenario)
    if violations:
        raise engine.ScenarioError(violations)

    logging.warning("Running %d replications of %s with base seed %d (%d projects, %d developers)" % (
        config.replications, ", ".join(config.modes), config.base_seed, len(scenario.projects), len(scenario.developers)))

    results = run_jobs(make_jobs(config), scenario, config, options)
    write_outputs(results, scenario, config)

    logging.warning("Wrote results to %s" % config.output)
    return config.output


def make_jobs(config):
    return [
        Job(mode, r, config.base_seed + r)
        for mode in config.modes
        for r in range(config.replications)
    ]


def run_job(job, options, scenario, config):
    logging.info("[%s] Simulating with seed %d..." % (job, job.seed))
    return engine.run(
        scenario, job.mode, job.seed,
        arrivals=config.arrivals,
        exhaustive_limit=config.exhaustive_limit,
        slim_basis=config.slim_basis,
    )


def _init_worker(patch_name, task_name):
    if patch_name:
        utils.apply_patch(patch_name, task_name)


def run_jobs(jobs, scenario, config, options):
    # Returns [(job, RunResult)] in job order, whatever the worker count.
    if config.workers <= 1:
        return utils.process_set(jobs, run_job, options, scenario, config)

    with ProcessPoolExecutor(max_workers=config.workers, initializer=_init_worker, initargs=(config.patch, "run")) as pool:
        futures = dict((job, pool.submit(run_job, job, {}, scenario, config)) for job in jobs)
        return utils.process_set(jobs, lambda job, options: futures[job].result(), options)


# Output


def summaries_by_mode(results):
    # mode -> [(job, RunResult, ReplicationSummary)] in replication order
    by_mode = OrderedDict()
    for job, result in results:
        by_mode.setdefault(job.mode, []).append((job, result, metrics.summarize_run(result)))
    return by_mode


def interval(values, confidence):
    try:
        return metrics.summarize(values, confidence)
    except metrics.InsufficientReplicationsError:
        return None


def format_interval(values, estimate):
    if estimate is None:
        # one replication: the mean alone, no interval
        return "%.4f±n/a" % (sum(values) / len(values))
    return str(estimate)


def metric_series(runs, metric):
    return [getattr(summary, metric) for job, result, summary in runs]


def summary_rows(by_mode, confidence):
    rows = []
    means = {}
    for mode, runs in by_mode.items():
        row = [mode]
        for metric in metrics.METRICS:
            values = metric_series(runs, metric)
            row.append(format_interval(values, interval(values, confidence)))
            means[(mode, metric)] = sum(values) / len(values)
        row.append(len(runs))
        rows.append(row)

    fifo, dynamic = engine.PolicyMode.Fifo.value, engine.PolicyMode.Dynamic.value
    if fifo in by_mode and dynamic in by_mode:
        row = ["improvement_pct"]
        for metric in metrics.METRICS:
            try:
                row.append("%.4f" % metrics.improvement_pct(means[(fifo, metric)], means[(dynamic, metric)]))
            except metrics.UndefinedMetricError:
                row.append("n/a")
        row.append(len(by_mode[dynamic]))
        rows.append(row)

        row = ["dynamic_wins"]
        for metric in metrics.METRICS:
            wins = metrics.paired_wins(metric_series(by_mode[fifo], metric), metric_series(by_mode[dynamic], metric))
            row.append("%d/%d" % (wins, len(by_mode[dynamic])))
        row.append(len(by_mode[dynamic]))
        rows.append(row)
    return rows


def write_outputs(results, scenario, config):
    by_mode = summaries_by_mode(results)

    rows = []
    project_rows = []
    for mode, runs in by_mode.items():
        for job, result, summary in runs:
            rows.append([mode, job.replication, job.seed] + [utils.format_float(getattr(summary, m)) for m in metrics.METRICS] + [len(result.records), utils.format_float(result.horizon_days)])
            for record in sorted(result.records.values(), key=lambda r: r.project_id):
                waiting = None if record.start_day is None else record.start_day - record.arrival_day
                project_rows.append([
                    mode, job.replication, record.project_id,
                    utils.format_float(record.arrival_day), utils.format_float(record.start_day),
                    utils.format_float(record.finish_day), utils.format_float(waiting), record.team_size,
                ])

    utils.write_csv(rows, REPLICATIONS_HEADER, os.path.join(config.output, "replications.csv"))
    utils.write_csv(project_rows, PROJECTS_HEADER, os.path.join(config.output, "projects.csv"))
    utils.write_csv(summary_rows(by_mode, config.confidence), ["row"] + list(metrics.METRICS) + ["replications"], os.path.join(config.output, "summary.csv"))
    utils.write_yaml(experiment_record(scenario, config), os.path.join(config.output, "experiment.yml"))


def experiment_record(scenario, config):
    return OrderedDict([
        ("scenario", config.scenario_path or "generated"),
        ("projects", len(scenario.projects)),
        ("developers", len(scenario.developers)),
        ("seed", config.base_seed),
        ("replications", config.replications),
        ("modes", list(config.modes)),
        ("rng", engine.RNG_ALGORITHM),
        ("arrivals", config.arrivals),
        ("slim_basis", config.slim_basis),
        ("exhaustive_limit", config.exhaustive_limit),
        ("confidence", config.confidence),
        ("patch", config.patch),
    ])
