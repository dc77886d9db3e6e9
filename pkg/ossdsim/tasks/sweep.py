# Repeat the paired experiment over a range of one generator setting.
#
# ossd-run sweep --vary=developers --values=20,30,46 [--output=data/sweep]
#
#   --vary=projects|developers|mean_interarrival|duration_max
#   --values=a,b,c
#
# Each value gets a freshly generated scenario (same --scenario_seed) and the
# usual replications of both modes; all other `run` options apply. Writes
# sweep.csv with one row per (value, mode) and the waiting-time improvement
# of the dynamic policy on its Dynamic row.

import logging
import os.path

from ossdsim.tasks import engine, experiment, gen_scenario, metrics, utils
from ossdsim.tasks.domain import validate_scenario

VARIABLES = {
    "projects": int,
    "developers": int,
    "mean_interarrival": float,
    "duration_max": float,
}

HEADER = ["vary", "value", "mode", "replications"] + list(metrics.METRICS) + ["waiting_improvement_pct"]


def run(options):
    vary = options.get("vary", None)
    if vary not in VARIABLES:
        raise utils.OptionError("--vary must be one of %s" % ", ".join(sorted(VARIABLES)))
    values = utils.option_list(options, "values", None, [])
    if not values:
        raise utils.OptionError("--values is required, e.g. --values=20,30,40")
    try:
        values = [VARIABLES[vary](v) for v in values]
    except ValueError:
        raise utils.OptionError("Invalid --values for %s: %s" % (vary, options["values"]))

    output = options.get("output") or os.path.join(utils.data_dir(), "sweep")
    config = experiment.experiment_config(dict(options, output=output))
    scenario_seed = utils.option(options, "scenario_seed", "generator", gen_scenario.DEFAULT_SEED, int)

    rows = []
    for value in values:
        logging.warning("Sweep %s=%s" % (vary, value))
        scenario = gen_scenario.generate_from_options(dict(options, **{vary: value}), scenario_seed)
        violations = validate_scenario(scenario)
        if violations:
            raise engine.ScenarioError(violations)

        results = experiment.run_jobs(experiment.make_jobs(config), scenario, config, options)
        rows.extend(sweep_rows(vary, value, experiment.summaries_by_mode(results)))

    path = os.path.join(output, "sweep.csv")
    utils.write_csv(rows, HEADER, path)
    logging.warning("Wrote %s" % path)
    return path


def sweep_rows(vary, value, by_mode):
    means = {}
    rows = []
    for mode, runs in by_mode.items():
        row = [vary, value, mode, len(runs)]
        for metric in metrics.METRICS:
            series = experiment.metric_series(runs, metric)
            means[(mode, metric)] = sum(series) / len(series)
            row.append("%.4f" % means[(mode, metric)])
        row.append("")
        rows.append(row)

    fifo, dynamic = engine.PolicyMode.Fifo.value, engine.PolicyMode.Dynamic.value
    if fifo in by_mode and dynamic in by_mode:
        try:
            gain = "%.4f" % metrics.improvement_pct(means[(fifo, "avg_waiting_days")], means[(dynamic, "avg_waiting_days")])
        except metrics.UndefinedMetricError:
            gain = "n/a"
        for row in rows:
            if row[2] == dynamic:
                row[-1] = gain
    return rows
