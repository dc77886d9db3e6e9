# Per-replication series for plotting, one CSV per metric.
#
# ossd-run plot-data [--output=data/experiment]
#
# Reads replications.csv from a finished `run` and writes plot/<metric>.csv
# with one row per replication and one column per mode. Values are copied
# as written, so they match the replications file exactly.

import logging
import os.path
from collections import OrderedDict

from ossdsim.tasks import utils

PLOTS = OrderedDict([
    ("waiting_time", "avg_waiting_days"),
    ("utilization", "avg_utilization"),
    ("queue_length", "avg_queue_length"),
])


class MissingResultsError(IOError):
    pass


def run(options):
    output = options.get("output") or os.path.join(utils.data_dir(), "experiment")
    source = os.path.join(output, "replications.csv")
    if not os.path.exists(source):
        raise MissingResultsError("No replications at %s; run `ossd-run run` first." % source)

    rows = utils.read_csv(source)
    if not rows:
        raise MissingResultsError("%s has no replications." % source)

    written = write_plot_data(rows, os.path.join(output, "plot"))
    logging.warning("Wrote %d plot files to %s" % (len(written), os.path.join(output, "plot")))
    return written


def modes_in(rows):
    modes = []
    for row in rows:
        if row["mode"] not in modes:
            modes.append(row["mode"])
    # Fifo first, like the summary table
    return sorted(modes, key=lambda m: (m != "Fifo", m))


def write_plot_data(rows, destination):
    modes = modes_in(rows)
    by_replication = OrderedDict()
    for row in sorted(rows, key=lambda r: int(r["replication"])):
        by_replication.setdefault(int(row["replication"]), {})[row["mode"]] = row

    written = []
    for name, metric in PLOTS.items():
        header = ["replication"] + ["%s_%s" % (mode, metric) for mode in modes]
        table = [
            [r] + [runs[mode][metric] if mode in runs else "" for mode in modes]
            for r, runs in by_replication.items()
        ]
        path = os.path.join(destination, name + ".csv")
        utils.write_csv(table, header, path)
        written.append(path)
    return written
