#!/usr/bin/env python

import sys
import logging
import importlib

# task names on the command line -> modules under ossdsim/tasks
ALIASES = {
    "run": "experiment",
}

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILURE = 2


def parse_options(args):
    options = {}
    for arg in args:
        if arg.startswith("--"):

            if "=" in arg:
                key, value = arg.split('=', 1)
            else:
                key, value = arg, True

            key = key.split("--", 1)[1]
            if value == 'True':
                value = True
            elif value == 'False':
                value = False
            options[key.lower().replace("-", "_")] = value
    return options


def task_module_name(task_name):
    name = task_name.replace("-", "_")
    return "ossdsim.tasks." + ALIASES.get(name, name)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv

    if not argv or argv[0].startswith("--"):
        print("Usage: ossd-run <gen-scenario|run|plot-data|sweep> [--option=value ...]")
        return EXIT_INPUT

    # name of the task comes first
    task_name = argv[0]
    options = parse_options(argv[1:])

    # configure logging
    if options.get('debug', False):
        log_level = "debug"
    else:
        log_level = options.get("log", "warn")

    if log_level not in ["debug", "info", "warn", "error"]:
        print("Invalid log level (specify: debug, info, warn, error).")
        return EXIT_INPUT

    if log_level == "warn":
        log_level = "warning"

    if options.get('timestamps', False):
        logging.basicConfig(format='%(asctime)s %(message)s', level=log_level.upper())
    else:
        logging.basicConfig(format='%(message)s', level=log_level.upper())

    from ossdsim.tasks import utils
    from ossdsim.tasks.engine import ScenarioError

    module_name = task_module_name(task_name)
    try:
        task_mod = importlib.import_module(module_name)
    except ModuleNotFoundError as e:
        if e.name != module_name:
            raise
        logging.error("Unknown task %s." % task_name)
        return EXIT_INPUT

    try:
        if 'patch' in options:
            utils.apply_patch(options['patch'], task_name)

        task_mod.run(options)
    except (ScenarioError, utils.OptionError) as exception:
        logging.error(str(exception))
        return EXIT_INPUT
    except Exception as exception:
        utils.admin(exception)
        return EXIT_FAILURE

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
