import os
import os.path
import errno
import sys
import io
import csv
import traceback
import logging
import importlib

import yaml
import rtyaml


# read in an opt-in config file for changing directories and experiment defaults
# returns None if it's not there, and this should always be handled gracefully
path = "config.yml"
if os.path.exists(path):
    with open(path) as f:
        config = yaml.safe_load(f)
else:
    config = None


# Bad or missing command-line options.
class OptionError(ValueError):
    pass


# One or more items of a batch failed.
class BatchError(RuntimeError):

    def __init__(self, failed):
        self.failed = failed
        super(BatchError, self).__init__("Failed: %s" % ", ".join(str(id) for id, _ in failed))


# uses config values if present


def data_dir():
    data = None

    if config:
        output = config.get('output', None)
        if output:
            data = output.get('data', None)

    if not data:
        data = "data"

    return data


def config_value(section, key, default=None):
    if config:
        values = config.get(section, None)
        if values and key in values:
            return values[key]
    return default


# Options come off the command line as strings (or True for bare flags).
# A flag wins over config.yml, which wins over the built-in default.


def option(options, key, section=None, default=None, cast=str):
    value = options.get(key, None)
    if value is None and section:
        value = config_value(section, key, None)
    if value is None:
        return default
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise OptionError("Invalid value for --%s: %r" % (key, value))


def option_range(options, key, section=None, default=None, cast=float):
    # "--effort=1-5" or a [lo, hi] list in config.yml
    value = options.get(key, None)
    if value is None and section:
        value = config_value(section, key, None)
    if value is None:
        return default
    try:
        if isinstance(value, str):
            lo, hi = value.split("-", 1)
        else:
            lo, hi = value
        lo, hi = cast(lo), cast(hi)
    except (TypeError, ValueError):
        raise OptionError("Invalid range for --%s: %r (expected lo-hi)" % (key, value))
    if lo > hi:
        raise OptionError("Invalid range for --%s: %r > %r" % (key, lo, hi))
    return (lo, hi)


def option_list(options, key, section=None, default=None):
    value = options.get(key, None)
    if value is None and section:
        value = config_value(section, key, None)
    if value is None:
        return default
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    return list(value)


def process_set(to_run, run_func, options, *extra_args):
    errors = []
    results = []

    for id in to_run:
        try:
            result = run_func(id, options, *extra_args)
        except Exception as e:
            if options.get('raise', False):
                raise
            errors.append((id, e, format_exception(e)))
            continue

        results.append((id, result))
        logging.info("[%s] Done" % (id,))

    if len(errors) > 0:
        message = "\nErrors for %s items:\n" % len(errors)
        for id, error, msg in errors:
            message += "\n\n[%s] Exception:\n\n" % (id,)
            message += msg
        admin(message)
        raise BatchError([(id, error) for id, error, msg in errors])

    logging.warning("Completed %s." % len(results))

    return results


def write(content, destination, options={}):
    mkdir_p(os.path.dirname(destination))
    f = open(destination, 'wb')
    try:
        f.write(content.encode('utf-8'))
    except AttributeError:
        f.write(content)
    f.close()


def write_csv(rows, header, destination):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    write(buf.getvalue(), destination)


def read_csv(destination):
    with open(destination, newline="") as f:
        return list(csv.DictReader(f))


def write_yaml(data, destination):
    return write(rtyaml.dump(data), destination)


def read_yaml(destination):
    with open(destination) as f:
        return yaml.safe_load(f)


# Full-precision, platform-independent text for a float in output files.


def format_float(value):
    if value is None:
        return ""
    return repr(float(value))


# mkdir -p in python, from:
# http://stackoverflow.com/questions/600268/mkdir-p-functionality-in-python


def mkdir_p(path):
    if not path:
        return
    try:
        os.makedirs(path)
    except OSError as exc:
        if exc.errno == errno.EEXIST:
            pass
        else:
            raise


# Import a --patch module and let it swap in its functions.


def apply_patch(module_name, task_name):
    patch_mod = importlib.import_module(module_name)
    patch_func = getattr(patch_mod, 'patch', None)
    if patch_func is None:
        raise OptionError("You specified a --patch argument but the {} module does not contain a 'patch' function.".format(module_name))
    if not callable(patch_func):
        raise OptionError("You specified a --patch argument but {}.patch is not callable".format(module_name))
    patch_func(task_name)
    logging.info("Applied patch %s" % module_name)


def admin(body):
    try:
        if isinstance(body, Exception):
            body = format_exception(body)

        logging.error(body)  # always print it

    except Exception as exception:
        print("Exception logging message to admin, halting as to avoid loop")
        print(format_exception(exception))


def format_exception(exception):
    exc_type, exc_value, exc_traceback = sys.exc_info()
    if exc_value is None:
        return "".join(traceback.format_exception_only(type(exception), exception))
    return "\n".join(traceback.format_exception(exc_type, exc_value, exc_traceback))
