"""A set of useful helper functions for XLaguerre to use."""

import os
import copy
import csv
import json

import numpy as np

from xlaguerre.polycore import parse_rational


def check_filepath(input_filename, correct_ext):
    # Check correct file extension and that file exists
    if correct_ext not in input_filename:
        raise IOError("File {0} has the wrong extension. Expected a {1} file.".format(input_filename, correct_ext))
    if not os.path.exists(input_filename):
        raise IOError("Cannot find file {0}.".format(input_filename))


def parse_input(run_input):
    # Loads a run description from a JSON file or copies it from a dictionary

    # File
    if isinstance(run_input, str):
        check_filepath(run_input, ".json")
        with open(run_input) as input_json_handle:
            return json.load(input_json_handle)

    # Dictionary
    elif isinstance(run_input, dict):
        return copy.deepcopy(run_input)

    # Input format not recognized
    else:
        raise IOError("Input to XLaguerre must be a file path or Python dictionary, not type {0}.".format(type(run_input)))


def import_rational(key, dict_of_vals, default_value):
    # Imports an exact rational parameter. Only ints and "p/q" strings are
    # accepted so that a coupling is never silently coerced from a float. A
    # default_value of None means the key must be given.

    val = dict_of_vals.get(key, default_value)
    if val is None:
        raise IOError("Key '{0}' is not optional. Please specify.".format(key))

    if isinstance(val, bool):
        raise ValueError("Did not recognize value format {0} for '{1}'.".format(val, key))
    elif isinstance(val, int):
        return parse_rational(str(val))
    elif isinstance(val, str):
        return parse_rational(val)
    elif isinstance(val, float):
        raise ValueError("'{0}' must be given as a \"p/q\" string, not the float {1}.".format(key, val))
    else:
        raise ValueError("Did not recognize value format {0} for '{1}'.".format(val, key))


def import_value(key, dict_of_vals, default_value, kind=float):
    # Imports a plain value, converting it with kind. A default_value of None
    # means the key must be given.

    val = dict_of_vals.get(key, default_value)
    if val is None:
        raise IOError("Key '{0}' is not optional. Please specify.".format(key))
    try:
        return kind(val)
    except (TypeError, ValueError):
        raise ValueError("Could not interpret {0} as {1} for '{2}'.".format(val, kind.__name__, key))


def _to_serializable(obj):
    # json.dump fallback for numpy types
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError("Object of type {0} is not JSON serializable.".format(type(obj)))


def write_json(filename, data):
    """Writes a dictionary as JSON with sorted keys, so identical data gives identical files."""
    with open(filename, 'w', newline='\n') as output_handle:
        json.dump(data, output_handle, indent=4, sort_keys=True, default=_to_serializable)
        output_handle.write("\n")


def write_csv(filename, header, rows):
    """Writes a CSV table with a header row, UTF-8 and LF line endings. Floats use repr so that the
    values round-trip exactly."""
    with open(filename, 'w', newline='', encoding='utf-8') as csv_file:
        writer = csv.writer(csv_file, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(value)) if isinstance(value, (float, np.floating)) else value for value in row])


def output_path(directory, filename):
    # Joins an output directory and file name, creating the directory if needed
    if directory in (None, ""):
        return filename
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, filename)
