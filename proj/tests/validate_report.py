"""Validate ncorlicz reports against their command schema.

usage: validate_report.py SCHEMA_DIR REPORT...
       validate_report.py --same A B   (equal after dropping the timestamp)
"""
import json
import pathlib
import sys

import jsonschema


def load(path):
    with open(path) as f:
        return json.load(f)


def main(argv):
    if argv[1] == "--same":
        a, b = load(argv[2]), load(argv[3])
        a.pop("timestamp", None)
        b.pop("timestamp", None)
        if a != b:
            print(f"reports differ: {argv[2]} {argv[3]}")
            return 1
        return 0
    schemas = pathlib.Path(argv[1])
    bad = 0
    for path in argv[2:]:
        report = load(path)
        schema = load(schemas / f"{report['command']}.schema.json")
        try:
            jsonschema.validate(report, schema, cls=jsonschema.Draft202012Validator)
        except jsonschema.ValidationError as e:
            print(f"{path}: {e.message} at {list(e.absolute_path)}")
            bad += 1
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
