"""Validates JSON documents against the schemas in data/schema.

usage: check_schemas.py <schema-dir> <schema-name>=<file> ...
"""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource


def main(argv):
    schema_dir = pathlib.Path(argv[1])
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(s)) for name, s in schemas.items())
    failures = 0
    for arg in argv[2:]:
        name, path = arg.split("=", 1)
        schema = schemas[f"{name}.schema.json"]
        doc = json.loads(pathlib.Path(path).read_text())
        validator = jsonschema.Draft202012Validator(schema, registry=registry)
        errors = list(validator.iter_errors(doc))
        for e in errors[:5]:
            print(f"{path}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        failures += bool(errors)
    print(f"{len(argv) - 2 - failures}/{len(argv) - 2} documents valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
