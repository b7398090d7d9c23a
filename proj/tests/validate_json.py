"""Validate the CLI's JSON outputs against the shipped schemas."""
import json
import pathlib
import subprocess
import sys

import jsonschema

CASES = [
    ("eval", ["eval", "--p", "10", "--beta", "1", "--format", "json"]),
    ("eval", ["eval", "--p", "0", "--beta", "9", "--format", "json"]),
    ("bounds", ["bounds", "--p", "10", "--beta", "1", "--format", "json"]),
    ("bounds", ["bounds", "--p", "2", "--beta", "10", "--format", "json", "--printed-k-minus"]),
    ("scan", ["scan", "--p-values", "0.5,2,10,100", "--beta-values", "1,3", "--format", "json"]),
    ("extremal", ["extremal", "--a", "1", "--b", "2", "--p", "2", "--format", "json"]),
    ("extremal", ["extremal", "--a", "1", "--b", "1", "--p", "3", "--format", "json"]),
]


def main() -> int:
    cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    failed = 0
    for name, args in CASES:
        schema = json.loads((schema_dir / f"{name}.schema.json").read_text())
        out = subprocess.run([cli, *args], capture_output=True, text=True, check=True).stdout
        try:
            jsonschema.validate(json.loads(out), schema)
            print(f"ok   {' '.join(args)}")
        except jsonschema.ValidationError as err:
            failed += 1
            print(f"FAIL {' '.join(args)}: {err.message}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
