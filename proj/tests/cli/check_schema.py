"""Runs the exode binary on a few equations and validates every JSON report."""

import json
import subprocess
import sys

import jsonschema

EXAMPLE1 = ["--f3", "y'^3", "--f2", "2*y", "--f1", "-y'", "--f0", "y'^3"]
LINEAR = ["--f3", "t", "--f2", "t", "--f1", "t^2", "--f0", "t*y"]
EXACT = ["--f3", "1", "--f2", "1", "--f1", "t", "--f0", "y"]
NO_FACTOR = ["--f3", "1", "--f2", "t*y", "--f1", "0", "--f0", "0"]

CASES = [
    (["check", *EXAMPLE1], 0),
    (["check", *EXACT], 0),
    (["reduce", *EXAMPLE1], 0),
    (["reduce", *LINEAR, "--seed", "5"], 0),
    (["reduce", *NO_FACTOR], 1),
    (["reduce", *EXAMPLE1, "--xi", "y'^2", "--base", "0,1,1,1"], 0),
    (["verify", *EXAMPLE1, "--mu", "y'^-3"], 0),
    (["verify", *EXAMPLE1, "--mu", "y'^-2"], 1),
]


def main() -> int:
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    failures = 0
    for args, want in CASES:
        proc = subprocess.run([binary, *args, "--json"], capture_output=True, text=True)
        label = " ".join(args)
        if proc.returncode != want:
            print(f"FAIL exit {proc.returncode} != {want}: {label}\n{proc.stderr}")
            failures += 1
            continue
        try:
            report = json.loads(proc.stdout)
            jsonschema.validate(report, schema)
            keys = list(report)[:5]
            if keys != ["exact", "conditions", "factors", "first_integral", "seed"]:
                raise ValueError(f"key order {keys}")
        except (ValueError, jsonschema.ValidationError) as err:
            print(f"FAIL {label}: {err}")
            failures += 1
            continue
        print(f"ok   {label}")

    bad = subprocess.run([binary, "check", "--f3", "y'' + * 3", "--f2", "0", "--f1", "0", "--f0", "0"],
                         capture_output=True, text=True)
    if bad.returncode != 2:
        print(f"FAIL syntax error exit {bad.returncode}")
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
