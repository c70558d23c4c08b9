"""Validates every JSON-emitting subcommand against docs/cli-output.schema.json."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

engine, source = sys.argv[1], Path(sys.argv[2])
models = source / "models"
schema = json.loads((source / "docs" / "cli-output.schema.json").read_text())
validator = jsonschema.Draft202012Validator(schema)

runs = [
    ["index", models / "coin.cm"],
    ["index", models / "balls-n2.cm"],
    ["marginal", models / "balls-n1.cm"],
    ["update", models / "coin.cm", "--observe", "toss=head"],
    ["update", models / "balls-n2.cm", "--observe", "Letter=a", "--observe", "Number=2"],
    ["predict", models / "balls-n1.cm", "--target", "Number", "--observe", "Letter=a"],
    ["gamma", "--n", "3"],
    ["compat", models / "coin.cm", models / "coin-coarse.cm"],
    ["compat", models / "coin.cm", models / "coin-reweighted.cm"],
    ["simulate", models / "coin.cm", "--hidden", "Jack", "--sequence", "toss"],
    ["simulate", models / "balls-n1.cm", "--seed", "42", "--draw-hidden", "--sequence", "Letter,Number"],
]

failed = 0
for args in runs:
    cmd = [engine, *map(str, args), "--format", "json"]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    label = " ".join(map(str, args[:1] + [Path(str(a)).name for a in args[1:]]))
    if proc.returncode not in (0, 4):
        print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
        failed += 1
        continue
    errors = list(validator.iter_errors(json.loads(proc.stdout)))
    if errors:
        print(f"FAIL {label}: {errors[0].message}")
        failed += 1
    else:
        print(f"ok   {label}")

sys.exit(1 if failed else 0)
