"""Runs every CLI command with --json and validates the output against the schema."""
import json
import subprocess
import sys

import jsonschema

cli, schema_path, dsl = sys.argv[1:4]
with open(schema_path) as f:
    schema = json.load(f)
validator = jsonschema.Draft202012Validator(schema)

runs = [
    (["check-preservation", f"{dsl}/stream.dsl", "--trace"], 0),
    (["check-preservation", f"{dsl}/stream_gsos.dsl"], 1),
    (["check-preservation", f"{dsl}/three_zeros.dsl", "--trace"], 1),
    (["check-preservation", f"{dsl}/cfg.dsl", "--trace"], 0),
    (["run", f"{dsl}/cfg.dsl", "--state", "S", "--word", "aab"], 0),
    (["stream", f"{dsl}/stream.dsl", "--state", "nat", "--n", "4"], 0),
    (["cfg-member", f"{dsl}/parens.dsl", "--word", "abab"], 0),
    (["cfg-equiv", f"{dsl}/cfg.dsl", "--right", "1", "--maxlen", "3"], 1),
    (["quotient-commute", f"{dsl}/cfg.dsl", "--max-size", "3", "--depth", "2"], 0),
    (["algebra-check", f"{dsl}/cfg.dsl", "--outer", "S.B", "--horizon", "4"], 0),
]

failed = False
for args, expected in runs:
    proc = subprocess.run([cli, *args, "--json"], capture_output=True, text=True)
    label = " ".join(args)
    if proc.returncode != expected:
        print(f"FAIL {label}: exit {proc.returncode}, expected {expected}\n{proc.stderr}")
        failed = True
        continue
    errors = list(validator.iter_errors(json.loads(proc.stdout)))
    for e in errors:
        print(f"FAIL {label}: {e.message} at {list(e.path)}")
    failed = failed or bool(errors)
    if not errors:
        print(f"ok   {label}")
sys.exit(1 if failed else 0)
