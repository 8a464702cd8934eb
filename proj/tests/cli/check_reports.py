"""Validates every command's report against the published schema and
checks that reports are byte-identical for --jobs 1 and --jobs 4."""

import json
import pathlib
import subprocess
import sys

import jsonschema

RUNS = [
    ("axioms", "configs/standard_metric.ini"),
    ("psi-check", "configs/example6.ini"),
    ("psi-check", "tests/cli/psi_ex2_2_strict.ini"),
    ("verify", "configs/example6.ini"),
    ("pairs", "configs/example6.ini"),
    ("fixpoint", "configs/example6.ini"),
    ("theorem", "configs/example6.ini"),
    ("theorem", "tests/cli/example6_F_in_B.ini"),
    ("dp-solve", "configs/dp_linear.ini"),
    ("dp-solve", "configs/dp_theorem53.ini"),
    ("reproduce-example6", None),
    ("verify", "tests/cli/broken_k.ini"),
    ("axioms", "tests/cli/empty.ini"),
]


def run(exe, command, config, jobs):
    args = [exe, command, "--jobs", str(jobs), "--seed", "7"]
    if config:
        args += ["--config", config]
    proc = subprocess.run(args, capture_output=True, check=False)
    return proc.returncode, proc.stdout


def main():
    exe, root = sys.argv[1], pathlib.Path(sys.argv[2])
    schema = json.loads((root / "schema" / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for command, config in RUNS:
        code1, out1 = run(exe, command, config, 1)
        code4, out4 = run(exe, command, config, 4)
        label = f"{command} {config or '(bundled)'}"
        doc = json.loads(out1)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        if errors:
            failures += 1
            print(f"FAIL schema {label}: {errors[0].message} at {list(errors[0].path)}")
        if doc["exit_code"] != code1:
            failures += 1
            print(f"FAIL exit code {label}: report says {doc['exit_code']}, process returned {code1}")
        if out1 != out4 or code1 != code4:
            failures += 1
            print(f"FAIL determinism {label}: --jobs 1 and --jobs 4 differ")
        else:
            print(f"ok {label} (exit {code1})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
