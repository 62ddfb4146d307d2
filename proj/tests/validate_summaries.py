"""Runs each CLI command once and validates summary.json against the schema."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

RUNS = {
    "inscribe": ["inscribe", "--body", "ellipse:a=2,b=1", "--n", "32:256", "--trials", "100"],
    "circumscribe": ["circumscribe", "--body", "ball:r=1,d=3", "--n", "64:512", "--trials", "100"],
    "ratio": ["ratio", "--body", "ellipse:a=2,b=1", "--j", "2", "--density-a", "uniform",
              "--density-b", "opt:volume", "--n", "32:64", "--trials", "100"],
    "rigidity": ["rigidity", "--body", "ellipsoid:a=1,b=1,c=1.5", "--j1", "1", "--j2", "3"],
    "density": ["density", "--body", "ellipse:a=2,b=1", "--kind", "opt:volume", "--grid", "32"],
    "bestpoly": ["bestpoly", "--body", "ball:r=1", "--n", "12", "--grid", "128"],
}


def main():
    cli, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name, args in RUNS.items():
            for stamp in ([], ["--no-timestamp"]):
                out = Path(tmp) / (name + str(len(stamp)))
                proc = subprocess.run([cli, *args, *stamp, "--out", str(out)],
                                      capture_output=True, text=True)
                if proc.returncode != 0:
                    print(f"{name}: exit {proc.returncode}: {proc.stderr.strip()}")
                    failed += 1
                    continue
                summary = json.loads((out / "summary.json").read_text())
                errors = list(validator.iter_errors(summary))
                for e in errors:
                    print(f"{name}: {e.json_path}: {e.message}")
                if summary.get("command") != name:
                    print(f"{name}: command field is {summary.get('command')!r}")
                    failed += 1
                for f in summary["outputs"].values():
                    if not (out / f).exists():
                        print(f"{name}: listed output {f} missing")
                        failed += 1
                failed += len(errors)
                print(f"{name}{' (no timestamp)' if stamp else ''}: {'ok' if not errors else 'invalid'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
