"""Generate reports with the CLI and validate each against the published schema."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    binary, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    with tempfile.TemporaryDirectory() as tmp:
        work = pathlib.Path(tmp)
        cfg = {
            "synth": {
                "grid_rows": 2,
                "grid_cols": 2,
                "seed": 3,
                "erased_balls": [[0, 1]],
                "voids": [[{"dx": 4, "dy": -2, "r": 5}], [], [{"dx": -3, "dy": 3, "r": 6}], []],
            }
        }
        (work / "cfg.json").write_text(json.dumps(cfg))
        subprocess.run([binary, "synth", "--config", str(work / "cfg.json"), "--out", str(work), "--count", "2"], check=True)
        subprocess.run([binary, "inspect", str(work), "--method", "both", "--out", str(work / "out")], check=True)
        reports = sorted((work / "out").glob("*.json"))
        if len(reports) != 4:
            print(f"expected 4 reports, found {len(reports)}")
            return 1
        for path in reports:
            errors = list(validator.iter_errors(json.loads(path.read_text())))
            for err in errors:
                print(f"{path.name}: {err.message} at {list(err.path)}")
            if errors:
                return 1
            print(f"{path.name}: valid")
        bad = json.loads(reports[0].read_text())
        del bad["params_hash"]
        if validator.is_valid(bad):
            print("schema accepted a report without params_hash")
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
