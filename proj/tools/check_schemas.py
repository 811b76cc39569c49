#!/usr/bin/env python3
"""Run the permeq CLI on small inputs and validate every JSON output against schemas/.

Also checks that reruns are byte-identical and that matrices survive CSV -> JSON -> CSV.
usage: check_schemas.py PERMEQ_BINARY SCHEMA_DIR
"""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema
import numpy as np


def main():
    binary, schema_dir = sys.argv[1], Path(sys.argv[2])
    schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)

    tmp = Path(tempfile.mkdtemp(prefix="permeq_schema_"))
    rng = np.random.default_rng(0)
    # short decimals so CSV values are exactly representable round trips
    np.savetxt(tmp / "x.csv", np.round(rng.normal(size=(9, 24)), 3), delimiter=",", fmt="%.3f")
    np.savetxt(tmp / "y.csv", np.round(rng.normal(size=(9, 24)), 3), delimiter=",", fmt="%.3f")
    np.savetxt(tmp / "y2.csv", np.round(rng.normal(size=(2, 24)), 3), delimiter=",", fmt="%.3f")
    np.savetxt(tmp / "u.csv", np.round(rng.normal(size=(9, 9)), 3), delimiter=",", fmt="%.3f")

    rot = ["--perm", "(1 4 3 2)(5 8 7 6)", "--n", "9"]
    x, y, y2, u = (str(tmp / f) for f in ("x.csv", "y.csv", "y2.csv", "u.csv"))
    runs = [
        ("analyze", rot),
        ("analyze", ["--perm", "", "--n", "4"]),
        ("analyze", rot + ["--perm", "(1 2)(3 4)(6 8)"]),
        ("components", rot + ["--rank", "3"]),
        ("components", rot + ["--rank", "3", "--field", "complex"]),
        ("components", ["--cycle-type", "28x28", "--rank", "99", "--count-only"]),
        ("project", rot + ["--u", u]),
        ("project", rot + ["--u", u, "--x", x, "--space", "invariant"]),
        ("fit", rot + ["--x", x, "--y", y, "--rank", "3"]),
        ("fit", rot + ["--x", x, "--y", y, "--rank", "3", "--search", "budget_dp"]),
        ("fit", rot + ["--x", x, "--y", y, "--rank", "3", "--heuristic", "energy"]),
        ("fit", rot + ["--x", x, "--y", y2, "--rank", "2", "--mode", "invariant"]),
        ("fit", rot + ["--x", x, "--y", y, "--rank", "3", "--mode", "unconstrained", "--ridge", "0.5"]),
        ("factorize", rot + ["--component", "1,0,1", "--seed", "3"]),
        ("verify", rot + ["--rank", "3"]),
        ("demo_shift", ["--height", "6", "--width", "6", "--samples", "120"]),
    ]
    failures = 0
    for name, args in runs:
        cmd = [binary, name.replace("_", "-")] + args
        first = subprocess.run(cmd, capture_output=True, text=True)
        second = subprocess.run(cmd, capture_output=True, text=True)
        label = " ".join(cmd[1:])
        if first.returncode != 0:
            print(f"FAIL {label}: exit {first.returncode}: {first.stderr.strip()}")
            failures += 1
            continue
        try:
            jsonschema.validate(json.loads(first.stdout), schemas[name])
        except jsonschema.ValidationError as e:
            print(f"FAIL {label}: {e.message}")
            failures += 1
            continue
        if first.stdout != second.stdout:
            print(f"FAIL {label}: output differs between runs")
            failures += 1
            continue
        print(f"ok   {label}")

    # structured errors on stderr
    for args, code in [
        (["count", "--perm", "(1 2)", "--perm", "(3 4)", "--rank", "1"], 1),
        (["components"] + rot + ["--rank", "3", "--field", "complex", "--limit", "2"], 1),
        (["count", "--perm", "(1 x)", "--rank", "1"], 2),
    ]:
        r = subprocess.run([binary] + args, capture_output=True, text=True)
        try:
            assert r.returncode == code, f"exit {r.returncode}, expected {code}"
            jsonschema.validate(json.loads(r.stderr), schemas["error"])
            print(f"ok   error {' '.join(args)}")
        except (AssertionError, ValueError, jsonschema.ValidationError) as e:
            print(f"FAIL error {' '.join(args)}: {e}")
            failures += 1

    # CSV -> fit --csv round trip of an exactly representable matrix through JSON
    m = np.round(rng.normal(size=(9, 9)), 2)
    np.savetxt(tmp / "m.csv", m, delimiter=",", fmt="%.2f")
    r = subprocess.run([binary, "project", "--perm", "", "--n", "9", "--space", "equivariant", "--u",
                        str(tmp / "m.csv"), "--csv", str(tmp / "m2.csv")], capture_output=True, text=True)
    pj = json.loads(r.stdout)["projection"]
    back = np.array(pj["data"]).reshape(pj["rows"], pj["cols"])
    csv_back = np.loadtxt(tmp / "m2.csv", delimiter=",")
    if not (np.array_equal(back, m) and np.array_equal(csv_back, m)):
        print("FAIL csv/json round trip")
        failures += 1
    else:
        print("ok   csv/json round trip")

    print(f"{failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
