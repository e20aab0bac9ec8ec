#!/usr/bin/env python3
"""End-to-end checks of the czkit tool: exit codes, schema validity and the
byte-for-byte P8 pipeline golden files.

usage: cli_smoke.py CZKIT SCHEMA_DIR GOLDEN_DIR [--record]
"""

import json
import pathlib
import subprocess
import sys
import tempfile

try:
    import jsonschema
except ImportError:  # validation is skipped, everything else still runs
    jsonschema = None

czkit, schema_dir, golden_dir = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
record = "--record" in sys.argv[4:]
failures = []


def run(*args, expect=0):
    p = subprocess.run([czkit, *map(str, args)], capture_output=True, text=True)
    if p.returncode != expect:
        failures.append(f"{' '.join(map(str, args))}: exit {p.returncode}, expected {expect}\n{p.stderr}")
    return p


def validate(path, schema):
    if not pathlib.Path(path).exists():
        failures.append(f"{path} was not written")
        return
    if jsonschema is None:
        return
    doc = json.loads(pathlib.Path(path).read_text())
    try:
        jsonschema.validate(doc, json.loads((schema_dir / f"{schema}.schema.json").read_text()))
    except jsonschema.ValidationError as e:
        failures.append(f"{path} does not match the {schema} schema: {e.message}")


def golden(path, name):
    target = golden_dir / "p8" / name
    if not pathlib.Path(path).exists():
        failures.append(f"{name} was not written")
        return
    data = pathlib.Path(path).read_bytes()
    if record:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
    elif not target.exists() or target.read_bytes() != data:
        failures.append(f"{name} differs from the golden file")


with tempfile.TemporaryDirectory() as tmp:
    d = pathlib.Path(tmp)

    # smoke: a small grid
    run("gen", "--model", "grid", "--dim", 2, "--side", 8, "-o", d / "s.json")
    validate(d / "s.json", "space")
    validate(d / "s.model.json", "model")
    run("cubes", "-i", d / "s.json", "--delta", 0.5, "--depth", 6, "-o", d / "t.json", "--report", d / "tr.json")
    validate(d / "t.json", "tree")
    validate(d / "tr.json", "report")
    run("family", "build", "-i", d / "s.json", "--tree", d / "t.json", "-o", d / "f.json")
    validate(d / "f.json", "family")
    (d / "fn.json").write_text(json.dumps({"values": [0.0] * 10 + [5.0] + [0.0] * 53}))
    validate(d / "fn.json", "function")

    # the range guard
    p = run("decompose", "-i", d / "s.json", "-f", d / "f.json", "--fn", d / "fn.json", "--lambda", 0.0001,
            "-o", d / "bad.json", expect=2)
    if "out of range" not in p.stderr:
        failures.append("range error message missing: " + p.stderr)

    run("decompose", "-i", d / "s.json", "-f", d / "f.json", "--fn", d / "fn.json", "--lambda", 1.0,
        "-o", d / "d.json")
    validate(d / "d.json", "decomposition")
    run("verify", "-i", d / "s.json", "--dec", d / "d.json", "--report", d / "v.json")
    validate(d / "v.json", "report")
    # a constant far below the measured ones is a property violation
    run("verify", "-i", d / "s.json", "--dec", d / "d.json", "--C", 0.01, "--report", d / "v2.json", expect=1)
    run("coarsen", "-i", d / "s.json", "--dec", d / "d.json", "--C-cz", 4, "-o", d / "c.json",
        "--report", d / "cr.json")
    validate(d / "c.json", "decomposition")
    run("maximal", "-i", d / "s.json", "-f", d / "f.json", "--fn", d / "fn.json", "--C", 10, "--report", d / "m.json")
    validate(d / "m.json", "report")
    run("scan", "-i", d / "s.json", "-f", d / "f.json", "--random", 3, "--seed", 7, "-o", d / "sc.json",
        "--csv", d / "sc.csv")
    validate(d / "sc.json", "report")
    if not (d / "sc.csv").read_text().startswith("f_index,lambda,skipped"):
        failures.append("scan csv header")
    run("folner", "-i", d / "s.model.json", "--r", 2, "-o", d / "fo.json")
    validate(d / "fo.json", "certificate")
    run("gen", "--model", "tree", "--degree", 3, "--depth", 5, "-o", d / "tree.json")
    run("folner", "-i", d / "tree.model.json", "--r", 2, "--max-size", 6, "-o", d / "fo2.json")
    if json.loads((d / "fo2.json").read_text())["certificate"]["found"]:
        failures.append("tree search should not find a doubling set")
    run("report", d / "tr.json", d / "v.json", d / "m.json", d / "sc.json", d / "fo.json", "--csv-dir", d / "csv",
        "-o", d / "sum.json")
    run("report", d / "v2.json", "-o", d / "sum2.json", expect=1)

    # solvable model and base-case family
    run("gen", "--model", "solvable", "--eps-w", 0.25, "--half-width-w", 1.5, "--eps-n", 0.5, "--half-width-n", 3,
        "--action", 0.05, "-o", d / "sol.json", "--report", d / "sol_inv.json")
    validate(d / "sol.json", "space")
    validate(d / "sol.model.json", "model")
    run("basefamily", "-i", d / "sol.model.json", "-o", d / "bf.json", "--chains", d / "chains.json",
        "--report", d / "bfr.json")
    validate(d / "bf.json", "family")
    validate(d / "chains.json", "report")

    # input errors
    run("cubes", "-i", d / "missing.json", "-o", d / "x.json", expect=2)
    (d / "broken.json").write_text("{ not json")
    run("cubes", "-i", d / "broken.json", "-o", d / "x.json", expect=2)
    run("cubes", "-i", d / "s.json", "--delta", 1.5, "-o", d / "x.json", expect=2)
    run("family", "build", "-i", d / "s.json", "--tree", d / "t.json", "-o", d / "s.json", expect=2)
    run("nonsense", expect=2)

    # schemas are served by the tool
    names = run("--schema", "list").stdout.split()
    if sorted(names) != sorted(p.name.split(".")[0] for p in schema_dir.glob("*.schema.json")):
        failures.append("schema list mismatch")

    # P8 pipeline reproduces the golden files
    p8 = d / "p8"
    p8.mkdir()
    run("gen", "--model", "path", "--side", 8, "-o", p8 / "space.json")
    run("cubes", "-i", p8 / "space.json", "--delta", 0.5, "--depth", 4, "-o", p8 / "tree.json",
        "--report", p8 / "cubes_report.json")
    run("family", "build", "-i", p8 / "space.json", "--tree", p8 / "tree.json", "-o", p8 / "family.json")
    run("family", "verify", "-i", p8 / "space.json", "-f", p8 / "family.json", "--C", 4, "--report",
        p8 / "family_report.json")
    (p8 / "f.json").write_text(json.dumps({"values": [8.0, 0.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0]}))
    run("decompose", "-i", p8 / "space.json", "-f", p8 / "family.json", "--fn", p8 / "f.json", "--lambda", 6,
        "--C", 4, "-o", p8 / "dec.json")
    run("verify", "-i", p8 / "space.json", "--dec", p8 / "dec.json", "--C", 4, "--report", p8 / "verify.json")
    for name in ["space.json", "tree.json", "cubes_report.json", "family.json", "family_report.json", "dec.json",
                 "verify.json"]:
        golden(p8 / name, name)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli smoke: all checks passed" + (" (golden files recorded)" if record else ""))
