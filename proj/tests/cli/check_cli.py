"""End-to-end checks of the smlab command line: schema validity, documented
example values, exit codes and byte-identical reruns."""

import json
import math
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN = sys.argv[1]
SCHEMA = json.load(open(sys.argv[2]))
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)
failures = []


def run(*args):
    proc = subprocess.run([BIN, *args], capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr.decode()


def check(name, ok, detail=""):
    print(("ok   " if ok else "FAIL ") + name + ("" if ok else "  " + detail))
    if not ok:
        failures.append(name)


def document(name, *args):
    code, out, err = run(*args)
    check(name + " exit 0", code == 0, err)
    doc = json.loads(out) if code == 0 else {}
    errors = list(VALIDATOR.iter_errors(doc))
    check(name + " schema", not errors, "; ".join(e.message for e in errors[:3]))
    code2, out2, _ = run(*args)
    check(name + " rerun identical", code2 == code and out2 == out)
    return doc


doc = document("report normal", "report", "--spec", "normal", "--point", "0,-0.5")
check("report normal scalar", abs(doc.get("scalar", 0) + 6.0) < 1e-8, str(doc.get("scalar")))

doc = document("report quad", "report", "--spec", "quad-2", "--point", "1,1")
blocks = doc.get("curvature", {})
zero = all(abs(v) < 1e-14 for k in ("holomorphic_sectional", "orthogonal_bisectional", "orthogonal_mtw")
           for v in blocks.get(k, {"x": 1}).values())
check("report quad curvature zero", zero and doc.get("scalar") == 0.0)

doc = document("report negtri dual", "report", "--spec", "negtri", "--side", "dual", "--point", "1,1")
check("report negtri dual trace", abs(doc.get("ricci_trace", 0) + 14.0 / 3.0) < 1e-8, str(doc.get("ricci_trace")))
check("report negtri dual det", abs(doc.get("ricci", {}).get("det", 0) - 11.0 / 3.0) < 1e-8)

doc = document("report family", "report", "--family", "normal", "--point", "0,1", "--samples", "10")
check("report family natural point", doc.get("point") == [0.0, -0.5], str(doc.get("point")))

document("mirror normal", "mirror", "--spec", "normal", "--point", "0.3,-0.8", "--samples", "20")

doc = document("legendre invgau", "legendre", "--spec", "invgau", "--samples", "20", "--seed", "5")
check("legendre invgau pass", doc.get("pass") is True)

doc = document("wdvv coshlog", "wdvv", "--spec", "coshlog", "--samples", "20")
check("wdvv coshlog frobenius", doc.get("frobenius") is True and doc["dual"]["max_residual"] < 1e-9)

doc = document("wdvv normal", "wdvv", "--spec", "normal", "--point", "0,-0.5")
check("wdvv normal scalar", abs(doc["points"][0]["scalar_residual"] - 4.0) < 1e-9)

doc = document("flow quad", "flow", "--init", "quad-2", "--grid", "33x33", "--dt", "auto", "--steps", "100")
check("flow quad drift", doc.get("max_drift", 1) < 1e-10)

doc = document("flow soliton", "flow", "--check", "soliton", "--tmin", "0.1", "--tmax", "10", "--samples", "100")
check("flow soliton pullback", doc.get("max_pullback_residual", 1) < 1e-10)

doc = document("flow aniso", "flow", "--init", "aniso:2,3", "--steps", "200")
check("flow aniso exact", doc.get("max_error", 1) < 1e-8)

with tempfile.TemporaryDirectory() as tmp:
    csv_path = os.path.join(tmp, "traj.csv")
    summary = os.path.join(tmp, "summary.json")
    code, _, err = run("flow", "--init", "normal", "--steps", "20", "--record-every", "10", "--csv",
                       "--out", csv_path, "--summary", summary)
    check("flow csv exit 0", code == 0, err)
    lines = open(csv_path).read().splitlines()
    check("flow csv header", lines[0] == "step,t,x1,x2,phi")
    check("flow csv rows", len(lines) == 1 + 3 * 33 * 33, str(len(lines)))
    check("flow csv finite", all(math.isfinite(float(c)) for row in lines[1:] for c in row.split(",")))
    check("flow summary schema", not list(VALIDATOR.iter_errors(json.load(open(summary)))))
    first = open(csv_path, "rb").read()
    run("flow", "--init", "normal", "--steps", "20", "--record-every", "10", "--csv", "--out", csv_path)
    check("flow csv rerun identical", open(csv_path, "rb").read() == first)

    config = os.path.join(tmp, "run.ini")
    with open(config, "w") as f:
        f.write("[report]\nspec = \"normal\"\npoint = \"0,-0.5\"\nsamples = 7\n")
    code, out, err = run("report", "--config", config, "--samples", "3")
    cfg_doc = json.loads(out) if code == 0 else {}
    check("config defaults", code == 0 and cfg_doc.get("potential") == "normal", err)
    check("config flags win", cfg_doc.get("curvature", {}).get("samples") == 3)

code, out, _ = run("report", "--spec", "normal", "--point", "0,-0.5", "--csv", "--samples", "5")
check("report csv", code == 0 and out.decode().startswith("field,value\n") and b"scalar," in out)

for name, args, expected in [
    ("exit point outside", ("report", "--spec", "normal", "--point", "0,1"), 2),
    ("exit unknown name", ("report", "--spec", "nope"), 2),
    ("exit parse error", ("report", "--spec", "normal", "--point", "a,b"), 2),
    ("exit unknown flag", ("report", "--bogus"), 2),
    ("exit stability", ("flow", "--init", "aniso:2,3", "--dt", "1"), 2),
    ("exit bad grid", ("flow", "--grid", "3x3"), 2),
]:
    code, _, err = run(*args)
    check(name, code == expected and err.strip() != "", f"code {code}")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
