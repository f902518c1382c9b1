"""End-to-end checks of the desitter command-line tool.

Usage: test_cli.py CLI SCHEMA
"""

import csv
import json
import math
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

CLI = None
SCHEMA = None


def run(*args, expect=None):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=600)
    if expect is not None and proc.returncode != expect:
        raise AssertionError(f"{args}: exit {proc.returncode}, expected {expect}\n{proc.stdout[-2000:]}\n{proc.stderr}")
    return proc


def report(*args, expect=0):
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "report.json"
        run(*args, "--out-json", str(out), expect=expect)
        data = json.loads(out.read_text())
    jsonschema.validate(data, SCHEMA)
    return data


class AnalyzeCurve(unittest.TestCase):
    def test_trefoil(self):
        r = report("analyze-curve", "--generator", "trefoil", "--samples", "64")
        self.assertTrue(r["osculating_canal"]["drill_check"]["pass"])
        self.assertEqual(r["corollary"]["verdict"], "pass")
        self.assertGreaterEqual(r["conformal"]["integral_abs_T"]["value"], 2 * math.pi)

    def test_circle_is_a_vertex_error(self):
        r = report("analyze-curve", "--generator", "circle", expect=2)
        self.assertEqual(r["error"]["kind"], "vertex")
        self.assertEqual(r["exit_code"], 2)

    def test_sample_count_convergence(self):
        a = report("analyze-curve", "--generator", "trefoil", "--samples", "64")
        b = report("analyze-curve", "--generator", "trefoil", "--samples", "256")
        for key in ("conformal_length", "integral_T", "integral_abs_T", "total_torsion"):
            self.assertAlmostEqual(a["conformal"][key]["value"], b["conformal"][key]["value"], delta=1e-6)

    def test_input_file_matches_generator(self):
        n = 128
        samples = [[(2 + math.cos(3 * t)) * math.cos(2 * t), (2 + math.cos(3 * t)) * math.sin(2 * t), math.sin(3 * t)]
                   for t in (2 * math.pi * j / n for j in range(n))]
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "curve.json"
            path.write_text(json.dumps({"dimension": 3, "period": 2 * math.pi, "samples": samples}))
            a = report("analyze-curve", "--input", str(path))
        b = report("analyze-curve", "--generator", "trefoil", "--samples", "128")
        self.assertAlmostEqual(a["conformal"]["integral_T"]["value"], b["conformal"]["integral_T"]["value"], delta=1e-9)

    def test_per_sample_arrays(self):
        r = report("analyze-curve", "--generator", "trefoil", "--samples", "64", "--per-sample")
        omega = r["per_sample"]["omega"]["values"]
        self.assertEqual(len(omega), r["grid"])


class AnalyzeCanal(unittest.TestCase):
    def test_minimal_drill(self):
        r = report("analyze-canal", "--generator", "minimal-drill", "--lambda", "2+sin")
        self.assertAlmostEqual(r["length"]["value"], 2 * math.pi, delta=1e-9)
        self.assertTrue(r["bound"]["equality_family_detected"])
        self.assertEqual(r["classification"]["verdict"], "drill")

    def test_timelike_cyclide(self):
        r = report("analyze-canal", "--generator", "cyclide", "--x", "timelike", "1.0")
        self.assertAlmostEqual(r["length"]["value"], 2 * math.pi * math.sqrt(2), delta=1e-8)
        self.assertEqual(r["bound"]["verdict"], "pass")

    def test_random_batch(self):
        r = report("analyze-canal", "--generator", "random", "--seed", "7", "--filter", "almost-regular",
                   "--count", "100")
        batch = r["batch"]
        self.assertEqual(batch["count"], 100)
        self.assertEqual(batch["failures"], 0)
        for p in batch["paths"]:
            self.assertGreaterEqual(p["length"]["value"], 2 * math.pi - 1e-6)

    def test_bad_lambda_is_a_parse_error(self):
        r = report("analyze-canal", "--generator", "minimal-drill", "--lambda", "two", expect=2)
        self.assertEqual(r["error"]["kind"], "parse")


def read_obj(path):
    vertices, faces, lines = [], [], []
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        if not parts or parts[0] == "#":
            continue
        if parts[0] == "v":
            vertices.append(tuple(float(x) for x in parts[1:4]))
        elif parts[0] == "f":
            faces.append(tuple(int(x) for x in parts[1:]))
        elif parts[0] == "l":
            lines.append(tuple(int(x) for x in parts[1:]))
    return vertices, faces, lines


class Mesh(unittest.TestCase):
    def test_cyclide_torus(self):
        with tempfile.TemporaryDirectory() as tmp:
            obj = Path(tmp) / "torus.obj"
            r = report("mesh", "--generator", "cyclide", "--out-obj", str(obj))
            first = obj.read_bytes()
            report("mesh", "--generator", "cyclide", "--out-obj", str(obj))
            self.assertEqual(first, obj.read_bytes())
            vertices, faces, _ = read_obj(obj)
        self.assertTrue(r["mesh"]["watertight"])
        self.assertEqual(r["mesh"]["euler_characteristic"], 0)
        self.assertEqual(len(faces), r["mesh"]["faces"])
        self.assertTrue(all(1 <= i <= len(vertices) for f in faces for i in f))
        for x, y, z in vertices:
            self.assertAlmostEqual(math.hypot(math.hypot(x, y) - math.sqrt(2), z), 1.0, delta=1e-6)

    def test_curvature_tube_annotation(self):
        with tempfile.TemporaryDirectory() as tmp:
            obj = Path(tmp) / "tube.obj"
            r = report("mesh", "--generator", "trefoil", "--samples", "64", "--nt", "96", "--out-obj", str(obj))
            annotation = json.loads(Path(r["mesh"]["singular_locus_file"]).read_text())
            vertices, _, _ = read_obj(obj)
        jsonschema.validate(annotation, {"$ref": "#/$defs/singular_locus", "$defs": SCHEMA["$defs"]})
        self.assertEqual(len(annotation["singular_vertices"]), 96)
        for item in annotation["singular_vertices"]:
            t = item["t"]["value"]
            x, y, z = vertices[item["obj_index"] - 1]
            expected = ((2 + math.cos(3 * t)) * math.cos(2 * t), (2 + math.cos(3 * t)) * math.sin(2 * t), math.sin(3 * t))
            self.assertLess(math.dist((x, y, z), expected), 1e-8)

    def test_geodesic_pencil_falls_back_to_polyline(self):
        with tempfile.TemporaryDirectory() as tmp:
            obj = Path(tmp) / "pencil.obj"
            proc = run("mesh", "--generator", "pencil", "--out-obj", str(obj), expect=0)
            _, faces, lines = read_obj(obj)
        self.assertIn("warning", proc.stderr)
        self.assertEqual(faces, [])
        self.assertEqual(len(lines), 1)
        self.assertEqual(lines[0][0], lines[0][-1])

    def test_requires_output_path(self):
        r = report("mesh", "--generator", "cyclide", expect=2)
        self.assertEqual(r["error"]["kind"], "precondition")


class Verify(unittest.TestCase):
    def test_quick_run_passes(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "verify.json"
            proc = run("verify", "--quick", "--out-json", str(out), expect=0)
            data = json.loads(out.read_text())
        jsonschema.validate(data, SCHEMA)
        self.assertEqual(len(data["criteria"]), 11)
        self.assertTrue(all(c["pass"] for c in data["criteria"]))
        self.assertEqual(sum(1 for line in proc.stdout.splitlines() if line.startswith("criterion")), 11)

    def test_mutation_is_caught(self):
        r = report("verify", "--quick", "--mutate", expect=3)
        by_id = {c["id"]: c for c in r["criteria"]}
        self.assertFalse(by_id[9]["pass"])
        self.assertTrue(by_id[1]["pass"])


class Sweep(unittest.TestCase):
    def test_cyclide_table(self):
        with tempfile.TemporaryDirectory() as tmp:
            table = Path(tmp) / "sweep.csv"
            r = report("sweep", "--samples", "128", "--major-radii", "2", "--max-winding", "2",
                       "--out-csv", str(table))
            with table.open() as fh:
                rows = list(csv.DictReader(fh))
        self.assertEqual(len(rows), len(r["rows"]))
        usable = [row for row in rows if row["vertex_free"] == "true" and row["spherical_points"] == "0"]
        self.assertTrue(usable)
        for row in usable:
            self.assertGreaterEqual(float(row["integral_abs_T"]), 2 * math.pi)
            self.assertLess(float(row["congruence_residual"]), 1e-4)


class Config(unittest.TestCase):
    def test_flags_override_config(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = Path(tmp) / "cfg.json"
            cfg.write_text(json.dumps({"generator": "torus-knot:p=2,q=3", "samples": 64}))
            a = report("analyze-curve", "--config", str(cfg))
            b = report("analyze-curve", "--config", str(cfg), "--samples", "128")
        self.assertEqual(a["curve"]["samples"], 64)
        self.assertEqual(b["curve"]["samples"], 128)
        self.assertEqual(a["curve"]["source"], "torus-knot")

    def test_unknown_key_rejected(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = Path(tmp) / "cfg.json"
            cfg.write_text(json.dumps({"sampels": 64}))
            proc = run("analyze-curve", "--config", str(cfg), expect=2)
        self.assertIn("parse", proc.stdout)

    def test_odd_samples_rejected(self):
        r = report("analyze-curve", "--samples", "65", expect=2)
        self.assertEqual(r["error"]["kind"], "precondition")


if __name__ == "__main__":
    CLI = sys.argv[1]
    SCHEMA = json.loads(Path(sys.argv[2]).read_text())
    jsonschema.Draft202012Validator.check_schema(SCHEMA)
    unittest.main(argv=sys.argv[:1], verbosity=2)
