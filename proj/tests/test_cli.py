"""End-to-end checks of the schatten command-line tool.

Usage: test_cli.py PATH_TO_SCHATTEN PATH_TO_SCHEMA
"""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = None
SCHEMA = None

HEADERS = {
    ("constants",): "p,v_p,alpha_p,A_p,entropy,log_energy,I_p,I_p_reference,defect",
    ("density",): "x,density,cdf",
    ("volume",): "n,p,beta,method,log_volume,std_error,ess,samples",
    ("partition",): "n,p,beta,method,log_Z,std_error,ess,samples",
    ("equilibrium",): "n,p,energy,gradient_inf_norm,iterations,converged,ks_distance",
    ("equilibrium", "--points"): "i,x,ullman_cdf,empirical_cdf",
    ("expansion",): "n,n2logn,n2,nlogn,n_term,logn,partial_sum,reference,residual,normalized,difference",
    ("validate",): "criterion,check,pass,measured,reference,tolerance,gating,note",
}

COMMANDS = {
    ("constants",): ["constants", "--p", "1.5,2,inf"],
    ("density",): ["density", "--p", "3", "--points", "11"],
    ("volume",): ["volume", "--n", "3", "--p", "2", "--beta", "1", "--method", "exact"],
    ("partition",): ["partition", "--n", "2", "--p", "3", "--beta", "1", "--method", "quadrature"],
    ("equilibrium",): ["equilibrium", "--grid", "25,50", "--p", "2"],
    ("equilibrium", "--points"): ["equilibrium", "--n", "10", "--p", "3", "--points"],
    ("expansion",): ["expansion", "--target", "cn", "--beta", "4"],
    ("validate",): ["validate", "--level", "fast"],
}


def run(args, env=None, check_exit=None):
    full_env = dict(os.environ)
    full_env.pop("SCHATTEN_SEED", None)
    if env:
        full_env.update(env)
    proc = subprocess.run([BINARY] + args, capture_output=True, text=True, env=full_env)
    if check_exit is not None and proc.returncode != check_exit:
        raise AssertionError(
            f"{args}: exit {proc.returncode}, expected {check_exit}\nstdout:\n{proc.stdout}\nstderr:\n{proc.stderr}"
        )
    return proc


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# config "), lines[0]
    config = json.loads(lines[0][len("# config "):])
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    return config, lines[1], rows


def json_output(args):
    out = run(args + ["--format", "json"], check_exit=0).stdout
    document = json.loads(out)
    jsonschema.validate(document, SCHEMA)
    return document


class OutputFormats(unittest.TestCase):
    def test_csv_headers_are_fixed(self):
        for key, args in COMMANDS.items():
            with self.subTest(command=key):
                _, header, rows = parse_csv(run(args, check_exit=0).stdout)
                self.assertEqual(header, HEADERS[key])
                self.assertGreater(len(rows), 0)

    def test_json_matches_schema(self):
        for key, args in COMMANDS.items():
            with self.subTest(command=key):
                document = json_output(args)
                self.assertEqual(document["config"]["command"], args[0])

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "c.csv")
            proc = run(["constants", "--p", "2", "--out", path], check_exit=0)
            self.assertEqual(proc.stdout, "")
            with open(path, encoding="utf-8") as f:
                self.assertEqual(f.read(), run(["constants", "--p", "2"], check_exit=0).stdout)


class Values(unittest.TestCase):
    def test_constants(self):
        rows = json_output(["constants", "--p", "1.5,2,3,4.5,inf"])["rows"]
        by_p = {str(r["p"]): r for r in rows}
        two = by_p["2"] if "2" in by_p else by_p["2.0"]
        self.assertAlmostEqual(two["A_p"], math.exp(-0.25), delta=1e-11)
        self.assertAlmostEqual(two["entropy"], math.log(math.pi) - 0.5, delta=1e-6)
        self.assertAlmostEqual(by_p["inf"]["A_p"], 0.5, delta=1e-12)
        for r in rows:
            if r["p"] != "inf":
                self.assertLessEqual(abs(r["I_p"] - r["I_p_reference"]), 1e-5)

    def test_volume_examples(self):
        row = json_output(["volume", "--n", "1", "--p", "3.7", "--beta", "1", "--method", "mc-lp"])["rows"][0]
        self.assertAlmostEqual(row["log_volume"], math.log(2.0), delta=1e-12)
        self.assertEqual(row["std_error"], 0)
        row = json_output(["volume", "--n", "3", "--p", "2", "--beta", "1", "--method", "exact"])["rows"][0]
        euclid6 = 3 * math.log(math.pi) - math.lgamma(4.0)
        self.assertAlmostEqual(row["log_volume"], euclid6, delta=1e-10)
        row = json_output(["volume", "--n", "3", "--p", "inf", "--beta", "2", "--method", "exact"])["rows"][0]
        self.assertTrue(math.isfinite(row["log_volume"]))

    def test_partition_quadrature(self):
        row = json_output(["partition", "--n", "2", "--p", "3", "--beta", "1", "--method", "quadrature"])["rows"][0]
        self.assertAlmostEqual(row["log_Z"], 0.34969975562332119566, delta=1e-9)

    def test_expansion_examples(self):
        document = json_output(["expansion", "--target", "cn", "--beta", "4"])
        self.assertEqual(document["verdicts"][0]["pass"], True)
        _, _, rows = parse_csv(run(["expansion", "--target", "z-ckm", "--p", "2"], check_exit=0).stdout)
        data = [r for r in rows if r["n"] != "verdict"]
        diffs = [abs(float(r["difference"])) for r in data[1:]]
        self.assertTrue(all(b < a for a, b in zip(diffs, diffs[1:])))
        self.assertLess(diffs[-1], 1e-2)
        self.assertEqual(rows[-1]["n"], "verdict")


class ExitCodes(unittest.TestCase):
    def test_usage_errors(self):
        cases = [
            ["constants", "--p", "0.5"],
            ["constants", "--p", "abc"],
            ["volume", "--n", "3", "--p", "3", "--beta", "1", "--method", "exact"],
            ["expansion", "--target", "vol-main1", "--p", "1.2", "--beta", "1"],
            ["expansion", "--target", "z-ls", "--p", "1.2", "--beta", "2"],
            ["expansion", "--target", "cn", "--grid", "100,50"],
            ["nonsense"],
            ["volume", "--samples", "10"],
        ]
        for args in cases:
            with self.subTest(args=args):
                run(args, check_exit=2)

    def test_usage_messages(self):
        proc = run(["volume", "--n", "3", "--p", "3", "--beta", "1", "--method", "exact"], check_exit=2)
        self.assertIn("exact volumes are unknown", proc.stderr)
        proc = run(["expansion", "--target", "vol-main1", "--p", "1.2", "--beta", "1"], check_exit=2)
        self.assertIn("p >= 3/2", proc.stderr)

    def test_fast_validation_succeeds(self):
        run(["validate", "--level", "fast"], check_exit=0)

    def test_tampered_full_validation_fails(self):
        proc = run(["validate", "--level", "full", "--tamper-v-p", "1.001"], check_exit=1)
        self.assertIn("ullman.moment_identity", proc.stderr)

    def test_large_n_warning(self):
        proc = run(["partition", "--n", "70", "--p", "2", "--beta", "2", "--method", "exact"], check_exit=0)
        self.assertIn("warning", proc.stderr.lower())


class Reproducibility(unittest.TestCase):
    MC = ["volume", "--n", "3", "--p", "2.5", "--beta", "1", "--method", "mc-lp", "--samples", "20000"]
    Z = ["partition", "--n", "3", "--p", "2.5", "--beta", "1", "--method", "mc-z", "--samples", "20000"]

    def test_byte_identical_across_runs_and_threads(self):
        for args in (self.MC, self.Z):
            with self.subTest(command=args[0]):
                a = run(args + ["--seed", "11"], check_exit=0).stdout
                b = run(args + ["--seed", "11", "--threads", "1"], check_exit=0).stdout
                c = run(args + ["--seed", "11", "--threads", "3"], check_exit=0).stdout
                self.assertEqual(parse_csv(a)[1:], parse_csv(b)[1:])
                self.assertEqual(parse_csv(a)[1:], parse_csv(c)[1:])
                self.assertEqual(a, run(args + ["--seed", "11"], check_exit=0).stdout)
                d = run(args + ["--seed", "12"], check_exit=0).stdout
                self.assertNotEqual(parse_csv(a)[2], parse_csv(d)[2])

    def test_seed_from_environment(self):
        env_run = run(self.MC, env={"SCHATTEN_SEED": "77"}, check_exit=0).stdout
        flag_run = run(self.MC + ["--seed", "77"], check_exit=0).stdout
        self.assertEqual(env_run, flag_run)
        self.assertEqual(parse_csv(env_run)[0]["seed"], 77)
        override = run(self.MC + ["--seed", "78"], env={"SCHATTEN_SEED": "77"}, check_exit=0).stdout
        self.assertEqual(parse_csv(override)[0]["seed"], 78)

    def test_validation_report_is_stable(self):
        a = run(["validate", "--level", "fast", "--format", "json"], check_exit=0).stdout
        b = run(["validate", "--level", "fast", "--format", "json", "--threads", "1"], check_exit=0).stdout
        self.assertEqual(a, b)
        self.assertEqual(json.loads(a)["config"]["seed"], 20240601)


if __name__ == "__main__":
    BINARY = sys.argv[1]
    with open(sys.argv[2], encoding="utf-8") as f:
        SCHEMA = json.load(f)
    unittest.main(argv=[sys.argv[0], "-v"])
