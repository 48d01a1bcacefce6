# -*- coding: UTF-8 -*-

import io
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from trellisml.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, parse_and_dispatch
from trellisml.cli.sweep import COLUMNS, write_rows
from trellisml.convcode import GeneratorMatrix, Message, encode
from trellisml.experiments import CellResult, SweepResult

CONV = ["--q", "2", "--octal", "7,5"]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        status = parse_and_dispatch(list(argv))
    return status, out.getvalue(), err.getvalue()


class TestEncode(unittest.TestCase):
    def test_encode(self):
        status, out, _ = run("encode", *CONV, "--msg", "1,0,1,1")
        self.assertEqual(EXIT_OK, status)
        code = GeneratorMatrix.from_octal(["7", "5"])
        cw = encode(Message([[1], [0], [1], [1]], code.field), code)
        self.assertEqual(["%d,%d" % tuple(row) for row in cw.tolist()], out.splitlines())
        self.assertEqual(["1,1", "1,0", "0,0", "0,1", "0,1", "1,1"], out.splitlines())

    def test_encode_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "msg.txt")
            with open(path, "w") as f:
                f.write("1\n0\n1\n1\n")
            self.assertEqual(run("encode", *CONV, "--msg", "1,0,1,1")[1], run("encode", *CONV, "-f", path)[1])

    def test_missing_field(self):
        status, _, err = run("encode", "--octal", "7,5", "--msg", "1")
        self.assertEqual(EXIT_USAGE, status)
        self.assertIn("`q`", err)

    def test_missing_message(self):
        self.assertEqual(EXIT_USAGE, run("encode", *CONV)[0])

    def test_unknown_flag(self):
        self.assertEqual(EXIT_USAGE, run("encode", *CONV, "--msg", "1", "--bogus")[0])
        self.assertEqual(EXIT_USAGE, run("transcode")[0])


class TestDecode(unittest.TestCase):
    RX = "-1,-1,-1,1,1,1,1,-1,1,-1,-1,-1"

    def test_noiseless(self):
        status, out, _ = run("decode", *CONV, "--rx=" + self.RX)
        self.assertEqual(EXIT_OK, status)
        lines = out.splitlines()
        self.assertEqual("message: 1,0,1,1", lines[0])
        self.assertEqual("metric: 0", lines[1])
        self.assertEqual("certified: yes", lines[-1])

    def test_three_step(self):
        status, out, _ = run("decode", *CONV, "--rx=" + self.RX, "-d", "three_step", "--boundary", "extend")
        self.assertEqual(EXIT_OK, status)
        self.assertIn("message: 1,0,1,1", out)
        self.assertIn("confirmation", out)

    def test_suboptimal(self):
        status, out, _ = run("decode", *CONV, "--rx=" + self.RX, "-d", "suboptimal")
        self.assertEqual(EXIT_OK, status)
        self.assertEqual("message: 1,0,1,1", out.strip())

    def test_hmm_viterbi(self):
        status, out, _ = run("decode", *CONV, "--rx=" + self.RX, "-d", "hmm_viterbi", "--snr", "4")
        self.assertEqual(EXIT_OK, status)
        self.assertIn("states: 1,2,5,3,6,4", out)

    def test_bad_input(self):
        self.assertEqual(EXIT_USAGE, run("decode", *CONV, "--rx", "1,1,1")[0])
        self.assertEqual(EXIT_FAILURE, run("decode", *CONV, "--rx=" + self.RX, "--condition-a", "loose")[0])


class TestSimulate(unittest.TestCase):
    def test_simulate(self):
        status, out, _ = run("simulate", *CONV, "--snr", "4", "--N", "8", "--seed", "3", "--trial", "1")
        self.assertEqual(EXIT_OK, status)
        self.assertTrue(out.startswith("trial 1: snr=4 N=8"))
        self.assertIn("brute force: agrees", out)
        self.assertEqual(out, run("simulate", *CONV, "--snr", "4", "--N", "8", "--seed", "3", "--trial", "1")[1])

    def test_config_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.toml")
            with open(path, "w") as f:
                f.write('[code]\nq = 2\noctal = ["7", "5"]\n\n[channel]\nsnr = 4.0\nseed = 3\n\n'
                        '[sweep]\nN = [8]\n')
            from_file = run("simulate", "-c", path, "--trial", "1")
            self.assertEqual(EXIT_OK, from_file[0])
            self.assertEqual(run("simulate", *CONV, "--snr", "4", "--N", "8", "--seed", "3", "--trial", "1")[1],
                             from_file[1])
            # flags win over the file
            self.assertIn("snr=2", run("simulate", "-c", path, "--snr", "2")[1])

    def test_missing_config_file(self):
        self.assertEqual(EXIT_FAILURE, run("simulate", "-c", "/nonexistent/run.toml")[0])


class TestSweep(unittest.TestCase):
    ARGS = ("sweep", *CONV, "--snr", "1,4", "--N", "8", "--trials", "2", "--seed", "1", "--no-progress")

    def test_repeatable(self):
        with tempfile.TemporaryDirectory() as tmp:
            first, second = os.path.join(tmp, "a.csv"), os.path.join(tmp, "b.csv")
            self.assertEqual(EXIT_OK, run(*self.ARGS, "-o", first)[0])
            self.assertEqual(EXIT_OK, run(*self.ARGS, "-o", second)[0])
            with open(first, "rb") as a, open(second, "rb") as b:
                self.assertEqual(a.read(), b.read())

    def test_stdout(self):
        status, out, _ = run(*self.ARGS)
        self.assertEqual(EXIT_OK, status)
        lines = out.splitlines()
        self.assertEqual(",".join(COLUMNS), lines[0])
        # two decoders at two snrs
        self.assertEqual(5, len(lines))
        self.assertTrue(lines[1].startswith("three_step,1,8,2,"))

    def test_unknown_kind(self):
        self.assertEqual(EXIT_FAILURE, run(*self.ARGS, "--kind", "ber")[0])

    def test_unwritable_output(self):
        self.assertEqual(EXIT_FAILURE, run(*self.ARGS, "-o", "/nonexistent/dir/out.csv")[0])


class TestCsv(unittest.TestCase):
    def test_header_only(self):
        out = io.StringIO()
        write_rows(SweepResult("complexity"), out)
        self.assertEqual(",".join(COLUMNS) + "\n", out.getvalue())

    def test_one_cell(self):
        out = io.StringIO()
        write_rows(SweepResult("complexity", [CellResult("viterbi", 4.0, 8, 3, 7, 7.5, 0.0, 1.0)]), out)
        self.assertEqual(["decoder,snr,N,trials,mean_visited_per_t,std_visited_per_t,ml_match_rate,"
                          "sub_symbol_err,opt_m_rate,sll_accept_rate,seed",
                          "viterbi,4,8,3,7.5,0,1,,,,7"], out.getvalue().splitlines())


if __name__ == '__main__':
    unittest.main()
