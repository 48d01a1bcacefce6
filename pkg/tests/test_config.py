# -*- coding: UTF-8 -*-

import math
import os
import tempfile
import unittest
from unittest import mock

from trellisml.channel import SymbolMapper
from trellisml.config import (DEFAULT_N, ENV_THREADS, Settings, build_code, build_hmm_system, build_mapper,
                              build_noise, build_trial_config, nll_overrides, snr_grid, split_list, thread_count)
from trellisml.convcode import GeneratorMatrix
from trellisml.exceptions import ConfigurationError, UsageError
from trellisml.galois import GF

CONV = {"code": {"q": 2, "octal": ["7", "5"]}}


def settings(sections=None, **flags):
    return Settings(sections).override(flags)


def without_thread_env():
    patch = mock.patch.dict(os.environ)
    patch.start()
    os.environ.pop(ENV_THREADS, None)
    return patch


class TestSplitList(unittest.TestCase):
    def test_separators(self):
        self.assertEqual([7, 5], split_list("7,5", int))
        self.assertEqual([1.0, 2.0, 3.0], split_list("1 2\n3"))
        self.assertEqual([1, 2], split_list([1, "2"], int))
        self.assertEqual([], split_list(""))

    def test_malformed(self):
        with self.assertRaises(ConfigurationError):
            split_list("1,x", int)


class TestSettings(unittest.TestCase):
    def test_sections(self):
        with self.assertRaises(ConfigurationError):
            Settings({"decoder": {}})
        with self.assertRaises(ConfigurationError):
            Settings({"code": 3})

    def test_override(self):
        s = settings({"code": {"q": 2}}, q="3", octal=None, snr="1,2")
        self.assertEqual(3, s.get("code", "q"))
        self.assertEqual([1.0, 2.0], s.get("channel", "snr"))
        self.assertIsNone(s.get("code", "octal"))
        self.assertEqual("x", s.get("code", "octal", "x"))

    def test_require(self):
        with self.assertRaises(UsageError) as ctx:
            Settings().require("code", "q")
        self.assertIn("`q`", str(ctx.exception))

    def test_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.toml")
            with open(path, "w") as f:
                f.write('[code]\nq = 2\noctal = ["7", "5"]\n\n[channel]\nsnr = 4.0\n')
            s = Settings.load(path)
            self.assertEqual(2, s.get("code", "q"))
            self.assertEqual([4.0], snr_grid(s))

            with open(path, "w") as f:
                f.write("[code\nq = ")
            with self.assertRaises(ConfigurationError):
                Settings.load(path)

            with open(path, "w") as f:
                f.write("[trellis]\nq = 2\n")
            with self.assertRaises(ConfigurationError):
                Settings.load(path)

    def test_load_none(self):
        self.assertEqual({}, Settings.load(None).sections["code"])


class TestBuilders(unittest.TestCase):
    def test_octal_code(self):
        code = build_code(Settings(CONV))
        self.assertEqual((2, 1, 2, 3), (code.q, code.k, code.n, code.nu))
        self.assertEqual(GeneratorMatrix.from_octal(["7", "5"]).state_outputs.tolist(), code.state_outputs.tolist())

    def test_tap_code(self):
        code = build_code(settings(q="3", k="1", n="2", nu="2", taps="1,1,1,2"))
        expected = GeneratorMatrix.from_rows(3, 1, 2, 2, [1, 1, 1, 2])
        self.assertEqual(expected.state_outputs.tolist(), code.state_outputs.tolist())

    def test_missing_generator(self):
        with self.assertRaises(UsageError):
            build_code(settings(q="2"))
        with self.assertRaises(UsageError):
            build_code(settings(octal="7,5"))
        with self.assertRaises(UsageError):
            build_code(settings(q="2", taps="1,1"))

    def test_mapper(self):
        self.assertEqual((1.0, -1.0), build_mapper(Settings(), GF(2)).table)
        self.assertEqual((-1.0, 1.0), build_mapper(settings(map="-1,1"), GF(2)).table)
        with self.assertRaises(ConfigurationError):
            build_mapper(settings(map="1,1"), GF(2))

    def test_snr_grid(self):
        self.assertEqual([1.0, 2.0], snr_grid(settings(snr="1,2")))
        self.assertEqual([4.0], snr_grid(settings(sigma2="0.25")))
        self.assertEqual([math.inf], snr_grid(settings(sigma2="0")))
        with self.assertRaises(ConfigurationError):
            snr_grid(settings(snr="1", sigma2="1"))
        with self.assertRaises(UsageError):
            snr_grid(Settings())
        self.assertEqual(0.25, build_noise(settings(snr="4")).sigma2)

    def test_nll_overrides(self):
        self.assertEqual({}, nll_overrides(Settings()))
        out = nll_overrides(Settings({"nll": {"M": 30.0, "xi": 0.5, "boundary": "extend"}}))
        self.assertEqual({"M": 30, "xi": 0.5, "boundary": "extend"}, out)
        self.assertIsInstance(out["M"], int)

    def test_thread_count(self):
        patch = without_thread_env()
        try:
            self.assertEqual(1, thread_count(Settings()))
            os.environ[ENV_THREADS] = "3"
            self.assertEqual(3, thread_count(Settings()))
            self.assertEqual(2, thread_count(settings(threads="2")))
            os.environ[ENV_THREADS] = "many"
            with self.assertRaises(ConfigurationError):
                thread_count(Settings())
        finally:
            patch.stop()

    def test_trial_config(self):
        patch = without_thread_env()
        try:
            s = Settings(CONV).override({"N": "8,16", "snr": "2", "trials": "5", "decoders": "viterbi", "M": "30"})
            code = build_code(s)
            cfg = build_trial_config(s, code, build_mapper(s, code.field))
            self.assertEqual((8, 16), cfg.N)
            self.assertEqual((2.0,), cfg.snrs)
            self.assertEqual(5, cfg.trials)
            self.assertEqual(("viterbi",), cfg.decoders)
            self.assertEqual(0, cfg.seed)
            self.assertEqual(1, cfg.threads)
            self.assertEqual(30, cfg.M)
            self.assertEqual(30, cfg.nll_params().M)
            default = build_trial_config(Settings(CONV).override({"snr": "2"}), code, build_mapper(s, code.field))
            self.assertEqual((DEFAULT_N,), default.N)
        finally:
            patch.stop()

    def test_hmm_system(self):
        mapper = SymbolMapper(GF(2))
        tables = {"hmm": {"transitions": [[0.9, 0.1], [0.2, 0.8]], "process": [[0], [1]]}}
        system = build_hmm_system(Settings(tables), mapper, 2.0)
        self.assertEqual(2, system.num_states)
        self.assertFalse(system.terminate_at_zero)
        with self.assertRaises(ConfigurationError):
            build_hmm_system(Settings(tables), mapper, math.inf)
        with self.assertRaises(ConfigurationError):
            build_hmm_system(Settings({"hmm": dict(tables["hmm"], observation="poisson")}), mapper, 2.0)
        with self.assertRaises(UsageError):
            build_hmm_system(Settings({"hmm": {"transitions": [[1.0]]}}), mapper, 2.0)


if __name__ == '__main__':
    unittest.main()
