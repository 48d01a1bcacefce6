# -*- coding: UTF-8 -*-

import unittest

import numpy as np

from trellisml.channel import NoiseModel, ReceivedSequence, SymbolMapper, modulate, transmit, trial_rng
from trellisml.convcode import GeneratorMatrix, Message, Trellis, encode
from trellisml.decoders import (NllParams, SymbolSetSequence, brute_force_ml, build_symbol_sets,
                                modified_viterbi, nll_confirm, suboptimal_decode, three_step_decode,
                                viterbi_decode, window_multiplier)
from trellisml.decoders.nll import confirmed_windows
from trellisml.exceptions import ConfigurationError, ContractError

CODE = GeneratorMatrix.from_octal(["7", "5"])
MAPPER = SymbolMapper(CODE.field)
TERNARY = GeneratorMatrix.from_rows(3, 1, 2, 2, [1, 1, 1, 2])


def draw(seed, N, sigma2, code=CODE):
    mapper = SymbolMapper(code.field)
    rng = trial_rng(seed, N)
    msg = Message.from_indices(rng.integers(0, code.symbol_count, N), code.field, code.k)
    cw = encode(msg, code)
    return msg, cw, transmit(modulate(cw, mapper), NoiseModel(sigma2), rng)


class TestNllParams(unittest.TestCase):
    def test_defaults(self):
        params = NllParams.for_code(CODE, MAPPER)
        self.assertEqual((1.0, 25), (params.xi, params.M))
        self.assertEqual((4.0, 8.0, 3), (params.d_min2, params.d_max2, params.nu))
        self.assertEqual(150, params.inner)
        self.assertEqual(153, params.reach)
        self.assertEqual(1.0, params.flank_budget)
        self.assertEqual(25, window_multiplier(3, 8.0, 1.0))

    def test_constraints(self):
        with self.assertRaises(ConfigurationError):
            NllParams(2.0, 25, 4.0, 8.0, 3)
        with self.assertRaises(ConfigurationError):
            NllParams(0.0, 25, 4.0, 8.0, 3)
        with self.assertRaises(ConfigurationError):
            NllParams(1.0, 8, 4.0, 8.0, 3)
        with self.assertRaises(ConfigurationError):
            NllParams.for_code(CODE, MAPPER, xi=0.0)
        with self.assertRaises(ConfigurationError):
            NllParams.for_code(CODE, MAPPER, condition_a="loose")
        with self.assertRaises(ConfigurationError):
            NllParams.for_code(CODE, MAPPER, boundary="wrap")
        self.assertEqual(9, NllParams(1.0, 9, 4.0, 8.0, 3).M)

    def test_condition_modes(self):
        params = NllParams.for_code(CODE, MAPPER)
        squared = np.array([0.81, 0.99, 1.21])
        self.assertEqual([True, True, False], params.residual_ok(squared).tolist())
        self.assertEqual([True, True, False], params.with_modes("squared").residual_ok(squared).tolist())
        # 2*(2 - 2e) > 2 holds for e < 0.5, i.e. squared residuals below 0.25
        self.assertEqual([True, False], params.with_modes("scaled").residual_ok([0.2, 0.3]).tolist())


class TestNllConfirm(unittest.TestCase):
    def test_noiseless_interior(self):
        _, cw, rx = draw(0, 400, 0.0)
        params = NllParams.for_code(CODE, MAPPER)
        self.assertTrue(nll_confirm(rx, cw, 200, params, MAPPER))
        self.assertFalse(nll_confirm(rx, cw, 10, params, MAPPER))
        self.assertTrue(nll_confirm(rx, cw, 10, params.with_modes(boundary="extend"), MAPPER))

    def test_inner_residual_breaks(self):
        _, cw, rx = draw(0, 400, 0.0)
        params = NllParams.for_code(CODE, MAPPER)
        samples = rx.samples.copy()
        samples[230] += 1.5
        bumped = ReceivedSequence(samples)
        self.assertFalse(nll_confirm(bumped, cw, 200, params, MAPPER))
        # a window that ends before the bump is unaffected
        self.assertTrue(nll_confirm(bumped, cw, 10, params.with_modes(boundary="extend"), MAPPER))

    def test_flank_breaks(self):
        _, cw, rx = draw(0, 400, 0.0)
        params = NllParams.for_code(CODE, MAPPER)
        samples = rx.samples.copy()
        # inside the right flank, far outside the inner window
        samples[200 + params.inner + 1] += [0.8, 0.8]
        self.assertFalse(nll_confirm(ReceivedSequence(samples), cw, 200, params, MAPPER))

    def test_extend_ignores_far_residuals(self):
        _, cw, rx = draw(0, 400, 0.0)
        params = NllParams.for_code(CODE, MAPPER, boundary="extend")
        samples = rx.samples.copy()
        samples[390] += [0.8, 0.8]
        bumped = ReceivedSequence(samples)
        # the left flank of an early window lies wholly before the block
        for m in (-2, 0, 5, 100):
            self.assertTrue(nll_confirm(bumped, cw, m, params, MAPPER), msg=str(m))
        self.assertFalse(nll_confirm(bumped, cw, 390, params, MAPPER))

    def test_running_sums_match_direct(self):
        for boundary, N in (("extend", 40), ("extend", 400), ("clip", 330)):
            params = NllParams.for_code(CODE, MAPPER, boundary=boundary)
            for seed in range(3):
                _, cw, rx = draw(seed, N, 0.05)
                first, last = -CODE.nu + 1, N - 1
                fast = confirmed_windows(rx, cw, params, MAPPER, first, last)
                direct = [nll_confirm(rx, cw, m, params, MAPPER) for m in range(first, last + 1)]
                self.assertEqual(direct, fast.tolist())

    def test_sound_against_brute_force(self):
        N = 8
        for code in (CODE, TERNARY):
            mapper = SymbolMapper(code.field)
            for mode in ("literal", "squared", "scaled"):
                params = NllParams.for_code(code, mapper, condition_a=mode, boundary="extend")
                confirmed = 0
                for sigma2 in (1.0, 0.1, 0.01):
                    for seed in range(15):
                        msg, cw, rx = draw(seed, N, sigma2, code)
                        guess = suboptimal_decode(rx, code, mapper, N)
                        ml = brute_force_ml(rx, code, mapper, N).message.indices()
                        for candidate_msg in (msg, guess):
                            candidate = encode(candidate_msg, code)
                            labels = candidate_msg.indices()
                            for m in range(-code.nu + 1, N):
                                if not nll_confirm(rx, candidate, m, params, mapper):
                                    continue
                                confirmed += 1
                                lo, hi = max(m, 0), min(m + code.nu, N)
                                self.assertEqual(ml[lo:hi].tolist(), labels[lo:hi].tolist())
                self.assertGreater(confirmed, 0)

    def test_sound_against_viterbi(self):
        N = 400
        params = NllParams.for_code(CODE, MAPPER)
        trellis = Trellis(CODE, N)
        for sigma2 in (0.25, 0.1):
            for seed in range(3):
                _, _, rx = draw(seed, N, sigma2)
                guess = suboptimal_decode(rx, CODE, MAPPER, N)
                ml = viterbi_decode(rx, trellis, MAPPER).message.indices()
                ok = confirmed_windows(rx, encode(guess, CODE), params, MAPPER, 0, N - 1)
                labels = guess.indices()
                for m in np.flatnonzero(ok):
                    hi = min(m + CODE.nu, N)
                    self.assertEqual(ml[m:hi].tolist(), labels[m:hi].tolist())


class TestSymbolSets(unittest.TestCase):
    def test_noiseless(self):
        msg, _, rx = draw(1, 400, 0.0)
        params = NllParams.for_code(CODE, MAPPER)
        sets = build_symbol_sets(rx, msg, params, CODE, MAPPER)
        self.assertEqual(400, len(sets))
        for d in range(params.reach, rx.span - params.reach):
            self.assertTrue(sets.is_singleton(d))
            self.assertEqual({int(msg.indices()[d])}, sets.symbols(d))
        self.assertFalse(sets.is_singleton(0))
        self.assertFalse(sets.is_singleton(399))
        every = build_symbol_sets(rx, msg, params.with_modes(boundary="extend"), CODE, MAPPER)
        self.assertEqual(1.0, every.singleton_fraction)

    def test_far_from_every_symbol(self):
        msg, _, _ = draw(1, 400, 0.0)
        rx = ReceivedSequence(np.zeros((402, 2)))
        sets = build_symbol_sets(rx, msg, NllParams.for_code(CODE, MAPPER, boundary="extend"), CODE, MAPPER)
        self.assertEqual(0.0, sets.singleton_fraction)
        self.assertEqual({0, 1}, sets.symbols(5))

    def test_confirmation_falls_with_noise(self):
        params = NllParams.for_code(CODE, MAPPER, boundary="extend")
        fractions = []
        for sigma2 in (0.01, 0.1, 0.5):
            total = 0.0
            for seed in range(5):
                msg, _, rx = draw(seed, 512, sigma2)
                total += build_symbol_sets(rx, msg, params, CODE, MAPPER).singleton_fraction
            fractions.append(total / 5)
        self.assertGreaterEqual(fractions[0], fractions[1])
        self.assertGreaterEqual(fractions[1], fractions[2])

    def test_mismatched_memory(self):
        msg, _, rx = draw(1, 8, 0.0)
        params = NllParams.for_code(TERNARY, SymbolMapper(TERNARY.field))
        with self.assertRaises(ContractError):
            build_symbol_sets(rx, msg, params, CODE, MAPPER)

    def test_set_sequence(self):
        sets = SymbolSetSequence([-1, 1, 0], 2)
        self.assertEqual({0, 1}, sets.symbols(0))
        self.assertAlmostEqual(2 / 3, sets.singleton_fraction)
        with self.assertRaises(ContractError):
            SymbolSetSequence([2], 2)


class TestModifiedViterbi(unittest.TestCase):
    def test_full_sets(self):
        _, _, rx = draw(4, 20, 1.0)
        trellis = Trellis(CODE, 20)
        full = viterbi_decode(rx, trellis, MAPPER)
        same = modified_viterbi(rx, trellis, MAPPER, SymbolSetSequence.full(20, 2))
        self.assertEqual(full.message, same.message)
        self.assertEqual(full.stats.visited_states, same.stats.visited_states)

    def test_singleton_sets(self):
        msg, _, rx = draw(4, 20, 1.0)
        result = modified_viterbi(rx, Trellis(CODE, 20), MAPPER, SymbolSetSequence(msg.indices(), 2))
        self.assertEqual(msg, result.message)
        self.assertEqual(rx.span, result.stats.visited_states)

    def test_length_mismatch(self):
        _, _, rx = draw(4, 20, 1.0)
        with self.assertRaises(ContractError):
            modified_viterbi(rx, Trellis(CODE, 20), MAPPER, SymbolSetSequence.full(19, 2))


class TestThreeStep(unittest.TestCase):
    def test_noiseless(self):
        msg, _, rx = draw(2, 400, 0.0)
        params = NllParams.for_code(CODE, MAPPER, boundary="extend")
        result = three_step_decode(rx, CODE, MAPPER, params)
        self.assertEqual(msg, result.message)
        self.assertEqual(rx.span, result.stats.visited_states)
        self.assertEqual({"suboptimal", "confirmation", "modified_viterbi"}, set(result.stats.stage_costs))
        self.assertEqual(1.0, result.stats.stage_costs["suboptimal"])

    def test_matches_brute_force(self):
        N = 8
        for boundary in ("clip", "extend"):
            params = NllParams.for_code(CODE, MAPPER, boundary=boundary)
            for sigma2 in (1.0, 0.1, 0.01):
                for seed in range(20):
                    msg, _, rx = draw(seed, N, sigma2)
                    oracle = brute_force_ml(rx, CODE, MAPPER, N)
                    for guess in (None, msg):
                        result = three_step_decode(rx, CODE, MAPPER, params, guess=guess)
                        self.assertAlmostEqual(oracle.metric, result.metric, delta=1e-9)
                        self.assertEqual(oracle.message, result.message)
                        self.assertTrue(1 <= result.stats.normalized <= 8 * (N + 2) / N)

    def test_list_strategy(self):
        N = 8
        params = NllParams.for_code(TERNARY, SymbolMapper(TERNARY.field), boundary="extend")
        for seed in range(10):
            _, _, rx = draw(seed, N, 0.1, TERNARY)
            mapper = SymbolMapper(TERNARY.field)
            result = three_step_decode(rx, TERNARY, mapper, params, strategy="list(3)")
            oracle = brute_force_ml(rx, TERNARY, mapper, N)
            self.assertEqual(oracle.message, result.message)

    def test_high_snr_is_cheaper(self):
        N = 600
        params = NllParams.for_code(CODE, MAPPER)
        trellis = Trellis(CODE, N)
        low, high = 0.0, 0.0
        for seed in range(3):
            _, _, rx = draw(seed, N, 1.0)
            low += three_step_decode(rx, CODE, MAPPER, params, trellis=trellis).stats.normalized
            _, _, rx = draw(seed, N, 1e-4)
            high += three_step_decode(rx, CODE, MAPPER, params, trellis=trellis).stats.normalized
        self.assertLess(high, low)
