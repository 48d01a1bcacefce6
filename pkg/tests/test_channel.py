# -*- coding: UTF-8 -*-

import unittest

import numpy as np

from trellisml.channel import (NoiseModel, ReceivedSequence, SymbolMapper, modulate, signal_distances,
                               transmit, trial_rng)
from trellisml.convcode import Codeword
from trellisml.exceptions import ConfigurationError, ContractError, ResourceError
from trellisml.galois import GF


class TestSymbolMapper(unittest.TestCase):
    def test_default_maps(self):
        self.assertEqual((1.0, -1.0), SymbolMapper(GF(2)).table)
        self.assertEqual((2.0, 0.0, -2.0), SymbolMapper(GF(3)).table)

    def test_modulate(self):
        f2, f3 = GF(2), GF(3)
        self.assertEqual([[1.0, -1.0]], modulate(Codeword([[0, 1]], f2), SymbolMapper(f2)).tolist())
        self.assertEqual([[-2.0, 2.0]], modulate(Codeword([[2, 0]], f3), SymbolMapper(f3)).tolist())
        zeros = modulate(Codeword(np.zeros((4, 2)), f2), SymbolMapper(f2))
        self.assertTrue(np.all(zeros == 1.0))
        with self.assertRaises(ContractError):
            modulate(Codeword([[0, 1]], f2), SymbolMapper(f3))

    def test_injective(self):
        with self.assertRaises(ConfigurationError):
            SymbolMapper(GF(3), [1.0, 1.0, 0.0])
        with self.assertRaises(ConfigurationError):
            SymbolMapper(GF(3), [1.0, 0.0])
        with self.assertRaises(ConfigurationError):
            SymbolMapper(GF(2), [1.0, float("inf")])

    def test_difference_distance(self):
        self.assertEqual(0.0, SymbolMapper(GF(2)).difference_distance(0))
        self.assertEqual(4.0, SymbolMapper(GF(2)).difference_distance(1))
        # 0 -> 2, 1 -> 0, 2 -> -2: a step of one moves by 2 or wraps by 4
        self.assertEqual(4.0, SymbolMapper(GF(3)).difference_distance(1))


class TestNoise(unittest.TestCase):
    def test_snr(self):
        self.assertEqual(0.25, NoiseModel.from_snr(4).sigma2)
        self.assertEqual(0.0, NoiseModel.from_snr(float("inf")).sigma2)
        self.assertEqual(10.0, NoiseModel(0.1).snr)
        for bad in (0, -1):
            with self.assertRaises(ConfigurationError):
                NoiseModel.from_snr(bad)
        with self.assertRaises(ConfigurationError):
            NoiseModel(-0.5)

    def test_noiseless(self):
        clean = np.array([[1.0, -1.0], [-1.0, -1.0]])
        rx = transmit(clean, NoiseModel(0.0), trial_rng(1))
        self.assertTrue(np.array_equal(clean, rx.samples))

    def test_deterministic(self):
        clean = np.ones((50, 2))
        a = transmit(clean, NoiseModel(1.0), trial_rng(42, 100, 3))
        b = transmit(clean, NoiseModel(1.0), trial_rng(42, 100, 3))
        c = transmit(clean, NoiseModel(1.0), trial_rng(42, 100, 4))
        self.assertTrue(np.array_equal(a.samples, b.samples))
        self.assertFalse(np.array_equal(a.samples, c.samples))

    def test_variance(self):
        rx = transmit(np.zeros((50000, 2)), NoiseModel(1.0), trial_rng(7))
        self.assertTrue(0.98 <= float(np.var(rx.samples)) <= 1.02)

    def test_received_sequence(self):
        rx = ReceivedSequence([0.5, 1.0, 2.0])
        self.assertEqual((3, 1), (rx.span, rx.n))
        self.assertEqual([1.0], rx[1].tolist())
        with self.assertRaises(ContractError):
            ReceivedSequence(np.zeros((2, 2, 2)))


class TestSignalDistances(unittest.TestCase):
    def test_binary(self):
        self.assertEqual((4.0, 8.0), signal_distances(SymbolMapper(GF(2)), 2))
        self.assertEqual((4.0, 4.0), signal_distances(SymbolMapper(GF(2)), 1))

    def test_ternary(self):
        d_min2, d_max2 = signal_distances(SymbolMapper(GF(3)), 2)
        self.assertEqual(4.0, d_min2)
        self.assertEqual(32.0, d_max2)

    def test_translation_invariant(self):
        mapper = SymbolMapper(GF(3), [0.3, -1.7, 2.5])
        for n in (1, 2, 3):
            a = signal_distances(mapper, n)
            b = signal_distances(mapper.translated(5.25), n)
            self.assertAlmostEqual(a[0], b[0], places=9)
            self.assertAlmostEqual(a[1], b[1], places=9)
            self.assertLessEqual(a[0], a[1])

    def test_budget(self):
        with self.assertRaises(ResourceError):
            signal_distances(SymbolMapper(GF(3)), 9, budget=3 ** 8)
