import math
import unittest

import numpy as np
from parameterized import parameterized

from mcloop.analysis.cutoff import (
    CutoffTarget, cutoff_frequency, gain_db, normalized_cutoff, steady_gain
)
from mcloop.diffusion.channel import DiffusionChannel
from mcloop.diffusion.transfer import eval_G_matrix
from mcloop.exceptions import InvalidParam, NoCrossing


def g21(channel):
    return lambda s: eval_G_matrix(channel, s)[..., 1, 0]


class TestNormalizedCutoff(unittest.TestCase):
    @parameterized.expand([("dn",), ("nd",)])
    def test_absolute_cutoff_constant(self, kinds):
        self.assertAlmostEqual(normalized_cutoff(kinds, CutoffTarget.ABSOLUTE), 4.14, delta=0.0414)

    def test_dd_cutoff_from_steady(self):
        self.assertAlmostEqual(normalized_cutoff("dd", CutoffTarget.FROM_STEADY), 15.0, delta=0.15)

    def test_transposed_entry_matches(self):
        self.assertAlmostEqual(normalized_cutoff("dn", CutoffTarget.ABSOLUTE, row=0, col=1),
                               normalized_cutoff("dn", CutoffTarget.ABSOLUTE), places=5)

    def test_nn_has_no_steady_reference(self):
        with self.assertRaises(NoCrossing):
            normalized_cutoff("nn", CutoffTarget.FROM_STEADY)

    @parameterized.expand([(83.0, 100.0), (10.0, 50.0), (1000.0, 10.0)])
    def test_cutoff_scales_with_rate(self, mu, L):
        channel = DiffusionChannel(mu=mu, L=L)
        result = cutoff_frequency(g21(channel), scale=channel.rate)
        self.assertAlmostEqual(result.omega_hat, normalized_cutoff("dn"), delta=1e-4)
        self.assertAlmostEqual(result.omega_c, result.omega_hat * mu / L ** 2)

    def test_worked_example_cutoff(self):
        channel = DiffusionChannel(mu=83.0, L=100.0)
        result = cutoff_frequency(g21(channel), scale=channel.rate)
        self.assertAlmostEqual(result.omega_c, 3.44e-2, delta=3.44e-4)
        self.assertAlmostEqual(result.gain_db, -6.0, delta=1e-4)
        self.assertEqual(result.to_dict()["reference"], "absolute")


class TestCutoffSearch(unittest.TestCase):
    def test_first_order_lag_at_literal_level(self):
        k = 2.0
        result = cutoff_frequency(lambda s: k / (s.value + k))
        expected = k * math.sqrt(10 ** 0.6 - 1)
        self.assertLess(abs(result.omega_c - expected) / expected, 1e-5)
        self.assertGreater(result.iterations, 0)

    def test_bracket_expands(self):
        k = 1e-9
        result = cutoff_frequency(lambda s: k / (s.value + k), bracket=(1e-6, 1e-3))
        self.assertLess(result.omega_c, 1e-8)

    def test_unreachable_target_above(self):
        channel = DiffusionChannel(mu=1.0, L=1.0)
        with self.assertRaises(NoCrossing):
            cutoff_frequency(g21(channel), bracket=(1e-8, 1e-6), max_expansions=0)

    def test_unreachable_target_below(self):
        channel = DiffusionChannel.from_kinds("dd", mu=83.0, L=100.0)
        with self.assertRaises(NoCrossing):
            cutoff_frequency(g21(channel), target=CutoffTarget.ABSOLUTE, scale=channel.rate, max_expansions=2)

    def test_invalid_bracket(self):
        with self.assertRaises(InvalidParam):
            cutoff_frequency(lambda s: 1.0, bracket=(1.0, 0.5))

    def test_steady_gain(self):
        dn = DiffusionChannel(mu=83.0, L=100.0)
        dd = DiffusionChannel.from_kinds("dd", mu=83.0, L=100.0)
        nn = DiffusionChannel.from_kinds("nn", mu=83.0, L=100.0)
        self.assertAlmostEqual(steady_gain(g21(dn), dn.rate), 0.0, places=6)
        self.assertAlmostEqual(steady_gain(g21(dd), dd.rate), -40.0, delta=0.01)
        self.assertEqual(steady_gain(g21(nn), nn.rate), math.inf)

    def test_gain_db_of_half_amplitude(self):
        self.assertAlmostEqual(gain_db(lambda s: 0.5, 1.0), 20 * np.log10(0.5))


if __name__ == "__main__":
    unittest.main()
