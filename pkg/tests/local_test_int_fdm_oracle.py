import unittest

from parameterized import parameterized

from mcloop.clitools.simulate_cli import run_comparison
from mcloop.config import RunConfig
from mcloop.simulation.fdm import empirical_gain, simulate


# Slow: the 1e-3 rad/s runs need ~50000 s of simulated time.
# Run locally before changing the scheme or the boundary models.
class TestFdmOracle(unittest.TestCase):
    def setUp(self):
        self.cfg = RunConfig.from_dict({"channel": {"mu": 83.0, "L": 100.0}})

    @parameterized.expand([("L50", 50.0), ("L100", 100.0)])
    def test_low_frequency_gain(self, _, L):
        result = simulate(self.cfg.build_sim_config(L=L, omega=1e-3))
        self.assertLess(abs(empirical_gain(result)), 0.5)

    def test_full_comparison(self):
        table = run_comparison(self.cfg, jobs=2)
        self.assertEqual(len(table), 6)
        self.assertLess(table["deviation_db"].abs().max(), self.cfg.compare.tolerance_db)

        passband = table[(table["L_um"] == 100.0) & (table["omega_rad_s"] == 1e-2)]
        # analytic |Gamma0L(1e-2)| at L = 100 is 0.8955
        self.assertGreaterEqual(float(passband["amplitude_ratio"].iloc[0]), 0.85)


if __name__ == "__main__":
    unittest.main()
