import math
import os
import shutil
import tempfile
import unittest

from parameterized import parameterized

from mcloop.config import DEFAULT_TRANSFERS, RunConfig
from mcloop.diffusion.channel import BoundaryKind
from mcloop.exceptions import ConfigError
from mcloop.feedback.robots import FirstOrderRobot, identity_robot


def minimal(**sections):
    data = {"channel": {"mu": 83.0, "L": 100.0}}
    data.update(sections)
    return data


class TestRunConfig(unittest.TestCase):
    def setUp(self):
        self.output_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.output_dir)

    def write(self, text):
        path = os.path.join(self.output_dir, "run.yaml")
        with open(path, "w") as handle:
            handle.write(text)
        return path

    def test_defaults_are_worked_example(self):
        cfg = RunConfig.from_dict(minimal())
        self.assertEqual(cfg.channel.kinds, "dn")
        self.assertEqual(cfg.transmembrane.k, 200.0)
        self.assertEqual(cfg.receptor.R, 1000.0)
        self.assertEqual(cfg.sweep.transfers, DEFAULT_TRANSFERS)
        self.assertEqual(cfg.cutoff.entries, ["G21"])
        self.assertEqual(len(cfg.sweep.grid()), 601)

    def test_load_yaml(self):
        path = self.write(
            "channel: {mu: 83, L: 50, b0: dirichlet, bL: D}\n"
            "sweep: {omegas: [1.0e-3, 1.0e-2]}\n"
            "robot: {kind: first_order, gain: 2.0, tau: 0.5}\n"
        )
        cfg = RunConfig.load(path)
        self.assertEqual(cfg.channel.kinds, "dd")
        self.assertEqual(cfg.sweep.grid(), [1e-3, 1e-2])
        channel = cfg.build_channel()
        self.assertEqual(channel.L, 50.0)
        self.assertIs(channel.bL, BoundaryKind.DIRICHLET)
        self.assertIsInstance(cfg.build_robot(), FirstOrderRobot)

    def test_shipped_config_loads(self):
        path = os.path.join(os.path.dirname(__file__), os.pardir, "configs", "worked_example.yaml")
        cfg = RunConfig.load(path)
        self.assertEqual(cfg.cutoff.kinds, ["dd", "dn", "nd", "nn"])
        self.assertEqual(cfg.sweep.distances, [10.0, 50.0, 100.0])
        self.assertEqual(cfg.build_design_spec().L_max, 100.0)

    def test_empty_document_needs_channel(self):
        with self.assertRaises(ConfigError):
            RunConfig.load(self.write(""))

    @parameterized.expand([
        ("unknown_key", minimal(extra={"a": 1})),
        ("unknown_field", minimal(transmembrane={"k": 1.0, "q": 2.0})),
        ("negative_mu", {"channel": {"mu": -1.0, "L": 1.0}}),
        ("empty_grid", minimal(sweep={"omegas": []})),
        ("unsorted_grid", minimal(sweep={"omegas": [1.0, 0.1]})),
        ("reversed_bounds", minimal(sweep={"omega_min": 1.0, "omega_max": 1e-3})),
        ("unknown_transfer", minimal(sweep={"transfers": ["G33"]})),
        ("bad_bracket", minimal(cutoff={"bracket": [1.0, 0.5]})),
        ("positive_level", minimal(cutoff={"level_db": 3.0})),
        ("coarse_grid", minimal(simulation={"n_cells": 10})),
        ("two_durations", minimal(simulation={"duration": 10.0, "duration_periods": 2.0})),
        ("bad_boundary", minimal(channel={"mu": 1.0, "L": 1.0, "b0": "robin"})),
    ])
    def test_rejects(self, _, data):
        with self.assertRaises(ConfigError):
            RunConfig.from_dict(data)

    def test_rejects_non_mapping(self):
        with self.assertRaises(ConfigError):
            RunConfig.load(self.write("- 1\n- 2\n"))

    def test_rejects_malformed_yaml(self):
        with self.assertRaises(ConfigError):
            RunConfig.load(self.write("channel: {mu: 83, L: [\n"))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            RunConfig.load(os.path.join(self.output_dir, "missing.yaml"))

    def test_design_spec_follows_channel(self):
        cfg = RunConfig.from_dict(minimal(design={"L_min": 20.0}))
        spec = cfg.build_design_spec()
        self.assertEqual(spec.L_max, 100.0)
        self.assertEqual(spec.L_min, 20.0)
        self.assertEqual(spec.dr, 1.0)
        self.assertEqual(spec.kinds, "dn")

    def test_invalid_design_range(self):
        cfg = RunConfig.from_dict(minimal(design={"L_min": 200.0}))
        with self.assertRaises(ConfigError):
            cfg.build_design_spec()

    def test_interconnection_uses_identity_robots(self):
        ic = RunConfig.from_dict(minimal()).build_interconnection(L=50.0)
        self.assertEqual(ic.channel.L, 50.0)
        self.assertIs(ic.f0, identity_robot)

    def test_sim_config_duration_in_periods(self):
        cfg = RunConfig.from_dict(minimal(simulation={"duration_periods": 10.0}))
        sim = cfg.build_sim_config(L=50.0, omega=1e-1)
        self.assertAlmostEqual(sim.duration, 10 * 2 * math.pi / 1e-1)
        self.assertEqual(sim.drive.omega, 1e-1)
        self.assertEqual(sim.channel.L, 50.0)
        self.assertEqual(sim.receptor.mu, 83.0)

    def test_sim_config_defaults(self):
        sim = RunConfig.from_dict(minimal()).build_sim_config()
        self.assertIsNone(sim.duration)
        self.assertEqual(sim.drive.omega, 1e-2)
        self.assertEqual(sim.drive.dc, 1.0)


if __name__ == "__main__":
    unittest.main()
