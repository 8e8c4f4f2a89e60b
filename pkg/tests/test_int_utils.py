import json
import logging
import os
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest import mock

import numpy as np
import pandas as pd
from parameterized import parameterized

from mcloop.diffusion.channel import ComplexFreq
from mcloop.exceptions import DenominatorUnderflow
from mcloop.utils.decorators import private, stamp_omega
from mcloop.utils.envpath import ENV_FILE_VAR, get_env_path, load_mcloop_env
from mcloop.utils.files import NpEncoder, write_csv_atomic, write_json_atomic
from mcloop.utils.logs import DEFAULT_LEVEL, configure_logging, resolve_level


class TestEnvPath(unittest.TestCase):
    def setUp(self):
        self.output_dir = tempfile.mkdtemp()
        self.home_dir = tempfile.mkdtemp()
        self.cwd = os.getcwd()
        os.chdir(self.output_dir)
        self.patches = [
            mock.patch.object(Path, "home", return_value=Path(self.home_dir)),
            mock.patch.dict(os.environ, {}),
        ]
        for patch in self.patches:
            patch.start()
        os.environ.pop(ENV_FILE_VAR, None)

    def tearDown(self):
        for patch in reversed(self.patches):
            patch.stop()
        os.chdir(self.cwd)
        shutil.rmtree(self.output_dir)
        shutil.rmtree(self.home_dir)

    def test_no_env_file(self):
        self.assertIsNone(get_env_path())
        self.assertIsNone(load_mcloop_env())

    def test_create_in_home_config(self):
        path = get_env_path(create_if_not_exist=True)
        self.assertEqual(path, os.path.join(self.home_dir, ".config", "mcloop", ".env"))
        self.assertTrue(os.path.exists(path))

    def test_working_directory_wins(self):
        get_env_path(create_if_not_exist=True)
        with open(".env", "w") as handle:
            handle.write("MCLOOP_LOG=INFO\n")
        self.assertEqual(get_env_path(), ".env")

        with mock.patch.dict(os.environ, {}, clear=False):
            load_mcloop_env()
            self.assertEqual(os.environ["MCLOOP_LOG"], "INFO")

    def test_explicit_env_file(self):
        explicit = os.path.join(self.output_dir, "run.env")
        with open(explicit, "w") as handle:
            handle.write("MCLOOP_LOG=DEBUG\n")
        with open(".env", "w") as handle:
            handle.write("MCLOOP_LOG=INFO\n")

        os.environ[ENV_FILE_VAR] = explicit
        self.assertEqual(get_env_path(), explicit)

        os.environ[ENV_FILE_VAR] = os.path.join(self.output_dir, "missing.env")
        self.assertEqual(get_env_path(), ".env")


class TestLogs(unittest.TestCase):
    def tearDown(self):
        logger = logging.getLogger("mcloop")
        logger.handlers.clear()
        logger.setLevel(logging.NOTSET)
        logger.propagate = True

    @parameterized.expand([
        ("unset", None, DEFAULT_LEVEL, True),
        ("blank", "  ", DEFAULT_LEVEL, True),
        ("lower_case", "debug", "DEBUG", True),
        ("unknown", "LOUD", DEFAULT_LEVEL, False),
    ])
    def test_resolve_level(self, _, value, name, valid):
        self.assertEqual(resolve_level(value), (name, valid))

    def test_single_handler(self):
        configure_logging("INFO")
        configure_logging("DEBUG")
        logger = logging.getLogger("mcloop")
        self.assertEqual(len(logger.handlers), 1)
        self.assertEqual(logger.level, logging.DEBUG)
        self.assertFalse(logger.propagate)

    def test_environment_level(self):
        with mock.patch.dict(os.environ, {"MCLOOP_LOG": "error"}):
            self.assertEqual(configure_logging(), logging.ERROR)

    def test_unknown_level_warns(self):
        with self.assertLogs("mcloop", level="WARNING") as logs:
            self.assertEqual(configure_logging("LOUD"), logging.WARNING)
        self.assertIn("LOUD", logs.output[0])


class TestFiles(unittest.TestCase):
    def setUp(self):
        self.output_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.output_dir)

    def test_np_encoder(self):
        data = {"i": np.int64(3), "f": np.float32(0.5), "b": np.bool_(True), "z": 1 + 2j, "a": np.arange(3)}
        decoded = json.loads(json.dumps(data, cls=NpEncoder))
        self.assertEqual(decoded, {"i": 3, "f": 0.5, "b": True, "z": {"re": 1.0, "im": 2.0}, "a": [0, 1, 2]})

    def test_json_is_written_in_place(self):
        path = write_json_atomic({"x": np.float64(0.1)}, os.path.join(self.output_dir, "nested", "a.json"))
        with open(path) as handle:
            self.assertEqual(json.load(handle), {"x": 0.1})
        self.assertEqual(os.listdir(os.path.dirname(path)), ["a.json"])

    def test_csv_keeps_full_precision(self):
        value = 0.1 + 0.2
        path = write_csv_atomic(pd.DataFrame({"x": [value]}), os.path.join(self.output_dir, "a.csv"))
        self.assertEqual(pd.read_csv(path, float_precision="round_trip")["x"][0], value)

    def test_failed_write_leaves_no_file(self):
        path = os.path.join(self.output_dir, "bad.json")
        with self.assertRaises(TypeError):
            write_json_atomic({"x": object()}, path)
        self.assertEqual(os.listdir(self.output_dir), [])


class TestPrivate(unittest.TestCase):
    def test_marks_object(self):
        @private
        def helper():
            return 1

        self.assertTrue(helper.__private_api__)
        self.assertEqual(helper(), 1)

    def test_stamp_omega_names_frequency(self):
        def tf(s):
            raise DenominatorUnderflow("pole")

        with self.assertRaises(DenominatorUnderflow) as ctx:
            stamp_omega(tf)(ComplexFreq(0.25))
        self.assertEqual(ctx.exception.omega, 0.25)

    def test_stamp_omega_keeps_existing_frequency(self):
        def tf(s):
            raise DenominatorUnderflow("pole", omega=3.0)

        with self.assertRaises(DenominatorUnderflow) as ctx:
            stamp_omega(tf)(ComplexFreq(0.25))
        self.assertEqual(ctx.exception.omega, 3.0)

    def test_stamp_omega_skips_vector_frequencies(self):
        def tf(s):
            raise DenominatorUnderflow("pole")

        with self.assertRaises(DenominatorUnderflow) as ctx:
            stamp_omega(tf)(ComplexFreq(np.array([0.1, 0.2])))
        self.assertIsNone(ctx.exception.omega)


if __name__ == "__main__":
    unittest.main()
