import json
import os
import tempfile

import numpy as np
import pandas as pd


class NpEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, (complex, np.complexfloating)):
            return {"re": float(obj.real), "im": float(obj.imag)}
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return super(NpEncoder, self).default(obj)


def _write_atomic(path: str, write) -> str:
    """Write through a temporary file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".mcloop-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            write(handle)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return path


def write_csv_atomic(df: pd.DataFrame, path: str) -> str:
    """CSV with '.' decimals and 17 significant digits, enough to round-trip doubles."""
    return _write_atomic(path, lambda handle: df.to_csv(handle, index=False, float_format="%.17g", lineterminator="\n"))


def write_json_atomic(data, path: str) -> str:
    def write(handle):
        json.dump(data, handle, cls=NpEncoder, indent=2, sort_keys=False)
        handle.write("\n")
    return _write_atomic(path, write)
