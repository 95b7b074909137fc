"""Panel CSV, run-config and truth-sidecar formats.

Panel CSV: header ``t,series_1,...,series_n`` then one row per period.
Config: flat ``key = value`` lines; ``#`` starts a comment.
Floats are written with ``repr`` so they round-trip exactly.
"""
import csv
import io
import json
import math
import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .dgp import ModelConfig
from .errors import ConfigurationError, ValidationError

TRUTH_SUFFIX = ".truth.json"


class PanelFormatError(ValidationError):
    """Malformed panel CSV; ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


_UMASK = os.umask(0)
os.umask(_UMASK)


@contextmanager
def atomic_write(path, newline=None):
    """Write to a temporary file next to ``path`` and rename over it on success."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        os.chmod(tmp, 0o666 & ~_UMASK)  # mkstemp creates 0600
        with os.fdopen(fd, "w", newline=newline) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x):
    return repr(float(x))


def write_matrix_csv(path, header, index, matrix):
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    with atomic_write(path, newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for label, row in zip(index, matrix):
            writer.writerow([label] + [_fmt(v) for v in row])


def write_panel_csv(path, data, t_index=None):
    data = np.asarray(data, dtype=float)
    T, n = data.shape
    if t_index is None:
        t_index = range(T)
    header = ["t"] + [f"series_{i + 1}" for i in range(n)]
    write_matrix_csv(path, header, t_index, data)


def read_panel_csv(path):
    """Return ``(t_index, data)``; raises PanelFormatError with the location."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PanelFormatError("file is empty", line=1) from None
        header = [h.strip() for h in header]
        if not header or header[0] != "t":
            raise PanelFormatError("header must start with 't'", line=1, column=1)
        if len(header) < 2:
            raise PanelFormatError("header names no series", line=1)
        width = len(header)
        t_index, rows = [], []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != width:
                raise PanelFormatError(f"expected {width} fields, found {len(row)}",
                                       line=line_no)
            values = []
            for col, cell in enumerate(row, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise PanelFormatError(f"non-numeric value {cell!r}",
                                           line=line_no, column=col) from None
                if not math.isfinite(v):
                    raise PanelFormatError(f"non-finite value {cell!r}",
                                           line=line_no, column=col)
                values.append(v)
            t_index.append(row[0].strip())
            rows.append(values[1:])
    if not rows:
        raise PanelFormatError("no data rows", line=2)
    return t_index, np.array(rows, dtype=float)


# -- config files ---------------------------------------------------------------

def _int(v):
    return int(v)


def _float(v):
    return float(v)


def _float_list(v):
    return tuple(float(x) for x in v.split(",") if x.strip())


def _int_list(v):
    return tuple(int(x) for x in v.split(",") if x.strip())


def _bool(v):
    low = v.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _str_list(v):
    return tuple(x.strip() for x in v.split(",") if x.strip())


MODEL_KEYS = {
    "r": _int,
    "n_max": _int,
    "loading_half_widths": _float_list,
    "idio_rho": _float,
    "idio_sigma": _float,
    "seed": _int,
}
RUN_KEYS = {
    "n_values": _int_list,
    "replications": _int,
    "theorem1_t": _int,
    "theorem3_fixed_t": _int,
    "theorem3_floor_t": _int,
    "theorem3_floor_n_values": _int_list,
    "lemma2_n_values": _int_list,
    "lemma2_t_values": _int_list,
    "unit_indices": _int_list,
    "workers": _int,
    "metrics": _str_list,
    "out": str,
    "demean": _bool,
}


@dataclass
class RunConfig:
    model: ModelConfig
    options: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.options.get(key, default)


def parse_config_text(text, source="<config>"):
    values = {}
    for line_no, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{line_no}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        parser = MODEL_KEYS.get(key) or RUN_KEYS.get(key)
        if parser is None:
            known = ", ".join(sorted({**MODEL_KEYS, **RUN_KEYS}))
            raise ConfigurationError(f"{source}:{line_no}: unknown key {key!r} (known: {known})")
        if key in values:
            raise ConfigurationError(f"{source}:{line_no}: duplicate key {key!r}")
        try:
            values[key] = parser(value)
        except ValueError as exc:
            raise ConfigurationError(f"{source}:{line_no}: bad value for {key!r}: {exc}") from None
    missing = [k for k in ("r", "n_max", "loading_half_widths") if k not in values]
    if missing:
        raise ConfigurationError(f"{source}: missing required keys {missing}")
    model = ModelConfig(**{k: values[k] for k in MODEL_KEYS if k in values})
    options = {k: values[k] for k in RUN_KEYS if k in values}
    return RunConfig(model=model, options=options)


def read_config(path):
    with open(path) as fh:
        return parse_config_text(fh.read(), source=os.fspath(path))


def format_config(model):
    widths = ",".join(_fmt(w) for w in model.loading_half_widths)
    return (f"r = {model.r}\nn_max = {model.n_max}\nloading_half_widths = {widths}\n"
            f"idio_rho = {_fmt(model.idio_rho)}\nidio_sigma = {_fmt(model.idio_sigma)}\n"
            f"seed = {model.seed}\n")


# -- truth sidecar ----------------------------------------------------------

def truth_path(panel_path):
    return os.fspath(panel_path) + TRUTH_SUFFIX


def write_truth(path, model, replicate, factors, loadings, limits):
    payload = {
        "config": {
            "r": model.r, "n_max": model.n_max,
            "loading_half_widths": list(model.loading_half_widths),
            "idio_rho": model.idio_rho, "idio_sigma": model.idio_sigma, "seed": model.seed,
        },
        "replicate": int(replicate),
        "factors": np.asarray(factors).tolist(),
        "loadings": np.asarray(loadings).tolist(),
        "f_infinity": np.asarray(limits.f_infinity).tolist(),
        "lambda_infinity": np.asarray(limits.lambda_infinity).tolist(),
        "p_lambda": np.asarray(limits.p_lambda).tolist(),
        "d_lambda": np.asarray(limits.d_lambda).tolist(),
    }
    with atomic_write(path) as fh:
        json.dump(payload, fh)
        fh.write("\n")


def read_truth(path):
    with open(path) as fh:
        payload = json.load(fh)
    out = {k: np.asarray(v, dtype=float) for k, v in payload.items()
           if k not in ("config", "replicate")}
    out["config"] = ModelConfig(**payload["config"])
    out["replicate"] = payload["replicate"]
    return out
