"""CSV datasets and the JSON model document.

Floats are always written with 17 significant digits, so values survive a
write/read cycle bit for bit and repeated fits produce identical files.
"""
import csv
import json
import math
import os
import tempfile

import numpy as np

from .core import EmTrace, ForecaConfig, ForecaModel
from .errors import InputError
from .spectrum import MIN_WOSA_LENGTH, WosaConfig
from .whitening import WhiteningTransform

SCHEMA_VERSION = 1
MODEL_FORMAT = "foreca-model"


class DatasetError(InputError):
    """Unreadable or malformed CSV input."""


class ModelFormatError(InputError):
    """Model document does not match the schema."""


def _fmt(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def _emit(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_emit(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if any(isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            items = [f"{pad}  {_emit(v, indent + 1)}" for v in seq]
            return "[\n" + ",\n".join(items) + "\n" + pad + "]"
        return "[" + ", ".join(_emit(v, indent + 1) for v in seq) + "]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_document(doc):
    """JSON text with every float at 17 significant digits."""
    return _emit(doc) + "\n"


def atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- datasets -------------------------------------------------------------

def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_dataset(path, delimiter=",", header=None, min_rows=MIN_WOSA_LENGTH):
    """Read a numeric CSV.

    Parameters
    ----------
    header : bool or None
        ``None`` treats the first row as a header when any cell in it is
        not a number.

    Returns
    -------
    values : ndarray, shape (T, n)
    names : list of str
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh, delimiter=delimiter) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows:
        raise DatasetError(f"{path} is empty")
    if header is None:
        header = not all(_is_number(c) for c in rows[0])
    if header:
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
    else:
        names = [f"V{i + 1}" for i in range(len(rows[0]))]
    width = len(names)
    values = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DatasetError(f"row {i + 1 + int(header)} has {len(row)} fields, expected {width}")
        for j, cell in enumerate(row):
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise DatasetError(f"row {i + 1 + int(header)}, column {names[j]}: {cell!r} is not a number") from None
    if not np.all(np.isfinite(values)):
        raise DatasetError("dataset contains non-finite values")
    if values.shape[0] < min_rows:
        raise DatasetError(f"dataset has {values.shape[0]} rows, need at least {min_rows}")
    return values, names


def select_columns(names, selection):
    """Resolve column names, or 0-based indices that are not themselves names."""
    if not selection:
        return list(range(len(names)))
    out = []
    for token in selection:
        token = str(token).strip()
        if token in names:
            out.append(names.index(token))
        elif token.lstrip("-").isdigit() and 0 <= int(token) < len(names):
            out.append(int(token))
        else:
            raise DatasetError(f"unknown column {token!r}")
    return out


def format_csv(header, rows, delimiter=","):
    lines = [delimiter.join(header)]
    for row in rows:
        lines.append(delimiter.join(_fmt(x) if isinstance(x, (float, np.floating)) else str(x) for x in row))
    return "\n".join(lines) + "\n"


# --- model documents ------------------------------------------------------

_TOP_KEYS = {
    "format", "schema_version", "n", "n_components", "columns", "loadings_whitened",
    "loadings_original", "omega", "lambda_min", "traces", "whitener", "wosa_config",
    "restarts", "restarts_used", "tol", "max_iter", "seed", "rcond_tol",
}
_TRACE_KEYS = {"objective_values", "bounds", "iterations", "converged", "final_gap"}
_WHITENER_KEYS = {"mean", "covariance", "inv_sqrt_cov", "rcond"}
_WOSA_KEYS = {"segment_length", "overlap"}


def model_to_document(model):
    cfg = model.config
    return {
        "format": MODEL_FORMAT,
        "schema_version": SCHEMA_VERSION,
        "n": model.n,
        "n_components": model.n_components,
        "columns": list(model.columns) if model.columns is not None else None,
        "loadings_whitened": model.loadings_whitened,
        "loadings_original": model.loadings_original,
        "omega": model.omega,
        "lambda_min": model.lambda_min,
        "traces": [
            {
                "objective_values": [float(v) for v in t.objective_values],
                "bounds": [float(v) for v in t.bounds],
                "iterations": t.iterations,
                "converged": t.converged,
                "final_gap": t.final_gap,
            }
            for t in model.traces
        ],
        "whitener": {
            "mean": model.whitener.mean,
            "covariance": model.whitener.covariance,
            "inv_sqrt_cov": model.whitener.inv_sqrt_cov,
            "rcond": model.whitener.rcond,
        },
        "wosa_config": {"segment_length": model.segment_length, "overlap": cfg.wosa.overlap},
        "restarts": cfg.n_restarts,
        "restarts_used": model.restarts_used,
        "tol": cfg.tol,
        "max_iter": cfg.max_iter,
        "seed": cfg.seed,
        "rcond_tol": cfg.rcond_tol,
    }


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{where} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ModelFormatError(f"unknown field(s) in {where}: {sorted(unknown)}")
    missing = allowed - set(obj)
    if missing:
        raise ModelFormatError(f"missing field(s) in {where}: {sorted(missing)}")


def _matrix(value, shape, name):
    try:
        a = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ModelFormatError(f"{name} is not numeric") from None
    if a.shape != shape:
        raise ModelFormatError(f"{name} has shape {a.shape}, expected {shape}")
    return a


def model_from_document(doc):
    _check_keys(doc, _TOP_KEYS, "model")
    if doc["format"] != MODEL_FORMAT:
        raise ModelFormatError(f"not a model document (format {doc['format']!r})")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ModelFormatError(f"unsupported schema version {doc['schema_version']!r}")
    n, K = doc["n"], doc["n_components"]
    if not (isinstance(n, int) and isinstance(K, int) and 1 <= K <= n):
        raise ModelFormatError("n and n_components must be integers with 1 <= n_components <= n")
    w = doc["whitener"]
    _check_keys(w, _WHITENER_KEYS, "whitener")
    wc = doc["wosa_config"]
    _check_keys(wc, _WOSA_KEYS, "wosa_config")
    traces = []
    for i, t in enumerate(doc["traces"]):
        _check_keys(t, _TRACE_KEYS, f"traces[{i}]")
        traces.append(EmTrace(list(t["objective_values"]), list(t["bounds"]), t["iterations"],
                              t["converged"], t["final_gap"]))
    if len(traces) != K:
        raise ModelFormatError(f"expected {K} traces, got {len(traces)}")
    columns = doc["columns"]
    if columns is not None and len(columns) != n:
        raise ModelFormatError(f"expected {n} column names, got {len(columns)}")
    try:
        config = ForecaConfig(
            n_restarts=doc["restarts"], tol=doc["tol"], max_iter=doc["max_iter"], seed=doc["seed"],
            wosa=WosaConfig(wc["segment_length"], wc["overlap"]), rcond_tol=doc["rcond_tol"],
        )
    except InputError as exc:
        raise ModelFormatError(f"invalid configuration: {exc}") from exc
    return ForecaModel(
        loadings_whitened=_matrix(doc["loadings_whitened"], (K, n), "loadings_whitened"),
        loadings_original=_matrix(doc["loadings_original"], (K, n), "loadings_original"),
        omega=_matrix(doc["omega"], (K,), "omega"),
        lambda_min=_matrix(doc["lambda_min"], (K,), "lambda_min"),
        traces=tuple(traces),
        whitener=WhiteningTransform(
            _matrix(w["mean"], (n,), "whitener.mean"),
            _matrix(w["covariance"], (n, n), "whitener.covariance"),
            _matrix(w["inv_sqrt_cov"], (n, n), "whitener.inv_sqrt_cov"),
            float(w["rcond"]),
        ),
        config=config,
        segment_length=wc["segment_length"],
        restarts_used=doc["restarts_used"],
        columns=tuple(columns) if columns is not None else None,
    )


def save_model(model, path):
    atomic_write(path, dumps_document(model_to_document(model)))


def load_model(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ModelFormatError(f"cannot read model {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model {path} is not valid JSON: {exc}") from exc
    return model_from_document(doc)
