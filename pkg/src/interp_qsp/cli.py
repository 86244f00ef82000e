"""Command-line experiment runner.

    interp-qsp run --config experiment.json
    interp-qsp table --function exp_it_cos --d 8,16,32 --param t=5

A config is one flat JSON object::

    {"suite": "qsp-verify", "function": "laurent_test", "params": {"degree": 3},
     "d_list": [4], "seeds": 3, "matrix_dim": 2, "matrix_seed": 0,
     "output": "qsp.csv"}

All randomness comes from ``numpy.random.default_rng`` (PCG64) seeded with
``matrix_seed + i`` for the ``i``-th seed. Relative output paths resolve
against ``$INTERP_QSP_OUTPUT_DIR`` (default: the working directory).

Exit codes: 0 all contracts pass, 1 a contract failed, 2 malformed config,
3 unknown function, 4 unsupported suite/function combination.
"""
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

from . import analysis
from .encoding import build_diagonal_encoding
from .errors import InvalidInputError, OutOfRegimeError, UnknownFunctionError
from .functions import (
    CATALOG_NAMES,
    SupNormGrid,
    catalog_function,
    catalog_interval_function,
    is_interval_function,
)
from .interpolation import averaged_interpolant_fd, evaluate_laurent
from .numerics import (
    matrix_function_oracle,
    operator_norm,
    random_hermitian,
    random_matrix,
    random_unitary,
)
from .qsp import assemble_qsp_block_encoding
from .transforms import (
    SingularValueProblem,
    fhm_block_encode,
    qsvt,
    self_inverse_block_encoding,
    svd_oracle,
)

OUTPUT_DIR_ENV = "INTERP_QSP_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONTRACT_FAILED = 1
EXIT_MALFORMED = 2
EXIT_UNKNOWN_FUNCTION = 3
EXIT_UNSUPPORTED = 4

SUITES = ("qsp-verify", "fhm", "qsvt", "scaling", "hamsim", "approx-table")
DEFAULT_ATOL = {"hamsim": 0.0}
SUITE_MATRIX_KIND = {
    "qsp-verify": "unitary", "fhm": "hermitian", "hamsim": "hermitian", "qsvt": "general",
}
BASE_COLUMNS = [
    "function", "params", "d", "seed", "measured_error", "UB_d", "jackson_bound", "budget", "pass",
]
EXTRA_COLUMNS = {
    "qsp-verify": ["fd_identity_error", "ledger"],
    "approx-table": ["ratio", "chebyshev_truncation_error"],
}


class ConfigError(Exception):
    exit_code = EXIT_MALFORMED


class UnsupportedCombination(ConfigError):
    exit_code = EXIT_UNSUPPORTED


class UnknownFunction(ConfigError):
    exit_code = EXIT_UNKNOWN_FUNCTION


@dataclass
class ExperimentConfig:
    suite: str
    function: str
    params: dict = field(default_factory=dict)
    d_list: list = field(default_factory=lambda: [4])
    seeds: int = 1
    matrix_dim: int = 2
    matrix_rows: int = 2
    matrix_cols: int = 2
    matrix_seed: int = 0
    matrix_kind: str = ""
    matrix_norm: float = 0.0
    output: str = ""
    grid: int = 2**14
    atol: float = None
    format: str = "csv"

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("suite", "function"):
            if key not in data:
                raise ConfigError(f"missing required key {key!r}")
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def validate(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; expected one of {SUITES}")
        if not isinstance(self.params, dict):
            raise ConfigError("params must be an object")
        if not isinstance(self.d_list, list) or not self.d_list:
            raise ConfigError("d_list must be a non-empty list")
        for d in self.d_list:
            if not isinstance(d, int) or isinstance(d, bool) or d < 2 or d & (d - 1):
                raise ConfigError(f"every d must be a power of two >= 2, got {d!r}")
        for key in ("seeds", "matrix_dim", "matrix_rows", "matrix_cols", "matrix_seed", "grid"):
            value = getattr(self, key)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ConfigError(f"{key} must be a nonnegative integer")
        if self.seeds < 1:
            raise ConfigError("seeds must be at least 1")
        if self.atol is not None and (
            not isinstance(self.atol, (int, float)) or isinstance(self.atol, bool) or self.atol < 0
        ):
            raise ConfigError("atol must be a nonnegative number")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.function not in CATALOG_NAMES:
            raise UnknownFunction(f"unknown function {self.function!r}")
        try:
            catalog_function(self.function, self.params)
        except UnknownFunctionError as exc:
            raise UnknownFunction(str(exc)) from exc
        except InvalidInputError as exc:
            raise ConfigError(str(exc)) from exc
        self._validate_combination()

    def _validate_combination(self):
        kind = SUITE_MATRIX_KIND.get(self.suite)
        if self.matrix_kind and self.matrix_kind != kind:
            raise UnsupportedCombination(
                f"{self.suite} draws {kind or 'no'} matrices, not {self.matrix_kind!r}"
            )
        interval = is_interval_function(self.function)
        if self.suite in ("fhm", "qsvt") and not interval:
            raise UnsupportedCombination(f"{self.suite} needs a function on [-1, 1]")
        if self.suite == "hamsim":
            if self.function != "exp_it_cos":
                raise UnsupportedCombination("hamsim requires exp_it_cos")
            t = catalog_interval_function(self.function, self.params).params["t"]
            for d in self.d_list:
                if d < abs(t) - 1:
                    raise UnsupportedCombination(f"hamsim bound needs d >= |t| - 1 (d={d})")
        if self.suite == "scaling" and self.function != "abs_power_c":
            raise UnsupportedCombination("scaling requires abs_power_c")
        if self.suite == "scaling":
            c = catalog_interval_function(self.function, self.params).params["c"]
            if c == int(c):
                raise UnsupportedCombination("scaling requires a non-integer c")
        if self.suite == "qsvt":
            g = catalog_interval_function(self.function, self.params)
            if g.parity is None:
                raise UnsupportedCombination("qsvt requires a function of definite parity")
            if max(self.matrix_rows, self.matrix_cols) > 4 or min(self.matrix_rows, self.matrix_cols) < 1:
                raise ConfigError("qsvt matrix dimensions must be between 1 and 4")
        if self.suite in ("qsp-verify", "fhm", "hamsim"):
            if self.matrix_dim < 1 or self.matrix_dim & (self.matrix_dim - 1) or self.matrix_dim > 8:
                raise ConfigError("matrix_dim must be a power of two between 1 and 8")

    @property
    def tolerance(self):
        if self.atol is not None:
            return float(self.atol)
        return DEFAULT_ATOL.get(self.suite, 1e-8)


def load_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return ExperimentConfig.from_dict(data)


def _params_str(params):
    return ";".join(f"{k}={params[k]}" for k in sorted(params))


def _jackson0(f, d):
    return analysis.jackson_bound(f, 0, d).value


def _row(cfg, f, d, seed, measured, ub, budget, **extra):
    row = {
        "function": cfg.function,
        "params": _params_str(f.params),
        "d": d,
        "seed": seed,
        "measured_error": measured,
        "UB_d": ub,
        "jackson_bound": _jackson0(f, d) if isinstance(d, int) else "",
        "budget": budget,
        "pass": bool(measured <= budget),
    }
    row.update(extra)
    return row


def _cells(cfg):
    for d in sorted(cfg.d_list):
        for i in range(cfg.seeds):
            seed = cfg.matrix_seed + i
            yield d, seed, np.random.default_rng(seed)


def _suite_qsp_verify(cfg):
    f = catalog_function(cfg.function, cfg.params)
    rows = []
    for d, seed, rng in _cells(cfg):
        m = d.bit_length() - 1
        U = random_unitary(cfg.matrix_dim, rng)
        be, ledger = assemble_qsp_block_encoding(U, build_diagonal_encoding(f, m))
        block = be.block()
        fd = averaged_interpolant_fd(f, d)
        identity = operator_norm(
            block - matrix_function_oracle(U, lambda z: evaluate_laurent(fd, z, check=False))
        )
        measured = operator_norm(block - matrix_function_oracle(U, f))
        ub = analysis.fourier_truncation_upper_bound(f, d).upper
        budget = analysis.NEAR_BEST_FACTOR * ub + cfg.tolerance
        ledger_ok = ledger.as_tuple() == (4 * d - 1, 4 * d - 1, 1)
        row = _row(cfg, f, d, seed, measured, ub, budget,
                   fd_identity_error=identity, ledger="/".join(map(str, ledger.as_tuple())))
        row["pass"] = row["pass"] and identity <= 1e-9 and ledger_ok
        rows.append(row)
    return rows


def _suite_fhm(cfg, budget_fn=None):
    g = catalog_interval_function(cfg.function, cfg.params)
    f = catalog_function(cfg.function, cfg.params)
    norm = cfg.matrix_norm or 0.9
    rows = []
    for d, seed, rng in _cells(cfg):
        H = random_hermitian(cfg.matrix_dim, rng, norm)
        be, _ = fhm_block_encode(self_inverse_block_encoding(H), g, d)
        measured = operator_norm(be.block() - matrix_function_oracle(H, g))
        ub = analysis.fourier_truncation_upper_bound(f, d).upper
        if budget_fn is None:
            budget = analysis.NEAR_BEST_FACTOR * ub + cfg.tolerance
        else:
            budget = budget_fn(d) + cfg.tolerance
        rows.append(_row(cfg, f, d, seed, measured, ub, budget))
    return rows


def _suite_hamsim(cfg):
    t = catalog_interval_function(cfg.function, cfg.params).params["t"]
    return _suite_fhm(cfg, lambda d: analysis.hamiltonian_simulation_budget(t, d))


def _suite_qsvt(cfg):
    g = catalog_interval_function(cfg.function, cfg.params)
    f = catalog_function(cfg.function, cfg.params)
    norm = cfg.matrix_norm or 0.8
    rows = []
    for d, seed, rng in _cells(cfg):
        A = random_matrix(cfg.matrix_rows, cfg.matrix_cols, rng, norm)
        result = qsvt(SingularValueProblem(A, g.parity, g), d)
        measured = operator_norm(result.output - svd_oracle(A, g, g.parity))
        ub = analysis.fourier_truncation_upper_bound(f, d).upper
        budget = analysis.NEAR_BEST_FACTOR * ub + cfg.tolerance
        rows.append(_row(cfg, f, d, seed, measured, ub, budget))
    return rows


def _suite_scaling(cfg):
    f = catalog_function(cfg.function, cfg.params)
    c = f.params["c"]
    fit = analysis.abs_power_scaling_experiment(c, cfg.d_list, grid_points=max(cfg.grid, 2**15))
    rows = []
    for d, err in zip(fit.d_values, fit.errors):
        ub = analysis.fourier_truncation_upper_bound(f, d).upper
        rows.append(_row(cfg, f, d, "", err, ub, analysis.NEAR_BEST_FACTOR * ub + 1e-9))
    rows.append({
        "function": cfg.function, "params": _params_str(f.params), "d": "fit", "seed": "",
        "measured_error": fit.slope, "UB_d": "", "jackson_bound": "", "budget": -c + 0.3,
        "pass": fit.passes,
    })
    return rows


def _suite_approx_table(cfg):
    f = catalog_function(cfg.function, cfg.params)
    rows = []
    for r in analysis.approx_table(f, sorted(cfg.d_list), cfg.grid):
        row = _row(cfg, f, r.d, "", r.interp_error, r.ub, r.budget,
                   ratio=r.ratio, chebyshev_truncation_error=r.chebyshev_truncation_error)
        row["pass"] = bool(r.ratio <= 1 + 1e-6)
        rows.append(row)
    return rows


SUITE_RUNNERS = {
    "qsp-verify": _suite_qsp_verify,
    "fhm": _suite_fhm,
    "qsvt": _suite_qsvt,
    "scaling": _suite_scaling,
    "hamsim": _suite_hamsim,
    "approx-table": _suite_approx_table,
}


def run_suite(cfg):
    """Run one suite; returns ``(rows, summary)``. Writes nothing."""
    rows = SUITE_RUNNERS[cfg.suite](cfg)
    ratios = [
        r["measured_error"] / r["budget"]
        for r in rows
        if isinstance(r["budget"], float) and r["budget"] > 0 and r["d"] != "fit"
    ]
    passed = sum(1 for r in rows if r["pass"])
    summary = {
        "suite": cfg.suite,
        "function": cfg.function,
        "pass_count": passed,
        "fail_count": len(rows) - passed,
        "max_ratio": max(ratios) if ratios else None,
    }
    return rows, summary


def _fmt(value):
    if isinstance(value, bool):
        return "PASS" if value else "FAIL"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c, "")) for c in columns])
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def rows_to_json(rows, columns):
    return json.dumps([{c: _jsonable(r.get(c, "")) for c in columns} for r in rows], indent=2) + "\n"


def resolve_output(path, default_name):
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    p = Path(path) if path else Path(default_name)
    return p if p.is_absolute() else base / p


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


@click.group()
def main():
    """Angle-free QSP verification harness."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out", "out", default=None, help="Rows file (overrides the config).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@click.option("--grid", type=int, default=None, help="Sup-norm grid size.")
def run(config_path, out, fmt, grid):
    """Run the suite described by a JSON config."""
    try:
        cfg = load_config(config_path)
        if grid is not None:
            if grid < 16:
                raise ConfigError("grid must be at least 16")
            cfg.grid = grid
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    fmt = fmt or cfg.format
    rows, summary = run_suite(cfg)
    columns = BASE_COLUMNS + EXTRA_COLUMNS.get(cfg.suite, [])
    target = resolve_output(out or cfg.output, f"{cfg.suite}.{fmt}")
    text = rows_to_csv(rows, columns) if fmt == "csv" else rows_to_json(rows, columns)
    _write(target, text)
    summary["rows_file"] = str(target)
    _write(target.with_suffix(".summary.json"), json.dumps(summary, indent=2) + "\n")
    click.echo(json.dumps(summary))
    sys.exit(EXIT_OK if summary["fail_count"] == 0 else EXIT_CONTRACT_FAILED)


def _parse_params(items):
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        params[key] = value
    return params


def _parse_d_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--d expects comma-separated integers, got {text!r}") from exc
    for d in values:
        if d < 1 or d & (d - 1):
            raise ConfigError(f"every d must be a power of two, got {d}")
    if not values:
        raise ConfigError("--d is empty")
    return values


TABLE_COLUMNS = ["d", "interp_error", "UB_d", "budget", "ratio", "chebyshev_truncation_error"]


def approx_table_rows(function, d_list, params=None, grid=2**14):
    f = catalog_function(function, params)
    return [
        {
            "d": r.d,
            "interp_error": r.interp_error,
            "UB_d": r.ub,
            "budget": r.budget,
            "ratio": r.ratio,
            "chebyshev_truncation_error": r.chebyshev_truncation_error,
        }
        for r in analysis.approx_table(f, d_list, grid)
    ]


@main.command()
@click.option("--function", "function", required=True)
@click.option("--d", "d_text", required=True, help="Comma-separated powers of two.")
@click.option("--param", "param_items", multiple=True, help="key=value, repeatable.")
@click.option("--grid", type=int, default=2**14)
@click.option("--out", "out", default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def table(function, d_text, param_items, grid, out, fmt):
    """Tabulate ||f - f_d||, UB_d and the near-best budget over d."""
    try:
        d_list = _parse_d_list(d_text)
        params = _parse_params(param_items)
        if grid < 16:
            raise ConfigError("grid must be at least 16")
        if function not in CATALOG_NAMES:
            raise UnknownFunction(f"unknown function {function!r}")
        try:
            catalog_function(function, params)
        except InvalidInputError as exc:
            raise ConfigError(str(exc)) from exc
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    rows = approx_table_rows(function, d_list, params, grid)
    text = rows_to_csv(rows, TABLE_COLUMNS) if fmt == "csv" else rows_to_json(rows, TABLE_COLUMNS)
    if out:
        _write(resolve_output(out, out), text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":  # pragma: no cover
    main()
