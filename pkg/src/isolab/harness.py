"""Command-line driver: construction runs, convergence sweeps, and
verification of stored operators, with deterministic machine-readable
reports."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .constructions import (certificate_evaluate, prepare_space,
                            standard_f_basis, theorem1_construct,
                            theorem2_construct, Certificate)
from .errors import IsolabError, UsageError
from .generators import expansive_generator
from .operators import ScalarOperator, defect_form, read_operator, DenseOperator

CSV_HEADER = ("n", "epsilon", "norm_T", "bound_theoretical", "bound_measured",
              "defect_max", "expansivity_min", "orthogonality_max", "wall_ms")

#: threshold on the normalized order-2 defect for a row to count as passed
DEFECT_THRESHOLD = 1e-8


@dataclass
class RunConfig:
    command: str
    dim_h: int | None = None
    dim_f: int | None = None
    n_list: list = field(default_factory=list)
    family: str = "scalar:2"
    seed: int = 0
    capacity: int | None = None
    tol_build: float = 1e-12
    tol_verify: float = 1e-9
    samples: int = 100
    out: str | None = None
    format: str = "csv"
    input_path: str | None = None


@dataclass
class SweepRow:
    n: int
    epsilon: float
    norm_T: float
    bound_theoretical: float
    bound_measured: float
    defect_max: float
    expansivity_min: float
    orthogonality_max: float
    wall_ms: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        if self.error is not None:
            return False
        return (self.bound_measured <= self.bound_theoretical * (1 + 1e-9)
                and self.defect_max <= DEFECT_THRESHOLD)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="isolab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--dim-h", type=int, default=None)
        p.add_argument("--dim-f", type=int, default=None)
        p.add_argument("--n", type=str, default=None,
                       help="comma-separated sweep list, e.g. 2,4,8")
        p.add_argument("--family", type=str, default=None,
                       help="scalar:<t> | diag:<d1,d2,...> | svd-random | id-plus-psd")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--capacity", type=int, default=None)
        p.add_argument("--tol-build", type=float, default=None)
        p.add_argument("--tol-verify", type=float, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=("csv", "report"), default=None)
        p.add_argument("--config", type=str, default=None)

    for name in ("theorem1", "theorem2", "sweep"):
        common(sub.add_parser(name))
    verify = sub.add_parser("verify")
    common(verify)
    verify.add_argument("--input", type=str, default=None)
    return parser


_CONFIG_KEYS = {"dim_h", "dim_f", "n", "family", "seed", "capacity",
                "tol_build", "tol_verify", "samples", "out", "format", "input"}


def parse_config(argv) -> RunConfig:
    """Parse CLI flags plus an optional JSON config file.

    Flags given on the command line override file values; unknown config
    keys are rejected.  Raises UsageError on any bad input.
    """
    ns = _build_parser().parse_args(argv)
    merged = {}
    if getattr(ns, "config", None):
        try:
            with open(ns.config, encoding="utf-8") as fh:
                filecfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--config: {exc}") from exc
        unknown = set(filecfg) - _CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(filecfg)
    for key in _CONFIG_KEYS:
        cli = getattr(ns, key if key != "input" else "input", None)
        if cli is not None:
            merged[key] = cli

    cfg = RunConfig(command=ns.command)
    if merged.get("n") is not None:
        try:
            cfg.n_list = [int(v) for v in str(merged["n"]).split(",") if v]
        except ValueError as exc:
            raise UsageError(f"--n: {exc}") from exc
        if any(v < 1 for v in cfg.n_list):
            raise UsageError("--n: entries must be positive")
    for attr, key in (("dim_h", "dim_h"), ("dim_f", "dim_f"), ("seed", "seed"),
                      ("capacity", "capacity"), ("tol_build", "tol_build"),
                      ("tol_verify", "tol_verify"), ("samples", "samples"),
                      ("out", "out"), ("format", "format"),
                      ("family", "family"), ("input_path", "input")):
        if merged.get(key) is not None:
            setattr(cfg, attr, merged[key])

    if cfg.command in ("theorem1", "theorem2"):
        if cfg.dim_f is None:
            raise UsageError("--dim-f is required")
        cfg.n_list = [cfg.dim_f]
    if cfg.command == "sweep" and not cfg.n_list:
        raise UsageError("--n is required for sweep")
    if cfg.command == "verify":
        if cfg.input_path is None:
            raise UsageError("--input is required for verify")
        return cfg

    if cfg.dim_h is None:
        cfg.dim_h = max(cfg.n_list)
    if max(cfg.n_list) > cfg.dim_h:
        raise UsageError(f"--dim-f: dim(F)={max(cfg.n_list)} exceeds "
                         f"--dim-h={cfg.dim_h}")
    if cfg.tol_build <= 0 or cfg.tol_verify <= 0:
        raise UsageError("--tol-build/--tol-verify must be positive")
    return cfg


def _family_operator(cfg: RunConfig) -> DenseOperator:
    spec = cfg.family
    if spec.startswith("scalar:"):
        return expansive_generator(cfg.dim_h, "scalar", scale=float(spec[7:]))
    if spec.startswith("diag:"):
        entries = [float(v) for v in spec[5:].split(",") if v]
        if not entries:
            raise UsageError("--family diag: needs entries")
        # tile prescribed entries cyclically to fill dim(H)
        tiled = [entries[i % len(entries)] for i in range(cfg.dim_h)]
        return expansive_generator(cfg.dim_h, "diagonal", diag=tiled)
    if spec == "svd-random":
        return expansive_generator(cfg.dim_h, "svd_random", seed=cfg.seed)
    if spec == "id-plus-psd":
        return expansive_generator(cfg.dim_h, "id_plus_psd", seed=cfg.seed)
    raise UsageError(f"--family: unknown spec {spec!r}")


def _certificate_row(cert: Certificate, wall_ms: float) -> SweepRow:
    return SweepRow(n=cert.n, epsilon=cert.epsilon,
                    norm_T=cert.operator_norm_T,
                    bound_theoretical=cert.bound_theoretical,
                    bound_measured=cert.bound_measured,
                    defect_max=cert.defect_report.normalized,
                    expansivity_min=cert.expansivity_min,
                    orthogonality_max=cert.orthogonality_max,
                    wall_ms=wall_ms)


def run_theorem1(cfg: RunConfig, n: int) -> SweepRow:
    start = time.perf_counter()
    space = prepare_space(cfg.dim_h, cfg.capacity)
    f_basis = standard_f_basis(space, n)
    block, trace = theorem1_construct(f_basis, space)
    cert = certificate_evaluate(ScalarOperator(2.0), block, trace, f_basis,
                                cfg.samples, operator_norm_T=2.0,
                                bound_theoretical=1.0 / n, seed=cfg.seed)
    return _certificate_row(cert, 1e3 * (time.perf_counter() - start))


def run_theorem2(cfg: RunConfig, n: int) -> SweepRow:
    start = time.perf_counter()
    T = _family_operator(cfg)
    space = prepare_space(cfg.dim_h, cfg.capacity)
    f_basis = standard_f_basis(space, n)
    block, T4, trace = theorem2_construct(T, f_basis, space)
    norm_T = T.operator_norm
    cert = certificate_evaluate(T4, block, trace, f_basis, cfg.samples,
                                operator_norm_T=norm_T,
                                bound_theoretical=(norm_T + 1.0) / n,
                                seed=cfg.seed)
    return _certificate_row(cert, 1e3 * (time.perf_counter() - start))


def run_sweep(cfg: RunConfig):
    """One SweepRow per n, increasing; failed rows carry an error marker."""
    runner = run_theorem1 if cfg.command == "theorem1" else run_theorem2
    rows = []
    for n in sorted(cfg.n_list):
        try:
            rows.append(runner(cfg, n))
        except IsolabError as exc:
            rows.append(SweepRow(n=n, epsilon=1.0 / n, norm_T=np.nan,
                                 bound_theoretical=np.nan, bound_measured=np.nan,
                                 defect_max=np.nan, expansivity_min=np.nan,
                                 orthogonality_max=np.nan, wall_ms=np.nan,
                                 error=str(exc)))
    return rows


def _fmt(value) -> str:
    return f"{value:.17g}"


def emit_report(rows, fmt: str, path: str | None) -> str:
    """Serialize sweep rows as CSV or a field-per-line text report.

    Returns the serialized text; writes it to `path` when given.
    """
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([row.n] + [_fmt(getattr(row, k))
                                       for k in CSV_HEADER[1:]])
    else:
        for row in rows:
            buf.write(f"run n={row.n}\n")
            for key in CSV_HEADER[1:]:
                buf.write(f"  {key}: {_fmt(getattr(row, key))}\n")
            if row.error is not None:
                buf.write(f"  error: {row.error}\n")
    text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def read_sweep_csv(text: str):
    """Parse a CSV report back into SweepRow objects (round-trip fidelity)."""
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected header {header}")
    rows = []
    for record in reader:
        values = [int(record[0])] + [float(v) for v in record[1:]]
        rows.append(SweepRow(*values))
    return rows


def run_verify(cfg: RunConfig, stream=sys.stdout) -> int:
    """Defect (orders 1-3) and expansivity suites on a stored operator.

    Exit status 0 iff the operator is certified expansive at tol_verify;
    the m-isometry verdicts are informational.
    """
    matrix = read_operator(cfg.input_path)
    op = DenseOperator(matrix)
    rng = np.random.default_rng(cfg.seed)
    dim = op.dim
    scale = max(1.0, op.operator_norm ** 2)
    for m in (1, 2, 3):
        worst = 0.0
        for _ in range(cfg.samples):
            x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            x /= np.linalg.norm(x)
            worst = max(worst, abs(defect_form(op, x, m)))
        verdict = "yes" if worst <= cfg.tol_verify * scale ** m else "no"
        stream.write(f"defect order {m}: max |d_{m}| = {_fmt(worst)} "
                     f"({m}-isometry: {verdict})\n")
    smin = float(np.linalg.svd(matrix, compute_uv=False).min())
    expansive = smin >= 1.0 - cfg.tol_verify
    stream.write(f"sigma_min: {_fmt(smin)} "
                 f"(expansive: {'yes' if expansive else 'no'})\n")
    return 0 if expansive else 1


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        if cfg.command == "verify":
            return run_verify(cfg)
        rows = run_sweep(cfg)
        text = emit_report(rows, cfg.format, cfg.out)
        if not cfg.out:
            sys.stdout.write(text)
        return 0 if all(row.ok for row in rows) else 1
    except IsolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
