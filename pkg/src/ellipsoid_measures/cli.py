"""
Command-line front end.

Every sub-command prints one record (JSON by default, CSV with
``--format csv``) and exits with

    0  success
    2  usage or domain error
    3  validation failure (``--validate``) or numerical non-convergence

Validation oracles and tolerances
---------------------------------
surface, ratio      the other evaluation route; |difference| <= 4 standard errors
ratio-bounds        ratio_norm at the extremal q (e_1 and the ball); rel. 1e-9
asymptotics         moment-integral ratio; rel. deviation <= Lindeberg diagnostic
fd                  the other evaluation route (series needs max|x| <= 0.95); rel. 1e-8
ratio-fd            moment-integral ratio; corrected variant rel. 1e-8 (the printed
                    variant's deviation is reported, not gated)
project             singular-value form (form 1 when --form singular); rel. 1e-10
meancurv            balls: closed form, 3 sigma; k=0: surface area, 4 sigma;
                    otherwise containment in the two-sided bounds with 3 sigma slack
bounds              Kubota Monte Carlo inside [lower - 3 sigma, upper + 3 sigma]
ratio-constants     the mode's oracle; rel. 1e-10 (modes evaluating published forms fail)
ledger              every record expected to verify does so
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .core import ConvergenceError, DomainError
from .curvature import RATIO_MODES, CurvatureQuery, curvature_bounds, kubota_mc, mk_ball, mk_ratio
from .lauricella import FdParams, fd_integral, fd_series, ratio_via_fd, SERIES_MAX_X
from .ledger import VERIFIED_TOL, formula_ledger
from .projections import FORMS, SubspaceBasis, projected_volume
from .quadrature import QuadratureConfig
from .sphere import MonteCarloConfig
from .surface import ratio_asymptotic, ratio_bounds, ratio_norm, surface_area

__all__ = ["RunRecord", "run", "main"]

MC_DEFAULT_SAMPLES = 1_000_000
KUBOTA_DEFAULT_SAMPLES = 100_000
SIGMA_MC = 4.0
SIGMA_BOUNDS = 3.0
# relative rounding floor for "within k sigma" when the estimator variance is ~0
SIGMA_FLOOR = 1e-12


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        from . import __version__
        return __version__


@dataclass
class RunRecord:
    """One CLI invocation. Serializes to the flat output schema and back."""

    command: str
    params: dict[str, Any]
    result: dict[str, Any]
    seed: int | None = None
    version: str = field(default_factory=_version)
    wall_time_ms: int = 0

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "params": self.params}
        for key in ("value", "std_error", "method"):
            if key in self.result:
                out[key] = self.result[key]
        if self.seed is not None:
            out["seed"] = self.seed
        for key, val in self.result.items():
            if key not in out:
                out[key] = val
        out["wall_time_ms"] = self.wall_time_ms
        out["version"] = self.version
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunRecord":
        data = dict(data)
        command = data.pop("command")
        params = data.pop("params")
        seed = data.pop("seed", None)
        version = data.pop("version")
        wall = data.pop("wall_time_ms")
        return cls(command, params, data, seed, version, wall)

    def to_json(self) -> str:
        return json.dumps(_clean(self.to_dict()), allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls.from_dict(json.loads(text))


def _clean(obj: Any) -> Any:
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _csv_cell(val: Any) -> str:
    if val is None:
        return ""
    if isinstance(val, bool):
        return str(val).lower()
    if isinstance(val, float):
        return f"{val:.17g}"
    if isinstance(val, (dict, list)):
        return json.dumps(_clean(val), allow_nan=False)
    return str(val)


def _to_csv(rows: list[dict[str, Any]]) -> str:
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(_clean(row.get(k))) for k in header])
    return buf.getvalue()


# ----------------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------------

def _float_list(text: str) -> list[float]:
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _axes_from_file(path: str) -> list[float]:
    vals = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            vals.append(float(line))
    if not vals:
        raise DomainError(f"no values in {path}")
    return vals


def _basis_tokens(text: str) -> list[int]:
    axes = []
    for tok in text.split(","):
        tok = tok.strip()
        if len(tok) < 2 or tok[0] != "e" or not tok[1:].isdigit():
            raise argparse.ArgumentTypeError(f"basis tokens look like e1,e2,...; got {tok!r}")
        axes.append(int(tok[1:]))
    return axes


def _basis_from_file(path: str) -> list[list[float]]:
    text = Path(path).read_text()
    if path.endswith(".json"):
        rows = json.loads(text)
    else:
        rows = [[float(v) for v in line.replace(";", ",").split(",") if v.strip()]
                for line in text.splitlines() if line.strip() and not line.startswith("#")]
    return rows


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--axes", type=_float_list, help="semi-axes, comma separated")
    common.add_argument("--axes-file", help="semi-axes, one per line")
    common.add_argument("--dim", type=int, help="dimension n")
    common.add_argument("--method", help="evaluation method")
    common.add_argument("--samples", type=int, help="Monte Carlo samples")
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--tol", type=float, help="relative tolerance of the deterministic route")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--validate", action="store_true", help="run the oracle and gate on it")
    common.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo")
    common.add_argument("--no-timing", action="store_true",
                        help="report wall_time_ms as 0 (byte-identical reruns)")

    parser = argparse.ArgumentParser(prog="ellipsoid-measures",
                                     description="Ellipsoid surface area, projections and mean curvatures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    add("surface", "surface area of the ellipsoid")
    p = add("ratio", "isoperimetric ratio area/volume")
    p.add_argument("--q", type=_float_list, help="inverse semi-axes (zeros allowed) instead of --axes")
    add("ratio-bounds", "sharp constants c_n, C_n")
    p = add("asymptotics", "large-n approximation of the ratio")
    p.add_argument("--q", type=_float_list, help="inverse semi-axes instead of --axes")
    p = add("fd", "Lauricella F_D")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=_float_list, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--x", type=_float_list, required=True)
    p = add("ratio-fd", "hypergeometric form of the ratio")
    p.add_argument("--q", type=_float_list, help="inverse semi-axes instead of --axes")
    p.add_argument("--alpha", type=float, default=1.0)
    p = add("project", "volume of the projection onto a subspace")
    p.add_argument("--basis", type=_basis_tokens, help="coordinate subspace, e.g. e1,e2")
    p.add_argument("--basis-file", help="CSV or JSON, one basis vector per row")
    p.add_argument("--form", choices=FORMS, default="auto")
    p = add("meancurv", "integral mean curvature M_k by Kubota Monte Carlo")
    p.add_argument("--k", type=int, required=True)
    p = add("bounds", "two-sided estimate of M_k")
    p.add_argument("--k", type=int, required=True)
    p = add("ratio-constants", "ball / flat-ball mean-curvature ratio")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=RATIO_MODES, default="direct")
    add("ledger", "formula ledger with deviation factors")
    return parser


# ----------------------------------------------------------------------------
# handlers: each returns (params, result, validation_passed or None)
# ----------------------------------------------------------------------------

Handler = Callable[[argparse.Namespace], tuple[dict[str, Any], dict[str, Any], bool | None]]


def _axes(ns: argparse.Namespace, params: dict[str, Any], required: bool = True) -> np.ndarray | None:
    if ns.axes is not None and ns.axes_file is not None:
        raise DomainError("give either --axes or --axes-file, not both")
    if ns.axes_file is not None:
        vals = _axes_from_file(ns.axes_file)
        params["axes_file"] = ns.axes_file
        params["n"] = len(vals)
        return np.asarray(vals)
    if ns.axes is not None:
        params["axes"] = ns.axes
        return np.asarray(ns.axes)
    if required:
        raise DomainError(f"{ns.command} needs --axes or --axes-file")
    return None


def _inverse_axes(ns: argparse.Namespace, params: dict[str, Any]) -> np.ndarray:
    q = getattr(ns, "q", None)
    if q is not None:
        if ns.axes is not None or ns.axes_file is not None:
            raise DomainError("give either --q or semi-axes, not both")
        params["q"] = q
        return np.asarray(q)
    a = _axes(ns, params)
    if np.any(a <= 0):
        raise DomainError("semi-axes must be positive")
    return 1.0 / a


def _mc_cfg(ns: argparse.Namespace, default: int, params: dict[str, Any],
            chunk_size: int = 65536) -> MonteCarloConfig:
    samples = ns.samples or default
    params["samples"] = samples
    return MonteCarloConfig(samples=samples, master_seed=ns.seed, chunk_size=chunk_size,
                            workers=ns.workers)


def _quad(ns: argparse.Namespace) -> QuadratureConfig | None:
    return QuadratureConfig(rel_tol=ns.tol) if ns.tol else None


def _z_score(x: float, y: float, se: float) -> float:
    denom = max(se, SIGMA_FLOOR * abs(y))
    return abs(x - y) / denom if denom > 0 else (0.0 if x == y else math.inf)


def _rel(x: float, y: float) -> float:
    return abs(x / y - 1.0) if y != 0 else abs(x)


def _surface_or_ratio(ns: argparse.Namespace, as_ratio: bool):
    params: dict[str, Any] = {}
    method = ns.method or "moment_integral"
    params["method"] = method
    quad = _quad(ns)
    other = "mc" if method == "moment_integral" else "moment_integral"
    uses_mc = method == "mc" or ns.validate
    cfg = _mc_cfg(ns, MC_DEFAULT_SAMPLES, params) if uses_mc else None

    def evaluate(m: str) -> tuple[float, float]:
        if as_ratio:
            r = ratio_norm(q, m, cfg, quad)
            return r.ratio, r.std_error
        est = surface_area(a, m, cfg, quad)
        return est.value, est.std_error

    if as_ratio:
        q = _inverse_axes(ns, params)
    else:
        a = _axes(ns, params)
    value, se = evaluate(method)
    result: dict[str, Any] = {"value": value, "std_error": se, "method": method}
    if method == "mc":
        result["samples"] = cfg.samples
    ok = None
    if ns.validate:
        oracle, oracle_se = evaluate(other)
        z = _z_score(value, oracle, math.hypot(se, oracle_se))
        result.update(oracle_value=oracle, oracle_deviation=_rel(value, oracle),
                      oracle_method=other, oracle_sigma=z, tolerance_sigma=SIGMA_MC)
        ok = z <= SIGMA_MC
    return params, result, ok


def _cmd_surface(ns):
    return _surface_or_ratio(ns, as_ratio=False)


def _cmd_ratio(ns):
    return _surface_or_ratio(ns, as_ratio=True)


def _cmd_ratio_bounds(ns):
    if ns.dim is None:
        raise DomainError("ratio-bounds needs --dim")
    n = ns.dim
    c, C = ratio_bounds(n)
    result: dict[str, Any] = {"value": c / C, "method": "closed_form", "c_n": c, "C_n": C}
    ok = None
    if ns.validate:
        e1 = np.zeros(n)
        e1[0] = 1.0
        got_c = ratio_norm(e1).norm_value
        got_C = ratio_norm(np.ones(n)).norm_value / math.sqrt(n)
        dev = max(_rel(c, got_c), _rel(C, got_C))
        result.update(oracle_value=[got_c, got_C], oracle_deviation=dev, tolerance=1e-9)
        ok = dev <= 1e-9
    return {"dim": n}, result, ok


def _cmd_asymptotics(ns):
    params: dict[str, Any] = {}
    q = _inverse_axes(ns, params)
    asym = ratio_asymptotic(q)
    result: dict[str, Any] = {"value": asym.value, "method": "asymptotic",
                              "lindeberg": asym.lindeberg}
    ok = None
    if ns.validate:
        oracle = ratio_norm(q, quad=_quad(ns)).ratio
        dev = _rel(asym.value, oracle)
        result.update(oracle_value=oracle, oracle_deviation=dev, tolerance=asym.lindeberg)
        ok = dev <= asym.lindeberg
    return params, result, ok


def _cmd_fd(ns):
    params = {"a": ns.a, "b": ns.b, "c": ns.c, "x": ns.x}
    fd = FdParams(ns.a, tuple(ns.b), ns.c, tuple(ns.x))
    method = ns.method or "auto"
    r = max(abs(v) for v in fd.x)
    if method == "auto":
        method = "series" if r <= 0.5 else "integral"
    params["method"] = method
    quad = _quad(ns)

    def evaluate(m: str) -> float:
        if m == "series":
            return fd_series(fd, rel_tol=ns.tol or 1e-15)
        if m == "integral":
            return fd_integral(fd, quad)
        raise DomainError(f"unknown method {m!r}; choose series, integral or auto")

    value = evaluate(method)
    result: dict[str, Any] = {"value": value, "method": method}
    ok = None
    if ns.validate:
        other = "integral" if method == "series" else "series"
        if other == "series" and r > SERIES_MAX_X:
            raise DomainError(f"validation needs the series route, which requires max|x| <= {SERIES_MAX_X}")
        oracle = evaluate(other)
        dev = _rel(value, oracle)
        result.update(oracle_value=oracle, oracle_deviation=dev, oracle_method=other, tolerance=1e-8)
        ok = dev <= 1e-8
    return params, result, ok


def _cmd_ratio_fd(ns):
    params: dict[str, Any] = {"alpha": ns.alpha}
    q = _inverse_axes(ns, params)
    method = ns.method or "integral"
    params["method"] = method
    report = ratio_via_fd(q, ns.alpha, method)
    result = report.to_dict()
    ok = None
    if ns.validate:
        result["tolerance"] = VERIFIED_TOL
        ok = report.details["corrected_deviation"] <= VERIFIED_TOL
    return params, result, ok


def _cmd_project(ns):
    params: dict[str, Any] = {"form": ns.form}
    a = _axes(ns, params)
    if (ns.basis is None) == (ns.basis_file is None):
        raise DomainError("project needs exactly one of --basis or --basis-file")
    if ns.basis is not None:
        params["basis"] = [f"e{i}" for i in ns.basis]
        subspace = SubspaceBasis.coordinate(a.size, ns.basis)
    else:
        params["basis_file"] = ns.basis_file
        subspace = SubspaceBasis.from_vectors(_basis_from_file(ns.basis_file), layout="rows")
    value = projected_volume(a, subspace, ns.form)
    result: dict[str, Any] = {"value": value, "method": f"form_{ns.form}"}
    ok = None
    if ns.validate:
        other = "1" if ns.form == "singular" else "singular"
        oracle = projected_volume(a, subspace, other)
        dev = _rel(value, oracle)
        result.update(oracle_value=oracle, oracle_deviation=dev, oracle_method=f"form_{other}",
                      tolerance=1e-10)
        ok = dev <= 1e-10
    return params, result, ok


def _query(ns, params) -> CurvatureQuery:
    a = _axes(ns, params)
    params["k"] = ns.k
    return CurvatureQuery(tuple(float(v) for v in a), ns.k)


def _containment(est, bounds) -> tuple[bool, float]:
    slack = SIGMA_BOUNDS * est.std_error + SIGMA_FLOOR * abs(est.value)
    ok = bounds.lower - slack <= est.value <= bounds.upper + slack
    return ok, slack


def _cmd_meancurv(ns):
    params: dict[str, Any] = {}
    query = _query(ns, params)
    cfg = _mc_cfg(ns, KUBOTA_DEFAULT_SAMPLES, params, chunk_size=16384)
    est = kubota_mc(query, cfg)
    result: dict[str, Any] = {"value": est.value, "std_error": est.std_error,
                              "method": est.method, "samples": est.samples_used}
    ok = None
    if ns.validate:
        a = np.asarray(query.semi_axes.semi_axes)
        if np.all(a == a[0]) and a[0] > 0:
            oracle = mk_ball(query.n, query.k, float(a[0]))
            z = _z_score(est.value, oracle, est.std_error)
            result.update(oracle_value=oracle, oracle_deviation=_rel(est.value, oracle),
                          oracle_method="ball_closed_form", oracle_sigma=z,
                          tolerance_sigma=SIGMA_BOUNDS)
            ok = z <= SIGMA_BOUNDS
        elif query.k == 0 and np.all(a > 0):
            ref = surface_area(a)
            z = _z_score(est.value, ref.value, est.std_error)
            result.update(oracle_value=ref.value, oracle_deviation=_rel(est.value, ref.value),
                          oracle_method="surface_area", oracle_sigma=z, tolerance_sigma=SIGMA_MC)
            ok = z <= SIGMA_MC
        else:
            b = curvature_bounds(query)
            ok, slack = _containment(est, b)
            result.update(oracle_method="bounds_containment", lower=b.lower, upper=b.upper,
                          slack=slack)
    return params, result, ok


def _cmd_bounds(ns):
    params: dict[str, Any] = {}
    query = _query(ns, params)
    b = curvature_bounds(query)
    result: dict[str, Any] = {"value": b.amplitude, "method": "amplitude",
                              "lower": b.lower, "upper": b.upper, "amplitude": b.amplitude}
    ok = None
    if ns.validate:
        cfg = _mc_cfg(ns, KUBOTA_DEFAULT_SAMPLES, params, chunk_size=16384)
        est = kubota_mc(query, cfg)
        ok, slack = _containment(est, b)
        result.update(oracle_value=est.value, oracle_std_error=est.std_error,
                      oracle_method="kubota_mc", slack=slack)
    return params, result, ok


def _cmd_ratio_constants(ns):
    if ns.dim is None:
        raise DomainError("ratio-constants needs --dim")
    report = mk_ratio(ns.dim, ns.k, ns.mode)
    result = report.to_dict()
    ok = None
    if ns.validate:
        result["tolerance"] = 1e-10
        ok = report.deviation <= 1e-10
    return {"dim": ns.dim, "k": ns.k, "mode": ns.mode}, result, ok


_EXPECT_VERIFIED = ("moment_integral_laplace", "hypergeometric_ratio_corrected_ball", "hypergeometric_ratio_corrected",
                    "curvature_ratio_direct")


def _cmd_ledger(ns):
    samples = ns.samples or 200_000
    rows = formula_ledger(mc_samples=samples, seed=ns.seed)
    flagged = sum(r["status"] != "verified" for r in rows)
    result: dict[str, Any] = {"value": flagged, "method": "ledger", "records": rows}
    ok = None
    if ns.validate:
        by_id = {r["id"]: r for r in rows}
        ok = all(by_id[i]["status"] == "verified" for i in _EXPECT_VERIFIED)
    return {"samples": samples}, result, ok


HANDLERS: dict[str, Handler] = {
    "surface": _cmd_surface,
    "ratio": _cmd_ratio,
    "ratio-bounds": _cmd_ratio_bounds,
    "asymptotics": _cmd_asymptotics,
    "fd": _cmd_fd,
    "ratio-fd": _cmd_ratio_fd,
    "project": _cmd_project,
    "meancurv": _cmd_meancurv,
    "bounds": _cmd_bounds,
    "ratio-constants": _cmd_ratio_constants,
    "ledger": _cmd_ledger,
}

_SEEDED = {"meancurv", "ledger"}


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    """Execute one command line; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    start = time.perf_counter()
    try:
        params, result, ok = HANDLERS[ns.command](ns)
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return 3
    elapsed = 0 if ns.no_timing else int(round(1000 * (time.perf_counter() - start)))

    uses_seed = ns.command in _SEEDED or "samples" in params
    record = RunRecord(ns.command, params, result, ns.seed if uses_seed else None,
                       wall_time_ms=elapsed)
    if ok is not None:
        record.result["validation"] = "pass" if ok else "fail"

    if ns.format == "json":
        stdout.write(record.to_json() + "\n")
    elif ns.command == "ledger":
        stdout.write(_to_csv(result["records"]))
    else:
        stdout.write(_to_csv([record.to_dict()]))
    return 3 if ok is False else 0


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
