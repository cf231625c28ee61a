"""Command-line front end: config files, presets, deterministic exports.

Every figure-style recipe is a single config; identical configs reproduce
the data section byte for byte, independent of the thread count.
Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import bands as bands_mod
from . import quench as quench_mod
from .errors import ConfigError, DegeneracyError, NumericsError
from .geometry import metric_grid_perturbation, signed_curvature_grid
from .invariants import QuadratureGrid, dd_invariant, lambda_sweep
from .qudit import HyperPoint
from .sweep import SweepResult, export, __version__

OUTPUT_DIR_ENV = "MONOPOLE_LAB_OUTPUT_DIR"
COMMANDS = ("bands", "metric", "curvature", "charge", "sweep", "quench", "weyl")

_PI_RE = re.compile(r"^([+-]?)(\d*\.?\d*)\s*\*?\s*pi(?:\s*/\s*(\d+\.?\d*))?$")


def parse_angle(text: str) -> float:
    """Parse an angle that may be a symbolic multiple of pi, e.g. 'pi/8',
    '3pi/4', '-pi/1024', or a plain float."""
    s = str(text).strip().lower()
    m = _PI_RE.match(s)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        coeff = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        return sign * coeff * np.pi / den
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def parse_lambdas(text: str) -> list:
    """Comma-separated values or an inclusive 'start:stop:step' range."""
    s = str(text).strip()
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 3:
            raise ConfigError("range syntax is start:stop:step")
        a, b, h = (float(p) for p in parts)
        if h <= 0:
            raise ConfigError("range step must be positive")
        n = int(round((b - a) / h))
        vals = [a + i * h for i in range(n + 1)]
        return [round(v, 12) for v in vals if v <= b + 1e-12]
    return [float(p) for p in s.split(",") if p.strip()]


@dataclass
class RunConfig:
    """Flat, JSON-serializable description of one run.  Unknown keys are
    rejected on load so configs stay forward-portable."""

    command: str = "charge"
    lambda_offset: float = 0.0
    lambdas: list = field(default_factory=list)
    method: str = "analytic"
    charge: int = 1
    delta_q: float = np.pi / 1024.0
    ramp_time: float = 0.0
    n_steps: int = 256
    omega0: float = quench_mod.DEFAULT_OMEGA0
    n_theta1: int = 60
    n_theta2: int = 60
    n_phi: int = 16
    rule: str = "simpson"
    axis: str = "kx"
    axes: list = field(default_factory=lambda: ["theta1"])
    n_samples: int = 201
    theta1: float = np.pi / 3.0
    theta2: float = np.pi / 4.0
    phi: float = 0.0
    preset: str = ""
    threads: int = 1
    seed: int = 0
    output: str = ""
    format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad config file: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)


def _grid(cfg: RunConfig) -> QuadratureGrid:
    return QuadratureGrid(n_theta1=cfg.n_theta1, n_theta2=cfg.n_theta2,
                          n_phi=cfg.n_phi, rule=cfg.rule)


def _parallel_rows(fn, chunks, threads):
    """Evaluate fn over chunks, in order, optionally on a thread pool.
    The reduction order is the input order regardless of thread count."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, chunks))
    return [fn(c) for c in chunks]


def _angle_nodes(cfg):
    t1, _ = _grid(cfg).axis("theta1")
    t2, _ = _grid(cfg).axis("theta2")
    T1, T2 = np.meshgrid(t1, t2, indexing="ij")
    return T1.ravel(), T2.ravel()


def _run_bands(cfg):
    cut = bands_mod.band_cut(lambda_offset=cfg.lambda_offset, axis=cfg.axis,
                             n_samples=cfg.n_samples)
    return SweepResult(columns=(cfg.axis, "e_minus", "e_zero", "e_plus"),
                       rows=[tuple(r) for r in cut.samples],
                       metadata={"lambda_offset": cfg.lambda_offset})


def _run_metric(cfg):
    t1, t2 = _angle_nodes(cfg)
    if cfg.method == "quench":
        g = quench_mod.quench_metric_grid(
            t1, t2, delta_q=cfg.delta_q, lambda_offset=cfg.lambda_offset,
            charge=cfg.charge)
    elif cfg.method in ("analytic", "perturbation"):
        g, _ = metric_grid_perturbation(t1, t2,
                                        lambda_offset=cfg.lambda_offset,
                                        charge=cfg.charge)
    else:
        raise ConfigError(f"unknown metric method {cfg.method!r}")
    rows = [(t1[i], t2[i], g[i, 0, 0], g[i, 1, 1], g[i, 2, 2],
             g[i, 0, 1], g[i, 0, 2], g[i, 1, 2]) for i in range(len(t1))]
    return SweepResult(
        columns=("theta1", "theta2", "g_t1t1", "g_t2t2", "g_pp",
                 "g_t1t2", "g_t1p", "g_t2p"),
        rows=rows,
        metadata={"method": cfg.method, "delta_q": cfg.delta_q,
                  "lambda_offset": cfg.lambda_offset})


def _run_curvature(cfg):
    t1, t2 = _angle_nodes(cfg)
    chunks = np.array_split(np.arange(len(t1)), max(cfg.threads * 4, 1))
    parts = _parallel_rows(
        lambda idx: signed_curvature_grid(t1[idx], t2[idx],
                                          lambda_offset=cfg.lambda_offset,
                                          charge=cfg.charge),
        [c for c in chunks if len(c)], cfg.threads)
    h = np.concatenate(parts)
    rows = list(zip(t1, t2, h))
    return SweepResult(columns=("theta1", "theta2", "curvature"), rows=rows,
                       metadata={"lambda_offset": cfg.lambda_offset,
                                 "charge": cfg.charge})


def _run_charge(cfg):
    res = dd_invariant(lambda_offset=cfg.lambda_offset, grid=_grid(cfg),
                       method=cfg.method, charge=cfg.charge,
                       delta_q=cfg.delta_q if cfg.method == "quench" else None)
    return SweepResult(columns=("lambda_offset", "q_dd"),
                       rows=[(cfg.lambda_offset, res.value)],
                       metadata={"method": cfg.method, "note": res.note,
                                 "delta_q": res.delta_q})


def _run_sweep(cfg):
    if not cfg.lambdas:
        raise ConfigError("sweep needs a non-empty lambdas list")
    return lambda_sweep(cfg.lambdas, method=cfg.method, grid=_grid(cfg),
                        delta_q=cfg.delta_q if cfg.method == "quench" else None,
                        charge=cfg.charge, threads=cfg.threads)


def _run_quench(cfg):
    if cfg.preset == "transmon-2020":
        sched = quench_mod.transmon_2020(axes=tuple(cfg.axes),
                                         delta_q=cfg.delta_q,
                                         n_steps=cfg.n_steps)
    elif cfg.preset:
        raise ConfigError(f"unknown preset {cfg.preset!r}")
    else:
        sched = quench_mod.QuenchSchedule(axes=tuple(cfg.axes),
                                          delta_q=cfg.delta_q,
                                          ramp_time=cfg.ramp_time,
                                          n_steps=cfg.n_steps,
                                          omega0=cfg.omega0)
    point = HyperPoint(1.0, cfg.theta1, cfg.theta2, cfg.phi,
                       cfg.lambda_offset)
    out = quench_mod.evolve(point, sched, charge=cfg.charge)
    return SweepResult(
        columns=("theta1", "theta2", "phi", "delta_q", "ramp_time",
                 "p_excited"),
        rows=[(cfg.theta1, cfg.theta2, cfg.phi, sched.delta_q,
               sched.ramp_time, out.p_excited)],
        metadata={"axes": list(sched.axes), "note": out.note})


def _run_weyl(cfg):
    pts = bands_mod.find_weyl_points(cfg.lambda_offset)
    rows = [(p.kx, p.ky, p.kz, p.kw) for p in pts]
    return SweepResult(columns=("kx", "ky", "kz", "kw"), rows=rows,
                       metadata={"lambda_offset": cfg.lambda_offset})


_DISPATCH = {
    "bands": _run_bands,
    "metric": _run_metric,
    "curvature": _run_curvature,
    "charge": _run_charge,
    "sweep": _run_sweep,
    "quench": _run_quench,
    "weyl": _run_weyl,
}


def run(cfg: RunConfig) -> SweepResult:
    t0 = time.perf_counter()
    result = _DISPATCH[cfg.command](cfg)
    result.metadata.setdefault("config", asdict(cfg))
    result.metadata["version"] = __version__
    result.metadata["wall_clock_s"] = time.perf_counter() - t0
    return result


def output_path(cfg: RunConfig) -> str:
    if cfg.output:
        path = cfg.output
    else:
        path = f"{cfg.command}.{cfg.format}"
    if not os.path.isabs(path):
        base = os.environ.get(OUTPUT_DIR_ENV, ".")
        path = os.path.join(base, path)
    return path


def _build_parser():
    p = argparse.ArgumentParser(
        prog="monopole-lab",
        description="Numerical laboratory for a three-band 4D Weyl-like "
                    "model: bands, quantum geometry, 3-form charges, and "
                    "quench protocols.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--config", help="JSON config file; other flags override")
        sp.add_argument("--output", help="output file path")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--threads", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--lambda", dest="lambda_offset", type=float,
                        help="coupling offset")
        sp.add_argument("--charge", type=int, choices=(1, -1))

    sp = sub.add_parser("bands", help="band energies along a momentum cut")
    common(sp)
    sp.add_argument("--axis", choices=("kx", "ky", "kz", "kw"))
    sp.add_argument("--n-samples", dest="n_samples", type=int)

    sp = sub.add_parser("metric", help="quantum metric map over the angles")
    common(sp)
    sp.add_argument("--method", choices=("analytic", "perturbation", "quench"))
    sp.add_argument("--delta-q", dest="delta_q", type=parse_angle)
    sp.add_argument("--n-theta1", dest="n_theta1", type=int)
    sp.add_argument("--n-theta2", dest="n_theta2", type=int)
    sp.add_argument("--rule", choices=("simpson", "midpoint"))

    sp = sub.add_parser("curvature", help="signed 3-form curvature map")
    common(sp)
    sp.add_argument("--n-theta1", dest="n_theta1", type=int)
    sp.add_argument("--n-theta2", dest="n_theta2", type=int)
    sp.add_argument("--rule", choices=("simpson", "midpoint"))

    sp = sub.add_parser("charge", help="topological charge by quadrature")
    common(sp)
    sp.add_argument("--method", choices=("analytic", "perturbation", "quench"))
    sp.add_argument("--delta-q", dest="delta_q", type=parse_angle)
    sp.add_argument("--n-theta1", dest="n_theta1", type=int)
    sp.add_argument("--n-theta2", dest="n_theta2", type=int)
    sp.add_argument("--rule", choices=("simpson", "midpoint"))

    sp = sub.add_parser("sweep", help="charge versus coupling offset")
    common(sp)
    sp.add_argument("--method", choices=("analytic", "perturbation", "quench"))
    sp.add_argument("--delta-q", dest="delta_q", type=parse_angle)
    sp.add_argument("--lambdas", type=parse_lambdas,
                    help="comma list or start:stop:step")
    sp.add_argument("--n-theta1", dest="n_theta1", type=int)
    sp.add_argument("--n-theta2", dest="n_theta2", type=int)
    sp.add_argument("--rule", choices=("simpson", "midpoint"))

    sp = sub.add_parser("quench", help="one quench run at a point")
    common(sp)
    sp.add_argument("--theta1", type=parse_angle)
    sp.add_argument("--theta2", type=parse_angle)
    sp.add_argument("--phi", type=parse_angle)
    sp.add_argument("--axes", type=lambda s: s.split(","))
    sp.add_argument("--delta-q", dest="delta_q", type=parse_angle)
    sp.add_argument("--ramp-time", dest="ramp_time", type=float)
    sp.add_argument("--n-steps", dest="n_steps", type=int)
    sp.add_argument("--preset", choices=("transmon-2020",))

    sp = sub.add_parser("weyl", help="gap nodes on the kx axis")
    common(sp)

    return p


def config_from_args(argv) -> RunConfig:
    args = _build_parser().parse_args(argv)
    if args.command is None:
        raise ConfigError("no command given")
    data = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            data = json.loads(fh.read())
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    data["command"] = args.command
    for key, val in vars(args).items():
        if key in ("command", "config") or val is None:
            continue
        data[key] = val
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv

    def fail(status, kind, exc):
        record = {"status": status, "error": kind, "detail": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return status

    try:
        cfg = config_from_args(argv)
    except (ConfigError, SystemExit) as exc:
        if isinstance(exc, SystemExit):
            return int(exc.code or 0) and 2
        return fail(2, "config", exc)
    try:
        result = run(cfg)
    except ConfigError as exc:
        return fail(2, "config", exc)
    except (NumericsError, DegeneracyError, FloatingPointError,
            np.linalg.LinAlgError) as exc:
        return fail(3, "numerical", exc)
    path = output_path(cfg)
    try:
        payload = export(result, cfg.format)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        return fail(4, "io", exc)
    print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
