"""Parameter sweeps over the closed-form RDC functions, with oracle audits.

A sweep fixes the source parameters and some budgets and varies one to three
budgets on linear or logarithmic grids. Grid points are evaluated in parallel
but always gathered in axis order, so output never depends on ``threads``.
"""

import configparser
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .binary import CONSTRAINT_MODES, BinaryProblem, binary_rdc
from .errors import ConfigError, DomainError, InfeasibleError
from .gaussian import Branch, GaussianProblem, gaussian_rate
from .infomath import complexity_to_rho
from .oracle.binary import binary_grid_oracle, is_symmetric
from .oracle.gaussian import gaussian_parametric_oracle
from .records import RdcPoint

BUDGETS = ("theta_d", "theta_p", "theta_c")
SOURCES = ("gaussian", "binary")
FORMATS = ("csv", "json")
INFEASIBLE = "infeasible"

DEFAULTS = {
    "source": "gaussian",
    "gamma": 1.0,
    "q_sx": 0.1,
    "theta_d": None,
    "theta_p": None,
    "theta_c": None,
    "axes": "",
    "out": None,
    "format": "csv",
    "seed": 0,
    "verify": False,
    "oracle_res": None,
    "tolerance": 5e-3,
    "constraint_mode": "proof",
    "threads": 1,
}
DEFAULT_ORACLE_RES = {"gaussian": 200, "binary": 50}


@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    steps: int
    spacing: str = "linear"

    @classmethod
    def parse(cls, text):
        """Parse ``name:min:max:steps[:linear|log]``."""
        parts = [p.strip() for p in text.split(":")]
        if len(parts) not in (4, 5):
            raise ConfigError(f"axis {text!r}: expected name:min:max:steps[:linear|log]")
        try:
            lo, hi, steps = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise ConfigError(f"axis {text!r}: {exc}") from None
        spacing = parts[4] if len(parts) == 5 else "linear"
        return cls(parts[0], lo, hi, steps, spacing)

    def validate(self):
        if self.name not in BUDGETS:
            raise ConfigError(f"axis name {self.name!r} must be one of {BUDGETS}")
        if self.steps < 2:
            raise ConfigError(f"axis {self.name}: steps must be >= 2")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise ConfigError(f"axis {self.name}: need finite min < max")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"axis {self.name}: spacing must be linear or log")
        if self.spacing == "log" and self.lo <= 0:
            raise ConfigError(f"axis {self.name}: log spacing needs min > 0")

    def values(self):
        if self.spacing == "log":
            return [float(v) for v in np.geomspace(self.lo, self.hi, self.steps)]
        return [float(v) for v in np.linspace(self.lo, self.hi, self.steps)]

    def describe(self):
        return {"name": self.name, "min": self.lo, "max": self.hi, "steps": self.steps,
                "spacing": self.spacing}


@dataclass(frozen=True)
class SweepConfig:
    source: str = "gaussian"
    gamma: float = 1.0
    q_sx: float = 0.1
    theta_d: Optional[float] = None
    theta_p: Optional[float] = None
    theta_c: Optional[float] = None
    axes: tuple = ()
    out: Optional[str] = None
    format: str = "csv"
    seed: int = 0
    verify: bool = False
    oracle_res: Optional[int] = None
    tolerance: float = 5e-3
    constraint_mode: str = "proof"
    threads: int = 1

    @property
    def resolution(self):
        return self.oracle_res or DEFAULT_ORACLE_RES[self.source]

    def validate(self, n_axes=None):
        if self.source not in SOURCES:
            raise ConfigError(f"source must be one of {SOURCES}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.constraint_mode not in CONSTRAINT_MODES:
            raise ConfigError(f"constraint_mode must be one of {CONSTRAINT_MODES}")
        if not 1 <= len(self.axes) <= 3:
            raise ConfigError("between 1 and 3 swept axes are required")
        if n_axes is not None and len(self.axes) != n_axes:
            raise ConfigError(f"this command needs exactly {n_axes} swept axis/axes, "
                              f"got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError("an axis may be swept only once")
        for a in self.axes:
            a.validate()
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be > 0")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        needed = ("theta_d", "theta_p", "theta_c") if self.source == "gaussian" \
            else ("theta_p", "theta_c")
        for b in needed:
            if b not in names and getattr(self, b) is None:
                raise ConfigError(f"{b} must be fixed or swept")
        if self.source == "binary" and "theta_d" in names:
            raise ConfigError("binary sources have no theta_d budget")
        if self.source == "gaussian":
            if not 0 < self.gamma <= 1:
                raise ConfigError("gamma must lie in (0, 1]")
            lim = {"theta_d": (0.0, math.inf), "theta_p": (0.0, 1.0),
                   "theta_c": (0.0, math.inf)}
        else:
            if not 0 <= self.q_sx <= 1:
                raise ConfigError("q_sx must lie in [0, 1]")
            lim = {"theta_p": (0.0, math.inf), "theta_c": (0.0, 1.0)}
        for b, (lo, hi) in lim.items():
            vals = [getattr(self, b)] if b not in names else \
                [a for ax in self.axes if ax.name == b for a in (ax.lo, ax.hi)]
            for v in vals:
                if v is not None and not lo <= v <= hi:
                    raise ConfigError(f"{b}={v!r} outside [{lo}, {hi}] for a {self.source} source")
        if self.verify and self.resolution < DEFAULT_ORACLE_RES[self.source] // 2:
            raise ConfigError("oracle_res too small for this source")
        return self

    def grid(self):
        """All budget triples in row-major order (first axis slowest)."""
        fixed = {b: getattr(self, b) for b in BUDGETS}
        combos = [dict(fixed)]
        for ax in self.axes:
            combos = [dict(c, **{ax.name: v}) for c in combos for v in ax.values()]
        return combos


def _parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _opt_float(text):
    if text is None or str(text).strip() == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def read_config_file(path):
    """Read ``key = value`` lines (``#`` comments) into a dict of strings."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[sweep]\n" + fh.read(), source=str(path))
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    data = dict(parser["sweep"])
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def build_config(raw):
    """Turn a mapping of raw values (strings or typed) into a SweepConfig."""
    merged = dict(DEFAULTS)
    merged.update({k: v for k, v in raw.items() if v is not None})
    axes = merged["axes"]
    if isinstance(axes, str):
        axes = [a for a in (s.strip() for s in axes.split(",")) if a]
    axes = tuple(a if isinstance(a, AxisSpec) else AxisSpec.parse(a) for a in axes)
    try:
        return SweepConfig(
            source=str(merged["source"]).strip(),
            gamma=float(merged["gamma"]),
            q_sx=float(merged["q_sx"]),
            theta_d=_opt_float(merged["theta_d"]),
            theta_p=_opt_float(merged["theta_p"]),
            theta_c=_opt_float(merged["theta_c"]),
            axes=axes,
            out=merged["out"],
            format=str(merged["format"]).strip(),
            seed=int(merged["seed"]),
            verify=_parse_bool(merged["verify"]) if not isinstance(merged["verify"], bool)
            else merged["verify"],
            oracle_res=int(merged["oracle_res"]) if merged["oracle_res"] not in (None, "")
            else None,
            tolerance=float(merged["tolerance"]),
            constraint_mode=str(merged["constraint_mode"]).strip(),
            threads=int(merged["threads"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def closed_form(config, theta_d, theta_p, theta_c):
    """Evaluate one point; infeasibility is returned as data, not raised."""
    try:
        if config.source == "gaussian":
            rate, branch = gaussian_rate(config.gamma, theta_d, theta_p, theta_c)
            return RdcPoint(theta_d, theta_p, theta_c, rate, branch.value)
        pt = binary_rdc(BinaryProblem(config.q_sx, theta_p, theta_c), config.constraint_mode)
        return replace(pt, branch="feasible")
    except InfeasibleError:
        return RdcPoint(theta_d if config.source == "gaussian" else None, theta_p, theta_c,
                        None, INFEASIBLE)


def _validated_problem(config, b):
    # raises DomainError early for budgets outside the model's domain
    if config.source == "gaussian":
        GaussianProblem(config.gamma, b["theta_d"], b["theta_p"], b["theta_c"])
    else:
        BinaryProblem(config.q_sx, b["theta_p"], b["theta_c"])


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_grid(config, n_axes=None):
    config.validate(n_axes)

    def one(b):
        _validated_problem(config, b)
        return closed_form(config, b["theta_d"], b["theta_p"], b["theta_c"])

    try:
        return _pmap(one, config.grid(), config.threads)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def run_curve(config):
    """Closed-form rates along exactly one swept axis."""
    return run_grid(config, 1)


def run_surface(config):
    """Closed-form rates on a two-axis grid, row-major in axis order."""
    return run_grid(config, 2)


@dataclass
class VerifyReport:
    points: list
    discrepancies: list = field(default_factory=list)
    ambiguous: list = field(default_factory=list)
    tolerance: float = 5e-3

    @property
    def passed(self):
        return not self.discrepancies

    def worst(self, k=10):
        gaps = [p for p in self.points if p.oracle_gap is not None]
        return sorted(gaps, key=lambda p: -abs(p.oracle_gap))[:k]

    def as_dict(self):
        def pt(p):
            return {"theta_d": p.theta_d, "theta_p": p.theta_p, "theta_c": p.theta_c,
                    "rate": p.rate, "oracle_rate": p.oracle_rate, "oracle_gap": p.oracle_gap,
                    "branch": p.branch}
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "n_points": len(self.points),
            "n_discrepancies": len(self.discrepancies),
            "n_ambiguous": len(self.ambiguous),
            "discrepancies": [dict(pt(p), reason=r) for p, r in self.discrepancies],
            "ambiguous": [pt(p) for p in self.ambiguous],
            "worst": [pt(p) for p in self.worst()],
        }


def _oracle_point(config, b, cf):
    if config.source == "gaussian":
        rho = complexity_to_rho(b["theta_c"])
        res = gaussian_parametric_oracle(config.gamma, rho, b["theta_d"], b["theta_p"],
                                         resolution=config.resolution)
        symmetric = True
    else:
        res = binary_grid_oracle(config.q_sx, b["theta_c"], b["theta_p"],
                                 resolution=config.resolution)
        symmetric = res.argmin is None or is_symmetric(res.argmin, res.grid_step)
    return res, symmetric


def run_verify(config, closed_form_fn=None):
    """Evaluate every grid point in closed form and with the matching oracle.

    Args:
        config: sweep configuration (1 to 3 axes).
        closed_form_fn: optional replacement for :func:`closed_form`, used to
            inject faults when testing the audit itself.

    Returns:
        VerifyReport. Points in the documented Gaussian ambiguity region
        (complexity-limited case with gamma*rho < 1) are listed separately
        and never counted as discrepancies.
    """
    config.validate()
    cf_fn = closed_form_fn or closed_form

    def one(b):
        _validated_problem(config, b)
        cf = cf_fn(config, b["theta_d"], b["theta_p"], b["theta_c"])
        res, symmetric = _oracle_point(config, b, cf)
        gap = None
        if res.feasible and cf.rate is not None:
            both_inf = math.isinf(res.min_rate) and math.isinf(cf.rate)
            gap = 0.0 if both_inf else res.min_rate - cf.rate
        ambiguous = (config.source == "gaussian" and cf.branch == Branch.COMPLEXITY_LIMITED.value
                     and config.gamma * complexity_to_rho(b["theta_c"]) < 1.0)
        pt = replace(cf, oracle_rate=res.min_rate if res.feasible else None, oracle_gap=gap)
        reason = None
        if (cf.rate is not None) != res.feasible:
            reason = "feasibility mismatch"
        elif gap is not None and abs(gap) > config.tolerance:
            reason = f"gap {gap:+.3e} exceeds tolerance"
        elif not symmetric:
            reason = "oracle argmin not symmetric"
        return pt, ambiguous, reason

    try:
        rows = _pmap(one, config.grid(), config.threads)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    report = VerifyReport(points=[r[0] for r in rows], tolerance=config.tolerance)
    for pt, ambiguous, reason in rows:
        if ambiguous:
            report.ambiguous.append(pt)
        elif reason:
            report.discrepancies.append((pt, reason))
    return report
