"""Figure-reproduction sweeps: config parsing, presets, grid runner and CSV output.

A config is flat ``key=value`` text::

    scenario = fig2_g2
    drive = 0.05
    axis1 = delta_a, -100, 60, 1601   # name, start, stop, count
    output = fig2b.csv

Axes are named after ``SystemParams`` fields. ``detuning_rule`` derives the
remaining detunings from each grid point (``equal``: delta_b = delta_a,
``jc``: delta_b = delta_a - kerr, ``single_photon_plus``: both set to
-(K + sqrt(K^2 + 4 J^2)) / 2). Presets with several curves (different Kerr
values or operating points) evaluate each curve as a separate series on the
same grid.

Rows are emitted axis2-major, axis1-minor. A grid point that raises a package
error leaves its cells empty and names the error class in ``error_code``.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import platform
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

import numpy as np

from . import lindblad as lb
from . import perturbative as pt
from .errors import BlockadeError, ConfigError, SweepAbortedError
from .fock import Truncation
from .model import PARAM_FIELDS, SystemParams

SCENARIOS = (
    "fig2_occupations",
    "fig2_g2",
    "fig3_surface",
    "fig4_jc",
    "fig5_unconventional_small",
    "fig6_unconventional_large",
    "fig7_thermal",
    "custom",
)
METHODS = ("master_equation", "perturbative_dme", "amplitude", "interference_split")
DETUNING_RULES = ("none", "equal", "jc", "single_photon_plus")
MAX_FAILED_FRACTION = 0.10
FLOAT_FORMAT = ".17g"

# operating points quoted in the figure captions
CONVENTIONAL_KERR = 25.0
UPB_SMALL_KERR = 1.54e-4
UPB_SMALL_DELTA = 0.288
FIG4_KERR_VALUES = (2.0, 4.0, 20.0)


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    label: str | None = None

    def __post_init__(self):
        if self.name not in PARAM_FIELDS:
            raise ConfigError(f"axis name {self.name!r} is not a parameter field ({', '.join(PARAM_FIELDS)})")
        if int(self.count) < 2:
            raise ConfigError(f"axis {self.name} needs count >= 2, got {self.count}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError(f"axis {self.name} bounds must be finite")

    def values(self) -> np.ndarray:
        # 12 significant digits strips linspace round-off, so quoted values
        # such as 125.859 or 0.29 land on the grid exactly
        grid = np.linspace(self.start, self.stop, int(self.count))
        return np.array([float(f"{x:.12g}") for x in grid])

    @property
    def header(self) -> str:
        return self.label or self.name


@dataclass(frozen=True)
class Series:
    """One curve of a preset: parameter overrides plus a column suffix."""

    suffix: str
    overrides: tuple = ()
    detuning_rule: str | None = None


@dataclass(frozen=True)
class SweepSpec:
    scenario: str
    base_params: SystemParams
    axis1: Axis
    axis2: Axis | None = None
    method: str = "master_equation"
    truncation: Truncation = lb.DEFAULT_TRUNCATION
    output_path: str = ""
    detuning_rule: str = "none"
    columns: tuple = ()
    series: tuple = (Series(""),)
    converge: bool = False
    settings: tuple = ()

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.detuning_rule not in DETUNING_RULES:
            raise ConfigError(f"unknown detuning_rule {self.detuning_rule!r}")
        if not self.columns:
            object.__setattr__(self, "columns", default_columns(self.method))

    def grid(self):
        """Parameter points in emission order (axis2-major, axis1-minor)."""
        outer = self.axis2.values() if self.axis2 is not None else [None]
        for v2 in outer:
            for v1 in self.axis1.values():
                yield v1, v2

    @property
    def size(self) -> int:
        return int(self.axis1.count) * (int(self.axis2.count) if self.axis2 is not None else 1)


@dataclass
class SweepResult:
    header: list
    rows: list
    metadata: dict = field(default_factory=dict)
    failures: int = 0

    def csv_text(self) -> str:
        lines = [",".join(self.header)]
        for row in self.rows:
            lines.append(",".join(_cell(v) for v in row))
        return "\r\n".join(lines) + "\r\n"

    def metadata_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.metadata.items())

    def write(self, path) -> None:
        path = Path(path)
        path.write_text(self.csv_text(), encoding="utf-8", newline="")
        Path(str(path) + ".meta.txt").write_text(self.metadata_text(), encoding="utf-8")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return format(float(v), FLOAT_FORMAT)


# -- quantities ---------------------------------------------------------------
#
# A column is (header, quantity, series index). Quantities share one cache per
# (grid point, series) so a single steady-state solve feeds several columns.


def default_columns(method: str) -> tuple:
    if method == "interference_split":
        names = (
            "rho44",
            "rho44_direct",
            "rho44_interference",
            "rho66",
            "rho66_direct",
            "rho66_interference",
            "g2_noninterference",
        )
    else:
        names = ("rho44", "rho66", "g2")
    return tuple((n, n, 0) for n in names)


class _Point:
    def __init__(self, p: SystemParams, spec: SweepSpec):
        self.p = p
        self.spec = spec
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def me(self):
        def run():
            if self.spec.converge:
                _, report = lb.converged_g2(self.p, self.spec.truncation)
                return report
            return lb.solve(self.p, self.spec.truncation)

        return self._get("me", run)

    def dme(self):
        return self._get("dme", lambda: pt.dme_steady_state(self.p))

    def amps(self):
        return self._get("amps", lambda: pt.general_amplitude_steady_state(self.p))

    def split(self):
        return self._get("split", lambda: pt.interference_decomposition(self.p))

    # per-method populations and g2
    def populations(self, method):
        if method == "master_equation":
            rho = self.me().rho
            return rho.population(0, 0), rho.population(1, 0), rho.population(2, 0)
        if method == "perturbative_dme":
            r = self.dme().rho
            return r[0, 0].real, r[3, 3].real, r[5, 5].real
        if method == "amplitude":
            a = self.amps()
            return abs(a.c00) ** 2, abs(a.c10) ** 2, abs(a.c20) ** 2
        s = self.split()
        return abs(s.eigen_amplitudes["D00"]) ** 2, s.rho44_total, s.rho66_total

    def g2(self, method):
        if method == "master_equation":
            return lb.g2_zero(self.me().rho)
        if method == "perturbative_dme":
            return pt.g2_approx(self.dme())
        if method == "amplitude":
            return self.amps().g2()
        s = self.split()
        return 2.0 * s.rho66_total / s.rho44_total**2

    def quantity(self, name):
        m = self.spec.method
        table = {
            "rho11": lambda: self.populations(m)[0],
            "rho44": lambda: self.populations(m)[1],
            "rho66": lambda: self.populations(m)[2],
            "g2": lambda: self.g2(m),
            "g2_numeric": lambda: self.g2("master_equation"),
            "g2_perturbative": lambda: self.g2("perturbative_dme"),
            "g2_amplitude": lambda: self.g2("amplitude"),
            "rho44_direct": lambda: self.split().rho44_direct,
            "rho44_interference": lambda: self.split().rho44_interference,
            "rho66_direct": lambda: self.split().rho66_direct,
            "rho66_interference": lambda: self.split().rho66_interference,
            "rho44_noninterference": lambda: self.split().rho44_direct,
            "rho66_noninterference": lambda: self.split().rho66_direct,
            "g2_noninterference": lambda: self.split().g2_direct(),
            "g2_jc": lambda: lb.jc_g2(self.p, self.spec.truncation.n_max_a),
        }
        return table[name]()


QUANTITIES = (
    "rho11",
    "rho44",
    "rho66",
    "g2",
    "g2_numeric",
    "g2_perturbative",
    "g2_amplitude",
    "rho44_direct",
    "rho44_interference",
    "rho66_direct",
    "rho66_interference",
    "rho44_noninterference",
    "rho66_noninterference",
    "g2_noninterference",
    "g2_jc",
)


def single_photon_plus_detuning(kerr: float, hop: float) -> float:
    """Drive detuning resonant with the |0,0> -> |1+> transition."""
    return -(kerr + math.sqrt(kerr * kerr + 4.0 * hop * hop)) / 2.0


def apply_rule(p: SystemParams, rule: str) -> SystemParams:
    if rule == "equal":
        return p.replace(delta_b=p.delta_a)
    if rule == "jc":
        return p.replace(delta_b=p.delta_a - p.kerr)
    if rule == "single_photon_plus":
        d = single_photon_plus_detuning(p.kerr, p.hop)
        return p.replace(delta_a=d, delta_b=d)
    return p


def point_params(spec: SweepSpec, series: Series, v1, v2) -> SystemParams:
    changes = dict(series.overrides)
    changes[spec.axis1.name] = float(v1)
    if spec.axis2 is not None:
        changes[spec.axis2.name] = float(v2)
    p = spec.base_params.replace(**changes)
    return apply_rule(p, series.detuning_rule or spec.detuning_rule)


# -- presets ------------------------------------------------------------------


def _kappa_units(**kw) -> SystemParams:
    base = dict(kerr=CONVENTIONAL_KERR, hop=50.0, drive=0.1, kappa_a=1.0, kappa_b=1.0)
    base.update(kw)
    return SystemParams(**base)


def preset(name: str) -> dict:
    """Resolved field values for a scenario, before user overrides."""
    if name == "fig2_occupations":
        return dict(
            base_params=_kappa_units(),
            axis1=Axis("delta_a", -100.0, 60.0, 1601, "delta_over_kappa"),
            detuning_rule="equal",
            columns=(
                ("rho11", "rho11", 0),
                ("rho44", "rho44", 0),
                ("rho66", "rho66", 0),
                ("rho44_noninterference", "rho44_noninterference", 0),
                ("rho66_noninterference", "rho66_noninterference", 0),
            ),
        )
    if name == "fig2_g2":
        return dict(
            base_params=_kappa_units(),
            axis1=Axis("delta_a", -100.0, 60.0, 1601, "delta_over_kappa"),
            detuning_rule="equal",
            columns=(
                ("g2_numeric", "g2_numeric", 0),
                ("g2_perturbative", "g2_perturbative", 0),
                ("g2_noninterference", "g2_noninterference", 0),
            ),
        )
    if name == "fig3_surface":
        return dict(
            base_params=_kappa_units(),
            axis1=Axis("hop", 0.0, 100.0, 41, "hop_over_kappa"),
            axis2=Axis("kerr", 0.0, 50.0, 41, "kerr_over_kappa"),
            detuning_rule="single_photon_plus",
            columns=(("rho44", "rho44", 0), ("rho66", "rho66", 0), ("g2", "g2", 0)),
        )
    if name == "fig4_jc":
        return dict(
            base_params=SystemParams(hop=1.0, drive=0.005, kappa_a=0.05, kappa_b=0.05),
            axis1=Axis("delta_a", -2.5, 2.5, 501, "delta_over_J"),
            detuning_rule="jc",
            kerr_values=FIG4_KERR_VALUES,
        )
    if name == "fig5_unconventional_small":
        return dict(
            base_params=_kappa_units(kerr=UPB_SMALL_KERR),
            axis1=Axis("delta_a", 0.2, 0.4, 21, "delta_over_kappa"),
            axis2=Axis("kerr", 1.0e-4, 2.0e-4, 21, "kerr_over_kappa"),
            detuning_rule="equal",
            # the nearly linear Kerr mode needs one more level than (3, 3)
            truncation=Truncation(4, 4),
            columns=(("g2", "g2", 0),),
        )
    if name == "fig6_unconventional_large":
        return dict(
            base_params=_kappa_units(kerr=125.859),
            axis1=Axis("delta_a", -100.0, -80.0, 41, "delta_over_kappa"),
            # centred on K = 125.859: the optimum is narrow in K, so it must sit on the grid
            axis2=Axis("kerr", 120.859, 130.859, 21, "kerr_over_kappa"),
            detuning_rule="equal",
            columns=(("g2", "g2", 0),),
        )
    if name == "fig7_thermal":
        return dict(
            base_params=_kappa_units(),
            axis1=Axis("nbar_b", 0.0, 0.1, 51, "nbar_b"),
            converge=True,
            unconventional_kerr=UPB_SMALL_KERR,
            unconventional_delta=UPB_SMALL_DELTA,
        )
    if name == "custom":
        return dict(
            base_params=_kappa_units(),
            axis1=Axis("delta_a", -100.0, 60.0, 161, "delta_a"),
            detuning_rule="equal",
        )
    raise ConfigError(f"unknown scenario {name!r}")


def _fig4_series(kerr_values):
    series = []
    columns = []
    for i, k in enumerate(kerr_values):
        tag = f"K{k:g}"
        series.append(Series(tag, (("kerr", float(k)),)))
        columns.append((f"g2_coupled_{tag}", "g2", i))
        columns.append((f"g2_jc_{tag}", "g2_jc", i))
    return tuple(series), tuple(columns)


def _fig7_series(kerr_conv, kerr_unconv, delta_unconv):
    series = (
        Series("conventional", (("kerr", kerr_conv),), "single_photon_plus"),
        Series(
            "unconventional",
            (("kerr", kerr_unconv), ("delta_a", delta_unconv), ("delta_b", delta_unconv)),
            "none",
        ),
    )
    columns = (("g2_conventional", "g2", 0), ("g2_unconventional", "g2", 1))
    return series, columns


# -- config parsing -----------------------------------------------------------

PARAM_KEYS = set(PARAM_FIELDS) | {"delta", "kappa"}
OTHER_KEYS = {
    "scenario",
    "method",
    "axis1",
    "axis2",
    "n_max_a",
    "n_max_b",
    "output",
    "detuning_rule",
    "converge",
    "kerr_values",
    "unconventional_kerr",
    "unconventional_delta",
}
KNOWN_KEYS = PARAM_KEYS | OTHER_KEYS


def _err(text: str, loc) -> ConfigError:
    """Config error located at a line number, or at a ``--set`` override."""
    if isinstance(loc, int) or loc is None:
        return ConfigError(text, loc)
    return ConfigError(f"{loc}: {text}")


def _split_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _err(f"expected key=value, got {raw.strip()!r}", lineno)
        key, value = line.split("=", 1)
        yield key.strip(), value.strip(), lineno


def _number(value: str, key: str, loc) -> float:
    try:
        x = float(value)
    except ValueError:
        raise _err(f"{key}: cannot parse number {value!r}", loc) from None
    if not math.isfinite(x):
        raise _err(f"{key}: value must be finite, got {value!r}", loc)
    return x


def _integer(value: str, key: str, loc) -> int:
    x = _number(value, key, loc)
    if x != int(x):
        raise _err(f"{key}: expected an integer, got {value!r}", loc)
    return int(x)


def _boolean(value: str, key: str, loc) -> bool:
    v = value.lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise _err(f"{key}: expected a boolean, got {value!r}", loc)


def _axis(value: str, key: str, loc) -> Axis | None:
    if value.lower() == "none":
        return None
    parts = [s.strip() for s in value.split(",")]
    if len(parts) != 4:
        raise _err(f"{key}: expected 'name, start, stop, count', got {value!r}", loc)
    start = _number(parts[1], key, loc)
    stop = _number(parts[2], key, loc)
    count = _integer(parts[3], key, loc)
    try:
        return Axis(parts[0], start, stop, count)
    except ConfigError as exc:
        raise _err(str(exc), loc) from None


def _check_param(key: str, x: float, loc):
    if key in ("kappa_a", "kappa_b", "kappa") and x <= 0:
        raise _err(f"{key} must be > 0 (decay rates are positive), got {x:g}", loc)
    if key == "drive" and x < 0:
        raise _err(f"drive must be >= 0, got {x:g}", loc)
    if key in ("nbar_a", "nbar_b") and x < 0:
        raise _err(f"{key} must be >= 0, got {x:g}", loc)


def parse_config(text: str, overrides=()) -> SweepSpec:
    """Parse config text, then apply ``overrides`` (``key=value`` strings) on top.

    Errors carry the config line number, or ``--set <key>`` for an override.
    """
    entries = {}
    for key, value, lineno in _split_lines(text):
        if key not in KNOWN_KEYS:
            raise _err(f"unknown key {key!r}", lineno)
        entries[key] = (value, lineno)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"--set: unknown key {key!r}")
        entries[key] = (value, f"--set {key}")
    return _resolve(entries)


def _resolve(entries: dict) -> SweepSpec:
    def loc(key):
        return entries[key][1] if key in entries else None

    def value(key):
        return entries[key][0]

    scenario = entries.get("scenario", ("custom", None))[0]
    if scenario not in SCENARIOS:
        raise _err(f"unknown scenario {scenario!r} (choose from {', '.join(SCENARIOS)})", loc("scenario"))
    fields = preset(scenario)
    params = fields.pop("base_params").as_dict()
    kerr_values = fields.pop("kerr_values", None)
    unconv_kerr = fields.pop("unconventional_kerr", None)
    unconv_delta = fields.pop("unconventional_delta", None)

    for key in ("delta", "kappa", *PARAM_FIELDS):
        if key in entries:
            x = _number(value(key), key, loc(key))
            _check_param(key, x, loc(key))
            if key in ("delta", "kappa"):
                params[f"{key}_a"] = params[f"{key}_b"] = x
            else:
                params[key] = x

    for key in ("axis1", "axis2"):
        if key in entries:
            ax = _axis(value(key), key, loc(key))
            if key == "axis1" and ax is None:
                raise _err("axis1 is required", loc(key))
            fields[key] = ax
    if "method" in entries:
        if value("method") not in METHODS:
            raise _err(f"unknown method {value('method')!r} (choose from {', '.join(METHODS)})", loc("method"))
        fields["method"] = value("method")
        if scenario not in ("fig4_jc", "fig7_thermal"):
            fields.pop("columns", None)
    if "detuning_rule" in entries:
        if value("detuning_rule") not in DETUNING_RULES:
            raise _err(f"unknown detuning_rule {value('detuning_rule')!r}", loc("detuning_rule"))
        fields["detuning_rule"] = value("detuning_rule")
    if "converge" in entries:
        fields["converge"] = _boolean(value("converge"), "converge", loc("converge"))
    if "output" in entries:
        fields["output_path"] = value("output")

    t = fields.get("truncation", lb.DEFAULT_TRUNCATION)
    cutoffs = {"n_max_a": t.n_max_a, "n_max_b": t.n_max_b}
    for key in cutoffs:
        if key in entries:
            cutoffs[key] = _integer(value(key), key, loc(key))
            if cutoffs[key] < 1:
                raise _err(f"{key} must be >= 1, got {cutoffs[key]}", loc(key))
    fields["truncation"] = Truncation(cutoffs["n_max_a"], cutoffs["n_max_b"])

    if "kerr_values" in entries:
        if scenario != "fig4_jc":
            raise _err("kerr_values only applies to fig4_jc", loc("kerr_values"))
        kerr_values = tuple(_number(s.strip(), "kerr_values", loc("kerr_values")) for s in value("kerr_values").split(","))
    for key in ("unconventional_kerr", "unconventional_delta"):
        if key in entries:
            if scenario != "fig7_thermal":
                raise _err(f"{key} only applies to fig7_thermal", loc(key))
            x = _number(value(key), key, loc(key))
            if key == "unconventional_kerr":
                unconv_kerr = x
            else:
                unconv_delta = x

    if scenario == "fig4_jc":
        fields["series"], fields["columns"] = _fig4_series(kerr_values)
    if scenario == "fig7_thermal":
        fields["series"], fields["columns"] = _fig7_series(params["kerr"], unconv_kerr, unconv_delta)

    try:
        base = SystemParams(**params)
    except BlockadeError as exc:
        bad = [k for k in PARAM_FIELDS if k in str(exc)]
        raise _err(str(exc), loc(bad[0]) if bad else None) from None
    settings = tuple(sorted((k, v[0]) for k, v in entries.items()))
    try:
        return SweepSpec(scenario=scenario, base_params=base, settings=settings, **fields)
    except BlockadeError as exc:
        raise ConfigError(str(exc)) from None


# -- running ------------------------------------------------------------------


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        from . import __version__

        return __version__


def run_sweep(spec: SweepSpec, write: bool = True) -> SweepResult:
    """Evaluate every grid point; write CSV and sidecar when ``spec.output_path`` is set."""
    started = time.perf_counter()
    header = [spec.axis1.header]
    if spec.axis2 is not None:
        header.append(spec.axis2.header)
    header += [c[0] for c in spec.columns] + ["error_code"]

    limit = MAX_FAILED_FRACTION * spec.size
    rows = []
    failed = 0
    codes_seen = {}
    for v1, v2 in spec.grid():
        points = {}
        row = [float(v1)] + ([float(v2)] if spec.axis2 is not None else [])
        codes = []
        for _, quantity, idx in spec.columns:
            try:
                if idx not in points:
                    points[idx] = _Point(point_params(spec, spec.series[idx], v1, v2), spec)
                row.append(float(points[idx].quantity(quantity)))
            except BlockadeError as exc:
                row.append(None)
                code = type(exc).__name__
                if code not in codes:
                    codes.append(code)
        row.append(";".join(codes))
        if codes:
            failed += 1
            for c in codes:
                codes_seen[c] = codes_seen.get(c, 0) + 1
            if failed > limit:
                summary = ", ".join(f"{k} x{n}" for k, n in sorted(codes_seen.items()))
                raise SweepAbortedError(
                    f"{failed} of {spec.size} grid points failed (limit {MAX_FAILED_FRACTION:.0%}): {summary}"
                )
        rows.append(row)

    result = SweepResult(header, rows, _metadata(spec, failed, time.perf_counter() - started), failed)
    if write and spec.output_path:
        result.write(spec.output_path)
    return result


def _metadata(spec: SweepSpec, failed: int, elapsed: float) -> dict:
    meta = {
        "artifact_version": _version(),
        "scenario": spec.scenario,
        "method": spec.method,
    }
    for k, v in spec.base_params.as_dict().items():
        meta[k] = format(v, FLOAT_FORMAT)
    for key in ("axis1", "axis2"):
        ax = getattr(spec, key)
        meta[key] = "none" if ax is None else f"{ax.name},{ax.start!r},{ax.stop!r},{ax.count}"
    meta["detuning_rule"] = spec.detuning_rule
    meta["truncation"] = f"{spec.truncation.n_max_a},{spec.truncation.n_max_b}"
    meta["converge"] = str(spec.converge).lower()
    for s in spec.series:
        if s.suffix:
            extra = ";".join(f"{k}={v!r}" for k, v in s.overrides)
            meta[f"series_{s.suffix}"] = f"{extra};rule={s.detuning_rule or spec.detuning_rule}"
    for k, v in spec.settings:
        meta[f"config.{k}"] = v
    meta["points"] = str(spec.size)
    meta["failed_points"] = str(failed)
    meta["python"] = platform.python_version()
    meta["numpy"] = np.__version__
    meta["finished_utc"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta["wall_clock_s"] = f"{elapsed:.3f}"
    return meta


# -- command line -------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ccblockade", description="Run photon-blockade parameter sweeps.")
    ap.add_argument("--config", help="flat key=value config file")
    ap.add_argument("--scenario", help="preset name (overrides the config)")
    ap.add_argument("--out", help="CSV output path (overrides the config)")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one config key")
    ap.add_argument("--list-scenarios", action="store_true", help="print preset names and exit")
    return ap


def cli_main(argv=None) -> int:
    """Exit status: 0 success, 1 invalid input, 2 runtime failure."""
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.list_scenarios:
        for name in SCENARIOS:
            print(name)
        return 0

    text = ""
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot read config {args.config}: {exc.strerror or exc}", file=sys.stderr)
            return 1
    elif not args.scenario:
        print("error: give --config or --scenario (see --list-scenarios)", file=sys.stderr)
        return 1
    overrides = list(args.set)
    if args.scenario:
        overrides.insert(0, f"scenario={args.scenario}")
    if args.out:
        overrides.append(f"output={args.out}")
    try:
        spec = parse_config(text, overrides)
    except ConfigError as exc:
        where = f"{args.config}: " if args.config and exc.line is not None else ""
        print(f"error: {where}{exc}", file=sys.stderr)
        return 1
    if not spec.output_path:
        spec = dataclasses.replace(spec, output_path=f"{spec.scenario}.csv")
    try:
        result = run_sweep(spec)
    except (BlockadeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(result.rows)} rows to {spec.output_path} ({result.failures} failed points)", file=sys.stderr)
    return 0


def main() -> None:  # pragma: no cover - console entry point
    sys.exit(cli_main())


if __name__ == "__main__":  # pragma: no cover
    main()
