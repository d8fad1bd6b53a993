"""Named-state registry, per-state measure reports and their CSV/JSON serialization."""

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from qcorr import __version__, measures, states
from qcorr.errors import InvalidArgument, NumericFailure
from qcorr.qlinalg import SZ, partial_trace

CSV_COLUMNS = (
    "state", "p", "q", "n", "k", "theta", "phi",
    "entropy_joint", "entropy_A", "entropy_B",
    "discord_A", "discord_B", "discord_fn_A", "discord_fn_B",
    "concurrence", "negativity", "entangled", "label",
)  # fmt: skip

MEASURES = (
    "dA", "dB", "discord_function_A", "discord_function_B",
    "concurrence", "negativity", "covariance", "classification",
)  # fmt: skip

# state name -> parameters it reads
STATE_PARAMS = {
    "rho_a": (),
    "rho_b": ("p",),
    "rho_c": ("q",),
    "rho1": ("p",),
    "rho2": ("p",),
    "rho3": ("p",),
    "rho4": ("p",),
    "werner": ("p",),
    "gwerner": ("p", "n", "k"),
    "bell": (),
    "file": (),
}
PARAM_DEFAULTS = {"n": 0.0, "k": 1.0}


@dataclass(frozen=True)
class Settings:
    grid: int = measures.GRID_SIZE
    refine_iters: int = measures.REFINE_ITERS
    zero_tol: float = measures.DISCORD_ZERO_TOL
    psd_tol: float = 1e-10

    def header(self, extra: str = "") -> str:
        line = (
            f"# qcorr {__version__} grid={self.grid} refine_iters={self.refine_iters} "
            f"zero_tol={self.zero_tol:g} psd_tol={self.psd_tol:g} phi_default=0"
        )
        return f"{line} {extra}".rstrip()


def build_state(name: str, params: dict, path: str | None = None) -> np.ndarray:
    """Construct a named state; missing required parameters raise :class:`InvalidArgument`."""
    if name not in STATE_PARAMS:
        raise InvalidArgument(f"unknown state {name!r}; choose from {', '.join(STATE_PARAMS)}")
    values = {**PARAM_DEFAULTS, **{k: v for k, v in params.items() if v is not None}}
    for needed in STATE_PARAMS[name]:
        if needed not in values:
            raise InvalidArgument(f"state {name!r} requires --{needed}")
    if name == "rho_a":
        return states.rho_abc("a")
    if name == "rho_b":
        return states.rho_abc("b", values["p"])
    if name == "rho_c":
        return states.rho_abc("c", values["q"])
    if name.startswith("rho"):
        return states.rho_1234(int(name[3:]), values["p"])
    if name == "werner":
        return states.werner(values["p"])
    if name == "gwerner":
        return states.generalized_werner(values["p"], values["n"], values["k"])
    if name == "bell":
        return states.bell()
    if path is None:
        raise InvalidArgument("state 'file' requires --path")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidArgument(f"cannot read {path}: {exc.strerror}") from None
    return states.load_density_matrix(text)


@dataclass
class MeasureReport:
    state: str
    p: float | None = None
    q: float | None = None
    n: complex | float | None = None
    k: float | None = None
    theta: float | None = None
    phi: float | None = None
    entropy_joint: float | None = None
    entropy_A: float | None = None
    entropy_B: float | None = None
    discord_A: float | None = None
    discord_B: float | None = None
    discord_fn_A: float | None = None
    discord_fn_B: float | None = None
    concurrence: float | None = None
    negativity: float | None = None
    entangled: bool | None = None
    label: str | None = None
    covariance: float | None = None
    argmin_theta_A: float | None = None
    argmin_phi_A: float | None = None
    iterations_A: int | None = None
    argmin_theta_B: float | None = None
    argmin_phi_B: float | None = None
    iterations_B: int | None = None

    def label_consistent(self, zero_tol: float = measures.DISCORD_ZERO_TOL) -> bool:
        if self.label is None:
            return True
        if self.entangled is None or self.discord_A is None or self.discord_B is None:
            return False
        dv = measures.DiscordVector(self.discord_B, self.discord_A)
        return str(measures.label_for(self.entangled, dv, zero_tol)) == self.label

    def to_json_dict(self) -> dict:
        out = asdict(self)
        if isinstance(self.n, complex):
            out["n"] = self.n.real if self.n.imag == 0 else {"re": self.n.real, "im": self.n.imag}
        return out

    def csv_row(self) -> str:
        return ",".join(format_value(getattr(self, c)) for c in CSV_COLUMNS)


def format_number(x: float) -> str:
    """9 significant digits; scientific notation when |x| is outside [1e-4, 1e7)."""
    x = float(x)
    if x == 0 or not math.isfinite(x):
        return "0" if x == 0 else str(x).lower()
    if 1e-4 <= abs(x) < 1e7:
        return f"{x:.9g}"
    mantissa, exponent = f"{x:.8e}".split("e")
    mantissa = mantissa.rstrip("0").rstrip(".")
    return f"{mantissa}e{exponent}"


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, complex):
        if value.imag == 0:
            return format_number(value.real)
        sign = "+" if value.imag >= 0 else "-"
        return f"{format_number(value.real)}{sign}{format_number(abs(value.imag))}j"
    if isinstance(value, (int, float, np.floating, np.integer)):
        return format_number(value)
    return str(value)


def _params_for(name: str, params: dict) -> dict:
    used = STATE_PARAMS.get(name, ())
    values = {**PARAM_DEFAULTS, **{k: v for k, v in params.items() if v is not None}}
    return {k: values.get(k) for k in used}


def compute_report(
    name: str,
    params: dict,
    selected,
    settings: Settings = Settings(),
    theta: float | None = None,
    phi: float | None = None,
    path: str | None = None,
    observables=None,
) -> MeasureReport:
    """Evaluate ``selected`` measures for one state.

    Entropies are always filled. ``classification`` also fills the entanglement flag and
    both discords so every row carries its own evidence. On :class:`NumericFailure` the
    partially filled report is attached to the exception as ``report``.
    """
    unknown = set(selected) - set(MEASURES)
    if unknown:
        raise InvalidArgument(f"unknown measures {sorted(unknown)}; choose from {', '.join(MEASURES)}")
    rho = build_state(name, params, path)
    report = MeasureReport(state=name, **_params_for(name, params))
    selected = set(selected)
    try:
        report.entropy_joint = measures.entropy(rho)
        report.entropy_A = measures.entropy(partial_trace(rho, "A"))
        report.entropy_B = measures.entropy(partial_trace(rho, "B"))
        if {"discord_function_A", "discord_function_B"} & selected:
            report.theta = 0.0 if theta is None else theta
            report.phi = 0.0 if phi is None else phi
            basis = measures.MeasurementBasis(report.theta, report.phi)
            if "discord_function_A" in selected:
                report.discord_fn_A = measures.discord_function(rho, "A", basis)
            if "discord_function_B" in selected:
                report.discord_fn_B = measures.discord_function(rho, "B", basis)
        if "negativity" in selected or "classification" in selected:
            report.negativity = measures.negativity(rho)
            report.entangled = measures.is_entangled(rho, settings.psd_tol)
        if "concurrence" in selected:
            report.concurrence = measures.concurrence(rho, settings.psd_tol)
        if "covariance" in selected:
            ox, oy = observables if observables is not None else (None, None)
            report.covariance = measures.covariance(rho, *(_default_observables(ox, oy)))
        for side in ("A", "B"):
            if f"d{side}" in selected or "classification" in selected:
                res = measures.minimize_discord(rho, side, settings.grid, settings.refine_iters)
                setattr(report, f"discord_{side}", res.value)
                setattr(report, f"argmin_theta_{side}", res.theta)
                setattr(report, f"argmin_phi_{side}", res.phi)
                setattr(report, f"iterations_{side}", res.iterations)
        if "classification" in selected:
            dv = measures.DiscordVector(report.discord_B, report.discord_A)
            report.label = str(measures.label_for(report.entangled, dv, settings.zero_tol))
    except NumericFailure as exc:
        exc.report = report
        raise
    return report


def _default_observables(ox, oy):
    return (SZ if ox is None else ox), (SZ if oy is None else oy)


def render_csv(reports, settings: Settings, extra_header: str = "") -> str:
    lines = [settings.header(extra_header), ",".join(CSV_COLUMNS)]
    lines += [r.csv_row() for r in reports]
    return "\n".join(lines) + "\n"


def render_json(reports) -> str:
    return json.dumps([r.to_json_dict() for r in reports], indent=2) + "\n"


REPORT_FIELDS = tuple(f.name for f in fields(MeasureReport))
