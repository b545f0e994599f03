"""riemann-lab command line: potentials, WKB and exact spectra, perturbations, sweeps."""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from riemann_lab import __version__
from riemann_lab.analysis import (Report, UnderdeterminedFitError, compare_counts,
                                  fit_dispersion, staircase)
from riemann_lab.kernels import BACKEND
from riemann_lab.perturbation import (RH_PREFACTOR, ClosedForm, ClosedFormParams,
                                      StateSource, perturbed_spectrum)
from riemann_lab.potential import (MODEL_NAMES, SWEEP_FAMILY, RiemannPrincipal, SMode,
                                   make_model)
from riemann_lab.quantizer import (counting_function, get_rule, phase_integral,
                                   wkb_spectrum)
from riemann_lab.schrodinger import GridSpec, solve_spectrum
from riemann_lab.zeros import ZeroSet, ZeroTableError, default_zero_path, load_zeros

# natural dispersion law per sweep variant
SWEEP_LAWS = {
    "log": "exp", "linear": "power", "quadratic": "power", "exponential": "log",
    "power-near-harmonic": "power", "log-corrected": "power",
}
SWEEP_ORDER = ("log", "linear", "quadratic", "log-corrected", "exponential")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str = "riemann-principal"
    epsilon: float = 0.1
    b: int = 2
    rule: str = "paper"
    zeros: str | None = None
    zero_limit: int | None = None
    s_mode: str = SMode.TERM_SUM.value
    fmt: str = "csv"
    output: str | None = None
    x: str = "0:10:0.5"
    n: str | None = None
    method: str = "fd"
    x_max: float = 0.0
    points: int = 2000
    tol: float = 1e-7
    source: str = StateSource.EXACT.value
    form: str = ClosedForm.LINEAR.value
    scale: float = 1.0
    alpha_1: float | None = None
    delta: float = 1.5
    window: str = "100:1000"
    n_window: str = "100:2000"
    samples: int = 40
    match_energy: float = 100.0

    def __post_init__(self):
        if self.tol <= 0.0:
            raise ConfigError("--tol must be positive")
        if self.zero_limit is not None and self.zero_limit < 0:
            raise ConfigError("--zero-limit must be non-negative")
        if self.samples < 1:
            raise ConfigError("--samples must be positive")

    def metadata(self, zero_count: int | None = None) -> dict:
        meta = {"tool": "riemann-lab", "version": __version__, "command": self.command}
        keep = ("model", "epsilon", "b", "rule", "s_mode", "tol")
        d = asdict(self)
        meta.update({k: d[k] for k in keep})
        if zero_count is not None:
            meta["zero_count"] = zero_count
        return meta


def parse_range(text: str, what: str) -> tuple[int, int]:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise ConfigError(f"{what} must look like a:b, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise ConfigError(f"{what} range {text!r} is empty")
    return lo, hi


def parse_grid(text: str) -> np.ndarray:
    """start:stop:step, stop included when it lies on the grid."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise ConfigError(f"--x must look like start:stop:step, got {text!r}") from None
    if step <= 0.0 or stop < start:
        raise ConfigError(f"--x grid {text!r} is empty")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def parse_window(text: str, what: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise ConfigError(f"{what} must look like lo:hi, got {text!r}") from None
    if not hi > lo:
        raise ConfigError(f"{what} {text!r} is empty")
    return lo, hi


def load_config_zeros(cfg: RunConfig) -> ZeroSet:
    path = cfg.zeros or str(default_zero_path())
    try:
        return load_zeros(path, cfg.zero_limit)
    except FileNotFoundError:
        raise ConfigError(f"zero table not found: {path}") from None
    except ZeroTableError as exc:
        raise ConfigError(str(exc)) from None


def build_model(cfg: RunConfig, zeros: ZeroSet | None = None):
    if cfg.model not in MODEL_NAMES:
        raise ConfigError(f"unknown model {cfg.model!r}")
    if cfg.model in ("riemann-full", "riemann-integral") and zeros is None:
        zeros = load_config_zeros(cfg)
    return make_model(cfg.model, epsilon=cfg.epsilon, b=cfg.b, zeros=zeros,
                      s_mode=SMode(cfg.s_mode)), zeros


def cmd_potential(cfg: RunConfig) -> Report:
    model, zeros = build_model(cfg)
    xs = parse_grid(cfg.x)
    rep = Report(["x", "V"], metadata=cfg.metadata(len(zeros) if zeros is not None else None))
    for x, v in zip(xs, np.asarray(model(xs), dtype=float)):
        rep.add(float(x), float(v))
    return rep


def cmd_wkb(cfg: RunConfig) -> Report:
    model, zeros = build_model(cfg)
    lo, hi = parse_range(cfg.n or "0:9", "--n")
    rule = get_rule(cfg.rule)
    spec = wkb_spectrum(model, range(lo, hi + 1), rule)
    meta = cfg.metadata(len(zeros) if zeros is not None else None)
    meta.update(mu=rule.mu, nu=rule.nu)
    rep = Report(["N", "E_N", "x_T", "phi"], metadata=meta)
    for n, e in zip(spec.indices, spec.eigenvalues):
        ph = phase_integral(model, e)
        rep.add(int(n), e, ph.x_t, ph.phi)
    return rep


def cmd_solve(cfg: RunConfig) -> Report:
    model, zeros = build_model(cfg)
    lo, hi = parse_range(cfg.n or "0:4", "--n")
    grid = GridSpec(x_max=cfg.x_max, n_points=cfg.points, method=cfg.method, rel_tol=cfg.tol)
    spec = solve_spectrum(model, grid, hi + 1)
    meta = cfg.metadata(len(zeros) if zeros is not None else None)
    meta.update(method=cfg.method, x_max=spec.provenance["x_max"],
                n_points=spec.provenance["n_points"])
    meta.pop("rule")
    rep = Report(["N", "E_N_exact"], metadata=meta)
    for n in range(lo, hi + 1):
        rep.add(n, spec.eigenvalues[n])
    return rep


def cmd_perturb(cfg: RunConfig) -> Report:
    zeros = load_config_zeros(cfg)
    lo, hi = parse_range(cfg.n or "1:100", "--n")
    params = (ClosedFormParams(cfg.delta, cfg.alpha_1) if cfg.alpha_1 is not None
              else ClosedFormParams.from_zeros(zeros, cfg.delta))
    levels = perturbed_spectrum(RiemannPrincipal(), zeros, SMode(cfg.s_mode), range(lo, hi + 1),
                                get_rule(cfg.rule), source=cfg.source, form=cfg.form,
                                params=params)
    meta = cfg.metadata(len(zeros))
    meta.update(model="riemann-principal", source=cfg.source, form=cfg.form, scale=cfg.scale,
                delta=params.delta, alpha_1=params.alpha_1, linear_constant=params.C,
                rh_prefactor=RH_PREFACTOR,
                note="rh closed form uses 3pi/4, linear application uses B(delta+1,1/2)")
    rep = Report(["N", "E_N0", "E_N1_numeric", "E_N1_closed", "x_T", "E_N1_scaled"],
                 metadata=meta)
    for lv in levels:
        rep.add(lv.N, lv.E_N0, lv.E_N1_numeric, lv.E_N1_closed, lv.x_T,
                cfg.scale * lv.E_N1_numeric)
    return rep


def cmd_compare(cfg: RunConfig) -> Report:
    zeros = load_config_zeros(cfg)
    model, _ = build_model(cfg, zeros)
    lo, hi = parse_window(cfg.window, "--window")
    rule = get_rule(cfg.rule)
    top = int(math.ceil(counting_function(model, hi, rule))) + 2
    spec = wkb_spectrum(model, range(0, max(top, 1)), rule)
    res = compare_counts(spec, zeros, (lo, hi))
    rep = Report(["E_lo", "E_hi", "shift", "mean_abs_residual", "max_abs_residual",
                  "relative_residual", "n_points"], metadata=cfg.metadata(len(zeros)))
    rep.add(res.window[0], res.window[1], res.shift, res.mean_abs_residual,
            res.max_abs_residual, res.relative, res.n_points)
    return rep


def cmd_sweep(cfg: RunConfig) -> tuple[Report, bool]:
    lo, hi = parse_range(cfg.n_window, "--n-window")
    rule = get_rule(cfg.rule)
    ns = np.unique(np.round(np.geomspace(max(lo, 1), hi, cfg.samples)).astype(int))
    if lo == 0:
        ns = np.unique(np.concatenate(([0], ns)))
    rep = Report(["variant", "law", "parameter", "value", "rms_residual", "n_samples",
                  "N_at_match", "error"], metadata=cfg.metadata())
    rep.metadata.pop("model")
    rep.metadata.update(n_window=cfg.n_window, match_energy=cfg.match_energy)
    ok = True
    matched = {}
    for name in SWEEP_FAMILY:
        model = make_model(name, epsilon=cfg.epsilon, b=cfg.b)
        law = SWEEP_LAWS[name]
        n_match = counting_function(model, cfg.match_energy, rule)
        matched[name] = n_match
        try:
            fit = fit_dispersion(staircase(wkb_spectrum(model, ns, rule)), law)
        except UnderdeterminedFitError as exc:
            ok = False
            rep.add(name, law, "", float("nan"), float("nan"), int(ns.size), n_match, str(exc))
            continue
        key, val = next(iter(fit.params.items()))
        rep.add(name, law, key, val, fit.rms_residual, fit.n_samples, n_match, "")
    order = all(matched[a] > matched[b] for a, b in zip(SWEEP_ORDER, SWEEP_ORDER[1:]))
    rep.metadata["ordering"] = " > ".join(SWEEP_ORDER)
    rep.metadata["ordering_holds"] = order
    return rep, ok


def _add_common(p: argparse.ArgumentParser, model=True):
    if model:
        p.add_argument("--model", default="riemann-principal", choices=MODEL_NAMES)
        p.add_argument("--epsilon", type=float, default=0.1,
                       help="exponent offset for power-near-harmonic")
        p.add_argument("--b", type=int, default=2, help="log power for log-corrected")
    p.add_argument("--rule", default="paper", choices=("paper", "standard"))
    p.add_argument("--zeros", help="zero table (default: $RIEMANN_LAB_ZEROS or bundled table)")
    p.add_argument("--zero-limit", type=int, help="use only the first K zeros")
    p.add_argument("--s-mode", default=SMode.TERM_SUM.value, choices=[m.value for m in SMode])
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--format", dest="fmt", default="csv", choices=("csv", "json"))
    p.add_argument("--output", "-o", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="riemann-lab", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="tabulate V(x)")
    _add_common(p)
    p.add_argument("--x", default="0:10:0.5", help="start:stop:step (inclusive)")

    p = sub.add_parser("wkb", help="WKB eigenvalues")
    _add_common(p)
    p.add_argument("--n", default="0:9", help="a:b quantum numbers (inclusive)")

    p = sub.add_parser("solve", help="grid eigenvalues")
    _add_common(p)
    p.add_argument("--n", default="0:4")
    p.add_argument("--method", default="fd", choices=("fd", "numerov"))
    p.add_argument("--x-max", type=float, default=0.0, help="0 picks it from the WKB estimate")
    p.add_argument("--points", type=int, default=2000)

    p = sub.add_parser("perturb", help="first-order level shifts")
    _add_common(p, model=False)
    p.add_argument("--n", default="1:100")
    p.add_argument("--source", default=StateSource.EXACT.value, choices=[s.value for s in StateSource])
    p.add_argument("--form", default=ClosedForm.LINEAR.value, choices=[f.value for f in ClosedForm])
    p.add_argument("--scale", type=float, default=1.0, help="factor for the E_N1_scaled column")
    p.add_argument("--alpha-1", type=float, help="override the lowest zero height")
    p.add_argument("--delta", type=float, default=1.5)

    p = sub.add_parser("compare", help="WKB staircase against the zero staircase")
    _add_common(p)
    p.add_argument("--window", default="100:1000", help="lo:hi energy window")

    p = sub.add_parser("sweep", help="dispersion fits for the comparison family")
    _add_common(p, model=False)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--n-window", default="100:2000")
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--match-energy", type=float, default=100.0)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields and v is not None})


COMMANDS = {"potential": cmd_potential, "wkb": cmd_wkb, "solve": cmd_solve,
            "perturb": cmd_perturb, "compare": cmd_compare}


def run(cfg: RunConfig) -> tuple[str, bool]:
    if cfg.command == "sweep":
        rep, ok = cmd_sweep(cfg)
    else:
        rep, ok = COMMANDS[cfg.command](cfg), True
    return rep.render(cfg.fmt), ok


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        text, ok = run(cfg)
    except (ConfigError, ValueError, RuntimeError) as exc:
        print(f"riemann-lab: error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, ConfigError) else 1
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
