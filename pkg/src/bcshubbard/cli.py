"""Command-line front end: point reports, sweeps, transitions, fixed filling, oracle."""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NoTransition, ValidationError
from .free_energy import gap_residual, solve_gap
from .observables import DiscontinuityReport, observable_set, specific_heat
from .params import FIELDS, ModelParams, validate
from .phase import (CoexistenceSplit, chemical_potential_at_density, critical_temperature)
from .zero_temperature import critical_field, mott_window, zero_t_observables

OUTPUTS = ("p", "r", "d", "m", "w", "eps", "c", "theta_c", "order", "regime")
EXIT_INVALID = 2


class SpecError(ValueError):
    pass


def fmt(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".15g")


def write_csv(header, rows, out) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


# ---- sweep specification --------------------------------------------------


@dataclass
class Axis:
    name: str
    min: float
    max: float
    count: int
    scale: str = "linear"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)

    @classmethod
    def parse(cls, text: str) -> "Axis":
        # name:min:max:count[:linear|log]
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise SpecError(f"axis {text!r} is not name:min:max:count[:scale]")
        try:
            ax = cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]),
                     parts[4] if len(parts) == 5 else "linear")
        except ValueError as exc:
            raise SpecError(f"axis {text!r}: {exc}") from None
        return ax


@dataclass
class SweepSpec:
    axis1: Axis
    axis2: Axis | None = None
    fixed: dict = field(default_factory=dict)
    outputs: list = field(default_factory=lambda: ["p", "r", "d", "m", "w", "eps"])

    def check(self) -> "SweepSpec":
        axes = [a for a in (self.axis1, self.axis2) if a is not None]
        for a in axes:
            if a.name not in FIELDS:
                raise SpecError(f"unknown axis parameter {a.name!r}")
            if a.count < 2:
                raise SpecError(f"axis {a.name}: count must be >= 2")
            if not a.min < a.max:
                raise SpecError(f"axis {a.name}: min must be < max")
            if a.scale not in ("linear", "log"):
                raise SpecError(f"axis {a.name}: scale must be linear or log")
            if a.scale == "log" and a.min <= 0.0:
                raise SpecError(f"axis {a.name}: log scale needs min > 0")
        if len(axes) == 2 and axes[0].name == axes[1].name:
            raise SpecError("axes must name distinct parameters")
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad or not self.outputs:
            raise SpecError(f"unknown outputs {bad}; choose from {','.join(OUTPUTS)}")
        missing = [k for k in FIELDS if k not in self.fixed and k not in {a.name for a in axes}]
        needs_beta = any(o in ("p", "r", "d", "m", "w", "eps", "c") for o in self.outputs)
        if not needs_beta and "beta" in missing:
            missing.remove("beta")
        if missing:
            raise SpecError(f"parameters not fixed or swept: {','.join(missing)}")
        return self

    def to_dict(self) -> dict:
        d = {"axis1": asdict(self.axis1)}
        if self.axis2 is not None:
            d["axis2"] = asdict(self.axis2)
        d["fixed"] = dict(self.fixed)
        d["outputs"] = list(self.outputs)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        try:
            a1 = Axis(**d["axis1"])
            a2 = Axis(**d["axis2"]) if d.get("axis2") else None
            return cls(a1, a2, {k: float(v) for k, v in d.get("fixed", {}).items()},
                       list(d.get("outputs", cls.__dataclass_fields__["outputs"].default_factory())))
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed sweep spec: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def points(self):
        v1 = self.axis1.values()
        v2 = self.axis2.values() if self.axis2 else [None]
        for a in v1:
            for b in v2:
                pt = dict(self.fixed)
                pt[self.axis1.name] = float(a)
                if b is not None:
                    pt[self.axis2.name] = float(b)
                yield pt

    def header(self) -> list[str]:
        names = [self.axis1.name] + ([self.axis2.name] if self.axis2 else [])
        return names + list(self.outputs)


def _point_cells(task):
    pt, outputs = task
    cells, warns = [], []
    try:
        beta = pt.get("beta", 1.0)
        p = validate(beta, pt["mu"], pt["lambda"], pt["gamma"], pt.get("h", 0.0))
    except ValidationError as exc:
        return [math.nan] * len(outputs), [str(exc)]
    cache = {}

    def obs():
        if "obs" not in cache:
            cache["obs"] = observable_set(p)[-1]
        return cache["obs"]

    def transition():
        if "tc" not in cache:
            cache["tc"] = critical_temperature(p.mu, p.lam, p.gamma, p.h)
        return cache["tc"]

    getters = {
        "p": lambda: obs().pressure,
        "r": lambda: obs().r,
        "d": lambda: obs().densities.d,
        "m": lambda: obs().densities.m,
        "w": lambda: obs().densities.w,
        "eps": lambda: obs().energy_per_site,
        "c": lambda: specific_heat(p),
        "theta_c": lambda: transition().theta_c,
        "order": lambda: transition().order.value,
        "regime": lambda: zero_t_observables(p).regime.value,
    }
    for o in outputs:
        try:
            v = getters[o]()
        except Exception as exc:  # record and keep sweeping
            warns.append(f"{o} failed at {pt}: {exc}")
            v = math.nan
        if isinstance(v, DiscontinuityReport):
            warns.append(f"c: first-order transition inside stencil at {pt}")
            v = math.nan
        if v is None:
            v = math.nan
        cells.append(v)
    return cells, warns


def run_sweep(spec: SweepSpec, out, jobs: int = 1, err=None) -> int:
    err = err or sys.stderr
    spec.check()
    pts = list(spec.points())
    tasks = [(pt, spec.outputs) for pt in pts]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_point_cells, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_point_cells(t) for t in tasks]
    names = [spec.axis1.name] + ([spec.axis2.name] if spec.axis2 else [])
    rows = []
    for pt, (cells, warns) in zip(pts, results):
        for w in warns:
            print(f"warning: {w}", file=err)
        rows.append([pt[n] for n in names] + cells)
    write_csv(spec.header(), rows, out)
    return len(rows)


# ---- argument handling ----------------------------------------------------


def _add_params(sp, beta=True):
    if beta:
        sp.add_argument("--beta", type=float)
    sp.add_argument("--mu", type=float)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--h", type=float)
    sp.add_argument("--config", help="JSON file with keys beta, mu, lambda, gamma, h")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")


def _gather(args, need_beta=True, need_mu=True) -> dict:
    raw = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            raw.update(json.load(fh))
    for key, attr in (("beta", "beta"), ("mu", "mu"), ("lambda", "lam"),
                      ("gamma", "gamma"), ("h", "h")):
        v = getattr(args, attr, None)
        if v is not None:
            raw[key] = v
    raw.setdefault("h", 0.0)
    if not need_beta:
        raw.setdefault("beta", 1.0)
    if not need_mu:
        raw.setdefault("mu", 0.0)
    missing = [k for k in FIELDS if k not in raw]
    if missing:
        raise SpecError(f"missing parameters: {', '.join(missing)}")
    return raw


def _params(raw) -> ModelParams:
    return validate(raw["beta"], raw["mu"], raw["lambda"], raw["gamma"], raw["h"])


def _emit(args, header, rows, payload, out):
    if args.format == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")
    else:
        write_csv(header, rows, out)


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if hasattr(v, "value"):
        return v.value
    raise TypeError(repr(v))


def _zero_t_dict(p):
    z = zero_t_observables(p)
    d = {"r_inf": z.r_inf, "d_inf": z.d_inf, "m_inf": z.m_inf, "w_inf": z.w_inf,
         "e_inf": z.e_inf, "regime": z.regime.value}
    win = mott_window(p)
    d["mott_window"] = list(win) if win else None
    d["critical_field"] = critical_field(p)
    return d


def cmd_point(args, out):
    raw = _gather(args, need_beta=not args.zero_t)
    p = _params(raw)
    zt = _zero_t_dict(p)
    if args.zero_t:
        keys = ["r_inf", "d_inf", "m_inf", "w_inf", "e_inf", "regime"]
        _emit(args, keys, [[zt[k] for k in keys]], {"zero_t": zt}, out)
        return 0
    gs = solve_gap(p)
    sets = observable_set(p, gs)
    branches = []
    for s in sets:
        branches.append({"branch": s.from_maximizer, "p": s.pressure, "r": s.r,
                         "d": s.densities.d, "m": s.densities.m, "w": s.densities.w,
                         "eps": s.energy_per_site,
                         "gap_residual": gap_residual(s.r, p) if s.r > 0 else None})
    diag = {"stationary_points": list(gs.stationary_points), "is_critical": gs.is_critical,
            "f_at_max": gs.f_at_max}
    payload = {"params": p.as_dict(), "observables": branches, "gap": diag, "zero_t": zt}
    keys = ["branch", "p", "r", "d", "m", "w", "eps", "gap_residual"]
    header = keys + ["is_critical", "n_stationary", "regime_zero_t", "r_inf"]
    rows = [[b[k] for k in keys] + [gs.is_critical, len(gs.stationary_points),
                                    zt["regime"], zt["r_inf"]] for b in branches]
    _emit(args, header, rows, payload, out)
    return 0


def cmd_zero_t(args, out):
    args.zero_t = True
    return cmd_point(args, out)


def cmd_theta_c(args, out):
    raw = _gather(args, need_beta=False)
    p = _params(raw)
    rec = critical_temperature(p.mu, p.lam, p.gamma, p.h, args.beta_max)
    payload = {"theta_c": rec.theta_c, "beta_c": rec.beta_c, "order": rec.order.value,
               "r_jump": rec.r_jump, "monotone_flag": rec.monotone_flag}
    keys = list(payload)
    _emit(args, keys, [[payload[k] for k in keys]], payload, out)
    return 0


def cmd_density(args, out):
    raw = _gather(args, need_mu=False)
    validate(raw["beta"], 0.0, raw["lambda"], raw["gamma"], raw["h"])
    if not 0.0 < args.rho < 2.0:
        raise SpecError("--rho must lie in (0, 2)")
    res = chemical_potential_at_density(args.rho, raw["beta"], raw["lambda"], raw["gamma"], raw["h"])
    if isinstance(res, CoexistenceSplit):
        payload = {"kind": "coexistence", "rho": args.rho, **asdict(res)}
    else:
        payload = {"kind": "unique", "rho": args.rho, "mu": res}
    keys = list(payload)
    _emit(args, keys, [[payload[k] for k in keys]], payload, out)
    return 0


def cmd_oracle(args, out):
    from .observables import pressure
    from .oracle import finite_pressure

    p = _params(_gather(args))
    pinf = pressure(p)
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = []
    for n in sizes:
        pn = finite_pressure(n, p).pressure_n
        rows.append([n, pn, abs(pn - pinf)])
    payload = {"p": pinf, "rows": [{"n": n, "p_n": a, "abs_diff": b} for n, a, b in rows]}
    _emit(args, ["n", "p_n", "abs_diff"], rows, payload, out)
    return 0


def cmd_sweep(args, out):
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    if "axis1" in base:
        spec = SweepSpec.from_dict(base)
    else:
        if not args.axis1:
            raise SpecError("--axis1 is required")
        spec = SweepSpec(Axis.parse(args.axis1), fixed={k: float(v) for k, v in base.items()})
    if args.axis1 and "axis1" in base:
        spec.axis1 = Axis.parse(args.axis1)
    if args.axis2:
        spec.axis2 = Axis.parse(args.axis2)
    for key, attr in (("beta", "beta"), ("mu", "mu"), ("lambda", "lam"),
                      ("gamma", "gamma"), ("h", "h")):
        v = getattr(args, attr, None)
        if v is not None:
            spec.fixed[key] = v
    for a in (spec.axis1, spec.axis2):
        if a is not None:
            spec.fixed.pop(a.name, None)
    if "h" not in spec.fixed and "h" not in {a.name for a in (spec.axis1, spec.axis2) if a}:
        spec.fixed["h"] = 0.0
    if args.outputs:
        spec.outputs = [o.strip() for o in args.outputs.split(",") if o.strip()]
    spec.check()
    if args.dump_spec:
        out.write(spec.to_json() + "\n")
        return 0
    if args.out:
        with open(args.out, "w", newline="") as fh:
            run_sweep(spec, fh, args.jobs)
    else:
        run_sweep(spec, out, args.jobs)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bcshubbard", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("point", help="all observables at one parameter point")
    _add_params(sp)
    sp.add_argument("--zero-t", action="store_true", help="zero-temperature limits only")
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("zero-t", help="zero-temperature limits")
    _add_params(sp, beta=False)
    sp.set_defaults(func=cmd_zero_t)

    sp = sub.add_parser("theta-c", help="critical temperature and transition order")
    _add_params(sp, beta=False)
    sp.add_argument("--beta-max", type=float, default=100.0)
    sp.set_defaults(func=cmd_theta_c)

    sp = sub.add_parser("density", help="chemical potential at fixed electron density")
    _add_params(sp)
    sp.add_argument("--rho", type=float, required=True)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("oracle", help="exact finite-lattice pressures against the infinite-volume value")
    _add_params(sp)
    sp.add_argument("--sizes", default="2,4,6")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("sweep", help="grid of observables written as CSV")
    _add_params(sp)
    sp.add_argument("--axis1", help="name:min:max:count[:linear|log]")
    sp.add_argument("--axis2", help="name:min:max:count[:linear|log], varies fastest")
    sp.add_argument("--outputs", help=f"comma list from {','.join(OUTPUTS)}")
    sp.add_argument("--out", help="CSV file (stdout if omitted)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--dump-spec", action="store_true", help="print the resolved spec as JSON")
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ValidationError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NoTransition as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
