"""Command-line interface.

    exactharmonic check          -M <expr> -N <expr> | -u <expr> [--require-harmonic]
    exactharmonic solve          ...
    exactharmonic conjugate      ...
    exactharmonic conjugate-form ...
    exactharmonic trace          ... [--box x0,x1,y0,y1] [--levels a,b] [--seeds x:y;x:y] [--step h] [--max-points n]
    exactharmonic audit          ... [-v <expr>] [--box ...] [--grid nx,ny]
    exactharmonic report         -u <expr>

Output is JSON by default (``--format json|csv|svg|text``).  Exit codes:
0 ok, 1 usage/parse/engine error, 2 not exact, 3 not harmonic-admissible.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .calculus import diff, is_harmonic, laplacian
from .errors import ExactHarmonicError, NotExact, NotHarmonicAdmissible
from .exact import (
    DifferentialForm,
    analyze,
    check_cr,
    conjugate_form,
    form_from_potential,
    harmonic_conjugate,
    integrand_y_independent,
    is_exact,
    solve_exact,
)
from .expr import Expr, equivalent, evaluate, to_text
from .parser import parse
from .trajectories import orthogonality_audit, trace_form, trace_level_curve, trace_orthogonal

COMMANDS = ("check", "solve", "conjugate", "conjugate-form", "trace", "audit", "report")
FORMATS = ("json", "csv", "svg", "text")
EXIT_OK, EXIT_ERROR, EXIT_NOT_EXACT, EXIT_NOT_ADMISSIBLE = 0, 1, 2, 3
SVG_SIZE = 600
SEED_SCAN = 41
_VALUE_OPTS = {"-M", "-N", "-u", "-v", "--box", "--levels", "--seeds", "--grid"}


class UsageError(ExactHarmonicError):
    kind = "UsageError"


@dataclass
class RunConfig:
    command: str
    M_text: str | None = None
    N_text: str | None = None
    u_text: str | None = None
    v_text: str | None = None
    box: tuple = (-2.0, 2.0, -2.0, 2.0)
    levels: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    step: float = 0.01
    max_points: int = 10000
    grid: tuple = (20, 20)
    output_format: str = "json"
    require_harmonic: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        has_form = self.M_text is not None or self.N_text is not None
        if has_form == (self.u_text is not None):
            raise UsageError("supply exactly one of (-M and -N) or -u")
        if has_form and (self.M_text is None or self.N_text is None):
            raise UsageError("-M and -N must be given together")
        x0, x1, y0, y1 = self.box
        if not (x0 < x1 and y0 < y1):
            raise UsageError("box must satisfy x0 < x1 and y0 < y1")
        if not self.step > 0:
            raise UsageError("step must be positive")
        if self.max_points < 1:
            raise UsageError("max-points must be positive")
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.output_format == "csv" and self.command not in ("trace", "audit"):
            raise UsageError("csv output is only available for trace and audit")
        if self.output_format == "svg" and self.command != "trace":
            raise UsageError("svg output is only available for trace")
        if self.command == "report" and self.u_text is None:
            raise UsageError("report needs -u")
        if self.v_text is not None and self.command != "audit":
            raise UsageError("-v is only used by audit")


# ---------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str, n: int | None = None, sep: str = ",") -> tuple:
    try:
        vals = tuple(float(Fraction(t.strip())) for t in text.split(sep) if t.strip())
    except ValueError:
        raise UsageError(f"bad number list {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _seeds(text: str) -> list:
    out = []
    for item in text.split(";"):
        if item.strip():
            parts = item.split(":")
            if len(parts) != 2:
                raise UsageError(f"bad seed {item!r}; expected x:y")
            out.append(tuple(float(Fraction(p.strip())) for p in parts))
    return out


def _glue_values(argv: list) -> list:
    """Attach option values so expressions starting with '-' are not mistaken for flags."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}" if a.startswith("--") else a + argv[i + 1])
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="exactharmonic", description="Exact differential forms, harmonic conjugates and orthogonal trajectories.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("-M", dest="M_text", help="coefficient of dx")
    p.add_argument("-N", dest="N_text", help="coefficient of dy")
    p.add_argument("-u", dest="u_text", help="potential u(x, y); the form is u_x dx + u_y dy = 0")
    p.add_argument("-v", dest="v_text", help="second function for audit (default: the harmonic conjugate)")
    p.add_argument("--box", default="-2,2,-2,2", help="x0,x1,y0,y1")
    p.add_argument("--levels", default="", help="comma-separated level values for trace")
    p.add_argument("--seeds", default="", help="explicit trace seeds x:y;x:y")
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--max-points", type=int, default=10000)
    p.add_argument("--grid", default="20,20", help="audit grid nx,ny")
    p.add_argument("--format", dest="output_format", choices=FORMATS, default="json")
    p.add_argument("--require-harmonic", action="store_true")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    return p


def config_from_args(argv: list) -> tuple[RunConfig, str | None]:
    ns = build_parser().parse_args(_glue_values(list(argv)))
    grid = _floats(ns.grid, 2)
    cfg = RunConfig(
        command=ns.command,
        M_text=ns.M_text,
        N_text=ns.N_text,
        u_text=ns.u_text,
        v_text=ns.v_text,
        box=_floats(ns.box, 4),
        levels=list(_floats(ns.levels)),
        seeds=_seeds(ns.seeds),
        step=ns.step,
        max_points=ns.max_points,
        grid=(int(grid[0]), int(grid[1])),
        output_format=ns.output_format,
        require_harmonic=ns.require_harmonic,
    )
    cfg.validate()
    return cfg, ns.out


# ---------------------------------------------------------------------------
# orchestration


def _input_doc(cfg: RunConfig) -> dict:
    if cfg.u_text is not None:
        doc = {"u": cfg.u_text}
    else:
        doc = {"M": cfg.M_text, "N": cfg.N_text}
    if cfg.v_text is not None:
        doc["v"] = cfg.v_text
    if cfg.command == "trace":
        doc.update(box=list(cfg.box), step=cfg.step, max_points=cfg.max_points)
        if cfg.levels:
            doc["levels"] = list(cfg.levels)
        if cfg.seeds:
            doc["seeds"] = [list(s) for s in cfg.seeds]
    elif cfg.command == "audit":
        doc.update(box=list(cfg.box), grid=list(cfg.grid))
    return doc


def _form_doc(form: DifferentialForm) -> dict:
    return {"M": to_text(form.M), "N": to_text(form.N)}


def _report_doc(form: DifferentialForm) -> dict:
    rep = analyze(form)
    return {
        "exact": rep.exact,
        "exactness_witness": to_text(rep.exactness_witness),
        "harmonic_admissible": rep.harmonic_admissible,
        "admissibility_witness": to_text(rep.admissibility_witness),
    }


class _Run:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.doc = {"command": cfg.command, "input": _input_doc(cfg), "result": {}, "verification": {}, "errors": []}
        self.exit_code = EXIT_OK
        self.polylines: list = []
        self.audit = None
        self.u = None
        if cfg.u_text is not None:
            self.u = parse(cfg.u_text)
            self.form = form_from_potential(self.u)
        else:
            self.form = DifferentialForm(parse(cfg.M_text), parse(cfg.N_text))

    def fail(self, err: ExactHarmonicError, code: int) -> None:
        self.doc["errors"].append(err.to_dict())
        self.exit_code = max(self.exit_code, code)

    def potential(self) -> Expr:
        return self.u if self.u is not None else solve_exact(self.form).body

    def check(self):
        rep = _report_doc(self.form)
        self.doc["result"] = {"form": _form_doc(self.form), **rep}
        if not rep["exact"]:
            self.fail(NotExact(rep["exactness_witness"]), EXIT_NOT_EXACT)
        elif self.cfg.require_harmonic and not rep["harmonic_admissible"]:
            self.fail(NotHarmonicAdmissible(rep["admissibility_witness"]), EXIT_NOT_ADMISSIBLE)

    def solve(self):
        pot = solve_exact(self.form)
        fx = bool(equivalent(diff(pot.body, "x"), self.form.M))
        fy = bool(equivalent(diff(pot.body, "y"), self.form.N))
        self.doc["result"] = {"potential": to_text(pot.body), "constant": pot.constant_label}
        self.doc["verification"] = {"f_x_equals_M": fx, "f_y_equals_N": fy, "verified": fx and fy}

    def conjugate(self):
        f = self.potential()
        g = harmonic_conjugate(self.form)
        cr = check_cr(f, g.body)
        self.doc["result"] = {"potential": to_text(f), "conjugate": to_text(g.body), "constant": g.constant_label}
        self.doc["verification"] = {
            "cr_verified": cr,
            "integrand_y_independent": integrand_y_independent(self.form),
            "conjugate_harmonic": is_harmonic(g.body),
        }

    def conjugate_form(self):
        out = conjugate_form(self.form)
        rep = _report_doc(out)
        self.doc["result"] = {"form": _form_doc(out), **rep}
        if not rep["exact"]:
            self.doc["result"]["warning"] = "conjugate form is not exact; the input has no harmonic solution"
        self.doc["verification"] = {
            "exact_iff_input_admissible": rep["exact"] == analyze(self.form).harmonic_admissible,
        }

    def trace(self):
        cfg = self.cfg
        exact = is_exact(self.form).exact
        warnings = []
        if exact:
            f = self.potential()
            g = self._try_conjugate()
            seeds = list(cfg.seeds)
            if cfg.levels:
                for level in cfg.levels:
                    seed = find_level_seed(f, level, cfg.box)
                    if seed is None:
                        warnings.append(f"no point with potential = {level!r} found in box")
                    else:
                        seeds.append(seed)
            elif not seeds:
                seeds = default_seeds(cfg.box)
            for seed in seeds:
                try:
                    self.polylines.append(
                        trace_level_curve(f, seed, cfg.step, cfg.max_points, box=cfg.box, both_directions=True)
                    )
                    level = evaluate(g, seed) if g is not None else math.nan
                    self.polylines.append(
                        trace_orthogonal(f, seed, cfg.step, cfg.max_points, box=cfg.box, both_directions=True, level=level)
                    )
                except ExactHarmonicError as err:
                    warnings.append(f"seed {list(seed)}: {err}")
            self.doc["result"] = {"potential": to_text(f), "conjugate": to_text(g) if g is not None else None}
        else:
            if cfg.levels:
                raise ExactHarmonicError("levels need an exact form; give --seeds for non-exact forms")
            for seed in cfg.seeds or default_seeds(cfg.box):
                try:
                    for orth in (False, True):
                        self.polylines.append(
                            trace_form(self.form, seed, cfg.step, cfg.max_points, orthogonal=orth, box=cfg.box, both_directions=True)
                        )
                except ExactHarmonicError as err:
                    warnings.append(f"seed {list(seed)}: {err}")
            self.doc["result"] = {"potential": None, "conjugate": None}
        self.doc["result"]["polylines"] = [
            {
                "family": pl.family_label,
                "level": pl.level,
                "stop_reason": pl.stop_reason,
                "points": pl.points.tolist(),
            }
            for pl in self.polylines
        ]
        if warnings:
            self.doc["result"]["warnings"] = warnings

    def _try_conjugate(self):
        try:
            return harmonic_conjugate(self.form).body
        except ExactHarmonicError:
            return None

    def audit_cmd(self):
        cfg = self.cfg
        u = self.potential()
        v = parse(cfg.v_text) if cfg.v_text is not None else harmonic_conjugate(self.form).body
        x0, x1, y0, y1 = cfg.box
        self.audit = orthogonality_audit(u, v, (x0, x1, y0, y1, cfg.grid[0], cfg.grid[1]))
        self.doc["result"] = {
            "u": to_text(u),
            "v": to_text(v),
            "max_deviation": self.audit.max_deviation,
            "skipped": self.audit.skipped,
            "samples": [
                {"point": list(s.point), "slope_product": s.slope_product, "gradient_norms": list(s.gradient_norms)}
                for s in self.audit.samples
            ],
        }
        self.doc["verification"] = {"cauchy_riemann": check_cr(u, v), "orthogonal": self.audit.max_deviation < 1e-9}

    def report(self):
        u = self.u
        lap = laplacian(u)
        form = self.form
        conj = conjugate_form(form)
        result = {
            "u": to_text(u),
            "laplacian": to_text(lap),
            "harmonic": is_harmonic(u),
            "exact_form": _form_doc(form),
            "conjugate_form": _form_doc(conj),
            "conjugate_form_exact": is_exact(conj).exact,
        }
        v = self._try_conjugate()
        result["conjugate"] = to_text(v) if v is not None else None
        self.doc["result"] = result
        self.doc["verification"] = {"cr_verified": check_cr(u, v) if v is not None else False}

    def execute(self):
        getattr(self, {"conjugate-form": "conjugate_form", "audit": "audit_cmd"}.get(self.cfg.command, self.cfg.command))()


def find_level_seed(f: Expr, level: float, box) -> tuple | None:
    """First point in ``box`` where ``f = level``, by a row scan and bisection."""
    x0, x1, y0, y1 = box
    xs = np.linspace(x0, x1, SEED_SCAN)
    ys = np.linspace(y0, y1, SEED_SCAN)
    order = sorted(range(SEED_SCAN), key=lambda j: (abs(j - SEED_SCAN // 2), j))

    def g(x, y):
        try:
            return evaluate(f, (x, y)) - level
        except (ExactHarmonicError, OverflowError):
            return math.nan

    for j in order:
        y = float(ys[j])
        vals = [g(float(x), y) for x in xs]
        for i in range(SEED_SCAN - 1):
            a, b = vals[i], vals[i + 1]
            if math.isnan(a) or math.isnan(b):
                continue
            if a == 0.0:
                return (float(xs[i]), y)
            if a * b < 0:
                lo, hi = float(xs[i]), float(xs[i + 1])
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    gm = g(mid, y)
                    if math.isnan(gm):
                        break
                    if (gm < 0) == (a < 0):
                        lo = mid
                    else:
                        hi = mid
                return (0.5 * (lo + hi), y)
    return None


def default_seeds(box) -> list:
    x0, x1, y0, y1 = box
    return [(x0 + (x1 - x0) * i / 4, y0 + (y1 - y0) * j / 4) for j in (1, 2, 3) for i in (1, 2, 3)]


# ---------------------------------------------------------------------------
# serialization


def _num(v: float) -> str:
    if v is None or not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def to_json(obj, indent: int = 0) -> str:
    """JSON with every float printed to 17 significant digits; scalar lists stay on one line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_csv(run: _Run) -> str:
    lines = []
    if run.cfg.command == "trace":
        lines.append("family,level,index,x,y")
        for pl in run.polylines:
            lvl = format(pl.level, ".17g") if math.isfinite(pl.level) else "nan"
            for i, (x, y) in enumerate(pl.points):
                lines.append(f"{pl.family_label},{lvl},{i},{_num(float(x))},{_num(float(y))}")
    else:
        lines.append("x,y,slope_product,gradient_norm_u,gradient_norm_v")
        for s in run.audit.samples:
            vals = (s.point.x, s.point.y, s.slope_product, *s.gradient_norms)
            lines.append(",".join(_num(v) for v in vals))
    return "\n".join(lines) + "\n"


def to_svg(run: _Run) -> str:
    x0, x1, y0, y1 = run.cfg.box
    sx = SVG_SIZE / (x1 - x0)
    sy = SVG_SIZE / (y1 - y0)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white" stroke="black"/>',
        '<g fill="none" stroke-width="1.5">',
    ]
    for pl in run.polylines:
        pts = " ".join(f"{(x - x0) * sx:.3f},{(y1 - y) * sy:.3f}" for x, y in pl.points.tolist())
        if pl.family_label == "level":
            out.append(f'<polyline stroke="#1f4e99" points="{pts}"/>')
        else:
            out.append(f'<polyline stroke="#b22222" stroke-dasharray="6 4" points="{pts}"/>')
    out += ["</g>", "</svg>"]
    return "\n".join(out) + "\n"


def to_text_report(doc: dict) -> str:
    lines = [f"command: {doc['command']}"]

    def walk(prefix, obj):
        for k, v in obj.items():
            if k in ("polylines", "samples"):
                lines.append(f"{prefix}{k}: {len(v)} entries")
            elif isinstance(v, dict):
                walk(f"{prefix}{k}.", v)
            else:
                lines.append(f"{prefix}{k}: {_plain(v)}")

    for section in ("input", "result", "verification"):
        walk(f"{section}.", doc[section])
    for err in doc["errors"]:
        lines.append(f"error: {err['kind']}: {err['message']}")
    return "\n".join(lines) + "\n"


def _plain(v) -> str:
    if isinstance(v, float):
        return _num(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, list):
        return ", ".join(_plain(x) for x in v)
    return str(v)


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute ``cfg``; return the exit code and the rendered output."""
    try:
        cfg.validate()
        r = _Run(cfg)
    except ExactHarmonicError as err:
        doc = {"command": cfg.command, "input": _input_doc(cfg), "result": {}, "verification": {}, "errors": [err.to_dict()]}
        return EXIT_ERROR, to_json(doc) + "\n"
    try:
        r.execute()
    except NotExact as err:
        r.fail(err, EXIT_NOT_EXACT)
    except NotHarmonicAdmissible as err:
        r.fail(err, EXIT_NOT_ADMISSIBLE)
    except ExactHarmonicError as err:
        r.fail(err, EXIT_ERROR)
    fmt = cfg.output_format
    if r.doc["errors"] and fmt in ("csv", "svg"):
        return r.exit_code, to_json(r.doc) + "\n"
    if fmt == "csv":
        return r.exit_code, to_csv(r)
    if fmt == "svg":
        return r.exit_code, to_svg(r)
    if fmt == "text":
        return r.exit_code, to_text_report(r.doc)
    return r.exit_code, to_json(r.doc) + "\n"


def main(argv: list | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg, out_path = config_from_args(argv)
    except ExactHarmonicError as err:
        doc = {"command": None, "input": {}, "result": {}, "verification": {}, "errors": [err.to_dict()]}
        sys.stdout.write(to_json(doc) + "\n")
        return EXIT_ERROR
    code, text = run(cfg)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
