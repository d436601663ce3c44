"""Command-line interface: build | analyze | scan-h | classify | riccati.

File formats are stable: the JSON algebra format of ``lie_metric``, CSV
with a header row, and JSON reports with fixed key order and floats
serialized at 17 significant digits, so identical inputs (plus --seed)
produce byte-identical outputs.  Files are written atomically.
"""

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import clifford_dr, curvature, hypergeom, jacobi_flow, lie_metric, riccati
from .config import DEFAULT_TOLS, Tolerances
from .errors import (DegenerateSpectrumError, NotStandardError, NumericalError,
                     SolvharmError, StructureError)

_MEAN_GRID = (0.5, 8.0, 26)
_H_GRID = (0.05, 0.5, 50)


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------

def _jsonable(value):
    """Normalize numpy/complex values into JSON-ready structures."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.complexfloating, complex)):
        return {"re": float(value.real), "im": float(value.imag)}
    return value


def _emit_json(value, out):
    """Recursive writer with fixed key order and %.17g floats."""
    if isinstance(value, dict):
        out.write("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                out.write(", ")
            out.write(json.dumps(str(k)))
            out.write(": ")
            _emit_json(v, out)
        out.write("}")
    elif isinstance(value, (list, tuple)):
        out.write("[")
        for i, v in enumerate(value):
            if i:
                out.write(", ")
            _emit_json(v, out)
        out.write("]")
    elif isinstance(value, bool):
        out.write("true" if value else "false")
    elif value is None:
        out.write("null")
    elif isinstance(value, int):
        out.write(str(value))
    elif isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            out.write(json.dumps(str(value)))
        else:
            out.write(format(value + 0.0 if value == 0.0 else value, ".17g"))
    else:
        out.write(json.dumps(value))


def _render_json(value) -> str:
    import io
    buf = io.StringIO()
    _emit_json(_jsonable(value), buf)
    buf.write("\n")
    return buf.getvalue()


def _write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".solvharm-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _deliver(text: str, output):
    if output:
        _write_atomic(output, text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    try:
        with open(path) as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read JSON from {path}: {exc}") from exc


class _UsageError(Exception):
    pass


def _load_algebra(path: str) -> lie_metric.MetricLieAlgebra:
    data = _load_json(path)
    try:
        return lie_metric.algebra_from_dict(data)
    except (StructureError, ValueError, TypeError) as exc:
        raise _UsageError(f"malformed algebra file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# analysis pipeline
# ---------------------------------------------------------------------------

def _tolerances_dict(tols: Tolerances) -> dict:
    return {f.name: getattr(tols, f.name)
            for f in dataclasses.fields(Tolerances)}


def _factor_entry(spec, cls):
    if isinstance(spec, hypergeom.CenterFactor):
        params = {"kind": "center", "mu": spec.mu}
    elif isinstance(spec, hypergeom.KernelFactor):
        params = {"kind": "kernel", "rho_star": spec.rho_star}
    else:
        params = {"kind": "pair", "rho": spec.rho, "theta": spec.theta}
    params["label"] = cls.label
    params["degree"] = cls.degree
    return params


def build_report(g: lie_metric.MetricLieAlgebra, seed: int = 0,
                 tols: Tolerances = DEFAULT_TOLS) -> dict:
    """Run the full analysis pipeline and assemble the report dict."""
    gamma = curvature.levi_civita(g)
    r_tensor = curvature.curvature_tensor(g, gamma)
    r_norm = curvature.curvature_norm(r_tensor)
    is_flat = r_norm <= tols.flat_norm
    is_einstein, c_const, resid = curvature.einstein_check(g, tols)
    growth = lie_metric.growth_type(g, seed=seed, tols=tols)

    derived = lie_metric.derived_algebra(g)
    report = {
        "schema": "solvharm-analysis-v1",
        "seed": seed,
        "algebra": {
            "dim": g.dim,
            "derived_dim": int(derived.shape[1]),
            "nilpotency_class": lie_metric.nilpotency_class(g),
        },
        "curvature": {"norm": r_norm, "flat": is_flat},
        "einstein": {"is_einstein": is_einstein, "constant": c_const,
                     "residual": resid},
        "growth": growth.value,
    }

    decomposition_error = None
    data = None
    if not is_flat:
        try:
            data = lie_metric.standard_decomposition(g, tols)
        except (StructureError, NotStandardError) as exc:
            decomposition_error = str(exc)

    if data is None:
        report["standard_decomposition"] = {
            "status": "flat" if is_flat else "not-standard",
            "reason": decomposition_error,
        }
        report["classification"] = "Flat" if is_flat else "Indeterminate"
        report["tolerances"] = _tolerances_dict(tols)
        return report

    report["standard_decomposition"] = {
        "status": "ok",
        "mu": list(data.mu),
        "rho_star": list(data.rho_star),
        "pairs": [list(p) for p in data.pairs],
        "trace_ad_h": data.trace_ad_h,
    }

    # mean curvature: closed formula vs numeric horosphere pipeline
    ad_h = data.ad_h()
    formula = -riccati.horosphere_mean_curvature_formula(ad_h)
    try:
        ricc = riccati.solve_algebraic_riccati_max(ad_h, tols)
        trace_l0 = ricc.trace_l0
    except (NumericalError, DegenerateSpectrumError) as exc:
        trace_l0 = None
        report.setdefault("warnings", []).append(f"riccati: {exc}")
    t_lo, t_hi, t_n = _MEAN_GRID
    grid = np.linspace(t_lo, t_hi, t_n)
    try:
        sample = jacobi_flow.stable_jacobi_tensor(data, None, grid, tols=tols)
        m_fd, _ = jacobi_flow.mean_curvature_numeric(sample, tols)
        deviation = float(np.abs(m_fd - formula).max())
        numeric_mean = float(np.mean(m_fd))
    except (NumericalError, SolvharmError) as exc:
        deviation = None
        numeric_mean = None
        report.setdefault("warnings", []).append(f"mean-curvature: {exc}")
    report["mean_curvature"] = {
        "formula": formula,
        "riccati_trace_l0": trace_l0,
        "numeric": numeric_mean,
        "max_deviation": deviation,
        "grid": [t_lo, t_hi, t_n],
    }

    # h-scan on z in [0.05, 0.5]
    mu_f, rho_star, pairs = data.frame_factor_data()
    z_lo, z_hi, z_n = _H_GRID
    z_values = np.linspace(z_lo, z_hi, z_n)
    h_values = np.array([
        hypergeom.h_function(mu_f, rho_star, pairs, z, tols) for z in z_values
    ])
    h_scale = max(float(np.abs(h_values).max()), 1e-30)
    drift = float((h_values.max() - h_values.min()) / h_scale)
    h_constant = drift <= tols.h_constancy
    report["h_scan"] = {
        "z_range": [z_lo, z_hi],
        "count": z_n,
        "min": float(h_values.min()),
        "max": float(h_values.max()),
        "relative_drift": drift,
        "constant": h_constant,
    }

    rig = hypergeom.rigidity_conclusion(data, tols)
    report["rigidity"] = {
        "is_rigid": rig.is_rigid,
        "factors": [_factor_entry(s, c) for s, c in rig.factors],
    }

    nr = curvature.nabla_R_norm(g)
    ratio = nr / r_norm if r_norm > 0 else 0.0
    symmetric = ratio <= tols.symmetry_ratio
    report["symmetry"] = {"nabla_r_norm": nr, "ratio": ratio,
                          "is_symmetric": symmetric}

    mean_constant = (deviation is not None
                     and deviation <= tols.mean_constancy)
    if rig.is_rigid and is_einstein and symmetric:
        label = "RankOneSymmetric"
    elif rig.is_rigid and is_einstein:
        label = "DamekRicciNonsymmetric"
    elif not h_constant or not mean_constant:
        label = "NotAsymptoticallyHarmonic"
    else:
        label = "Indeterminate"
    report["classification"] = label
    report["tolerances"] = _tolerances_dict(tols)
    return report


def _density_table(g, seed: int, directions: int, times, tols: Tolerances):
    """Per-direction volume densities, fanned out across worker threads."""
    rng = np.random.default_rng(seed)
    dirs = []
    for _ in range(directions):
        v = rng.standard_normal(g.dim)
        dirs.append(v / np.linalg.norm(v))
    workers = max(1, int(os.environ.get("SOLVHARM_THREADS", "1")))
    t_arr = np.asarray(times, dtype=float)

    def run(v):
        return jacobi_flow.volume_density(g, v, t_arr, tols)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, dirs))
    else:
        rows = [run(v) for v in dirs]
    lines = ["direction_id,t,det"]
    for i, dets in enumerate(rows):
        for t, det in zip(t_arr, dets):
            lines.append(f"{i},{format(float(t), '.17g')},{format(float(det), '.17g')}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_build(args, tols: Tolerances) -> int:
    kind = args.kind
    if kind == "flat":
        g = clifford_dr.build_flat(args.dim)
    elif kind == "real-hyperbolic":
        g = clifford_dr.build_real_hyperbolic(args.dim)
    else:
        cm = clifford_dr.clifford_generators(args.l, args.copies)
        if kind == "heisenberg":
            g = clifford_dr.build_heisenberg_type(cm)
        else:
            g = clifford_dr.build_damek_ricci(cm)
    _deliver(_render_json(lie_metric.algebra_to_dict(g)), args.output)
    return 0


def cmd_analyze(args, tols: Tolerances) -> int:
    g = _load_algebra(args.algebra)
    report = build_report(g, seed=args.seed, tols=tols)
    _deliver(_render_json(report), args.output)
    if args.density_csv:
        table = _density_table(g, args.seed, args.density_directions,
                               [float(x) for x in args.density_times.split(",")],
                               tols)
        _write_atomic(args.density_csv, table)
    return 0


def cmd_scan_h(args, tols: Tolerances) -> int:
    g = _load_algebra(args.algebra)
    try:
        data = lie_metric.standard_decomposition(g, tols)
    except (StructureError, NotStandardError) as exc:
        sys.stderr.write(f"not a standard solvable algebra: {exc}\n")
        return 3
    mu_f, rho_star, pairs = data.frame_factor_data()
    n_factors = len(mu_f) + len(rho_star) + len(pairs)
    header = "z,h," + ",".join(f"factor_{i + 1}" for i in range(n_factors))
    lines = [header]
    for z in np.linspace(args.z_min, args.z_max, args.count):
        factors = hypergeom.h_factors(mu_f, rho_star, pairs, float(z), tols)
        h = float(np.prod(factors))
        cells = [format(float(z), ".17g"), format(h, ".17g")]
        cells += [format(float(f), ".17g") for f in factors]
        lines.append(",".join(cells))
    _deliver("\n".join(lines) + "\n", args.output)
    return 0


def cmd_classify(args, tols: Tolerances) -> int:
    g = _load_algebra(args.algebra)
    try:
        data = lie_metric.standard_decomposition(g, tols)
    except (StructureError, NotStandardError) as exc:
        sys.stderr.write(f"not a standard solvable algebra: {exc}\n")
        return 3
    rig = hypergeom.rigidity_conclusion(data, tols)
    report = {
        "schema": "solvharm-classify-v1",
        "is_rigid": rig.is_rigid,
        "factors": [_factor_entry(s, c) for s, c in rig.factors],
        "tolerances": _tolerances_dict(tols),
    }
    _deliver(_render_json(report), args.output)
    return 0


def cmd_riccati(args, tols: Tolerances) -> int:
    data = _load_json(args.matrix)
    raw = data.get("matrix", data) if isinstance(data, dict) else data
    try:
        mat = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise _UsageError(f"matrix file must hold a square array: {exc}")
    formula = riccati.horosphere_mean_curvature_formula(mat)
    try:
        res = riccati.solve_algebraic_riccati_max(mat, tols)
    except DegenerateSpectrumError as exc:
        sys.stderr.write(f"degenerate spectrum: {exc}\n")
        return 5
    report = {
        "schema": "solvharm-riccati-v1",
        "x": res.x,
        "l0": res.l0,
        "trace_l0": res.trace_l0,
        "formula_trace": formula,
        "spectrum": [{"re": s.real, "im": s.imag} for s in res.spectrum_ad_a],
        "tolerances": _tolerances_dict(tols),
    }
    _deliver(_render_json(report), args.output)
    if abs(res.trace_l0 - formula) > 1e-6:
        sys.stderr.write(
            f"trace identity violated: trace L0 = {res.trace_l0!r} vs "
            f"formula {formula!r}\n"
        )
        return 4
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_tolerance_flags(parser: argparse.ArgumentParser):
    for f in dataclasses.fields(Tolerances):
        flag = "--tol-" + f.name.replace("_", "-")
        parser.add_argument(flag, dest=f"tol_{f.name}", type=f.type,
                            default=None, help=argparse.SUPPRESS)


def _collect_tolerances(args) -> Tolerances:
    overrides = {}
    for f in dataclasses.fields(Tolerances):
        v = getattr(args, f"tol_{f.name}", None)
        if v is not None:
            overrides[f.name] = v
    return DEFAULT_TOLS.with_overrides(**overrides)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solvharm",
        description="Metric solvable Lie algebras, Damek-Ricci geometry "
                    "and the harmonicity rigidity pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a reference algebra")
    p.add_argument("kind", choices=["flat", "real-hyperbolic", "heisenberg",
                                    "damek-ricci"])
    p.add_argument("--dim", type=int, default=3,
                   help="dimension for flat / real-hyperbolic builds")
    p.add_argument("--l", type=int, default=1, help="center dimension")
    p.add_argument("--copies", type=int, default=1,
                   help="number of irreducible module copies")
    p.add_argument("--output", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="full geometric analysis report")
    p.add_argument("algebra")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.add_argument("--density-csv", default=None,
                   help="write per-direction volume densities to CSV")
    p.add_argument("--density-directions", type=int, default=16)
    p.add_argument("--density-times", default="0.5,1,2")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan-h", help="sample the rigidity function h(z)")
    p.add_argument("algebra")
    p.add_argument("--z-min", type=float, default=0.05)
    p.add_argument("--z-max", type=float, default=0.5)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--output", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_scan_h)

    p = sub.add_parser("classify", help="classify the factors of h")
    p.add_argument("algebra")
    p.add_argument("--output", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("riccati", help="maximal Riccati solution of a matrix")
    p.add_argument("matrix")
    p.add_argument("--output", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_riccati)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    tols = _collect_tolerances(args)
    try:
        return args.func(args, tols)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except SolvharmError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
