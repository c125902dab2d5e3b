"""Command-line front end: ingestion, subcommands and deterministic reports.

Reports are JSON with floats rendered at 17 significant digits, so a fixed
input (including the seed, when Monte Carlo ensembling is requested) gives a
byte-identical report.  Exit codes: 0 success, 1 input error, 2 identity or
certification failure (the offending residual is still printed).

Heavy numeric imports happen inside the handlers so that the
``BREGMAN_BV_THREADS`` cap can be applied before the BLAS pools spin up.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from .errors import DomainError, EnumerationCapError, InversionError

__all__ = ["ingest", "emit_samples", "emit_divergence_field", "build_parser", "main"]

_INPUT_ERRORS = (DomainError, InversionError, EnumerationCapError, ValueError, OSError)


# ---------------------------------------------------------------------------
# deterministic JSON rendering

def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("non-finite value in report")
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def render_json(obj, indent: int = 0) -> str:
    """Render a report as JSON with 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f'{inner}"{k}": {render_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [f"{inner}{render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot render {type(obj)!r}")


def _write_text(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# ingestion

def ingest(path, fmt: str | None = None, group_column: str | None = None, *,
           generator=None, allow_boundary: bool = False):
    """Read a sample file into a SampleSet or, with groups, a GroupedSampleSet.

    CSV files need a header with coordinate columns ``x0..x{d-1}`` and may
    carry ``weight`` and group columns.  JSON files hold
    ``{"points": [[...]], "weights": [...], "groups": [...]}`` with the last
    two optional.  Weights default to uniform and are normalized.  When a
    generator is given, every point is validated against its domain and
    offending data rows are reported.
    """
    import numpy as np

    if fmt is None:
        lowered = str(path).lower()
        if lowered.endswith(".csv"):
            fmt = "csv"
        elif lowered.endswith(".json"):
            fmt = "json"
        else:
            raise ValueError(f"cannot infer format of {path!r}; expected a .csv or .json file")
    if fmt == "csv":
        points, weights, groups = _read_csv(path, group_column)
    elif fmt == "json":
        points, weights, groups = _read_json(path, group_column)
    else:
        raise ValueError("format must be 'csv' or 'json'")

    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 1:
        raise ValueError(f"{path}: no data rows")
    if not np.all(np.isfinite(points)):
        bad = sorted(set(np.argwhere(~np.isfinite(points))[:, 0].tolist()))
        raise ValueError(f"{path}: non-finite coordinates in data rows {bad}")
    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        if np.any(~np.isfinite(weights)) or np.any(weights <= 0.0):
            bad = sorted(np.flatnonzero(~np.isfinite(weights) | (weights <= 0.0)).tolist())
            raise ValueError(f"{path}: zero, negative or non-finite weights in data rows {bad}")
    if generator is not None:
        boundary_ok = allow_boundary and generator.boundary_first_args
        mask = generator.domain.contains(points, allow_boundary=boundary_ok)
        if points.shape[1] != generator.dim:
            raise DomainError(
                f"{path}: points have dimension {points.shape[1]}, generator expects {generator.dim}"
            )
        if not np.all(mask):
            bad = sorted(np.flatnonzero(~mask).tolist())
            raise DomainError(f"{path}: data rows {bad} outside the {generator.domain.kind} domain")

    from .dualspace import GroupedSampleSet, SampleSet

    if groups is None:
        return SampleSet(points, weights)
    raw_weights = weights if weights is not None else np.full(points.shape[0], 1.0)
    keys = []
    for key in groups:
        if key not in keys:
            keys.append(key)
    members = {k: [i for i, gk in enumerate(groups) if gk == k] for k in keys}
    group_sets = {k: SampleSet(points[idx], raw_weights[idx]) for k, idx in members.items()}
    group_weights = {k: float(np.sum(raw_weights[members[k]])) for k in keys}
    return GroupedSampleSet(group_sets, group_weights)


def _read_csv(path, group_column):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        coord_names = []
        while f"x{len(coord_names)}" in header:
            coord_names.append(f"x{len(coord_names)}")
        if not coord_names:
            raise ValueError(f"{path}: header must contain coordinate columns x0..x{{d-1}}")
        coord_idx = [header.index(name) for name in coord_names]
        weight_idx = header.index("weight") if "weight" in header else None
        group_idx = None
        if group_column is not None:
            if group_column not in header:
                raise ValueError(f"{path}: no column named {group_column!r}")
            group_idx = header.index(group_column)
        points, weights, groups = [], [], []
        for row_no, row in enumerate(reader):
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: data row {row_no} has {len(row)} cells, header has {len(header)}"
                )
            try:
                points.append([float(row[i]) for i in coord_idx])
                if weight_idx is not None:
                    weights.append(float(row[weight_idx]))
            except ValueError:
                raise ValueError(f"{path}: data row {row_no} has a non-numeric cell") from None
            if group_idx is not None:
                groups.append(row[group_idx])
    return points, (weights if weight_idx is not None else None), (groups if group_idx is not None else None)


def _read_json(path, group_column):
    import json

    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict) or "points" not in payload:
        raise ValueError(f"{path}: JSON input must be an object with a 'points' array")
    points = payload["points"]
    if not isinstance(points, list) or not all(isinstance(p, (list, tuple)) for p in points):
        raise ValueError(f"{path}: 'points' must be an array of coordinate rows")
    lengths = {len(p) for p in points}
    if len(lengths) > 1:
        raise ValueError(f"{path}: ragged point rows {sorted(lengths)}")
    weights = payload.get("weights")
    groups = payload.get("groups")
    if weights is not None and len(weights) != len(points):
        raise ValueError(f"{path}: weights length {len(weights)} != points length {len(points)}")
    if groups is not None and len(groups) != len(points):
        raise ValueError(f"{path}: groups length {len(groups)} != points length {len(points)}")
    return points, weights, groups


def emit_samples(s, out) -> None:
    """Write a SampleSet (or GroupedSampleSet, with a ``group`` column) as CSV.

    ``ingest`` of the emitted file reproduces the set to 1e-12 per
    coordinate (floats are rendered with 17 significant digits).
    """
    from .dualspace import GroupedSampleSet

    own = isinstance(out, str)
    fh = open(out, "w", encoding="utf-8", newline="") if own else out
    try:
        if isinstance(s, GroupedSampleSet):
            dim = s.dim
            fh.write(",".join([f"x{j}" for j in range(dim)] + ["weight", "group"]) + "\n")
            for key, group in s.items():
                gw = s.weight(key)
                for i in range(group.n):
                    coords = [_fmt_float(float(v)) for v in group.points[i]]
                    fh.write(",".join(coords + [_fmt_float(gw * float(group.weights[i])), str(key)]) + "\n")
        else:
            fh.write(",".join([f"x{j}" for j in range(s.dim)] + ["weight"]) + "\n")
            for i in range(s.n):
                coords = [_fmt_float(float(v)) for v in s.points[i]]
                fh.write(",".join(coords + [_fmt_float(float(s.weights[i]))]) + "\n")
    finally:
        if own:
            fh.close()


# ---------------------------------------------------------------------------
# divergence field export (figure data)

def emit_divergence_field(g, center, region, resolution: int, out) -> int:
    """Write a CSV grid of divergences to and from a center point.

    ``region`` is ``{"kind": "box", "lo": [...], "hi": [...]}`` or
    ``{"kind": "disk", "radius": r, "center": [...]}`` (disk center defaults
    to the divergence center).  Rows hold the grid coordinates followed by
    D(center, p) and D(p, center); grid points inside the region but outside
    the generator's domain, or where the divergence overflows, keep empty
    value cells.  Returns the number of valued rows and raises if there are
    none.
    """
    import numpy as np

    center = np.asarray(center, dtype=float)
    g.domain.validate_second(center)
    kind = region.get("kind")
    if kind == "box":
        lo = np.asarray(region["lo"], dtype=float)
        hi = np.asarray(region["hi"], dtype=float)
        disk_center, radius = None, None
    elif kind == "disk":
        radius = float(region["radius"])
        if radius <= 0:
            raise ValueError("disk radius must be positive")
        disk_center = np.asarray(region.get("center", center), dtype=float)
        lo = disk_center - radius
        hi = disk_center + radius
    else:
        raise ValueError("region kind must be 'box' or 'disk'")
    if lo.shape != (g.dim,) or hi.shape != (g.dim,):
        raise ValueError(f"region bounds must have dimension {g.dim}")
    if not np.all(lo < hi):
        raise ValueError("region needs lo < hi in every coordinate")

    resolution = int(resolution)
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    if resolution == 1:
        axes = [np.array([0.5 * (lo[j] + hi[j])]) for j in range(g.dim)]
    else:
        axes = [np.linspace(lo[j], hi[j], resolution) for j in range(g.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([m.ravel() for m in mesh])
    if disk_center is not None:
        pts = pts[np.sqrt(np.sum((pts - disk_center) ** 2, axis=-1)) <= radius]

    in_domain = g.domain.contains(pts)
    floor = getattr(g.domain, "second_arg_floor", None)
    if floor is not None:
        in_domain = in_domain & np.all(pts >= floor, axis=-1)

    from_vals = np.full(pts.shape[0], np.nan)
    to_vals = np.full(pts.shape[0], np.nan)
    idx = np.flatnonzero(in_domain)
    if idx.size:
        inside = pts[idx]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            from_vals[idx] = (
                g.value(center) - g.value(inside) - np.sum(g.grad(inside) * (center - inside), axis=-1)
            )
            to_vals[idx] = (
                g.value(inside) - g.value(center) - np.sum(g.grad(center) * (inside - center), axis=-1)
            )
    # overflow hugging an open boundary degrades to empty cells, like off-domain points
    valued = in_domain & np.isfinite(from_vals) & np.isfinite(to_vals)
    count = int(np.sum(valued))
    if count == 0:
        raise ValueError("no grid point of the region lies inside the domain")

    own = isinstance(out, str)
    fh = open(out, "w", encoding="utf-8", newline="") if own else out
    try:
        fh.write(",".join([f"x{j}" for j in range(g.dim)] + ["div_from_center", "div_to_center"]) + "\n")
        for i in range(pts.shape[0]):
            coords = [_fmt_float(float(v)) for v in pts[i]]
            if valued[i]:
                cells = [_fmt_float(float(from_vals[i])), _fmt_float(float(to_vals[i]))]
            else:
                cells = ["", ""]
            fh.write(",".join(coords + cells) + "\n")
    finally:
        if own:
            fh.close()
    return count


# ---------------------------------------------------------------------------
# argument plumbing

def _add_generator_args(p):
    p.add_argument("--generator", required=True,
                   choices=["squared-euclidean", "mahalanobis", "negative-entropy-simplex"],
                   help="built-in generator (separable generators are library-only)")
    p.add_argument("--dim", type=int, help="dimension (required except for mahalanobis)")
    p.add_argument("--matrix-file", help="CSV matrix for the mahalanobis generator")


def _add_common_args(p):
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--tolerance", type=float, default=None, help="identity tolerance override")


def _generator_from_args(args):
    from .generators import make_generator

    if args.generator == "mahalanobis":
        if not args.matrix_file:
            raise ValueError("mahalanobis needs --matrix-file")
        return make_generator({"generator": "mahalanobis", "matrix_file": args.matrix_file})
    if args.dim is None:
        raise ValueError(f"{args.generator} needs --dim")
    return make_generator({"generator": args.generator, "dim": args.dim})


def _require_plain(sample_set, what):
    from .dualspace import SampleSet

    if not isinstance(sample_set, SampleSet):
        raise ValueError(f"{what} must be an ungrouped sample file here")
    return sample_set


def _require_point(sample_set, what):
    s = _require_plain(sample_set, what)
    if s.n != 1:
        raise ValueError(f"{what} must contain exactly one row (deterministic side), got {s.n}")
    return s.points[0]


def _check_onehot_flag(args, g):
    if getattr(args, "label_onehot", False) and not g.boundary_first_args:
        raise ValueError("--label-onehot is only meaningful for the negative-entropy-simplex generator")


# ---------------------------------------------------------------------------
# subcommands

def cmd_decompose(args) -> int:
    from .decomposition import decompose

    g = _generator_from_args(args)
    _check_onehot_flag(args, g)
    labels = _require_plain(
        ingest(args.labels, generator=g, allow_boundary=args.label_onehot), "labels"
    )
    predictions = _require_plain(ingest(args.predictions, generator=g), "predictions")
    report = decompose(g, labels, predictions)
    _write_text(render_json(report.as_dict()) + "\n", args.out)
    tol = 1e-9 if args.tolerance is None else args.tolerance
    if not report.within(tol):
        print(
            f"identity violated: residual {report.identity_residual:.6e} "
            f"exceeds {tol:g} * max(1, loss)",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_total_variance(args) -> int:
    from .decomposition import total_variance
    from .dualspace import GroupedSampleSet

    g = _generator_from_args(args)
    _check_onehot_flag(args, g)
    path = args.labels or args.predictions
    if not path or (args.labels and args.predictions):
        raise ValueError("total-variance takes exactly one grouped file (--labels or --predictions)")
    grouped = ingest(path, group_column=args.group_col, generator=g,
                     allow_boundary=bool(args.labels and args.label_onehot))
    if not isinstance(grouped, GroupedSampleSet):
        raise ValueError("total-variance needs grouped input; pass --group-col or JSON groups")
    report = total_variance(g, grouped, args.mode)
    _write_text(render_json(report.as_dict()) + "\n", args.out)
    tol = 1e-9 if args.tolerance is None else args.tolerance
    if abs(report.residual) > tol:
        print(f"identity violated: residual {report.residual:.6e} exceeds {tol:g}", file=sys.stderr)
        return 2
    return 0


def _has_group_column(path, group_col) -> bool:
    """Whether applying `group_col` to this file would yield groups."""
    lowered = str(path).lower()
    if lowered.endswith(".json"):
        import json

        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        return isinstance(payload, dict) and payload.get("groups") is not None
    if not group_col:
        return False
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = next(csv.reader(fh), [])
    return group_col in [h.strip() for h in header]


def cmd_conditional(args) -> int:
    from .decomposition import conditional_label, conditional_prediction
    from .dualspace import GroupedSampleSet

    g = _generator_from_args(args)
    _check_onehot_flag(args, g)
    labels = ingest(
        args.labels,
        group_column=args.group_col if _has_group_column(args.labels, args.group_col) else None,
        generator=g,
        allow_boundary=args.label_onehot,
    )
    predictions = ingest(
        args.predictions,
        group_column=args.group_col if _has_group_column(args.predictions, args.group_col) else None,
        generator=g,
    )
    labels_grouped = isinstance(labels, GroupedSampleSet)
    predictions_grouped = isinstance(predictions, GroupedSampleSet)
    if labels_grouped == predictions_grouped:
        raise ValueError("conditional needs exactly one grouped side (the conditioned one)")
    if predictions_grouped:
        label = _require_point(labels, "labels")
        report = conditional_prediction(g, label, predictions)
    else:
        prediction = _require_point(predictions, "predictions")
        report = conditional_label(g, labels, prediction)
    _write_text(render_json(report.as_dict()) + "\n", args.out)
    tol = 1e-9 if args.tolerance is None else args.tolerance
    worst = max(abs(report.bias_residual), abs(report.variance_residual))
    if worst > tol or report.gap < -1e-12:
        print(f"identity violated: residual {worst:.6e} exceeds {tol:g}", file=sys.stderr)
        return 2
    return 0


def cmd_ensemble(args) -> int:
    from .decomposition import ensemble_effect

    g = _generator_from_args(args)
    _check_onehot_flag(args, g)
    label = _require_point(
        ingest(args.labels, generator=g, allow_boundary=args.label_onehot), "labels"
    )
    predictions = _require_plain(ingest(args.predictions, generator=g), "predictions")
    if args.mc_draws is not None and args.seed is None:
        raise ValueError("--mc-draws needs --seed for a reproducible report")
    report = ensemble_effect(
        g, label, predictions, args.ensemble_n, args.mode,
        mc_draws=args.mc_draws, seed=args.seed,
    )
    _write_text(render_json(report.as_dict()) + "\n", args.out)
    certified = (report.bias_preserved, report.variance_reduced)
    if report.mode == "dual" and False in certified:
        print(
            f"dual ensembling certification failed: bias change {report.bias_change:.6e}, "
            f"variance change {report.variance_change:.6e}",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_check(args) -> int:
    from .dualspace import dual_mean, primal_mean
    from .oracle import (
        OracleConfig,
        argmin_from,
        argmin_to,
        expected_divergence_from,
        expected_divergence_to,
    )

    g = _generator_from_args(args)
    path = args.labels or args.predictions
    if not path or (args.labels and args.predictions):
        raise ValueError("check takes exactly one sample file (--labels or --predictions)")
    s = _require_plain(ingest(path, generator=g), "samples")
    cfg = OracleConfig(grid_resolution=args.grid_resolution)
    analytic_primal = primal_mean(s)
    analytic_dual = dual_mean(g, s)
    oracle_primal = argmin_from(g, s, cfg)
    oracle_dual = argmin_to(g, s, cfg)
    primal_objs = (
        expected_divergence_from(g, s, analytic_primal),
        expected_divergence_from(g, s, oracle_primal),
    )
    dual_objs = (
        expected_divergence_to(g, s, analytic_dual),
        expected_divergence_to(g, s, oracle_dual),
    )
    tol = 1e-5 if args.tolerance is None else args.tolerance
    report = {
        "grid_resolution": args.grid_resolution,
        "tolerance": tol,
        "primal": {
            "analytic_objective": primal_objs[0],
            "oracle_objective": primal_objs[1],
            "objective_gap": abs(primal_objs[0] - primal_objs[1]),
            "analytic_point": [float(v) for v in analytic_primal],
            "oracle_point": [float(v) for v in oracle_primal],
        },
        "dual": {
            "analytic_objective": dual_objs[0],
            "oracle_objective": dual_objs[1],
            "objective_gap": abs(dual_objs[0] - dual_objs[1]),
            "analytic_point": [float(v) for v in analytic_dual],
            "oracle_point": [float(v) for v in oracle_dual],
        },
    }
    _write_text(render_json(report) + "\n", args.out)
    worst = max(report["primal"]["objective_gap"], report["dual"]["objective_gap"])
    if worst > tol:
        print(f"oracle certification failed: objective gap {worst:.6e} exceeds {tol:g}", file=sys.stderr)
        return 2
    return 0


def cmd_field(args) -> int:
    g = _generator_from_args(args)
    center = [float(v) for v in args.center.split(",")]
    if args.region == "box":
        if not args.lo or not args.hi:
            raise ValueError("box region needs --lo and --hi")
        region = {
            "kind": "box",
            "lo": [float(v) for v in args.lo.split(",")],
            "hi": [float(v) for v in args.hi.split(",")],
        }
    else:
        if args.radius is None:
            raise ValueError("disk region needs --radius")
        region = {"kind": "disk", "radius": args.radius, "center": center}
    buffer = io.StringIO()
    emit_divergence_field(g, center, region, args.resolution, buffer)
    _write_text(buffer.getvalue(), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser / entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bregman-bv",
        description="Bias-variance decompositions for Bregman divergences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="three-term decomposition of the expected loss")
    _add_generator_args(p)
    p.add_argument("--labels", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--label-onehot", action="store_true",
                   help="accept boundary (one-hot) labels for the simplex generator")
    _add_common_args(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("total-variance", help="law of total variance over a grouped file")
    _add_generator_args(p)
    p.add_argument("--labels")
    p.add_argument("--predictions")
    p.add_argument("--group-col", help="CSV column holding the conditioning label")
    p.add_argument("--mode", required=True, choices=["primal", "dual"])
    p.add_argument("--label-onehot", action="store_true")
    _add_common_args(p)
    p.set_defaults(func=cmd_total_variance)

    p = sub.add_parser("conditional", help="conditional bias/variance with the gap term")
    _add_generator_args(p)
    p.add_argument("--labels", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--group-col", help="CSV column holding the conditioning label")
    p.add_argument("--label-onehot", action="store_true")
    _add_common_args(p)
    p.set_defaults(func=cmd_conditional)

    p = sub.add_parser("ensemble", help="decomposition before/after primal or dual ensembling")
    _add_generator_args(p)
    p.add_argument("--labels", required=True, help="single-row file: the deterministic label")
    p.add_argument("--predictions", required=True)
    p.add_argument("--mode", required=True, choices=["primal", "dual"])
    p.add_argument("--ensemble-n", type=int, required=True)
    p.add_argument("--mc-draws", type=int, help="Monte Carlo fallback sample count")
    p.add_argument("--seed", type=int, help="seed for the Monte Carlo fallback")
    p.add_argument("--label-onehot", action="store_true")
    _add_common_args(p)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("check", help="certify analytic means against the brute-force oracle")
    _add_generator_args(p)
    p.add_argument("--labels")
    p.add_argument("--predictions")
    p.add_argument("--grid-resolution", type=int, default=128)
    _add_common_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("field", help="CSV grid of divergences to/from a center (figure data)")
    _add_generator_args(p)
    p.add_argument("--center", required=True, help="comma-separated coordinates")
    p.add_argument("--region", required=True, choices=["box", "disk"])
    p.add_argument("--lo", help="box lower corner, comma-separated")
    p.add_argument("--hi", help="box upper corner, comma-separated")
    p.add_argument("--radius", type=float, help="disk radius around the center")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(func=cmd_field)

    return parser


def _thread_cap():
    raw = os.environ.get("BREGMAN_BV_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ValueError("BREGMAN_BV_THREADS must be a nonnegative integer") from None
    if n < 0:
        raise ValueError("BREGMAN_BV_THREADS must be a nonnegative integer")
    return n or None  # 0 = auto


def main(argv=None) -> int:
    try:
        cap = _thread_cap()
        if cap is not None:
            # must run before numpy initializes its BLAS thread pools
            for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
                os.environ.setdefault(var, str(cap))
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:
            # argparse uses 2 for usage problems; those are input errors here
            return 0 if exc.code in (0, None) else 1
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
