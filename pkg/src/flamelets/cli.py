"""Command-line entry point: ``flamelets <command> ...``.

Exit status is 0 on success, 1 on a domain error (bad parameters for the
data at hand) and 2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path

from . import io
from .diagram_metrics import Vineyard, bottleneck, integrated_bottleneck
from .errors import FlameletError, ParseError
from .filtration import GridFunction, rips_filtration, sublevel_grid_filtration, superlevel_grid_filtration
from .fixtures import breathing_circle, gaussian_mixture, noisy_circle
from .flamelet import Flamelet, build_flamelet, integrated_landscape_distance, rips_vineyards, select_bandwidth_ta
from .geometry import PointCloud, hausdorff, integrated_hausdorff
from .kde import (
    BandwidthRange,
    GridSpec,
    KdeModel,
    bandwidth_vineyards,
    default_grid_spec,
    kde_evaluate,
    silverman_extended,
)
from .landscape import YGrid, default_ygrid, landscape, landscape_distance, silhouette
from .persistence import PersistenceDiagram, compute_persistence

EXIT_DOMAIN = 1
EXIT_INPUT = 2


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(sorted({int(p) for p in text.split("+")}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 0, 1 or 0+1, got {text!r}") from None
    if not dims or any(d not in (0, 1) for d in dims):
        raise argparse.ArgumentTypeError(f"expected 0, 1 or 0+1, got {text!r}")
    return dims


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _pick(items, dim: int | None, what: str):
    """Select the artifact of homology dimension ``dim`` from a loaded document."""
    if not isinstance(items, list):
        items = [items]
    if dim is None:
        if len(items) != 1:
            raise FlameletError(f"the {what} file holds several dimensions; pass --dim")
        return items[0]
    for item in items:
        if item.dim == dim:
            return item
    raise FlameletError(f"no dimension-{dim} {what} in the input")


def _load_diagram(path: str, dim: int | None) -> PersistenceDiagram:
    obj = io.load(path)
    if isinstance(obj, Vineyard):
        raise FlameletError("expected a diagram file, got a vineyard")
    return _pick(obj, dim, "diagram")


def _ygrid_from_args(args, diagrams) -> YGrid:
    if args.y_min is not None and args.y_max is not None:
        return YGrid(args.y_min, args.y_max, args.y_steps)
    return default_ygrid(diagrams, args.y_steps)


def _bandwidths(args) -> BandwidthRange:
    return BandwidthRange(args.h_min, args.h_max, args.h_steps, args.h_spacing)


def _grid_spec(args, sample: PointCloud, h_max: float) -> GridSpec:
    return default_grid_spec(sample, h_max, args.grid_steps)


def _sweep_vineyards(args) -> dict[int, Vineyard]:
    sample = io.ingest_csv(args.input, "static")
    rng = _bandwidths(args)
    return bandwidth_vineyards(sample, rng, _grid_spec(args, sample, rng.h_max), args.dims, args.jobs)


def _flamelets(args, vineyards: dict[int, Vineyard]) -> dict[int, Flamelet]:
    return {d: build_flamelet(v, _ygrid_from_args(args, v.diagrams), args.K) for d, v in vineyards.items()}


def _sweep(args) -> dict[int, Flamelet]:
    return _flamelets(args, _sweep_vineyards(args))


def cmd_kde(args) -> None:
    sample = io.ingest_csv(args.input, "static")
    grid = _grid_spec(args, sample, args.h)
    _emit(io.dumps(kde_evaluate(KdeModel(sample, args.h), grid)), args.output)


def cmd_diagram(args) -> None:
    max_dim = min(max(args.dims) + 1, 2)
    if args.input.endswith(".json"):
        f = io.load(args.input)
        if not isinstance(f, GridFunction):
            raise FlameletError("a JSON input to 'diagram' must be a grid function")
        build = superlevel_grid_filtration if args.filtration == "superlevel" else sublevel_grid_filtration
        complex = build(f, max_dim)
    else:
        cloud = io.ingest_csv(args.input, "static")
        complex = rips_filtration(cloud, max_dim, args.max_radius)
    diagrams = compute_persistence(complex, args.dims)
    _emit(io.dumps(diagrams), args.output)


def cmd_landscape(args) -> None:
    diagram = _load_diagram(args.input, args.dim)
    grid = _ygrid_from_args(args, [diagram])
    _emit(io.dumps(landscape(diagram, grid, args.K)), args.output)


def cmd_silhouette(args) -> None:
    diagram = _load_diagram(args.input, args.dim)
    grid = _ygrid_from_args(args, [diagram])
    values = silhouette(diagram, grid, args.p)
    doc = {
        "schema_version": io.SCHEMA_VERSION,
        "kind": "silhouette",
        "dim": diagram.dim,
        "p": args.p,
        "grid": {"min": grid.min, "max": grid.max, "steps": grid.steps},
        "values": values.tolist(),
    }
    _emit(io.dumps(doc), args.output)


def _write_projection(args, flamelets: dict[int, Flamelet]) -> None:
    if args.projection_csv:
        f = _pick(list(flamelets.values()), args.projection_dim, "flamelet")
        Path(args.projection_csv).write_text(io.projection_csv(f, args.projection_k), encoding="utf-8")


def cmd_flamelet(args) -> None:
    if args.mode == "time":
        cloud = io.ingest_csv(args.input, "dynamic")
        vineyards = rips_vineyards(cloud, args.dims, args.max_radius)
    else:
        vineyards = _sweep_vineyards(args)
    flamelets = _flamelets(args, vineyards)
    if args.vineyard_out:
        io.save(vineyards, args.vineyard_out)
    _write_projection(args, flamelets)
    _emit(io.dumps(flamelets), args.output)


def cmd_sweep(args) -> None:
    args.mode = "bandwidth"
    cmd_flamelet(args)


def cmd_select_bandwidth(args) -> None:
    if args.input.endswith(".json"):
        flamelet = _pick(io.load(args.input), args.dim, "flamelet")
    else:
        args.dims = (args.dim,)
        flamelet = _sweep(args)[args.dim]
    k = args.k if args.k is not None else (2 if args.dim == 0 else 1)
    choice = select_bandwidth_ta(flamelet, k, args.criterion)
    doc = {
        "schema_version": io.SCHEMA_VERSION,
        "kind": "bandwidth_selection",
        "h": choice.sigma,
        "peak": choice.peak,
        "criterion": choice.criterion,
        "index": choice.index,
        "dim": flamelet.dim,
        "k": k,
    }
    _emit(io.dumps(doc), args.output)


def cmd_project(args) -> None:
    flamelet = _pick(io.load(args.input), args.dim, "flamelet")
    _emit(io.projection_csv(flamelet, args.k), args.output)


def cmd_distance(args) -> None:
    a, b = args.a, args.b
    metric = args.metric
    if metric == "bottleneck":
        value = bottleneck(_load_diagram(a, args.dim), _load_diagram(b, args.dim))
    elif metric == "landscape":
        la, lb = io.load(a), io.load(b)
        value = landscape_distance(la, lb)
    elif metric == "integrated-landscape":
        fa = _pick(io.load(a), args.dim, "flamelet")
        fb = _pick(io.load(b), args.dim, "flamelet")
        value = integrated_landscape_distance(fa, fb)
    elif metric == "integrated-bottleneck":
        va = _pick(io.load(a), args.dim, "vineyard")
        vb = _pick(io.load(b), args.dim, "vineyard")
        value = integrated_bottleneck(va, vb)
    elif metric == "hausdorff":
        value = hausdorff(io.ingest_csv(a, "static"), io.ingest_csv(b, "static"))
    else:
        value = integrated_hausdorff(io.ingest_csv(a, "dynamic"), io.ingest_csv(b, "dynamic"))
    _emit(f"{value!r}\n", args.output)


def cmd_silverman(args) -> None:
    value = silverman_extended(io.ingest_csv(args.input, "static"), args.d, classic=args.classic)
    _emit(f"{value!r}\n", args.output)


def cmd_fixtures(args) -> None:
    if args.name == "circle":
        cloud = noisy_circle(args.n or 200, noise=args.noise if args.noise is not None else 0.02, seed=args.seed)
        rows = cloud.points.tolist()
    elif args.name == "mixture":
        sd = args.noise if args.noise is not None else 0.5
        rows = gaussian_mixture(args.n or 2000, sd=sd, seed=args.seed).points.tolist()
    else:
        dyn = breathing_circle(n=args.n or 30, noise=args.noise if args.noise is not None else 0.02, seed=args.seed)
        rows = [[t, *p] for t, c in dyn.frames for p in c.points.tolist()]
    text = "".join(",".join(repr(float(v)) for v in row) + "\n" for row in rows)
    _emit(text, args.output)


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--h-min", type=float, default=0.05)
    p.add_argument("--h-max", type=float, default=5.0)
    p.add_argument("--h-steps", type=int, default=32)
    p.add_argument("--h-spacing", choices=("lin", "log"), default="log")
    p.add_argument("--grid-steps", type=int, default=None, help="KDE grid nodes per axis (512 in 1D, 128 in 2D)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the sweep")


def _add_landscape_flags(p: argparse.ArgumentParser, K: bool = True) -> None:
    if K:
        p.add_argument("--K", type=int, default=5, help="number of landscape levels kept")
    p.add_argument("--y-steps", type=int, default=512)
    p.add_argument("--y-min", type=float, default=None, help="with --y-max, fixes the y-grid (default: fit the diagrams)")
    p.add_argument("--y-max", type=float, default=None)


def _add_projection_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--projection-csv", help="also write a flamelet level as a sigma x y CSV matrix")
    p.add_argument("--projection-k", type=int, default=1)
    p.add_argument("--projection-dim", type=int, default=None)
    p.add_argument("--vineyard-out", help="also write the underlying vineyards as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flamelets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kde", help="evaluate a Gaussian KDE on a grid")
    p.add_argument("input")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--grid-steps", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_kde)

    p = sub.add_parser("diagram", help="persistence diagrams of a point cloud (CSV) or grid function (JSON)")
    p.add_argument("input")
    p.add_argument("--filtration", choices=("rips", "sublevel", "superlevel"), default="rips")
    p.add_argument("--dims", type=_dims, default=(0, 1))
    p.add_argument("--max-radius", type=float, default=math.inf)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_diagram)

    for name, func in (("landscape", cmd_landscape), ("silhouette", cmd_silhouette)):
        p = sub.add_parser(name, help=f"{name} of a diagram")
        p.add_argument("input")
        p.add_argument("--dim", type=int, default=None)
        _add_landscape_flags(p, K=name == "landscape")
        if name == "silhouette":
            p.add_argument("--p", type=float, default=1.0)
        p.add_argument("-o", "--output")
        p.set_defaults(func=func)

    p = sub.add_parser("flamelet", help="flamelets of a dynamic cloud (time) or of a KDE family (bandwidth)")
    p.add_argument("input")
    p.add_argument("--mode", choices=("time", "bandwidth"), default="time")
    p.add_argument("--dims", type=_dims, default=(0, 1))
    p.add_argument("--max-radius", type=float, default=math.inf)
    _add_landscape_flags(p)
    _add_sweep_flags(p)
    _add_projection_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_flamelet)

    p = sub.add_parser("sweep", help="KDE bandwidth sweep to flamelets")
    p.add_argument("input")
    p.add_argument("--dims", type=_dims, default=(0,))
    _add_landscape_flags(p)
    _add_sweep_flags(p)
    _add_projection_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("select-bandwidth", help="topologically aware bandwidth")
    p.add_argument("input", help="sample CSV (a sweep is run) or flamelets JSON")
    p.add_argument("--dim", type=int, choices=(0, 1), default=0)
    p.add_argument("--k", type=int, default=None, help="flamelet level (default 2 for dim 0, 1 for dim 1)")
    p.add_argument("--criterion", choices=("sup", "mass"), default="sup")
    _add_landscape_flags(p)
    _add_sweep_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_select_bandwidth)

    p = sub.add_parser("project", help="export one flamelet level as a CSV matrix")
    p.add_argument("input")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("distance", help="distance between two artifacts")
    p.add_argument(
        "--metric",
        required=True,
        choices=(
            "bottleneck",
            "landscape",
            "integrated-landscape",
            "integrated-bottleneck",
            "hausdorff",
            "integrated-hausdorff",
        ),
    )
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("silverman", help="normal-reference bandwidth of a sample")
    p.add_argument("input")
    p.add_argument("--d", type=int, default=1, help="dimension of the features to recover")
    p.add_argument("--classic", action="store_true", help="conventional rule: exponent 1/(d+4), scale sqrt(s)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_silverman)

    p = sub.add_parser("fixtures", help="write a seeded synthetic sample as CSV")
    p.add_argument("name", choices=("circle", "mixture", "breathing"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--noise", type=float, default=None, help="noise sd (mixture: component sd)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            args.func(args)
    except (ParseError, OSError) as exc:
        print(f"flamelets: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FlameletError as exc:
        print(f"flamelets: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
