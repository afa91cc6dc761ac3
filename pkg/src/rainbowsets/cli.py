"""Command-line surface: generate, find, bench, audit, oracle.

Exit codes are a stable contract: 0 success/PASS, 1 internal error,
2 validation or parameter failure, 3 budget/resource refusal.  All output
files are deterministic for a given seed; wall-clock times appear only in
console summaries and in the benchmark CSV's runtime_ms column.
"""

from __future__ import annotations

import argparse
import json
import sys
from statistics import median

from . import algebra, engine, geometry
from .errors import BudgetError, DegenerateInputError, ParameterError, ValidationError
from .hypergraph import DEFAULT_BUDGET, GroundSet, validate_lambda

POINT_COLOURINGS = ("circumradius", "volume", "similarity")
INTEGER_COLOURINGS = ("sidon", "poly")
ALGORITHMS = ("greedy", "sample-delete", "exact")


def _dump_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _write_manifest(out: str, payload: dict) -> None:
    _write(out + ".manifest.json", _dump_json(payload))


def _load_instance(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    kind = obj.get("type")
    if kind == "points":
        return geometry.points_from_obj(obj)
    if kind == "integers":
        return algebra.integers_from_obj(obj)
    raise ParameterError(f"unknown instance type {kind!r} in {path}")


def _load_poly(path: str | None) -> algebra.SymPoly:
    if path is None:
        raise ParameterError("the poly colouring needs --poly <file>")
    with open(path, "r", encoding="utf-8") as fh:
        return algebra.sympoly_from_obj(json.load(fh))


class _Setup:
    """A colouring bound to its instance plus the id -> domain-value report map."""

    def __init__(self, colouring, ground, describe):
        self.colouring = colouring
        self.ground = ground
        self.describe = describe  # vertex id -> JSON-ready domain value


def _setup_colouring(instance, name: str, poly_path: str | None, budget: int) -> _Setup:
    if name in POINT_COLOURINGS:
        if not isinstance(instance, geometry.PointInstance):
            raise ParameterError(f"colouring {name} needs a points instance")
        validated = instance.validate(budget=budget, sphere=(name == "circumradius"))
        factory = {
            "circumradius": geometry.circumradius_colouring,
            "volume": geometry.volume_colouring,
            "similarity": geometry.similarity_colouring,
        }[name]
        colouring = factory(validated)
        points = validated.points

        def describe(v: int):
            return [[str(c.numerator), str(c.denominator)] for c in points[v]]

        return _Setup(colouring, GroundSet(len(points)), describe)

    if name == "sidon":
        if not isinstance(instance, algebra.IntegerInstance):
            raise ParameterError("the sidon colouring needs an integers instance")
        colouring = algebra.sidon_colouring(instance)
        values = instance.values
        return _Setup(colouring, GroundSet(len(values)), lambda v: str(values[v]))

    if name == "poly":
        if not isinstance(instance, algebra.IntegerInstance):
            raise ParameterError("the poly colouring needs an integers instance")
        poly = _load_poly(poly_path)
        prepared = algebra.poly_prepare(poly, instance.values)
        if not prepared.kept:
            raise ValidationError("no usable values left after polynomial preparation")
        colouring = algebra.poly_colouring(prepared)
        values = prepared.kept
        return _Setup(colouring, GroundSet(len(values)), lambda v: str(values[v]))

    raise ParameterError(f"unknown colouring {name!r}")


def _cmd_generate(args) -> int:
    if args.kind == "points":
        inst = geometry.generate_general_position(
            args.n, args.d, args.seed, coord_bound=args.coord_bound
        )
        obj = geometry.points_to_obj(inst)
        params = {"n": args.n, "d": args.d, "seed": args.seed,
                  "coord_bound": args.coord_bound}
    elif args.kind == "integers-range":
        inst = algebra.IntegerInstance(values=tuple(range(1, args.n + 1)))
        obj = algebra.integers_to_obj(inst)
        params = {"n": args.n}
    elif args.kind == "integers-random":
        import random

        max_value = args.max_value if args.max_value is not None else 100 * args.n
        if max_value < args.n:
            raise ParameterError(f"--max-value {max_value} cannot fit {args.n} distinct values")
        rng = random.Random(args.seed)
        values = tuple(sorted(rng.sample(range(1, max_value + 1), args.n)))
        inst = algebra.IntegerInstance(values=values)
        obj = algebra.integers_to_obj(inst)
        params = {"n": args.n, "max_value": max_value, "seed": args.seed}
    else:  # pragma: no cover - argparse restricts choices
        raise ParameterError(f"unknown kind {args.kind!r}")
    _write(args.out, _dump_json(obj))
    _write_manifest(args.out, {"command": "generate", "kind": args.kind,
                               "params": params, "out": args.out})
    print(f"wrote {args.out} ({args.kind}, n={args.n})")
    return 0


def _result_obj(result: engine.RainbowResult, setup: _Setup) -> dict:
    return {
        "subset": [setup.describe(v) for v in result.subset],
        "size": result.size,
        "algorithm": result.algorithm,
        "seed": result.seed,
        "verified": result.verified,
        "stats": result.stats,
    }


def _result_csv(result: engine.RainbowResult, setup: _Setup) -> str:
    flat = []
    for v in result.subset:
        desc = setup.describe(v)
        flat.append("(" + " ".join(f"{n}/{d}" for n, d in desc) + ")"
                    if isinstance(desc, list) else desc)
    rows = ["size,algorithm,seed,verified,subset"]
    seed = "" if result.seed is None else result.seed
    rows.append(f"{result.size},{result.algorithm},{seed},{result.verified},"
                f"\"{' '.join(flat)}\"")
    return "\n".join(rows) + "\n"


def _cmd_find(args, forced_algorithm: str | None = None) -> int:
    instance = _load_instance(args.instance)
    setup = _setup_colouring(instance, args.colouring, args.poly, args.budget)
    algorithm = (forced_algorithm or args.algorithm).replace("-", "_")
    result = engine.run_algorithm(
        setup.colouring, setup.ground, algorithm, args.seed,
        shrink=args.shrink, p=args.p, limit=args.limit, budget=args.budget,
    )
    text = (_result_csv(result, setup) if args.format == "csv"
            else _dump_json(_result_obj(result, setup)))
    if args.out:
        _write(args.out, text)
        _write_manifest(args.out, {
            "command": "find", "instance": args.instance, "colouring": args.colouring,
            "poly": args.poly, "algorithm": algorithm, "seed": args.seed,
            "shrink": args.shrink, "p": args.p, "limit": args.limit,
            "budget": args.budget, "format": args.format, "out": args.out,
        })
    else:
        sys.stdout.write(text)
    print(
        f"rainbow size={result.size} algorithm={result.algorithm} "
        f"seed={result.seed} verified={result.verified} "
        f"runtime_ms={result.runtime_ms:.1f}",
        file=sys.stderr,
    )
    return 0 if result.verified else 1


def _cmd_audit(args) -> int:
    instance = _load_instance(args.instance)
    setup = _setup_colouring(instance, args.colouring, args.poly, args.budget)
    ok, report = validate_lambda(setup.colouring, setup.ground, budget=args.budget)
    obj = {
        "colouring": setup.colouring.label,
        "declared_max_petals": setup.colouring.spec.max_petals,
        "petals": report.petals,
        "core": [setup.describe(v) for v in report.core],
        "colour": report.colour.decode("ascii", errors="backslashreplace"),
        "witnesses": [[setup.describe(v) for v in e] for e in report.witness_edges],
        "pass": ok,
    }
    if args.out:
        _write(args.out, _dump_json(obj))
    print(f"colouring={obj['colouring']} declared_max_petals={obj['declared_max_petals']} "
          f"petals={report.petals}")
    print(f"core={obj['core']} colour={obj['colour']}")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 2


def _bench_instance(name: str, n: int, args, instance_seed: int) -> _Setup:
    if name in POINT_COLOURINGS:
        inst = geometry.generate_general_position(n, args.d, instance_seed)
        return _setup_colouring(inst, name, None, args.budget)
    inst = algebra.IntegerInstance(values=tuple(range(1, n + 1)))
    return _setup_colouring(inst, name, args.poly, args.budget)


def _cmd_bench(args) -> int:
    grid = sorted({int(part) for part in args.grid.split(",") if part})
    if len(grid) < 4:
        raise ParameterError(f"need at least 4 grid points for the exponent fit, got {len(grid)}")
    algorithms = [a.replace("-", "_") for a in args.algorithms.split(",") if a]
    for a in algorithms:
        if a not in ("greedy", "sample_delete", "exact"):
            raise ParameterError(f"unknown algorithm {a!r}")
    if args.trials < 3:
        raise ParameterError("need at least 3 trials per grid point for the fit")

    records: list[engine.BenchRecord] = []
    spec = None
    for index, n in enumerate(grid):
        setup = _bench_instance(args.colouring, n, args, engine.derive_seed(args.seed, 1_000_000 + index))
        spec = setup.colouring.spec
        for algorithm in algorithms:
            def log_trial(record: engine.BenchRecord) -> None:
                print(f"N={record.n} algorithm={record.algorithm} trial={record.trial} "
                      f"size={record.rainbow_size} runtime_ms={record.runtime_ms:.1f}",
                      file=sys.stderr)

            records.extend(engine.bench_trials(
                setup.colouring, setup.ground, algorithm, args.trials, args.seed,
                budget=args.budget, on_trial=log_trial,
            ))

    _write(args.out, engine.bench_csv(records))
    assert spec is not None
    predicted = (spec.k - spec.h) / (2 * spec.k - 1)

    fits = {}
    medians = {}
    passed = True
    for algorithm in algorithms:
        subset = [r for r in records if r.algorithm == algorithm]
        fit = engine.estimate_exponent(subset)
        fits[algorithm] = {"slope": fit.slope, "stderr": fit.stderr, "intercept": fit.intercept}
        med = {str(n): median(r.rainbow_size for r in subset if r.n == n) for n in grid}
        medians[algorithm] = med
        slope_ok = args.slope_min <= fit.slope <= args.slope_max
        floor_ok = all(med[str(n)] >= args.median_coeff * n ** predicted for n in grid)
        passed = passed and slope_ok and floor_ok

    report = {
        "colouring": args.colouring,
        "algorithms": algorithms,
        "grid": grid,
        "trials": args.trials,
        "master_seed": args.seed,
        "predicted_slope": predicted,
        "fits": fits,
        "medians": medians,
        "thresholds": {"slope_min": args.slope_min, "slope_max": args.slope_max,
                       "median_coeff": args.median_coeff},
        "pass": passed,
    }
    report_path = args.report or (args.out + ".report.json")
    _write(report_path, _dump_json(report))
    for algorithm in algorithms:
        print(f"algorithm={algorithm} slope={fits[algorithm]['slope']:.4f} "
              f"predicted={predicted:.4f}")
    print("PASS" if passed else "FAIL")
    return 0 if passed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbowsets",
        description="Find large rainbow subsets of edge-coloured complete hypergraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write an instance file plus its manifest")
    gen.add_argument("kind", choices=("points", "integers-range", "integers-random"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, default=2, help="dimension for points")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--coord-bound", type=int, default=None)
    gen.add_argument("--max-value", type=int, default=None)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_generate)

    def add_common(p, with_algorithm: bool):
        p.add_argument("--instance", required=True)
        p.add_argument("--colouring", required=True,
                       choices=POINT_COLOURINGS + INTEGER_COLOURINGS)
        p.add_argument("--poly", default=None, help="sympoly JSON for the poly colouring")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--out", default=None)
        if with_algorithm:
            p.add_argument("--shrink", type=float, default=0.5)
            p.add_argument("--p", type=float, default=None)
            p.add_argument("--limit", type=int, default=None,
                           help="exact-oracle ground-size cap override")
            p.add_argument("--format", choices=("json", "csv"), default="json")

    find = sub.add_parser("find", help="extract a verified rainbow subset")
    add_common(find, with_algorithm=True)
    find.add_argument("--algorithm", choices=ALGORITHMS, default="greedy")
    find.set_defaults(func=_cmd_find)

    oracle = sub.add_parser("oracle", help="find with the exact branch-and-bound oracle")
    add_common(oracle, with_algorithm=True)
    oracle.set_defaults(func=lambda a: _cmd_find(a, forced_algorithm="exact"))

    audit = sub.add_parser("audit", help="report the worst monochromatic sunflower")
    add_common(audit, with_algorithm=False)
    audit.set_defaults(func=_cmd_audit)

    bench = sub.add_parser("bench", help="seeded trials over a grid of ground sizes")
    bench.add_argument("--colouring", required=True,
                       choices=POINT_COLOURINGS + INTEGER_COLOURINGS)
    bench.add_argument("--poly", default=None)
    bench.add_argument("--grid", required=True, help="comma-separated ground sizes")
    bench.add_argument("--algorithms", default="greedy", help="comma-separated algorithms")
    bench.add_argument("--trials", type=int, default=5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--d", type=int, default=2)
    bench.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    bench.add_argument("--out", required=True, help="CSV path; report lands beside it")
    bench.add_argument("--report", default=None)
    bench.add_argument("--slope-min", type=float, default=0.28)
    bench.add_argument("--slope-max", type=float, default=0.40)
    bench.add_argument("--median-coeff", type=float, default=0.8)
    bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except ValidationError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    except (ParameterError, DegenerateInputError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - contract maps unknowns to exit 1
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())
