"""Command-line front end: profile, map, bench, and gen subcommands.

Exit codes: 0 on success, 1 for usage errors (bad flags or flag values),
2 for data errors (unreadable, unparsable, or unmappable inputs). Every
output is deterministic for equal inputs and flags: no timestamps, stable
orderings, fixed float formatting.
"""
from __future__ import annotations

import argparse
import csv
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .circuit import (
    GENERATOR_ALGORITHM,
    GateKind,
    emit_qasm,
    generate_random_circuit,
    load_qasm,
)
from .device import CouplingGraph, grid_device, load_device
from .evaluator import EVAL_FIELD_NAMES, evaluate
from .exceptions import InvalidArgumentError, QcmapError
from .interaction_graph import METRIC_NAMES, build_interaction_graph, edge_list_text, metric_vector
from .mapper import DEFAULT_PRIMITIVES, MapperOptions, map_circuit
from .profiler import (
    REDUCTION_ORDER,
    export_csv,
    format_number,
    pearson_matrix,
    reduce_features,
    run_corpus,
    scatter_data,
    write_correlation_csv,
    write_scatter_tsv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

_GRID_RE = re.compile(r"^(\d+)x(\d+)$")

#: Default scatter pairings written by `qcmap bench`.
DEFAULT_SCATTER_PAIRS = (
    ("two_q_fraction", "gate_overhead_pct"),
    ("n_gates", "fidelity_after"),
    ("gate_overhead_pct", "fidelity_decrease_pct"),
    ("max_degree", "gate_overhead_pct"),
    ("avg_shortest_path_hop", "gate_overhead_pct"),
    ("edge_weight_std_dev", "gate_overhead_pct"),
)


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand run depends on, resolved from flags."""

    device: CouplingGraph | None = None
    placement: str = "trivial"
    swap_accounting: str = "swap1"
    primitives: frozenset[GateKind] = DEFAULT_PRIMITIVES
    seed: int = 0
    threshold: float = 0.9
    out: Path | None = None
    output_format: str = "csv"
    jobs: int = 1

    def mapper_options(self) -> MapperOptions:
        return MapperOptions(
            placement=self.placement,
            swap_accounting=self.swap_accounting,
            primitives=self.primitives,
        )


class _ArgumentParser(argparse.ArgumentParser):
    """argparse reports usage problems with exit code 1, not its default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_primitives(text: str) -> frozenset[GateKind]:
    kinds = set()
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        try:
            kinds.add(GateKind("id" if token == "i" else token))
        except ValueError:
            raise InvalidArgumentError(f"unknown primitive gate '{token}'") from None
    if not kinds:
        raise InvalidArgumentError("the primitive set cannot be empty")
    return frozenset(kinds)


def _resolve_device(args: argparse.Namespace) -> CouplingGraph:
    if args.grid:
        m = _GRID_RE.match(args.grid)
        if not m:
            raise InvalidArgumentError(f"--grid expects RxC (e.g. 4x4), got '{args.grid}'")
        return grid_device(int(m.group(1)), int(m.group(2)))
    return load_device(args.device)


def _config_from_args(args: argparse.Namespace, need_device: bool) -> RunConfig:
    device = _resolve_device(args) if need_device else None
    return RunConfig(
        device=device,
        placement=getattr(args, "placement", "trivial"),
        swap_accounting=getattr(args, "swap_as", "swap1"),
        primitives=_parse_primitives(getattr(args, "primitives", None) or _DEFAULT_PRIMITIVE_FLAG),
        seed=getattr(args, "seed", 0),
        threshold=getattr(args, "threshold", 0.9),
        out=Path(args.out) if getattr(args, "out", None) else None,
        output_format=getattr(args, "format", "csv"),
        jobs=getattr(args, "jobs", 1),
    )


_DEFAULT_PRIMITIVE_FLAG = ",".join(sorted(k.value for k in DEFAULT_PRIMITIVES))


def _expand_inputs(paths: list[str]) -> list[Path]:
    """Files stay files; directories expand to their sorted *.qasm content."""
    out: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            out.extend(sorted(p.glob("*.qasm")))
        else:
            out.append(p)
    return out


# --- profile ----------------------------------------------------------------


def cmd_profile(args: argparse.Namespace) -> int:
    config = _config_from_args(args, need_device=False)
    inputs = _expand_inputs(args.inputs)
    if not inputs:
        print("profile: no input files", file=sys.stderr)
        return EXIT_DATA

    failures = 0
    sections: list[str] = []
    rows: list[list[str]] = []
    for path in inputs:
        try:
            circuit = load_qasm(path)
        except (OSError, QcmapError) as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            failures += 1
            continue
        if config.output_format == "edgelist":
            graph = build_interaction_graph(circuit)
            sections.append(f"# {circuit.name}\n{edge_list_text(graph)}")
        else:
            values = metric_vector(circuit).as_row()
            rows.append([circuit.name] + [format_number(v) for v in values])

    if config.output_format == "edgelist":
        text = "".join(sections)
    else:
        delimiter = "\t" if config.output_format == "tsv" else ","
        lines = [delimiter.join(["name", *METRIC_NAMES])]
        lines.extend(delimiter.join(row) for row in rows)
        text = "\n".join(lines) + "\n" if lines else ""

    if config.out:
        config.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_DATA if failures else EXIT_OK


# --- map --------------------------------------------------------------------


def _mapinfo_text(name: str, device: CouplingGraph, options: MapperOptions, mapped) -> str:
    pairs = [
        ("circuit", name),
        ("device", device.name),
        ("placement", options.placement),
        ("swap_accounting", options.swap_accounting),
        ("primitives", ",".join(sorted(k.value for k in options.primitives))),
        ("fidelity_defaults", ",".join(device.defaults_used) or "none"),
        ("n_swaps_inserted", str(mapped.n_swaps_inserted)),
        ("source_gates", str(mapped.source_gate_count)),
        ("depth_before", str(mapped.depth_before)),
        ("depth_after", str(mapped.depth_after)),
        (
            "initial_placement",
            " ".join(f"{v}:{p}" for v, p in enumerate(mapped.initial_placement.v2p)),
        ),
        (
            "final_placement",
            " ".join(f"{v}:{p}" for v, p in enumerate(mapped.final_placement.v2p)),
        ),
    ]
    return "\n".join(f"{key} {value}" for key, value in pairs) + "\n"


def cmd_map(args: argparse.Namespace) -> int:
    config = _config_from_args(args, need_device=True)
    options = config.mapper_options()
    device = config.device
    inputs = _expand_inputs(args.inputs)
    if not inputs:
        print("map: no input files", file=sys.stderr)
        return EXIT_DATA
    if config.out:
        config.out.mkdir(parents=True, exist_ok=True)

    failures = 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["name", "n_swaps_inserted", *EVAL_FIELD_NAMES])
    for path in inputs:
        try:
            circuit = load_qasm(path)
            mapped = map_circuit(circuit, device, options)
        except (OSError, QcmapError) as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            failures += 1
            continue

        out_dir = config.out or path.parent
        stem = path.stem
        (out_dir / f"{stem}.routed.qasm").write_text(emit_qasm(mapped.routed_output()))
        (out_dir / f"{stem}.mapinfo.txt").write_text(
            _mapinfo_text(circuit.name, device, options, mapped)
        )
        try:
            report = evaluate(mapped, device)
            cells = [format_number(report.as_dict()[name]) for name in EVAL_FIELD_NAMES]
        except InvalidArgumentError:
            cells = ["NA"] * len(EVAL_FIELD_NAMES)
        writer.writerow([circuit.name, str(mapped.n_swaps_inserted), *cells])
    return EXIT_DATA if failures else EXIT_OK


# --- bench ------------------------------------------------------------------


def cmd_bench(args: argparse.Namespace) -> int:
    config = _config_from_args(args, need_device=True)
    options = config.mapper_options()
    inputs = _expand_inputs(args.inputs)
    if not inputs:
        print("bench: empty corpus", file=sys.stderr)
        return EXIT_DATA
    out_dir = config.out or Path("bench_out")
    out_dir.mkdir(parents=True, exist_ok=True)

    result = run_corpus(inputs, config.device, options, jobs=config.jobs)
    for skip in result.skipped:
        print(f"{skip.source}: {skip.reason}", file=sys.stderr)

    export_csv(result.records, out_dir / "records.csv")

    correlation_names = REDUCTION_ORDER + tuple(
        n for n in METRIC_NAMES + EVAL_FIELD_NAMES if n not in REDUCTION_ORDER
    )
    matrix = pearson_matrix(result.records, correlation_names)
    write_correlation_csv(matrix, out_dir / "correlation.csv")

    reduction_matrix = pearson_matrix(result.records, REDUCTION_ORDER)
    kept = reduce_features(reduction_matrix, config.threshold)
    (out_dir / "reduced_metrics.txt").write_text("\n".join(kept) + "\n")

    pairs = DEFAULT_SCATTER_PAIRS
    if args.scatter:
        parsed = []
        for spec in args.scatter:
            x, sep, y = spec.partition(":")
            if not sep or not x or not y:
                raise InvalidArgumentError(f"--scatter expects X:Y, got '{spec}'")
            parsed.append((x, y))
        pairs = tuple(parsed)
    for x_name, y_name in pairs:
        rows = scatter_data(result.records, x_name, y_name)
        write_scatter_tsv(rows, x_name, y_name, out_dir / f"scatter_{x_name}_vs_{y_name}.tsv")

    log_lines = [
        f"device {config.device.name}",
        f"options {options.fingerprint()}",
        f"threshold {format_number(config.threshold)}",
    ]
    skip_reasons = {s.source: s.reason for s in result.skipped}
    for path in inputs:
        key = str(path)
        if key in skip_reasons:
            log_lines.append(f"skip {key}: {skip_reasons[key]}")
        else:
            log_lines.append(f"ok {key}")
    log_lines.append(f"records {len(result.records)}")
    log_lines.append(f"skipped {len(result.skipped)}")
    log_lines.append(f"kept_metrics {len(kept)}")
    (out_dir / "bench.log").write_text("\n".join(log_lines) + "\n")

    return EXIT_DATA if result.skipped else EXIT_OK


# --- gen --------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    out_dir = Path(args.out) if args.out else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = args.seed + i
        circuit = generate_random_circuit(args.qubits, args.gates, args.fraction, seed)
        header = [
            f"// circuit: {circuit.name}",
            f"// generator: {GENERATOR_ALGORITHM}",
            f"// seed: {seed}",
            f"// params: qubits={args.qubits} gates={args.gates} fraction={args.fraction!r}",
            "// origin: synthetic",
        ]
        path = out_dir / f"{args.prefix}_{i:04d}.qasm"
        path.write_text("\n".join(header) + "\n" + emit_qasm(circuit))
        print(path)
    return EXIT_OK


# --- parser wiring ----------------------------------------------------------


def _add_device_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--device", metavar="FILE", help="device description file")
    group.add_argument("--grid", metavar="RxC", help="rectangular grid device, e.g. 5x5")


def _add_mapper_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--placement", choices=("trivial", "degree"), default="trivial",
        help="initial placement strategy (default: trivial)",
    )
    parser.add_argument(
        "--swap-as", dest="swap_as", choices=("cnot3", "swap1"), default="swap1",
        help="SWAP accounting in outputs: one SWAP gate or 3 CNOTs (default: swap1)",
    )
    parser.add_argument(
        "--primitives", default=_DEFAULT_PRIMITIVE_FLAG, metavar="LIST",
        help="comma-separated primitive gate mnemonics",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="qcmap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_profile = sub.add_parser(
        "profile", help="compute interaction-graph metrics for QASM files"
    )
    p_profile.add_argument("inputs", nargs="+", metavar="QASM")
    p_profile.add_argument(
        "--format", choices=("csv", "tsv", "edgelist"), default="csv",
        help="output layout (default: csv)",
    )
    p_profile.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p_profile.set_defaults(func=cmd_profile)

    p_map = sub.add_parser("map", help="route circuits onto a device and report costs")
    p_map.add_argument("inputs", nargs="+", metavar="QASM")
    _add_device_flags(p_map)
    _add_mapper_flags(p_map)
    p_map.add_argument("--out", metavar="DIR", help="directory for routed circuits and sidecars")
    p_map.set_defaults(func=cmd_map)

    p_bench = sub.add_parser(
        "bench", help="profile and map a corpus, then correlate and reduce metrics"
    )
    p_bench.add_argument("inputs", nargs="+", metavar="QASM_OR_DIR")
    _add_device_flags(p_bench)
    _add_mapper_flags(p_bench)
    p_bench.add_argument("--threshold", type=float, default=0.9,
                         help="correlation redundancy threshold (default: 0.9)")
    p_bench.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p_bench.add_argument("--out", metavar="DIR", default="bench_out",
                         help="output directory (default: bench_out)")
    p_bench.add_argument("--scatter", action="append", metavar="X:Y",
                         help="extra scatter table; repeatable, replaces the default set")
    p_bench.set_defaults(func=cmd_bench)

    p_gen = sub.add_parser("gen", help="generate seeded random benchmark circuits")
    p_gen.add_argument("--count", type=int, default=1, help="number of files (default: 1)")
    p_gen.add_argument("--qubits", type=int, required=True)
    p_gen.add_argument("--gates", type=int, required=True)
    p_gen.add_argument("--fraction", type=float, required=True,
                       help="two-qubit gate fraction in [0, 1]")
    p_gen.add_argument("--seed", type=int, default=0,
                       help="base seed; file i uses seed+i (default: 0)")
    p_gen.add_argument("--out", metavar="DIR", help="output directory (default: .)")
    p_gen.add_argument("--prefix", default="random", help="file name prefix (default: random)")
    p_gen.set_defaults(func=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InvalidArgumentError as exc:
        print(f"qcmap {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, QcmapError) as exc:
        print(f"qcmap {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
