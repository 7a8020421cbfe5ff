"""Command-line interface.

Subcommands: estimate, lifecycle, sweep, validate, catalog. Configs are YAML
documents with a ``schema: 1`` version tag; unknown keys are rejected with
their full path so typos surface immediately. Exit codes: 0 success, 1
validation failures, 2 config errors, 3 model errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import yaml

from . import units
from .catalog import resolve_catalogs
from .operational import StorageWorkload
from .pipeline import EstimateRequest, LifecyclePlan, Overrides, estimate, estimate_lifecycle, sweep
from .types import (
    ArchKind,
    CarbonReport,
    CatalogError,
    DataCenterProfile,
    ExpertGroup,
    FleetEntry,
    HardwareFleet,
    LlmArchitecture,
    ModelError,
    Phase,
    ScalingConstants,
    validate_architecture,
)
from .validation import run_validation

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_MODEL_ERROR = 3


class ConfigError(Exception):
    """Bad config document; the message names the offending key path."""


# --------------------------------------------------------------------------
# Config parsing. Each _parse_* helper checks its allowed keys and coerces
# values, building the path string as it descends.
# --------------------------------------------------------------------------

def _num(value, path: str) -> float:
    if isinstance(value, bool) or value is None:
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value))
    except ValueError:
        raise ConfigError(f"{path}: expected a number, got {value!r}") from None


def _opt_num(mapping: dict, key: str, path: str) -> float | None:
    if key not in mapping or mapping[key] is None:
        return None
    return _num(mapping[key], f"{path}.{key}")


def _check_keys(mapping: dict, allowed: set[str], path: str) -> None:
    if not isinstance(mapping, dict):
        raise ConfigError(f"{path}: expected a mapping")
    unknown = set(mapping) - allowed
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{path}.{key}: unknown key")


_ARCH_KEYS = {
    "name", "kind", "hidden_size", "layer_count", "vocab_size", "head_count",
    "head_dim", "ff_size", "moe_fraction", "expert_groups", "ff_stacks",
    "explicit_param_count", "base_model_param_count",
}


def _parse_arch(doc: dict, path: str) -> LlmArchitecture:
    _check_keys(doc, _ARCH_KEYS, path)
    if "kind" not in doc:
        raise ConfigError(f"{path}.kind: required")
    try:
        kind = ArchKind(str(doc["kind"]))
    except ValueError:
        valid = ", ".join(k.value for k in ArchKind)
        raise ConfigError(f"{path}.kind: must be one of {valid}") from None

    groups = []
    for i, g in enumerate(doc.get("expert_groups") or []):
        gpath = f"{path}.expert_groups[{i}]"
        _check_keys(g, {"layer_fraction", "expert_count"}, gpath)
        groups.append(ExpertGroup(
            layer_fraction=_num(g.get("layer_fraction"), f"{gpath}.layer_fraction"),
            expert_count=int(_num(g.get("expert_count"), f"{gpath}.expert_count")),
        ))

    def opt_int(key):
        v = _opt_num(doc, key, path)
        return None if v is None else int(v)

    arch = LlmArchitecture(
        name=str(doc.get("name", "unnamed")),
        kind=kind,
        hidden_size=int(_opt_num(doc, "hidden_size", path) or 0),
        layer_count=int(_opt_num(doc, "layer_count", path) or 0),
        vocab_size=int(_opt_num(doc, "vocab_size", path) or 0),
        head_count=opt_int("head_count"),
        head_dim=opt_int("head_dim"),
        ff_size=opt_int("ff_size"),
        moe_fraction=_opt_num(doc, "moe_fraction", path),
        expert_groups=tuple(groups),
        ff_stacks=int(_opt_num(doc, "ff_stacks", path) or 1),
        explicit_param_count=opt_int("explicit_param_count"),
        base_model_param_count=opt_int("base_model_param_count"),
    )
    problems = validate_architecture(arch)
    if problems:
        raise ConfigError(f"{path}: " + "; ".join(problems))
    return arch


def _parse_fleet(doc, units_by_name, path: str) -> HardwareFleet:
    if not isinstance(doc, list) or not doc:
        raise ConfigError(f"{path}: expected a non-empty list of fleet entries")
    entries = []
    for i, entry in enumerate(doc):
        epath = f"{path}[{i}]"
        _check_keys(entry, {"unit", "count"}, epath)
        name = str(entry.get("unit", ""))
        if name not in units_by_name:
            raise ConfigError(f"{epath}.unit: unknown hardware unit {name!r}")
        count = int(_num(entry.get("count"), f"{epath}.count"))
        try:
            entries.append(FleetEntry(units_by_name[name], count))
        except CatalogError as exc:
            raise ConfigError(f"{epath}: {exc}") from None
    try:
        return HardwareFleet(tuple(entries))
    except CatalogError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_data_center(doc, centers_by_name, path: str) -> DataCenterProfile:
    if isinstance(doc, str):
        if doc not in centers_by_name:
            raise ConfigError(f"{path}: unknown data center {doc!r}")
        return centers_by_name[doc]
    _check_keys(doc, {"name", "pue", "carbon_intensity", "cfe"}, path)
    try:
        return DataCenterProfile(
            name=str(doc.get("name", "inline")),
            pue=_num(doc.get("pue"), f"{path}.pue"),
            carbon_intensity=_num(doc.get("carbon_intensity"), f"{path}.carbon_intensity"),
            cfe=_opt_num(doc, "cfe", path) or 0.0,
        )
    except CatalogError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_storage(doc, path: str) -> StorageWorkload:
    _check_keys(doc, {"stored_tb", "transferred_tb", "duration_days",
                      "storage_w_per_tb", "transfer_w_per_tb"}, path)
    kwargs = dict(
        stored_tb=_num(doc.get("stored_tb", 0), f"{path}.stored_tb"),
        transferred_tb=_num(doc.get("transferred_tb", 0), f"{path}.transferred_tb"),
        duration_days=_num(doc.get("duration_days", 0), f"{path}.duration_days"),
    )
    for key in ("storage_w_per_tb", "transfer_w_per_tb"):
        v = _opt_num(doc, key, path)
        if v is not None:
            kwargs[key] = v
    try:
        return StorageWorkload(**kwargs)
    except ModelError as exc:
        raise ConfigError(f"{path}: {exc}") from None


_REQUEST_KEYS = {
    "phase", "architecture", "tokens", "fleet", "data_center", "storage",
    "overrides", "device_memory_gb", "server_size", "scaling",
}
_OVERRIDE_KEYS = {"measured_flops", "efficiency", "device_count", "system_power_watts"}
_SCALING_KEYS = {"A", "B", "alpha", "beta", "E"}


def _parse_request(doc: dict, catalogs, path: str) -> EstimateRequest:
    units_by_name, centers_by_name = catalogs
    _check_keys(doc, _REQUEST_KEYS, path)

    phase_name = str(doc.get("phase", "training"))
    try:
        phase = Phase(phase_name)
    except ValueError:
        raise ConfigError(f"{path}.phase: unknown phase {phase_name!r}") from None

    if "architecture" not in doc:
        raise ConfigError(f"{path}.architecture: required")
    arch = _parse_arch(doc["architecture"], f"{path}.architecture")

    if "fleet" not in doc:
        raise ConfigError(f"{path}.fleet: required")
    fleet = _parse_fleet(doc["fleet"], units_by_name, f"{path}.fleet")

    if "data_center" not in doc:
        raise ConfigError(f"{path}.data_center: required")
    dc = _parse_data_center(doc["data_center"], centers_by_name, f"{path}.data_center")

    overrides = Overrides()
    if "overrides" in doc and doc["overrides"] is not None:
        odoc = doc["overrides"]
        _check_keys(odoc, _OVERRIDE_KEYS, f"{path}.overrides")
        dev = _opt_num(odoc, "device_count", f"{path}.overrides")
        overrides = Overrides(
            measured_flops=_opt_num(odoc, "measured_flops", f"{path}.overrides"),
            efficiency=_opt_num(odoc, "efficiency", f"{path}.overrides"),
            device_count=None if dev is None else int(dev),
            system_power_watts=_opt_num(odoc, "system_power_watts", f"{path}.overrides"),
        )

    scaling = ScalingConstants()
    if "scaling" in doc and doc["scaling"] is not None:
        sdoc = doc["scaling"]
        _check_keys(sdoc, _SCALING_KEYS, f"{path}.scaling")
        defaults = ScalingConstants()
        scaling = ScalingConstants(
            A=_opt_num(sdoc, "A", f"{path}.scaling") or defaults.A,
            B=_opt_num(sdoc, "B", f"{path}.scaling") or defaults.B,
            alpha=_opt_num(sdoc, "alpha", f"{path}.scaling") or defaults.alpha,
            beta=_opt_num(sdoc, "beta", f"{path}.scaling") or defaults.beta,
            E=_opt_num(sdoc, "E", f"{path}.scaling") or defaults.E,
        )

    storage = None
    if "storage" in doc and doc["storage"] is not None:
        storage = _parse_storage(doc["storage"], f"{path}.storage")

    return EstimateRequest(
        arch=arch,
        tokens=_opt_num(doc, "tokens", path) or 0.0,
        fleet=fleet,
        data_center=dc,
        phase=phase,
        scaling=scaling,
        overrides=overrides,
        storage=storage,
        device_memory_gb=_opt_num(doc, "device_memory_gb", path) or 32.0,
        server_size=int(_opt_num(doc, "server_size", path) or 8),
    )


def _load_config(path: str, top_key: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    _check_keys(doc, {"schema", top_key}, path)
    version = doc.get("schema")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"{path}.schema: expected {SCHEMA_VERSION}, got {version!r}")
    if top_key not in doc:
        raise ConfigError(f"{path}.{top_key}: required")
    return doc[top_key]


# --------------------------------------------------------------------------
# Output formatting.
# --------------------------------------------------------------------------

def _format_report_table(report: CarbonReport) -> str:
    rows = [
        ("phase", report.phase.value),
        ("duration (days)", f"{units.seconds_to_days(report.duration_seconds):.1f}"),
        ("hardware energy (MWh)", f"{report.hardware_energy_mwh:.3f}"),
        ("operational energy (MWh)", f"{report.operational_energy_mwh:.3f}"),
        ("operational (tCO2eq)", f"{report.operational_tco2:.2f}"),
        ("embodied (tCO2eq)", f"{report.embodied_tco2:.2f}"),
        ("total (tCO2eq)", f"{report.total_tco2:.2f}"),
        ("hardware efficiency", f"{report.hardware_efficiency:.4f}"),
    ]
    if report.test_loss is not None:
        rows.append(("test loss", f"{report.test_loss:.4f}"))
    if report.parallelism is not None:
        p = report.parallelism
        rows.append(("parallelism (p,t,d,e)",
                     f"{p.pipeline},{p.tensor},{p.data},{p.expert} "
                     f"(n={p.device_count})"))
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {value}" for label, value in rows)


REPORT_CSV_HEADER = [
    "phase", "duration_days", "hardware_energy_mwh", "operational_energy_mwh",
    "operational_tco2", "embodied_tco2", "total_tco2", "test_loss",
    "hardware_efficiency",
]


def _format_report_csv(report: CarbonReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(REPORT_CSV_HEADER)
    writer.writerow([
        report.phase.value,
        f"{units.seconds_to_days(report.duration_seconds):.6f}",
        f"{report.hardware_energy_mwh:.6f}",
        f"{report.operational_energy_mwh:.6f}",
        f"{report.operational_tco2:.6f}",
        f"{report.embodied_tco2:.6f}",
        f"{report.total_tco2:.6f}",
        "" if report.test_loss is None else f"{report.test_loss:.6f}",
        f"{report.hardware_efficiency:.6f}",
    ])
    return out.getvalue()


SWEEP_CSV_HEADER = ["name", "params", "tokens", "test_loss", "training_tco2", "dominated"]


def _format_sweep_csv(points) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for p in points:
        writer.writerow([p.name, p.param_count, f"{p.tokens:.6g}",
                         f"{p.test_loss:.6f}", f"{p.training_tco2:.6f}",
                         "yes" if p.dominated else "no"])
    return out.getvalue()


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --------------------------------------------------------------------------
# Subcommands.
# --------------------------------------------------------------------------

def _cmd_estimate(args) -> int:
    catalogs = resolve_catalogs(args.catalog)
    doc = _load_config(args.config, "estimate")
    req = _parse_request(doc, catalogs, "estimate")
    report = estimate(req)
    text = _format_report_csv(report) if args.format == "csv" else _format_report_table(report)
    _emit(text, args.out)
    return EXIT_OK


def _cmd_lifecycle(args) -> int:
    catalogs = resolve_catalogs(args.catalog)
    doc = _load_config(args.config, "lifecycle")
    _check_keys(doc, {"training", "inference_share", "experimentation_share", "storage"},
                "lifecycle")
    if "training" not in doc:
        raise ConfigError("lifecycle.training: required")
    training = _parse_request(doc["training"], catalogs, "lifecycle.training")
    storage = None
    if doc.get("storage") is not None:
        storage = _parse_storage(doc["storage"], "lifecycle.storage")
    plan = LifecyclePlan(
        training=training,
        inference_share=_opt_num(doc, "inference_share", "lifecycle") or 0.0,
        experimentation_share=_opt_num(doc, "experimentation_share", "lifecycle") or 0.0,
        storage=storage,
    )
    report = estimate_lifecycle(plan)
    text = _format_report_csv(report) if args.format == "csv" else _format_report_table(report)
    _emit(text, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    catalogs = resolve_catalogs(args.catalog)
    doc = _load_config(args.config, "sweep")
    _check_keys(doc, {"grid", "fleet", "data_center", "device_memory_gb", "server_size"},
                "sweep")
    grid_doc = doc.get("grid")
    if not isinstance(grid_doc, list) or not grid_doc:
        raise ConfigError("sweep.grid: must be a non-empty list")
    if "fleet" not in doc:
        raise ConfigError("sweep.fleet: required")
    fleet = _parse_fleet(doc["fleet"], catalogs[0], "sweep.fleet")
    if "data_center" not in doc:
        raise ConfigError("sweep.data_center: required")
    dc = _parse_data_center(doc["data_center"], catalogs[1], "sweep.data_center")

    grid = []
    for i, point in enumerate(grid_doc):
        ppath = f"sweep.grid[{i}]"
        _check_keys(point, {"architecture", "tokens"}, ppath)
        if "architecture" not in point:
            raise ConfigError(f"{ppath}.architecture: required")
        arch = _parse_arch(point["architecture"], f"{ppath}.architecture")
        grid.append((arch, _num(point.get("tokens"), f"{ppath}.tokens")))

    points, errors = sweep(
        grid, fleet, dc,
        device_memory_gb=_opt_num(doc, "device_memory_gb", "sweep") or 32.0,
        server_size=int(_opt_num(doc, "server_size", "sweep") or 8),
    )
    for name, reason in errors:
        print(f"skipped {name}: {reason}", file=sys.stderr)
    text = _format_sweep_csv(points)
    _emit(text, args.out)
    nondominated = sum(1 for p in points if not p.dominated)
    print(f"{len(points)} points, {nondominated} nondominated", file=sys.stderr)
    if errors:
        return EXIT_MODEL_ERROR
    return EXIT_OK


def _cmd_validate(args) -> int:
    rows = run_validation(only=args.only)
    name_w = max(len(f"{r.group}/{r.name}") for r in rows)
    print(f"{'fixture':<{name_w}}  {'predicted':>12} {'expected':>12} "
          f"{'delta':>10} {'tolerance':>10}  result")
    failures = 0
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failures += 1
        print(f"{r.group + '/' + r.name:<{name_w}}  {r.predicted:>12.4f} "
              f"{r.expected:>12.4f} {r.delta:>+10.4f} {r.tolerance:>10.4f}  {status}")
    print(f"{len(rows) - failures}/{len(rows)} fixtures passed")
    return EXIT_OK if failures == 0 else EXIT_VALIDATION_FAILED


def _cmd_catalog(args) -> int:
    units_by_name, centers_by_name = resolve_catalogs(args.catalog)
    print("hardware units:")
    for name in sorted(units_by_name):
        u = units_by_name[name]
        bits = [u.role.value]
        if u.peak_tflops:
            bits.append(f"{u.peak_tflops:g} TFLOP/s")
        if u.tdp_watts:
            bits.append(f"{u.tdp_watts:g} W TDP")
        bits.append(f"embodied basis: {u.embodied_basis}")
        print(f"  {name:<12} {', '.join(bits)}")
    print("data centers:")
    for name in sorted(centers_by_name):
        c = centers_by_name[name]
        print(f"  {name:<16} PUE {c.pue:g}, {c.carbon_intensity:g} kgCO2eq/kWh, "
              f"CFE {c.cfe:.0%}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carboncast",
        description="Project the carbon footprint of dense and MoE LLMs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="YAML config path")
        p.add_argument("--catalog", action="append", default=[],
                       help="extra catalog CSV (repeatable, later wins)")
        p.add_argument("--format", choices=["table", "csv"], default="table")
        p.add_argument("--out", default=None, help="write output to a file")

    add_common(sub.add_parser("estimate", help="project one phase"))
    add_common(sub.add_parser("lifecycle", help="project a whole lifecycle"))
    p_sweep = sub.add_parser("sweep", help="evaluate a design grid with Pareto flags")
    add_common(p_sweep)
    p_val = sub.add_parser("validate", help="run the embedded validation fixtures")
    p_val.add_argument("--only", default=None,
                       help="run one fixture group (parameters, training, days, "
                            "embodied, storage, inference, efficiency)")
    p_cat = sub.add_parser("catalog", help="list known hardware and data centers")
    p_cat.add_argument("action", choices=["list"])
    p_cat.add_argument("--catalog", action="append", default=[])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "lifecycle":
            return _cmd_lifecycle(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "catalog":
            return _cmd_catalog(args)
        parser.error(f"unknown command {args.command}")
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except CatalogError as exc:
        print(f"catalog error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
