"""Command-line front end.

Four command groups: survey (run / fit / classify / crossover), superfamily
(tableau / slice), hhl (solve / reff / traffic), and repro (tables).  Exit
codes: 0 on success, 2 on configuration or input errors, 3 when a run
completed but recorded partial failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from .families import catalog_entry
from .fitting import fit_series, upper_envelope
from .graphs import (
    SymmetricMatrix,
    hermitian_dilation,
    incidence_matrix,
    laplacian,
    pad_to_power_of_two,
    read_edge_list,
)
from .growth import CompositionError, compose
from .hhl import (
    DEFAULT_CLOCK_QUBITS,
    HhlConfig,
    _abs_row_bound,
    default_config,
    effective_resistance,
    hhl_solve,
    traffic_flow,
)
from .solvers import crossover as numeric_crossover
from .solvers import evaluate_advantage
from .superfamily import (
    SLICE_KINDS,
    column_slice,
    iso_s_slice,
    main_diagonal_slice,
    row_slice,
    slice_verdict,
    sub_diagonal_slice,
    super_diagonal_slice,
    tableau,
    write_tableau_csv,
)
from .survey import (
    DEFAULT_SOLVERS,
    MIN_FIT_POINTS,
    SCHEMA_VERSION,
    config_from_dict,
    fit_from_dict,
    fit_to_dict,
    geometric_scan,
    read_records_csv,
    run_survey,
)
from .tables import reproduce_tables

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3


class CliError(Exception):
    """Input or configuration problem; maps to exit code 2."""


def _load_json(path: str) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from exc


def _emit(data: dict) -> None:
    json.dump(data, sys.stdout, indent=2)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# survey group

def cmd_survey_run(args: argparse.Namespace) -> int:
    doc = _load_json(args.config)
    if args.output_dir is not None:
        doc["output_dir"] = args.output_dir
    try:
        config = config_from_dict(doc)
    except (ValueError, KeyError) as exc:
        raise CliError(f"bad config: {exc}") from exc
    result = run_survey(config, max_workers=args.workers)
    for outcome in result.outcomes:
        categories = {name: v.category for name, v in outcome.verdicts.items()}
        print(
            f"{outcome.key}: {len(outcome.records)} records, "
            f"{len(outcome.errors)} skipped, verdicts {categories or 'unavailable'}"
        )
    if config.output_dir:
        print(f"outputs in {config.output_dir}")
    return EXIT_PARTIAL if result.manifest.skipped else EXIT_OK


def _family_id_of_key(key: str) -> str:
    return key.split("#")[0].split(":")[0]


def cmd_survey_fit(args: argparse.Namespace) -> int:
    try:
        rows = read_records_csv(args.records)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    grouped: dict[str, list] = {}
    for row in rows:
        grouped.setdefault(row.family, []).append(row)
    families = {}
    failures = 0
    for key, group in grouped.items():
        group.sort(key=lambda r: r.n)
        family_id = _family_id_of_key(key)
        entry = catalog_entry(family_id)
        block: dict = {"family": family_id, "n_records": len(group)}
        if len(group) < MIN_FIT_POINTS:
            block["error"] = f"needs {MIN_FIT_POINTS} records, has {len(group)}"
            failures += 1
            families[key] = block
            continue
        sizes = [float(r.system_size) for r in group]
        kappas = [r.kappa for r in group]
        sparsities = [float(r.sparsity) for r in group]
        flagged = False
        if entry.random:
            k_env = upper_envelope(sizes, kappas)
            s_env = upper_envelope(sizes, sparsities)
            flagged = k_env.flagged or s_env.flagged
            sizes_k, kappas = k_env.xs, k_env.ys
            sizes_s, sparsities = s_env.xs, s_env.ys
        else:
            sizes_k, sizes_s = sizes, sizes
        try:
            block["kappa_fit"] = fit_to_dict(fit_series(sizes_k, kappas, "kappa"))
            block["s_fit"] = fit_to_dict(fit_series(sizes_s, sparsities, "sparsity"))
            block["envelope_flagged"] = flagged
        except ValueError as exc:
            block["error"] = f"fit failed: {exc}"
            failures += 1
        families[key] = block
    doc = {"schema": SCHEMA_VERSION, "families": families}
    if args.out:
        with open(args.out, "w") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")
        print(f"fits written to {args.out}")
    else:
        _emit(doc)
    return EXIT_PARTIAL if failures else EXIT_OK


def _iter_fitted_families(doc: dict, only: Optional[str]):
    families = doc.get("families", {})
    if only is not None:
        if only not in families:
            raise CliError(f"family {only!r} not in fits file")
        families = {only: families[only]}
    for key, block in families.items():
        yield key, block


def cmd_survey_classify(args: argparse.Namespace) -> int:
    doc = _load_json(args.fits)
    solvers = args.solver or list(DEFAULT_SOLVERS)
    out: dict = {"solvers": solvers, "families": {}}
    failures = 0
    for key, block in _iter_fitted_families(doc, args.family):
        if "kappa_fit" not in block or "s_fit" not in block:
            out["families"][key] = {"error": block.get("error", "fits missing")}
            failures += 1
            continue
        kappa_fit = fit_from_dict(block["kappa_fit"])
        s_fit = fit_from_dict(block["s_fit"])
        entry = catalog_entry(_family_id_of_key(key))
        size_growth = entry.resolved_size_growth(entry.default_params)
        try:
            kappa_n = compose(kappa_fit.growth, size_growth)
            s_n = compose(s_fit.growth, size_growth)
        except CompositionError as exc:
            out["families"][key] = {"error": f"composition failed: {exc}"}
            failures += 1
            continue
        verdicts = {}
        for name in solvers:
            v = evaluate_advantage(name, size_growth, kappa_n, s_n)
            verdicts[name] = {
                "category": v.category,
                "ratio_class": str(v.ratio_class),
                "futile": v.futile,
            }
        out["families"][key] = {
            "size_growth": str(size_growth),
            "kappa_n": str(kappa_n),
            "s_n": str(s_n),
            "verdicts": verdicts,
        }
    _emit(out)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_survey_crossover(args: argparse.Namespace) -> int:
    doc = _load_json(args.fits)
    scan = geometric_scan(4.0, args.max_n, 2.0)
    out: dict = {"solver": args.solver, "max_N": args.max_n, "families": {}}
    failures = 0
    for key, block in _iter_fitted_families(doc, args.family):
        if "kappa_fit" not in block or "s_fit" not in block:
            out["families"][key] = {"error": block.get("error", "fits missing")}
            failures += 1
            continue
        kappa_fit = fit_from_dict(block["kappa_fit"])
        s_fit = fit_from_dict(block["s_fit"])
        # extrapolated fits are clamped at the physical floor kappa, s >= 1
        n_cross = numeric_crossover(
            args.solver,
            lambda x: max(1.0, kappa_fit.predict(x)),
            lambda x: max(1.0, s_fit.predict(x)),
            scan,
        )
        out["families"][key] = {"crossover_N": n_cross}
    _emit(out)
    return EXIT_PARTIAL if failures else EXIT_OK


# ---------------------------------------------------------------------------
# superfamily group

def cmd_superfamily_tableau(args: argparse.Namespace) -> int:
    try:
        cells = tableau(args.a_max, args.m_max)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            write_tableau_csv(f, cells)
        print(f"tableau written to {args.csv}")
    else:
        write_tableau_csv(sys.stdout, cells)
    return EXIT_OK


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise CliError(f"slice kind {args.kind!r} requires --{name.replace('_', '-')}")


def cmd_superfamily_slice(args: argparse.Namespace) -> int:
    try:
        if args.kind == "row":
            _require(args, "m", "a_max")
            sl = row_slice(args.m, args.a_max)
        elif args.kind == "column":
            _require(args, "a", "m_max")
            sl = column_slice(args.a, args.m_max)
        elif args.kind == "main_diagonal":
            _require(args, "a_max")
            sl = main_diagonal_slice(args.a_max)
        elif args.kind == "super_diagonal":
            _require(args, "d", "a_max")
            sl = super_diagonal_slice(args.d, args.a_max)
        elif args.kind == "sub_diagonal":
            _require(args, "d", "a_max")
            sl = sub_diagonal_slice(args.d, args.a_max)
        else:
            _require(args, "s")
            sl = iso_s_slice(args.s)
        verdict = slice_verdict(sl, args.solver)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(
        {
            "kind": sl.kind,
            "parameter": sl.parameter,
            "cells": [[c.a, c.m] for c in sl.cells],
            "solver": args.solver,
            "category": verdict.category,
            "ratio_class": str(verdict.ratio_class),
            "futile": verdict.futile,
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# hhl group

def _dense_to_symmetric(rows: list) -> SymmetricMatrix:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise CliError("dense matrix must be square")
    if not np.allclose(arr, arr.T, atol=1e-12):
        raise CliError("dense matrix must be symmetric")
    order = arr.shape[0]
    entries = {
        (i, j): float(arr[i, j])
        for i in range(order)
        for j in range(i, order)
        if arr[i, j] != 0.0
    }
    return SymmetricMatrix(order, entries)


def _problem_matrix(doc: dict) -> tuple[SymmetricMatrix, bool]:
    spec = doc.get("matrix")
    if not isinstance(spec, dict):
        raise CliError("problem file needs a 'matrix' object")
    if "dense" in spec:
        matrix = _dense_to_symmetric(spec["dense"])
        signed_hint = bool(spec.get("signed", False))
    elif "edge_list" in spec:
        kind = spec.get("matrix_kind")
        if kind not in ("laplacian", "incidence"):
            raise CliError("matrix_kind must be 'laplacian' or 'incidence'")
        graph = _load_graph(spec["edge_list"])
        if kind == "laplacian":
            matrix = laplacian(graph)
            signed_hint = False
        else:
            matrix = hermitian_dilation(incidence_matrix(graph))
            signed_hint = True
    else:
        raise CliError("matrix needs either 'dense' or 'edge_list'")
    return matrix, signed_hint


def _problem_config(doc: dict, bound: float, signed: bool) -> HhlConfig:
    raw = doc.get("config")
    if not isinstance(raw, dict) or "n_r" not in raw:
        raise CliError("problem file needs config.n_r")
    try:
        if "t" in raw or "C" in raw:
            return HhlConfig(
                n_r=int(raw["n_r"]),
                t=float(raw["t"]),
                C=float(raw["C"]),
                shots=raw.get("shots"),
                seed=raw.get("seed"),
            )
        return default_config(
            int(raw["n_r"]),
            bound,
            raw.get("lambda_min"),
            signed=bool(raw.get("signed", signed)),
            shots=raw.get("shots"),
            seed=raw.get("seed"),
        )
    except (KeyError, ValueError) as exc:
        raise CliError(f"bad solver config: {exc}") from exc


def cmd_hhl_solve(args: argparse.Namespace) -> int:
    doc = _load_json(args.problem)
    matrix, signed_hint = _problem_matrix(doc)
    if "b" not in doc:
        raise CliError("problem file needs 'b'")
    b = np.asarray(doc["b"], dtype=float)
    if b.shape != (matrix.order,):
        raise CliError(f"b must have length {matrix.order}")
    bound = _abs_row_bound(matrix)
    if bound <= 0:
        raise CliError("zero matrix has no invertible part")
    if doc.get("pad"):
        matrix = pad_to_power_of_two(matrix, bound)
        b = np.concatenate([b, np.zeros(matrix.order - len(b))])
    cfg = _problem_config(doc, bound, signed_hint)
    try:
        outcome = hhl_solve(matrix, b, cfg)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    amplitude = (
        outcome.b_norm
        * outcome.scale
        * float(np.sqrt(outcome.p_success * outcome.clock_zero_weight))
    )
    reconstruction = amplitude * outcome.solution_state
    oracle = np.linalg.pinv(matrix.to_dense()) @ b
    # global sign of the statevector is unobservable; align before comparing
    if float(reconstruction @ oracle) < 0:
        reconstruction = -reconstruction
    _emit(
        {
            "p_success": outcome.p_success,
            "scale": outcome.scale,
            "b_norm": outcome.b_norm,
            "clock_zero_weight": outcome.clock_zero_weight,
            "solution_state": [float(x) for x in outcome.solution_state],
            "reconstruction": [float(x) for x in reconstruction],
            "oracle_solution": [float(x) for x in oracle],
            "oracle_delta": float(np.abs(reconstruction - oracle).max()),
        }
    )
    return EXIT_OK


def _load_graph(path: str):
    try:
        with open(path) as f:
            return read_edge_list(f)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load graph: {exc}") from exc


def cmd_hhl_reff(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    method = "oracle" if args.oracle else "hhl"
    cfg = None
    if method == "hhl":
        bound = _abs_row_bound(laplacian(graph))
        try:
            cfg = default_config(args.n_r, bound, shots=args.shots, seed=args.seed)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    try:
        value = effective_resistance(graph, args.i, args.j, method, cfg)
        oracle = effective_resistance(graph, args.i, args.j)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(
        {
            "method": method,
            "i": args.i,
            "j": args.j,
            "effective_resistance": value,
            "oracle": oracle,
            "oracle_delta": abs(value - oracle),
        }
    )
    return EXIT_OK


def _parse_injections(raw: str) -> list[float]:
    path = Path(raw)
    if path.exists():
        data = _load_json(raw)
        if not isinstance(data, list):
            raise CliError("injection file must hold a JSON array")
        return [float(x) for x in data]
    try:
        return [float(tok) for tok in raw.split(",")]
    except ValueError as exc:
        raise CliError(f"injections must be a file or comma-separated reals: {exc}") from exc


def cmd_hhl_traffic(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    injections = _parse_injections(args.injections)
    method = "oracle" if args.oracle else "hhl"
    cfg = None
    if method == "hhl":
        dilated = hermitian_dilation(incidence_matrix(graph))
        try:
            cfg = default_config(args.n_r, _abs_row_bound(dilated), signed=True)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    try:
        result = traffic_flow(graph, injections, method, cfg)
        oracle = traffic_flow(graph, injections)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(
        {
            "method": method,
            "flow": [float(x) for x in result.flow],
            "negative_lanes": list(result.negative_lanes),
            "oracle_flow": [float(x) for x in oracle.flow],
            "oracle_delta": float(np.abs(result.flow - oracle.flow).max()),
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# repro group

def cmd_repro_tables(args: argparse.Namespace) -> int:
    report = reproduce_tables()
    if args.json:
        _emit(report.as_dict())
    else:
        print(report.to_text())
    return EXIT_OK if report.matched == report.total else EXIT_PARTIAL


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlsp",
        description="Survey condition number and sparsity growth of graph "
        "linear systems and classify quantum-solver advantage.",
    )
    groups = parser.add_subparsers(dest="group")

    survey = groups.add_parser("survey", help="run surveys and derive fits/verdicts")
    survey_sub = survey.add_subparsers(dest="command")

    run_p = survey_sub.add_parser("run", help="execute a survey config")
    run_p.add_argument("config", help="JSON survey config")
    run_p.add_argument("--output-dir", help="override the config output directory")
    run_p.add_argument("--workers", type=int, help="measurement worker pool size")
    run_p.set_defaults(handler=cmd_survey_run)

    fit_p = survey_sub.add_parser("fit", help="fit kappa and s from records.csv")
    fit_p.add_argument("records", help="records.csv from a survey run")
    fit_p.add_argument("--out", help="write fits JSON here instead of stdout")
    fit_p.set_defaults(handler=cmd_survey_fit)

    cls_p = survey_sub.add_parser("classify", help="verdicts from a fits file")
    cls_p.add_argument("fits", help="fits JSON from survey fit")
    cls_p.add_argument("--solver", action="append", help="solver name (repeatable)")
    cls_p.add_argument("--family", help="restrict to one family key")
    cls_p.set_defaults(handler=cmd_survey_classify)

    xo_p = survey_sub.add_parser("crossover", help="numeric advantage crossover scan")
    xo_p.add_argument("fits", help="fits JSON from survey fit")
    xo_p.add_argument("--solver", required=True)
    xo_p.add_argument("--max-N", dest="max_n", type=float, default=1e12)
    xo_p.add_argument("--family", help="restrict to one family key")
    xo_p.set_defaults(handler=cmd_survey_crossover)

    superf = groups.add_parser("superfamily", help="generalized hypercube tableau")
    superf_sub = superf.add_subparsers(dest="command")

    tab_p = superf_sub.add_parser("tableau", help="measure the (a, m) tableau")
    tab_p.add_argument("--a-max", dest="a_max", type=int, required=True)
    tab_p.add_argument("--m-max", dest="m_max", type=int, required=True)
    tab_p.add_argument("--csv", help="write CSV here instead of stdout")
    tab_p.set_defaults(handler=cmd_superfamily_tableau)

    sl_p = superf_sub.add_parser("slice", help="classify one tableau slice")
    sl_p.add_argument("--kind", required=True, choices=SLICE_KINDS)
    sl_p.add_argument("--a", type=int)
    sl_p.add_argument("--m", type=int)
    sl_p.add_argument("--d", type=int, help="diagonal offset D")
    sl_p.add_argument("--s", type=int, help="iso-sparsity value")
    sl_p.add_argument("--a-max", dest="a_max", type=int)
    sl_p.add_argument("--m-max", dest="m_max", type=int)
    sl_p.add_argument("--solver", default="HHL")
    sl_p.set_defaults(handler=cmd_superfamily_slice)

    hhl = groups.add_parser("hhl", help="statevector solver applications")
    hhl_sub = hhl.add_subparsers(dest="command")

    solve_p = hhl_sub.add_parser("solve", help="solve a problem file")
    solve_p.add_argument("problem", help="JSON problem description")
    solve_p.set_defaults(handler=cmd_hhl_solve)

    reff_p = hhl_sub.add_parser("reff", help="two-vertex effective resistance")
    reff_p.add_argument("graph", help="undirected edge-list file")
    reff_p.add_argument("--i", type=int, required=True)
    reff_p.add_argument("--j", type=int, required=True)
    reff_p.add_argument("--oracle", action="store_true", help="classical path only")
    reff_p.add_argument("--n-r", dest="n_r", type=int, default=DEFAULT_CLOCK_QUBITS)
    reff_p.add_argument("--shots", type=int)
    reff_p.add_argument("--seed", type=int)
    reff_p.set_defaults(handler=cmd_hhl_reff)

    tr_p = hhl_sub.add_parser("traffic", help="minimum-norm traffic assignment")
    tr_p.add_argument("graph", help="directed edge-list file")
    tr_p.add_argument("injections", help="JSON file or comma-separated reals")
    tr_p.add_argument("--oracle", action="store_true", help="classical path only")
    tr_p.add_argument("--n-r", dest="n_r", type=int, default=DEFAULT_CLOCK_QUBITS)
    tr_p.set_defaults(handler=cmd_hhl_traffic)

    repro = groups.add_parser("repro", help="reproduce published artifacts")
    repro_sub = repro.add_subparsers(dest="command")
    tables_p = repro_sub.add_parser("tables", help="re-derive advantage labels")
    tables_p.add_argument("--json", action="store_true")
    tables_p.set_defaults(handler=cmd_repro_tables)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_help()
        return EXIT_CONFIG
    try:
        return handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
