"""Survey orchestration: run family schedules, persist records, emit reports.

A survey walks a list of family specs, measures every scheduled instance,
fits condition number and sparsity against system size, composes the fits
with the declared size growth, and classifies each configured quantum
solver.  Results are persisted as records.csv (one row per instance),
report.json (fits and verdicts), manifest.json (provenance and timings),
and plot-ready CSV series.  Instance failures are recorded in the manifest
and skipped; the run continues.
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import datetime
import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, NamedTuple, Optional, Sequence, Union

from . import __version__
from .families import FamilySpec, catalog_entry, derive_seed, generate, make_spec
from .fitting import FitResult, _growth_of, fit_series, upper_envelope
from .graphs import SymmetricMatrix, hermitian_dilation, incidence_matrix, laplacian
from .growth import CompositionError, GrowthClass, compose
from .solvers import AdvantageVerdict, crossover, evaluate_advantage, get_solver, ratio_R
from .spectral import DEFAULT_CUTOFF, SpectralRecord, measure

SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "family",
    "n",
    "system_size",
    "matrix_kind",
    "kappa",
    "lambda_min_nz",
    "lambda_max",
    "sparsity",
    "cutoff",
    "seed",
)
DEFAULT_SOLVERS = ("HHL", "CKS(1)", "DREAM")
MIN_FIT_POINTS = 4


def geometric_scan(
    start: float = 4.0, stop: float = 1e12, factor: float = 2.0
) -> tuple[float, ...]:
    """Geometric grid of system sizes for numeric crossover scans."""
    if not (start > 0 and stop >= start and factor > 1):
        raise ValueError("need start > 0, stop >= start, factor > 1")
    points = []
    x = start
    while x <= stop:
        points.append(x)
        x *= factor
    return tuple(points)


def system_matrix(instance) -> SymmetricMatrix:
    """Hermitian system matrix of a generated instance.

    Laplacian families solve L x = b directly; incidence families solve the
    dilated system [[0, B], [B^T, 0]].
    """
    if instance.spec.matrix_kind == "laplacian":
        return laplacian(instance.graph)
    return hermitian_dilation(incidence_matrix(instance.graph))


@dataclass(frozen=True)
class SurveyConfig:
    """One survey: which families to run and how to classify them.

    base_seed is provenance for configs loaded from JSON, where it seeds
    every random family that carries no explicit per-family seed; specs
    passed in directly are used as-is.  output_dir None keeps the run
    in memory.
    """

    families: tuple[FamilySpec, ...]
    cutoff: float = DEFAULT_CUTOFF
    dense_limit: Optional[int] = None
    solvers: tuple[str, ...] = DEFAULT_SOLVERS
    scan_range: tuple[float, ...] = field(default_factory=geometric_scan)
    output_dir: Optional[str] = None
    base_seed: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "solvers", tuple(self.solvers))
        object.__setattr__(self, "scan_range", tuple(float(x) for x in self.scan_range))
        if not self.families:
            raise ValueError("families must be nonempty")
        for spec in self.families:
            if not isinstance(spec, FamilySpec):
                raise ValueError("families must be FamilySpec instances")
        if not self.cutoff > 0:
            raise ValueError("cutoff must be positive")
        if self.dense_limit is not None and self.dense_limit < 1:
            raise ValueError("dense_limit must be positive")
        if not self.solvers:
            raise ValueError("solvers must be nonempty")
        for name in self.solvers:
            get_solver(name)  # raises KeyError on unknown names
        if any(b <= a for a, b in zip(self.scan_range, self.scan_range[1:])):
            raise ValueError("scan_range must be strictly increasing")
        if self.output_dir is not None:
            path = Path(self.output_dir)
            path.mkdir(parents=True, exist_ok=True)
            if not os.access(path, os.W_OK):
                raise ValueError(f"output_dir {path} is not writable")

    def family_keys(self) -> tuple[str, ...]:
        """Unique report key per spec: family id, weight rule, #i for repeats."""
        keys: list[str] = []
        seen: dict[str, int] = {}
        for spec in self.families:
            base = spec.family_id
            if spec.weight_rule != "unit":
                base = f"{base}:{spec.weight_rule}"
            count = seen.get(base, 0) + 1
            seen[base] = count
            keys.append(base if count == 1 else f"{base}#{count}")
        return tuple(keys)


def config_to_dict(config: SurveyConfig) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "cutoff": config.cutoff,
        "dense_limit": config.dense_limit,
        "solvers": list(config.solvers),
        "scan_range": list(config.scan_range),
        "output_dir": config.output_dir,
        "base_seed": config.base_seed,
        "families": [
            {
                "family": spec.family_id,
                "schedule": list(spec.schedule),
                "seed": spec.seed,
                "params": dict(spec.params),
                "weight_rule": spec.weight_rule,
            }
            for spec in config.families
        ],
    }


def config_from_dict(data: Mapping) -> SurveyConfig:
    """Build a validated config from the JSON document format."""
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported config schema {data.get('schema')!r}")
    base_seed = data.get("base_seed")
    specs = []
    for entry in data.get("families", []):
        if "family" not in entry:
            raise ValueError("family entry missing 'family'")
        seed = entry.get("seed")
        if seed is None and base_seed is not None:
            if catalog_entry(entry["family"]).random:
                seed = base_seed
        specs.append(
            make_spec(
                entry["family"],
                schedule=entry.get("schedule"),
                seed=seed,
                params=entry.get("params"),
                weight_rule=entry.get("weight_rule", "unit"),
            )
        )
    kwargs = {}
    for key in ("cutoff", "dense_limit", "solvers", "scan_range", "output_dir"):
        if data.get(key) is not None:
            kwargs[key] = data[key]
    return SurveyConfig(families=tuple(specs), base_seed=base_seed, **kwargs)


def config_hash(config: SurveyConfig) -> str:
    """sha256 over the canonical config document, output_dir excluded.

    The directory does not influence any computed value, so relocating a
    survey keeps its hash."""
    doc = config_to_dict(config)
    doc.pop("output_dir")
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# results

class RecordRow(NamedTuple):
    """One records.csv row."""

    family: str
    n: int
    system_size: int
    matrix_kind: str
    kappa: float
    lambda_min_nz: float
    lambda_max: float
    sparsity: int
    cutoff: float
    seed: Optional[int]


@dataclass(frozen=True)
class ManifestEntry:
    family: str
    n: int
    seed: Optional[int]
    system_size: int
    elapsed_s: float


@dataclass(frozen=True)
class SkipEntry:
    family: str
    n: int
    error: str


@dataclass(frozen=True)
class SurveyManifest:
    """Provenance: every output row traces to exactly one entry here."""

    config_hash: str
    tool_version: str
    created: str
    entries: tuple[ManifestEntry, ...]
    skipped: tuple[SkipEntry, ...]

    def as_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "tool_version": self.tool_version,
            "created": self.created,
            "entries": [dataclasses.asdict(e) for e in self.entries],
            "skipped": [dataclasses.asdict(s) for s in self.skipped],
        }


@dataclass(frozen=True)
class FamilyOutcome:
    """Everything the survey derived for one family spec."""

    key: str
    spec: FamilySpec
    records: tuple[tuple[int, SpectralRecord], ...]
    kappa_fit: Optional[FitResult]
    s_fit: Optional[FitResult]
    envelope_flagged: bool
    verdicts: Mapping[str, AdvantageVerdict]
    crossovers: Mapping[str, Optional[float]]
    errors: tuple[tuple[int, str], ...]
    notes: tuple[str, ...]


@dataclass(frozen=True)
class SurveyResult:
    config: SurveyConfig
    outcomes: tuple[FamilyOutcome, ...]
    manifest: SurveyManifest

    def record_rows(self) -> list[RecordRow]:
        rows = []
        for outcome in self.outcomes:
            spec = outcome.spec
            for n, rec in outcome.records:
                rows.append(
                    RecordRow(
                        family=outcome.key,
                        n=n,
                        system_size=rec.system_size,
                        matrix_kind=rec.matrix_kind,
                        kappa=rec.kappa,
                        lambda_min_nz=rec.lambda_min_nz,
                        lambda_max=rec.lambda_max,
                        sparsity=rec.sparsity,
                        cutoff=rec.cutoff,
                        seed=_instance_seed(spec, n),
                    )
                )
        return rows

    def report_dict(self) -> dict:
        """Fits and verdicts keyed by family; a verdict never appears
        without its records and both fits."""
        families = {}
        for outcome in self.outcomes:
            block: dict = {
                "family": outcome.spec.family_id,
                "matrix_kind": outcome.spec.matrix_kind,
                "weight_rule": outcome.spec.weight_rule,
                "size_growth": str(outcome.spec.size_growth),
                "records": [
                    {
                        "n": n,
                        "system_size": rec.system_size,
                        "kappa": rec.kappa,
                        "lambda_min_nz": rec.lambda_min_nz,
                        "lambda_max": rec.lambda_max,
                        "sparsity": rec.sparsity,
                        "cutoff": rec.cutoff,
                        "seed": _instance_seed(outcome.spec, n),
                    }
                    for n, rec in outcome.records
                ],
                "errors": [{"n": n, "error": msg} for n, msg in outcome.errors],
                "notes": list(outcome.notes),
            }
            if outcome.kappa_fit is not None and outcome.s_fit is not None:
                block["kappa_fit"] = fit_to_dict(outcome.kappa_fit)
                block["s_fit"] = fit_to_dict(outcome.s_fit)
                block["envelope_flagged"] = outcome.envelope_flagged
                if outcome.verdicts:
                    block["verdicts"] = {
                        name: {
                            "category": v.category,
                            "ratio_class": str(v.ratio_class),
                            "futile": v.futile,
                            "crossover_N": outcome.crossovers.get(name),
                        }
                        for name, v in outcome.verdicts.items()
                    }
            families[outcome.key] = block
        return {
            "schema": SCHEMA_VERSION,
            "config_hash": self.manifest.config_hash,
            "solvers": list(self.config.solvers),
            "families": families,
        }


def fit_to_dict(fit: FitResult) -> dict:
    return {
        "model": fit.model,
        "degree": fit.degree,
        "coefficients": list(fit.coefficients),
        "sse": fit.sse,
        "score": fit.score,
        "n_points": fit.n_points,
        "growth": str(fit.growth),
        "kind": fit.kind,
        "max_round_deviation": fit.max_round_deviation,
    }


def fit_from_dict(data: Mapping) -> FitResult:
    """Rebuild a FitResult from its JSON form (growth re-derived)."""
    coeffs = tuple(float(c) for c in data["coefficients"])
    return FitResult(
        model=data["model"],
        degree=int(data["degree"]),
        coefficients=coeffs,
        sse=float(data["sse"]),
        score=float(data["score"]),
        n_points=int(data["n_points"]),
        growth=_growth_of(data["model"], int(data["degree"]), coeffs),
        kind=data["kind"],
        max_round_deviation=data.get("max_round_deviation"),
    )


# ---------------------------------------------------------------------------
# pipeline

def _instance_seed(spec: FamilySpec, n: int) -> Optional[int]:
    if not catalog_entry(spec.family_id).random:
        return None
    return derive_seed(spec.seed, spec.family_id, n)


class _Measured(NamedTuple):
    n: int
    record: Optional[SpectralRecord]
    error: Optional[str]
    warnings: tuple[str, ...]
    elapsed_s: float


def _measure_instance(spec: FamilySpec, n: int, cutoff: float) -> _Measured:
    start = time.perf_counter()
    try:
        instance = generate(spec, n)
        record = measure(system_matrix(instance), spec.matrix_kind, cutoff)
    except Exception as exc:  # per-instance failures are recorded, not fatal
        return _Measured(n, None, f"{type(exc).__name__}: {exc}", (), time.perf_counter() - start)
    return _Measured(n, record, None, instance.warnings, time.perf_counter() - start)


def _fit_family(
    spec: FamilySpec,
    measured: Sequence[tuple[int, SpectralRecord]],
    solvers: Sequence[str],
    scan: Sequence[float],
) -> tuple[Optional[FitResult], Optional[FitResult], bool, dict, dict, list[str]]:
    notes: list[str] = []
    empty: tuple[Optional[FitResult], Optional[FitResult], bool, dict, dict, list[str]]
    empty = (None, None, False, {}, {}, notes)
    if len(measured) < MIN_FIT_POINTS:
        notes.append(f"only {len(measured)} records; fits need {MIN_FIT_POINTS}")
        return empty
    sizes = [float(rec.system_size) for _, rec in measured]
    kappas = [rec.kappa for _, rec in measured]
    sparsities = [float(rec.sparsity) for _, rec in measured]
    flagged = False
    if catalog_entry(spec.family_id).random:
        # random families: fit the upper envelope of the scatter
        k_env = upper_envelope(sizes, kappas)
        s_env = upper_envelope(sizes, sparsities)
        flagged = k_env.flagged or s_env.flagged
        k_xs, k_ys = k_env.xs, k_env.ys
        s_xs, s_ys = s_env.xs, s_env.ys
    else:
        k_xs, k_ys = tuple(sizes), tuple(kappas)
        s_xs, s_ys = tuple(sizes), tuple(sparsities)
    try:
        kappa_fit = fit_series(k_xs, k_ys, "kappa")
        s_fit = fit_series(s_xs, s_ys, "sparsity")
    except ValueError as exc:
        notes.append(f"fit failed: {exc}")
        return empty
    try:
        kappa_n = compose(kappa_fit.growth, spec.size_growth)
        s_n = compose(s_fit.growth, spec.size_growth)
    except CompositionError as exc:
        notes.append(f"composition failed: {exc}")
        return (kappa_fit, s_fit, flagged, {}, {}, notes)
    verdicts = {}
    crossovers = {}
    scan = [x for x in scan if x >= 3.0]  # runtime models need loglog(N) > 0
    # fits extrapolated far past the data range can dip below the physical
    # floor kappa, s >= 1; the scan clamps there
    k_curve = lambda x: max(1.0, kappa_fit.predict(x))  # noqa: E731
    s_curve = lambda x: max(1.0, s_fit.predict(x))  # noqa: E731
    for name in solvers:
        crossovers[name] = crossover(name, k_curve, s_curve, scan)
        verdicts[name] = evaluate_advantage(
            name, spec.size_growth, kappa_n, s_n, crossover_N=crossovers[name]
        )
    return (kappa_fit, s_fit, flagged, verdicts, crossovers, notes)


def run_survey(config: SurveyConfig, max_workers: Optional[int] = None) -> SurveyResult:
    """Measure, fit, and classify every configured family.

    Instances are measured on a bounded worker pool; assembly and all file
    writes happen on the calling thread in canonical (family, n) order, so
    re-running an identical config reproduces records.csv byte for byte.
    config.dense_limit is applied by setting NLSP_DENSE_LIMIT for the
    duration of the run.
    """
    keys = config.family_keys()
    jobs = [
        (idx, spec, n)
        for idx, spec in enumerate(config.families)
        for n in spec.schedule
    ]
    workers = max_workers or min(4, os.cpu_count() or 1)
    saved_limit = os.environ.get("NLSP_DENSE_LIMIT")
    if config.dense_limit is not None:
        os.environ["NLSP_DENSE_LIMIT"] = str(config.dense_limit)
    try:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda job: (job[0], _measure_instance(job[1], job[2], config.cutoff)),
                    jobs,
                )
            )
    finally:
        if config.dense_limit is not None:
            if saved_limit is None:
                os.environ.pop("NLSP_DENSE_LIMIT", None)
            else:
                os.environ["NLSP_DENSE_LIMIT"] = saved_limit

    by_family: dict[int, list[_Measured]] = {i: [] for i in range(len(config.families))}
    for idx, m in results:
        by_family[idx].append(m)

    outcomes = []
    entries: list[ManifestEntry] = []
    skipped: list[SkipEntry] = []
    for idx, spec in enumerate(config.families):
        key = keys[idx]
        notes: list[str] = []
        measured: list[tuple[int, SpectralRecord]] = []
        errors: list[tuple[int, str]] = []
        for m in sorted(by_family[idx], key=lambda m: m.n):
            if m.error is not None:
                errors.append((m.n, m.error))
                skipped.append(SkipEntry(key, m.n, m.error))
                continue
            measured.append((m.n, m.record))
            notes.extend(f"n={m.n}: {w}" for w in m.warnings)
            entries.append(
                ManifestEntry(
                    family=key,
                    n=m.n,
                    seed=_instance_seed(spec, m.n),
                    system_size=m.record.system_size,
                    elapsed_s=round(m.elapsed_s, 6),
                )
            )
        kappa_fit, s_fit, flagged, verdicts, crossovers, fit_notes = _fit_family(
            spec, measured, config.solvers, config.scan_range
        )
        notes.extend(fit_notes)
        outcomes.append(
            FamilyOutcome(
                key=key,
                spec=spec,
                records=tuple(measured),
                kappa_fit=kappa_fit,
                s_fit=s_fit,
                envelope_flagged=flagged,
                verdicts=verdicts,
                crossovers=crossovers,
                errors=tuple(errors),
                notes=tuple(notes),
            )
        )

    manifest = SurveyManifest(
        config_hash=config_hash(config),
        tool_version=__version__,
        created=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        entries=tuple(entries),
        skipped=tuple(skipped),
    )
    result = SurveyResult(config=config, outcomes=tuple(outcomes), manifest=manifest)
    if config.output_dir is not None:
        persist(result, Path(config.output_dir))
    return result


# ---------------------------------------------------------------------------
# persistence

def write_records_csv(path: Union[str, Path], rows: Sequence[RecordRow]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row.family,
                    row.n,
                    row.system_size,
                    row.matrix_kind,
                    repr(row.kappa),
                    repr(row.lambda_min_nz),
                    repr(row.lambda_max),
                    row.sparsity,
                    repr(row.cutoff),
                    "" if row.seed is None else row.seed,
                ]
            )


def read_records_csv(path: Union[str, Path]) -> list[RecordRow]:
    rows = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(f"unexpected records header in {path}")
        for raw in reader:
            rows.append(
                RecordRow(
                    family=raw["family"],
                    n=int(raw["n"]),
                    system_size=int(raw["system_size"]),
                    matrix_kind=raw["matrix_kind"],
                    kappa=float(raw["kappa"]),
                    lambda_min_nz=float(raw["lambda_min_nz"]),
                    lambda_max=float(raw["lambda_max"]),
                    sparsity=int(raw["sparsity"]),
                    cutoff=float(raw["cutoff"]),
                    seed=int(raw["seed"]) if raw["seed"] else None,
                )
            )
    return rows


def persist(result: SurveyResult, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_records_csv(out_dir / "records.csv", result.record_rows())
    with open(out_dir / "report.json", "w") as f:
        json.dump(result.report_dict(), f, indent=2)
        f.write("\n")
    with open(out_dir / "manifest.json", "w") as f:
        json.dump(result.manifest.as_dict(), f, indent=2)
        f.write("\n")
    plots = out_dir / "plots"
    plots.mkdir(exist_ok=True)
    for outcome in result.outcomes:
        _write_series(plots, outcome, result.config.solvers)


def _write_series(plots: Path, outcome: FamilyOutcome, solvers: Sequence[str]) -> None:
    """Plot-ready series: kappa/s vs N, ratio vs N, symbolic ratio vs n."""
    key = outcome.key.replace("/", "_")
    with open(plots / f"{key}_kappa_s.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["N", "kappa", "sparsity"])
        for _, rec in outcome.records:
            writer.writerow([rec.system_size, repr(rec.kappa), rec.sparsity])
    if outcome.kappa_fit is None or outcome.s_fit is None:
        return
    with open(plots / f"{key}_ratio.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["N"] + [f"R_{s}" for s in solvers])
        for _, rec in outcome.records:
            n_size = float(rec.system_size)
            writer.writerow(
                [rec.system_size]
                + [
                    repr(ratio_R(s, n_size, outcome.kappa_fit, outcome.s_fit))
                    for s in solvers
                ]
            )
    if not outcome.verdicts:
        return
    with open(plots / f"{key}_ratio_class.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["n", "reference"] + [f"Rtilde_{s}" for s in solvers])
        for n, _ in outcome.records:
            if n < 3:  # ratio classes evaluate only where loglog(n) > 0
                continue
            writer.writerow(
                [n, n]
                + [
                    repr(outcome.verdicts[s].ratio_class.evaluate(n))
                    for s in solvers
                ]
            )


# ---------------------------------------------------------------------------
# seed sensitivity

@dataclass(frozen=True)
class SeedSensitivityReport:
    """Per-seed categories and a per-family stability flag."""

    seeds: tuple[int, ...]
    solvers: tuple[str, ...]
    families: Mapping[str, Mapping[int, Mapping[str, Optional[str]]]]

    def stable(self, key: str) -> bool:
        """True when every solver's category agrees across all seeds."""
        per_seed = self.families[key]
        reference = per_seed[self.seeds[0]]
        return all(per_seed[s] == reference for s in self.seeds[1:]) and all(
            c is not None for c in reference.values()
        )

    def as_dict(self) -> dict:
        return {
            "seeds": list(self.seeds),
            "solvers": list(self.solvers),
            "families": {
                key: {
                    "per_seed": {str(s): dict(per_seed[s]) for s in self.seeds},
                    "stable": self.stable(key),
                }
                for key, per_seed in self.families.items()
            },
        }


def seed_sensitivity(config: SurveyConfig, seeds: Sequence[int]) -> SeedSensitivityReport:
    """Re-run every family under each seed and compare verdict categories.

    Only random families qualify; the whole spec list is re-seeded per run.
    Families whose fits fail under some seed carry None categories there and
    are reported unstable.
    """
    seeds = tuple(int(s) for s in seeds)
    if len(seeds) < 2:
        raise ValueError("seed sensitivity needs at least 2 seeds")
    if len(set(seeds)) != len(seeds):
        raise ValueError("seeds must be distinct")
    for spec in config.families:
        if not catalog_entry(spec.family_id).random:
            raise ValueError(f"{spec.family_id} is deterministic; seeds have no effect")
    keys = config.family_keys()
    table: dict[str, dict[int, dict[str, Optional[str]]]] = {k: {} for k in keys}
    for seed in seeds:
        for key, spec in zip(keys, config.families):
            reseeded = dataclasses.replace(spec, seed=seed)
            measured = []
            errors = 0
            for n in reseeded.schedule:
                m = _measure_instance(reseeded, n, config.cutoff)
                if m.record is None:
                    errors += 1
                    continue
                measured.append((m.n, m.record))
            _, _, _, verdicts, _, _ = _fit_family(
                reseeded, measured, config.solvers, config.scan_range
            )
            table[key][seed] = {
                name: (verdicts[name].category if name in verdicts else None)
                for name in config.solvers
            }
    report = SeedSensitivityReport(seeds=seeds, solvers=config.solvers, families=table)
    if config.output_dir is not None:
        with open(Path(config.output_dir) / "seed_sensitivity.json", "w") as f:
            json.dump(report.as_dict(), f, indent=2)
            f.write("\n")
    return report
