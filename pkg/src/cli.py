"""CLI for Frobenius charpolys, Sato-Tate and Lang-Trotter experiments, and the Carlitz and measure oracles."""

import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
import structlog

from .algebra.base_ring import BasePoly, irreducible_monics
from .analysis import measure
from .analysis.lang_trotter import lang_trotter_counts
from .analysis.sato_tate import sato_tate_histogram
from .common.errors import InvariantViolation, TowerCertificationError
from .common.schema import (
    ExperimentConfig,
    FrobeniusIdentityModel,
    ModuleDescriptor,
    RunManifest,
    TowerLevelModel,
)
from .common.utils import ConfigManager, ManifestWriter, Settings, TimestampManager, configure_logging
from .drinfeld.carlitz import CarlitzPointCheck, artin_schreier_tower, carlitz_check
from .drinfeld.conjugation import conjugate_to_constants, frobenius_in_constants
from .drinfeld.frobenius import frob_charpoly
from .drinfeld.module import from_descriptor, reduce_at
from .drinfeld.torsion import lambda_adic_oracle
from .pipeline.experiment import ExperimentRunner
from .pipeline.report import (
    dump_json,
    emit_report,
    lang_trotter_frame,
    models_payload,
    read_json,
    write_csv,
    write_json,
    write_points_csv,
)
from .validation.quality_gates import InvariantGates, enforce, gate_summary

logger = structlog.get_logger(__name__)


class ExperimentGroup(click.Group):
    """Usage errors exit with status 1; status 2 means an invariant was violated."""

    def make_context(
        self, info_name: Optional[str], args: List[str], parent: Any = None, **extra: Any
    ) -> click.Context:
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = 1
            raise

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = 1
            raise


def parse_poly(text: str, q: int) -> BasePoly:
    """Ascending coefficients separated by spaces or commas, e.g. '1 1 1' for t^2 + t + 1."""
    parts = [p for p in text.replace(",", " ").split() if p]
    try:
        labels = [int(p) for p in parts]
    except ValueError as e:
        raise click.BadParameter(f"{text!r} is not a list of coefficients") from e
    if any(not 0 <= c < q for c in labels):
        raise click.BadParameter(f"coefficients of {text!r} must lie in [0, {q})")
    return BasePoly(q, tuple(labels))


def load_module_descriptor(path: str) -> ModuleDescriptor:
    return ModuleDescriptor.model_validate(read_json(path))


def _emit(payload: Any, out: Optional[str]) -> None:
    if out:
        write_json(payload, out)
    else:
        click.echo(dump_json(payload))


def _fail(command: str, e: Exception, code: int) -> None:
    click.echo(f"Error: {str(e)}", err=True)
    logger.error(f"{command} command failed", error=str(e))
    sys.exit(code)


def _run(command: str, body: Callable[[], None]) -> None:
    """Run a command body and map failures to exit codes."""
    try:
        body()
    except (InvariantViolation, TowerCertificationError) as e:
        _fail(command, e, 2)
    except click.ClickException:
        raise
    except Exception as e:
        _fail(command, e, 1)


def _write_manifest(
    ctx: click.Context,
    command: str,
    started: Any,
    parameters: Dict[str, Any],
    outputs: List[str],
    gates: Optional[Dict[str, Any]] = None,
) -> None:
    manifest = RunManifest(
        run_id=TimestampManager.generate_run_id(),
        command=command,
        started=started,
        finished=TimestampManager.get_current_timestamp(),
        parameters=parameters,
        outputs=outputs,
        gates=gate_summary(gates) if gates else {},
    )
    ManifestWriter(ctx.obj["output_dir"]).write_run_manifest(manifest)


@click.group(cls=ExperimentGroup)
@click.option("--config", "-c", default="config.yaml", help="Configuration file path")
@click.option("--output-dir", "-o", default=None, help="Directory for run manifests")
@click.option("--log-level", default=None, help="Override the configured log level")
@click.pass_context
def cli(ctx: click.Context, config: str, output_dir: Optional[str], log_level: Optional[str]) -> None:
    """Drinfeld module Sato-Tate experiments."""
    ctx.ensure_object(dict)
    try:
        settings = ConfigManager.load_settings(Path(config))
    except Exception as e:
        _fail("cli", e, 1)
    configure_logging(log_level or settings.logging.level, settings.logging.format)
    ctx.obj["config_path"] = Path(config)
    ctx.obj["settings"] = settings
    ctx.obj["output_dir"] = Path(output_dir or settings.experiments.output_dir)


@cli.command()
@click.option("--module", "module_path", required=True, help="Module descriptor JSON")
@click.option("--prime", default=None, help="Prime p as ascending coefficients (rational modules)")
@click.option("--oracle", "oracle_primes", multiple=True, help="Auxiliary prime for the torsion cross-check")
@click.option("--out", default=None, help="Output JSON (stdout when omitted)")
@click.pass_context
def charpoly(
    ctx: click.Context, module_path: str, prime: Optional[str], oracle_primes: tuple, out: Optional[str]
) -> None:
    """Characteristic polynomial of Frobenius at one point."""

    def body() -> None:
        settings: Settings = ctx.obj["settings"]
        module = from_descriptor(load_module_descriptor(module_path))
        if module.is_finite:
            finite = module
        else:
            if prime is None:
                raise click.UsageError("--prime is required for a module over F_q(t)")
            finite = reduce_at(module, parse_poly(prime, module.q))
        record = frob_charpoly(finite)
        payload: Dict[str, Any] = {"record": record.to_model().model_dump()}
        oracle_rows = []
        for text in oracle_primes:
            p_aux = parse_poly(text, module.q)
            result = lambda_adic_oracle(finite, p_aux, degree_cap=settings.arithmetic.oracle_degree_cap)
            oracle_rows.append(
                {
                    "p_aux": p_aux.to_list(),
                    "splitting_degree": result.splitting_degree,
                    "agrees": result.agrees_with(record),
                }
            )
        if oracle_rows:
            payload["oracle"] = oracle_rows
        _emit(payload, out)
        enforce(InvariantGates().run_all_checks(records=[record]))
        if not all(row["agrees"] for row in oracle_rows):
            raise InvariantViolation("torsion oracle disagrees with the charpoly")

    _run("charpoly", body)


@cli.command("sato-tate")
@click.option("--module", "module_path", required=True, help="Module descriptor JSON")
@click.option("--dmin", default=1, type=int, help="Smallest degree")
@click.option("--dmax", required=True, type=int, help="Largest degree")
@click.option("--prec", default=None, type=int, help="pi-adic digits per bucket")
@click.option("--out", default=None, help="Report path (stdout when omitted)")
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]), help="Report format")
@click.option("--points-out", default=None, help="Per-point CSV of traces")
@click.option("--workers", default=None, type=int, help="Worker processes")
@click.pass_context
def sato_tate(
    ctx: click.Context,
    module_path: str,
    dmin: int,
    dmax: int,
    prec: Optional[int],
    out: Optional[str],
    fmt: str,
    points_out: Optional[str],
    workers: Optional[int],
) -> None:
    """Histogram of normalized traces against the limit law, per degree."""

    def body() -> None:
        settings: Settings = ctx.obj["settings"]
        started = TimestampManager.get_current_timestamp()
        config = ExperimentConfig(
            module=load_module_descriptor(module_path),
            d_min=dmin,
            d_max=dmax,
            prec_j=prec or settings.experiments.default_prec_j,
            out=out,
            points_out=points_out,
            workers=workers or settings.experiments.workers,
        )
        runner = ExperimentRunner(config.workers)
        reports = sato_tate_histogram(config, collector=runner.collect)
        outputs = []
        if out:
            outputs.append(str(emit_report(reports, out, fmt)))
        else:
            click.echo(dump_json({"reports": models_payload(r.to_model() for r in reports)}))
        if points_out:
            points = [pt for r in reports for pt in r.points]
            outputs.append(str(write_points_csv(points, points_out)))
        gates = InvariantGates().run_all_checks(reports=reports, tolerances=settings.experiments.tv_tolerances)
        _write_manifest(ctx, "sato-tate", started, config.model_dump(mode="json"), outputs, gates)
        enforce(gates)

    _run("sato-tate", body)


@cli.command("lang-trotter")
@click.option("--module", "module_path", required=True, help="Module descriptor JSON")
@click.option("--trace", "trace_text", required=True, help="Fixed trace a as ascending coefficients ('' for 0)")
@click.option("--dmin", default=1, type=int, help="Smallest degree")
@click.option("--dmax", required=True, type=int, help="Largest degree")
@click.option("--out", default=None, help="Output path (stdout when omitted)")
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]), help="Output format")
@click.option("--workers", default=None, type=int, help="Worker processes")
@click.pass_context
def lang_trotter(
    ctx: click.Context,
    module_path: str,
    trace_text: str,
    dmin: int,
    dmax: int,
    out: Optional[str],
    fmt: str,
    workers: Optional[int],
) -> None:
    """Exact counts of good points with a fixed trace, with bound ratios."""

    def body() -> None:
        settings: Settings = ctx.obj["settings"]
        started = TimestampManager.get_current_timestamp()
        descriptor = load_module_descriptor(module_path)
        module = from_descriptor(descriptor)
        a = parse_poly(trace_text, module.q)
        runner = ExperimentRunner(workers or settings.experiments.workers)
        rows = lang_trotter_counts(module, a, dmax, d_min=dmin, collector=runner.collect)
        outputs = []
        if out and fmt == "csv":
            outputs.append(str(write_csv(lang_trotter_frame(rows), out)))
        else:
            _emit({"rows": models_payload(r.to_model() for r in rows)}, out)
            if out:
                outputs.append(out)
        gates = InvariantGates().run_all_checks(rows=rows)
        parameters = {"module": descriptor.model_dump(), "trace": a.to_list(), "dmin": dmin, "dmax": dmax}
        _write_manifest(ctx, "lang-trotter", started, parameters, outputs, gates)
        enforce(gates)

    _run("lang-trotter", body)


def _identity_model(check: CarlitzPointCheck) -> FrobeniusIdentityModel:
    return FrobeniusIdentityModel(
        prime=check.prime.to_list(),
        identity_holds=check.identity_holds,
        charpoly_is_t_minus_p=check.charpoly_is_t_minus_p,
        epsilon=check.epsilon,
    )


@cli.command("carlitz-check")
@click.option("--q", "q", required=True, type=int, help="Size of the constant field")
@click.option("--dmax", required=True, type=int, help="Largest prime degree")
@click.option("--out", default=None, help="Output JSON (stdout when omitted)")
@click.option("--workers", default=None, type=int, help="Worker processes")
@click.pass_context
def carlitz_check_command(ctx: click.Context, q: int, dmax: int, out: Optional[str], workers: Optional[int]) -> None:
    """Frobenius identity phi_p = tau^deg(p) mod p and P(T) = T - p at every prime."""

    def body() -> None:
        settings: Settings = ctx.obj["settings"]
        started = TimestampManager.get_current_timestamp()
        primes = [p for d in range(1, dmax + 1) for p in irreducible_monics(q, d)]
        runner = ExperimentRunner(workers or settings.experiments.workers)
        checks = runner.map_ordered(carlitz_check, primes)
        rows = [_identity_model(c) for c in checks]
        _emit({"q": q, "points": models_payload(rows)}, out)
        failures = [str(c.prime) for c in checks if not (c.identity_holds and c.charpoly_is_t_minus_p)]
        gates = {"frobenius_identity": {"status": "FAIL" if failures else "PASS", "failures": failures}}
        parameters = {"q": q, "dmax": dmax}
        _write_manifest(ctx, "carlitz-check", started, parameters, [out] if out else [], gates)
        if failures:
            raise InvariantViolation(f"Carlitz identity fails at {', '.join(failures)}")

    _run("carlitz-check", body)


@cli.command()
@click.option("--q", "q", required=True, type=int, help="Prime size of the constant field")
@click.option("--levels", required=True, type=int, help="Highest level j")
@click.option("--out", default=None, help="Output JSON (stdout when omitted)")
@click.pass_context
def tower(ctx: click.Context, q: int, levels: int, out: Optional[str]) -> None:
    """Certify [F(a_j):F] = q^j for the Artin-Schreier tower of the Carlitz module."""

    def body() -> None:
        settings: Settings = ctx.obj["settings"]
        started = TimestampManager.get_current_timestamp()
        result = artin_schreier_tower(
            q,
            levels,
            max_prime_degree=settings.tower.max_prime_degree,
            max_extension_degree=settings.tower.max_extension_degree,
        )
        rows = [
            TowerLevelModel(
                level=level.j,
                degree=level.degree_over_F,
                certified=level.certified,
                certificate_prime=level.certificate_prime.to_list() if level.certificate_prime else None,
                min_poly_chain=[str(step) for step in level.min_poly_chain],
                residue_chain=[list(x.coeffs) for x in level.residue_chain],
            )
            for level in result
        ]
        _emit({"q": q, "levels": models_payload(rows)}, out)
        _write_manifest(ctx, "tower", started, {"q": q, "levels": levels}, [out] if out else [])

    _run("tower", body)


@cli.command()
@click.option("--module", "module_path", required=True, help="Module descriptor JSON over a finite field")
@click.option("--y", "y_text", default="0 1", show_default=True, help="Nonconstant y as ascending coefficients")
@click.option("--prec", default=None, type=int, help="Number of tau^-1 coefficients")
@click.option("--out", default=None, help="Output JSON (stdout when omitted)")
@click.pass_context
def conjugate(ctx: click.Context, module_path: str, y_text: str, prec: Optional[int], out: Optional[str]) -> None:
    """u-series with phi_y u = u tau^h, and the Frobenius of L conjugated into the constants."""

    def body() -> None:
        settings: Settings = ctx.obj["settings"]
        started = TimestampManager.get_current_timestamp()
        descriptor = load_module_descriptor(module_path)
        module = from_descriptor(descriptor)
        y = parse_poly(y_text, module.q)
        precision = prec or settings.arithmetic.default_series_precision
        cap = settings.arithmetic.u_series_degree_cap
        u = conjugate_to_constants(module, y, precision, degree_cap=cap)
        frob = frobenius_in_constants(module, y, precision, degree_cap=cap)
        payload = {
            "y": y.to_list(),
            "h": frob.h,
            "m": frob.m,
            "precision": precision,
            "field_degree": u.ctx.d,
            "modulus": list(u.ctx.modulus),
            "u": [list(c.coeffs) for c in u.coeffs],
            "frobenius_lead": frob.v.lead,
            "frobenius_in_constants": frob.in_constants,
        }
        _emit(payload, out)
        parameters = {"module": descriptor.model_dump(), "y": y.to_list(), "prec": precision}
        _write_manifest(ctx, "conjugate", started, parameters, [out] if out else [])
        if not frob.in_constants:
            raise InvariantViolation("u^-1 tau^m u has coefficients outside F_{q^h}")

    _run("conjugate", body)


@cli.command("measure-oracle")
@click.option("--n", "n", required=True, type=int, help="Degree of the division algebra")
@click.option("--q", "q", required=True, type=int, help="Size of the constant field")
@click.option("--j", "j", required=True, type=int, help="pi-adic precision of the quotient")
@click.option("--out", default=None, help="Output JSON (stdout when omitted)")
@click.pass_context
def measure_oracle(ctx: click.Context, n: int, q: int, j: int, out: Optional[str]) -> None:
    """Exact coset counts of trace conditions next to the theoretical masses."""

    def body() -> None:
        settings: Settings = ctx.obj["settings"]
        started = TimestampManager.get_current_timestamp()
        cap = settings.arithmetic.quotient_cap
        partitions = {
            scope: measure.coset_partition(n, q, j, scope=scope, cap=cap)
            for scope in (measure.CountScope.W_UNITS, measure.CountScope.W, measure.CountScope.D_NONPI)
        }
        lemma = measure.vanishing_trace_proportion(n, q, j, cap=cap)
        discrepancy = measure.nu_normalization_discrepancy(n, q, j)

        def masses(d_mod_n: int) -> Dict[str, List[int]]:
            law = measure.theoretical_measure(n, q, j, d_mod_n)
            return {measure.residue_key(k): [v.numerator, v.denominator] for k, v in law.items()}

        payload = {
            "n": n,
            "q": q,
            "j": j,
            "coset_counts": {
                scope.value: models_payload(c.to_model() for c in partition.values())
                for scope, partition in partitions.items()
            },
            "vanishing_trace": {
                **lemma.to_model().model_dump(),
                "bound": [measure.LEMMA_CONSTANT, q**j],
                "within_bound": lemma.ratio <= measure.LEMMA_CONSTANT * Fraction(1, q**j),
            },
            "theoretical": {"d_not_divisible_by_n": masses(1) if n > 1 else None, "d_divisible_by_n": masses(0)},
            "normalization": {
                "normalized_total": str(discrepancy.normalized_total),
                "literal_total": str(discrepancy.literal_total),
                "flagged": discrepancy.literal_total != 1,
                "note": discrepancy.note,
            },
        }
        _emit(payload, out)
        gates = InvariantGates().run_all_checks(partitions=list(partitions.values()), lemmas=[lemma])
        _write_manifest(ctx, "measure-oracle", started, {"n": n, "q": q, "j": j}, [out] if out else [], gates)
        enforce(gates)

    _run("measure-oracle", body)


def main() -> None:
    """Main entry point for the CLI."""
    try:
        cli(obj={})
    except KeyboardInterrupt:
        click.echo("\nOperation cancelled by user", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
