"""
Command-line driver: ``certify``, ``eigs``, ``scan``, ``morley`` and ``report``.

Exit codes: 0 certified, 1 soundly not certified, 2 configuration or runtime error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from core import apriori
from core.certify import CertificationReport, PolygonCertifier, eigen_threshold, scan
from core.constants import sincos_pi
from core.errors import CertificationError, InconsistencyError, SolverError
from core.interval import Interval, format_endpoint
from core.log import get_logger, set_level
from core.models import (
    CertificationSummary,
    Command,
    EigenSummary,
    IntervalRecord,
    MorleyResult,
    OutputFormat,
    RunConfig,
    ScanRow,
    Verdict,
)
from core.morley import MorleyCertifier
from replay import SCAN_COLUMNS, ReportStore, scan_csv

EXIT_CERTIFIED, EXIT_NOT_CERTIFIED, EXIT_ERROR = 0, 1, 2

logger = get_logger("cli")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ngon-certify",
        description="Interval certification that the regular n-gon locally minimizes the first Dirichlet eigenvalue at fixed area.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Debug logging.")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only warnings and errors.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, m_default: int) -> None:
        p.add_argument("--n", type=int, default=None, help="Number of polygon vertices (5..10).")
        p.add_argument("--m", type=int, default=m_default, help=f"Subdivisions per ray (default: {m_default}).")
        p.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
        p.add_argument("--out", type=Path, default=None, dest="output_path", help="Write the output to this file.")

    def pipeline(p: argparse.ArgumentParser) -> None:
        p.add_argument("--gamma0", type=float, default=4.0, help="Border scaling of the saddle systems (default: 4.0).")
        p.add_argument("--threads", type=int, default=1, help="Worker threads (default: 1).")
        p.add_argument("--krawczyk-max-dim", type=int, default=2500, dest="krawczyk_max_dim",
                       help="Largest slice pencil verified with the Krawczyk inclusion (default: 2500).")

    p = sub.add_parser("certify", help="Run the whole pipeline for one (n, m).")
    common(p, 250)
    pipeline(p)
    p.add_argument("--store", type=Path, default=None, help="Also persist the JSON report in this directory.")

    p = sub.add_parser("eigs", help="Certify λ1,h and λ2,h and print their a-priori enclosures.")
    common(p, 250)
    pipeline(p)

    p = sub.add_parser("scan", help="Run the pipeline over a range of m and write a CSV.")
    common(p, 250)
    pipeline(p)
    p.add_argument("--m-range", type=str, default=None, dest="m_range", help="Range like 200..600 or 200..600:50.")
    p.add_argument("--plot", type=Path, default=None, help="Optional SVG of the smallest nonzero μ against m.")

    p = sub.add_parser("morley", help="Certify an upper bound of the P1 interpolation constant.")
    common(p, 32)
    p.add_argument("--a", type=float, default=None, help="x coordinate of the third vertex.")
    p.add_argument("--b", type=float, default=None, help="y coordinate of the third vertex.")
    p.add_argument("--eps", type=float, default=1e-6, help="Margin below the floating eigenvalue (default: 1e-6).")

    p = sub.add_parser("report", help="Print a stored report.")
    common(p, 250)
    p.add_argument("--store", type=Path, default=None, help="Directory of stored reports.")
    p.add_argument("--budget", action="store_true", help="Dump the a-priori error budget.")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    fields = {key: value for key, value in vars(args).items() if key not in ("quiet",) and value is not None}
    return RunConfig(**fields)


def _iv(record: IntervalRecord) -> Interval:
    return Interval(record.lo, record.hi)


def _emit(text: str, cfg: RunConfig, console: Console) -> None:
    if cfg.output_path is not None:
        cfg.output_path.parent.mkdir(parents=True, exist_ok=True)
        cfg.output_path.write_text(text if text.endswith("\n") else text + "\n")
        logger.info(f"Wrote {cfg.output_path}")
    else:
        console.print(text, markup=False, highlight=False, soft_wrap=True)


def render_summary(summary: CertificationSummary, console: Console, budget: bool = False) -> None:
    """Text layout: count line, verdict line, DoF line, then one row per Hessian eigenvalue."""
    console.print(f"Number of positive eigenvalues = {summary.positive_count}")
    if summary.verdict is Verdict.CERTIFIED:
        console.print(f"Local minimality of the regular {summary.n}-gon certified ({summary.required_positive} positive required)")
    else:
        console.print(f"Local minimality NOT certified ({summary.required_positive} positive required)")
    console.print(f"DoF = {summary.dof}")
    console.print(f"lambda1,h in {_iv(summary.lam1.discrete)}   lambda2,h in {_iv(summary.lam2.discrete)}   j21^2 in {_iv(summary.threshold)}")
    table = Table(title=f"Hessian eigenvalues, n={summary.n} m={summary.m}")
    for column in ("k", "j", "mu_h", "error", "final"):
        table.add_column(column, justify="right")
    for row in summary.rows:
        table.add_row(str(row.k), str(row.index), str(_iv(row.mu)), format_endpoint(row.error, 4, upward=True), str(_iv(row.final)))
    console.print(table)
    if budget:
        render_budget(summary, console)


def render_budget(summary: CertificationSummary, console: Console) -> None:
    table = Table(title="A-priori error budget")
    table.add_column("term")
    table.add_column("enclosure", justify="right")
    for key, record in summary.budget.entries.items():
        table.add_row(key, str(_iv(record)))
    console.print(table)


def _certifier(cfg: RunConfig, m: Optional[int] = None) -> PolygonCertifier:
    return PolygonCertifier(
        cfg.n,
        m or cfg.m,
        gamma0=cfg.gamma0,
        krawczyk_max_dim=cfg.krawczyk_max_dim,
        threads=cfg.threads,
        log_level=logging.getLogger("ngon").level,
    )


def cmd_certify(cfg: RunConfig, console: Console) -> int:
    """Full pipeline for one (n, m); exit 0 if certified, 1 otherwise."""
    report: CertificationReport = _certifier(cfg).run()
    summary = report.to_summary()
    if cfg.store is not None:
        ReportStore(cfg.store).save(summary)
    if cfg.format is OutputFormat.JSON:
        _emit(summary.model_dump_json(by_alias=True, indent=2), cfg, console)
    elif cfg.output_path is not None:
        with cfg.output_path.open("w") as f:
            render_summary(summary, Console(file=f, width=160))
    else:
        render_summary(summary, console)
    return EXIT_CERTIFIED if report.verdict is Verdict.CERTIFIED else EXIT_NOT_CERTIFIED


def cmd_eigs(cfg: RunConfig, console: Console) -> int:
    """Certified λ1,h, λ2,h with their continuous enclosures and the j21² threshold."""
    certifier = _certifier(cfg)
    lam1, lam2 = certifier.certify_eigs()
    summaries = {}
    for name, enc in (("lam1", lam1), ("lam2", lam2)):
        err, continuous = apriori.eig_error(enc.value, certifier.C1, certifier.mesh.h)
        summaries[name] = EigenSummary.from_enclosure(enc, err, continuous)
    threshold = eigen_threshold()
    if cfg.format is OutputFormat.JSON:
        payload = {
            "n": cfg.n,
            "m": cfg.m,
            "dof": certifier.mesh.node_count,
            **{name: s.model_dump() for name, s in summaries.items()},
            "threshold": IntervalRecord.from_interval(threshold).model_dump(),
        }
        _emit(json.dumps(payload, indent=2), cfg, console)
        return EXIT_CERTIFIED
    lines = [f"n = {cfg.n}, m = {cfg.m}, DoF = {certifier.mesh.node_count}"]
    for name, s in summaries.items():
        lines.append(
            f"{name}: discrete {_iv(s.discrete)} ({s.method}), error {format_endpoint(s.error, 4, upward=True)}, continuous {_iv(s.continuous)}"
        )
    lines.append(f"j21^2 threshold {threshold}")
    _emit("\n".join(lines), cfg, console)
    return EXIT_CERTIFIED


def plot_scan(n: int, rows: Sequence[ScanRow], path: Path) -> Path:
    """SVG of the certified smallest nonzero μ intervals and the budget against m."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    done = [r for r in rows if not r.status.startswith("failed")]
    fig, ax = plt.subplots(figsize=(7, 4))
    if done:
        ms = [r.m for r in done]
        ax.vlines(ms, [r.mu_min_lo for r in done], [r.mu_min_hi for r in done], color="tab:blue", label="smallest nonzero μ")
        ax.plot(ms, [r.budget for r in done], "o--", color="tab:red", label="a-priori budget")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("m")
    ax.set_title(f"n = {n}")
    ax.legend()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def cmd_scan(cfg: RunConfig, console: Console) -> int:
    """CSV over m; exit 0 if at least one m certified."""
    rows = scan(
        cfg.n,
        cfg.m_values,
        threads=cfg.threads,
        gamma0=cfg.gamma0,
        krawczyk_max_dim=cfg.krawczyk_max_dim,
        log_level=logging.getLogger("ngon").level,
    )
    if cfg.output_path is not None:
        ReportStore(cfg.output_path.parent).write_scan(cfg.n, rows, cfg.output_path)
    elif cfg.format is OutputFormat.JSON:
        _emit(json.dumps([r.model_dump() for r in rows], indent=2), cfg, console)
    elif cfg.format is OutputFormat.CSV:
        _emit(scan_csv(rows), cfg, console)
    else:
        table = Table(title=f"Scan n={cfg.n}")
        for column in SCAN_COLUMNS:
            table.add_column(column, justify="right")
        for r in rows:
            table.add_row(str(r.m), f"{r.mu_min_lo:.6g}", f"{r.mu_min_hi:.6g}", f"{r.budget:.4g}", f"{r.fem_radius:.4g}", r.status)
        console.print(table)
    if cfg.plot is not None:
        plot_scan(cfg.n, rows, cfg.plot)
    return EXIT_CERTIFIED if any(r.status == Verdict.CERTIFIED.value for r in rows) else EXIT_NOT_CERTIFIED


def cmd_morley(cfg: RunConfig, console: Console) -> int:
    """Upper bound of C(T) for the triangle (0,0), (1,0), (a,b)."""
    certifier = MorleyCertifier(m=cfg.m, eps=cfg.eps, log_level=logging.getLogger("ngon").level)
    if cfg.a is not None and cfg.b is not None:
        a, b = cfg.a, cfg.b
        run = lambda: certifier.certify(a, b)  # noqa: E731
    else:
        sin_t, cos_t = sincos_pi(2, cfg.n)
        a, b = cos_t.mid, sin_t.mid
        run = lambda: certifier.certify_polygon(cfg.n)  # noqa: E731
    try:
        bound = run()
        result = MorleyResult(a=a, b=b, m=cfg.m, eps=cfg.eps, certified=True, bound=IntervalRecord.from_interval(bound))
    except CertificationError as exc:
        result = MorleyResult(a=a, b=b, m=cfg.m, eps=cfg.eps, certified=False, message=str(exc))
    if cfg.format is OutputFormat.JSON:
        _emit(result.model_dump_json(indent=2), cfg, console)
    elif result.certified:
        _emit(f"C(T) <= {format_endpoint(result.bound.hi, 6, upward=True)} for (a, b) = ({a:.6f}, {b:.6f}), m = {cfg.m}", cfg, console)
    else:
        _emit(f"No bound certified for (a, b) = ({a:.6f}, {b:.6f}): {result.message}", cfg, console)
    return EXIT_CERTIFIED if result.certified else EXIT_NOT_CERTIFIED


def cmd_report(cfg: RunConfig, console: Console) -> int:
    """Print a stored report; exit mirrors its verdict."""
    store = ReportStore(cfg.store)
    summary = store.load(cfg.n, cfg.m)
    if summary is None:
        console.print(f"No stored report for n={cfg.n} m={cfg.m}; stored runs: {store.list_runs()}")
        return EXIT_ERROR
    if cfg.format is OutputFormat.JSON:
        data = summary.budget.model_dump() if cfg.budget else summary.model_dump(by_alias=True)
        _emit(json.dumps(data, indent=2), cfg, console)
    elif cfg.budget:
        render_budget(summary, console)
    else:
        render_summary(summary, console)
    console.print(f"sha256 {store.fingerprint(cfg.n, cfg.m)}", highlight=False)
    return EXIT_CERTIFIED if summary.verdict is Verdict.CERTIFIED else EXIT_NOT_CERTIFIED


COMMANDS: dict[Command, Callable[[RunConfig, Console], int]] = {
    Command.CERTIFY: cmd_certify,
    Command.EIGS: cmd_eigs,
    Command.SCAN: cmd_scan,
    Command.MORLEY: cmd_morley,
    Command.REPORT: cmd_report,
}


def main(argv: Optional[Sequence[str]] = None, console: Optional[Console] = None) -> int:
    console = console or Console()
    args = build_parser().parse_args(argv)
    set_level(logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO)
    try:
        cfg = make_config(args)
    except ValidationError as exc:
        logger.error(f"Invalid configuration: {exc}")
        return EXIT_ERROR
    try:
        return COMMANDS[cfg.command](cfg, console)
    except InconsistencyError as exc:
        logger.error(f"Inconsistent enclosures at stage {exc.stage}: {exc}")
        return EXIT_ERROR
    except CertificationError as exc:
        logger.warning(f"Not certified at stage {exc.stage}: {exc}")
        console.print(f"Local minimality NOT certified: {exc}")
        return EXIT_NOT_CERTIFIED
    except (ValueError, SolverError, OSError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
