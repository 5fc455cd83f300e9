"""
Report store for persisting, reloading and fingerprinting certification runs.
"""
import csv
import hashlib
import io
import logging
from pathlib import Path
from typing import Iterable, Optional

from rich.console import Console

from core.log import get_logger
from core.models import CertificationSummary, ScanRow

SCAN_COLUMNS = ("m", "mu_min_lo", "mu_min_hi", "budget", "fem_radius", "status")


def report_name(n: int, m: int) -> str:
    return f"ngon-n{n}-m{m}.json"


def compute_sha256(path: "str | Path", chunk_size: int = 8192) -> str:
    """
    Fingerprint a stored report.

    Args:
        path (str | Path): Report or CSV file.
        chunk_size (int): Bytes read per update.

    Returns:
        str: Hex SHA-256 digest of the file contents.
    """
    digest = hashlib.sha256()
    with Path(path).open("rb") as f:
        while chunk := f.read(chunk_size):
            digest.update(chunk)
    return digest.hexdigest()


def scan_csv(rows: Iterable[ScanRow]) -> str:
    """CSV text with columns m, mu_min_lo, mu_min_hi, budget, fem_radius, status; floats in repr form."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: repr(value) if isinstance(value, float) else value for key, value in row.model_dump().items()})
    return buffer.getvalue()


class ReportStore:
    """
    Directory of certification summaries keyed by (n, m), plus scan CSVs.
    """

    def __init__(self, root: "str | Path", log_level: int = logging.INFO, console: Optional[Console] = None) -> None:
        self.root = Path(root)
        self.console = console or Console(stderr=True)
        self.logger = get_logger("ReportStore", log_level)

    def path_for(self, n: int, m: int) -> Path:
        return self.root / report_name(n, m)

    def save(self, summary: CertificationSummary, path: Optional[Path] = None) -> Path:
        """Write the summary as indented JSON with the versioned ``schema`` key."""
        path = Path(path) if path is not None else self.path_for(summary.n, summary.m)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(summary.model_dump_json(by_alias=True, indent=2) + "\n")
        self.logger.info(f"Saved report n={summary.n} m={summary.m} to {path}")
        return path

    def load(self, n: int, m: int) -> Optional[CertificationSummary]:
        """The stored summary for (n, m), or None if the run was never persisted."""
        path = self.path_for(n, m)
        if not path.exists():
            self.logger.warning(f"No stored report for n={n} m={m} under {self.root}")
            return None
        return self.load_file(path)

    @staticmethod
    def load_file(path: "str | Path") -> CertificationSummary:
        return CertificationSummary.model_validate_json(Path(path).read_text())

    def list_runs(self) -> list[tuple[int, int]]:
        """(n, m) pairs of every stored report, sorted."""
        runs = []
        for path in self.root.glob("ngon-n*-m*.json"):
            n_part, m_part = path.stem.removeprefix("ngon-").split("-")
            try:
                runs.append((int(n_part[1:]), int(m_part[1:])))
            except ValueError:
                self.logger.debug(f"Skipping unrecognized file {path.name}")
        return sorted(runs)

    def fingerprint(self, n: int, m: int) -> Optional[str]:
        path = self.path_for(n, m)
        return compute_sha256(path) if path.exists() else None

    def write_scan(self, n: int, rows: Iterable[ScanRow], path: Optional[Path] = None) -> Path:
        """CSV with columns m, mu_min_lo, mu_min_hi, budget, fem_radius, status."""
        path = Path(path) if path is not None else self.root / f"ngon-n{n}-scan.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(scan_csv(rows))
        self.logger.info(f"Wrote scan for n={n} to {path}")
        return path
