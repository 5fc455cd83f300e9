from replay.replay_manager import SCAN_COLUMNS, ReportStore, compute_sha256, report_name, scan_csv

__all__ = ["SCAN_COLUMNS", "ReportStore", "compute_sha256", "report_name", "scan_csv"]
