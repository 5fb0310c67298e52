"""Measured utilization, per-packet throughput, queue statistics and report rendering.

Reports follow one fixed shape: one row per (cell, direction) with utilization,
mean user throughput in Mbit/s, mean queued bits and completed-packet counts,
plus run metadata.  Aggregation across replications is the unweighted mean with
the standard error alongside; cells absent from a scheme (the small cell under
the baseline) simply have no rows.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from .spectrum import SUBFRAME_S

CSV_COLUMNS = [
    "scheme",
    "lambda_dl",
    "ratio",
    "cell",
    "direction",
    "ru",
    "ru_stderr",
    "ut_mbps",
    "ut_stderr",
    "queue_bits",
    "packets",
]


@dataclass(frozen=True)
class PacketRecord:
    ue: int
    direction: str
    arrival_sf: int
    completion_sf: int  # end of the subframe that drained the last bit
    bits: float

    def __post_init__(self):
        if self.completion_sf < self.arrival_sf + 1:
            raise ValueError("completion must trail arrival by at least one subframe")

    @property
    def throughput_mbps(self) -> float:
        return self.bits / ((self.completion_sf - self.arrival_sf) * SUBFRAME_S) / 1e6


def measured_ru(allocation_history, available_history) -> float:
    """Allocated over available resources, summed over the observation window."""
    if len(allocation_history) != len(available_history):
        raise ValueError("histories must be aligned per subframe")
    avail = float(sum(available_history))
    if avail <= 0:
        raise ValueError("no resources available over the window")
    return float(sum(allocation_history)) / avail


def mean_ut(records: list, per_ue: bool = False) -> float:
    """Mean user throughput in Mbit/s over completed packets.

    ``per_ue=True`` first averages within each UE, then across UEs.
    """
    if not records:
        raise ValueError("no completed packets to average")
    if not per_ue:
        return sum(r.throughput_mbps for r in records) / len(records)
    by_ue = {}
    for r in records:
        by_ue.setdefault(r.ue, []).append(r.throughput_mbps)
    return sum(sum(v) / len(v) for v in by_ue.values()) / len(by_ue)


def realized_efficiency(served_bits: float, allocated_rb_subframes: float) -> float:
    """Average serving rate actually achieved, in bits/s per resource."""
    if allocated_rb_subframes <= 0:
        raise ValueError("nothing was allocated")
    return served_bits / (allocated_rb_subframes * SUBFRAME_S)


@dataclass
class RowStats:
    ru: float
    ru_stderr: float
    ut_mbps: float | None
    ut_stderr: float | None
    queue_bits: float
    packets: float
    # diagnostics, not part of the CSV contract
    efficiency_bps_per_rb: float | None = None
    analytic_ru: float | None = None
    analytic_queue_bits: float | None = None


@dataclass
class MetricsReport:
    scheme: str
    lambda_dl: float
    ratio: float
    seed: int
    replications: int
    rows: dict = field(default_factory=dict)  # (cell, direction) -> RowStats

    def row(self, cell: str, direction: str) -> RowStats:
        return self.rows[(cell, direction)]

    def cells(self) -> list:
        return sorted({c for c, _ in self.rows})


def _mean_stderr(values) -> tuple:
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    mean = sum(vals) / len(vals)
    if len(vals) < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    return mean, math.sqrt(var / len(vals))


def aggregate_rows(per_rep_rows: list) -> dict:
    """Unweighted mean plus standard error across replications (order-independent)."""
    keys = sorted({k for rep in per_rep_rows for k in rep})
    out = {}
    for key in keys:
        entries = [rep[key] for rep in per_rep_rows if key in rep]
        ru, ru_se = _mean_stderr([e["ru"] for e in entries])
        ut, ut_se = _mean_stderr([e["ut_mbps"] for e in entries])
        queue, _ = _mean_stderr([e["queue_bits"] for e in entries])
        packets, _ = _mean_stderr([float(e["packets"]) for e in entries])
        eff, _ = _mean_stderr([e.get("efficiency") for e in entries])
        out[key] = RowStats(ru, ru_se, ut, ut_se, queue, packets, efficiency_bps_per_rb=eff)
    return out


def _fmt(value, digits=10) -> str:
    if value is None:
        return ""
    return f"{value:.{digits}g}"


def report_to_csv(reports) -> str:
    """Flat CSV, one line per (run, cell, direction)."""
    if isinstance(reports, MetricsReport):
        reports = [reports]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        for (cell, direction) in sorted(rep.rows):
            row = rep.rows[(cell, direction)]
            writer.writerow(
                [
                    rep.scheme,
                    _fmt(rep.lambda_dl),
                    _fmt(rep.ratio),
                    cell,
                    direction,
                    _fmt(row.ru),
                    _fmt(row.ru_stderr),
                    _fmt(row.ut_mbps),
                    _fmt(row.ut_stderr),
                    _fmt(row.queue_bits),
                    _fmt(row.packets),
                ]
            )
    return buf.getvalue()


def report_to_text(report: MetricsReport) -> str:
    """Human-readable single-run summary."""
    lines = [
        f"scheme={report.scheme} lambda_dl={report.lambda_dl:g} ratio={report.ratio:g} "
        f"seed={report.seed} replications={report.replications}",
        f"{'cell':<6} {'dir':<4} {'RU':>8} {'±':>7} {'UT Mb/s':>9} {'±':>7} {'queue bits':>12} {'pkts':>8}",
    ]
    for (cell, direction) in sorted(report.rows):
        r = report.rows[(cell, direction)]
        ut = "-" if r.ut_mbps is None else f"{r.ut_mbps:9.3f}"
        ut_se = "-" if r.ut_stderr is None else f"{r.ut_stderr:7.3f}"
        lines.append(
            f"{cell:<6} {direction:<4} {r.ru:8.4f} {r.ru_stderr:7.4f} {ut:>9} {ut_se:>7} "
            f"{r.queue_bits:12.4g} {r.packets:8.1f}"
        )
    return "\n".join(lines) + "\n"


def sweep_table(reports: list, per_cell_digits: int = 2) -> str:
    """Aligned table over a sweep: rows are (lambda_dl, scheme), columns RU/UT by cell and direction."""
    if not reports:
        raise ValueError("no reports to tabulate")
    header = (
        f"{'lambda_dl':>9} {'scheme':<14}"
        f" {'RU DL M':>8} {'RU DL S':>8} {'RU UL M':>8} {'RU UL S':>8}"
        f" {'UT DL M':>8} {'UT DL S':>8} {'UT UL M':>8} {'UT UL S':>8}"
    )
    lines = [header]

    def cell_val(rep, cell, direction, attr):
        row = rep.rows.get((cell, direction))
        if row is None:
            return ""
        v = getattr(row, attr)
        return "" if v is None else f"{v:.{per_cell_digits}f}"

    for rep in sorted(reports, key=lambda r: (r.lambda_dl, r.scheme)):
        vals = []
        for attr in ("ru", "ut_mbps"):
            for direction in ("DL", "UL"):
                for cell in ("menb", "senb"):
                    vals.append(f"{cell_val(rep, cell, direction, attr):>8}")
        lines.append(f"{rep.lambda_dl:>9g} {rep.scheme:<14}" + " " + " ".join(vals))
    return "\n".join(lines) + "\n"


def parse_report_csv(text: str) -> list:
    """Inverse of :func:`report_to_csv` (used by tests and downstream tooling)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_COLUMNS:
        raise ValueError("unrecognized report CSV header")
    out = []
    for row in rows[1:]:
        rec = dict(zip(CSV_COLUMNS, row))
        for k in ("lambda_dl", "ratio", "ru", "ru_stderr", "ut_mbps", "ut_stderr", "queue_bits", "packets"):
            rec[k] = float(rec[k]) if rec[k] != "" else None
        out.append(rec)
    return out
