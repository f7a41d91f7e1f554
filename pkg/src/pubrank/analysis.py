"""Cross-metric similarity datasets, h-index, and publication-year views.

Everything here produces plain data (scatter points, curves, integers);
rendering belongs to whatever notebook or tool consumes the CSV exports.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .corpus import DomainView
from .grading import RankingTable


@dataclass
class ScatterDataset:
    x_label: str
    y_label: str
    points: list  # (author_id, x, y)


def h_index(author_id: str, view: DomainView) -> int:
    """Largest h such that the author has h papers each cited >= h times,
    counting only papers and citations inside the view."""
    ids = view.author_ids
    lookup = getattr(view, "_author_lookup", None)
    if lookup is None:
        lookup = {aid: i for i, aid in enumerate(ids)}
        view._author_lookup = lookup
    if author_id not in lookup:
        return 0
    col = view.authorship_matrix().tocsc()[:, lookup[author_id]]
    cites = sorted(view.indegrees()[col.indices].tolist(), reverse=True)
    return sum(1 for i, c in enumerate(cites, start=1) if c >= i)


def h_index_all(view: DomainView) -> dict:
    """h-index for every author in the view."""
    A = view.authorship_matrix().tocsc()
    indeg = view.indegrees()
    out = {}
    for j, aid in enumerate(view.author_ids):
        rows = A.indices[A.indptr[j] : A.indptr[j + 1]]
        cites = sorted(indeg[rows].tolist(), reverse=True)
        out[aid] = sum(1 for i, c in enumerate(cites, start=1) if c >= i)
    return out


def similarity_scatter(a: RankingTable, b: RankingTable) -> ScatterDataset:
    """Cumulative value under table a (x) against table b (y), per author."""
    a_ids = {r.author_id for r in a.rows}
    b_ids = {r.author_id for r in b.rows}
    if a_ids != b_ids:
        raise ValueError(
            f"author universes differ: {sorted(a_ids ^ b_ids)}"
        )
    b_cv = {r.author_id: r.cumulative_value for r in b.rows}
    points = [
        (r.author_id, r.cumulative_value, b_cv[r.author_id])
        for r in sorted(a.rows, key=lambda r: r.author_id)
    ]
    return ScatterDataset(
        x_label=f"{a.metric.short_label} cumulative value",
        y_label=f"{b.metric.short_label} cumulative value",
        points=points,
    )


def year_scatter(table: RankingTable, view: DomainView, which: str = "first"):
    """Publication year (x) against cumulative value (y), per author.

    which selects the first (earliest) or last (latest) year among the
    author's dated papers in the view.  Authors with no dated papers are
    skipped; returns (dataset, skipped_count).
    """
    if which not in ("first", "last"):
        raise ValueError(f"which must be 'first' or 'last', got {which!r}")
    A = view.authorship_matrix().tocoo()
    years = view.paper_years()[A.row]
    dated = years >= 0
    cols, yrs = A.col[dated], years[dated]

    extreme = np.full(
        view.n_authors,
        np.iinfo(np.int32).max if which == "first" else np.iinfo(np.int32).min,
        dtype=np.int64,
    )
    if which == "first":
        np.minimum.at(extreme, cols, yrs)
        has_year = extreme != np.iinfo(np.int32).max
    else:
        np.maximum.at(extreme, cols, yrs)
        has_year = extreme != np.iinfo(np.int32).min

    ids = view.author_ids
    cv = {r.author_id: r.cumulative_value for r in table.rows}
    points = []
    skipped = 0
    for j, aid in enumerate(ids):
        if aid not in cv:
            continue
        if not has_year[j]:
            skipped += 1
            continue
        points.append((aid, float(extreme[j]), cv[aid]))
    return (
        ScatterDataset(
            x_label=f"{which} publication year",
            y_label=f"{table.metric.short_label} cumulative value",
            points=points,
        ),
        skipped,
    )


def cumulative_curve(table: RankingTable) -> list:
    """(rank, cumulative_value) down the table; concave and nondecreasing."""
    return [(r.rank, r.cumulative_value) for r in table.rows]


def write_scatter_csv(dataset: ScatterDataset, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"author_id,{_csv_label(dataset.x_label)},{_csv_label(dataset.y_label)}\n")
        for aid, x, y in dataset.points:
            fh.write(f"{aid},{x!r},{y!r}\n")


def _csv_label(label: str) -> str:
    if "," in label or '"' in label:
        return '"' + label.replace('"', '""') + '"'
    return label
