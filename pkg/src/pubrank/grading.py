"""Ranks, rank percentiles, cumulative values, and letter grades.

Two grading schemes:

* contribution based — bucket the cumulative value (share of total metric
  mass held by authors ranked strictly ahead) at fixed 20/40/60/80%
  thresholds;
* percentile based — bucket the rank percentile at the power thresholds
  (alpha^4, alpha^3, alpha^2, alpha), which makes the letter counts a
  function of population size alone, independent of the metric.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .metrics import MetricKind, MetricVector

LETTERS = ("A", "B", "C", "D", "E")


@dataclass(frozen=True)
class ContributionBased:
    thresholds: tuple = (0.20, 0.40, 0.60, 0.80)

    def __post_init__(self) -> None:
        t = self.thresholds
        if len(t) != 4 or any(not 0.0 < x < 1.0 for x in t) or list(t) != sorted(set(t)):
            raise ValueError(f"thresholds must be 4 strictly increasing values in (0,1): {t}")

    @property
    def label(self) -> str:
        return "contribution"


@dataclass(frozen=True)
class PercentileBased:
    alpha: float = 0.25

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0,1), got {self.alpha}")

    def boundaries(self) -> tuple:
        a = self.alpha
        return (a**4, a**3, a**2, a)

    @property
    def label(self) -> str:
        return f"percentile-{self.alpha:g}"


GradingScheme = Union[ContributionBased, PercentileBased]


@dataclass(frozen=True)
class RankRow:
    author_id: str
    score: float
    rank: int
    rank_percentile: float
    cumulative_value: float


@dataclass
class RankingTable:
    metric: MetricKind
    rows: list
    total_authors: int
    total_score: float
    degenerate: bool = False

    def row_for(self, author_id: str):
        if not hasattr(self, "_by_author"):
            self._by_author = {r.author_id: r for r in self.rows}
        return self._by_author[author_id]


@dataclass
class GradeAssignment:
    metric: MetricKind
    scheme_label: str
    grades: dict = field(default_factory=dict)


def rank_authors(metric: MetricVector, inclusive: bool = False) -> RankingTable:
    """Order authors by score (descending, ties by ascending id).

    cumulative_value of a row is the share of the total score held by rows
    strictly ahead of it; pass inclusive=True to count the row itself as
    well.  A zero total score yields a degenerate table: tie-break ordering
    with all cumulative values at 0.
    """
    items = sorted(metric.author_scores.items(), key=lambda kv: (-kv[1], kv[0]))
    n = len(items)
    total = float(sum(score for _, score in items))
    degenerate = total <= 0.0
    rows = []
    running = 0.0
    for i, (aid, score) in enumerate(items):
        if degenerate:
            cumulative = 0.0
        elif inclusive:
            cumulative = (running + score) / total
        else:
            cumulative = running / total
        rows.append(
            RankRow(
                author_id=aid,
                score=float(score),
                rank=i + 1,
                rank_percentile=(i + 1) / n,
                cumulative_value=cumulative,
            )
        )
        running += score
    return RankingTable(
        metric=metric.kind,
        rows=rows,
        total_authors=n,
        total_score=total,
        degenerate=degenerate,
    )


def assign_letters(table: RankingTable, scheme: GradingScheme) -> GradeAssignment:
    """Letter every author in the table under the given scheme.

    Contribution based buckets cumulative value into A:[0,t1) B:[t1,t2)
    C:[t2,t3) D:[t3,t4) E:[t4,1].  Percentile based buckets rank percentile
    into A:(0,a^4] B:(a^4,a^3] C:(a^3,a^2] D:(a^2,a] E:(a,1].
    """
    grades = {}
    if isinstance(scheme, ContributionBased):
        bounds = scheme.thresholds
        for row in table.rows:
            grades[row.author_id] = LETTERS[bisect_right(bounds, row.cumulative_value)]
    else:
        bounds = scheme.boundaries()
        for row in table.rows:
            grades[row.author_id] = LETTERS[bisect_left(bounds, row.rank_percentile)]
    return GradeAssignment(
        metric=table.metric, scheme_label=scheme.label, grades=grades
    )


def letter_distribution(grades: GradeAssignment) -> dict:
    counts = {letter: 0 for letter in LETTERS}
    for letter in grades.grades.values():
        counts[letter] += 1
    return counts


# ---------------------------------------------------------------------------
# export


def write_ranking_csv(table: RankingTable, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("author_id,score,rank,rank_percentile,cumulative_value\n")
        for r in table.rows:
            fh.write(
                f"{r.author_id},{r.score!r},{r.rank},"
                f"{r.rank_percentile!r},{r.cumulative_value!r}\n"
            )


def write_grades_csv(
    table: RankingTable, grades: GradeAssignment, path: Union[str, Path]
) -> None:
    """One row per author: grade plus the ranking columns it derives from."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(
            "author_id,metric,scheme,grade,rank,rank_percentile,cumulative_value\n"
        )
        for r in table.rows:
            fh.write(
                f"{r.author_id},{table.metric.value},{grades.scheme_label},"
                f"{grades.grades[r.author_id]},{r.rank},"
                f"{r.rank_percentile!r},{r.cumulative_value!r}\n"
            )
