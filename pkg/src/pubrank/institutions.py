"""Institution scores aggregated from author letter grades.

Two granularities: count of A-graded authors, and a total score weighting
A=1, B=0.5, C=0.25 (D and E count nothing).  Ties share a rank (dense
ranking: 1, 2, 2, 3).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

from scipy.stats import spearmanr

from .corpus import Corpus
from .grading import GradeAssignment

GRADE_WEIGHTS = {"A": 1.0, "B": 0.5, "C": 0.25, "D": 0.0, "E": 0.0}


@dataclass(frozen=True)
class InstitutionScore:
    institution_id: str
    metric: str
    scheme: str
    a_count: int
    total_score: float
    rank_by_a: int
    rank_by_total: int


@dataclass
class RankComparison:
    rows: list  # (institution_id, left_rank, right_rank)
    spearman: float


def score_institutions(grades: GradeAssignment, corpus: Corpus):
    """Aggregate author grades per institution.

    Returns (scores, skipped) where skipped counts graded authors with no
    institution link.  Only institutions with at least one graded author
    appear.
    """
    a_counts: dict = {}
    totals: dict = {}
    skipped = 0
    for author_id, letter in grades.grades.items():
        inst = corpus.institution_of(author_id)
        if inst is None:
            skipped += 1
            continue
        totals[inst] = totals.get(inst, 0.0) + GRADE_WEIGHTS[letter]
        if letter == "A":
            a_counts[inst] = a_counts.get(inst, 0) + 1

    institutions = sorted(totals)
    by_a = _dense_ranks([a_counts.get(i, 0) for i in institutions])
    by_total = _dense_ranks([totals[i] for i in institutions])
    scores = [
        InstitutionScore(
            institution_id=inst,
            metric=grades.metric.value,
            scheme=grades.scheme_label,
            a_count=a_counts.get(inst, 0),
            total_score=totals[inst],
            rank_by_a=by_a[k],
            rank_by_total=by_total[k],
        )
        for k, inst in enumerate(institutions)
    ]
    scores.sort(key=lambda s: (s.rank_by_total, s.institution_id))
    return scores, skipped


def _dense_ranks(values: list) -> list:
    """Dense descending ranks: distinct values get 1, 2, 3, ...; ties share."""
    order = sorted(set(values), reverse=True)
    rank_of = {v: i + 1 for i, v in enumerate(order)}
    return [rank_of[v] for v in values]


def compare_rankings(
    left: list, right: list, left_by: str = "total", right_by: str = "total"
) -> RankComparison:
    """Pair two institution rankings over the same universe.

    left_by / right_by select which rank column to compare ("total" or
    "a").  Raises ValueError listing the symmetric difference when the
    universes differ.  Spearman correlation is computed on the paired
    ranks (NaN when degenerate, e.g. a single institution).
    """
    lmap = {s.institution_id: s for s in left}
    rmap = {s.institution_id: s for s in right}
    if set(lmap) != set(rmap):
        diff = sorted(set(lmap) ^ set(rmap))
        raise ValueError(f"institution universes differ: {diff}")
    rows = []
    for inst in sorted(lmap):
        rows.append((inst, _pick(lmap[inst], left_by), _pick(rmap[inst], right_by)))
    if len(rows) >= 2:
        rho = float(spearmanr([r[1] for r in rows], [r[2] for r in rows]).statistic)
    else:
        rho = float("nan")
    return RankComparison(rows=rows, spearman=rho)


def _pick(score: InstitutionScore, by: str) -> int:
    if by == "total":
        return score.rank_by_total
    if by == "a":
        return score.rank_by_a
    raise ValueError(f"rank selector must be 'total' or 'a', got {by!r}")


def write_institutions_csv(scores: list, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(
            "institution_id,metric,scheme,a_count,total_score,"
            "rank_by_a,rank_by_total\n"
        )
        for s in scores:
            fh.write(
                f"{s.institution_id},{s.metric},{s.scheme},{s.a_count},"
                f"{s.total_score!r},{s.rank_by_a},{s.rank_by_total}\n"
            )
