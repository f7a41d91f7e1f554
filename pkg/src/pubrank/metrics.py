"""The seven author-level metrics over a domain view.

Three paper-based metrics (citation count, balanced citation count, citation
value), three author-based ones (influence, followers, connections), and the
joint author+venue exposure metric.  The iterative metrics all reduce to a
damped random walk over some row-normalized relationship matrix:

    citation value   pi over (R)*, split equally over each paper's authors
    influence        pi over (H)*,  H = (A^T)*(R)*(A)*
    followers        pi over (F)*,  F[i,j] = 1 iff i ever cited j (i != j)
    connections      pi over (N)*,  N = A^T A (or its binarization)
    exposure         pi over the author+venue block walk mixing (H)*, (Y)*
                     and the authorship/venueship couplings

H, Y and the exposure block rows are composed matrix-free from the factor
matrices; rows are re-normalized in one place so every operator handed to
the ranker is properly row-stochastic with an explicit dangling set.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from .corpus import DomainView, exclude_self_citations
from .ranker import (
    PowerIterationConfig,
    TransitionOperator,
    power_iterate,
    row_normalize,
)


class MetricKind(Enum):
    CC = "cc"
    BCC = "bcc"
    CV = "cv"
    INFLUENCE = "influence"
    FOLLOWERS = "followers"
    CONNECTIONS = "connections"
    EXPOSURE = "exposure"

    @property
    def iterative(self) -> bool:
        return self not in (MetricKind.CC, MetricKind.BCC)

    @property
    def short_label(self) -> str:
        return _SHORT_LABELS[self]


_SHORT_LABELS = {
    MetricKind.CC: "CC",
    MetricKind.BCC: "BCC",
    MetricKind.CV: "CV",
    MetricKind.INFLUENCE: "Inf",
    MetricKind.FOLLOWERS: "Fol",
    MetricKind.CONNECTIONS: "Con",
    MetricKind.EXPOSURE: "Exp",
}

ALL_METRICS = tuple(MetricKind)


@dataclass(frozen=True)
class MetricConfig:
    damping: float = 0.85
    tolerance: float = 1e-10
    max_iterations: int = 200
    connections_mode: str = "weighted"  # or "binary"
    connections_self_loops: str = "exclude"  # or "include"
    exposure_mix: float = 0.5
    self_citation_policy: str = "keep"  # or "exclude"

    def __post_init__(self) -> None:
        if self.connections_mode not in ("weighted", "binary"):
            raise ValueError(f"bad connections_mode: {self.connections_mode!r}")
        if self.connections_self_loops not in ("exclude", "include"):
            raise ValueError(
                f"bad connections_self_loops: {self.connections_self_loops!r}"
            )
        if not 0.0 < self.exposure_mix < 1.0:
            raise ValueError("exposure_mix must be in (0,1)")
        if self.self_citation_policy not in ("keep", "exclude"):
            raise ValueError(
                f"bad self_citation_policy: {self.self_citation_policy!r}"
            )

    def iteration_config(self) -> PowerIterationConfig:
        return PowerIterationConfig(
            damping=self.damping,
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
        )

    def fingerprint(self, kind: MetricKind) -> str:
        payload = {
            "kind": kind.value,
            "damping": self.damping,
            "tolerance": self.tolerance,
            "max_iterations": self.max_iterations,
            "connections_mode": self.connections_mode,
            "connections_self_loops": self.connections_self_loops,
            "exposure_mix": self.exposure_mix,
            "self_citation_policy": self.self_citation_policy,
            "teleport": "uniform",
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class MetricVector:
    """Per-author (and, for exposure, per-venue) scores for one metric."""

    kind: MetricKind
    author_scores: dict
    venue_scores: Optional[dict]
    view_descriptor: str
    config_fingerprint: str
    iterations_used: int = 0
    final_residual: float = 0.0
    converged: bool = True
    dropped_mass: float = 0.0


def _vector(kind, view, cfg, author, venue=None, rank=None, dropped=0.0):
    cfg = cfg or MetricConfig()
    return MetricVector(
        kind=kind,
        author_scores=author,
        venue_scores=venue,
        view_descriptor=view.descriptor,
        config_fingerprint=cfg.fingerprint(kind),
        iterations_used=rank.iterations_used if rank else 0,
        final_residual=rank.final_residual if rank else 0.0,
        converged=rank.converged if rank else True,
        dropped_mass=dropped,
    )


def _scores_dict(ids, values) -> dict:
    return {i: float(v) for i, v in zip(ids, values)}


def _row_normalized(mat: sp.spmatrix):
    """Row-normalize a sparse matrix; zero rows stay zero.

    Returns (normalized csr, row_sums).
    """
    mat = mat.tocsr().astype(np.float64)
    rs = np.asarray(mat.sum(axis=1)).ravel()
    inv = np.zeros_like(rs)
    nz = rs > 0.0
    inv[nz] = 1.0 / rs[nz]
    out = mat.copy()
    out.data = out.data * np.repeat(inv, np.diff(out.indptr))
    return out, rs


def _safe_inverse(sums: np.ndarray) -> np.ndarray:
    inv = np.zeros_like(sums)
    nz = sums > 0.0
    inv[nz] = 1.0 / sums[nz]
    return inv


# ---------------------------------------------------------------------------
# counting metrics


def compute_cc(view: DomainView, cfg: Optional[MetricConfig] = None) -> MetricVector:
    """Citation count: every co-author receives the paper's full indegree."""
    if view.n_authors == 0:
        return _vector(MetricKind.CC, view, cfg, {})
    indeg = view.indegrees().astype(np.float64)
    scores = view.authorship_matrix().T @ indeg
    return _vector(MetricKind.CC, view, cfg, _scores_dict(view.author_ids, scores))


def compute_bcc(view: DomainView, cfg: Optional[MetricConfig] = None) -> MetricVector:
    """Balanced citation count: indegree split equally among co-authors."""
    if view.n_authors == 0:
        return _vector(MetricKind.BCC, view, cfg, {})
    A = view.authorship_matrix()
    indeg = view.indegrees().astype(np.float64)
    n_auth = np.asarray(A.sum(axis=1)).ravel()
    share = np.divide(indeg, n_auth, out=np.zeros_like(indeg), where=n_auth > 0)
    scores = A.T @ share
    return _vector(MetricKind.BCC, view, cfg, _scores_dict(view.author_ids, scores))


# ---------------------------------------------------------------------------
# citation value


def compute_cv(view: DomainView, cfg: MetricConfig) -> MetricVector:
    """Paper-level stationary mass split equally among each paper's authors.

    Mass landing on authorless papers has nowhere to go; it is dropped and
    reported through ``dropped_mass``.
    """
    if view.n_papers == 0:
        return _vector(MetricKind.CV, view, cfg, {})
    op = row_normalize(view.citation_matrix())
    rank = power_iterate(op, cfg.iteration_config())
    As, a_sums = _row_normalized(view.authorship_matrix())
    author = rank.values @ As
    dropped = float(rank.values[a_sums == 0.0].sum())
    return _vector(
        MetricKind.CV,
        view,
        cfg,
        _scores_dict(view.author_ids, author),
        rank=rank,
        dropped=dropped,
    )


# ---------------------------------------------------------------------------
# influence


def build_influence_operator(view: DomainView) -> TransitionOperator:
    """Author-to-author influence walk.

    Composes author -> own papers (uniform), paper -> cited papers
    (uniform), paper -> its authors (uniform), then rescales rows so the
    operator is row-stochastic; authors with no outgoing influence mass
    (no papers, or papers that cite nothing with authors) are dangling.
    """
    A = view.authorship_matrix()
    R = view.citation_matrix()
    ATs, _ = _row_normalized(A.T)
    Rs, _ = _row_normalized(R)
    As, a_sums = _row_normalized(A)

    authored = (a_sums > 0.0).astype(np.float64)  # papers that carry authors
    row_sums = ATs @ (Rs @ authored)
    inv = _safe_inverse(row_sums)
    dangling = np.flatnonzero(row_sums == 0.0)

    def apply(x: np.ndarray) -> np.ndarray:
        return ((x * inv) @ ATs @ Rs) @ As

    return TransitionOperator(n=view.n_authors, apply=apply, dangling=dangling)


def compute_influence(view: DomainView, cfg: MetricConfig) -> MetricVector:
    if view.n_authors == 0:
        return _vector(MetricKind.INFLUENCE, view, cfg, {})
    op = build_influence_operator(view)
    rank = power_iterate(op, cfg.iteration_config())
    return _vector(
        MetricKind.INFLUENCE,
        view,
        cfg,
        _scores_dict(view.author_ids, rank.values),
        rank=rank,
    )


# ---------------------------------------------------------------------------
# followers


def _followers_matrix(view: DomainView) -> sp.csr_matrix:
    """Binary author->author matrix: i cited some paper of j, i != j."""
    A = view.authorship_matrix()
    R = view.citation_matrix()
    counts = ((A.T @ R) @ A).tocoo()
    off_diag = counts.row != counts.col
    n = view.n_authors
    return sp.csr_matrix(
        (
            np.ones(int(off_diag.sum())),
            (counts.row[off_diag], counts.col[off_diag]),
        ),
        shape=(n, n),
    )


def compute_followers(view: DomainView, cfg: MetricConfig) -> MetricVector:
    if view.n_authors == 0:
        return _vector(MetricKind.FOLLOWERS, view, cfg, {})
    op = row_normalize(_followers_matrix(view))
    rank = power_iterate(op, cfg.iteration_config())
    return _vector(
        MetricKind.FOLLOWERS,
        view,
        cfg,
        _scores_dict(view.author_ids, rank.values),
        rank=rank,
    )


# ---------------------------------------------------------------------------
# connections


def _connections_matrix(view: DomainView, cfg: MetricConfig) -> sp.csr_matrix:
    A = view.authorship_matrix()
    N = (A.T @ A).tocoo()
    keep = np.ones(len(N.data), dtype=bool)
    if cfg.connections_self_loops == "exclude":
        keep = N.row != N.col
    data = N.data[keep]
    if cfg.connections_mode == "binary":
        data = np.ones_like(data)
    n = view.n_authors
    return sp.csr_matrix((data, (N.row[keep], N.col[keep])), shape=(n, n))


def compute_connections(view: DomainView, cfg: MetricConfig) -> MetricVector:
    if view.n_authors == 0:
        return _vector(MetricKind.CONNECTIONS, view, cfg, {})
    op = row_normalize(_connections_matrix(view, cfg))
    rank = power_iterate(op, cfg.iteration_config())
    return _vector(
        MetricKind.CONNECTIONS,
        view,
        cfg,
        _scores_dict(view.author_ids, rank.values),
        rank=rank,
    )


# ---------------------------------------------------------------------------
# exposure


def build_exposure_operator(view: DomainView, cfg: MetricConfig) -> TransitionOperator:
    """Joint walk over authors then venues (index space authors + venues).

    Author rows mix the influence walk (weight ``exposure_mix``) with the
    author -> venue coupling; venue rows mirror it through the venue
    influence walk and the venue -> author coupling.  Rows are re-normalized
    as a whole, so a row missing one block simply routes all its mass
    through the other; rows with neither block are dangling.
    """
    A = view.authorship_matrix()
    R = view.citation_matrix()
    V = view.venue_matrix()
    n_a, n_v = view.n_authors, view.n_venues
    mix = cfg.exposure_mix

    ATs, _ = _row_normalized(A.T)
    As, a_sums = _row_normalized(A)
    VTs, _ = _row_normalized(V.T)
    Vs, v_sums = _row_normalized(V)
    Rs, _ = _row_normalized(R)

    authored = (a_sums > 0.0).astype(np.float64)
    venued = (v_sums > 0.0).astype(np.float64)

    h_sums = ATs @ (Rs @ authored) if n_a else np.zeros(0)
    y_sums = VTs @ (Rs @ venued) if n_v else np.zeros(0)
    t_av_sums = ATs @ venued if n_a else np.zeros(0)
    t_va_sums = VTs @ authored if n_v else np.zeros(0)

    inv_h = _safe_inverse(h_sums)
    inv_y = _safe_inverse(y_sums)

    row_sums = np.concatenate(
        [
            mix * (h_sums > 0.0) + (1.0 - mix) * t_av_sums,
            mix * (y_sums > 0.0) + (1.0 - mix) * t_va_sums,
        ]
    )
    inv_rows = _safe_inverse(row_sums)
    dangling = np.flatnonzero(row_sums == 0.0)

    def apply(x: np.ndarray) -> np.ndarray:
        z = x * inv_rows
        za, zv = z[:n_a], z[n_a:]
        h = ((za * inv_h) @ ATs @ Rs) @ As  # za . (H)*
        y = ((zv * inv_y) @ VTs @ Rs) @ Vs  # zv . (Y)*
        t_av = (za @ ATs) @ Vs
        t_va = (zv @ VTs) @ As
        out_a = mix * h + (1.0 - mix) * t_va
        out_v = (1.0 - mix) * t_av + mix * y
        return np.concatenate([out_a, out_v])

    return TransitionOperator(n=n_a + n_v, apply=apply, dangling=dangling)


def compute_exposure(view: DomainView, cfg: MetricConfig) -> MetricVector:
    n_a, n_v = view.n_authors, view.n_venues
    if n_a + n_v == 0:
        return _vector(MetricKind.EXPOSURE, view, cfg, {}, venue={})
    op = build_exposure_operator(view, cfg)
    rank = power_iterate(op, cfg.iteration_config())
    return _vector(
        MetricKind.EXPOSURE,
        view,
        cfg,
        _scores_dict(view.author_ids, rank.values[:n_a]),
        venue=_scores_dict(view.venue_ids, rank.values[n_a:]),
        rank=rank,
    )


# ---------------------------------------------------------------------------
# dispatch


_DISPATCH = {
    MetricKind.CC: compute_cc,
    MetricKind.BCC: compute_bcc,
    MetricKind.CV: compute_cv,
    MetricKind.INFLUENCE: compute_influence,
    MetricKind.FOLLOWERS: compute_followers,
    MetricKind.CONNECTIONS: compute_connections,
    MetricKind.EXPOSURE: compute_exposure,
}


def compute_metric(
    view: DomainView, kind: MetricKind, cfg: Optional[MetricConfig] = None
) -> MetricVector:
    """Compute one metric, honoring the self-citation policy."""
    cfg = cfg or MetricConfig()
    if cfg.self_citation_policy == "exclude":
        view = exclude_self_citations(view)
    return _DISPATCH[kind](view, cfg)


# ---------------------------------------------------------------------------
# export


def write_metric_csv(mv: MetricVector, path: Union[str, Path]) -> None:
    """CSV of (entity_type, entity_id, score) plus a JSON sidecar."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("entity_type,entity_id,score\n")
        for aid in sorted(mv.author_scores):
            fh.write(f"author,{aid},{mv.author_scores[aid]!r}\n")
        if mv.venue_scores:
            for vid in sorted(mv.venue_scores):
                fh.write(f"venue,{vid},{mv.venue_scores[vid]!r}\n")
    sidecar = {
        "kind": mv.kind.value,
        "view_descriptor": mv.view_descriptor,
        "config_fingerprint": mv.config_fingerprint,
        "iterations_used": mv.iterations_used,
        "final_residual": mv.final_residual,
        "converged": mv.converged,
        "dropped_mass": mv.dropped_mass,
    }
    with open(path.with_suffix(".json"), "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
