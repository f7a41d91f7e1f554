"""Deterministic synthetic corpora grown by cumulative advantage.

Papers are created in year order and cite only earlier papers, choosing
targets with probability proportional to (indegree + 1) ** attachment_bias.
The author pool opens up gradually over time, so early authors accumulate
long citation chains; that makes the generated data exhibit the
rich-get-richer citation skew and the influence-takes-time effect that the
analyses expect from real corpora.

Everything is driven by one seeded RNG, so a config maps to exactly one
corpus, byte for byte.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    n_papers: int = 100
    n_authors: int = 30
    n_venues: int = 5
    n_institutions: int = 5
    n_domains: int = 3
    refs_per_paper: float = 3.0  # mean outdegree
    attachment_bias: float = 1.0  # 0 = uniform targets
    coauthors_per_paper: float = 2.0  # mean byline size
    year_span: tuple = (1980, 2010)

    def __post_init__(self) -> None:
        for name in ("n_papers", "n_authors", "n_venues", "n_institutions", "n_domains"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.refs_per_paper < 0 or self.refs_per_paper >= self.n_papers:
            raise ValueError("refs_per_paper must be in [0, n_papers)")
        if self.attachment_bias < 0:
            raise ValueError("attachment_bias must be >= 0")
        if self.coauthors_per_paper < 1:
            raise ValueError("coauthors_per_paper must be >= 1")
        if self.year_span[0] > self.year_span[1]:
            raise ValueError("year_span start must be <= end")


def generate(cfg: SynthConfig) -> Corpus:
    """Grow a corpus from the config; same config, same corpus."""
    rng = random.Random(cfg.seed)
    n = cfg.n_papers

    inst_of = np.array(
        [rng.randrange(cfg.n_institutions) for _ in range(cfg.n_authors)],
        dtype=np.int32,
    )

    start, end = cfg.year_span
    span = end - start + 1

    sampler = _make_sampler(cfg, rng)

    years = np.empty(n, dtype=np.int32)
    paper_venue = np.empty(n, dtype=np.int32)
    indptr = np.zeros(n + 1, dtype=np.int64)
    bylines = []
    cit_src_parts = []
    cit_dst_parts = []
    domain_papers: dict = {d: [] for d in range(cfg.n_domains)}

    for i in range(n):
        years[i] = start + (i * span) // n

        wanted = min(_poisson(rng, cfg.refs_per_paper), i)
        targets = sampler.draw(i, wanted)
        if targets:
            arr = np.array(targets, dtype=np.int32)
            cit_src_parts.append(np.full(len(arr), i, dtype=np.int32))
            cit_dst_parts.append(arr)

        active = max(1, -(-cfg.n_authors * (i + 1) // n))  # ceil
        k = 1 + _poisson(rng, cfg.coauthors_per_paper - 1.0)
        byline = rng.sample(range(active), min(k, active))
        bylines.append(byline)
        indptr[i + 1] = indptr[i] + len(byline)

        paper_venue[i] = rng.randrange(cfg.n_venues)

        first = rng.randrange(cfg.n_domains)
        domain_papers[first].append(i)
        if cfg.n_domains > 1 and rng.random() < 0.3:
            second = rng.randrange(cfg.n_domains - 1)
            if second >= first:
                second += 1
            domain_papers[second].append(i)

    sampler.close()

    width_p = max(7, len(str(n - 1)))
    width_a = max(6, len(str(cfg.n_authors - 1)))
    paper_ids = [f"p{i:0{width_p}d}" for i in range(n)]
    author_ids = [f"a{i:0{width_a}d}" for i in range(cfg.n_authors)]
    venue_ids = [f"v{i:04d}" for i in range(cfg.n_venues)]
    institution_ids = [f"i{i:04d}" for i in range(cfg.n_institutions)]

    return Corpus(
        paper_ids=paper_ids,
        years=years,
        paper_venue=paper_venue,
        authorship_indptr=indptr,
        authorship_authors=np.array(
            [a for byline in bylines for a in byline], dtype=np.int32
        ),
        cit_src=(
            np.concatenate(cit_src_parts) if cit_src_parts else np.empty(0, np.int32)
        ),
        cit_dst=(
            np.concatenate(cit_dst_parts) if cit_dst_parts else np.empty(0, np.int32)
        ),
        author_ids=author_ids,
        author_names=[f"Author {i}" for i in range(cfg.n_authors)],
        author_institution=inst_of,
        venue_ids=venue_ids,
        venue_names=[f"Venue {i}" for i in range(cfg.n_venues)],
        institution_ids=institution_ids,
        institution_names=[f"Institution {i}" for i in range(cfg.n_institutions)],
        domain_papers={
            f"d{d:02d}": np.array(ps, dtype=np.int32)
            for d, ps in domain_papers.items()
            if ps
        },
    )


def _poisson(rng: random.Random, lam: float) -> int:
    """Knuth's product-of-uniforms draw; fine for the small means used here."""
    if lam <= 0.0:
        return 0
    limit = math.exp(-lam)
    k = 0
    p = rng.random()
    while p > limit:
        k += 1
        p *= rng.random()
    return k


def _make_sampler(cfg: SynthConfig, rng: random.Random):
    if cfg.attachment_bias == 0.0:
        return _UniformSampler(rng)
    if cfg.attachment_bias == 1.0:
        return _RepeatListSampler(rng)
    return _FenwickSampler(rng, cfg.n_papers, cfg.attachment_bias)


class _UniformSampler:
    """Targets drawn uniformly over earlier papers."""

    def __init__(self, rng):
        self.rng = rng

    def draw(self, i, wanted):
        targets = set()
        attempts = 0
        while len(targets) < wanted and attempts < 4 * wanted + 16:
            targets.add(self.rng.randrange(i))
            attempts += 1
        return sorted(targets)

    def close(self):
        pass


class _RepeatListSampler:
    """Linear preferential attachment via the repeated-node list trick.

    Every paper enters the pool once at creation and once per citation it
    receives, so drawing uniformly from the pool is proportional to
    indegree + 1.
    """

    def __init__(self, rng):
        self.rng = rng
        self.pool = []

    def draw(self, i, wanted):
        if i > 0:
            self.pool.append(i - 1)  # the previous paper joins the pool
        targets = set()
        attempts = 0
        pool = self.pool
        while len(targets) < wanted and attempts < 4 * wanted + 16:
            targets.add(pool[self.rng.randrange(len(pool))])
            attempts += 1
        chosen = sorted(targets)
        pool.extend(chosen)
        return chosen

    def close(self):
        pass


class _FenwickSampler:
    """General-bias attachment with exact per-draw weights.

    Keeps (indegree + 1) ** bias per created paper in a Fenwick tree and
    samples by inverse cumulative weight.  O(log n) per draw and update.
    """

    def __init__(self, rng, capacity, bias):
        self.rng = rng
        self.bias = bias
        self.size = capacity + 1
        self.tree = [0.0] * (self.size + 1)
        self.indegree = [0] * capacity

    def _add(self, i, delta):
        i += 1
        while i <= self.size:
            self.tree[i] += delta
            i += i & (-i)

    def _total(self, upto):
        total = 0.0
        while upto > 0:
            total += self.tree[upto]
            upto -= upto & (-upto)
        return total

    def _find(self, target, upto):
        """Largest power-of-two descent: first index with prefix > target,
        restricted to indices < upto."""
        idx = 0
        bitmask = 1 << (self.size.bit_length() - 1)
        while bitmask:
            nxt = idx + bitmask
            if nxt <= self.size and self.tree[nxt] <= target:
                target -= self.tree[nxt]
                idx = nxt
            bitmask >>= 1
        return min(idx, upto - 1)

    def draw(self, i, wanted):
        if i > 0:
            self._add(i - 1, (self.indegree[i - 1] + 1) ** self.bias)
        targets = set()
        attempts = 0
        total = self._total(i)
        while len(targets) < wanted and attempts < 4 * wanted + 16:
            u = self.rng.random() * total
            targets.add(self._find(u, i))
            attempts += 1
        for t in sorted(targets):
            old = (self.indegree[t] + 1) ** self.bias
            self.indegree[t] += 1
            self._add(t, (self.indegree[t] + 1) ** self.bias - old)
        return sorted(targets)

    def close(self):
        self.tree = None
