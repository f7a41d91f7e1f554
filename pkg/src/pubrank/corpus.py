"""Publication corpus loading, indexing, and domain slicing.

A corpus ties together three networks over papers, authors, and venues:
the paper citation graph, the paper-author bipartite graph, and the
paper-venue map (each paper has at most one venue).  Ids are opaque strings
in the ingestion files and are mapped to dense integer indices internally;
all orderings are by sorted id so repeated loads are reproducible.

Dirty references (citations to unknown papers, authorship rows naming
unknown authors, venue ids that never resolve) are dropped and tallied in a
ValidationReport instead of failing the load; real bibliographic dumps are
never clean.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

ABSENT = "-"

PAPERS_FILE = "papers.tsv"
AUTHORS_FILE = "authors.tsv"
VENUES_FILE = "venues.tsv"
INSTITUTIONS_FILE = "institutions.tsv"
AUTHORSHIP_FILE = "authorship.tsv"
CITATIONS_FILE = "citations.tsv"

_HEADERS = {
    PAPERS_FILE: ["paper_id", "year", "venue_id", "domains"],
    AUTHORS_FILE: ["author_id", "name", "institution_id"],
    VENUES_FILE: ["venue_id", "name"],
    INSTITUTIONS_FILE: ["institution_id", "name"],
    AUTHORSHIP_FILE: ["paper_id", "author_id", "author_position"],
    CITATIONS_FILE: ["citing_paper_id", "cited_paper_id"],
}


class CorpusFormatError(ValueError):
    """Malformed ingestion data; message carries file and line context."""


class DomainNotFoundError(KeyError):
    """Requested domain id is not present in the corpus."""


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    year: Optional[int] = None
    venue_id: Optional[str] = None
    authors: tuple = ()
    domains: frozenset = frozenset()
    cites: frozenset = frozenset()


@dataclass(frozen=True)
class AuthorRecord:
    author_id: str
    name: str = ""
    institution_id: Optional[str] = None


@dataclass(frozen=True)
class VenueRecord:
    venue_id: str
    name: str = ""


@dataclass(frozen=True)
class InstitutionRecord:
    institution_id: str
    name: str = ""


@dataclass
class ValidationReport:
    dropped_citation_refs: int = 0
    dropped_author_refs: int = 0
    papers_missing_venue: int = 0
    papers_missing_year: int = 0
    duplicate_ids: list = field(default_factory=list)
    unclassified_papers: int = 0

    def as_dict(self) -> dict:
        return {
            "dropped_citation_refs": self.dropped_citation_refs,
            "dropped_author_refs": self.dropped_author_refs,
            "papers_missing_venue": self.papers_missing_venue,
            "papers_missing_year": self.papers_missing_year,
            "duplicate_ids": list(self.duplicate_ids),
            "unclassified_papers": self.unclassified_papers,
        }


class Corpus:
    """Immutable indexed corpus; safe to share across threads once built.

    Storage is columnar: ids live in sorted lists, relationships in numpy
    index arrays.  Use :meth:`paper` / :meth:`author` / :meth:`venue` to
    materialize individual records.
    """

    def __init__(
        self,
        paper_ids: list,
        years: np.ndarray,
        paper_venue: np.ndarray,
        authorship_indptr: np.ndarray,
        authorship_authors: np.ndarray,
        cit_src: np.ndarray,
        cit_dst: np.ndarray,
        author_ids: list,
        author_names: list,
        author_institution: np.ndarray,
        venue_ids: list,
        venue_names: list,
        institution_ids: list,
        institution_names: list,
        domain_papers: dict,
    ):
        self.paper_ids = paper_ids
        self.years = years
        self.paper_venue = paper_venue
        self.authorship_indptr = authorship_indptr
        self.authorship_authors = authorship_authors
        self.cit_src = cit_src
        self.cit_dst = cit_dst
        self.author_ids = author_ids
        self.author_names = author_names
        self.author_institution = author_institution
        self.venue_ids = venue_ids
        self.venue_names = venue_names
        self.institution_ids = institution_ids
        self.institution_names = institution_names
        self._domain_papers = domain_papers
        self._paper_index = {pid: i for i, pid in enumerate(paper_ids)}
        self._author_index = {aid: i for i, aid in enumerate(author_ids)}
        self._venue_index = {vid: i for i, vid in enumerate(venue_ids)}
        self._institution_index = {iid: i for i, iid in enumerate(institution_ids)}
        self._authorship_csr = None

    # -- sizes ---------------------------------------------------------

    @property
    def n_papers(self) -> int:
        return len(self.paper_ids)

    @property
    def n_authors(self) -> int:
        return len(self.author_ids)

    @property
    def n_venues(self) -> int:
        return len(self.venue_ids)

    @property
    def n_institutions(self) -> int:
        return len(self.institution_ids)

    @property
    def domains(self) -> list:
        return sorted(self._domain_papers)

    # -- record access -------------------------------------------------

    def paper_index(self, paper_id: str) -> int:
        return self._paper_index[paper_id]

    def author_index(self, author_id: str) -> int:
        return self._author_index[author_id]

    def paper(self, paper_id: str) -> PaperRecord:
        i = self._paper_index[paper_id]
        lo, hi = self.authorship_indptr[i], self.authorship_indptr[i + 1]
        authors = tuple(self.author_ids[a] for a in self.authorship_authors[lo:hi])
        s, e = self._cite_bounds(i)
        cites = frozenset(self.paper_ids[d] for d in self.cit_dst[s:e])
        domains = frozenset(
            d for d, papers in self._domain_papers.items()
            if np.searchsorted(papers, i) < len(papers)
            and papers[np.searchsorted(papers, i)] == i
        )
        year = int(self.years[i]) if self.years[i] >= 0 else None
        v = self.paper_venue[i]
        return PaperRecord(
            paper_id=paper_id,
            year=year,
            venue_id=self.venue_ids[v] if v >= 0 else None,
            authors=authors,
            domains=domains,
            cites=cites,
        )

    def author(self, author_id: str) -> AuthorRecord:
        i = self._author_index[author_id]
        inst = self.author_institution[i]
        return AuthorRecord(
            author_id=author_id,
            name=self.author_names[i],
            institution_id=self.institution_ids[inst] if inst >= 0 else None,
        )

    def venue(self, venue_id: str) -> VenueRecord:
        return VenueRecord(venue_id, self.venue_names[self._venue_index[venue_id]])

    def institution(self, institution_id: str) -> InstitutionRecord:
        i = self._institution_index[institution_id]
        return InstitutionRecord(institution_id, self.institution_names[i])

    def institution_of(self, author_id: str) -> Optional[str]:
        inst = self.author_institution[self._author_index[author_id]]
        return self.institution_ids[inst] if inst >= 0 else None

    def _cite_bounds(self, paper_idx: int):
        s = np.searchsorted(self.cit_src, paper_idx, side="left")
        e = np.searchsorted(self.cit_src, paper_idx, side="right")
        return s, e

    def citation_pairs(self) -> list:
        return [
            (self.paper_ids[s], self.paper_ids[d])
            for s, d in zip(self.cit_src.tolist(), self.cit_dst.tolist())
        ]

    def authorship_pairs(self) -> list:
        pairs = []
        for i, pid in enumerate(self.paper_ids):
            lo, hi = self.authorship_indptr[i], self.authorship_indptr[i + 1]
            for a in self.authorship_authors[lo:hi]:
                pairs.append((pid, self.author_ids[a]))
        return pairs

    def domain_paper_ids(self, domain: str) -> list:
        if domain not in self._domain_papers:
            raise DomainNotFoundError(domain)
        return [self.paper_ids[i] for i in self._domain_papers[domain]]

    def authorship_matrix(self) -> sp.csr_matrix:
        """Global paper x author binary matrix, cached."""
        if self._authorship_csr is None:
            data = np.ones(len(self.authorship_authors), dtype=np.float64)
            self._authorship_csr = sp.csr_matrix(
                (data, self.authorship_authors, self.authorship_indptr),
                shape=(self.n_papers, self.n_authors),
            )
        return self._authorship_csr


class DomainView:
    """Corpus restricted to a paper subset with induced edges.

    Authors and venues are exactly those incident to the subset.  Citation
    edges are kept only when both endpoints lie inside the subset.  Local
    indices (0..n-1 within the view) are used for all matrix work; the
    ``*_ids`` properties map back to the opaque ids.
    """

    def __init__(
        self,
        corpus: Corpus,
        descriptor: str,
        paper_idx: np.ndarray,
        author_idx: np.ndarray,
        venue_idx: np.ndarray,
        cit_src_local: np.ndarray,
        cit_dst_local: np.ndarray,
    ):
        self.corpus = corpus
        self.descriptor = descriptor
        self.paper_idx = paper_idx
        self.author_idx = author_idx
        self.venue_idx = venue_idx
        self.cit_src_local = cit_src_local
        self.cit_dst_local = cit_dst_local
        self._R = None
        self._A = None
        self._V = None

    @property
    def n_papers(self) -> int:
        return len(self.paper_idx)

    @property
    def n_authors(self) -> int:
        return len(self.author_idx)

    @property
    def n_venues(self) -> int:
        return len(self.venue_idx)

    @property
    def paper_ids(self) -> list:
        return [self.corpus.paper_ids[i] for i in self.paper_idx]

    @property
    def author_ids(self) -> list:
        return [self.corpus.author_ids[i] for i in self.author_idx]

    @property
    def venue_ids(self) -> list:
        return [self.corpus.venue_ids[i] for i in self.venue_idx]

    def citation_matrix(self) -> sp.csr_matrix:
        """Local paper x paper citation adjacency; R[i,j]=1 iff i cites j."""
        if self._R is None:
            n = self.n_papers
            data = np.ones(len(self.cit_src_local), dtype=np.float64)
            self._R = sp.csr_matrix(
                (data, (self.cit_src_local, self.cit_dst_local)), shape=(n, n)
            )
        return self._R

    def authorship_matrix(self) -> sp.csr_matrix:
        """Local paper x author binary authorship matrix."""
        if self._A is None:
            sub = self.corpus.authorship_matrix()[self.paper_idx]
            local_cols = np.searchsorted(self.author_idx, sub.indices)
            self._A = sp.csr_matrix(
                (sub.data, local_cols, sub.indptr),
                shape=(self.n_papers, self.n_authors),
            )
        return self._A

    def venue_matrix(self) -> sp.csr_matrix:
        """Local paper x venue matrix; one entry per paper with a venue."""
        if self._V is None:
            venues = self.corpus.paper_venue[self.paper_idx]
            rows = np.flatnonzero(venues >= 0)
            cols = np.searchsorted(self.venue_idx, venues[rows])
            data = np.ones(len(rows), dtype=np.float64)
            self._V = sp.csr_matrix(
                (data, (rows, cols)), shape=(self.n_papers, self.n_venues)
            )
        return self._V

    def indegrees(self) -> np.ndarray:
        """Citations received per paper, inside the view."""
        return np.bincount(self.cit_dst_local, minlength=self.n_papers).astype(
            np.int64
        )

    def paper_years(self) -> np.ndarray:
        """Local paper years; -1 where absent."""
        return self.corpus.years[self.paper_idx]

    def citation_pairs(self) -> set:
        ids = self.paper_ids
        return {
            (ids[s], ids[d])
            for s, d in zip(self.cit_src_local.tolist(), self.cit_dst_local.tolist())
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, DomainView):
            return NotImplemented
        return (
            self.corpus is other.corpus
            and np.array_equal(self.paper_idx, other.paper_idx)
            and np.array_equal(self.author_idx, other.author_idx)
            and np.array_equal(self.venue_idx, other.venue_idx)
            and np.array_equal(self.cit_src_local, other.cit_src_local)
            and np.array_equal(self.cit_dst_local, other.cit_dst_local)
        )


# ---------------------------------------------------------------------------
# construction


def build_corpus(
    papers: Iterable[PaperRecord],
    authors: Iterable[AuthorRecord] = (),
    venues: Iterable[VenueRecord] = (),
    institutions: Iterable[InstitutionRecord] = (),
    report: Optional[ValidationReport] = None,
):
    """Link records into an indexed Corpus, dropping unresolved references.

    Returns (corpus, report).  Duplicate primary ids raise
    CorpusFormatError; dangling citation / authorship references are dropped
    and tallied.
    """
    if report is None:
        report = ValidationReport()

    author_records = _unique_records(list(authors), "author_id")
    venue_records = _unique_records(list(venues), "venue_id")
    institution_records = _unique_records(list(institutions), "institution_id")
    paper_records = _unique_records(list(papers), "paper_id")

    author_ids = [r.author_id for r in author_records]
    venue_ids = [r.venue_id for r in venue_records]
    institution_ids = [r.institution_id for r in institution_records]
    paper_ids = [r.paper_id for r in paper_records]

    author_index = {a: i for i, a in enumerate(author_ids)}
    venue_index = {v: i for i, v in enumerate(venue_ids)}
    institution_index = {x: i for i, x in enumerate(institution_ids)}
    paper_index = {p: i for i, p in enumerate(paper_ids)}

    author_names = [r.name for r in author_records]
    author_institution = np.full(len(author_ids), -1, dtype=np.int32)
    for i, r in enumerate(author_records):
        if r.institution_id is not None:
            # unresolved institution links are cleared silently
            author_institution[i] = institution_index.get(r.institution_id, -1)

    n_papers = len(paper_ids)
    years = np.full(n_papers, -1, dtype=np.int32)
    paper_venue = np.full(n_papers, -1, dtype=np.int32)
    indptr = np.zeros(n_papers + 1, dtype=np.int64)
    authorship = []
    cit_src_parts = []
    cit_dst_parts = []
    domain_papers: dict = {}

    for i, rec in enumerate(paper_records):
        if rec.year is not None:
            years[i] = rec.year
        else:
            report.papers_missing_year += 1
        if rec.venue_id is not None and rec.venue_id in venue_index:
            paper_venue[i] = venue_index[rec.venue_id]
        else:
            report.papers_missing_venue += 1

        resolved_authors = []
        for aid in rec.authors:
            j = author_index.get(aid)
            if j is None:
                report.dropped_author_refs += 1
            else:
                resolved_authors.append(j)
        authorship.extend(resolved_authors)
        indptr[i + 1] = indptr[i] + len(resolved_authors)

        targets = []
        for cid in sorted(rec.cites):
            if cid == rec.paper_id:
                report.dropped_citation_refs += 1  # no self-citation edges
                continue
            j = paper_index.get(cid)
            if j is None:
                report.dropped_citation_refs += 1
            else:
                targets.append(j)
        if targets:
            targets = np.array(sorted(targets), dtype=np.int32)
            cit_src_parts.append(np.full(len(targets), i, dtype=np.int32))
            cit_dst_parts.append(targets)

        if rec.domains:
            for d in rec.domains:
                domain_papers.setdefault(d, []).append(i)
        else:
            report.unclassified_papers += 1

    cit_src = (
        np.concatenate(cit_src_parts) if cit_src_parts else np.empty(0, np.int32)
    )
    cit_dst = (
        np.concatenate(cit_dst_parts) if cit_dst_parts else np.empty(0, np.int32)
    )
    domain_arrays = {
        d: np.array(ps, dtype=np.int32) for d, ps in domain_papers.items()
    }

    corpus = Corpus(
        paper_ids=paper_ids,
        years=years,
        paper_venue=paper_venue,
        authorship_indptr=indptr,
        authorship_authors=np.array(authorship, dtype=np.int32),
        cit_src=cit_src,
        cit_dst=cit_dst,
        author_ids=author_ids,
        author_names=author_names,
        author_institution=author_institution,
        venue_ids=venue_ids,
        venue_names=venue_names,
        institution_ids=institution_ids,
        institution_names=[r.name for r in institution_records],
        domain_papers=domain_arrays,
    )
    return corpus, report


def _unique_records(records: list, key: str) -> list:
    records.sort(key=lambda r: getattr(r, key))
    seen = None
    for r in records:
        k = getattr(r, key)
        if k == seen:
            raise CorpusFormatError(f"duplicate primary id: {k!r}")
        seen = k
    return records


# ---------------------------------------------------------------------------
# TSV ingestion / emission


def load_corpus(directory: Union[str, os.PathLike]):
    """Load the six-file TSV corpus from a directory.

    Returns (corpus, report).  Malformed lines raise CorpusFormatError with
    file and line number; duplicate primary ids raise as well.  Unresolvable
    cross-references are dropped and counted in the report.
    """
    base = Path(directory)
    report = ValidationReport()

    institutions = [
        InstitutionRecord(institution_id=f[0], name=f[1])
        for f in _read_rows(base / INSTITUTIONS_FILE)
    ]
    venues = [
        VenueRecord(venue_id=f[0], name=f[1]) for f in _read_rows(base / VENUES_FILE)
    ]
    authors = [
        AuthorRecord(
            author_id=f[0], name=f[1], institution_id=_opt(f[2])
        )
        for f in _read_rows(base / AUTHORS_FILE)
    ]

    authorship: dict = {}
    path = base / AUTHORSHIP_FILE
    for lineno, f in _read_rows(path, with_lineno=True):
        pid, aid, pos = f[0], f[1], _parse_int(f[2], path, lineno)
        entries = authorship.setdefault(pid, {})
        if aid in entries:
            report.duplicate_ids.append(f"{pid}+{aid}")
        else:
            entries[aid] = (pos, aid)

    citations: dict = {}
    path = base / CITATIONS_FILE
    for lineno, f in _read_rows(path, with_lineno=True):
        src, dst = f[0], f[1]
        targets = citations.setdefault(src, set())
        if dst in targets:
            report.duplicate_ids.append(f"{src}->{dst}")
        else:
            targets.add(dst)

    papers = []
    path = base / PAPERS_FILE
    for lineno, f in _read_rows(path, with_lineno=True):
        pid = f[0]
        year = None if f[1] == ABSENT else _parse_int(f[1], path, lineno)
        domains = frozenset(d for d in f[3].split(",") if d) if f[3] != ABSENT else frozenset()
        ordered = sorted(authorship.get(pid, {}).values())
        papers.append(
            PaperRecord(
                paper_id=pid,
                year=year,
                venue_id=_opt(f[2]),
                authors=tuple(a for _, a in ordered),
                domains=domains,
                cites=frozenset(citations.get(pid, ())),
            )
        )

    # authorship / citation rows whose paper never appears are dangling refs
    known = {p.paper_id for p in papers}
    for pid, entries in authorship.items():
        if pid not in known:
            report.dropped_author_refs += len(entries)
    for pid, targets in citations.items():
        if pid not in known:
            report.dropped_citation_refs += len(targets)

    report.duplicate_ids.sort()
    return build_corpus(papers, authors, venues, institutions, report)


def write_corpus(corpus: Corpus, directory: Union[str, os.PathLike]) -> None:
    """Emit the corpus in the exact TSV ingestion format (lossless)."""
    base = Path(directory)
    base.mkdir(parents=True, exist_ok=True)

    with _writer(base / PAPERS_FILE) as w:
        w(_HEADERS[PAPERS_FILE])
        paper_domains: dict = {}
        for d in corpus.domains:
            for i in corpus._domain_papers[d]:
                paper_domains.setdefault(int(i), []).append(d)
        for i, pid in enumerate(corpus.paper_ids):
            year = str(corpus.years[i]) if corpus.years[i] >= 0 else ABSENT
            v = corpus.paper_venue[i]
            venue = corpus.venue_ids[v] if v >= 0 else ABSENT
            doms = paper_domains.get(i)
            w([pid, year, venue, ",".join(sorted(doms)) if doms else ABSENT])

    with _writer(base / AUTHORS_FILE) as w:
        w(_HEADERS[AUTHORS_FILE])
        for i, aid in enumerate(corpus.author_ids):
            inst = corpus.author_institution[i]
            w([
                aid,
                corpus.author_names[i],
                corpus.institution_ids[inst] if inst >= 0 else ABSENT,
            ])

    with _writer(base / VENUES_FILE) as w:
        w(_HEADERS[VENUES_FILE])
        for i, vid in enumerate(corpus.venue_ids):
            w([vid, corpus.venue_names[i]])

    with _writer(base / INSTITUTIONS_FILE) as w:
        w(_HEADERS[INSTITUTIONS_FILE])
        for i, iid in enumerate(corpus.institution_ids):
            w([iid, corpus.institution_names[i]])

    with _writer(base / AUTHORSHIP_FILE) as w:
        w(_HEADERS[AUTHORSHIP_FILE])
        for i, pid in enumerate(corpus.paper_ids):
            lo, hi = corpus.authorship_indptr[i], corpus.authorship_indptr[i + 1]
            for pos, a in enumerate(corpus.authorship_authors[lo:hi], start=1):
                w([pid, corpus.author_ids[a], str(pos)])

    with _writer(base / CITATIONS_FILE) as w:
        w(_HEADERS[CITATIONS_FILE])
        for s, d in zip(corpus.cit_src.tolist(), corpus.cit_dst.tolist()):
            w([corpus.paper_ids[s], corpus.paper_ids[d]])


class _writer:
    def __init__(self, path: Path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w", encoding="utf-8", newline="")
        return lambda fields: self.fh.write("\t".join(fields) + "\n")

    def __exit__(self, *exc):
        self.fh.close()


def _opt(field_value: str) -> Optional[str]:
    return None if field_value == ABSENT else field_value


def _parse_int(text: str, path: Path, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise CorpusFormatError(
            f"{path.name}:{lineno}: expected integer, got {text!r}"
        ) from None


def _read_rows(path: Path, with_lineno: bool = False):
    """Yield tab-split rows after validating the fixed header."""
    if not path.exists():
        raise FileNotFoundError(f"missing corpus file: {path}")
    expected = _HEADERS[path.name]
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if lineno == 1:
                if line.split("\t") != expected:
                    raise CorpusFormatError(
                        f"{path.name}:1: bad header, expected "
                        f"{chr(9).join(expected)!r}"
                    )
                continue
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != len(expected):
                raise CorpusFormatError(
                    f"{path.name}:{lineno}: expected {len(expected)} fields, "
                    f"got {len(fields)}"
                )
            rows.append((lineno, fields) if with_lineno else fields)
    return rows


# ---------------------------------------------------------------------------
# views


def _make_view(corpus: Corpus, descriptor: str, paper_idx: np.ndarray) -> DomainView:
    paper_idx = np.unique(np.asarray(paper_idx, dtype=np.int32))
    mask = np.zeros(corpus.n_papers, dtype=bool)
    mask[paper_idx] = True

    keep = mask[corpus.cit_src] & mask[corpus.cit_dst] if len(corpus.cit_src) else \
        np.empty(0, dtype=bool)
    src = np.searchsorted(paper_idx, corpus.cit_src[keep]).astype(np.int32)
    dst = np.searchsorted(paper_idx, corpus.cit_dst[keep]).astype(np.int32)

    if len(paper_idx):
        sub = corpus.authorship_matrix()[paper_idx]
        author_idx = np.unique(sub.indices).astype(np.int32)
        venues = corpus.paper_venue[paper_idx]
        venue_idx = np.unique(venues[venues >= 0]).astype(np.int32)
    else:
        author_idx = np.empty(0, dtype=np.int32)
        venue_idx = np.empty(0, dtype=np.int32)

    return DomainView(
        corpus=corpus,
        descriptor=descriptor,
        paper_idx=paper_idx,
        author_idx=author_idx,
        venue_idx=venue_idx,
        cit_src_local=src,
        cit_dst_local=dst,
    )


def domain_view(source: Union[Corpus, DomainView], domain: str) -> DomainView:
    """Restrict a corpus (or an existing view) to one domain's papers."""
    if isinstance(source, Corpus):
        if domain not in source._domain_papers:
            raise DomainNotFoundError(domain)
        return _make_view(source, domain, source._domain_papers[domain])

    corpus = source.corpus
    if domain not in corpus._domain_papers:
        raise DomainNotFoundError(domain)
    keep_global = np.intersect1d(source.paper_idx, corpus._domain_papers[domain])
    view = _make_view(corpus, domain, keep_global)
    # induced edges must come from the source view, not the corpus
    old_global_src = source.paper_idx[source.cit_src_local]
    old_global_dst = source.paper_idx[source.cit_dst_local]
    mask = np.isin(old_global_src, keep_global) & np.isin(old_global_dst, keep_global)
    view.cit_src_local = np.searchsorted(
        view.paper_idx, old_global_src[mask]
    ).astype(np.int32)
    view.cit_dst_local = np.searchsorted(
        view.paper_idx, old_global_dst[mask]
    ).astype(np.int32)
    view._R = None
    return view


def merge_overall(corpus: Corpus) -> DomainView:
    """Union of all domain-tagged papers; unclassified papers stay out."""
    if corpus._domain_papers:
        union = np.unique(np.concatenate(list(corpus._domain_papers.values())))
    else:
        union = np.empty(0, dtype=np.int32)
    return _make_view(corpus, "overall", union)


def exclude_self_citations(view: DomainView) -> DomainView:
    """Drop citation edges between papers sharing at least one author."""
    if len(view.cit_src_local) == 0:
        return DomainView(
            corpus=view.corpus,
            descriptor=view.descriptor,
            paper_idx=view.paper_idx,
            author_idx=view.author_idx,
            venue_idx=view.venue_idx,
            cit_src_local=view.cit_src_local,
            cit_dst_local=view.cit_dst_local,
        )
    A = view.authorship_matrix()
    shared = A[view.cit_src_local].multiply(A[view.cit_dst_local])
    keep = shared.getnnz(axis=1) == 0
    return DomainView(
        corpus=view.corpus,
        descriptor=view.descriptor,
        paper_idx=view.paper_idx,
        author_idx=view.author_idx,
        venue_idx=view.venue_idx,
        cit_src_local=view.cit_src_local[keep],
        cit_dst_local=view.cit_dst_local[keep],
    )
