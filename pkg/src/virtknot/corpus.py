"""Named code collections and the batch invariant runner.

Corpus files hold one entry per line, either ``name code`` or a bare code
(named ``entry<line>``).  Lines starting with ``#`` are comments; a comment
block directly above an entry is kept as that entry's note.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CorpusParseError, GaussCodeError
from .gauss import GaussCode, parse, serialize
from .groups import DEFAULT_MAX_ORDER, FiniteGroup, bundled_groups, load_groups
from .invariants import DEFAULT_BRACKET_LIMIT, DEFAULT_FOX, InvariantReport, invariant_report
from .site.category import SiteCaps
from .surface import build_ribbon

__all__ = [
    "CorpusEntry",
    "Corpus",
    "RunConfig",
    "CorpusRow",
    "parse_corpus",
    "load_corpus",
    "bundled_corpus",
    "corpus_run",
    "rows_to_tsv",
    "rows_to_json",
    "TSV_COLUMNS",
]


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    code: GaussCode
    line: int
    note: str = ""


@dataclass(frozen=True)
class Corpus:
    entries: tuple[CorpusEntry, ...] = ()
    header: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def get(self, name: str) -> GaussCode:
        for e in self.entries:
            if e.name == name:
                return e.code
        raise KeyError(name)


@dataclass(frozen=True)
class RunConfig:
    max_crossings: int = 6
    max_states: int = 100_000
    bracket_limit: int = DEFAULT_BRACKET_LIMIT
    group_list_path: str | None = None
    max_group_order: int = DEFAULT_MAX_ORDER
    site_caps: SiteCaps = field(default_factory=SiteCaps)
    output_format: str = "json"
    fox: tuple[int, ...] = DEFAULT_FOX
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("max_crossings", "max_states", "bracket_limit", "max_group_order", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("json", "tsv", "dot"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if any(n < 2 for n in self.fox):
            raise ValueError("Fox coloring moduli must be at least 2")

    def groups(self) -> list[FiniteGroup]:
        if self.group_list_path is None:
            return bundled_groups()
        return load_groups(self.group_list_path, self.max_group_order)


def parse_corpus(lines: Iterable[str]) -> Corpus:
    entries: list[CorpusEntry] = []
    header: list[str] = []
    pending: list[str] = []
    seen: set[str] = set()
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            if not entries and pending:
                header.extend(pending)
            pending = []
            continue
        if line.startswith("#"):
            pending.append(line[1:].strip())
            continue
        parts = line.split(None, 1)
        if len(parts) == 2 and _looks_like_name(parts[0]):
            name, text = parts
        else:
            name, text = f"entry{number}", line
        if name in seen:
            raise CorpusParseError(f"duplicate name {name!r}", number)
        try:
            code = parse(text)
        except GaussCodeError as exc:
            raise CorpusParseError(str(exc), number) from None
        seen.add(name)
        entries.append(CorpusEntry(name, code, number, " ".join(pending)))
        pending = []
    return Corpus(tuple(entries), tuple(header))


def _looks_like_name(token: str) -> bool:
    """A leading token that is not itself a code is an entry name."""
    try:
        parse(token)
    except GaussCodeError:
        return True
    return False


def load_corpus(path: str | Path) -> Corpus:
    with open(path, encoding="utf-8") as handle:
        return parse_corpus(handle)


def bundled_corpus() -> Corpus:
    text = resources.files("virtknot").joinpath("data/corpus.txt").read_text(encoding="utf-8")
    return parse_corpus(text.splitlines())


@dataclass(frozen=True)
class CorpusRow:
    name: str
    code: str
    crossings: int
    writhe: int
    genus: int
    boundary_curves: int
    report: InvariantReport

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "input": self.code,
            "crossings": self.crossings,
            "writhe": self.writhe,
            "genus": self.genus,
            "boundary_curves": self.boundary_curves,
        }
        out.update(self.report.to_dict())
        return out


def _run_entry(args: tuple[str, str, RunConfig, Sequence[FiniteGroup]]) -> CorpusRow:
    name, text, config, groups = args
    code = parse(text)
    surface = build_ribbon(code)
    report = invariant_report(code, groups, fox=config.fox, bracket=True,
                              bracket_limit=config.bracket_limit)
    return CorpusRow(name, serialize(code), code.n, code.writhe(), surface.genus,
                     surface.boundary_curves, report)


def corpus_run(corpus: Corpus | str | Path, config: RunConfig | None = None) -> list[CorpusRow]:
    """One row per entry, in file order; identical for any worker count."""
    config = config or RunConfig()
    if not isinstance(corpus, Corpus):
        corpus = load_corpus(corpus)
    groups = config.groups()
    jobs = [(e.name, serialize(e.code), config, groups) for e in corpus]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_run_entry, jobs))
    return [_run_entry(job) for job in jobs]


TSV_COLUMNS = ("name", "code", "canonical", "crossings", "writhe", "genus", "boundary_curves",
               "odd_writhe", "fox_colorings", "f_polynomial", "rep_counts", "peripheral_counts")


def _compact(mapping: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in mapping.items())


def rows_to_tsv(rows: Sequence[CorpusRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter="\t", lineterminator="\n")
    writer.writerow(TSV_COLUMNS)
    for row in rows:
        r = row.report
        writer.writerow([
            row.name, row.code, r.code, row.crossings, row.writhe, row.genus, row.boundary_curves,
            r.odd_writhe, _compact(dict(sorted(r.fox_colorings.items()))),
            str(r.f_polynomial), _compact(r.rep_counts), _compact(r.peripheral_counts),
        ])
    return buffer.getvalue()


def rows_to_json(rows: Sequence[CorpusRow]) -> str:
    return json.dumps([row.to_dict() for row in rows], sort_keys=True, separators=(",", ":"))

