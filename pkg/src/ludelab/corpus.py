"""The sample game corpus: descriptions with historical metadata, plus
per-game mathematical and historical profiles."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import DuplicateName, MetadataMismatch, ParseError
from .schema import Library, standard_library
from .sexpr import parse
from .validate import GameDescription, validate

ANCIENT_BEFORE = 500
EARLY_BEFORE = 1500
PERIODS = ("Ancient", "Early", "Modern")


def classify_period(year: int) -> str:
    """Ancient before 500, Early 500..1499, Modern from 1500 on.
    Boundary years belong to the later period."""
    if year < ANCIENT_BEFORE:
        return "Ancient"
    if year < EARLY_BEFORE:
        return "Early"
    return "Modern"


@dataclass(frozen=True)
class GameMetadata:
    name: str
    region: str
    earliest_date: int            # signed year, negative = BC
    sources: tuple = ()

    @property
    def period(self) -> str:
        return classify_period(self.earliest_date)

    @classmethod
    def from_json(cls, text: str) -> "GameMetadata":
        doc = json.loads(text)
        return cls(
            name=doc["name"],
            region=doc["region"],
            earliest_date=int(doc["earliest_date"]),
            sources=tuple(doc.get("sources", ())),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "region": self.region,
            "earliest_date": self.earliest_date,
            "period": self.period,
            "sources": list(self.sources),
        }


@dataclass(frozen=True)
class MathProfile:
    tags: tuple  # sorted (tag, multiplicity) pairs

    def as_counter(self) -> Counter:
        return Counter(dict(self.tags))

    def __contains__(self, tag: str) -> bool:
        return any(t == tag for t, _ in self.tags)


def math_profile(gd: GameDescription, library: Library | None = None) -> MathProfile:
    """Multiset of concept tags over every ludeme node in the description."""
    lib = library or gd.library
    counts: Counter = Counter()
    for node in gd.root.walk():
        schema = lib.by_keyword.get(node.keyword)
        if schema is not None:
            counts.update(schema.concept_tags)
    return MathProfile(tuple(sorted(counts.items())))


@dataclass
class CorpusEntry:
    description: GameDescription
    metadata: GameMetadata
    path: Path

    @property
    def name(self) -> str:
        return self.metadata.name

    @property
    def is_partial(self) -> bool:
        return self.description.is_partial


def packaged_corpus_dir() -> Path:
    return Path(resources.files("ludelab").joinpath("data/games"))


def load_corpus(directory=None, library: Library | None = None) -> list[CorpusEntry]:
    """Load every `.lud` plus its metadata sidecar from a directory
    (default: the corpus shipped with the package).  Equipment-only
    stubs validate in partial mode; names must be unique and must match
    their sidecar."""
    lib = library or standard_library()
    root = Path(directory) if directory is not None else packaged_corpus_dir()
    entries: list[CorpusEntry] = []
    seen: set = set()
    for path in sorted(root.glob("*.lud")):
        try:
            tree = parse(path.read_text(encoding="utf-8"))
        except ParseError as exc:
            raise type(exc)(f"{path.name}: {exc}", exc.line, exc.column) from exc
        has_rules = any(
            not isinstance(a, (int, str)) and a.keyword == "rules" for a in tree.args)
        gd = validate(tree, lib, partial=not has_rules)
        sidecar = path.with_suffix("").with_suffix(".meta.json") \
            if path.name.endswith(".meta.json") else path.with_name(path.stem + ".meta.json")
        if not sidecar.exists():
            raise MetadataMismatch(f"{path.name}: missing sidecar {sidecar.name}")
        meta = GameMetadata.from_json(sidecar.read_text(encoding="utf-8"))
        if meta.name != gd.name:
            raise MetadataMismatch(
                f"{path.name}: sidecar names {meta.name!r} but description is {gd.name!r}")
        if meta.name in seen:
            raise DuplicateName(f"duplicate game name {meta.name!r}")
        seen.add(meta.name)
        entries.append(CorpusEntry(gd, meta, path))
    return entries


def corpus_entry(name: str, directory=None) -> CorpusEntry:
    for entry in load_corpus(directory):
        if entry.name == name:
            return entry
    raise KeyError(name)
