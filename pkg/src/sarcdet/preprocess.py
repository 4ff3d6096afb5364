"""Tweet text normalization pipeline.

Six steps, applied in a fixed canonical order: tokenize (with punctuation
stripping), case folding, stopword removal, normalization (emoticons,
elongation collapse, slang), noise removal, and Porter stemming. Each step
is a pure function over a token list so subsets of the pipeline can be
run and tested in isolation.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

from .errors import ValidationError
from .porter import porter_stem

CANONICAL_STEPS = (
    "tokenize",
    "case_fold",
    "stopword_remove",
    "normalize",
    "noise_remove",
    "stem",
)

_ASCII_WORD_CHARS = set(string.ascii_letters + string.digits)


@dataclass(frozen=True)
class PipelineConfig:
    """Immutable bundle of word lists and knobs for preprocess_text."""

    stopwords: frozenset[str] = frozenset()
    slang_map: Mapping[str, str] = field(default_factory=dict)
    emoticon_map: Mapping[str, str] = field(default_factory=dict)
    steps: tuple[str, ...] = CANONICAL_STEPS
    max_repeat: int = 2

    def __post_init__(self):
        if self.max_repeat < 1:
            raise ValidationError(f"max_repeat must be >= 1, got {self.max_repeat}")
        order = [s for s in CANONICAL_STEPS if s in self.steps]
        if list(self.steps) != order or len(set(self.steps)) != len(self.steps):
            raise ValidationError(
                f"steps must be a subsequence of {CANONICAL_STEPS}, got {self.steps}"
            )
        for name, mapping in (("slang_map", self.slang_map), ("emoticon_map", self.emoticon_map)):
            for key, value in mapping.items():
                if not value.isalpha() or value != value.lower():
                    raise ValidationError(
                        f"{name} value for {key!r} must be lowercase alphabetic, got {value!r}"
                    )


def tokenize(text: str, emoticon_map: Mapping[str, str] | None = None) -> list[str]:
    """Split on whitespace and strip edge punctuation.

    Pieces that exactly match an emoticon key are kept verbatim so the
    normalize step can map them to words. A leading '#' survives the strip;
    a trailing one does not.
    """
    emoticon_map = emoticon_map or {}
    tokens = []
    for piece in text.split():
        if piece in emoticon_map:
            tokens.append(piece)
            continue
        while piece and not piece[-1].isalnum():
            piece = piece[:-1]
        while piece and not (piece[0].isalnum() or piece[0] == "#"):
            piece = piece[1:]
        if piece:
            tokens.append(piece)
    return tokens


def case_fold(tokens: Iterable[str]) -> list[str]:
    """Lowercase everything except fully-uppercase words of >= 2 letters."""
    out = []
    for tok in tokens:
        alpha = [c for c in tok if c.isalpha()]
        if len(alpha) >= 2 and all(c.isupper() for c in alpha):
            out.append(tok)
        else:
            out.append(tok.lower())
    return out


def remove_stopwords(tokens: Iterable[str], stopwords: frozenset[str]) -> list[str]:
    # matched on the lowercase form so preserved all-caps stopwords still drop
    return [t for t in tokens if t.lower() not in stopwords]


def collapse_runs(token: str, max_run: int) -> str:
    """Cap every run of one repeated character at max_run."""
    return "".join(
        ch * min(sum(1 for _ in grp), max_run) for ch, grp in itertools.groupby(token)
    )


def normalize(
    tokens: Iterable[str],
    slang_map: Mapping[str, str],
    emoticon_map: Mapping[str, str],
    max_repeat: int = 2,
) -> list[str]:
    """Map emoticons to words, collapse elongations, expand slang.

    The run-length-1 collapse is tried against the slang map before the
    max_repeat collapse so "guuud" still finds the "gud" entry.
    """
    out = []
    for tok in tokens:
        if tok in emoticon_map:
            out.append(emoticon_map[tok])
            continue
        collapsed = collapse_runs(tok, max_repeat)
        shortest = collapse_runs(tok, 1)
        if shortest != collapsed and shortest in slang_map:
            out.append(slang_map[shortest])
        else:
            out.append(slang_map.get(collapsed, collapsed))
    return out


def remove_noise(tokens: Iterable[str]) -> list[str]:
    """Delete every character outside [a-zA-Z0-9#]; '#' only survives word-initially."""
    out = []
    for tok in tokens:
        keep_hash = tok.startswith("#")
        body = "".join(c for c in tok if c in _ASCII_WORD_CHARS)
        if keep_hash and body:
            body = "#" + body
        if body:
            out.append(body)
    return out


def stem(tokens: Iterable[str]) -> list[str]:
    """Porter-stem plain lowercase words; leave hashtags, digit-bearing and
    non-lowercase tokens (preserved shouting) untouched."""
    out = []
    for tok in tokens:
        if tok.startswith("#") or any(c.isdigit() for c in tok):
            out.append(tok)
        elif tok.isascii() and tok.isalpha() and tok == tok.lower():
            out.append(porter_stem(tok))
        else:
            out.append(tok)
    return out


def preprocess_text(text: str, config: PipelineConfig) -> list[str]:
    """Run the enabled steps in canonical order."""
    enabled = set(config.steps)
    if "tokenize" in enabled:
        tokens = tokenize(text, config.emoticon_map)
    else:
        tokens = text.split()
    if "case_fold" in enabled:
        tokens = case_fold(tokens)
    if "stopword_remove" in enabled:
        tokens = remove_stopwords(tokens, config.stopwords)
    if "normalize" in enabled:
        tokens = normalize(tokens, config.slang_map, config.emoticon_map, config.max_repeat)
    if "noise_remove" in enabled:
        tokens = remove_noise(tokens)
    if "stem" in enabled:
        tokens = stem(tokens)
    return tokens


def load_wordlist(path) -> frozenset[str]:
    """One entry per line; blank lines ignored; entries lowercased."""
    with open(path, encoding="utf-8") as f:
        return frozenset(line.strip().lower() for line in f if line.strip())


def load_map(path) -> dict[str, str]:
    """key<TAB>value per line; blank lines ignored."""
    mapping = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ValidationError(f"{path}: line {lineno}: expected key<TAB>value")
            mapping[parts[0]] = parts[1]
    return mapping


def _data_path(name: str):
    return resources.files("sarcdet").joinpath("data", name)


def builtin_stopwords() -> frozenset[str]:
    return load_wordlist(_data_path("stopwords.txt"))


def builtin_slang() -> dict[str, str]:
    return load_map(_data_path("slang.tsv"))


def builtin_emoticons() -> dict[str, str]:
    return load_map(_data_path("emoticons.tsv"))


def default_config(
    stopwords_path=None,
    slang_path=None,
    emoticons_path=None,
    steps: tuple[str, ...] = CANONICAL_STEPS,
    max_repeat: int = 2,
) -> PipelineConfig:
    """Bundled word lists, with optional per-file overrides."""
    return PipelineConfig(
        stopwords=load_wordlist(stopwords_path) if stopwords_path else builtin_stopwords(),
        slang_map=load_map(slang_path) if slang_path else builtin_slang(),
        emoticon_map=load_map(emoticons_path) if emoticons_path else builtin_emoticons(),
        steps=steps,
        max_repeat=max_repeat,
    )
