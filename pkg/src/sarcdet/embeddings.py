"""Feature construction: GloVe mean-pooled sentence vectors or precomputed
transformer vectors, with the context block concatenated before the response
block.

Two vector sources are supported. The GloVe path loads a plain-text table
(`token v1 ... vdim` per line) and mean-pools token vectors per sentence.
The precomputed path ingests an interchange file produced by the companion
extractor tool: a `dim=... mode=...` header followed by one line per vector,
`<record-key> <C|R> f1 ... fK`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import FormatError, ValidationError
from .preprocess import collapse_runs


class Layout(str, Enum):
    CONTEXT_THEN_RESPONSE = "context_then_response"
    RESPONSE_ONLY = "response_only"


class Mode(str, Enum):
    POOLED = "POOLED"
    SEQUENCE = "SEQUENCE"


@dataclass
class EmbeddingTable:
    dim: int
    vocab: dict  # token -> np.ndarray of shape (dim,)
    duplicate_count: int = 0


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    layout: Layout


@dataclass
class EmbedStats:
    """Per-run pooling statistics, mutated in place by embed_sentence."""

    total_tokens: int = 0
    oov_tokens: int = 0
    fallback_hits: int = 0
    empty_sentences: int = 0

    def as_dict(self) -> dict:
        return {
            "total_tokens": self.total_tokens,
            "oov_tokens": self.oov_tokens,
            "fallback_hits": self.fallback_hits,
            "empty_sentences": self.empty_sentences,
        }


@dataclass
class PrecomputedStore:
    dim: int
    mode: Mode
    seq_len: int | None
    entries: dict = field(default_factory=dict)  # key -> (context_vec, response_vec)

    @property
    def field_dim(self) -> int:
        """Length of each stored vector: dim, or dim*seq_len in SEQUENCE mode."""
        if self.mode is Mode.SEQUENCE:
            return self.dim * self.seq_len
        return self.dim


def load_glove(path) -> EmbeddingTable:
    """Parse a GloVe text file; dim is inferred from the first line.

    Duplicate tokens keep the last definition and are tallied with a warning.
    Arity or float errors name the offending 1-based line.
    """
    vocab = {}
    dim = None
    dupes = 0
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split(" ")
            token, comps = parts[0], parts[1:]
            if dim is None:
                if len(comps) == 0:
                    raise FormatError(f"{path}: line {lineno}: no vector components")
                dim = len(comps)
            if len(comps) != dim:
                raise FormatError(
                    f"{path}: line {lineno}: expected {dim} components, got {len(comps)}"
                )
            try:
                vec = np.array([float(c) for c in comps], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: unparsable float") from exc
            if not np.all(np.isfinite(vec)):
                raise FormatError(f"{path}: line {lineno}: non-finite component")
            if token in vocab:
                dupes += 1
            vocab[token] = vec
    if dim is None:
        raise FormatError(f"{path}: empty file, no dimension inferable")
    if dupes:
        warnings.warn(f"{path}: {dupes} duplicate token(s), last definition wins")
    return EmbeddingTable(dim=dim, vocab=vocab, duplicate_count=dupes)


def save_glove(table: EmbeddingTable, path) -> None:
    """Re-emit a table in the same text format with round-trip float precision."""
    with open(path, "w", encoding="utf-8") as f:
        for token, vec in table.vocab.items():
            comps = " ".join(repr(float(v)) for v in vec)
            f.write(f"{token} {comps}\n")


def _lookup(token: str, table: EmbeddingTable):
    """Vocabulary lookup with the elongation fallback: a token that misses is
    retried with every character run collapsed to length 1."""
    vec = table.vocab.get(token)
    if vec is not None:
        return vec, False
    collapsed = collapse_runs(token, 1)
    if collapsed != token:
        vec = table.vocab.get(collapsed)
        if vec is not None:
            return vec, True
    return None, False


def embed_sentence(tokens, table: EmbeddingTable, stats: EmbedStats | None = None) -> np.ndarray:
    """Mean of the in-vocabulary token vectors; all-OOV gives the zero vector."""
    hits = []
    oov = 0
    fallbacks = 0
    for tok in tokens:
        vec, fell_back = _lookup(tok, table)
        if vec is None:
            oov += 1
        else:
            hits.append(vec)
            fallbacks += int(fell_back)
    if stats is not None:
        stats.total_tokens += len(tokens)
        stats.oov_tokens += oov
        stats.fallback_hits += fallbacks
        stats.empty_sentences += int(not hits)
    if not hits:
        return np.zeros(table.dim, dtype=np.float64)
    return np.mean(np.stack(hits), axis=0)


def embed_context(context, table: EmbeddingTable, stats: EmbedStats | None = None) -> np.ndarray:
    """Append all context turns into one token sequence, then pool."""
    joined = [tok for turn in context for tok in turn]
    return embed_sentence(joined, table, stats)


def make_feature(context_vec, response_vec, layout: Layout) -> FeatureVector:
    """Concatenate context before response, or take the response block alone."""
    response_vec = np.asarray(response_vec, dtype=np.float64)
    if layout is Layout.RESPONSE_ONLY:
        return FeatureVector(values=response_vec.copy(), layout=layout)
    context_vec = np.asarray(context_vec, dtype=np.float64)
    if context_vec.shape != response_vec.shape:
        raise ValidationError(
            f"context/response dimension mismatch: {context_vec.shape[0]} vs {response_vec.shape[0]}"
        )
    return FeatureVector(values=np.concatenate([context_vec, response_vec]), layout=layout)


def _parse_header(line: str, path) -> tuple[int, Mode, int | None]:
    fields = {}
    for piece in line.split():
        if "=" not in piece:
            raise FormatError(f"{path}: malformed header field {piece!r}")
        k, v = piece.split("=", 1)
        fields[k] = v
    if "dim" not in fields or "mode" not in fields:
        raise FormatError(f"{path}: header must declare dim and mode")
    try:
        dim = int(fields["dim"])
    except ValueError:
        raise FormatError(f"{path}: bad dim {fields['dim']!r}") from None
    if dim <= 0:
        raise FormatError(f"{path}: dim must be positive")
    try:
        mode = Mode(fields["mode"])
    except ValueError:
        raise FormatError(f"{path}: unknown mode {fields['mode']!r}") from None
    seq_len = None
    if mode is Mode.SEQUENCE:
        if "len" not in fields:
            raise FormatError(f"{path}: SEQUENCE header requires len")
        seq_len = int(fields["len"])
        if seq_len < 1:
            raise FormatError(f"{path}: len must be >= 1")
    elif "len" in fields:
        raise FormatError(f"{path}: len is only valid with mode=SEQUENCE")
    return dim, mode, seq_len


def load_precomputed(path) -> PrecomputedStore:
    """Read an interchange file into a key -> (context, response) store.

    Every key must carry exactly one C and one R vector of the advertised
    length; violations raise FormatError naming the key or line.
    """
    with open(path, encoding="utf-8") as f:
        header = f.readline()
        if not header.strip():
            raise FormatError(f"{path}: missing header line")
        dim, mode, seq_len = _parse_header(header.strip(), path)
        expected = dim * seq_len if mode is Mode.SEQUENCE else dim
        halves = {}  # key -> {"C": vec, "R": vec}
        for lineno, raw in enumerate(f, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) < 3:
                raise FormatError(f"{path}: line {lineno}: too few fields")
            key, which, comps = parts[0], parts[1], parts[2:]
            if which not in ("C", "R"):
                raise FormatError(f"{path}: line {lineno}: field must be C or R, got {which!r}")
            if len(comps) != expected:
                raise FormatError(
                    f"{path}: line {lineno}: expected {expected} components, got {len(comps)}"
                )
            try:
                vec = np.array([float(c) for c in comps], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: unparsable float") from exc
            slot = halves.setdefault(key, {})
            if which in slot:
                raise FormatError(f"{path}: duplicate {which} vector for key {key!r}")
            slot[which] = vec
    entries = {}
    for key, slot in halves.items():
        if "C" not in slot:
            raise FormatError(f"{path}: missing C vector for {key}")
        if "R" not in slot:
            raise FormatError(f"{path}: missing R vector for {key}")
        entries[key] = (slot["C"], slot["R"])
    return PrecomputedStore(dim=dim, mode=mode, seq_len=seq_len, entries=entries)


def save_precomputed(store: PrecomputedStore, path) -> None:
    """Write a store back out in the interchange format (test/tool support)."""
    with open(path, "w", encoding="utf-8") as f:
        if store.mode is Mode.SEQUENCE:
            f.write(f"dim={store.dim} mode=SEQUENCE len={store.seq_len}\n")
        else:
            f.write(f"dim={store.dim} mode=POOLED\n")
        for key, (cvec, rvec) in store.entries.items():
            for which, vec in (("C", cvec), ("R", rvec)):
                comps = " ".join(repr(float(v)) for v in vec)
                f.write(f"{key} {which} {comps}\n")


def pad_sequence(seq, target_len: int, pad=None, dim: int | None = None) -> np.ndarray:
    """Truncate or right-pad a list of token vectors to target_len rows, then
    flatten row-major to a single vector of length target_len * dim."""
    if target_len < 1:
        raise ValidationError("target_len must be >= 1")
    if pad is not None:
        pad = np.asarray(pad, dtype=np.float64)
        dim = pad.shape[0] if dim is None else dim
        if pad.shape[0] != dim:
            raise ValidationError(f"pad has length {pad.shape[0]}, expected {dim}")
    if dim is None:
        if not seq:
            raise ValidationError("cannot infer dim from an empty sequence; pass pad or dim")
        dim = len(seq[0])
    if pad is None:
        pad = np.zeros(dim, dtype=np.float64)
    rows = []
    for i, el in enumerate(seq):
        el = np.asarray(el, dtype=np.float64)
        if el.shape != (dim,):
            raise ValidationError(f"sequence element {i} has length {el.shape[0]}, expected {dim}")
        rows.append(el)
    rows = rows[:target_len]
    while len(rows) < target_len:
        rows.append(pad)
    return np.concatenate(rows)


def save_features(path, keys, matrix) -> None:
    """Persist a feature matrix as `dim=<d>` header plus one `<key> f1..fd`
    line per row, aligned with keys."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or len(keys) != matrix.shape[0]:
        raise ValidationError("keys and matrix rows must align")
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"dim={matrix.shape[1]}\n")
        for key, row in zip(keys, matrix):
            comps = " ".join(repr(float(v)) for v in row)
            f.write(f"{key} {comps}\n")


def load_features(path) -> tuple[list, np.ndarray]:
    """Inverse of save_features; returns (keys, matrix) in file order."""
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        if not header.startswith("dim="):
            raise FormatError(f"{path}: missing dim= header")
        try:
            d = int(header.split("=", 1)[1].split()[0])
        except (ValueError, IndexError):
            raise FormatError(f"{path}: bad header {header!r}") from None
        keys = []
        rows = []
        for lineno, raw in enumerate(f, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) != d + 1:
                raise FormatError(
                    f"{path}: line {lineno}: expected {d} components, got {len(parts) - 1}"
                )
            keys.append(parts[0])
            try:
                rows.append([float(c) for c in parts[1:]])
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: unparsable float") from exc
    matrix = np.array(rows, dtype=np.float64) if rows else np.zeros((0, d))
    return keys, matrix
