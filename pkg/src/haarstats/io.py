"""Sample files, histogram CSVs, and experiment summaries.

Two sample formats are accepted:

* plain text: one bit-string of '0'/'1' characters per line; the string
  length is the qubit count and is inferred from the first line;
* counts document: JSON ``{"n": <int>, "counts": {"<bitstring>": <count>}}``
  with an optional ``"meta"`` object.

Bit-strings are written with qubit 0 as the leftmost character (the most
significant bit of the integer index), the same convention used by
:mod:`haarstats.partitions`.  All writers emit deterministic bytes: reruns
with identical inputs produce identical files.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import SampleFormatError
from .partitions import Partition
from .rng import RngSpec
from .states import ProbVector
from .stats import Histogram
from .xeb import SampleMeta, SampleSet

HISTOGRAM_HEADER = "x_lo,x_hi,density"


def index_to_bitstring(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def bitstring_to_index(bits: str) -> int:
    return int(bits, 2)


# ----------------------------------------------------------------------
# sample files


def _parse_text_samples(text: str) -> SampleSet:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise SampleFormatError("samples file contains no bit-strings")
    n = len(lines[0].strip())
    counts: dict[int, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or set(line) - {"0", "1"}:
            raise SampleFormatError(f"expected a '0'/'1' bit-string, got {raw!r}", line=lineno)
        if len(line) != n:
            raise SampleFormatError(
                f"bit-string length {len(line)} differs from first line's {n}", line=lineno)
        key = bitstring_to_index(line)
        counts[key] = counts.get(key, 0) + 1
    return SampleSet(n=n, counts=counts, total=len(lines))


def _parse_counts_document(text: str) -> SampleSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SampleFormatError(f"invalid counts document: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "counts" not in doc:
        raise SampleFormatError('counts document needs "n" and "counts" fields')
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise SampleFormatError(f'"n" must be a positive integer, got {n!r}')
    if not isinstance(doc["counts"], dict) or not doc["counts"]:
        raise SampleFormatError('"counts" must be a non-empty mapping')
    counts: dict[int, int] = {}
    total = 0
    for bits, count in doc["counts"].items():
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise SampleFormatError(f"bad bit-string key {bits!r} for n={n}")
        if not isinstance(count, int) or count < 1:
            raise SampleFormatError(f"count for {bits!r} must be a positive integer")
        counts[bitstring_to_index(bits)] = count
        total += count
    return SampleSet(n=n, counts=counts, total=total, meta=_parse_meta(doc.get("meta"), n))


def _parse_meta(doc, n: int) -> SampleMeta:
    if not doc:
        return SampleMeta()
    seed = doc.get("seed")
    rng = RngSpec(seed["master_seed"], seed.get("stream_index", 0)) if seed else None
    a_bits = doc.get("partition_a_bits")
    part = Partition(n, tuple(a_bits)) if a_bits else None
    return SampleMeta(seed=rng, lambda_claim=doc.get("lambda_claim"), partition=part)


def read_samples(path) -> SampleSet:
    """Read a samples file in either the text or counts-document format."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if not stripped:
        raise SampleFormatError("samples file is empty")
    if stripped[0] == "{":
        return _parse_counts_document(text)
    return _parse_text_samples(text)


def write_samples(samples: SampleSet, path, fmt: str = "counts") -> None:
    """Write a SampleSet as a counts document (default) or as text lines."""
    path = Path(path)
    keys = sorted(samples.counts)
    if fmt == "text":
        lines = []
        for key in keys:
            lines.extend([index_to_bitstring(key, samples.n)] * samples.counts[key])
        path.write_text("\n".join(lines) + "\n")
        return
    if fmt != "counts":
        raise ValueError(f"unknown samples format {fmt!r}")
    doc: dict = {
        "n": samples.n,
        "counts": {index_to_bitstring(k, samples.n): samples.counts[k] for k in keys},
    }
    meta = {}
    if samples.meta.seed is not None:
        meta["seed"] = {"master_seed": samples.meta.seed.master_seed,
                        "stream_index": samples.meta.seed.stream_index}
    if samples.meta.lambda_claim is not None:
        meta["lambda_claim"] = samples.meta.lambda_claim
    if samples.meta.partition is not None:
        meta["partition_a_bits"] = list(samples.meta.partition.a_bits)
    if meta:
        doc["meta"] = meta
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def empirical_prob_vector(samples: SampleSet, n_max: int = 28) -> ProbVector:
    """Relative-frequency probability vector of a sample multiset."""
    if samples.n > n_max:
        raise ValueError(f"n={samples.n} needs a 2**{samples.n} array; limit is n_max={n_max}")
    keys, counts = samples.keys_array()
    probs = np.zeros(2**samples.n)
    probs[keys] = counts / samples.total
    return ProbVector(n_qubits=samples.n, probs=probs)


# ----------------------------------------------------------------------
# histogram CSV


def write_histogram_csv(hist: Histogram, path) -> None:
    """CSV with one row per bin plus a trailing count/overflow comment."""
    rows = [HISTOGRAM_HEADER]
    for lo, hi, dens in zip(hist.edges[:-1], hist.edges[1:], hist.densities):
        rows.append(f"{lo:.12g},{hi:.12g},{dens:.12g}")
    rows.append(f"# count={hist.count} overflow={hist.overflow}")
    Path(path).write_text("\n".join(rows) + "\n")


def read_histogram_csv(path) -> Histogram:
    """Parse a histogram CSV written by :func:`write_histogram_csv`."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != HISTOGRAM_HEADER:
        raise ValueError(f"{path}: missing histogram header {HISTOGRAM_HEADER!r}")
    lows, highs, densities = [], [], []
    count = overflow = 0
    for line in lines[1:]:
        if line.startswith("#"):
            fields = dict(item.split("=") for item in line[1:].split())
            count, overflow = int(fields["count"]), int(fields["overflow"])
            continue
        lo, hi, dens = line.split(",")
        lows.append(float(lo))
        highs.append(float(hi))
        densities.append(float(dens))
    if not lows:
        raise ValueError(f"{path}: no histogram rows")
    if lows[1:] != highs[:-1]:
        raise ValueError(f"{path}: bins are not contiguous")
    edges = np.asarray(lows + highs[-1:])
    return Histogram(edges=edges, densities=np.asarray(densities),
                     count=count, overflow=overflow)


# ----------------------------------------------------------------------
# summaries


def write_summary(summary: dict, path) -> None:
    """Serialize a summary dict as stable, diffable JSON."""
    Path(path).write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
