"""Result persistence: bit-stable CSV/JSON writers and the lattice cache.

Output contract: fixed column order, floats printed with 17 significant
digits (%.17g round-trips float64 exactly), newline-terminated rows.  The
JSON emitter is a small recursive serializer so that float formatting and
dict key order are pinned rather than left to library defaults.

The lattice-count cache is an append-only text file of lines

    <x> <TAB> <count> <TAB> <crc32 of "x:count" in hex>

behind a header line.  A corrupted line triggers a rebuild with a warning
(the valid prefix is kept), never silent reuse.
"""

from __future__ import annotations

import os
import warnings
import zlib
from typing import Iterable, Sequence

from latticelab.error_terms import lattice_count

__all__ = [
    "format_float",
    "format_value",
    "write_csv",
    "read_csv",
    "dumps_json",
    "write_json",
    "LatticeCountCache",
    "CacheWarning",
]

CACHE_HEADER = "# latticelab lattice-count cache v1"


class CacheWarning(UserWarning):
    pass


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


def dumps_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, %.17g floats.

    Schema of report files: an object of scalars, arrays, and nested
    objects built from str/int/float/bool/None only.
    """
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        import json as _json

        return _json.dumps(obj)
    if isinstance(obj, dict):
        items = [
            f'{pad}  {dumps_json(str(k))}: {dumps_json(v, indent + 2)}'
            for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))
        ]
        if not items:
            return "{}"
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [f"{pad}  {dumps_json(v, indent + 2)}" for v in obj]
        if not items:
            return "[]"
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"unsupported JSON value of type {type(obj)!r}")


def write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_json(obj) + "\n")


def _line_crc(x: int, count: int) -> str:
    return format(zlib.crc32(f"{x}:{count}".encode()), "08x")


class LatticeCountCache:
    """Append-only key/value store of exact lattice counts, keyed by x."""

    def __init__(self, path: str):
        self.path = path
        self._data: dict[int, int] = {}
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        good: list[tuple[int, int]] = []
        corrupted = False
        with open(self.path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if lines and lines[0] != CACHE_HEADER:
            corrupted = True
            lines = []
        for ln in lines[1:]:
            parts = ln.split("\t")
            if len(parts) != 3:
                corrupted = True
                break
            try:
                x, count = int(parts[0]), int(parts[1])
            except ValueError:
                corrupted = True
                break
            if _line_crc(x, count) != parts[2]:
                corrupted = True
                break
            good.append((x, count))
        self._data = dict(good)
        if corrupted:
            warnings.warn(
                f"cache file {self.path} is corrupted; rebuilding from the "
                f"{len(good)} valid entries",
                CacheWarning,
            )
            self._rewrite()

    def _rewrite(self) -> None:
        with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CACHE_HEADER + "\n")
            for x in sorted(self._data):
                c = self._data[x]
                fh.write(f"{x}\t{c}\t{_line_crc(x, c)}\n")

    def _append(self, x: int, count: int) -> None:
        new_file = not os.path.exists(self.path)
        with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            if new_file:
                fh.write(CACHE_HEADER + "\n")
            fh.write(f"{x}\t{count}\t{_line_crc(x, count)}\n")

    def get(self, x: int) -> int:
        if x in self._data:
            return self._data[x]
        count = lattice_count(x)
        self._data[x] = count
        self._append(x, count)
        return count

    def __len__(self) -> int:
        return len(self._data)

    def spot_check(self, rng, k: int = 10) -> bool:
        """Recompute up to k random cached keys; mismatch means the cache
        lied and is an error, not a warning."""
        keys = sorted(self._data)
        if not keys:
            return True
        idx = rng.integers(0, len(keys), size=min(k, len(keys)))
        for i in idx:
            x = keys[int(i)]
            if lattice_count(x) != self._data[x]:
                raise RuntimeError(f"cache disagrees with recomputation at x={x}")
        return True
