"""Text formats: cgt1 (Cayley tables), ctp1 (central-type presentations) and
aut1 (automorphisms), plus the optional on-disk cache directory.

cgt1::

    cgt1 <n>
    # <key>: <value>            (metadata, any number)
    labels <n names>            (optional)
    <n lines of n indices>
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .constructors import CTPresentation
from .errors import FormatError, NotAGroup
from .group import FiniteGroup
from .morphisms import AutomorphismMap, automorphism_from_images

CACHE_ENV = "ICAYLEY_CACHE_DIR"


def cache_dir() -> Path | None:
    """Directory named by $ICAYLEY_CACHE_DIR, created on demand; None if unset."""
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line:
            yield lineno, line


# cgt1 ------------------------------------------------------------------------------------


def dumps_group(G: FiniteGroup) -> str:
    out = [f"cgt1 {G.n}"]
    meta = dict(G.meta)
    meta.setdefault("gens", " ".join(map(str, G.gens)))
    for key in sorted(meta):
        value = str(meta[key])
        if "\n" in value or ":" in key:
            raise FormatError(f"metadata {key!r} cannot be written on one line", 1)
        out.append(f"# {key}: {value}")
    if G.labels is not None:
        if any(not lab or any(c.isspace() for c in lab) for lab in G.labels):
            raise FormatError("labels must be non-empty and free of whitespace", 2)
        out.append("labels " + " ".join(G.labels))
    width = len(str(G.n - 1))
    fmt = f"{{:>{width}}}" if G.n > 1 else "{}"
    out.extend(" ".join(fmt.format(v) for v in row) for row in G.table.tolist())
    return "\n".join(out) + "\n"


def loads_group(text: str) -> FiniteGroup:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty file", 1)
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "cgt1" or not parts[1].isdigit():
        raise FormatError("expected header 'cgt1 <n>'", lineno)
    n = int(parts[1])
    meta: dict[str, str] = {}
    labels = None
    rows: list[list[int]] = []
    row_lines: list[int] = []
    for lineno, line in lines[1:]:
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep and not rows:
                meta[key.strip()] = value.strip()
            continue
        if line.startswith("labels"):
            if rows or labels is not None:
                raise FormatError("labels line must precede the table", lineno)
            labels = line.split()[1:]
            if len(labels) != n:
                raise FormatError(f"expected {n} labels, found {len(labels)}", lineno)
            continue
        try:
            row = [int(v) for v in line.split()]
        except ValueError:
            raise FormatError("non-integer entry in table row", lineno) from None
        if len(row) != n:
            raise FormatError(f"expected {n} entries, found {len(row)}", lineno)
        if min(row) < 0 or max(row) >= n:
            raise FormatError(f"entry out of range 0..{n - 1}", lineno)
        if len(set(row)) != n:
            raise FormatError("row is not a permutation (Latin square check)", lineno)
        rows.append(row)
        row_lines.append(lineno)
    if len(rows) != n:
        raise FormatError(f"expected {n} table rows, found {len(rows)}", lines[-1][0])
    table = np.asarray(rows, dtype=np.int64)
    for c in range(n):
        col = table[:, c]
        if len(np.unique(col)) != n:
            seen = set()
            for i, v in enumerate(col.tolist()):
                if v in seen:
                    raise FormatError(f"column {c} repeats {v} (Latin square check)", row_lines[i])
                seen.add(v)
    gens = meta.pop("gens", None)
    gen_list = [int(g) for g in gens.split()] if gens else None
    try:
        return FiniteGroup.build(table, gens=gen_list, labels=labels, meta=meta)
    except NotAGroup as err:
        raise FormatError(str(err), row_lines[0]) from err


def save_group(G: FiniteGroup, path) -> None:
    Path(path).write_text(dumps_group(G))


def load_group(path) -> FiniteGroup:
    return loads_group(Path(path).read_text())


# ctp1 ------------------------------------------------------------------------------------


def dumps_ctp(ct: CTPresentation) -> str:
    out = [f"ctp1 p={ct.p} m={ct.m} s={ct.s}"]
    if ct.x_names is not None:
        out.append("# x: " + " ".join(ct.x_names))
    if ct.z_names is not None:
        out.append("# z: " + " ".join(ct.z_names))
    for i, v in enumerate(ct.sq, start=1):
        out.append(f"sq {i} " + " ".join(map(str, v)))
    for (i, j) in sorted(ct.comm):
        out.append(f"comm {i + 1} {j + 1} " + " ".join(map(str, ct.comm[(i, j)])))
    return "\n".join(out) + "\n"


def loads_ctp(text: str) -> CTPresentation:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty file", 1)
    lineno, head = lines[0]
    try:
        tag, *kv = head.split()
        fields = dict(item.split("=") for item in kv)
        p, m, s = int(fields["p"]), int(fields["m"]), int(fields["s"])
    except (ValueError, KeyError):
        raise FormatError("expected header 'ctp1 p=<p> m=<m> s=<s>'", lineno) from None
    if tag != "ctp1":
        raise FormatError("expected header 'ctp1 p=<p> m=<m> s=<s>'", lineno)
    sq: list[tuple[int, ...] | None] = [None] * m
    comm: dict[tuple[int, int], tuple[int, ...]] = {}
    names: dict[str, tuple[str, ...]] = {}
    for lineno, line in lines[1:]:
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            names[key.strip()] = tuple(value.split())
            continue
        parts = line.split()
        try:
            if parts[0] == "sq":
                i = int(parts[1]) - 1
                vec = tuple(int(v) for v in parts[2:])
                if not 0 <= i < m or len(vec) != s:
                    raise ValueError
                sq[i] = vec
            elif parts[0] == "comm":
                i, j = int(parts[1]) - 1, int(parts[2]) - 1
                vec = tuple(int(v) for v in parts[3:])
                if not 0 <= i < j < m or len(vec) != s:
                    raise ValueError
                comm[(i, j)] = vec
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise FormatError(f"bad presentation line {line!r}", lineno) from None
    if any(v is None for v in sq):
        raise FormatError("missing sq line", lines[-1][0])
    return CTPresentation(p, m, s, tuple(sq), comm, names.get("x"), names.get("z"))


def save_ctp(ct: CTPresentation, path) -> None:
    Path(path).write_text(dumps_ctp(ct))


def load_ctp(path) -> CTPresentation:
    return loads_ctp(Path(path).read_text())


# aut1 ------------------------------------------------------------------------------------


def dumps_aut(phi: AutomorphismMap) -> str:
    return f"aut1 {phi.group.n}\n" + " ".join(map(str, phi.perm.tolist())) + "\n"


def loads_aut(text: str, G: FiniteGroup) -> AutomorphismMap:
    """Parse an aut1 image list or a ``gens: i1 i2 -> j1 j2`` line for G."""
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty file", 1)
    lineno, head = lines[0]
    if head.startswith("gens:"):
        src, arrow, dst = head[5:].partition("->")
        if not arrow:
            raise FormatError("expected 'gens: i1 ... -> j1 ...'", lineno)
        return automorphism_from_images(G, [int(v) for v in src.split()], [int(v) for v in dst.split()])
    parts = head.split()
    if len(parts) != 2 or parts[0] != "aut1" or int(parts[1]) != G.n:
        raise FormatError(f"expected header 'aut1 {G.n}'", lineno)
    if len(lines) < 2:
        raise FormatError("missing image line", lineno)
    lineno, body = lines[1]
    perm = [int(v) for v in body.split()]
    if len(perm) != G.n:
        raise FormatError(f"expected {G.n} images, found {len(perm)}", lineno)
    return AutomorphismMap(G, perm)


def save_aut(phi: AutomorphismMap, path) -> None:
    Path(path).write_text(dumps_aut(phi))


def load_aut(path, G: FiniteGroup) -> AutomorphismMap:
    return loads_aut(Path(path).read_text(), G)


__all__ = [
    "dumps_group", "loads_group", "save_group", "load_group",
    "dumps_ctp", "loads_ctp", "save_ctp", "load_ctp",
    "dumps_aut", "loads_aut", "save_aut", "load_aut", "cache_dir", "CACHE_ENV",
]
