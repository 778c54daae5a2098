"""Exhaustive enumeration and classification of digit sets for small orders.

The dihedral symmetries of the square preserve every classification field,
so the pipeline runs once per canonical representative and the result is
shared across the orbit.  Work is sharded over sorted canonical classes
with a deterministic merge: any degree of parallelism produces
byte-identical reports.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing
from dataclasses import dataclass
from itertools import combinations

from .core import DigitSet
from .classify import Classification, classify


def dihedral_images(D: DigitSet) -> tuple:
    """The 8 images of the digit set under the symmetries of the grid."""
    n = D.n
    t = n - 1
    transforms = (
        lambda x, y: (x, y),
        lambda x, y: (t - y, x),
        lambda x, y: (t - x, t - y),
        lambda x, y: (y, t - x),
        lambda x, y: (t - x, y),
        lambda x, y: (x, t - y),
        lambda x, y: (y, x),
        lambda x, y: (t - y, t - x),
    )
    return tuple(
        DigitSet(n, tuple(f(x, y) for x, y in D.digits)) for f in transforms
    )


def canonicalize(D: DigitSet) -> DigitSet:
    """Lexicographic minimum over the 8 dihedral images."""
    return min(dihedral_images(D), key=lambda img: img.digits)


def orbit_size(D: DigitSet) -> int:
    return len({img.digits for img in dihedral_images(D)})


@dataclass(frozen=True)
class CensusRecord:
    n: int
    m: int
    digits: DigitSet
    canonical: DigitSet
    orbit: int
    connected: bool
    dendrite: bool
    boundary_type: str  # "" when not a dendrite
    boundary_size: int | None
    tree_type: int | None
    max_order: int | None
    max_finite_intersection: int | None  # None = infinite
    quadruple_free: bool | None
    violations: tuple
    inconclusive: tuple


def _digits_text(D: DigitSet) -> str:
    return " ".join(f"{x},{y}" for x, y in D.digits)


def _record_from(D: DigitSet, canonical: DigitSet, orbit: int, cls: Classification) -> CensusRecord:
    boundary_type = ""
    boundary_size = None
    tree_type = None
    max_order = None
    if cls.dendrite:
        if cls.boundary is not None:
            boundary_type = cls.boundary.type.value
            boundary_size = len(cls.boundary.points)
        if cls.main_tree is not None:
            tree_type = cls.main_tree.shape.type_id
        if cls.orders is not None:
            max_order = cls.orders.max_order
    return CensusRecord(
        n=D.n,
        m=D.m,
        digits=D,
        canonical=canonical,
        orbit=orbit,
        connected=cls.connected,
        dendrite=cls.dendrite,
        boundary_type=boundary_type,
        boundary_size=boundary_size,
        tree_type=tree_type,
        max_order=max_order,
        max_finite_intersection=cls.max_finite_intersection,
        quadruple_free=cls.quadruple_free,
        violations=cls.violations,
        inconclusive=cls.inconclusive,
    )


def _classify_canonical(args):
    digits, n = args
    D = DigitSet(n, digits)
    cls = classify(D)
    return digits, cls


def _all_digit_sets(n: int, m_min: int, m_max: int):
    cells = [(x, y) for y in range(n) for x in range(n)]
    for m in range(m_min, m_max + 1):
        for combo in combinations(cells, m):
            yield combo


def _canonical_mask_list(n: int, m_min: int, m_max: int):
    """Canonical-class bitmasks for large grids, vectorized over chunks.

    Cells are numbered y*n + x; a subset is canonical when its mask is the
    minimum over the 8 dihedral bit permutations.
    """
    import numpy as np

    cells = n * n
    t = n - 1
    transforms = (
        lambda x, y: (x, y),
        lambda x, y: (t - y, x),
        lambda x, y: (t - x, t - y),
        lambda x, y: (y, t - x),
        lambda x, y: (t - x, y),
        lambda x, y: (x, t - y),
        lambda x, y: (y, x),
        lambda x, y: (t - y, t - x),
    )
    perms = []
    for f in transforms:
        perm = [0] * cells
        for y in range(n):
            for x in range(n):
                fx, fy = f(x, y)
                perm[y * n + x] = fy * n + fx
        perms.append(perm)

    n_bytes = (cells + 7) // 8
    tables = []
    for perm in perms[1:]:
        per_byte = []
        for byte_pos in range(n_bytes):
            table = np.zeros(256, dtype=np.int64)
            for b in range(256):
                out = 0
                for j in range(8):
                    if b >> j & 1:
                        src = byte_pos * 8 + j
                        if src < cells:
                            out |= 1 << perm[src]
                table[b] = out
            per_byte.append(table)
        tables.append(per_byte)

    out_masks = []
    chunk = 1 << 20
    for start in range(0, 1 << cells, chunk):
        masks = np.arange(start, min(start + chunk, 1 << cells), dtype=np.int64)
        pop = np.zeros(len(masks), dtype=np.int64)
        for byte_pos in range(n_bytes):
            pop += np.unpackbits(
                ((masks >> (8 * byte_pos)) & 0xFF).astype(np.uint8)
            ).reshape(-1, 8).sum(axis=1)
        keep = (pop >= m_min) & (pop <= m_max)
        masks = masks[keep]
        best = masks.copy()
        for per_byte in tables:
            img = np.zeros(len(masks), dtype=np.int64)
            for byte_pos, table in enumerate(per_byte):
                img |= table[((masks >> (8 * byte_pos)) & 0xFF).astype(np.int64)]
            np.minimum(best, img, out=best)
        out_masks.extend(int(v) for v in masks[best == masks])
    return out_masks


def _mask_digits(mask: int, n: int) -> tuple:
    return tuple(((i % n), (i // n)) for i in range(n * n) if mask >> i & 1)


def enumerate_census(
    n: int,
    m_min: int = 2,
    m_max: int | None = None,
    dendrites_only: bool = False,
    jobs: int = 1,
    progress=None,
) -> list:
    """Classify every digit set of order n; one record per digit set.

    Classification runs once per canonical dihedral class; orbit members
    share the result.  Records come out in a fixed order (set size,
    canonical form, own digits) regardless of `jobs`.  Order 5 is supported
    only with dendrites_only=True: its 2^25 subsets are enumerated and
    reduced, but emitting 33 million rows is out of budget.
    """
    if n not in (2, 3, 4, 5):
        raise ValueError("census supports orders 2 through 5")
    if n == 5 and not dendrites_only:
        raise ValueError("the order-5 census requires dendrites_only=True")
    if m_max is None:
        m_max = n * n - 1
    m_min = max(2, m_min)
    m_max = min(n * n - 1, m_max)

    if n <= 4:
        work = sorted(
            {canonicalize(DigitSet(n, combo)).digits for combo in _all_digit_sets(n, m_min, m_max)}
        )
    else:
        work = sorted(
            _mask_digits(mask, n) for mask in _canonical_mask_list(n, m_min, m_max)
        )

    results = {}
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            it = pool.imap_unordered(
                _classify_canonical, ((digits, n) for digits in work), chunksize=64
            )
            for i, (digits, cls) in enumerate(it):
                if not dendrites_only or cls.dendrite:
                    results[digits] = cls
                if progress and (i + 1) % 1024 == 0:
                    progress(i + 1, len(work))
    else:
        for i, digits in enumerate(work):
            cls = classify(DigitSet(n, digits))
            if not dendrites_only or cls.dendrite:
                results[digits] = cls
            if progress and (i + 1) % 1024 == 0:
                progress(i + 1, len(work))

    records = []
    for canon_digits in sorted(results):
        canon = DigitSet(n, canon_digits)
        cls = results[canon_digits]
        if dendrites_only and not cls.dendrite:
            continue
        members = sorted({img.digits for img in dihedral_images(canon)})
        for member_digits in members:
            records.append(
                _record_from(DigitSet(n, member_digits), canon, len(members), cls)
            )
    records.sort(key=lambda r: (r.m, r.canonical.digits, r.digits.digits))
    return records


CSV_COLUMNS = (
    "n",
    "m",
    "canonical",
    "connected",
    "dendrite",
    "btype",
    "boundary_size",
    "tree_type",
    "max_order",
    "max_fint",
    "quadfree",
    "orbit",
    "digits",
)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        max_fint = "infinite" if r.max_finite_intersection is None else r.max_finite_intersection
        writer.writerow(
            [
                r.n,
                r.m,
                _digits_text(r.canonical),
                _cell(r.connected),
                _cell(r.dendrite),
                r.boundary_type,
                _cell(r.boundary_size),
                _cell(r.tree_type),
                _cell(r.max_order),
                _cell(max_fint),
                _cell(r.quadruple_free),
                r.orbit,
                _digits_text(r.digits),
            ]
        )
    return buf.getvalue()


def summarize(records) -> dict:
    """Aggregate counts plus the full list of violations/inconclusive runs."""
    btypes = {}
    ttypes = {}
    orders = {}
    connected = sum(1 for r in records if r.connected)
    dendrites = sum(1 for r in records if r.dendrite)
    violations = []
    inconclusive = []
    for r in records:
        if r.dendrite:
            btypes[r.boundary_type or "?"] = btypes.get(r.boundary_type or "?", 0) + 1
            key = str(r.tree_type) if r.tree_type is not None else "?"
            ttypes[key] = ttypes.get(key, 0) + 1
            if r.max_order is not None:
                orders[str(r.max_order)] = orders.get(str(r.max_order), 0) + 1
        for v in r.violations:
            violations.append({"digits": _digits_text(r.digits), "violation": v})
        for note in r.inconclusive:
            inconclusive.append({"digits": _digits_text(r.digits), "stage": note})
    return {
        "n": records[0].n if records else None,
        "total": len(records),
        "connected": connected,
        "dendrites": dendrites,
        "boundary_types": dict(sorted(btypes.items())),
        "tree_types": dict(sorted(ttypes.items())),
        "max_order_histogram": dict(sorted(orders.items())),
        "violations": violations,
        "inconclusive": inconclusive,
    }


def write_report(records, out_dir, n: int) -> tuple:
    """Write census-n<N>.csv and census-n<N>-summary.json; return the paths."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"census-n{n}.csv")
    json_path = os.path.join(out_dir, f"census-n{n}-summary.json")
    with open(csv_path, "w", newline="") as fh:
        fh.write(records_to_csv(records))
    with open(json_path, "w") as fh:
        json.dump(summarize(records), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path
