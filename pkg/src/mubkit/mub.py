"""Orthonormal bases and complete sets of mutually unbiased bases.

Supported dimensions are the prime powers up to 13. Odd prime powers use the
Wootters-Fields quadratic-phase construction over GF(q); dimensions 2, 4 and
8 use literal tables whose entries are powers of ``i`` over ``sqrt(d)``.
Every set is certified numerically when it is built or loaded.
"""

import cmath
import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import DomainError, FormatError, IntegrityError, NoConstructionError, ShapeError
from .galois import f_enumerate, f_trace, field_build

ORTHONORMAL_TOL = 1e-12
UNBIASED_TOL = 1e-10

SUPPORTED_DIMS = (2, 3, 4, 5, 7, 8, 9, 11, 13)
_PRIME_POWERS = {3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2), 11: (11, 1), 13: (13, 1)}

# Exponents k of i^k, one string per vector, coordinate order = binary index
# with bit j as qubit j. Built from binary symmetric matrices with pairwise
# nonsingular differences; scripts/gen_char2_tables.py regenerates them.
_CHAR2_TABLES = {
    2: (
        ("00", "02"),
        ("01", "03"),
    ),
    4: (
        ("0000", "0202", "0022", "0220"),
        ("0013", "0211", "0031", "0233"),
        ("0112", "0310", "0130", "0332"),
        ("0103", "0301", "0121", "0323"),
    ),
    8: (
        ("00000000", "02020202", "00220022", "02200220", "00002222", "02022020", "00222200", "02202002"),
        ("00110213", "02130011", "00330231", "02310033", "00112031", "02132233", "00332013", "02312211"),
        ("00131120", "02111322", "00311102", "02331300", "00133302", "02113100", "00313320", "02333122"),
        ("00021311", "02001113", "00201333", "02221131", "00023133", "02003331", "00203111", "02223313"),
        ("01011230", "03031032", "01231212", "03211010", "01013012", "03033210", "01233030", "03213232"),
        ("01121003", "03101201", "01301021", "03321223", "01123221", "03103023", "01303203", "03323001"),
        ("01100132", "03120330", "01320110", "03300312", "01102310", "03122112", "01322332", "03302130"),
        ("01030323", "03010121", "01210301", "03230103", "01032101", "03012303", "01212123", "03232321"),
    ),
}
_I_POWERS = np.array([1, 1j, -1, -1j])
_PAULI_LABELS = ("pauli-x", "pauli-y")


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """``d`` orthonormal vectors stored as the rows of a ``(d, d)`` array."""

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = _frozen(self.vectors)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ShapeError(f"basis must be a (d, d) array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise IntegrityError(f"basis {self.label!r} has non-finite components")
        object.__setattr__(self, "vectors", v)
        dev = verify_orthonormal(v)
        if dev > ORTHONORMAL_TOL:
            raise IntegrityError(
                f"basis {self.label!r} is not orthonormal: deviation {dev:.3e} > {ORTHONORMAL_TOL:.0e}"
            )

    @property
    def d(self):
        return self.vectors.shape[0]

    def projectors(self):
        """Rank-one projectors ``|v_i><v_i|`` stacked on axis 0."""
        return np.einsum("ia,ib->iab", self.vectors, self.vectors.conj())

    def __eq__(self, other):
        return (
            isinstance(other, OrthonormalBasis)
            and self.label == other.label
            and np.array_equal(self.vectors, other.vectors)
        )


@dataclass(frozen=True, eq=False)
class MubSet:
    """Pairwise mutually unbiased bases of a common dimension."""

    bases: tuple
    complete: bool = field(init=False)

    def __post_init__(self):
        bases = tuple(self.bases)
        if not bases:
            raise ShapeError("a MubSet needs at least one basis")
        d = bases[0].d
        if any(b.d != d for b in bases):
            raise ShapeError(f"bases have mixed dimensions {[b.d for b in bases]}")
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "complete", len(bases) == d + 1)
        for (i, b1), (j, b2) in combinations(enumerate(bases), 2):
            dev = verify_unbiased(b1, b2)
            if dev > UNBIASED_TOL:
                raise IntegrityError(
                    f"bases {i} ({b1.label}) and {j} ({b2.label}) are not unbiased: "
                    f"deviation {dev:.3e} > {UNBIASED_TOL:.0e}"
                )

    @property
    def d(self):
        return self.bases[0].d

    @property
    def labels(self):
        return [b.label for b in self.bases]

    def __len__(self):
        return len(self.bases)

    def __iter__(self):
        return iter(self.bases)

    def __getitem__(self, k):
        return self.bases[k]

    def __eq__(self, other):
        return isinstance(other, MubSet) and self.bases == other.bases


def verify_orthonormal(b):
    """Max entry of ``|<v_i|v_j> - delta_ij|``; accepts a basis or a raw row array."""
    v = b.vectors if isinstance(b, OrthonormalBasis) else np.asarray(b, dtype=np.complex128)
    gram = v.conj() @ v.T
    return float(np.max(np.abs(gram - np.eye(v.shape[0]))))


def verify_unbiased(b1, b2):
    """Max over ``(i, j)`` of ``| |<i|j>|^2 - 1/d |``."""
    v1 = b1.vectors if isinstance(b1, OrthonormalBasis) else np.asarray(b1, dtype=np.complex128)
    v2 = b2.vectors if isinstance(b2, OrthonormalBasis) else np.asarray(b2, dtype=np.complex128)
    if v1.shape != v2.shape:
        raise ShapeError(f"basis shapes differ: {v1.shape} vs {v2.shape}")
    overlaps = np.abs(v1.conj() @ v2.T) ** 2
    return float(np.max(np.abs(overlaps - 1.0 / v1.shape[0])))


def computational_basis(d):
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d}")
    return OrthonormalBasis(np.eye(d), label="computational")


def _rephase(vectors):
    """Rotate each row so its first nonzero component is real and positive."""
    out = vectors.copy()
    for row in out:
        k = np.flatnonzero(np.abs(row) > 1e-15)[0]
        row *= abs(row[k]) / row[k]
    return out


def _wootters_fields(d):
    p, n = _PRIME_POWERS[d]
    gf = field_build(p, n)
    elements = f_enumerate(gf)
    omega = cmath.exp(2j * math.pi / p)
    scale = 1.0 / math.sqrt(d)
    bases = []
    for a in elements:
        quad = [a * x * x for x in elements]
        vecs = np.array(
            [[scale * omega ** f_trace(qx + b * x) for qx, x in zip(quad, elements)] for b in elements]
        )
        bases.append(OrthonormalBasis(_rephase(vecs), label=f"WF-a={a}"))
    return bases


def _table_bases(d):
    scale = 1.0 / math.sqrt(d)
    bases = []
    for k, table in enumerate(_CHAR2_TABLES[d]):
        vecs = np.array([[_I_POWERS[int(ch)] for ch in row] for row in table]) * scale
        label = _PAULI_LABELS[k] if d == 2 else f"table-{k}"
        bases.append(OrthonormalBasis(_rephase(vecs), label=label))
    return bases


def build_full_mub_set(d):
    """Certified complete set of ``d + 1`` MUBs, computational basis first.

    Raises
    ------
    NoConstructionError
        If ``d`` is not one of :data:`SUPPORTED_DIMS`.
    """
    if d not in SUPPORTED_DIMS:
        raise NoConstructionError(d)
    constructed = _wootters_fields(d) if d in _PRIME_POWERS else _table_bases(d)
    ms = MubSet((computational_basis(d), *constructed))
    if not ms.complete:
        raise IntegrityError(f"construction produced {len(ms)} bases, expected {d + 1}")
    return ms


def mubset_to_dict(ms):
    return {
        "d": ms.d,
        "bases": [[[[float(z.real), float(z.imag)] for z in vec] for vec in b.vectors] for b in ms.bases],
        "labels": ms.labels,
    }


def save_bases(ms, path):
    Path(path).write_text(json.dumps(mubset_to_dict(ms), indent=1) + "\n", encoding="utf-8")


def _parse_complex_rows(rows, d, where):
    if not isinstance(rows, list) or len(rows) != d:
        raise FormatError(f"{where}: expected a list of {d} rows")
    out = np.empty((d, d), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise FormatError(f"{where}[{i}]: expected {d} complex entries")
        for j, z in enumerate(row):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise FormatError(f"{where}[{i}][{j}]: expected [re, im], got {z!r}")
            out[i, j] = complex(z[0], z[1])
    return out


def _load_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def mubset_from_dict(data, source="<dict>"):
    if not isinstance(data, dict):
        raise FormatError(f"{source}: top level must be an object")
    d = data.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise FormatError(f"{source}: field 'd' must be an integer >= 2, got {d!r}")
    raw = data.get("bases")
    if not isinstance(raw, list) or not raw:
        raise FormatError(f"{source}: field 'bases' must be a non-empty list")
    labels = data.get("labels", [""] * len(raw))
    if not isinstance(labels, list) or len(labels) != len(raw) or not all(isinstance(s, str) for s in labels):
        raise FormatError(f"{source}: field 'labels' must be {len(raw)} strings")
    bases = []
    for k, (rows, label) in enumerate(zip(raw, labels)):
        vecs = _parse_complex_rows(rows, d, f"{source}: bases[{k}]")
        try:
            bases.append(OrthonormalBasis(vecs, label=label))
        except IntegrityError as exc:
            raise IntegrityError(f"{source}: bases[{k}]: {exc}") from exc
    try:
        return MubSet(tuple(bases))
    except IntegrityError as exc:
        raise IntegrityError(f"{source}: {exc}") from exc


def load_bases(path):
    """Load and re-certify a basis file written by :func:`save_bases`."""
    return mubset_from_dict(_load_json(path), source=str(path))
