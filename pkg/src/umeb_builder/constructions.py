"""
UMEB constructions on C^d (x) C^d'.

- Hole-pattern construction: a d x d' pattern ignoring one entry per row, all in
  N < d columns, yields d(d'-1) orthonormal maximally entangled states avoiding
  the ignored entries.
- Partition construction: d' = a_1 + ... + a_s + r with a_i >= d and 0 < r < d
  yields d(d'-r) states supported on the first d'-r columns.
- Row and column permutations of a whole basis, which carry the canonical
  hole-pattern basis back to the original coordinates.
- Direct sums of bases living on disjoint column blocks.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOL
from .correspondence import PureState, span_of_states
from .linalg_core import ComplexMatrix, SubspaceBasis


HOLE_MARK = "*"


def _require_dims(d: int, d_prime: int) -> None:
    if d < 2:
        raise ValueError(f"d must be >= 2 (got d={d})")
    if d >= d_prime:
        raise ValueError(f"d must be < d' (got d={d}, d'={d_prime})")


def fourier_phases(d: int) -> np.ndarray:
    """phases[n, m] = omega_d^(n m) with omega_d = exp(2 pi i / d); exponents reduced mod d."""
    exponents = np.outer(np.arange(d), np.arange(d)) % d
    return np.exp(2j * np.pi * exponents / d)


@dataclass(frozen=True)
class HolePattern:
    """One ignored (row, col) entry per row of a d x d' matrix, in N < d distinct columns."""

    d: int
    d_prime: int
    holes: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        _require_dims(self.d, self.d_prime)
        holes = tuple((int(r), int(c)) for r, c in self.holes)
        if len(holes) != self.d:
            raise ValueError(f"hole pattern needs exactly d={self.d} holes (got {len(holes)})")
        seen = set()
        for row, col in holes:
            if not 0 <= row < self.d:
                raise ValueError(f"hole row {row} out of range 0..{self.d - 1}")
            if row in seen:
                raise ValueError(f"duplicate row {row} in hole pattern")
            seen.add(row)
            if not 0 <= col < self.d_prime:
                raise ValueError(f"hole column {col} out of range 0..{self.d_prime - 1}")
        n_columns = len({col for _row, col in holes})
        if n_columns >= self.d:
            raise ValueError(f"N must be < d (got N={n_columns}, d={self.d})")
        object.__setattr__(self, "holes", tuple(sorted(holes)))

    @property
    def columns(self) -> Tuple[int, ...]:
        """Hole column of each row, indexed by row."""
        return tuple(col for _row, col in self.holes)

    @property
    def n_columns(self) -> int:
        return len(set(self.columns))

    @classmethod
    def parse(cls, d: int, d_prime: int, text: str) -> "HolePattern":
        """Parse "row:col,row:col,..."."""
        holes: List[Tuple[int, int]] = []
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            row, sep, col = item.partition(":")
            if not sep:
                raise ValueError(f"hole {item!r} must look like row:col")
            try:
                holes.append((int(row), int(col)))
            except ValueError:
                raise ValueError(f"hole {item!r} must look like row:col with integer indices") from None
        return cls(d, d_prime, tuple(holes))

    @classmethod
    def from_mask(cls, rows: Sequence[str]) -> "HolePattern":
        """
        Parse the matrix notation: one string per row, '*' on the ignored entry.

        Whitespace is ignored; every other character is a free entry.
        """
        cleaned = ["".join(row.split()) for row in rows]
        if not cleaned or not cleaned[0]:
            raise ValueError("mask must have at least one non-empty row")
        width = len(cleaned[0])
        holes = []
        for i, row in enumerate(cleaned):
            if len(row) != width:
                raise ValueError(f"mask row {i} has {len(row)} entries, expected {width}")
            if row.count(HOLE_MARK) != 1:
                raise ValueError(f"mask row {i} must contain exactly one '{HOLE_MARK}'")
            holes.append((i, row.index(HOLE_MARK)))
        return cls(len(cleaned), width, tuple(holes))

    def to_mask(self) -> Tuple[str, ...]:
        return tuple(
            "".join(HOLE_MARK if c == col else "0" for c in range(self.d_prime))
            for _row, col in self.holes
        )


@dataclass(frozen=True)
class CanonicalHoleForm:
    """
    Staircase normal form of a hole pattern.

    Canonical row i is original row row_perm[i]; canonical column c is original
    column col_perm[c]. b[i] is the canonical hole column of canonical row i.
    """

    row_perm: Tuple[int, ...]
    col_perm: Tuple[int, ...]
    b: Tuple[int, ...]
    n_columns: int


def canonicalize_holes(p: HolePattern) -> CanonicalHoleForm:
    """
    Move the holes of p into the first N columns as a staircase.

    Rows are grouped by hole column, groups ordered by first appearance in the
    original row order and rows inside a group keeping their order. Hole columns
    become 0..N-1 in that order; the remaining columns follow in original order.
    """
    columns = p.columns
    distinct: List[int] = []
    for col in columns:
        if col not in distinct:
            distinct.append(col)
    row_perm = [row for col in distinct for row in range(p.d) if columns[row] == col]
    col_perm = distinct + [c for c in range(p.d_prime) if c not in distinct]
    b = tuple(distinct.index(columns[row]) for row in row_perm)
    return CanonicalHoleForm(
        row_perm=tuple(row_perm),
        col_perm=tuple(col_perm),
        b=b,
        n_columns=len(distinct),
    )


def _require_canonical(b: Sequence[int], d_prime: int) -> None:
    d = len(b)
    if d < 2 or d >= d_prime:
        raise ValueError(f"b must have length d with 2 <= d < d' (got d={d}, d'={d_prime})")
    if b[0] != 0:
        raise ValueError(f"canonical b must start at 0 (got b_0={b[0]})")
    for i in range(d - 1):
        if b[i + 1] - b[i] not in (0, 1):
            raise ValueError(f"canonical b must step by 0 or 1 (got b_{i}={b[i]}, b_{i + 1}={b[i + 1]})")
    if b[-1] + 1 >= d:
        raise ValueError(f"N must be < d (got N={b[-1] + 1}, d={d})")


def hole_indicator(b: Sequence[int], k: int, l: int) -> int:
    """C(k, l): 1 iff l is the hole column of row k."""
    if not 0 <= k < len(b):
        raise ValueError(f"row k={k} out of range 0..{len(b) - 1}")
    return 1 if l == b[k] else 0


def t_sequence(b: Sequence[int], d_prime: int, j: int) -> Tuple[int, ...]:
    """
    Column walk of state j: t_0 = j + 1, then step one column per row, skipping a hole.

    t_m = (t_{m-1} + 1 + C(m, (t_{m-1} + 1) mod d')) mod d'.
    """
    _require_canonical(b, d_prime)
    if not 0 <= j <= d_prime - 2:
        raise ValueError(f"j={j} out of range 0..{d_prime - 2}")
    t = [j + 1]
    for m in range(1, len(b)):
        step = (t[-1] + 1) % d_prime
        t.append((t[-1] + 1 + hole_indicator(b, m, step)) % d_prime)
    return tuple(t)


@dataclass(frozen=True)
class PartitionSpec:
    """d' = a_1 + ... + a_s + r with every a_i >= d and 0 < r < d."""

    d: int
    d_prime: int
    parts: Tuple[int, ...]
    r: int

    def __post_init__(self) -> None:
        _require_dims(self.d, self.d_prime)
        parts = tuple(int(a) for a in self.parts)
        if not parts:
            raise ValueError("partition needs at least one part (s >= 1)")
        for i, a in enumerate(parts, start=1):
            if a < self.d:
                raise ValueError(f"part a_{i}={a} must be >= d={self.d}")
        if not 0 < self.r < self.d:
            raise ValueError(f"r must satisfy 0 < r < d (got r={self.r}, d={self.d})")
        if sum(parts) + self.r != self.d_prime:
            raise ValueError(
                f"sum of parts + r must equal d' (got {sum(parts)} + {self.r} != {self.d_prime})"
            )
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_parts(cls, d: int, d_prime: int, parts: Sequence[int]) -> "PartitionSpec":
        """r is whatever d' - sum(parts) leaves over."""
        return cls(d, d_prime, tuple(parts), d_prime - sum(parts))

    @property
    def offsets(self) -> Tuple[int, ...]:
        """b_j = a_1 + ... + a_j for j = 0..s-1."""
        out = [0]
        for a in self.parts[:-1]:
            out.append(out[-1] + a)
        return tuple(out)

    @property
    def member_count(self) -> int:
        return self.d * (self.d_prime - self.r)

    def describe(self) -> str:
        return "{" + ",".join(str(a) for a in self.parts) + "}+" + str(self.r)


@dataclass(frozen=True)
class Provenance:
    """How a basis was built; params hold JSON-ready values only."""

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    children: Tuple["Provenance", ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind, "params": dict(self.params)}
        if self.children:
            out["children"] = [child.to_dict() for child in self.children]
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Provenance":
        return cls(
            kind=str(data["kind"]),
            params=dict(data.get("params", {})),
            children=tuple(cls.from_dict(child) for child in data.get("children", [])),
        )


PROVENANCE_KINDS = ("theorem1", "theorem2", "composition", "fixture")


@dataclass(frozen=True, eq=False)
class BasisSet:
    """
    Ordered states on C^d (x) C^d' with their construction labels.

    Orthonormality and entanglement are properties certified by verification,
    not enforced here, so loaded documents can be checked as they are.
    """

    d: int
    d_prime: int
    states: Tuple[PureState, ...]
    labels: Tuple[Tuple[int, ...], ...]
    provenance: Provenance

    def __post_init__(self) -> None:
        states = tuple(self.states)
        labels = tuple(tuple(int(x) for x in label) for label in self.labels)
        for s in states:
            if (s.d, s.d_prime) != (self.d, self.d_prime):
                raise ValueError(
                    f"state dimensions ({s.d}, {s.d_prime}) differ from basis dimensions "
                    f"({self.d}, {self.d_prime})"
                )
        if len(labels) != len(states):
            raise ValueError(f"{len(states)} states but {len(labels)} labels")
        if len(states) > self.d * self.d_prime:
            raise ValueError(
                f"basis has {len(states)} states, more than d*d' = {self.d * self.d_prime}"
            )
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.states)

    @classmethod
    def empty(cls, d: int, d_prime: int) -> "BasisSet":
        return cls(d, d_prime, (), (), Provenance(kind="fixture", params={"name": "empty"}))

    def span(self) -> SubspaceBasis:
        return span_of_states(self.states, dims=(self.d, self.d_prime))

    def column_support(self, tol: float = DEFAULT_TOL) -> Tuple[int, ...]:
        return self.span().column_support(tol)


def _inverse(perm: Sequence[int]) -> Tuple[int, ...]:
    out = [0] * len(perm)
    for i, target in enumerate(perm):
        out[target] = i
    return tuple(out)


def permute_basis(basis: BasisSet, row_perm: Sequence[int], col_perm: Sequence[int]) -> BasisSet:
    """
    Apply A -> P A Q to every member: row i of the result is row row_perm[i],
    column c is column col_perm[c]. Labels and provenance are kept.
    """
    if sorted(row_perm) != list(range(basis.d)):
        raise ValueError(f"row_perm must be a permutation of 0..{basis.d - 1} (got {list(row_perm)})")
    if sorted(col_perm) != list(range(basis.d_prime)):
        raise ValueError(f"col_perm must be a permutation of 0..{basis.d_prime - 1} (got {list(col_perm)})")
    states = tuple(
        PureState.unchecked(
            basis.d, basis.d_prime, ComplexMatrix(s.coeffs).permuted(row_perm, col_perm).entries
        )
        for s in basis.states
    )
    return BasisSet(basis.d, basis.d_prime, states, basis.labels, basis.provenance)


def theorem1_construct(p: HolePattern, pullback: bool = True) -> BasisSet:
    """
    d(d'-1) maximally entangled states avoiding the holes of p.

    |phi'_{j,n}> = (1/sqrt d) sum_m omega_d^(n m) |m>|t_{mj}> in canonical
    coordinates, j = 0..d'-2, n = 0..d-1, ordered by (j, n). With pullback the
    canonical basis is permuted back so canonical row m and column t land on
    original row row_perm[m] and column col_perm[t]; entries at the holes are
    exact zeros.
    """
    form = canonicalize_holes(p)
    d, d_prime = p.d, p.d_prime
    phases = fourier_phases(d) / math.sqrt(d)
    rows = list(range(d))

    states: List[PureState] = []
    labels: List[Tuple[int, ...]] = []
    for j in range(d_prime - 1):
        t = t_sequence(form.b, d_prime, j)
        for n in range(d):
            coeffs = np.zeros((d, d_prime), dtype=np.complex128)
            coeffs[rows, list(t)] = phases[n]
            states.append(PureState(d, d_prime, coeffs))
            labels.append((j, n))

    holes = p.holes if pullback else tuple((m, form.b[m]) for m in range(d))
    provenance = Provenance(
        kind="theorem1",
        params={
            "holes": [list(h) for h in holes],
            "row_perm": list(form.row_perm),
            "col_perm": list(form.col_perm),
            "b": list(form.b),
            "pullback": pullback,
        },
    )
    basis = BasisSet(d, d_prime, tuple(states), tuple(labels), provenance)
    if pullback:
        basis = permute_basis(basis, _inverse(form.row_perm), _inverse(form.col_perm))
    return basis


def theorem2_construct(spec: PartitionSpec) -> BasisSet:
    """
    d(d'-r) maximally entangled states on the first d'-r columns.

    |phi_{l,j,n}> = (1/sqrt d) sum_m omega_d^(n m) |m>|b_j + ((l + m) mod a_{j+1})>,
    l = 0..a_{j+1}-1, j = 0..s-1, n = 0..d-1; ordered by (j, l, n), labelled (l, j, n).
    """
    d, d_prime = spec.d, spec.d_prime
    phases = fourier_phases(d) / math.sqrt(d)
    rows = list(range(d))

    states: List[PureState] = []
    labels: List[Tuple[int, ...]] = []
    for j, (a, offset) in enumerate(zip(spec.parts, spec.offsets)):
        for l in range(a):
            cols = [offset + (l + m) % a for m in rows]
            for n in range(d):
                coeffs = np.zeros((d, d_prime), dtype=np.complex128)
                coeffs[rows, cols] = phases[n]
                states.append(PureState(d, d_prime, coeffs))
                labels.append((l, j, n))

    provenance = Provenance(
        kind="theorem2",
        params={"parts": list(spec.parts), "r": spec.r, "offsets": list(spec.offsets)},
    )
    return BasisSet(d, d_prime, tuple(states), tuple(labels), provenance)


def _used_columns(basis: BasisSet) -> set:
    used = set()
    for s in basis.states:
        used.update(int(c) for c in np.flatnonzero(np.any(s.coeffs != 0, axis=0)))
    return used


def compose_direct_sum(
    left: BasisSet,
    right: BasisSet,
    column_offset: int,
    d_prime: Optional[int] = None,
) -> BasisSet:
    """
    Union of two bases whose column supports are disjoint once right is shifted.

    Left keeps its columns; right's column l moves to l + column_offset. The
    output width defaults to the smallest one holding both.
    """
    if left.d != right.d:
        raise ValueError(f"cannot compose bases with different d ({left.d} vs {right.d})")
    if column_offset < 0:
        raise ValueError(f"column_offset must be >= 0 (got {column_offset})")
    width = d_prime if d_prime is not None else max(left.d_prime, right.d_prime + column_offset)
    if left.d_prime > width or right.d_prime + column_offset > width:
        raise ValueError(
            f"composed footprint needs {max(left.d_prime, right.d_prime + column_offset)} columns, "
            f"target d' is {width}"
        )

    overlap = _used_columns(left) & {c + column_offset for c in _used_columns(right)}
    if overlap:
        raise ValueError(f"column supports overlap on columns {sorted(overlap)}")

    # The empty basis is an identity for composition when the width is unchanged.
    if not right.states and width == left.d_prime:
        return left
    if not left.states and column_offset == 0 and width == right.d_prime:
        return right

    d = left.d
    states: List[PureState] = []
    for s, shift in [(s, 0) for s in left.states] + [(s, column_offset) for s in right.states]:
        coeffs = np.zeros((d, width), dtype=np.complex128)
        coeffs[:, shift:shift + s.d_prime] = s.coeffs
        states.append(PureState.unchecked(d, width, coeffs))
    labels = [(0,) + label for label in left.labels] + [(1,) + label for label in right.labels]

    provenance = Provenance(
        kind="composition",
        params={"column_offset": column_offset},
        children=(left.provenance, right.provenance),
    )
    return BasisSet(d, width, tuple(states), tuple(labels), provenance)
