"""Trigonometric mode bookkeeping: wavevectors, basis directions, span sets.

A field state or a control direction is a finite real combination of
trigonometric basis functions indexed by an integer wavevector, a parity
(cos/sin), a field component and, for 3D velocity fields, a polarization
index.  Everything downstream (bracket generation, Galerkin states, control
synthesis) speaks in these modes, so the conventions live here:

* wavevectors are stored in canonical form: first nonzero coordinate
  positive (identifying k with -k for real fields),
* 1D reaction-diffusion scalars use the Dirichlet sine basis sin(k x) on
  [0, pi], k >= 1,
* 2D scalars use cos(k.x), sin(k.x) on the torus with k in the upper
  half-plane,
* 3D velocity uses e_{k,l,m} = 2 a_k^(l) * (cos, sin)(k.x) with the
  polarization frame a_k^(0), a_k^(1) orthogonal to k and |a|^2 = 1/(4 pi).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, NamedTuple, Optional

import numpy as np

COS = 0
SIN = 1

# field components
RD_SCALAR = "rd_scalar"
VORTICITY = "vorticity"
TEMPERATURE = "temperature"
VELOCITY = "velocity"

_FIELD_ORDER = {RD_SCALAR: 0, VORTICITY: 1, TEMPERATURE: 2, VELOCITY: 3}

#: tolerance below which a coefficient is treated as zero in span reduction
PIVOT_TOL = 1e-10


def canonical(k: tuple) -> tuple:
    """Canonical representative (first nonzero coordinate positive) and sign.

    Returns ``(k_canonical, sign)`` where sign is -1 when the vector was
    flipped (sin picks up the sign, cos does not).  The zero vector is
    returned unchanged with sign +1; fluid-model constructors reject it.
    """
    k = tuple(int(c) for c in k)
    for c in k:
        if c > 0:
            return k, 1
        if c < 0:
            return tuple(-x for x in k), -1
    return k, 1


def is_canonical(k: tuple) -> bool:
    kc, s = canonical(k)
    return s == 1 and kc == tuple(k)


class TrigMode(NamedTuple):
    """One trigonometric basis direction.

    ``k`` is a canonical wavevector, ``parity`` is COS/SIN, ``field`` names
    the component and ``pol`` is the polarization index (velocity only).
    """

    k: tuple
    parity: int
    field: str
    pol: Optional[int] = None

    def __repr__(self):  # compact, used in reports
        p = "cos" if self.parity == COS else "sin"
        tag = f"{self.field}[{','.join(map(str, self.k))}]{p}"
        if self.pol is not None:
            tag += f"l{self.pol}"
        return tag


def make_mode(k, parity, field, pol=None):
    """Validated TrigMode constructor, folding k to its canonical form.

    Returns ``(mode, sign)``; sign accounts for sin(-k.x) = -sin(k.x).
    Raises ValueError on the zero vector for fluid components, on a sine
    RD mode with k < 1, and on polarization misuse.
    """
    if field == RD_SCALAR:
        (kk,) = k if isinstance(k, tuple) else (k,)
        if parity != SIN:
            raise ValueError("RD scalar modes use the Dirichlet sine basis")
        if kk == 0:
            return None, 0  # sin(0) = 0
        sign = 1
        if kk < 0:
            kk, sign = -kk, -1
        if pol is not None:
            raise ValueError("polarization only applies to velocity modes")
        return TrigMode((kk,), SIN, field), sign
    kc, flip = canonical(k)
    if all(c == 0 for c in kc):
        if parity == SIN:
            return None, 0
        return None, 0  # cos at zero frequency is the mean mode, dropped
    sign = flip if parity == SIN else 1
    if field == VELOCITY:
        if pol not in (0, 1):
            raise ValueError("velocity modes carry a polarization index")
        return TrigMode(kc, parity, field, pol), sign
    if pol is not None:
        raise ValueError("polarization only applies to velocity modes")
    return TrigMode(kc, parity, field), sign


def mode_sort_key(m: TrigMode):
    """Deterministic mode order: (|k|^2, k, field, parity, polarization)."""
    k2 = sum(c * c for c in m.k)
    return (k2, m.k, _FIELD_ORDER[m.field], m.parity, -1 if m.pol is None else m.pol)


@lru_cache(maxsize=None)
def polarization_frame(k: tuple):
    """Orthonormal-up-to-scale frame (a0, a1) for a canonical 3D wavevector.

    a0 = normalize(k x e), a1 = normalize(k x a0), e = (0,0,1) unless k is
    parallel to it, in which case e = (1,0,0); both rescaled to
    |a|^2 = 1/(4 pi).  Deterministic function of k so runs are reproducible.
    """
    if len(k) != 3:
        raise ValueError("polarization frames are defined for 3D wavevectors")
    if not is_canonical(k) or all(c == 0 for c in k):
        raise ValueError("frame requested for a non-canonical or zero wavevector")
    kv = np.array(k, dtype=float)
    if k[0] == 0 and k[1] == 0:
        helper = np.array([1.0, 0.0, 0.0])
    else:
        helper = np.array([0.0, 0.0, 1.0])
    a0 = np.cross(kv, helper)
    a0 /= np.linalg.norm(a0)
    a1 = np.cross(kv, a0)
    a1 /= np.linalg.norm(a1)
    scale = 1.0 / np.sqrt(4.0 * np.pi)
    a0.flags.writeable = False
    a1.flags.writeable = False
    return a0 * scale, a1 * scale


class ModeVector(dict):
    """A finite real combination of TrigModes, as a mode -> coefficient map.

    Plain dict with linear-algebra helpers; zero coefficients are pruned
    lazily by ``cleaned``.
    """

    def add(self, mode: Optional[TrigMode], coeff: float):
        if mode is None or coeff == 0.0:
            return
        self[mode] = self.get(mode, 0.0) + coeff

    def scaled(self, c: float) -> "ModeVector":
        out = ModeVector()
        for m, v in self.items():
            out[m] = c * v
        return out

    def plus(self, other: "ModeVector", c: float = 1.0) -> "ModeVector":
        out = ModeVector(self)
        for m, v in other.items():
            out[m] = out.get(m, 0.0) + c * v
        return out

    def cleaned(self, tol: float = 0.0) -> "ModeVector":
        lim = tol if tol > 0 else 0.0
        return ModeVector({m: v for m, v in self.items() if abs(v) > lim})

    def norm(self) -> float:
        return float(np.sqrt(sum(v * v for v in self.values())))


def mode_vector(pairs: Iterable) -> ModeVector:
    out = ModeVector()
    for m, c in pairs:
        out.add(m, c)
    return out


class SpanSet:
    """A subspace of trig-mode space with a reduced (RREF) coefficient basis.

    Rows of the basis matrix are basis vectors over ``modes`` (the ordered
    column set, grown on demand).  Insertion keeps the matrix pivot-reduced
    (identity on the pivot columns) with pivot tolerance ``tol``; adding a
    vector already in the span leaves the dimension unchanged.
    """

    _GROW = 64

    def __init__(self, tol: float = PIVOT_TOL):
        self.tol = tol
        self.modes: list[TrigMode] = []
        self._col: dict[TrigMode, int] = {}
        self._mat = np.zeros((0, 0))
        self._n = 0  # rows in use
        self._w = 0  # columns in use
        self._pivots = np.zeros(0, dtype=int)

    @property
    def dim(self) -> int:
        return self._n

    def _ensure_columns(self, vec: ModeVector):
        new = [m for m in vec if m not in self._col]
        if not new:
            return
        for m in new:
            self._col[m] = self._w
            self.modes.append(m)
            self._w += 1
        if self._w > self._mat.shape[1]:
            grown = np.zeros((max(self._mat.shape[0], self._GROW),
                              self._w + self._GROW))
            grown[: self._mat.shape[0], : self._mat.shape[1]] = self._mat
            self._mat = grown

    def _as_row(self, vec: ModeVector) -> np.ndarray:
        row = np.zeros(self._mat.shape[1])
        for m, c in vec.items():
            row[self._col[m]] += c
        return row

    def _reduce(self, row: np.ndarray) -> np.ndarray:
        if self._n:
            R = self._mat[: self._n]
            c = row[self._pivots[: self._n]]
            row = row - c @ R
        return row

    def insert(self, vec: ModeVector) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        vec = vec.cleaned()
        if not vec:
            return False
        scale = max(abs(c) for c in vec.values())
        self._ensure_columns(vec)
        row = self._as_row(vec) / scale
        row = self._reduce(row)
        live = row[: self._w]
        if not live.size or np.max(np.abs(live)) <= self.tol:
            return False
        # pivot rule: first column with an above-tolerance entry
        p = int(np.nonzero(np.abs(live) > self.tol)[0][0])
        row = row / row[p]
        if self._n:
            col = self._mat[: self._n, p].copy()
            nz = np.nonzero(col)[0]
            if nz.size:
                self._mat[nz, :] -= np.outer(col[nz], row)
        if self._n >= self._mat.shape[0]:
            grown = np.zeros((self._mat.shape[0] + self._GROW,
                              self._mat.shape[1]))
            grown[: self._n] = self._mat[: self._n]
            self._mat = grown
        self._mat[self._n] = row
        self._pivots = np.append(self._pivots, p)
        self._n += 1
        return True

    def residual(self, vec: ModeVector) -> float:
        """Sup-norm distance of the normalized vector from the span."""
        vec = vec.cleaned()
        if not vec:
            return 0.0
        if any(m not in self._col for m in vec):
            return 1.0
        scale = max(abs(c) for c in vec.values())
        row = self._reduce(self._as_row(vec) / scale)
        return float(np.max(np.abs(row[: self._w]))) if self._w else 0.0

    def contains(self, vec: ModeVector, tol: float = None) -> bool:
        return self.residual(vec) <= (self.tol if tol is None else tol)

    def coefficients_of(self, vec: ModeVector):
        """Coefficients over the stored basis rows, or None if not in span."""
        vec = vec.cleaned()
        if not vec:
            return np.zeros(self._n)
        if any(m not in self._col for m in vec):
            return None
        row = self._as_row(vec)
        c = row[self._pivots[: self._n]].copy()
        resid = row - c @ self._mat[: self._n] if self._n else row
        scale = max(abs(v) for v in vec.values())
        if np.max(np.abs(resid[: self._w])) > self.tol * scale:
            return None
        return c

    def basis_vectors(self) -> list[ModeVector]:
        out = []
        for i in range(self._n):
            row = self._mat[i]
            out.append(ModeVector({m: row[j] for j, m in enumerate(self.modes)
                                   if row[j] != 0.0}))
        return out

    def copy(self) -> "SpanSet":
        out = SpanSet(self.tol)
        out.modes = list(self.modes)
        out._col = dict(self._col)
        out._mat = self._mat.copy()
        out._n = self._n
        out._w = self._w
        out._pivots = self._pivots.copy()
        return out

    def equals(self, other: "SpanSet") -> bool:
        if self.dim != other.dim:
            return False
        return all(other.contains(v) for v in self.basis_vectors()) and all(
            self.contains(v) for v in other.basis_vectors())

    def covered_modes(self, candidates: Iterable[TrigMode]) -> list[TrigMode]:
        """Candidates whose coordinate direction lies in the span."""
        return [m for m in candidates if self.contains(ModeVector({m: 1.0}))]


def span_of(vectors: Iterable[ModeVector], tol: float = PIVOT_TOL) -> SpanSet:
    s = SpanSet(tol)
    for v in vectors:
        s.insert(v)
    return s
