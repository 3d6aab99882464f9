"""
Cellwise trigonometric observables.

On rectangle j a term (m, n, c) stands for c * exp(2 pi i (m x / lengths[j] + n y / heights[j])).
Integer modes are periodic on the cell; real modes are allowed so that global
characters such as exp(2 pi i k x) fit the same closed forms.
"""
import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, NamedTuple, Tuple

import numpy as np

from surface.zippered import ZipperedRectangles

TAYLOR_THRESHOLD = 1e-6


class Term(NamedTuple):
    cell: int
    m: float
    n: float
    c: complex


def cycle_average(z) -> np.ndarray:
    """
    (exp(2 pi i z) - 1) / (2 pi i z), the mean of exp(2 pi i z u) over u in [0, 1].

    Exactly 0 at non-zero integers, 3-term Taylor expansion for |z| < 1e-6.
    """
    z = np.asarray(z, dtype=float)
    shape = z.shape
    z = z.ravel()
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) < TAYLOR_THRESHOLD
    zs = z[small]
    out[small] = 1.0 + 1j * np.pi * zs - (2.0 / 3.0) * np.pi ** 2 * zs ** 2
    zb = z[~small]
    out[~small] = np.expm1(2j * np.pi * zb) / (2j * np.pi * zb)
    out[(~small) & (z == np.round(z))] = 0.0
    return out.reshape(shape)


@dataclass(frozen=True)
class CellwiseObservable:
    """A finite sum of cellwise Fourier terms on a surface with ``d`` rectangles."""
    d: int
    terms: Tuple[Term, ...]

    def __post_init__(self):
        clean = []
        for t in self.terms:
            term = Term(int(t[0]), float(t[1]), float(t[2]), complex(t[3]))
            if not 0 <= term.cell < self.d:
                raise ValueError(f"Term on cell {term.cell} outside 0..{self.d - 1}")
            if not (np.isfinite(term.c.real) and np.isfinite(term.c.imag)
                    and np.isfinite(term.m) and np.isfinite(term.n)):
                raise ValueError(f"Non-finite term {term}")
            clean.append(term)
        object.__setattr__(self, "terms", tuple(clean))

    @cached_property
    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(cells, m, n, c) as numpy arrays."""
        if not self.terms:
            return np.zeros(0, dtype=int), np.zeros(0), np.zeros(0), np.zeros(0, dtype=complex)
        cells, m, n, c = zip(*self.terms)
        return np.array(cells), np.array(m), np.array(n), np.array(c, dtype=complex)

    def terms_on(self, cell: int) -> List[Term]:
        return [t for t in self.terms if t.cell == cell]

    @property
    def is_cellwise_constant(self) -> bool:
        return all(t.m == 0 and t.n == 0 for t in self.terms)

    def cell_constants(self) -> np.ndarray:
        """Value of a cellwise-constant observable on each rectangle."""
        values = np.zeros(self.d, dtype=complex)
        for t in self.terms:
            values[t.cell] += t.c
        return values

    def evaluate(self, s: ZipperedRectangles, cells, xs, ys) -> np.ndarray:
        """Values at the points (cells[i], xs[i], ys[i])."""
        cells = np.asarray(cells, dtype=int)
        xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
        out = np.zeros(cells.shape, dtype=complex)
        lengths, heights = s.lengths_array, s.heights_array
        for t in self.terms:
            mask = cells == t.cell
            if mask.any():
                phase = t.m * xs[mask] / lengths[t.cell] + t.n * ys[mask] / heights[t.cell]
                out[mask] += t.c * np.exp(2j * np.pi * phase)
        return out

    def conj(self) -> "CellwiseObservable":
        return CellwiseObservable(self.d, tuple(Term(t.cell, -t.m, -t.n, t.c.conjugate()) for t in self.terms))

    def scale(self, factor: complex) -> "CellwiseObservable":
        return CellwiseObservable(self.d, tuple(Term(t.cell, t.m, t.n, t.c * factor) for t in self.terms))

    def __add__(self, other: "CellwiseObservable") -> "CellwiseObservable":
        if other.d != self.d:
            raise ValueError(f"Cannot add observables on {self.d} and {other.d} cells")
        return CellwiseObservable(self.d, self.terms + other.terms)

    def __sub__(self, other: "CellwiseObservable") -> "CellwiseObservable":
        return self + other.scale(-1.0)

    def derivative(self, s: ZipperedRectangles, axis: str) -> "CellwiseObservable":
        """Exact partial derivative along ``x`` or ``y``."""
        if axis not in ("x", "y"):
            raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
        out = []
        for t in self.terms:
            if axis == "x":
                factor = 2j * np.pi * t.m / s.lengths_array[t.cell]
            else:
                factor = 2j * np.pi * t.n / s.heights_array[t.cell]
            out.append(Term(t.cell, t.m, t.n, t.c * factor))
        return CellwiseObservable(self.d, tuple(out))

    def to_records(self) -> List[Dict[str, float]]:
        return [{"cell": t.cell, "m": t.m, "n": t.n, "re": t.c.real, "im": t.c.imag} for t in self.terms]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_records(cls, records: Iterable[Dict[str, float]], d: int) -> "CellwiseObservable":
        return cls(d, tuple(Term(int(r["cell"]), r["m"], r["n"], complex(r["re"], r["im"])) for r in records))

    @classmethod
    def from_json(cls, text: str, d: int) -> "CellwiseObservable":
        return cls.from_records(json.loads(text), d)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()


def _cell_gram(f_terms: List[Term], g_terms: List[Term], area: float) -> complex:
    if not f_terms or not g_terms:
        return 0j
    fm = np.array([t.m for t in f_terms])[:, None]
    fn = np.array([t.n for t in f_terms])[:, None]
    fc = np.array([t.c for t in f_terms])[:, None]
    gm = np.array([t.m for t in g_terms])[None, :]
    gn = np.array([t.n for t in g_terms])[None, :]
    gc = np.array([t.c for t in g_terms])[None, :]
    kernel = cycle_average(fm - gm) * cycle_average(fn - gn)
    return complex(area * np.sum(fc * np.conj(gc) * kernel))


def inner_product(f: CellwiseObservable, g: CellwiseObservable, s: ZipperedRectangles) -> complex:
    """Exact <f, g> = integral of f * conj(g) over the surface."""
    areas = s.rectangle_areas()
    return sum((_cell_gram(f.terms_on(j), g.terms_on(j), areas[j]) for j in range(s.d)), 0j)


def mean(f: CellwiseObservable, s: ZipperedRectangles) -> complex:
    """Exact integral of f over the surface (the surface has unit area after normalization)."""
    cells, m, n, c = f.arrays
    if len(c) == 0:
        return 0j
    areas = s.rectangle_areas()[cells]
    return complex(np.sum(c * areas * cycle_average(m) * cycle_average(n)))


def centered(f: CellwiseObservable, s: ZipperedRectangles) -> CellwiseObservable:
    """f minus its mean, as a constant term on every cell."""
    mu = mean(f, s) / s.area
    return f + CellwiseObservable(f.d, tuple(Term(j, 0.0, 0.0, -mu) for j in range(f.d)))


def constant(d: int, value: complex) -> CellwiseObservable:
    return CellwiseObservable(d, tuple(Term(j, 0.0, 0.0, value) for j in range(d)))
