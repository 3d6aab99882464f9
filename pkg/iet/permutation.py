"""
Labelled permutations: the combinatorial datum of an interval exchange.
Letters are integers 0..d-1, each carrying a printable label.
"""
from dataclasses import dataclass, field
from string import ascii_uppercase
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np


def _default_labels(d: int) -> Tuple[str, ...]:
    if d <= len(ascii_uppercase):
        return tuple(ascii_uppercase[:d])
    return tuple(f"x{i}" for i in range(d))


@dataclass(frozen=True)
class Permutation:
    """
    Two orderings of the alphabet {0, ..., d-1}.

    ``top[k]`` is the letter at top position k, ``bottom[k]`` the letter at
    bottom position k (positions are 0-based).
    """
    top: Tuple[int, ...]
    bottom: Tuple[int, ...]
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        d = len(self.top)
        if d == 0:
            raise ValueError("Permutation needs at least one letter")
        if len(self.bottom) != d:
            raise ValueError(f"Rows have different lengths: {len(self.top)} vs {len(self.bottom)}")
        alphabet = set(range(d))
        if set(self.top) != alphabet or set(self.bottom) != alphabet:
            raise ValueError(f"Both rows must be bijections onto 0..{d - 1}: {self.top} / {self.bottom}")
        object.__setattr__(self, "top", tuple(int(a) for a in self.top))
        object.__setattr__(self, "bottom", tuple(int(a) for a in self.bottom))
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(d))
        elif len(self.labels) != d or len(set(self.labels)) != d:
            raise ValueError(f"Labels must be {d} distinct strings, got {self.labels}")

    @property
    def d(self) -> int:
        """Alphabet size."""
        return len(self.top)

    def top_position(self, letter: int) -> int:
        return self.top.index(letter)

    def bottom_position(self, letter: int) -> int:
        return self.bottom.index(letter)

    def top_positions(self) -> List[int]:
        pos = [0] * self.d
        for k, letter in enumerate(self.top):
            pos[letter] = k
        return pos

    def bottom_positions(self) -> List[int]:
        pos = [0] * self.d
        for k, letter in enumerate(self.bottom):
            pos[letter] = k
        return pos

    def is_irreducible(self) -> bool:
        """True unless some proper prefix of both rows holds the same letters."""
        top_seen, bottom_seen = set(), set()
        for k in range(self.d - 1):
            top_seen.add(self.top[k])
            bottom_seen.add(self.bottom[k])
            if top_seen == bottom_seen:
                return False
        return True

    def intersection_matrix(self) -> np.ndarray:
        """
        Antisymmetric intersection matrix Omega.

        Omega[a, b] = +1 when a comes after b on top and before b on bottom,
        -1 in the opposite case, 0 otherwise.
        """
        tp, bp = self.top_positions(), self.bottom_positions()
        omega = np.zeros((self.d, self.d), dtype=np.int64)
        for a in range(self.d):
            for b in range(self.d):
                if tp[a] > tp[b] and bp[a] < bp[b]:
                    omega[a, b] = 1
                elif tp[a] < tp[b] and bp[a] > bp[b]:
                    omega[a, b] = -1
        return omega

    def canonical_suspension(self) -> np.ndarray:
        """tau[a] = bottom_position(a) - top_position(a)."""
        tp, bp = self.top_positions(), self.bottom_positions()
        return np.array([bp[a] - tp[a] for a in range(self.d)], dtype=float)

    # Text format: two whitespace-separated rows of labels

    def to_text(self) -> str:
        top = " ".join(self.labels[a] for a in self.top)
        bottom = " ".join(self.labels[a] for a in self.bottom)
        return f"{top}\n{bottom}"

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        """
        Parse two rows of labels, separated by a newline or by ``/``.

        Raises:
            ValueError: If the rows do not hold the same set of labels
        """
        rows = [r.split() for r in text.replace("/", "\n").splitlines() if r.strip()]
        if len(rows) != 2:
            raise ValueError(f"Expected two rows of letters, got {len(rows)}")
        top_labels, bottom_labels = rows
        if sorted(top_labels) != sorted(bottom_labels):
            raise ValueError(f"Rows use different letters: {top_labels} / {bottom_labels}")
        index: Dict[str, int] = {label: i for i, label in enumerate(top_labels)}
        return cls(
            top=tuple(index[label] for label in top_labels),
            bottom=tuple(index[label] for label in bottom_labels),
            labels=tuple(top_labels),
        )

    @classmethod
    def symmetric(cls, d: int, labels: Optional[Sequence[str]] = None) -> "Permutation":
        """The rotation class representative: bottom row is the reversed top row."""
        return cls(top=tuple(range(d)), bottom=tuple(reversed(range(d))), labels=tuple(labels or ()))

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(top=tuple(range(d)), bottom=tuple(range(d)))

    def __str__(self) -> str:
        return self.to_text().replace("\n", " / ")
