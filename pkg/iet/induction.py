"""
Rauzy-Veech induction (right version) and its Zorich acceleration.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from iet.errors import ConnectionDetected, ReduciblePermutation
from iet.permutation import Permutation
from iet.transformation import IET, TIE_TOLERANCE, normalize

logger = logging.getLogger(__name__)

# A return word is stored as runs: (letter, repetitions)
Run = Tuple[int, int]


class StepType(Enum):
    """Which row's last letter wins the comparison."""
    TOP = "top"
    BOTTOM = "bottom"


@dataclass(frozen=True, eq=False)
class RauzyStep:
    step_type: StepType
    winner: int
    loser: int
    elementary_matrix: np.ndarray


@dataclass(frozen=True)
class ZorichMove:
    """
    A maximal run of same-type Rauzy steps.

    The winner is the same letter for the whole run; ``losses`` counts how
    many times each other letter lost against it.
    """
    step_type: StepType
    winner: int
    losses: Tuple[Run, ...]
    permutation_before: Permutation
    permutation_after: Permutation

    @property
    def step_count(self) -> int:
        return sum(c for _, c in self.losses)

    @property
    def d(self) -> int:
        return self.permutation_before.d

    def matrix(self) -> np.ndarray:
        """B = I + sum_x c_x e_{winner, x}; old lengths = B @ new lengths."""
        b = np.eye(self.d, dtype=np.int64)
        for letter, count in self.losses:
            b[self.winner, letter] += count
        return b

    def return_words(self) -> Dict[int, List[Run]]:
        """
        Return word of every new letter over the previous alphabet.

        Top runs visit the loser first, then the winner c times; bottom runs
        visit the winner c times first.
        """
        words: Dict[int, List[Run]] = {a: [(a, 1)] for a in range(self.d)}
        for letter, count in self.losses:
            if self.step_type is StepType.TOP:
                words[letter] = [(letter, 1), (self.winner, count)]
            else:
                words[letter] = [(self.winner, count), (letter, 1)]
        return words


def _compare_last(lengths: List[float], top: List[int], bottom: List[int], tol: float) -> StepType:
    lt, lb = lengths[top[-1]], lengths[bottom[-1]]
    if abs(lt - lb) <= tol:
        raise ConnectionDetected(lt, lb)
    return StepType.TOP if lt > lb else StepType.BOTTOM


def _move_after(row: List[int], letter: int, anchor: int) -> None:
    row.remove(letter)
    row.insert(row.index(anchor) + 1, letter)


def rauzy_step(iet: IET) -> Tuple[IET, RauzyStep]:
    """
    One step of right Rauzy-Veech induction.

    Args:
        iet: Current transformation

    Returns:
        The induced IET (not rescaled) and the step record

    Raises:
        ConnectionDetected: If the two last letters have tied lengths
    """
    p = iet.permutation
    lengths = list(iet.lengths)
    top, bottom = list(p.top), list(p.bottom)
    step_type = _compare_last(lengths, top, bottom, TIE_TOLERANCE * iet.total_length)

    if step_type is StepType.TOP:
        winner, loser = top[-1], bottom[-1]
        _move_after(bottom, loser, winner)
    else:
        winner, loser = bottom[-1], top[-1]
        _move_after(top, loser, winner)
    lengths[winner] -= lengths[loser]

    e = np.eye(p.d, dtype=np.int64)
    e[winner, loser] = 1
    induced = IET(
        permutation=Permutation(tuple(top), tuple(bottom), p.labels),
        lengths=tuple(lengths),
        log_scale=iet.log_scale,
    )
    return induced, RauzyStep(step_type, winner, loser, e)


def zorich_move(iet: IET) -> Tuple[IET, ZorichMove]:
    """
    Apply a maximal run of same-type Rauzy steps, without rescaling.

    Whole turns of the loser row (every letter after the winner losing once)
    are removed in bulk; the remaining steps are taken one by one.

    Raises:
        ConnectionDetected: If a tie is met during the run
        ReduciblePermutation: If no letter follows the winner in the loser row
    """
    p = iet.permutation
    tol = TIE_TOLERANCE * iet.total_length
    lengths = list(iet.lengths)
    top, bottom = list(p.top), list(p.bottom)
    step_type = _compare_last(lengths, top, bottom, tol)
    if step_type is StepType.TOP:
        winner, loser_row = top[-1], bottom
    else:
        winner, loser_row = bottom[-1], top

    tail = loser_row[loser_row.index(winner) + 1:]
    if not tail:
        raise ReduciblePermutation(f"Permutation {p} is reducible")
    losses: Dict[int, int] = {}

    turn_length = math.fsum(lengths[a] for a in tail)
    full_turns = int(lengths[winner] // turn_length) - 1
    if full_turns > 0:
        lengths[winner] -= full_turns * turn_length
        for a in tail:
            losses[a] = full_turns

    while True:
        loser = loser_row[-1]
        diff = lengths[winner] - lengths[loser]
        if abs(diff) <= tol:
            raise ConnectionDetected(lengths[winner], lengths[loser])
        if diff < 0:
            break
        lengths[winner] = diff
        _move_after(loser_row, loser, winner)
        losses[loser] = losses.get(loser, 0) + 1

    move = ZorichMove(
        step_type=step_type,
        winner=winner,
        losses=tuple(sorted(losses.items())),
        permutation_before=p,
        permutation_after=Permutation(tuple(top), tuple(bottom), p.labels),
    )
    induced = IET(permutation=move.permutation_after, lengths=tuple(lengths), log_scale=iet.log_scale)
    logger.debug(f"Zorich move {step_type.value} winner={p.labels[winner]} steps={move.step_count}")
    return induced, move


def zorich_step(iet: IET, renormalize: bool = True) -> Tuple[IET, np.ndarray, int]:
    """
    Zorich-accelerated induction step.

    Args:
        iet: Current transformation
        renormalize: Rescale the result to total length 1 (log_scale records it)

    Returns:
        (induced IET, accumulated matrix B with lengths = B @ lengths', step count)
    """
    induced, move = zorich_move(iet)
    if renormalize:
        induced = normalize(induced)
    return induced, move.matrix(), move.step_count
