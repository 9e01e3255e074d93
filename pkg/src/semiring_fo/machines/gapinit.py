"""Gap normal form: (0 . x1..xn) with ones at x_-1..x_-n  <->  (0 . x1,1,x2,1,...,xn,1).

Both directions are fixed node lists stored as fixtures. Each begins with a
short guard that recognizes the empty input, on which the transcribed loops
would otherwise not terminate.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .bss import BssProgram, program_from_doc

# steps(n) = a n² + b n + c for n >= 1 (input node included); value independent
FORWARD_STEPS = (Fraction(7, 2), Fraction(21, 2), 7)
REVERSE_STEPS = (Fraction(7, 2), Fraction(29, 2), 15)
EMPTY_STEPS = {"forward": 6, "reverse": 9}


@lru_cache(maxsize=None)
def gap_init(direction: str = "forward") -> BssProgram:
    if direction not in ("forward", "reverse"):
        raise ValueError("direction must be forward or reverse")
    text = resources.files(__package__).joinpath("fixtures").joinpath(f"gap_init_{direction}.json").read_text()
    return program_from_doc(json.loads(text))


def predicted_steps(direction: str, n: int) -> int:
    if n == 0:
        return EMPTY_STEPS[direction]
    a, b, c = FORWARD_STEPS if direction == "forward" else REVERSE_STEPS
    return int(a * n * n + b * n + c)
