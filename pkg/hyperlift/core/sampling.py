"""
Seeded random parameter tuples for the randomized verification matrices.

Every case gets its own ``random.Random`` keyed by (seed, kind, name, k,
index), so a case draws the same parameters whether it runs alone, in order
or on a worker process.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Iterable
from fractions import Fraction

from loguru import logger

from hyperlift.core.errors import DomainError
from hyperlift.core.hyperseries import WeightedSeries, lower_poles

MAX_DRAWS = 200

_DIGITS = tuple(v for v in range(-9, 10) if v != 0)


def case_rng(seed: int, kind: str, name: str, k: int, index: int) -> random.Random:
    """The generator for one case of the matrix."""
    return random.Random(f"{seed}:{kind}:{name}:{k}:{index}")


def random_rational(rng: random.Random) -> Fraction:
    """p/q with p and q drawn from ±1..±9."""
    return Fraction(rng.choice(_DIGITS), rng.choice(_DIGITS))


def draw_params(rng: random.Random, names: Iterable[str]) -> dict[str, Fraction]:
    """One random value per name; ``sign`` draws ±1."""
    return {
        name: Fraction(rng.choice((1, -1))) if name == "sign" else random_rational(rng)
        for name in names
    }


def reject_poles(*series: WeightedSeries) -> None:
    """
    Raise DomainError when any lower parameter is a nonpositive integer.

    Sampling for power-series checks uses it to resample instead of stopping
    at a pole partway through the expansion.
    """
    for s in series:
        poles = lower_poles(s)
        if poles:
            raise DomainError(f"lower parameter pole at {poles[0]}")


def sample_until[T](
    attempt: Callable[[random.Random], T], rng: random.Random, *, label: str = "case"
) -> T:
    """
    Call ``attempt`` with fresh draws from ``rng`` until it stops raising DomainError.

    Singular draws (a vanishing Pochhammer denominator, a pole, a vanishing
    Q(N)) are simply redrawn.

    Raises:
        DomainError: If MAX_DRAWS consecutive draws were singular.
    """
    last: Exception | None = None
    for draw in range(MAX_DRAWS):
        try:
            return attempt(rng)
        except (DomainError, ZeroDivisionError) as exc:
            last = exc
            logger.debug("{}: draw {} rejected ({})", label, draw, exc)
    raise DomainError(f"{label}: no nonsingular parameters in {MAX_DRAWS} draws ({last})")
