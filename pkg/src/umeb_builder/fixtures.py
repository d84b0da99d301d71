"""Named reference bases: the worked examples and the small UPB / UMEB sets they start from."""

import math
from typing import Callable, Dict, List, Sequence, Tuple

from .constructions import (
    BasisSet,
    HolePattern,
    PartitionSpec,
    Provenance,
    compose_direct_sum,
    theorem1_construct,
    theorem2_construct,
)
from .correspondence import PureState


# C^5 (x) C^6 pattern whose pullback gives the second 25-member UMEB.
EXAMPLE1_MASK = ("000*00", "0*0000", "000*00", "00000*", "000*00")

# The two 5 x 6 blocks of the C^5 (x) C^12 pattern, as given.
EXAMPLE2_LEFT_MASK = ("000*00", "000*00", "0*0000", "000*00", "000*00")
EXAMPLE2_RIGHT_MASK = ("*00000", "000*00", "*00000", "000*00", "*00000")

# Their staircase forms; the published 50-member basis is built on these directly.
EXAMPLE2_LEFT_STAIRCASE = ("*00000", "0*0000", "0*0000", "0*0000", "0*0000")
EXAMPLE2_RIGHT_STAIRCASE = ("*00000", "*00000", "*00000", "0*0000", "0*0000")

EXAMPLE2_OFFSET = 6


def _fixture(name: str, states: Sequence[PureState], labels: Sequence[Tuple[int, ...]]) -> BasisSet:
    d, d_prime = states[0].d, states[0].d_prime
    return BasisSet(
        d,
        d_prime,
        tuple(states),
        tuple(labels),
        Provenance(kind="fixture", params={"name": name}),
    )


def fixture_upb_3x3() -> List[PureState]:
    """The five-member unextendible product basis of C^3 (x) C^3."""
    r2 = 1 / math.sqrt(2)
    return [
        PureState.product([1, 0, 0], [r2, -r2, 0]),
        PureState.product([r2, -r2, 0], [0, 0, 1]),
        PureState.product([0, 0, 1], [0, r2, -r2]),
        PureState.product([0, r2, -r2], [1, 0, 0]),
        PureState.product([1, 1, 1], [1, 1, 1]),
    ]


def fixture_umeb_2x3() -> BasisSet:
    """(|00'> +- |11'>)/sqrt2, (|01'> +- |10'>)/sqrt2 in C^2 (x) C^3."""
    r2 = 1 / math.sqrt(2)
    states = [
        PureState.from_kets(2, 3, [(r2, 0, 0), (r2, 1, 1)]),
        PureState.from_kets(2, 3, [(r2, 0, 0), (-r2, 1, 1)]),
        PureState.from_kets(2, 3, [(r2, 0, 1), (r2, 1, 0)]),
        PureState.from_kets(2, 3, [(r2, 0, 1), (-r2, 1, 0)]),
    ]
    return _fixture("umeb2x3", states, [(i,) for i in range(1, 5)])


def bell_basis() -> BasisSet:
    """The complete maximally entangled basis of C^2 (x) C^2."""
    r2 = 1 / math.sqrt(2)
    states = [
        PureState.from_kets(2, 2, [(r2, 0, 0), (r2, 1, 1)]),
        PureState.from_kets(2, 2, [(r2, 0, 0), (-r2, 1, 1)]),
        PureState.from_kets(2, 2, [(r2, 0, 1), (r2, 1, 0)]),
        PureState.from_kets(2, 2, [(r2, 0, 1), (-r2, 1, 0)]),
    ]
    return _fixture("bell", states, [(i,) for i in range(4)])


def example1(pullback: bool = True) -> BasisSet:
    return theorem1_construct(HolePattern.from_mask(EXAMPLE1_MASK), pullback=pullback)


def example2() -> BasisSet:
    """50 members in C^5 (x) C^12 from the two staircase blocks, right block at offset 6."""
    left = theorem1_construct(HolePattern.from_mask(EXAMPLE2_LEFT_STAIRCASE))
    right = theorem1_construct(HolePattern.from_mask(EXAMPLE2_RIGHT_STAIRCASE))
    return compose_direct_sum(left, right, EXAMPLE2_OFFSET)


def example2_pulled_back() -> BasisSet:
    """Same shape, with each block pulled back onto the original 5 x 6 patterns."""
    left = theorem1_construct(HolePattern.from_mask(EXAMPLE2_LEFT_MASK))
    right = theorem1_construct(HolePattern.from_mask(EXAMPLE2_RIGHT_MASK))
    return compose_direct_sum(left, right, EXAMPLE2_OFFSET)


def example3(parts: Tuple[int, ...]) -> BasisSet:
    return theorem2_construct(PartitionSpec.from_parts(3, 10, parts))


FIXTURES: Dict[str, Callable[[], BasisSet]] = {
    "upb3x3": lambda: _fixture("upb3x3", fixture_upb_3x3(), [(i,) for i in range(5)]),
    "umeb2x3": fixture_umeb_2x3,
    "bell": bell_basis,
    "ex1": example1,
    "ex1c": lambda: example1(pullback=False),
    "ex2": example2,
    "ex2v": example2_pulled_back,
    "ex3a": lambda: example3((4, 5)),
    "ex3b": lambda: example3((4, 4)),
}


def fixture_basis(name: str) -> BasisSet:
    try:
        factory = FIXTURES[name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose one of {', '.join(sorted(FIXTURES))}") from None
    return factory()
