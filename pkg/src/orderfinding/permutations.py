"""Permutations on {0,1,2,3}: cycle structure, powers, and the controlled oracle.

The second register stores the permuted element y = y1 y0 with y1 on spin 4
and y0 on spin 5.  The exponent register stores x = x2 x1 x0 with x2 on
spin 1 (most significant), x1 on spin 2, x0 on spin 3.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .simulator import Circuit, ControlledTargetUnitary, circuit_unitary

N_ELEMENTS = 4


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0,1,2,3}; images[y] is the image of y."""

    images: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(N_ELEMENTS)):
            raise ValueError(f"not a bijection on 0..3: {images}")
        object.__setattr__(self, "images", images)

    def __call__(self, y: int) -> int:
        return self.images[y]

    def __str__(self) -> str:
        return format_cycles(self)


IDENTITY = Permutation((0, 1, 2, 3))


@dataclass(frozen=True)
class OracleSpec:
    """One problem instance: the permutation and the starting element y."""

    pi: Permutation
    y: int

    def __post_init__(self) -> None:
        if not 0 <= self.y < N_ELEMENTS:
            raise ValueError(f"start element {self.y} out of range 0..3")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p after q: (p*q)(y) = p(q(y))."""
    return Permutation(tuple(p(q(y)) for y in range(N_ELEMENTS)))


def power(pi: Permutation, k: int) -> Permutation:
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    out = IDENTITY
    for _ in range(k):
        out = compose(pi, out)
    return out


def order_of(pi: Permutation, y: int) -> int:
    """Smallest r >= 1 with pi^r(y) = y (the cycle length of y)."""
    if not 0 <= y < N_ELEMENTS:
        raise ValueError(f"element {y} out of range 0..3")
    z = pi(y)
    r = 1
    while z != y:
        z = pi(z)
        r += 1
    return r


def all_permutations() -> list[Permutation]:
    """All 24 permutations of {0,1,2,3}, in lexicographic image order."""
    return [Permutation(images) for images in itertools.permutations(range(N_ELEMENTS))]


def permutation_matrix(pi: Permutation) -> np.ndarray:
    """4x4 matrix sending |y> to |pi(y)>."""
    m = np.zeros((N_ELEMENTS, N_ELEMENTS), dtype=complex)
    for y in range(N_ELEMENTS):
        m[pi(y), y] = 1.0
    return m


def oracle_stages(pi: Permutation) -> Circuit:
    """The oracle |x>|y> -> |x>|pi^x(y)> as three controlled permutation stages.

    pi^x factors as pi^{x0} pi^{2 x1} pi^{4 x2}, so the stages are pi^1
    controlled by spin 3, pi^2 controlled by spin 2 and pi^4 controlled by
    spin 1, each acting on spins 4 and 5.
    """
    ops = []
    for control, exponent in ((3, 1), (2, 2), (1, 4)):
        ops.append(
            ControlledTargetUnitary(
                control=control,
                targets=(4, 5),
                matrix=permutation_matrix(power(pi, exponent)),
            )
        )
    return Circuit(tuple(ops))


def oracle_unitary(pi: Permutation) -> np.ndarray:
    """32x32 unitary of the oracle, i.e. sum_x |x><x| (x) P_{pi^x}."""
    return circuit_unitary(oracle_stages(pi))


# Text format: cycle notation like "(0 1 2 3)", "(0 1)(2 3)", "()" for the
# identity; an image list "1,0,3,2" is also accepted.

def format_cycles(pi: Permutation) -> str:
    seen = [False] * N_ELEMENTS
    cycles = []
    for start in range(N_ELEMENTS):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        z = pi(start)
        while z != start:
            cycle.append(z)
            seen[z] = True
            z = pi(z)
        if len(cycle) > 1:
            cycles.append(cycle)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(v) for v in c) + ")" for c in cycles)


def parse_permutation(text: str) -> Permutation:
    """Parse cycle notation or a comma-separated image list."""
    text = text.strip()
    if "," in text:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != N_ELEMENTS or not all(p.isdigit() for p in parts):
            raise ValueError(f"bad image list: {text!r}")
        return Permutation(tuple(int(p) for p in parts))
    if text == "()":
        return IDENTITY
    if not re.fullmatch(r"(\(\s*\d(\s+\d)*\s*\))+", text):
        raise ValueError(f"bad cycle notation: {text!r}")
    images = list(range(N_ELEMENTS))
    for group in re.findall(r"\(([^()]*)\)", text):
        cycle = [int(tok) for tok in group.split()]
        if any(not 0 <= v < N_ELEMENTS for v in cycle):
            raise ValueError(f"element out of range in {text!r}")
        if len(set(cycle)) != len(cycle):
            raise ValueError(f"repeated element in cycle {group!r}")
        for i, v in enumerate(cycle):
            if images[v] != v:
                raise ValueError(f"element {v} appears in two cycles in {text!r}")
            images[v] = cycle[(i + 1) % len(cycle)]
    return Permutation(tuple(images))
