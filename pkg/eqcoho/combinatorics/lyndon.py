"""
Binary Lyndon words and necklaces.

A Lyndon word is strictly smaller than every nontrivial rotation of itself, so
"0" and "1" count as Lyndon words (l_1 = 2). Necklaces of length m (rotation
orbits of {0,1}^m) correspond to Lyndon words of length d | m, one per orbit.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from sympy import divisors, mobius

from errors import ArgumentError, DomainError, ensure


@dataclass(frozen=True, order=True)
class Word:
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits:
            raise ArgumentError("words are nonempty")
        if any(b not in (0, 1) for b in self.bits):
            raise ArgumentError(f"binary words only, got {self.bits}")

    @classmethod
    def parse(cls, text: str) -> "Word":
        return cls(tuple(int(ch) for ch in text.strip()))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def rotations(self) -> Iterator[tuple[int, ...]]:
        for i in range(len(self.bits)):
            yield self.bits[i:] + self.bits[:i]

    def is_lyndon(self) -> bool:
        return all(self.bits < rot for rot in list(self.rotations())[1:])


@dataclass(frozen=True)
class LyndonTable:
    length: int
    words: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)

    def as_strings(self) -> list[str]:
        return [str(w) for w in self.words]


def _duval(d: int) -> Iterator[tuple[int, ...]]:
    """Lyndon words of length exactly d over {0,1}, in lexicographic order."""
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == d:
            yield tuple(w)
        while len(w) < d:
            w.append(w[-m])
        while w and w[-1] == 1:
            w.pop()


@lru_cache(maxsize=None)
def lyndon_words(d: int) -> LyndonTable:
    if d < 1:
        raise ArgumentError(f"word length must be >= 1, got {d}")
    return LyndonTable(d, tuple(Word(bits) for bits in _duval(d)))


@lru_cache(maxsize=None)
def lyndon_count(d: int) -> int:
    """Number of binary Lyndon words of length d, by Möbius inversion."""
    if d < 1:
        raise ArgumentError(f"word length must be >= 1, got {d}")
    total = sum(int(mobius(e)) * 2 ** (d // e) for e in divisors(d))
    ensure(total % d == 0, f"Möbius sum {total} not divisible by {d}")
    return total // d


def necklace_count(m: int) -> int:
    """Rotation orbits on {0,1}^m."""
    if m < 1:
        raise ArgumentError(f"necklace length must be >= 1, got {m}")
    return sum(lyndon_count(d) for d in divisors(m))


def zero_blocks(w: Word) -> int:
    """Maximal cyclic runs of 0s. The all-zero word is a single run."""
    if all(b == 0 for b in w.bits):
        return 1
    return iota(w)


def iota(w: Word) -> int:
    """Cyclic occurrences of the subword 01."""
    bits = w.bits
    return sum(1 for i, b in enumerate(bits) if b == 0 and bits[(i + 1) % len(bits)] == 1)


def lyndon_blocks(n: int, k: int) -> int:
    """Lyndon words of length n with exactly k blocks of zeros."""
    if k < 0:
        raise ArgumentError(f"block count must be >= 0, got {k}")
    return sum(1 for w in lyndon_words(n).words if zero_blocks(w) == k)


def lyndon_plus_count(n: int) -> int:
    """Lyndon words of length n with more than one block of zeros."""
    value = lyndon_count(n) - lyndon_blocks(n, 1)
    ensure(value >= 0, f"negative Lyndon-plus count for n={n}")
    return value


def zero_block_histogram(d: int) -> dict[int, int]:
    counts = Counter(zero_blocks(w) for w in lyndon_words(d).words)
    return dict(sorted(counts.items()))


def divisor_set(n: int, p: int) -> list[int]:
    """Divisors d of n with p | n/d; these are exactly the divisors of n/p."""
    if p < 1 or n % p:
        raise DomainError(f"p={p} does not divide n={n}")
    found = [d for d in divisors(n) if (n // d) % p == 0]
    ensure(found == list(divisors(n // p)), f"divisor set mismatch for n={n}, p={p}")
    return found


def necklace_representative(bits: Sequence[int]) -> Word:
    """Least rotation of bits; a Lyndon word when bits is primitive."""
    word = Word(tuple(bits))
    return Word(min(word.rotations()))


def primitive_period(bits: Sequence[int]) -> int:
    """Smallest d with bits invariant under rotation by d (the orbit size)."""
    bits = tuple(bits)
    m = len(bits)
    for d in divisors(m):
        if bits[d:] + bits[:d] == bits:
            return d
    return m
