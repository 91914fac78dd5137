"""Words over three involutions a, b, c.

A word ``l1 l2 ... ln`` denotes the map ``l1 o l2 o ... o ln``: the rightmost
letter acts first.  Every letter is its own inverse, so the inverse of a word is
its reverse.
"""
from __future__ import annotations

from functools import lru_cache

LETTERS = "abc"


def free_reduce(word: str) -> str:
    out: list[str] = []
    for ch in word:
        if out and out[-1] == ch:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def inverse(word: str) -> str:
    return word[::-1]


def is_reduced(word: str) -> bool:
    return all(a != b for a, b in zip(word, word[1:]))


def cyclic_reduce(word: str) -> str:
    word = free_reduce(word)
    while len(word) > 1 and word[0] == word[-1]:
        word = word[1:-1]
    return word


@lru_cache(maxsize=None)
def reduced_words(radius: int, letters: str = LETTERS) -> tuple[str, ...]:
    """All freely reduced words of length <= radius, by length, each level built by
    prepending a letter to the previous level in order.  Kernels rely on this order."""
    level = [""]
    out = [""]
    for _ in range(radius):
        nxt = []
        for w in level:
            for ch in letters:
                if not w or w[0] != ch:
                    nxt.append(ch + w)
        out.extend(nxt)
        level = nxt
    return tuple(out)


def ball_size(radius: int) -> int:
    """Number of reduced words of length <= radius over three involutions."""
    return 1 + 3 * (2 ** radius - 1)


def substitute_letters(word: str, images: dict[str, str]) -> str:
    return free_reduce("".join(images[ch] for ch in word))


def power(word: str, n: int) -> str:
    return free_reduce(word * n)
