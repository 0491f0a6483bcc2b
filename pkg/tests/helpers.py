"""Shared random-pattern generation for property tests."""

from __future__ import annotations

import random

_ATOMS = ["a", "b", "c", "[ab]", "[b-c]", "[^a]", "."]
_QUANTS = ["*", "+", "?", "*?", "+?", "??", "{2}", "{1,3}", "{0,2}", "{2,}"]


def gen_pattern(rng: random.Random, depth: int = 3, *, anchors: bool = False,
                groups: bool = True) -> str:
    r = rng.random()
    if depth <= 0 or r < 0.35:
        atom = rng.choice(_ATOMS)
        if anchors and rng.random() < 0.08:
            return rng.choice(["^", "$", r"\b"])
        return atom
    if r < 0.55:
        return (gen_pattern(rng, depth - 1, anchors=anchors, groups=groups)
                + gen_pattern(rng, depth - 1, anchors=anchors, groups=groups))
    if r < 0.7:
        a = gen_pattern(rng, depth - 1, anchors=anchors, groups=groups)
        b = gen_pattern(rng, depth - 1, anchors=anchors, groups=groups)
        return f"(?:{a}|{b})"
    if r < 0.82 and groups:
        return "(" + gen_pattern(rng, depth - 1, anchors=anchors, groups=groups) + ")"
    body = gen_pattern(rng, depth - 1, anchors=anchors, groups=groups)
    wrapped = body if len(body) == 1 else f"(?:{body})"
    return wrapped + rng.choice(_QUANTS)


def gen_input(rng: random.Random, max_len: int = 8, alphabet: str = "abc") -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randrange(max_len + 1)))
