"""Seeded instance corpora shared by the unit and acceptance suites."""

import random

from bitile import patterns
from bitile.graph import HostGraph

TINY_PATTERNS = ("K2", "2xK2", "K1,2", "K1,2+K2", "K2,2", "K2,3", "P4", "K1,3", "K1,2+K1", "K1,3+K1")
TINY_SHAPES = ((4, 4, 0.5), (6, 5, 0.5), (7, 7, 0.4), (8, 10, 0.5), (10, 10, 0.3),
               (10, 10, 0.6), (10, 10, 0.15), (9, 10, 0.8))


def random_host(rng: random.Random, nx: int, ny: int, p: float) -> HostGraph:
    return HostGraph(nx, ny, [sum(1 << y for y in range(ny) if rng.random() < p) for _ in range(nx)])


def tiny_corpus(seed: int = 11):
    """``(name, pattern, host)`` triples: hosts up to 10+10, patterns up to 5 vertices."""
    rng = random.Random(seed)
    out = []
    for name in TINY_PATTERNS:
        H = patterns.get(name)
        for nx, ny, p in TINY_SHAPES:
            out.append((name, H, random_host(rng, nx, ny, p)))
    return out


def fact_hosts(count: int = 500, seed: int = 45):
    """Random balanced hosts with ``n <= 12`` at assorted densities."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, 12)
        out.append(random_host(rng, n, n, rng.choice((0.1, 0.2, 0.35, 0.5, 0.7, 0.9))))
    return out
