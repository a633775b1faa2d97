"""Splitmix64 seed derivation.

A child seed is obtained by folding each path component into the parent
with one splitmix64 step, so ``derive(s, e, i)`` for a new index ``i`` never
changes the seeds of existing indices.
"""

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive(seed: int, *path: int) -> int:
    s = splitmix64(seed & MASK64)
    for part in path:
        s = splitmix64(s ^ (part & MASK64))
    return s
