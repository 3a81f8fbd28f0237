"""Independent reimplementation of the seeded level generator (exact-count path).

Prints the FNV-1a checksum of generated instances, used as golden values in tests.
"""
from fractions import Fraction
from math import ceil, prod

M = (1 << 64) - 1


class SplitMix:
    def __init__(self, seed):
        self.seed, self.counter = seed, 0

    def next(self):
        self.counter += 1
        z = (self.seed + self.counter * 0x9E3779B97F4A7C15) & M
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M
        return z ^ (z >> 31)

    def sample(self, n, m):
        pool = list(range(n))
        for i in range(min(m, n)):
            j = i + self.next() % (n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:m])


def generate(seed, sizes, delta, keys):
    rng = SplitMix(seed)
    levels = {}
    for k in sorted(set(keys)):
        cells = prod(sizes[:k])
        levels[k] = (cells, rng.sample(cells, ceil(delta * cells)))
    return levels


def checksum(levels):
    h = 0xCBF29CE484222325
    for k in sorted(levels):
        cells, members = levels[k]
        bits = bytearray((cells + 7) // 8)
        for i in members:
            bits[i // 8] |= 1 << (i % 8)
        for b in k.to_bytes(8, "little") + bytes(bits):
            h ^= b
            h = (h * 0x100000001B3) & M
    return h


if __name__ == "__main__":
    for seed in range(1, 6):
        lv = generate(seed, [4, 3, 5], Fraction(1, 3), [1, 2, 3])
        print(seed, hex(checksum(lv)))
