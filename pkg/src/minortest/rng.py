"""Deterministic pseudo-randomness built on splitmix64.

Everything random in this package (walk steps, samplers, generators, lazy
edge labels) goes through this module so that runs replay bit-for-bit from a
seed, independently of query order and of whether the compiled kernel or the
pure-Python path executed.  The compiled kernel re-implements `_mix` and
`Rng.next_u64` with the same constants.
"""
from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def fold(*xs: int) -> int:
    """Hash a tuple of ints into one 64-bit value, order-sensitive."""
    h = 0x243F6A8885A308D3
    for x in xs:
        h = _mix((h + _GOLDEN + (x & MASK64)) & MASK64)
    return h


def label_bit(seed: int, a: int, b: int, mult: int = 0) -> int:
    """Unbiased coin for an undirected edge, independent of query order."""
    lo, hi = (a, b) if a <= b else (b, a)
    return fold(seed, lo, hi, mult) & 1


class Rng:
    """splitmix64 stream; cheap, replayable, and mirrored in the C kernel."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        return _mix(self.state)

    def below(self, m: int) -> int:
        # modulo bias is negligible for the m used here (m << 2^32) and the
        # same formula is used on the compiled side
        return self.next_u64() % m

    def randint(self, a: int, b: int) -> int:
        return a + self.below(b - a + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def spawn(self, *keys: int) -> "Rng":
        """Derive an independent child stream (per trial, per purpose)."""
        return Rng(fold(self.state, *keys))


def derive_seed(seed: int, *keys: int) -> int:
    return fold(seed, *keys)
