"""Reference shifted-sinc taps, correctly rounded from 1200-bit arithmetic.

Writes tests/fixtures/sinc_taps.txt: one line per shift, the shift followed by
its 25 taps (n = -12..12), all as IEEE-754 bit patterns in hex. The shifts are
1000 uniform draws from [-12, 12] plus a few near-integer edge cases.

Run from crates/core: python3 tests/oracles/sinc_taps.py
"""

import struct

import mpmath as mp
import numpy as np

# enough bits to hold n + delta exactly for every delta used below
mp.mp.prec = 1200


def bits(x: float) -> str:
    return struct.pack(">d", x).hex()


def tap(n: int, delta: float) -> float:
    t = mp.mpf(n) + mp.mpf(delta)  # exact: both are doubles
    if t == 0:
        return 1.0
    return float(mp.sin(mp.pi * t) / (mp.pi * t))


def main() -> None:
    rng = np.random.default_rng(20240601)
    deltas = list(rng.uniform(-12.0, 12.0, 1000))
    deltas += [3.0 + 1e-9, -5.0 - 2e-12, 11.999999999, -12.0 + 2**-40, 0.5, -0.5, 1e-300]
    with open("tests/fixtures/sinc_taps.txt", "w") as f:
        for d in deltas:
            d = float(d)
            row = [bits(d)] + [bits(tap(n, d)) for n in range(-12, 13)]
            f.write(" ".join(row) + "\n")


if __name__ == "__main__":
    main()
