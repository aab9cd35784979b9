"""Reference WAV files written by Python's `wave` module.

Sample values are integers from simple formulas so the Rust tests can
recompute them. Run from crates/jengan:

    python3 tests/oracles/wav_fixtures.py
"""

import math
import struct
import wave


def mono_samples():
    tone = [round(12000 * math.sin(2 * math.pi * 441 * n / 22050)) for n in range(96)]
    return tone + [-32768, 32767, 0, -1, 1]


def stereo_samples():
    return [(n * 301 - 15000, -n * 173) for n in range(64)]


def write(path, channels, rate, frames):
    with wave.open(path, "wb") as w:
        w.setnchannels(channels)
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(b"".join(struct.pack("<" + "h" * channels, *f) for f in frames))


def main():
    write("tests/fixtures/mono.wav", 1, 22050, [(s,) for s in mono_samples()])
    write("tests/fixtures/stereo.wav", 2, 16000, stereo_samples())


if __name__ == "__main__":
    main()
