#!/usr/bin/env python3
"""Writes the committed exchange fixtures with an encoder that is independent
of the C++ writer.

    python3 tests/fixtures/make_fixtures.py
"""

import struct
from pathlib import Path

HERE = Path(__file__).resolve().parent
DIM = 768


def value(rec, i, j):
    # small dyadic rationals, exact in f32
    return ((rec * 31 + i * 7 + j * 3) % 64 - 32) / 16.0


def temb(records):
    out = bytearray(b"TEMB")
    out += struct.pack("<IQ", 1, len(records))
    for rec, (pid, name, m) in enumerate(records):
        for s in (pid, name):
            b = s.encode("utf-8")
            out += struct.pack("<I", len(b)) + b
        out += struct.pack("<II", m, DIM)
        for i in range(m):
            out += struct.pack("<%df" % DIM, *(value(rec, i, j) for j in range(DIM)))
    return bytes(out)


def main():
    records = [("post-1", "mental-roberta-base", 3), ("post 2 ü", "psychbert", 1)]
    (HERE / "two_records.temb").write_bytes(temb(records))
    (HERE / "empty.temb").write_bytes(temb([]))

    gold = [(f"f{i:02d}", 1 if i % 3 == 0 else 0) for i in range(12)]
    with open(HERE / "gold.jsonl", "w") as f:
        for pid, lab in gold:
            f.write('{"id":"%s","text":"fixture post %s.","label":%d}\n' % (pid, pid, lab))
    # m1 errs on f01 and f03, m2 on f05 and f06
    for name, wrong in (("m1", {"f01", "f03"}), ("m2", {"f05", "f06"})):
        with open(HERE / f"{name}_predictions.csv", "w") as f:
            f.write("post_id,prob_positive\n")
            for k, (pid, lab) in enumerate(gold):
                right = lab == 1
                if pid in wrong:
                    right = not right
                p = 0.9 - 0.01 * k if right else 0.1 + 0.01 * k
                f.write(f"{pid},{p:.2f}\n")


if __name__ == "__main__":
    main()
