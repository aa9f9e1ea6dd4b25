#!/usr/bin/env python3
"""Frozen printable-byte counts for tests/unit/frozen_printable.inc.

Independent of the C++ code: decoding uses Python's strict UTF-8 codec one
sequence at a time and printability uses unicodedata categories.
"""
import sys
import unicodedata

MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed):
        self.x = seed & MASK

    def next(self):
        self.x = (self.x * 6364136223846793005 + 1442695040888963407) & MASK
        return self.x

    def byte(self):
        return self.next() >> 56


def printable_bytes(data):
    count, i = 0, 0
    while i < len(data):
        for n in range(1, 5):
            try:
                ch = data[i:i + n].decode("utf-8")
            except UnicodeDecodeError:
                continue
            if len(ch) == 1:
                break
        else:
            i += 1
            continue
        if ch in "\t\n\r" or unicodedata.category(ch) not in ("Cc", "Cs", "Cn"):
            count += n
        i += n
    return count


# Code points near category boundaries: controls, unassigned, private use, astral.
POINTS = [0x00, 0x09, 0x0A, 0x0D, 0x1F, 0x20, 0x41, 0x7E, 0x7F, 0x80, 0x9F, 0xA0, 0xE9,
          0x378, 0x3A9, 0x590, 0x5D0, 0x2028, 0x4E2D, 0xD7FF, 0xE000, 0xFDD0, 0xFFFD, 0xFFFF,
          0x1F600, 0x1FAFF, 0x2FFFF, 0xE0001, 0xE0080, 0x10FFFD]


def mixed(rng, length):
    out = bytearray()
    while len(out) < length:
        kind = rng.next() % 4
        if kind == 0:
            out.append(rng.byte())
        elif kind == 1:
            out.append(0x20 + rng.next() % 95)
        else:
            out += chr(POINTS[rng.next() % len(POINTS)]).encode("utf-8", "surrogatepass")
    return bytes(out[:length])


def main():
    if unicodedata.unidata_version != "13.0.0":
        sys.exit(f"expected Unicode 13.0.0, have {unicodedata.unidata_version}")
    rows = []
    for seed in range(1, 21):
        rng = Lcg(seed)
        data = bytes(rng.byte() for _ in range(64))
        rows.append((data, printable_bytes(data)))
    for seed in range(101, 121):
        rng = Lcg(seed)
        data = mixed(rng, 48)
        rows.append((data, printable_bytes(data)))
    print("// Generated by tests/oracles/printable_oracle.py; do not edit.")
    for data, count in rows:
        print(f'{{"{data.hex()}", {count}}},')


if __name__ == "__main__":
    main()
