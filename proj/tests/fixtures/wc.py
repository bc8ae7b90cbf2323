#!/usr/bin/env python3
"""Word count worker: `wc.py map` or `wc.py reduce` (stdin -> stdout)."""
import sys


def main(mode):
    out = sys.stdout.buffer
    if mode == "map":
        for line in sys.stdin.buffer:
            for word in line.split():
                out.write(word + b"\t1\n")
        return 0
    prev, total = None, 0
    for line in sys.stdin.buffer:
        key, _, value = line.rstrip(b"\n").partition(b"\t")
        if prev is not None and key != prev:
            out.write(prev + b"\t" + str(total).encode() + b"\n")
            total = 0
        prev = key
        total += int(value or 0)
    if prev is not None:
        out.write(prev + b"\t" + str(total).encode() + b"\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else ""))
