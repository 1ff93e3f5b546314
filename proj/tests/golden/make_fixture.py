#!/usr/bin/env python3
"""Generates the bundled 500-record fixture (fixture.jsonl).

Three groups with different reported-sigma quality: en-de is
overconfident (sigma reported at half scale), ru-en reports the true
scale and zh-en is underconfident (double scale). The true noise scale
grows with the `len` attribute, so uncertainty binning has signal.

Run from this directory:  python3 make_fixture.py
"""
import random

GROUPS = [
    ("en-de", 200, 0.02, 0.5),
    ("ru-en", 170, 0.00, 1.0),
    ("zh-en", 130, -0.03, 2.0),
]
SEED = 20260822


def main():
    rng = random.Random(SEED)
    lines = []
    row = 0
    for group, count, bias, misreport in GROUPS:
        for _ in range(count):
            row += 1
            length = rng.randint(5, 80)
            sigma_true = 0.05 + 0.003 * length
            y_hat = rng.uniform(-1.0, 1.0)
            y = y_hat + bias + sigma_true * rng.gauss(0.0, 1.0)
            sigma = sigma_true * misreport
            lines.append(
                '{"id": "r%04d", "group": "%s", "y": %r, "y_hat": %r, '
                '"sigma": %r, "attrs": {"len": %r}}'
                % (row, group, y, y_hat, sigma, float(length))
            )
    with open("fixture.jsonl", "w") as f:
        f.write("\n".join(lines) + "\n")
    print("wrote fixture.jsonl (%d records)" % row)


if __name__ == "__main__":
    main()
