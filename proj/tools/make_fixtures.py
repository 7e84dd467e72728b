#!/usr/bin/env python3
"""Writes the synthetic multi-region fixtures used by the tests.

Members of a group get symmetric +/- offsets so each cluster mean equals the
listed value exactly.
"""
import pathlib
import sys


def offsets(n, step):
    out = []
    for k in range(n // 2):
        d = step * (1 + k % 3)
        out += [d, -d]
    if n % 2:
        out.append(0.0)
    return out


def write(path, samples, groups, step=0.002):
    lines = ["\t".join(["#chr", "position", "description", *samples])]
    pos = 0
    for name, count, vafs in groups:
        for k, d in enumerate(offsets(count, step)):
            pos += 1000
            row = [v + d if v > 0.05 else v for v in vafs]
            lines.append("\t".join(["1", str(pos), f"{name}{k + 1}", *(f"{v:.4f}" for v in row)]))
    path.write_text("\n".join(lines) + "\n")


def nested_tree(path):
    s = ["normal", "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R9"]
    groups = [
        ("T", 12, [0, .45, .42, .18, .40, .44, .41, .43, .24]),
        ("A", 8, [0, .40, .38, .15, 0, .40, .37, .38, .21]),
        ("B", 6, [0, 0, 0, .03, .36, 0, 0, 0, .03]),
        ("C", 5, [0, .35, .33, 0, 0, 0, 0, 0, 0]),
        ("D", 5, [0, 0, 0, 0, 0, .35, .32, .33, 0]),
        ("P1_", 4, [0, .30, 0, 0, 0, 0, 0, 0, 0]),
        ("P4_", 5, [0, 0, 0, 0, .30, 0, 0, 0, 0]),
        ("P5_", 4, [0, 0, 0, 0, 0, .30, 0, 0, 0]),
        ("P6_", 3, [0, 0, 0, 0, 0, 0, .28, 0, 0]),
        ("P7_", 3, [0, 0, 0, 0, 0, 0, 0, .30, 0]),
    ]
    write(path, s, groups)


def branch_conflict(path):
    s = ["normal", "R1", "R2", "R3", "R10"]
    groups = [
        ("P", 8, [0, .40, .40, .40, .34]),
        ("A", 6, [0, 0, 0, .30, .32]),
        ("B", 4, [0, .007, .25, 0, .27]),
        ("C", 3, [0, .20, .007, 0, .21]),
    ]
    write(path, s, groups)


if __name__ == "__main__":
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
    out.mkdir(parents=True, exist_ok=True)
    nested_tree(out / "nested_tree.tsv")
    branch_conflict(out / "branch_conflict.tsv")
