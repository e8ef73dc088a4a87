#!/usr/bin/env python3
"""Writes plurality election models into the corpus directory."""
import argparse
import pathlib


def plurality(name, votes):
    n = len(votes)
    us = ", ".join(f"U{i}" for i in range(1, n + 1))
    lines = [
        f"# {n} voters choose among 0 (A), 1 (B) and 2 (C). O is the plurality winner, 3 on a tie.",
        f"model {name}",
        "",
        f"exogenous {us}: {{0, 1, 2}}",
        "",
    ]
    lines += [f"endogenous V{i}: {{0, 1, 2}} = U{i}" for i in range(1, n + 1)]
    count = {c: " + ".join(f"(V{i} = {c})" for i in range(1, n + 1)) for c in range(3)}
    arms = []
    for c in range(3):
        a, b = [d for d in range(3) if d != c]
        arms.append(f"  {count[c]} > {count[a]}\n    & {count[c]} > {count[b]} -> {c};")
    lines.append("endogenous O: {0, 1, 2, 3} = case {")
    lines += arms
    lines += ["  default -> 3", "}", ""]
    ctx = ", ".join(f"U{i} = {v}" for i, v in enumerate(votes, 1))
    lines.append(f"context u {{ {ctx} }}")
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "corpus"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    (out / "plurality_5_2.cm").write_text(plurality("plurality_5_2", [0] * 5 + [1] * 2))
    (out / "plurality_17_2.cm").write_text(plurality("plurality_17_2", [0] * 17 + [1] * 2))


if __name__ == "__main__":
    main()
