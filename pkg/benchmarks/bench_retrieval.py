#!/usr/bin/env python3
"""Benchmark the retrieval scan: compiled kernel vs pure-Python paths.

Three routes are timed on synthetic case bases:

  pairwise   the definitional per-pair scorer (always available)
  packed-py  the packed column scan in pure Python
  packed-c   the compiled kernel (skipped when the extension is missing)

All three produce bit-identical totals; this script also asserts that on
every run. Usage: python benchmarks/bench_retrieval.py [--sizes 1000,10000]
"""

from __future__ import annotations

import argparse
import random
import time

from clarify import (
    Case,
    CaseBase,
    FlagValue,
    NumericValue,
    SimilarityConfig,
    Solution,
    SymbolicValue,
    TextValue,
    load_ontology,
)
from clarify._native import HAVE_KERNEL, kernel_scan
from clarify._pack import CaseBaseIndex, run_scan, scan_py
from clarify.retrieval import score_all

FEATURES = 12


def build_ontology(rng: random.Random, concepts: int = 200):
    import json

    docs = [{"id": "c0", "definition": "top"}]
    ids = ["c0"]
    for i in range(1, concepts):
        parents = rng.sample(ids, k=min(len(ids), rng.choice([1, 1, 2])))
        docs.append({"id": f"c{i}", "definition": f"concept {i}", "parents": parents})
        ids.append(f"c{i}")
    return load_ontology(json.dumps({"concepts": docs})), ids


def build_base(rng: random.Random, n: int, ids):
    kinds = {f"f{j:02d}": rng.choice(["numeric", "symbolic", "flag", "text"]) for j in range(FEATURES)}
    ranges = {name: (0.0, 100.0) for name in kinds}
    texts = ["ok", "warn", "fail", "unknown"]

    def value(name):
        kind = kinds[name]
        if kind == "numeric":
            lo, hi = ranges[name]
            return NumericValue(rng.uniform(lo, hi), lo, hi)
        if kind == "symbolic":
            return SymbolicValue(rng.choice(ids))
        if kind == "flag":
            return FlagValue(rng.random() < 0.5)
        return TextValue(rng.choice(texts))

    entries = []
    for i in range(n):
        names = rng.sample(sorted(kinds), k=rng.randint(6, FEATURES))
        entries.append(
            (Case(f"case-{i:06d}", {name: value(name) for name in names}), Solution("act"))
        )
    base = CaseBase(tuple(entries))
    query = Case("query", {name: value(name) for name in sorted(kinds)[:10]})
    return base, query


def timed(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,5000,10000")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = random.Random(args.seed)
    ontology, ids = build_ontology(rng)

    print(f"compiled kernel available: {HAVE_KERNEL}")
    header = f"{'cases':>8}  {'pairwise':>12}  {'packed-py':>12}  {'packed-c':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))

    config = SimilarityConfig(default_weight=1.0)
    for n in sizes:
        base, query = build_base(rng, n, ids)
        index = CaseBaseIndex(base)
        plan = index.plan(query, config, ontology)
        assert plan is not None, "benchmark query should always be packable"

        t_pair, pairwise = timed(
            lambda: score_all(query, base, config, ontology, use_native=False), repeats=2
        )
        t_py, (py_totals, _) = timed(lambda: scan_py(index, plan))
        assert list(py_totals) == pairwise, "packed-py diverged from the definition"

        if HAVE_KERNEL:
            t_c, (c_totals, _) = timed(lambda: run_scan(index, plan, kernel_scan))
            assert list(c_totals) == pairwise, "kernel diverged from the definition"
            speedup = t_pair / t_c
            print(
                f"{n:>8}  {t_pair * 1e3:>10.2f}ms  {t_py * 1e3:>10.2f}ms  "
                f"{t_c * 1e3:>10.2f}ms  {speedup:>7.1f}x"
            )
        else:
            print(
                f"{n:>8}  {t_pair * 1e3:>10.2f}ms  {t_py * 1e3:>10.2f}ms  "
                f"{'n/a':>12}  {'':>8}"
            )


if __name__ == "__main__":
    main()
