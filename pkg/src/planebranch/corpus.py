"""The built-in branch corpus and the seeded random-branch generator.

The corpus lives as JSON files under ``data/corpus`` so acceptance runs
never regenerate it.  ``python -m planebranch.corpus DIR`` rewrites the
files from the fixed seed.
"""

from __future__ import annotations

import json
import math
import random
import sys
from importlib import resources
from pathlib import Path

from .branch import BranchParametrization, from_json_obj, validate

CORPUS_SEED = 1729
RANDOM_COUNT = 20

NAMED = [
    {
        "name": "cusp",
        "m": 2,
        "g": [[3, "1"]],
        "expected": {"ord_pw": 3, "mu": 2, "Q": "2", "kappa": "3/2", "bs": 2,
                     "semigroup": [2, 3], "conductor": 2},
    },
    {
        "name": "a4_2_5",
        "m": 2,
        "g": [[5, "1"]],
        "expected": {"ord_pw": 5, "mu": 4, "Q": "3", "kappa": "5/2", "bs": 3,
                     "semigroup": [2, 5], "conductor": 4},
    },
    {
        "name": "branch_4_6_7",
        "m": 4,
        "g": [[6, "1"], [7, "1"]],
        "expected": {"ord_pw": 19, "mu": 16, "Q": "5", "kappa": "19/4", "bs": 5,
                     "semigroup": [4, 6, 13], "conductor": 16},
    },
    {
        "name": "branch_6_8_9",
        "m": 6,
        "g": [[8, "1"], [9, "1"]],
        "expected": {"ord_pw": 41, "mu": 36, "bs": 7},
    },
    {
        "name": "smooth",
        "m": 1,
        "g": [[1, "1"]],
        "expected": {"ord_pw": 0, "mu": 0, "bs": 1, "semigroup": [1], "conductor": 0},
    },
]


def random_branch(rng: random.Random, max_m: int = 8, max_terms: int = 6, max_exp: int = 60,
                  name: str | None = None) -> BranchParametrization:
    """A primitive branch with m <= max_m and at most max_terms terms of degree <= max_exp."""
    while True:
        m = rng.randint(1, max_m)
        count = rng.randint(1, max_terms)
        exps = sorted(rng.sample(range(m, max_exp + 1), count))
        if math.gcd(m, *exps) != 1:
            continue
        coeffs = [
            (k, f"{rng.choice([-1, 1]) * rng.randint(1, 9)}/{rng.randint(1, 9)}") for k in exps
        ]
        return validate(m, coeffs, name=name)


def random_branches(seed: int, count: int, **kwargs) -> list[BranchParametrization]:
    rng = random.Random(seed)
    return [random_branch(rng, **kwargs) for _ in range(count)]


def corpus_documents() -> list[dict]:
    """The raw JSON documents shipped with the package, in file-name order."""
    root = resources.files("planebranch") / "data" / "corpus"
    docs = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            docs.append(json.loads(entry.read_text()))
    return docs


def load_corpus() -> list[BranchParametrization]:
    return [from_json_obj(doc) for doc in corpus_documents()]


def write_corpus(directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    docs = [dict(doc) for doc in NAMED]
    for i, b in enumerate(random_branches(CORPUS_SEED, RANDOM_COUNT)):
        doc = b.to_json_obj()
        doc["name"] = f"random_{i:02d}"
        docs.append(doc)
    for i, doc in enumerate(docs):
        path = directory / f"{i:02d}_{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    write_corpus(Path(sys.argv[1]))
