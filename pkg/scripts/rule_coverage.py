"""Count machine rule firings over the corpus and a batch of generated programs."""

import argparse
from collections import Counter
from pathlib import Path

from ccbox.frontend import parse
from ccbox.machine import RULES, run
from ccbox.testkit import GenConfig, ProgramGen, RandomSource
from ccbox.testkit.choices import case_seed
from ccbox.typecheck import TypingError, infer_type
from ccbox.wellformed import Env

ROOT = Path(__file__).resolve().parent.parent


def firings(program) -> Counter:
    return Counter(t.rule for t in run(program, trace=True).trace)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--corpus", type=Path, default=ROOT / "corpus")
    args = ap.parse_args()

    corpus, generated = Counter(), Counter()
    for path in sorted(args.corpus.glob("*.ccbox")):
        e = parse(path.read_text(encoding="utf-8")).term
        try:
            infer_type(Env(), e)
        except TypingError:
            continue
        corpus += firings(e)
    cfg = GenConfig(seed=args.seed, count=args.count)
    for i in range(args.count):
        generated += firings(ProgramGen(RandomSource(case_seed(args.seed, "program", i)), cfg).program())

    print(f"{'rule':<8}{'corpus':>8}{'generated':>11}{'total':>8}")
    for r in RULES:
        print(f"{r:<8}{corpus[r]:>8}{generated[r]:>11}{corpus[r] + generated[r]:>8}")


if __name__ == "__main__":
    main()
