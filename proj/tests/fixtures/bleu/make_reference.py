"""Regenerates reference.json with sacrebleu (add-k smoothing, k=1, 13a)."""
import json
import os

from sacrebleu.metrics import BLEU

PAIRS = [
    ("the cat sat", ["the cat sat on the mat"]),
    ("the cat sat on the mat", ["the cat sat on the mat"]),
    ("return a + b;", ["return a - b;"]),
    ("if (x > 0) { return x; }", ["if (x >= 0) { return x; }"]),
    ("yield x", ["yield flatten(x)"]),
    ("yield flatten(x)", ["yield x"]),
    ("int i = 0;", ["for (int i = 0; i < n; i++)"]),
    ("return num % 2 == 0", ["return num % 2 == 0"]),
    ("return num % 2 != 0", ["return num % 2 == 0"]),
    ("a b c d e f g", ["a b c d x f g"]),
    ("completely different words", ["nothing shared here"]),
    ("x = y.z(1, 2.5, -3)", ["x = y.z(1, 2.5, 3)"]),
    ("AbstractStep step = getStep(); if (step == null) { return false; } return step.isFailOnCCE();",
     ["AbstractStep step = getStep(); if (step == null) { return false; } return step.isFailOnCCE();"]),
    ("return getStep().isFailOnCCE();",
     ["AbstractStep step = getStep(); if (step == null) { return false; } return step.isFailOnCCE();"]),
    ("s = \"# not a comment\"", ["s = \"# a comment\""]),
    ("the the the the", ["the cat the mat"]),
    ("a", ["a b c d"]),
    ("while (i < 10) i++;", ["while (i <= 10) i++;", "while (i < 10) { i++; }"]),
    ("foo(bar, baz) &amp;&amp; qux", ["foo(bar, baz) && qux"]),
    ("list.add(item); list.remove(0);", ["list.add(item);", "list.remove(0); list.add(item);"]),
]


def main():
    scorer = BLEU(tokenize="13a", smooth_method="add-k", smooth_value=1, effective_order=False)
    out = []
    for pred, refs in PAIRS:
        score = scorer.corpus_score([pred], [[r] for r in refs]).score
        out.append({"pred": pred, "refs": refs, "bleu": score})
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "reference.json")
    with open(path, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
