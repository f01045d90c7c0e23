"""Exercises the Python bindings against the bundled corpus.

Build the extension first, e.g. `maturin develop -m crates/py/Cargo.toml`.
"""

from fractions import Fraction
from math import gcd
from pathlib import Path

import gclwb

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def read(name):
    return (CORPUS / name).read_text()


def main():
    prog = gclwb.Program(read("gcd.gcl"))
    assert prog.vars == ["x", "y"], prog.vars
    for x, y in [(12, 18), (7, 5), (30, 30)]:
        outs = prog.run_all({"x": x, "y": y})
        g = gcd(x, y)
        assert [(o.kind, o.state) for o in outs] == [("terminated", {"x": g, "y": g})], outs
    assert prog.run_one({"x": 4, "y": 6}, seed=1).state == {"x": 2, "y": 2}
    assert all(vc.valid for vc in prog.verify("x=1..20,y=1..20"))

    mutant = gclwb.Program(read("gcd-bound-x.gcl"))
    failing = [vc for vc in mutant.verify("x=-3..12,y=-3..12") if not vc.valid]
    assert failing and failing[0].counterexample is not None

    print("wp:", gclwb.wp("x := x + 1", "x > 0", ["x"]))

    proof = gclwb.prove(read("heron.proof"))
    assert proof.valid and proof.relation == "=", proof
    assert not gclwb.prove(read("heron-no-definition.proof")).valid

    dekker = gclwb.explore("dekker")
    assert dekker.mutual_exclusion and dekker.deadlock_free, dekker
    assert not gclwb.explore("philosophers:n=3,strategy=symmetric").deadlock_free
    assert gclwb.ring_analysis(4, 4)["stabilizes"]

    dist = gclwb.shortest_paths(read("triangle.tsv"), "A")
    assert dist == {"A": Fraction(0), "B": Fraction(1), "C": Fraction(2)}, dist
    assert gclwb.banker_safe_order(10, [4, 4], [8, 6]) is not None
    assert gclwb.banker_safe_order(10, [4, 4], [10, 10]) is None

    bits = gclwb.fair_bits(10_000, bias=0.3, seed=7)
    assert bits == gclwb.fair_bits(10_000, bias=0.3, seed=7)
    assert 4_700 < sum(bits) < 5_300
    assert set(gclwb.roulette(5, 1_000, bias=0.3)) == set(range(5))

    assert gclwb.pythagoras_signs(3, 4, 5) == (0, 0)
    assert gclwb.pythagoras_signs(2, 3, 4) == (-1, -1)
    assert gclwb.sylvester_line([(0, 0), (1, 1), (2, 2)]) is None
    assert gclwb.sylvester_line([(0, 0), (1, 0), (0, 1)]) is not None
    assert len(gclwb.knight_tour(5)) == 25
    assert gclwb.knight_tour(4) is None
    plan = gclwb.river_crossing()
    assert len(plan) == 7 and plan[0] == "goat", plan
    print("smoke test passed")


if __name__ == "__main__":
    main()
