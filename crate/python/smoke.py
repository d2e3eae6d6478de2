"""Smoke test for the witness_trees extension module.

Build it first, e.g. `maturin develop -m crates/py/Cargo.toml`, or copy the
cdylib built with `--features extension-module` next to this file as
witness_trees.so.
"""

import json
from fractions import Fraction

import witness_trees as wt


def main():
    assert Fraction(wt.harmonic(4)) == Fraction(25, 12)

    tree, canonical = wt.gen_nwt_lb(3)
    assert Fraction(wt.evaluate(tree, canonical, "node")) == Fraction(53, 30)
    assert wt.is_laminar(tree, canonical)

    path = wt.Tree.from_json(json.dumps({
        "kind": "nwt",
        "nodes": [
            {"id": 1, "terminal": False, "final": True},
            {"id": 2, "terminal": False},
            {"id": 3, "terminal": False, "final": True},
            {"id": 4, "terminal": False},
            {"id": 5, "terminal": False, "final": True},
        ],
        "edges": [{"u": i, "v": i + 1} for i in range(1, 5)],
    }))
    report = json.loads(wt.solve_nwt(path))
    assert report["value"] == "41/30" and report["passed"]

    claw, tiling = wt.gen_claw_lb(11)
    claw_report = json.loads(wt.solve_claw(claw))
    assert claw_report["passed"]
    assert Fraction(claw_report["expectation"]["expected"]) <= Fraction(991, 732)

    value, best = wt.optimal_laminar(wt.gen_nwt_lb(1)[0], "node")
    assert Fraction(value) == Fraction(19, 12), value
    assert len(best) == 5

    spider = wt.Tree.from_json(json.dumps({
        "kind": "nwt",
        "nodes": [{"id": 0, "terminal": False}, {"id": 1, "terminal": False}]
        + [{"id": i, "terminal": True} for i in range(2, 6)],
        "edges": [{"u": 0, "v": 1}, {"u": 0, "v": 2}, {"u": 0, "v": 4}, {"u": 1, "v": 3}, {"u": 1, "v": 5}],
    }))
    crossing = wt.WitnessTree([(2, 3), (4, 5), (3, 4)])
    assert not wt.is_laminar(spider, crossing)
    fixed = wt.laminarize(spider, crossing)
    assert wt.is_laminar(spider, fixed)
    assert Fraction(wt.evaluate(spider, fixed)) <= Fraction(5, 3)

    audit = json.loads(wt.audit_lemma("useful6", 1000))
    assert audit["passed"]

    try:
        wt.WitnessTree([(1, 1)])
    except ValueError:
        pass
    else:
        raise AssertionError("self-loop accepted")

    print("smoke ok", wt.__version__)


if __name__ == "__main__":
    main()
