"""Smoke test for the pyblockineq extension module."""

import math

import pyblockineq as bi


def main():
    astar = bi.BlockMatrix(2, 2, [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]])
    assert astar.partial_trace_1() == [[4, 0], [0, 6]]
    assert astar.partial_trace_2() == [[3, 0], [0, 7]]
    assert bi.lu_det(astar.to_list()) == 24

    v = bi.check("main", astar)
    assert v.holds
    scale = v.divisor ** 4
    assert math.isclose(v.lhs * scale, 9559, rel_tol=1e-12)
    assert math.isclose(v.rhs * scale, 552, rel_tol=1e-12)
    assert bi.check("ando", astar).gap == 1.0
    assert bi.check("schatten", astar, q=math.inf).gap == 1.0

    bell = bi.BlockMatrix(2, 2, [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]])
    try:
        bi.check("ppt_reversal", bell)
    except bi.HypothesisError:
        pass
    else:
        raise AssertionError("entangled input accepted as PPT")

    a = bi.BlockMatrix.rand_sector(seed=3, m=2, n=2, alpha=math.pi / 4)
    alpha, re_pd = bi.sector_margin(a.to_list())
    assert re_pd and alpha <= math.pi / 4 + 1e-9
    assert bi.check("sector_main", a, alpha=math.pi / 4).holds

    report = bi.run_suite(["lin", "main", "swapped"], [(2, 2), (3, 2)], trials=50, seed=1)
    assert all(row["holds"] for row in report["rows"])
    assert len(report["rows"]) == 300

    rec = bi.minimize_gap("schatten", 2, 2, budget=20, seed=1, q=1.0)
    assert abs(rec["best_gap"]) <= 1e-9

    print("pyblockineq smoke test passed:", len(bi.check_ids()), "checks available")


if __name__ == "__main__":
    main()
