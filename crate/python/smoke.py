"""Smoke test for the fedder extension module.

    pip install --no-build-isolation -e crates/py
    python3 python/smoke.py
"""

import fedder


def expect_raises(exc, fn, *args):
    try:
        fn(*args)
    except exc as e:
        return e
    raise AssertionError(f"{fn.__name__}{args} did not raise {exc.__name__}")


def main():
    f2, f5 = fedder.Field(2), fedder.Field(5)
    assert f5.order == 5 and fedder.Field(5, 2).order == 25

    ok, witness = fedder.is_fsplit("x^3 + y^3 + z^3 + w^3", ["x", "y", "z", "w"], f2)
    assert not ok and witness is None

    eq = fedder.DP1Equation("y^2 - (x^3 + s^5*t - s*t^5)", f5)
    assert not eq.is_fsplit() and eq.lemma_predicate()
    assert eq.discriminant() == eq.discriminant(formulaire=True)
    assert eq.smoothness()["verdict"] == "smooth"
    report = eq.classify()
    assert report["condition_c"]["delta_class"]["label"] == "TWO_P1_F5"
    assert report["consistent"] and report["theorem_pattern"] is True

    same = fedder.DP1Equation.from_coefficients("a6: 0 1 0 0 0 -1 0\n", f5)
    assert same == eq

    branch = fedder.DP1Equation("y^2 + t^3*y - x^3", f2).classify()
    assert branch["condition_c"]["delta_class"]["label"] == "BRANCH_TRIPLE"

    m = fedder.GL2Matrix(["1", "1", "0", "1"], f5)
    moved = eq.transform(m)
    assert not moved.is_fsplit() and moved.classify()["condition_c"]["delta_class"]["label"] == "TWO_P1_F5"
    assert m.inverse().entries() == ["1", "4", "0", "1"]

    n, pts = fedder.roots("s^5*t - s*t^5", f5)
    assert n == 1 and len(pts) == 6 and all(k == 1 for _, k in pts)
    mat, lam = fedder.la5_normalize("s^5*t - s*t^5", f5)
    assert mat.entries() == ["1", "0", "0", "1"] and lam == "1"
    expect_raises(fedder.MathError, fedder.la5_normalize, "s^6", f5)

    err = expect_raises(fedder.ParseError, fedder.DP1Equation, "y^2 - (x^3", f5)
    assert err.args[1] == 6
    assert issubclass(fedder.ParseError, ValueError)

    summary = fedder.census(3, space="a6-only")
    assert summary["total"] == 2187 and summary["non_fsplit"] == 2187 and summary["mismatch_count"] == 0
    sampled = fedder.census(5, space="normalized", samples=2000, seed=7, workers=2)
    assert sampled["mismatch_count"] == 0
    expect_raises(fedder.MathError, fedder.census, 5)

    print("smoke: ok")


if __name__ == "__main__":
    main()
