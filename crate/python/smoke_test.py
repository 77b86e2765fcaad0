"""Smoke test for the involution_py extension module."""

from fractions import Fraction

import involution_py as iv


def main():
    s = iv.Scenario(3, 1, [2, 4, 3])
    assert s.chase().asked == [4, 2, 1]
    assert s.match_all() == {4: (1, 3)}
    assert iv.Scenario.from_json(s.to_json()) == s
    assert "asks" in s.story()

    try:
        iv.Scenario(2, 1, [3, 3])
    except iv.InvolutionError as e:
        assert str(e).startswith("non_injective")
    else:
        raise AssertionError("duplicate mistress accepted")

    assert iv.scenario_count(3, 1) == 24
    pmf = iv.single_pmf(3, 1)
    assert pmf.offset == 1
    assert sum(pmf.masses) == 1
    assert pmf.mean() == Fraction(5, 2)
    assert iv.single_moments(3, 1)["mean"] == pmf.mean()
    assert iv.pgf("single", 3, 1)[1:] == pmf.masses

    hist = iv.simulate("single", 10, 2, 20_000, seed=7)
    assert hist.trials == 20_000
    assert iv.tv_distance(hist, iv.single_pmf(10, 2)) < 0.05
    assert hist.counts == iv.simulate("single", 10, 2, 20_000, seed=7, threads=1).counts

    assert iv.geometric_limit_distance(1, 1) > 0
    print("smoke test ok")


if __name__ == "__main__":
    main()
