"""Acceptance suite: one test per criterion, one printed line per criterion.

These are the package's exit criteria; the implementations live in
khinfam.selftest so the CLI ``selftest`` verb runs exactly the same checks.

Known state: criterion 3 fails and is expected to keep failing. It demands
that the closed-saddle estimate (approximate mean/deviation laws, no root
finding) and the exact-saddle estimate for the partition series agree within
1% at n = 100, 500, 1000. The measured log-space-exponentiated ratios are
1.0243, 1.0109 and 1.0077: the two saddle radii differ by about 0.4 standard
deviations at n = 100 (the admissibility defect of the approximate mean law
is O(sqrt(s))), so the 1% band only holds from roughly n = 600 onward. Both
estimators are pinned by their defining formulas, so the gap is a fact about
the formulas, not an implementation choice; the per-estimator accuracy
checks (criteria 2 and the closed-vs-exact bands in criterion 4) all pass.

Ratio convention throughout: exact/estimate, matching the estimator-vs-
oracle comparisons everywhere else in the package. For criterion 9 the
reversed ratio estimate/exact would sit above the 1/(4n) band by exactly its
second-order term 1/(32 n^2) (measured 1.0025031 at n = 100 against a band
of 1.0025), while exact/estimate sits below it; the band is only attainable
under the package-wide convention, which is therefore the one used.
"""

from khinfam import selftest


def _check(result):
    line = f"{'PASS' if result.passed else 'FAIL'} criterion {result.number}: " \
           f"{result.name} ({result.detail})"
    print(line)
    assert result.passed, line


def test_criterion_01_factorial_saddle():
    _check(selftest.criterion_1())


def test_criterion_02_hardy_ramanujan():
    _check(selftest.criterion_2())


def test_criterion_03_closed_vs_exact_saddle():
    _check(selftest.criterion_3())


def test_criterion_04_distinct_and_plane():
    _check(selftest.criterion_4())


def test_criterion_05_bell_closed_form():
    _check(selftest.criterion_5())


def test_criterion_06_lagrange_triangle():
    _check(selftest.criterion_6())


def test_criterion_07_tree_asymptotics():
    _check(selftest.criterion_7())


def test_criterion_08_borel_tanner():
    _check(selftest.criterion_8())


def test_criterion_09_central_binomial():
    _check(selftest.criterion_9())


def test_criterion_10_small_and_fixed_k():
    _check(selftest.criterion_10())


def test_criterion_11_property_suite():
    _check(selftest.criterion_11())


def test_criterion_12_monte_carlo():
    _check(selftest.criterion_12())
