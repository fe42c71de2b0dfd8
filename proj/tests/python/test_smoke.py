import math

import pytest

import levyma

INDICATOR = {"builtin": "indicator"}
CP = {"kind": "compound_poisson", "rate": 4.0, "seed": 3,
      "jump_law": {"name": "gaussian", "sigma": 1.0}}


def test_kernel_functions():
    assert levyma.eval_g({"builtin": "lfsm", "alpha": 0.3}, 2.0) == pytest.approx(2 ** 0.3, rel=1e-15)
    assert levyma.eval_g(INDICATOR, -0.1) == 0.0
    assert levyma.filter_weights(3) == [1, -3, 3, -1]
    assert levyma.q_const(2, 0.5) == pytest.approx(-0.25)
    assert levyma.eval_h0(2, 0.5, 100.0) == pytest.approx(-0.00025380552073375307778, rel=1e-10)
    alpha_min, idx = levyma.min_alpha_set(
        {"singularities": [{"theta": 0.0, "alpha": 0.5, "c": 1.0},
                           {"theta": 0.4, "alpha": 0.3, "c": 1.0}]})
    assert alpha_min == 0.3
    assert list(idx) == [1]


def test_indicator_path_and_toy_limit():
    jumps = levyma.JumpRecord((-2.0, 1.0), [-0.5, 0.25], [1.5, -2.0])
    assert len(jumps) == 2
    path = levyma.simulate_path(INDICATOR, jumps, 8)
    assert path == [1.5, 1.5, -0.5, -0.5, -0.5, -2.0, -2.0, -2.0, -2.0]
    report = levyma.power_variation(path, 2.0, 1)
    assert report["V"] == pytest.approx(levyma.limit_toy(jumps, 2.0))
    assert levyma.power_sum(jumps, 2.0, (0.0, 1.0)) == 4.0


def test_simulation_is_reproducible():
    a = levyma.simulate_jumps(CP, (-1.0, 1.0), stream=2)
    b = levyma.simulate_jumps(CP, (-1.0, 1.0), stream=2)
    assert a.times == b.times and a.sizes == b.sizes
    assert levyma.bg_index(CP) == 0.0


def test_series_and_subsequences():
    value, tail, R = levyma.series_Vmz(2, 0.5, True, 2.0, 0.3, R=10000)
    assert R == 10000
    assert value > 0 and 0 <= tail < 1e-3 * value
    plan = levyma.find_subsequence([0.5], [0.0], 1e-9, 1, 20, 5)
    assert plan["terms"] == [2, 4, 6, 8, 10]
    assert levyma.frac(-0.25) == 0.75


def test_shift_law_and_ks():
    ks = levyma.shift_law_check(math.sqrt(2.0), [10, 1000], 2000, 1)
    assert len(ks) == 2 and all(0 <= d <= 1 for d in ks)
    assert levyma.ks_distance([0.0, 1.0], [0.5]) == 0.5


def test_errors_map_to_python_exceptions():
    with pytest.raises(levyma.PreconditionError):
        levyma.increments([0.0, 1.0], 3)
    with pytest.raises(levyma.ConfigError):
        levyma.eval_g({"builtin": "nope"}, 0.5)
    with pytest.raises(ValueError):
        levyma.JumpRecord((0.0, 1.0), [0.5, 0.4], [1.0, 1.0])


def test_run_experiment():
    rows, summary, meta = levyma.run_experiment({
        "regime": "toy", "k": 1, "p": 1.5, "grid_sizes": [512, 2048],
        "replications": 3, "base_seed": 9, "past_window": 2.0,
        "kernel": INDICATOR, "levy": CP,
    })
    header, *lines = summary.strip().splitlines()
    assert header.startswith("n,count,median_rel_error")
    assert len(lines) == 2
    assert len(rows.strip().splitlines()) == 1 + 6
    assert meta["config"]["regime"] == "toy"
