import cmath
import math

import pytest

import szego


def test_dimensions():
    assert szego.dim_fourier([1, 2], 7) == 4
    assert szego.dim_table([1, 1], 5) == [1, 2, 3, 4, 5, 6]
    assert szego.monomials([1, 2], 7)[0] == [1, 3]


def test_stratification():
    s = szego.stratification([2, 4])
    assert s["ell0"] == 2
    assert s["p"] == 4


def test_round_kernel_closed_form():
    x = [0.6, 0.8j]
    y = [0.8, -0.6]
    ip = sum(a * b.conjugate() for a, b in zip(x, y))
    k = 9
    expected = (k + 1) * ip**k / (2 * math.pi**2)
    assert abs(szego.kernel([1, 1], k, x, y) - expected) < 1e-12


def test_leading_coefficient():
    t = 0.35
    x = [math.sqrt(1 - t), math.sqrt(t)]
    fit = szego.fit_diagonal([1, 2], x, list(range(60, 201, 10)))
    assert fit["b0_hat"] == pytest.approx(1 / (2 * math.pi**2 * (1 + t) ** 2), rel=1e-6)
    assert szego.calibrate(1) == pytest.approx(1.0, rel=1e-4)
    assert szego.calibrate(1, "euclidean_unit_dz") == pytest.approx(2.0, rel=1e-4)


def test_levi():
    d = szego.levi([1, 1], [1, 0])
    assert d["vol_density"] == pytest.approx(1.0)


def test_reduction():
    assert szego.reduced_weights([1, 1, 1], [1, -1, 0]) == [1, 2]
    assert [szego.invariant_dim([1, 1, 1], [1, -1, 0], k) for k in range(5)] == [1, 1, 2, 2, 3]
    with pytest.raises(szego.ConfigError):
        szego.reduced_weights([1, 1, 1], [1, 1, 1])


def test_errors():
    with pytest.raises(szego.ConfigError):
        szego.dim_fourier([1, 0], 3)
    with pytest.raises(szego.SzegoError):
        szego.run("nope")


def test_run_command():
    report, code = szego.run("dims", "--weights", "1,2", "--k-max", 10)
    assert code == 0
    assert report["schema_version"] == "1"
    assert report["command"] == "dims"
    assert "dims" in szego.commands()
    again, _ = szego.run("dims", "--weights", "1,2", "--k-max", 10)
    assert again == report
    _, fail = szego.run("calibrate", "--tol", "1e-30")
    assert fail == 4
