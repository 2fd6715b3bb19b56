import numpy as np
import pytest
import sympy as sp

from penroselab import (
    CylinderProfile,
    DomainError,
    EuclideanProfile,
    RadialGrid,
    SchwarzschildLikeProfile,
    TabulatedProfile,
    default_grid,
    read_tabulated,
    unit_sphere_area,
    write_tabulated,
)
from penroselab.geometry import radial_laplacian


def test_unit_sphere_area():
    assert unit_sphere_area(3) == pytest.approx(4 * np.pi, rel=1e-15)
    assert unit_sphere_area(4) == pytest.approx(2 * np.pi**2, rel=1e-15)


def test_dimension_validation():
    with pytest.raises(ValueError):
        EuclideanProfile(n=2)
    with pytest.raises(ValueError):
        SchwarzschildLikeProfile(a=-1.0, b=0.5)
    with pytest.raises(ValueError):
        SchwarzschildLikeProfile(a=1.0, b=-0.5)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_closed_form_derivatives_match_symbolic(n):
    r = sp.symbols("r", positive=True)
    cases = [
        (SchwarzschildLikeProfile(1.3, 0.7, n=n), sp.Rational(13, 10) + sp.Rational(7, 10) * r ** (2 - n)),
        (CylinderProfile(n=n), r ** (sp.Rational(2 - n, 2))),
    ]
    for profile, expr in cases:
        du = sp.lambdify(r, sp.diff(expr, r))
        d2u = sp.lambdify(r, sp.diff(expr, r, 2))
        for rv in (0.3, 1.0, 7.5):
            assert profile.du(rv) == pytest.approx(du(rv), rel=1e-12)
            assert profile.d2u(rv) == pytest.approx(d2u(rv), rel=1e-12)


def test_vectorized_evaluation(schw):
    radii = np.geomspace(0.1, 10, 32)
    assert schw.u(radii).shape == radii.shape
    assert isinstance(schw.u(1.0), float)


def test_domain_check(schw):
    with pytest.raises(DomainError):
        radial_laplacian(schw, 0.0)
    with pytest.raises(DomainError):
        radial_laplacian(schw, -1.0)


def test_tabulated_validation():
    r = np.array([1.0, 2.0, 3.0, 4.0])
    with pytest.raises(ValueError):
        TabulatedProfile(r, np.array([1.0, 1.0, -1.0, 1.0]))
    with pytest.raises(ValueError):
        TabulatedProfile(np.array([1.0, 2.0, 2.0, 4.0]), np.ones(4))
    with pytest.raises(ValueError):
        TabulatedProfile(np.array([-1.0, 2.0, 3.0, 4.0]), np.ones(4))


def test_tabulated_roundtrip(tmp_path, schw):
    radii = np.geomspace(1e-3, 1e3, 4096)
    path = tmp_path / "profile.dat"
    write_tabulated(path, radii, schw.u(radii), header="sample")
    tab = read_tabulated(path)
    probe = np.geomspace(1e-2, 1e2, 64)
    assert np.allclose(tab.u(probe), schw.u(probe), rtol=1e-12)
    assert np.allclose(tab.du(probe), schw.du(probe), rtol=1e-8)
    assert np.allclose(tab.d2u(probe), schw.d2u(probe), rtol=1e-6, atol=1e-12)


def test_tabulated_reader_rejects_single_column(tmp_path):
    path = tmp_path / "bad.dat"
    path.write_text("# comment\n1.0\n2.0\n3.0\n4.0\n")
    with pytest.raises(ValueError):
        read_tabulated(path)


def test_grid_validation():
    with pytest.raises(ValueError):
        RadialGrid(1.0, 0.5)
    with pytest.raises(ValueError):
        RadialGrid(1.0, 2.0, count=1)


def test_default_grid_respects_domain(tmp_path, schw):
    grid = default_grid(schw)
    assert grid.r_lo == 1e-4 and grid.r_hi == 1e4 and grid.count == 4096
    radii = np.geomspace(1e-2, 1e2, 512)
    path = tmp_path / "p.dat"
    write_tabulated(path, radii, schw.u(radii))
    tab = read_tabulated(path)
    grid = default_grid(tab)
    assert grid.r_lo >= 1e-2 and grid.r_hi <= 1e2
