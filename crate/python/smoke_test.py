"""Smoke test for the projconn extension module.

Run after `maturin develop` (or with the built module on sys.path):

    python python/smoke_test.py
"""

import cmath
import math

import projconn as pc


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    # Jets and the Schwarzian.
    f = pc.Jet(0, [0, 1, 0, 5])
    s = pc.schwarzian(f)
    assert s.order == 0
    close(s.value, 30, 1e-12)
    g = pc.Jet(0, [0, 1, 0.5, 0.2, 0.1, 0.0, 0.0, 0.0, 0.0])
    assert g.compose(g.comp_inverse()).max_abs_diff(pc.Jet.identity(0, 8)) < 1e-12
    u = g + pc.Jet(0, [1] + [0] * 8)
    assert ((g * u) / u).max_abs_diff(g) < 1e-12
    assert pc.Jet.from_json(g.to_json()) == g

    # Solver round trip and the Moebius ambiguity between gauges.
    h = pc.Jet(0, [2] + [0] * 8)
    w = pc.solve(h, 11)
    close(w.coeff(3), 1 / 3, 1e-12)
    close(w.coeff(5), 2 / 15, 1e-12)
    assert pc.schwarzian(w).max_abs_diff(h) < 1e-10
    rho, residual = pc.solution_ambiguity(w, pc.solve(h, 11, a2=1))
    assert residual < 1e-8

    # Moebius maps.
    m = pc.MoebiusMap(2, 1, 1, 1)
    assert m.apply(None) == 2
    assert m.apply(-1) is None
    assert pc.schwarzian(m.to_jet(0, 8)).max_abs_diff(pc.Jet(0, [0] * 6)) < 1e-10
    fitted, residual = pc.MoebiusMap.fit_jet(m.to_jet(0, 6))
    assert fitted.distance(m) < 1e-10 and residual < 1e-10
    e = pc.IsotropyElement.fit(pc.Jet(0, [0, 4, 1]))
    assert e.to_jet(2).max_abs_diff(pc.Jet(0, [0, 4, 1])) < 1e-14

    # Bidifferentials: the flat germ pulls back to the Schwarzian.
    b = pc.pullback(pc.flat(0, 6), g)
    report = pc.canonical_2delta_check(b)
    assert report["pass"], report
    p = pc.proj_connection(b)
    assert p.max_abs_diff(pc.schwarzian(g).truncate(p.order)) < 1e-12
    shifted = pc.shift_trivialisation(b, pc.Jet(0, [1, 0, 0, 0, 0]))
    close(pc.proj_connection(shifted).value - p.value, 1, 1e-12)
    try:
        pc.proj_connection(pc.BidiffGerm(0, [[0, 1], [0, 0]]))
    except pc.ProjconnError as exc:
        assert exc.args[0] == "NotCanonical"
    else:
        raise AssertionError("asymmetric germ accepted")

    # Torsor.
    t = pc.canonical_form(pc.Jet(0, [0, 2, 0, 4]))
    close(t.canonical_c, 2, 1e-14)
    close(pc.to_projective_structure_scalar(pc.act_quadratic(t, 4)), 36, 1e-12)
    close(pc.coordinate_change_defect(pc.Jet(0, [0, 1, 1, 0]), pc.Jet.identity(0, 3)), -1, 1e-14)

    # Surfaces.
    close(pc.cross_ratio_g0(0, 1, 2, 3), 1 / 3, 1e-16)
    close(pc.cross_ratio_g0(None, 1, 2, 3), pc.cross_ratio_g0(1e9, 1, 2, 3), 1e-8)
    close(pc.coalesce(0.5, 0.1), 1 / 0.4**2, 1e-8)
    tau = pc.TorusModulus(1j)
    close(pc.torus_proj_connection(tau), 6 * math.pi, 1e-10)
    mod = pc.TorusModulus(0.1 + 1.2j)
    x, y = 0.3 + 0.2j, 0.05j
    omega = pc.omega_b_g1(x, y, mod)
    close(pc.coalesce(x, y, mod), omega, 1e-6)
    close(pc.weierstrass_p(x, mod), pc.weierstrass_p_theta(x, mod), 1e-8)
    g2, g3 = pc.eisenstein_invariants(mod)
    pv, dp = pc.weierstrass_p(x, mod), pc.weierstrass_p_prime(x, mod)
    assert abs(dp**2 - (4 * pv**3 - g2 * pv - g3)) <= 1e-6 * abs(dp**2)
    germ = pc.omega_b_germ(mod, 0)
    close(pc.proj_connection(germ).value, pc.torus_proj_connection(mod), 1e-8)
    close(pc.theta1(-x, mod), -pc.theta1(x, mod), 1e-12)
    assert cmath.isfinite(pc.cross_ratio_g1(0.1, 0.4 + 0.1j, 0.2 + 0.5j, 0.7 + 0.3j, mod))
    try:
        pc.TorusModulus(-1j)
    except pc.ProjconnError as exc:
        assert exc.args[0] == "InvalidModulus"
    else:
        raise AssertionError("lower half-plane accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
