"""Smoke test for the fracyam extension module."""

import math

import fracyam


def main():
    c = fracyam.sphere_constants(3, 0.5)
    assert abs(c["d_gamma"] + 1.0) < 1e-15
    assert abs(c["q_curv"] - 1.0) < 1e-15

    r = fracyam.scattering_multiplier(3, 0.25, 2)
    assert abs(r["value"] - r["closed_form"]) < 1e-6 * r["closed_form"]

    p = fracyam.AdaptedProfile(3, 0.5)
    phi, _, _ = p.phi(1.0)
    assert abs(phi - 0.5 / math.cosh(0.5) ** 2) < 1e-8
    assert abs(p.g0 + 1.0) < 1e-6 and p.monotone

    h = fracyam.WarpedMetric(3)
    c1 = fracyam.Compactification(h, "type_i", gamma=0.5)
    grid = [2.0 + i for i in range(19)]
    j = c1.weighted_j(grid)
    assert max(abs(v) for v in j["lemma"]) < 1e-8
    assert abs(c1.mean_curvature(grid)["limit"] - 3.0) < 1e-4
    assert abs(c1.energy(30.0)["value"] - 2 * math.pi ** 2) < 1e-6

    y = fracyam.minimize_rayleigh(3, 0.5, kmax=6, restarts=2)
    assert abs(y["min"] - c["yamabe"]) < 1e-6

    chain = fracyam.theorem_chain_report(3, 0.5, h, [0.1 * (i + 1) for i in range(50)])
    assert chain["pass"] is True

    d = fracyam.WarpedMetric(3, "deficit", delta=0.3)
    assert d.volume_data([0.5, 1.0, 2.0])["monotone"]

    e = fracyam.hemisphere_check(3, [0.1 * (i + 1) for i in range(100)])
    assert e["rtilde_max_dev"] < 1e-8

    try:
        fracyam.d_gamma(1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("gamma outside (0, 1) must raise")

    print("fracyam smoke test ok")


if __name__ == "__main__":
    main()
