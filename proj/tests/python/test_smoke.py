# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the python bindings. Run directly: python3 test_smoke.py"""

import math

import numpy as np

import critdelay as cd


def scalar_system(coeffs):
    sys = cd.DdeSystem()
    sys.n = 1
    sys.m = len(coeffs) - 1
    sys.matrices = [np.array([[c]], dtype=float) for c in coeffs]
    sys.validate()
    return sys


def test_classical_single_delay():
    closed = cd.single_delay_scalar(0.0, -1.0)
    assert closed.crossing
    assert abs(closed.h - math.pi / 2.0) < 1e-12
    assert abs(abs(closed.omega) - 1.0) < 1e-12

    sys = scalar_system([0.0, -1.0])
    cfg = cd.SweepConfig()
    res = cd.critical_delays_commensurate(sys, np.array([1], dtype=np.int32), cfg)
    assert len(res.points) > 0
    assert abs(res.points[0].base_delay - math.pi / 2.0) < 1e-10


def test_two_delay_sweep():
    sys = scalar_system([0.0, -1.0, -0.5])
    cfg = cd.SweepConfig()
    cfg.delta = 0.05
    res = cd.sweep(sys, cfg, 2)
    assert len(res.points) > 100
    tol = cfg.resolved_residual_tol(sys)
    for pt in res.points[:50]:
        assert pt.residual <= tol
        assert abs(abs(pt.z) - 1.0) < 1e-6
        assert np.all(pt.delays >= 0.0)
        assert np.all(pt.delays <= cfg.h_max)
        M = cd.eval_char_matrix(sys, 1j * pt.omega, pt.delays)
        assert cd.smallest_singular_value(M) <= tol
    assert isinstance(res.rejected_by_reason, dict)


def test_heat_system():
    sys = cd.build_heat_system(8, 10.0, [4.0, 10.0, 4.0], [1.0 / 3.0, 0.5, 0.75])
    assert sys.n == 8
    assert sys.m == 3
    assert abs(sys.matrices[0][0, 0] - -88.0) < 1e-10
    assert abs(sys.matrices[0][0, 1] - 98.0) < 1e-10
    assert abs(sys.matrices[1][2, 0] - -28.0) < 1e-10
    assert abs(sys.matrices[2][4, 4] - -70.0) < 1e-10
    assert abs(sys.matrices[3][5, 7] - -28.0) < 1e-10


def test_serialization_round_trip():
    sys = scalar_system([0.0, -1.0, -0.5])
    text = cd.serialize_system(sys)
    back = cd.parse_system(text)
    assert back.n == sys.n and back.m == sys.m
    for a, b in zip(sys.matrices, back.matrices):
        assert np.array_equal(a, b)


def test_kron_vec_unvec():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.allclose(cd.kron(a, b), np.kron(a, b))
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.allclose(cd.unvec(cd.vec(x)), x)


def test_rank_one_factor():
    rng = np.random.default_rng(11)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    u = cd.vec(np.outer(v, np.conj(v)))
    factor = cd.rank_one_factor(u, 1e-8)
    assert factor is not None
    assert factor.gap < 1e-12
    assert abs(abs(np.vdot(factor.v, v)) - 1.0) < 1e-12
    noise = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    assert cd.rank_one_factor(u + 0.5 * noise, 1e-8) is None


def test_input_error_maps_to_value_error():
    sys = scalar_system([0.0, -1.0])
    cfg = cd.SweepConfig()
    try:
        cd.critical_delays_commensurate(sys, np.array([0], dtype=np.int32), cfg)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for a zero direction entry")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
