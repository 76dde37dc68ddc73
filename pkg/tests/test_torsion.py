import math

import numpy as np
import pytest

from torsionlab import (
    preset,
    CellStructure,
    ChainMetric,
    Representation,
    build_preset,
    build_twisted_boundary,
    classify_beta,
    determinant_oracle,
    euler_characteristics,
    exponential_metric_path,
    generalized_log_torsion,
    log_reidemeister,
    rotation,
    spectral_data,
    telescoping_identity_holds,
    tr_log,
    variation_check,
)
from torsionlab.errors import NotAcyclic, ShapeMismatch, StepTooLarge
from torsionlab.torsion import (
    second_difference_table,
    telescoping_coefficient_table,
)


def test_log_reidemeister_circle_closed_form():
    for theta in (1.0, math.pi / 2, math.pi, 2.5):
        cx = build_preset("circle", theta=theta)
        expected = math.log(4.0 * math.sin(theta / 2.0) ** 2)
        assert abs(log_reidemeister(cx) - expected) < 1e-12


def test_log_reidemeister_requires_acyclic():
    cells, _ = preset("circle", theta=1.0)
    trivial = build_twisted_boundary(cells, Representation(1, [np.eye(1)]))
    with pytest.raises(NotAcyclic):
        log_reidemeister(trivial)
    with pytest.raises(NotAcyclic):
        determinant_oracle(trivial)


def test_determinant_oracle_circle_is_log_det():
    for theta in (0.4, 1.0, 2.5):
        cx = build_preset("circle", theta=theta)
        expected = math.log(abs(np.linalg.det(cx.boundary(1))))
        assert abs(determinant_oracle(cx) - expected) < 1e-12


def test_oracle_equivalence_on_presets():
    for theta in (1.0, math.pi / 2, 2.5, math.pi):
        cx = build_preset("circle", theta=theta)
        assert abs(log_reidemeister(cx) - determinant_oracle(cx)) < 1e-10
    for alpha, beta in ((1.0, 0.3), (2.2, 1.1), (0.0, 2.0)):
        cx = build_preset("torus2", alpha=alpha, beta=beta)
        assert abs(log_reidemeister(cx) - determinant_oracle(cx)) < 1e-8


def test_oracle_equivalence_on_random_complexes():
    rng = np.random.default_rng(77)
    for _ in range(25):
        theta = float(rng.uniform(0.15, 2.0 * math.pi - 0.15))
        cx = build_preset("circle", theta=theta)
        assert abs(log_reidemeister(cx) - determinant_oracle(cx)) < 1e-8
    for _ in range(25):
        cx = build_preset(
            "torus2",
            alpha=float(rng.uniform(0.15, 2.0 * math.pi - 0.15)),
            beta=float(rng.uniform(0.15, 2.0 * math.pi - 0.15)))
        assert abs(log_reidemeister(cx) - determinant_oracle(cx)) < 1e-8


def test_torsion_independent_of_cw_model():
    # the circle again, but subdivided into two arcs
    theta = 1.3
    cells = CellStructure(
        dimension=1, cells_per_degree=(2, 2),
        incidences=(
            ((), ()),
            (((1, 1, ()), (0, -1, ())),
             ((0, 1, ((0, 1),)), (1, -1, ()))),
        ),
    )
    cx = build_twisted_boundary(cells, Representation(2, [rotation(theta)]))
    expected = math.log(4.0 * math.sin(theta / 2.0) ** 2)
    assert abs(log_reidemeister(cx) - expected) < 1e-10
    assert abs(determinant_oracle(cx) - expected) < 1e-10


def test_metric_covariance_of_log_torsion():
    # log T(h) - log T(I) = 1/2 sum_k (-1)^(k+1) log det h_k, exactly
    rng = np.random.default_rng(3)
    for name, kwargs in (("circle", {"theta": 2.1}),
                         ("torus2", {"alpha": 1.0, "beta": 0.3})):
        cx = build_preset(name, **kwargs)
        base = log_reidemeister(cx)
        for _ in range(3):
            metric = ChainMetric.random_spd(cx, rng)
            shift = 0.5 * sum(
                (-1.0) ** (k + 1) * np.linalg.slogdet(metric.matrix(k))[1]
                for k in range(cx.dimension + 1))
            assert abs(log_reidemeister(cx, metric) - base - shift) < 1e-12


def test_generalized_log_torsion_examples():
    assert generalized_log_torsion((3.0, 5.0), (0.0, 1.0)) == 2.5
    assert generalized_log_torsion((3.0, 5.0), (0.0, 0.0)) == 0.0
    cx = build_preset("circle", theta=math.pi / 2)
    tr_logs = [tr_log(spectral_data(cx, None, k), strict=True) for k in (0, 1)]
    assert abs(generalized_log_torsion(tr_logs, (0.0, 1.0)) - math.log(2.0)) < 1e-12
    with pytest.raises(ShapeMismatch):
        generalized_log_torsion((1.0, 2.0), (1.0, 2.0, 3.0))


def test_generalized_log_torsion_linearity():
    rng = np.random.default_rng(0)
    t = rng.standard_normal(4)
    b1, b2 = rng.standard_normal(4), rng.standard_normal(4)
    lhs = generalized_log_torsion(t, 2.0 * b1 + 3.0 * b2)
    rhs = 2.0 * generalized_log_torsion(t, b1) + 3.0 * generalized_log_torsion(t, b2)
    assert abs(lhs - rhs) < 1e-12


def test_euler_characteristics_examples():
    assert euler_characteristics([1, 0, 1], 2) == (2, 2)
    assert euler_characteristics([1, 1], 1) == (0, -1)
    assert euler_characteristics([1, 2, 1], 2) == (0, 0)


def test_euler_characteristic_duality_identity():
    rng = np.random.default_rng(13)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        half = [int(rng.integers(0, 5)) for _ in range(n // 2 + 1)]
        b = [half[min(k, n - k)] for k in range(n + 1)]
        chi, chi_prime = euler_characteristics(b, n)
        assert chi_prime * (1 + (-1) ** n) == n * chi
        if n % 2 == 0:
            assert 2 * chi_prime == n * chi


def test_classify_beta_examples():
    cls = classify_beta((1.0, 1.0, 1.0))
    assert cls.satisfies_recurrence and cls.lam == 1.0 and cls.mu == 0.0
    cls = classify_beta((0.0, 1.0, 2.0, 3.0))
    assert cls.satisfies_recurrence and cls.lam == 0.0 and cls.mu == 1.0
    cls = classify_beta((1.0, 2.0, 4.0))
    assert not cls.satisfies_recurrence
    assert cls.residual == (1.0,)
    # length <= 2 is vacuous
    assert classify_beta((7.0, -1.0)).satisfies_recurrence


def test_classify_beta_grid():
    rng = np.random.default_rng(99)
    for _ in range(500):
        n = int(rng.integers(2, 7))
        lam, mu = float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))
        beta = [lam + mu * k for k in range(n + 1)]
        cls = classify_beta(beta)
        assert cls.satisfies_recurrence
        assert np.max(np.abs(cls.reconstruct(n + 1) - np.array(beta))) <= 1e-12
    for _ in range(500):
        n = int(rng.integers(2, 7))
        lam, mu = float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))
        beta = [lam + mu * k for k in range(n + 1)]
        beta[int(rng.integers(0, n + 1))] += float(rng.choice((-1, 1))) \
            * float(rng.uniform(1e-6, 1.0))
        assert not classify_beta(beta).satisfies_recurrence


def test_telescoping_tables():
    # interior rows carry (-1)^(j+1) (beta_{j+1} - 2 beta_j + beta_{j-1});
    # the boundary rows truncate the stencil (out-of-range beta read as 0)
    table = telescoping_coefficient_table(4)
    assert table[2] == {3: -1, 2: 2, 1: -1}
    assert table[0] == {0: 2, 1: -1}
    assert table[4] == {4: 2, 3: -1}
    for n in range(2, 11):
        assert telescoping_coefficient_table(n) == second_difference_table(n)
        assert telescoping_identity_holds(n)


def test_variation_constant_path():
    cx = build_preset("circle", theta=1.0)
    rep = variation_check(cx, lambda u: ChainMetric.identity(cx), (0.0, 1.0),
                          check_convergence=False)
    assert rep.lhs == 0.0 and rep.rhs == 0.0


def test_variation_circle_scale_path():
    cx = build_preset("circle", theta=1.0)

    def path(u):
        return ChainMetric([np.eye(2) * (1.0 + u), np.eye(2)])

    rep = variation_check(cx, path, (0.0, 1.0))
    assert abs(rep.tr_alphas[0] - 2.0) < 1e-10  # alpha_0 = I at u = 0
    assert rep.discrepancy < 1e-6
    assert rep.laplacian_dot_residual < 1e-6
    assert 2.5 < rep.convergence_ratio < 8.0


def test_variation_gamma_structure():
    # gamma_n vanishes in the top degree; gamma_0 equals tr(alpha_0)
    rng = np.random.default_rng(31)
    cx = build_preset("torus2", alpha=1.0, beta=0.3)
    path = exponential_metric_path([rng.standard_normal((d, d)) for d in cx.dims])
    rep = variation_check(cx, path, (0.0, 1.0, 2.0), check_convergence=False)
    assert rep.gammas[-1] == 0.0
    assert abs(rep.gammas[0] - rep.tr_alphas[0]) < 1e-9


def test_variation_random_paths_quadratic():
    rng = np.random.default_rng(123)
    for case in range(2):
        cx = build_preset("torus2", alpha=1.1 + case, beta=0.4)
        path = exponential_metric_path(
            [rng.standard_normal((d, d)) for d in cx.dims])
        rep = variation_check(cx, path, (0.0, 1.0, 2.0), step=1e-4)
        assert rep.discrepancy < 1e-6
        if rep.discrepancy > 1e-10:
            assert 2.5 < rep.convergence_ratio < 8.0


def test_variation_rejects_kinked_path():
    cx = build_preset("circle", theta=1.0)

    def kinked(u):
        factor = 1.0 + (u if u >= 0.0 else 2.0 * u)
        return ChainMetric([np.eye(2) * factor, np.eye(2)])

    with pytest.raises(StepTooLarge):
        variation_check(cx, kinked, (0.0, 1.0))


def test_variation_requires_acyclic():
    cells, _ = preset("circle", theta=1.0)
    trivial = build_twisted_boundary(cells, Representation(1, [np.eye(1)]))
    with pytest.raises(NotAcyclic):
        variation_check(trivial, lambda u: ChainMetric.identity(trivial),
                        (0.0, 1.0), check_convergence=False)
