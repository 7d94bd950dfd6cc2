import math

import pytest

import unifed


def test_version():
    assert unifed.__version__ == "0.1.0"


def test_cumulant_identities():
    assert unifed.kappa(0.0) == 0.0
    assert unifed.kappa_prime(0.0) == pytest.approx(0.5, abs=1e-12)
    assert unifed.kappa_double_prime(0.0) == pytest.approx(1 / 12, abs=1e-12)
    assert unifed.kappa(1.0) == pytest.approx(
        math.log(math.expm1(1.0)), abs=1e-12
    )


def test_inverse_round_trip():
    for theta in (-8.0, -1.0, 0.0, 2.5, 11.0):
        mu = unifed.kappa_prime(theta)
        assert unifed.kappa_prime_inverse(mu) == pytest.approx(
            theta, abs=1e-8
        )


def test_density_and_cdf_references():
    assert unifed.density(0.5, 0.0) == 1.0
    assert unifed.density(0.5, 1.0) == pytest.approx(
        0.959517375667471859746, abs=1e-13
    )
    assert unifed.density(-0.1, 1.0) == 0.0
    assert unifed.cdf(0.5, 1.0) == pytest.approx(
        0.377540668798145435361, abs=1e-12
    )
    p = unifed.cdf(0.73, 2.0)
    assert unifed.quantile(p, 2.0) == pytest.approx(0.73, abs=1e-9)


def test_mean_variance_and_deviance():
    mean, variance = unifed.mean_variance(0.0)
    assert mean == pytest.approx(0.5, abs=1e-12)
    assert variance == pytest.approx(1 / 12, abs=1e-12)
    assert unifed.unit_deviance(0.3, 0.3) == 0.0
    assert unifed.unit_deviance(0.3, 0.6) > 0.0


def test_sampling_is_deterministic():
    first = unifed.sample(100, 1.5, seed=7)
    second = unifed.sample(100, 1.5, seed=7)
    assert first == second
    assert all(0.0 < x < 1.0 for x in first)
    assert unifed.sample(100, 1.5, seed=8) != first


def test_irwin_hall_modes():
    # float breakdown versus exact rationals at n = 50
    assert unifed.irwin_hall_naive(36.0, 50) < 0.0
    assert unifed.irwin_hall_exact(36.0, 50) > 0.0
    assert unifed.irwin_hall_exact_str("1", "2", 2) == "1/2"
    assert unifed.irwin_hall_exact_str("3", "2", 3) == "3/4"
    with pytest.raises(RuntimeError):
        unifed.irwin_hall_exact(10.0, 20, cap=5)


def test_density_general_reduces_to_base():
    assert unifed.density_general(0.25, 1.0, 1) == pytest.approx(
        unifed.density(0.25, 1.0), abs=1e-12
    )


def test_mle():
    draws = unifed.sample(500, 2.0, seed=11)
    theta_hat = unifed.mle_theta(draws)
    mean = sum(draws) / len(draws)
    assert unifed.kappa_prime(theta_hat) == pytest.approx(mean, abs=1e-10)
    assert unifed.mle_theta([0.5, 0.5]) == 0.0


def test_domain_errors_are_value_errors():
    with pytest.raises(ValueError):
        unifed.kappa_prime_inverse(1.5)
    with pytest.raises(ValueError):
        unifed.quantile(2.0, 1.0)


def test_tail_probabilities():
    assert unifed.chi_square_survival(297.86, 273) == pytest.approx(
        0.14, abs=0.005
    )
    assert unifed.normal_two_sided_p(3.20) == pytest.approx(
        0.0014, abs=1e-4
    )


def test_beta_helpers():
    assert unifed.beta_density(0.3, 0.5, 2.0) == 1.0
    mu, phi = unifed.beta_params_from_shapes(2.0, 3.0)
    assert mu == pytest.approx(0.4)
    assert phi == pytest.approx(5.0)
    mean, variance = unifed.beta_mean_variance(0.4, 5.0)
    assert mean == pytest.approx(0.4)
    assert variance == pytest.approx(0.4 * 0.6 / 6.0)


def test_fit_csv(tmp_path):
    path = tmp_path / "toy.csv"
    path.write_text(
        "g,y,w\n"
        "A,0.2,5\n"
        "A,0.4,5\n"
        "B,0.3,4\n"
        "B,0.5,4\n"
    )
    result = unifed.fit_csv(
        str(path), response="y", covariates=["g"], weight="w"
    )
    assert result["converged"]
    assert result["names"] == ["(Intercept)", "gB"]
    assert result["estimates"][0] == pytest.approx(
        unifed.kappa_prime_inverse(0.3), abs=1e-8
    )
    assert result["null_df"] == 1
    assert result["residual_df"] == 0
    assert result["min_class_weight"] == 8.0

    raw = unifed.fit_csv(
        str(path),
        response="y",
        covariates=["g"],
        weight="w",
        aggregate=False,
    )
    assert raw["estimates"][0] == pytest.approx(
        result["estimates"][0], abs=1e-6
    )

    with pytest.raises(ValueError):
        unifed.fit_csv(str(path), response="nope", covariates=["g"])


def test_run_cli():
    code, out, err = unifed.run_cli(
        ["mle"], stdin_text="x\n0.5\n0.5\n"
    )
    assert code == 0
    assert "theta_hat: 0" in out
    assert err == ""

    code, out, err = unifed.run_cli(["quantile", "--theta", "1"])
    assert code == 2

    code, out, err = unifed.run_cli(
        ["cdf", "--theta", "1", "--x", "0.5"]
    )
    assert code == 0
    x, p = out.splitlines()[1].split(",")
    assert x == "0.5"
    assert float(p) == pytest.approx(0.377540668798145435, abs=1e-12)
