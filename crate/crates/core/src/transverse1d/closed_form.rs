//! Point interactions on the line, solved in closed form.

use crate::error::{Error, Result};

/// Ground state of `-d^2/dx^2 - alpha delta(x)`: `-alpha^2 / 4`.
pub fn delta_ground(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "delta strength must be positive, got {alpha}"
        )));
    }
    Ok(-0.25 * alpha * alpha)
}

/// Decay rate `kappa` of the even ground state of two interactions of
/// strength `alpha` at `+-rho`: the root of `kappa = (alpha/2)(1 + e^{-2 kappa rho})`.
pub fn double_delta_kappa(alpha: f64, rho: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "delta strength must be positive, got {alpha}"
        )));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::domain(format!(
            "separation must be positive, got {rho}"
        )));
    }
    // the map is a contraction on [alpha/2, alpha] with constant <= 1/(2e)
    let mut kappa = alpha;
    for _ in 0..200 {
        let next = 0.5 * alpha * (1.0 + (-2.0 * kappa * rho).exp());
        let done = (next - kappa).abs() <= 1e-15 * next;
        kappa = next;
        if done {
            break;
        }
    }
    Ok(kappa)
}

/// `-kappa^2` for [`double_delta_kappa`].
pub fn double_delta_ground(alpha: f64, rho: f64) -> Result<f64> {
    let k = double_delta_kappa(alpha, rho)?;
    Ok(-k * k)
}

/// `|phi(0)| / ||phi||` for the double-delta ground state
/// `phi = cosh(kappa x)` between the interactions and
/// `cosh(kappa rho) e^{-kappa(|x| - rho)}` outside.
pub fn double_delta_eta(alpha: f64, rho: f64) -> Result<f64> {
    let k = double_delta_kappa(alpha, rho)?;
    let c = (k * rho).cosh();
    let norm2 = 2.0 * (0.5 * rho + (2.0 * k * rho).sinh() / (4.0 * k) + c * c / (2.0 * k));
    Ok(1.0 / norm2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_delta() {
        for (a, e) in [(0.5, -0.0625), (1.0, -0.25), (2.0, -1.0), (4.0, -4.0)] {
            assert_eq!(delta_ground(a).unwrap(), e);
        }
        assert!(delta_ground(0.0).is_err());
        assert!(delta_ground(-1.0).is_err());
    }

    #[test]
    fn double_delta_root_satisfies_equation() {
        let k = double_delta_kappa(2.0, 1.0).unwrap();
        assert!((k - (1.0 + (-2.0 * k).exp())).abs() < 1e-14);
        let e = double_delta_ground(2.0, 1.0).unwrap();
        assert!((e + 1.2297).abs() < 2e-4, "{e}");
    }

    #[test]
    fn double_delta_decoupled_limit() {
        assert!((double_delta_ground(2.0, 50.0).unwrap() + 1.0).abs() < 1e-10);
    }

    #[test]
    fn double_delta_increases_with_separation() {
        let v: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&r| double_delta_ground(2.0, r).unwrap())
            .collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(v.iter().all(|&e| e < -1.0));
    }

    #[test]
    fn eta_against_quadrature() {
        let (alpha, rho) = (2.0, 0.7);
        let k = double_delta_kappa(alpha, rho).unwrap();
        let c = (k * rho).cosh();
        let phi = |x: f64| {
            if x.abs() <= rho {
                (k * x).cosh()
            } else {
                c * (-k * (x.abs() - rho)).exp()
            }
        };
        let (n, l) = (400_000, 40.0);
        let h = 2.0 * l / n as f64;
        let norm2: f64 = (0..=n).map(|i| phi(-l + i as f64 * h).powi(2)).sum::<f64>() * h;
        let eta = 1.0 / norm2.sqrt();
        assert!((eta - double_delta_eta(alpha, rho).unwrap()).abs() < 1e-8);
    }
}
