use std::f64::consts::PI;

use crate::error::Result;
use crate::transverse1d::{ProfileKind, TransverseProfile};

/// `A = (1/pi) int sqrt(w(u)) du` over the support of the centered well.
pub fn strength_factor(p: &TransverseProfile) -> Result<f64> {
    p.require_regular()?;
    let a = p.a();
    Ok(match p.kind() {
        ProfileKind::PolyWell { exponent } => {
            // int_0^1 (1 - t^q)^{1/2} dt = Gamma(1 + 1/q) Gamma(3/2) / Gamma(1/q + 3/2)
            let q = exponent as f64;
            let beta =
                libm::tgamma(1.0 + 1.0 / q) * libm::tgamma(1.5) / libm::tgamma(1.0 / q + 1.5);
            2.0 * a * beta / PI
        }
        _ => 2.0 * a / PI,
    })
}

/// `sqrt(depth) * A`.
pub fn dimensionless_strength(p: &TransverseProfile, depth: f64) -> Result<f64> {
    Ok(depth.sqrt() * strength_factor(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrature(p: &TransverseProfile) -> f64 {
        // u = a sin(t) style substitution is profile specific; plain midpoint
        // rule on t in (0, 1) with u = a (1 - (1 - t)^2) clusters nodes at
        // the edge where sqrt(w) has an infinite slope
        let n = 200_000;
        let a = p.a();
        let mut total = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            let u = a * (1.0 - (1.0 - t).powi(2));
            let du = a * 2.0 * (1.0 - t) / n as f64;
            total += p.shape(u).unwrap().sqrt() * du;
        }
        2.0 * total / PI
    }

    #[test]
    fn closed_forms() {
        let p2 = TransverseProfile::poly_well(2, 0.1, 225.0).unwrap();
        assert!((strength_factor(&p2).unwrap() - 0.05).abs() < 1e-15);
        assert!((dimensionless_strength(&p2, 225.0).unwrap() - 0.75).abs() < 1e-14);
        let sq = TransverseProfile::square_well(0.3, 1.0).unwrap();
        assert!((strength_factor(&sq).unwrap() - 0.6 / PI).abs() < 1e-15);
    }

    #[test]
    fn matches_quadrature() {
        for e in [2, 4, 8, 16] {
            let p = TransverseProfile::poly_well(e, 0.7, 1.0).unwrap();
            let q = quadrature(&p);
            assert!((strength_factor(&p).unwrap() - q).abs() < 1e-7, "exp {e}");
        }
    }

    #[test]
    fn grows_with_exponent_toward_square_well() {
        let a: Vec<f64> = [2, 4, 8, 64]
            .iter()
            .map(|&e| strength_factor(&TransverseProfile::poly_well(e, 1.0, 1.0).unwrap()).unwrap())
            .collect();
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(a[3] < 2.0 / PI);
    }
}
