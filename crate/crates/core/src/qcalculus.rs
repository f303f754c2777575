//! Deformed derivative and infinitesimal deformed conformal transformations
//! acting on Laurent polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::params::DeformationParams;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `D phi(z) = (phi(P z) - phi(Q z)) / (z D)`, i.e. `z^k -> [k] z^(k-1)`.
pub fn deformed_derivative(phi: &LaurentPoly, params: &DeformationParams) -> LaurentPoly {
    phi.map_monomials(|k| (k - 1, real(params.bracket(k as f64))))
}

/// `delta_n phi = z^n [z d + h(n+1)] phi`, i.e. `z^k -> [k + h(n+1)] z^(n+k)`.
pub fn delta_n(phi: &LaurentPoly, n: i64, h: f64, params: &DeformationParams) -> LaurentPoly {
    let shift = h * (n + 1) as f64;
    phi.map_monomials(|k| (n + k, real(params.bracket(k as f64 + shift))))
}

/// `delta_eps phi = eps^(1-h) D[eps^h phi]` for a monomial `eps = eps_n z^(n+1)`.
///
/// Evaluated with real exponents: `eps^h phi` is expanded into powers
/// `z^(h(n+1) + k)`, differentiated, then multiplied back by `eps^(1-h)`.
pub fn general_variation(
    phi: &LaurentPoly,
    eps: &LaurentPoly,
    h: f64,
    params: &DeformationParams,
) -> Result<LaurentPoly> {
    if eps.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    if eps.len() != 1 {
        return Err(Error::NonMonomialEpsilon { terms: eps.len() });
    }
    let (power, eps_n) = eps.terms().next().expect("one term");
    let lift = eps_n.powf(h);
    let lower = eps_n.powf(1.0 - h);

    // eps^h phi as (real exponent, coefficient) pairs
    let lifted: Vec<(f64, Complex64)> =
        phi.terms().map(|(k, c)| (h * power as f64 + k as f64, lift * c)).collect();
    let derived = lifted.into_iter().map(|(x, c)| (x - 1.0, c * params.bracket(x)));

    let mut out = LaurentPoly::zero();
    for (x, c) in derived {
        let exponent = x + (1.0 - h) * power as f64;
        let k = exponent.round();
        debug_assert!((exponent - k).abs() < 1e-9);
        out.add_term(k as i64, c * lower);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow2() -> DeformationParams {
        DeformationParams::new(0.5, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let params = DeformationParams::new(0.8, 1.2, 1.0, 1.0, 1.0).unwrap();
        let d = deformed_derivative(&LaurentPoly::monomial(2, 1.0), &params);
        assert!((d.coeff(1) - 2.45).norm() < 1e-13);
        assert_eq!(d.len(), 1);

        assert!(deformed_derivative(&LaurentPoly::monomial(0, 1.0), &params).is_zero());

        let phi = LaurentPoly::from_terms([(3, real(3.0)), (-1, real(1.0))]);
        let d = deformed_derivative(&phi, &pow2());
        assert!((d.coeff(2) - 21.0).norm() < 1e-13);
        assert!((d.coeff(-2) + 0.5).norm() < 1e-15);
    }

    #[test]
    fn delta_examples() {
        let d = delta_n(&LaurentPoly::monomial(1, 1.0), 0, 1.0, &pow2());
        assert!((d.coeff(1) - 3.0).norm() < 1e-14);

        let phi = LaurentPoly::from_terms([(3, real(3.0)), (-2, Complex64::new(1.0, 2.0))]);
        assert_eq!(delta_n(&phi, -1, 0.37, &pow2()), deformed_derivative(&phi, &pow2()));
    }

    #[test]
    fn delta_classical_limit() {
        // z^k -> (k + 4) z^(k+1) for n = 1, h = 2
        let phi = LaurentPoly::monomial(3, 1.0);
        let mut last = f64::INFINITY;
        for e in 1..=6 {
            let p = 1.0 + 10f64.powi(-e);
            let params = DeformationParams::new(p, p, 1.0, 1.0, 1.0).unwrap();
            let err = (delta_n(&phi, 1, 2.0, &params).coeff(4) - 7.0).norm();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn variation_examples() {
        let phi = LaurentPoly::monomial(1, 1.0);
        let v = general_variation(&phi, &LaurentPoly::monomial(1, 1.0), 1.0, &pow2()).unwrap();
        assert!(v.approx_eq(&delta_n(&phi, 0, 1.0, &pow2()), 1e-14));

        assert!(general_variation(&phi, &LaurentPoly::monomial(1, 0.0), 1.0, &pow2()).unwrap().is_zero());

        // h = 0: eps * D phi
        let params = DeformationParams::new(0.8, 1.2, 1.0, 1.0, 1.0).unwrap();
        let phi = LaurentPoly::from_terms([(2, real(1.0)), (-3, real(0.5))]);
        let eps = LaurentPoly::monomial(3, Complex64::new(0.5, -1.0));
        let direct = deformed_derivative(&phi, &params).map_monomials(|k| (k + 3, Complex64::new(0.5, -1.0)));
        assert!(general_variation(&phi, &eps, 0.0, &params).unwrap().approx_eq(&direct, 1e-14));

        let two = LaurentPoly::from_terms([(1, real(1.0)), (2, real(1.0))]);
        assert_eq!(
            general_variation(&phi, &two, 1.0, &params),
            Err(Error::NonMonomialEpsilon { terms: 2 })
        );
    }

    #[test]
    fn variation_matches_delta() {
        let params = DeformationParams::new(0.7, 1.3, 2.0, 0.5, 1.5).unwrap();
        let phi = LaurentPoly::from_terms([(-2, Complex64::new(1.0, 1.0)), (0, real(2.0)), (4, real(-0.3))]);
        let eps_n = Complex64::new(-0.4, 0.9);
        for n in -3..=3 {
            for h in [0.5, 1.0, 1.75, 2.0] {
                let v = general_variation(&phi, &LaurentPoly::monomial(n + 1, eps_n), h, &params).unwrap();
                let expected = delta_n(&phi, n, h, &params).scale(eps_n);
                assert!(v.approx_eq(&expected, 1e-12), "n={n} h={h}");
            }
        }
    }
}
