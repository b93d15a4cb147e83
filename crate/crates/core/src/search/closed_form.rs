//! Closed-form constants of the two-point family and the `c_p` constant.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{Exponent, Rational};

/// Limit of [`c_p_constant`] as `p -> 1+`.
pub const C_P_LIMIT_AT_ONE: f64 = 0.5;

/// `(1 - δ^p)^{1/p} (1 - δ^q)^{1/q} / (1 - δ)`, continuously extended to
/// `δ = 0` (value 1) and `δ = 1` (value `p^{1/p} q^{1/q}`).
pub fn two_point_constant(delta: f64, p: &Exponent) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::invalid(format!("delta must lie in [0, 1], got {delta}")));
    }
    if p.is_two() {
        return Ok(1.0 + delta);
    }
    let pf = p.to_f64();
    let qf = p.conjugate().to_f64();
    if delta == 0.0 {
        return Ok(1.0);
    }
    if delta == 1.0 {
        return Ok(pf.powf(1.0 / pf) * qf.powf(1.0 / qf));
    }
    let a = (1.0 - delta.powf(pf)).powf(1.0 / pf);
    let b = (1.0 - delta.powf(qf)).powf(1.0 / qf);
    Ok(a * b / (1.0 - delta))
}

/// The `p = 2` value `1 + δ`, exactly.
pub fn two_point_constant_exact(delta: &Rational) -> Result<Rational> {
    if *delta < Rational::from_integer(0.into()) || *delta > Rational::one() {
        return Err(Error::invalid("delta must lie in [0, 1]"));
    }
    Ok(delta + Rational::one())
}

/// `p^{1/p} q^{1/q} / 2`, which is at most 1 with equality only at `p = 2`.
pub fn c_p_constant(p: &Exponent) -> f64 {
    if p.is_two() {
        return 1.0;
    }
    let pf = p.to_f64();
    let qf = p.conjugate().to_f64();
    pf.powf(1.0 / pf) * qf.powf(1.0 / qf) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(n: u32, d: u32) -> Exponent {
        Exponent::new(n, d).unwrap()
    }

    #[test]
    fn two_point_values() {
        assert_eq!(two_point_constant(0.5, &Exponent::TWO).unwrap(), 1.5);
        assert_eq!(two_point_constant(0.0, &ex(4, 1)).unwrap(), 1.0);
        assert_eq!(two_point_constant(1.0, &Exponent::TWO).unwrap(), 2.0);
        let direct = (1.0f64 - 1.0 / 16.0).powf(0.25) * (1.0f64 - 0.5f64.powf(4.0 / 3.0)).powf(0.75) / 0.5;
        assert!((two_point_constant(0.5, &ex(4, 1)).unwrap() - direct).abs() < 1e-15);
        assert!((two_point_constant(0.5, &ex(4, 1)).unwrap() - 1.3469195974050352).abs() < 1e-12);
        assert!(two_point_constant(1.5, &Exponent::TWO).is_err());
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(two_point_constant_exact(&half).unwrap(), Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn two_point_is_symmetric_in_p_and_q() {
        for d in [0.1, 0.5, 0.9] {
            let a = two_point_constant(d, &ex(3, 1)).unwrap();
            let b = two_point_constant(d, &ex(3, 2)).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn c_p_values() {
        assert_eq!(c_p_constant(&Exponent::TWO), 1.0);
        assert!((c_p_constant(&ex(4, 1)) - 0.8773826753016617).abs() < 1e-12);
        assert!((c_p_constant(&ex(3, 1)) - c_p_constant(&ex(3, 2))).abs() < 1e-15);
        // Approaches 1/2 as p -> 1.
        assert!((c_p_constant(&ex(10001, 10000)) - C_P_LIMIT_AT_ONE).abs() < 1e-3);
        for (n, d) in [(3, 1), (5, 2), (7, 3), (11, 10)] {
            assert!(c_p_constant(&ex(n, d)) < 1.0);
        }
    }
}
