//! Scalar types that correlation and training arithmetic can run over.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{NumCast, Signed};

/// A real scalar used as the component type of complex sequence values.
///
/// `i64` gives exact Gaussian-integer arithmetic for alphabets whose roots of
/// unity are all in `{1, i, -1, -i}`; `f64` and `f32` cover every alphabet.
pub trait Scalar: Signed + NumCast + Copy + Send + Sync + Debug + Display + PartialOrd + 'static {
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    /// `exp(2*pi*i*k/q)` if it is representable in this type.
    fn unit_root(q: u32, k: u32) -> Option<Complex<Self>>;

    fn to_f64(self) -> f64;

    /// Zero test used for correlation values of length-`n` sequences.
    fn is_negligible(v: Complex<Self>, n: usize) -> bool;
}

/// The exact quarter-turn index of `k/q` turns, if there is one.
fn quarter_turn(q: u32, k: u32) -> Option<u32> {
    let k = k % q;
    (4 * k).is_multiple_of(q).then(|| 4 * k / q)
}

fn quarter_value<T: Scalar>(quarter: u32) -> Complex<T> {
    let (one, zero) = (T::one(), T::zero());
    match quarter % 4 {
        0 => Complex::new(one, zero),
        1 => Complex::new(zero, one),
        2 => Complex::new(-one, zero),
        _ => Complex::new(zero, -one),
    }
}

impl Scalar for i64 {
    const EXACT: bool = true;

    fn unit_root(q: u32, k: u32) -> Option<Complex<i64>> {
        if q == 0 {
            return None;
        }
        quarter_turn(q, k).map(quarter_value)
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn is_negligible(v: Complex<i64>, _n: usize) -> bool {
        v.re == 0 && v.im == 0
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn unit_root(q: u32, k: u32) -> Option<Complex<f64>> {
        if q == 0 {
            return None;
        }
        if let Some(quarter) = quarter_turn(q, k) {
            return Some(quarter_value(quarter));
        }
        let theta = 2.0 * std::f64::consts::PI * (k % q) as f64 / q as f64;
        Some(Complex::from_polar(1.0, theta))
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn is_negligible(v: Complex<f64>, n: usize) -> bool {
        v.norm() <= 1e-9 * n.max(1) as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn unit_root(q: u32, k: u32) -> Option<Complex<f32>> {
        if q == 0 {
            return None;
        }
        if let Some(quarter) = quarter_turn(q, k) {
            return Some(quarter_value(quarter));
        }
        let theta = 2.0 * std::f64::consts::PI * (k % q) as f64 / q as f64;
        let z = Complex::from_polar(1.0f64, theta);
        Some(Complex::new(z.re as f32, z.im as f32))
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn is_negligible(v: Complex<f32>, n: usize) -> bool {
        v.norm() <= 1e-4 * n.max(1) as f32
    }
}

/// Converts a complex value to double precision.
pub fn to_c64<T: Scalar>(v: Complex<T>) -> Complex<f64> {
    Complex::new(v.re.to_f64(), v.im.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_roots_cover_quarter_turns() {
        assert_eq!(i64::unit_root(4, 1), Some(Complex::new(0, 1)));
        assert_eq!(i64::unit_root(4, 3), Some(Complex::new(0, -1)));
        assert_eq!(i64::unit_root(2, 1), Some(Complex::new(-1, 0)));
        assert_eq!(i64::unit_root(1, 0), Some(Complex::new(1, 0)));
        assert_eq!(i64::unit_root(8, 2), Some(Complex::new(0, 1)));
        assert_eq!(i64::unit_root(8, 1), None);
        assert_eq!(i64::unit_root(3, 1), None);
    }

    #[test]
    fn float_roots_snap_and_agree() {
        assert_eq!(f64::unit_root(4, 2), Some(Complex::new(-1.0, 0.0)));
        for q in 1..13u32 {
            for k in 0..q {
                let z = f64::unit_root(q, k).unwrap();
                assert!((z.norm() - 1.0).abs() < 1e-12);
                let w = f32::unit_root(q, k).unwrap();
                assert!((to_c64(w) - z).norm() < 1e-6);
                if let Some(e) = i64::unit_root(q, k) {
                    assert_eq!(to_c64(e), z);
                }
            }
        }
    }

    #[test]
    fn zero_tests() {
        assert!(i64::is_negligible(Complex::new(0, 0), 4));
        assert!(!i64::is_negligible(Complex::new(0, 1), 4));
        assert!(f64::is_negligible(Complex::new(1e-9, 0.0), 4));
        assert!(!f64::is_negligible(Complex::new(1e-7, 0.0), 4));
    }
}
