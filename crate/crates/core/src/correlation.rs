//! Aperiodic and periodic correlations and pair profiles.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::QarySequence;

/// Aperiodic cross-correlation `rho(a, b)(tau)` of two value slices.
pub fn aperiodic<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>], tau: i64) -> Complex<T> {
    let n = a.len().min(b.len()) as i64;
    let mut acc = Complex::new(T::zero(), T::zero());
    if tau.abs() >= n {
        return acc;
    }
    if tau >= 0 {
        let t = tau as usize;
        for i in 0..(n as usize - t) {
            acc = acc + a[i] * b[i + t].conj();
        }
    } else {
        let t = (-tau) as usize;
        for i in 0..(n as usize - t) {
            acc = acc + a[i + t] * b[i].conj();
        }
    }
    acc
}

/// Periodic cross-correlation `phi(a, b)(tau)` of two value slices.
pub fn periodic<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>], tau: i64) -> Complex<T> {
    let n = a.len();
    let t = tau.rem_euclid(n as i64) as usize;
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        acc = acc + a[i] * b[(i + t) % n].conj();
    }
    acc
}

/// A correlation value, exact when the alphabet allows it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CorrelationValue {
    Exact { re: i64, im: i64 },
    Float { re: f64, im: f64 },
}

impl CorrelationValue {
    pub fn exact(v: Complex<i64>) -> Self {
        CorrelationValue::Exact { re: v.re, im: v.im }
    }

    pub fn float(v: Complex<f64>) -> Self {
        CorrelationValue::Float { re: v.re, im: v.im }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CorrelationValue::Exact { .. })
    }

    pub fn to_c64(&self) -> Complex<f64> {
        match *self {
            CorrelationValue::Exact { re, im } => Complex::new(re as f64, im as f64),
            CorrelationValue::Float { re, im } => Complex::new(re, im),
        }
    }

    pub fn as_exact(&self) -> Option<Complex<i64>> {
        match *self {
            CorrelationValue::Exact { re, im } => Some(Complex::new(re, im)),
            CorrelationValue::Float { .. } => None,
        }
    }

    /// Squared magnitude as an integer, for exact values.
    pub fn norm_sqr_exact(&self) -> Option<i64> {
        self.as_exact().map(|v| v.norm_sqr())
    }

    pub fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Zero test for a value computed from length-`n` sequences.
    pub fn is_zero(&self, n: usize) -> bool {
        match *self {
            CorrelationValue::Exact { re, im } => re == 0 && im == 0,
            CorrelationValue::Float { re, im } => f64::is_negligible(Complex::new(re, im), n),
        }
    }
}

fn check_pair(a: &QarySequence, b: &QarySequence) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySequence);
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.q() != b.q() {
        return Err(Error::AlphabetMismatch {
            left: a.q(),
            right: b.q(),
        });
    }
    Ok(())
}

/// Values of a checked pair, in exact or floating-point form.
pub(crate) enum PairValues {
    Exact(Vec<Complex<i64>>, Vec<Complex<i64>>),
    Float(Vec<Complex<f64>>, Vec<Complex<f64>>),
}

impl PairValues {
    pub(crate) fn of(a: &QarySequence, b: &QarySequence) -> Result<Self> {
        check_pair(a, b)?;
        if a.alphabet().is_exact() {
            Ok(PairValues::Exact(a.values()?, b.values()?))
        } else {
            Ok(PairValues::Float(a.values()?, b.values()?))
        }
    }
}

/// A single-shift correlation kernel.
type Kernel<T> = fn(&[Complex<T>], &[Complex<T>], i64) -> Complex<T>;

fn correlate(
    a: &QarySequence,
    b: &QarySequence,
    kernel_i: Kernel<i64>,
    kernel_f: Kernel<f64>,
    tau: i64,
) -> Result<CorrelationValue> {
    Ok(match PairValues::of(a, b)? {
        PairValues::Exact(x, y) => CorrelationValue::exact(kernel_i(&x, &y, tau)),
        PairValues::Float(x, y) => CorrelationValue::float(kernel_f(&x, &y, tau)),
    })
}

/// Aperiodic cross-correlation; zero for `|tau| >= N`.
pub fn acc(a: &QarySequence, b: &QarySequence, tau: i64) -> Result<CorrelationValue> {
    correlate(a, b, aperiodic::<i64>, aperiodic::<f64>, tau)
}

/// Aperiodic autocorrelation.
pub fn aac(a: &QarySequence, tau: i64) -> Result<CorrelationValue> {
    acc(a, a, tau)
}

/// Periodic cross-correlation; `tau` is reduced modulo N.
pub fn pcc(a: &QarySequence, b: &QarySequence, tau: i64) -> Result<CorrelationValue> {
    correlate(a, b, periodic::<i64>, periodic::<f64>, tau)
}

/// What a pair profile sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `rho(a)(tau) + rho(b)(tau)`
    AacSum,
    /// `rho(a, b)(tau) + rho(b, a)(tau)`
    AccSum,
    /// `phi(a)(tau) + phi(b)(tau)`
    Pac,
    /// `phi(a, b)(tau) + phi(b, a)(tau)`
    Pcc,
}

/// A pair profile for `tau = 0..N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationProfile {
    pub kind: ProfileKind,
    pub values: Vec<CorrelationValue>,
}

fn profile_with<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>], kind: ProfileKind) -> Vec<Complex<T>> {
    let kernel: Kernel<T> = match kind {
        ProfileKind::AacSum | ProfileKind::AccSum => aperiodic,
        ProfileKind::Pac | ProfileKind::Pcc => periodic,
    };
    (0..a.len() as i64)
        .map(|t| match kind {
            ProfileKind::AacSum | ProfileKind::Pac => kernel(a, a, t) + kernel(b, b, t),
            ProfileKind::AccSum | ProfileKind::Pcc => kernel(a, b, t) + kernel(b, a, t),
        })
        .collect()
}

pub fn pair_profile(a: &QarySequence, b: &QarySequence, kind: ProfileKind) -> Result<CorrelationProfile> {
    let values = match PairValues::of(a, b)? {
        PairValues::Exact(x, y) => profile_with(&x, &y, kind)
            .into_iter()
            .map(CorrelationValue::exact)
            .collect(),
        PairValues::Float(x, y) => profile_with(&x, &y, kind)
            .into_iter()
            .map(CorrelationValue::float)
            .collect(),
    };
    Ok(CorrelationProfile { kind, values })
}

impl CorrelationProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(CorrelationValue::magnitude).collect()
    }

    /// Squared magnitudes, available when every value is exact.
    pub fn squared_magnitudes(&self) -> Option<Vec<i64>> {
        self.values.iter().map(CorrelationValue::norm_sqr_exact).collect()
    }

    /// CSV with header `tau,re,im,magnitude`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,re,im,magnitude\n");
        for (t, v) in self.values.iter().enumerate() {
            let m = v.magnitude();
            let _ = match *v {
                CorrelationValue::Exact { re, im } => writeln!(out, "{t},{re},{im},{m}"),
                CorrelationValue::Float { re, im } => writeln!(out, "{t},{re:.12},{im:.12},{m:.12}"),
            };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> QarySequence {
        s.parse().unwrap()
    }

    #[test]
    fn energy_and_bounds() {
        let a = seq("+-++-+--");
        assert_eq!(acc(&a, &a, 0).unwrap(), CorrelationValue::Exact { re: 8, im: 0 });
        assert_eq!(pcc(&a, &a, 0).unwrap(), CorrelationValue::Exact { re: 8, im: 0 });
        assert!(acc(&a, &a, 8).unwrap().is_zero(8));
        assert!(acc(&a, &a, -9).unwrap().is_zero(8));
    }

    #[test]
    fn smallest_golay_pair() {
        let a = seq("++");
        let b = seq("+-");
        let s = acc(&a, &a, 1).unwrap().to_c64() + acc(&b, &b, 1).unwrap().to_c64();
        assert_eq!(s, Complex::new(0.0, 0.0));
    }

    #[test]
    fn table_pair_profiles() {
        let a = seq("+++-++-+");
        let b = seq("+++---+-");
        let aac = pair_profile(&a, &b, ProfileKind::AacSum).unwrap();
        assert_eq!(aac.squared_magnitudes().unwrap(), vec![256, 0, 0, 0, 0, 0, 0, 0]);
        let cc = pair_profile(&a, &b, ProfileKind::AccSum).unwrap();
        assert_eq!(cc.squared_magnitudes().unwrap(), vec![0, 16, 0, 16, 0, 0, 0, 0]);
    }

    #[test]
    fn errors() {
        let a = seq("++");
        let b = seq("+-+");
        assert!(matches!(acc(&a, &b, 0), Err(Error::LengthMismatch { .. })));
        let c: QarySequence = "q=4:0,1".parse().unwrap();
        assert!(matches!(pcc(&a, &c, 0), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn float_path_for_non_gaussian_alphabets() {
        let a: QarySequence = "q=3:0,1,2".parse().unwrap();
        let v = acc(&a, &a, 0).unwrap();
        assert!(!v.is_exact());
        assert!((v.to_c64() - Complex::new(3.0, 0.0)).norm() < 1e-12);
        let perfect: QarySequence = "q=3:0,1,0".parse().unwrap();
        assert!(pcc(&perfect, &perfect, 1).unwrap().is_zero(3));
        assert!(!pcc(&a, &a, 1).unwrap().is_zero(3));
    }

    #[test]
    fn csv_header() {
        let a = seq("++");
        let p = pair_profile(&a, &a, ProfileKind::AacSum).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("tau,re,im,magnitude\n0,4,0,4\n"));
    }
}
