//! Cross Z-complementary pairs and sets: width certificates, structural
//! properties, and the two systematic perfect-pair constructions.
//!
//! For a pair `(a, b)` of length `N` and width `Z`, the front zone is
//! `T1 = {1..=Z}` and the tail zone `T2 = {N-Z..=N-1}`. The pair qualifies when
//! the autocorrelation sum vanishes on `T1 ∪ T2` and the symmetric
//! cross-correlation sum vanishes on `T2`. Both sums at `-tau` are conjugates
//! of the sums at `tau`, so only positive shifts are evaluated.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::correlation::{aperiodic, pair_profile, CorrelationValue, PairValues, ProfileKind};
use crate::error::{Error, Result};
use crate::gbf::{davis_jedwab_pair, permutations, DjParams};
use crate::scalar::Scalar;
use crate::sequence::{QarySequence, RootOfUnity};

/// An ordered pair of equal-length sequences over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SequencePair {
    pub a: QarySequence,
    pub b: QarySequence,
}

impl SequencePair {
    pub fn new(a: QarySequence, b: QarySequence) -> Result<Self> {
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
        Ok(SequencePair { a, b })
    }

    /// Parses two sequences given on separate lines.
    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Self::new(QarySequence::parse_line(a, 1)?, QarySequence::parse_line(b, 2)?)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn q(&self) -> u32 {
        self.a.q()
    }

    pub fn swap(&self) -> Self {
        SequencePair {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// The verified zone width of a pair together with its correlation profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CzcpCertificate {
    pub n: usize,
    /// Largest width; zero means the pair is not a CZCP for any width.
    pub z: usize,
    pub perfect: bool,
    pub a: QarySequence,
    pub b: QarySequence,
    pub aac_sum_profile: Vec<CorrelationValue>,
    pub acc_sum_profile: Vec<CorrelationValue>,
}

impl CzcpCertificate {
    pub fn is_czcp(&self) -> bool {
        self.z >= 1
    }

    /// Front zone `1..=Z`.
    pub fn t1(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.z
    }

    /// Tail zone `N-Z..=N-1`.
    pub fn t2(&self) -> std::ops::RangeInclusive<usize> {
        self.n - self.z..=self.n - 1
    }

    pub fn aac_sum_squared(&self) -> Option<Vec<i64>> {
        self.aac_sum_profile
            .iter()
            .map(CorrelationValue::norm_sqr_exact)
            .collect()
    }

    pub fn acc_sum_squared(&self) -> Option<Vec<i64>> {
        self.acc_sum_profile
            .iter()
            .map(CorrelationValue::norm_sqr_exact)
            .collect()
    }
}

/// Which positive shifts have vanishing auto- and cross-correlation sums.
struct ZeroMask {
    n: usize,
    aac: Vec<bool>,
    acc: Vec<bool>,
}

impl ZeroMask {
    fn of<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Self {
        let n = a.len();
        let mut aac = vec![false; n];
        let mut acc = vec![false; n];
        for t in 0..n {
            let ti = t as i64;
            aac[t] = T::is_negligible(aperiodic(a, a, ti) + aperiodic(b, b, ti), n);
            acc[t] = T::is_negligible(aperiodic(a, b, ti) + aperiodic(b, a, ti), n);
        }
        ZeroMask { n, aac, acc }
    }

    fn of_pair(p: &SequencePair) -> Self {
        match PairValues::of(&p.a, &p.b).expect("pair is validated on construction") {
            PairValues::Exact(x, y) => Self::of(&x, &y),
            PairValues::Float(x, y) => Self::of(&x, &y),
        }
    }

    fn holds(&self, z: usize) -> bool {
        let n = self.n;
        let front = (1..=z.min(n - 1)).all(|t| self.aac[t]);
        let tail = (n.saturating_sub(z).max(1)..n).all(|t| self.aac[t] && self.acc[t]);
        front && tail
    }

    fn width(&self) -> usize {
        (1..=self.n / 2).take_while(|&z| self.holds(z)).last().unwrap_or(0)
    }
}

/// Largest width of a pair given as value slices in any scalar type.
pub fn czcp_width_values<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> usize {
    ZeroMask::of(a, b).width()
}

/// Whether the defining conditions hold for width `z`, including widths above `N/2`.
pub fn czcp_conditions_hold(p: &SequencePair, z: usize) -> bool {
    ZeroMask::of_pair(p).holds(z)
}

pub fn czcp_width(p: &SequencePair) -> CzcpCertificate {
    let n = p.len();
    let z = ZeroMask::of_pair(p).width();
    let profile = |k| {
        pair_profile(&p.a, &p.b, k)
            .expect("pair is validated on construction")
            .values
    };
    CzcpCertificate {
        n,
        z,
        perfect: z >= 1 && n.is_multiple_of(2) && z == n / 2,
        a: p.a.clone(),
        b: p.b.clone(),
        aac_sum_profile: profile(ProfileKind::AacSum),
        acc_sum_profile: profile(ProfileKind::AccSum),
    }
}

/// True when `p` is a CZCP of width at least `z`.
pub fn is_czcp(p: &SequencePair, z: usize) -> bool {
    z >= 1 && z <= p.len() / 2 && czcp_conditions_hold(p, z)
}

/// Golay complementary pair test.
pub fn is_gcp(p: &SequencePair) -> bool {
    ZeroMask::of_pair(p).aac[1..].iter().all(|&z| z)
}

fn cross_sum_vanishes<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>], c: &[Complex<T>], d: &[Complex<T>]) -> bool {
    let n = a.len() as i64;
    (-(n - 1)..n).all(|t| T::is_negligible(aperiodic(a, c, t) + aperiodic(b, d, t), n as usize))
}

/// Whether `rho(a, c) + rho(b, d)` vanishes at every shift.
pub fn mutually_orthogonal(p: &SequencePair, r: &SequencePair) -> bool {
    if p.len() != r.len() || p.q() != r.q() {
        return false;
    }
    match (PairValues::of(&p.a, &p.b), PairValues::of(&r.a, &r.b)) {
        (Ok(PairValues::Exact(a, b)), Ok(PairValues::Exact(c, d))) => cross_sum_vanishes(&a, &b, &c, &d),
        (Ok(PairValues::Float(a, b)), Ok(PairValues::Float(c, d))) => cross_sum_vanishes(&a, &b, &c, &d),
        _ => false,
    }
}

/// The Golay mate `(rev-conj(b), -rev-conj(a))`.
pub fn golay_mate(p: &SequencePair) -> Result<SequencePair> {
    SequencePair::new(p.b.reverse_conjugate(), p.a.reverse_conjugate().negate()?)
}

/// Divides each sequence by its first entry.
pub fn canonicalize(p: &SequencePair) -> SequencePair {
    let q = p.q();
    let norm = |s: &QarySequence| s.add_phase(q - s.phases()[0]);
    SequencePair {
        a: norm(&p.a),
        b: norm(&p.b),
    }
}

/// Whether the canonical form agrees on the first `z` entries and is negated on the last `z`.
pub fn canonical_pattern_holds(p: &SequencePair, z: usize) -> bool {
    let c = canonicalize(p);
    let (q, n) = (p.q(), p.len());
    if z == 0 {
        return true;
    }
    if q % 2 != 0 || 2 * z > n {
        return false;
    }
    let (x, y) = (c.a.phases(), c.b.phases());
    (0..z).all(|i| x[i] == y[i] && x[n - 1 - i] == (y[n - 1 - i] + q / 2) % q)
}

/// The three width-preserving images `(c1 b, c2 a)`, `(c1 rev b, c2 rev a)`
/// and `(c1 rev-conj b, c2 rev-conj a)`.
///
/// Requires `c1 = ±c2`. Both conditions at shift `N - 1` force `a_0 = ±b_0` in
/// any pair of positive width, so other ratios map every such pair to width zero.
pub fn p2_transforms(p: &SequencePair, c1: RootOfUnity, c2: RootOfUnity) -> Result<Vec<SequencePair>> {
    let q = p.q();
    let (k1, k2) = (c1.phase_in(q)?, c2.phase_in(q)?);
    let ratio = (k1 + q - k2) % q;
    if ratio != 0 && 2 * ratio != q {
        return Err(Error::param(format!(
            "scales must satisfy c1 = ±c2, got exponents {k1} and {k2} over A_{q}"
        )));
    }
    let (a, b) = (&p.a, &p.b);
    Ok(vec![
        SequencePair::new(b.scale(c1)?, a.scale(c2)?)?,
        SequencePair::new(b.reverse().scale(c1)?, a.reverse().scale(c2)?)?,
        SequencePair::new(b.reverse_conjugate().scale(c1)?, a.reverse_conjugate().scale(c2)?)?,
    ])
}

/// `rho(x, c)(tau) + rho(y, d)(tau)` for `tau = -(N-1)..=N-1`, indexed by `tau + N - 1`.
fn cross_sum_all(
    x: &QarySequence,
    c: &QarySequence,
    y: &QarySequence,
    d: &QarySequence,
) -> Result<Vec<CorrelationValue>> {
    let n = x.len() as i64;
    Ok(match (PairValues::of(x, c)?, PairValues::of(y, d)?) {
        (PairValues::Exact(x, c), PairValues::Exact(y, d)) => (-(n - 1)..n)
            .map(|t| CorrelationValue::exact(aperiodic(&x, &c, t) + aperiodic(&y, &d, t)))
            .collect(),
        (PairValues::Float(x, c), PairValues::Float(y, d)) => (-(n - 1)..n)
            .map(|t| CorrelationValue::float(aperiodic(&x, &c, t) + aperiodic(&y, &d, t)))
            .collect(),
        _ => {
            return Err(Error::AlphabetMismatch {
                left: x.q(),
                right: y.q(),
            })
        }
    })
}

/// The sums `rho(a, rev-conj b) + rho(b, -rev-conj a)` and
/// `rho(b, rev-conj b) + rho(a, -rev-conj a)` over all shifts.
fn p2_cross_sums(p: &SequencePair) -> Result<(Vec<CorrelationValue>, Vec<CorrelationValue>)> {
    let (a, b) = (&p.a, &p.b);
    let rb = b.reverse_conjugate();
    let nra = a.reverse_conjugate().negate()?;
    Ok((cross_sum_all(a, &rb, b, &nra)?, cross_sum_all(b, &rb, a, &nra)?))
}

/// The two cross identity sums of [`p2_identities_hold`] for `tau = 0..N`.
pub fn p2_cross_profiles(p: &SequencePair) -> Result<(Vec<CorrelationValue>, Vec<CorrelationValue>)> {
    let n = p.len();
    let (first, second) = p2_cross_sums(p)?;
    Ok((first[n - 1..].to_vec(), second[n - 1..].to_vec()))
}

/// Checks both cross identities at width `z`: the first at every shift, the
/// second for `|tau|` in the tail zone. The second presumes the canonical form.
pub fn p2_identities_hold(p: &SequencePair, z: usize) -> Result<(bool, bool)> {
    let n = p.len();
    let (first, second) = p2_cross_sums(p)?;
    let first_ok = first.iter().all(|v| v.is_zero(n));
    let second_ok =
        (n.saturating_sub(z).max(1)..n).all(|t| second[n - 1 + t].is_zero(n) && second[n - 1 - t].is_zero(n));
    Ok((first_ok, second_ok))
}

/// Even length and `a_i + a_{N-1-i} + b_i + b_{N-1-i} = ±2` for `i < max(Z, 1)`.
///
/// Any binary CZCP satisfies this; a pair of width zero is tested as if its
/// width were one, since the condition at `i = 0` is necessary for width one.
pub fn p3_check(p: &SequencePair) -> Result<bool> {
    let z = czcp_width(p).z.max(1);
    p3_check_at(p, z)
}

/// The even-length and `±2` conditions for an explicit width.
pub fn p3_check_at(p: &SequencePair, z: usize) -> Result<bool> {
    let a = p.a.signs()?;
    let b = p.b.signs()?;
    let n = a.len();
    if n % 2 != 0 {
        return Ok(false);
    }
    Ok((0..z.min(n / 2)).all(|i| (a[i] + a[n - 1 - i] + b[i] + b[n - 1 - i]).abs() == 2))
}

/// The four concatenation patterns of the first construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction1Variant {
    /// `a = [w^u1 e, w^(u1+u) f]`, `b = [w^u2 e, -w^(u2+u) f]`
    V1,
    /// `a = [w^u1 e, -w^(u1+u) f]`, `b = [w^u2 e, w^(u2+u) f]`
    V2,
    /// `V1` with `e` and `f` exchanged
    V3,
    /// `V2` with `e` and `f` exchanged
    V4,
}

impl Construction1Variant {
    pub const ALL: [Construction1Variant; 4] = [Self::V1, Self::V2, Self::V3, Self::V4];

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::V1),
            2 => Ok(Self::V2),
            3 => Ok(Self::V3),
            4 => Ok(Self::V4),
            _ => Err(Error::param(format!("variant must be 1..=4, got {i}"))),
        }
    }
}

/// Offsets `(u1, u2, u)` accepted by the first construction over `A_q`.
pub fn construction1_offsets(q: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for u1 in 0..q {
        for d in [0, q / 2] {
            for u in 0..q {
                out.push((u1, (u1 + q - d) % q, u));
            }
        }
    }
    out.dedup();
    out
}

/// Perfect pair of length `2M` from a Golay pair `(e, f)` of length `M`.
pub fn construction1(
    e: &QarySequence,
    f: &QarySequence,
    u1: u32,
    u2: u32,
    u: u32,
    variant: Construction1Variant,
) -> Result<SequencePair> {
    let seed = SequencePair::new(e.clone(), f.clone())?;
    let q = seed.q();
    if q % 2 != 0 {
        return Err(Error::OddAlphabet(q));
    }
    if !is_gcp(&seed) {
        return Err(Error::NotGcp);
    }
    let diff = (u1 % q + q - u2 % q) % q;
    if diff != 0 && diff != q / 2 {
        return Err(Error::param(format!(
            "offset difference {diff} is neither 0 nor {} modulo {q}",
            q / 2
        )));
    }
    let half = q / 2;
    let (first, second) = match variant {
        Construction1Variant::V1 | Construction1Variant::V2 => (e, f),
        Construction1Variant::V3 | Construction1Variant::V4 => (f, e),
    };
    let (neg_a, neg_b) = match variant {
        Construction1Variant::V1 | Construction1Variant::V3 => (0, half),
        Construction1Variant::V2 | Construction1Variant::V4 => (half, 0),
    };
    let a = first.add_phase(u1).concat(&second.add_phase(u1 + u + neg_a))?;
    let b = first.add_phase(u2).concat(&second.add_phase(u2 + u + neg_b))?;
    SequencePair::new(a, b)
}

/// Perfect pair of length `2^mu` from Golay-pair parameters with `pi(1) = mu`
/// and `w' ∈ {0, q/2}`.
pub fn construction2(p: &DjParams) -> Result<SequencePair> {
    p.validate()?;
    if p.pi[0] != p.mu {
        return Err(Error::param(format!("pi(1) must equal mu={}, got {}", p.mu, p.pi[0])));
    }
    if p.w_prime != 0 && p.w_prime != p.q / 2 {
        return Err(Error::param(format!("w' must be 0 or {}, got {}", p.q / 2, p.w_prime)));
    }
    davis_jedwab_pair(p)
}

/// Every parameter set accepted by [`construction2`] for the given `q` and `mu`.
pub fn construction2_parameters(q: u32, mu: usize) -> Vec<DjParams> {
    let perms: Vec<Vec<usize>> = permutations(mu).into_iter().filter(|p| p[0] == mu).collect();
    let weights = q.pow(mu as u32) as usize;
    let mut out = Vec::with_capacity(perms.len() * weights * q as usize * 2);
    for pi in &perms {
        for code in 0..weights {
            let w: Vec<u32> = (0..mu)
                .map(|k| (code / (q as usize).pow(k as u32) % q as usize) as u32)
                .collect();
            for w0 in 0..q {
                for w_prime in [0, q / 2] {
                    out.push(DjParams {
                        q,
                        mu,
                        pi: pi.clone(),
                        w: w.clone(),
                        w0,
                        w_prime,
                    });
                }
            }
        }
    }
    out
}

/// `(mu - 1)! * q^(mu + 1)`.
pub fn construction2_count(q: u32, mu: usize) -> u64 {
    let fact: u64 = (1..mu as u64).product();
    fact * u64::from(q).pow(mu as u32 + 1)
}

/// A set of equal-length sequences with a claimed zone width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CzcSet {
    pub members: Vec<QarySequence>,
    pub z: usize,
}

fn check_members(members: &[QarySequence]) -> Result<()> {
    let first = members
        .first()
        .ok_or_else(|| Error::param("a set needs at least two members"))?;
    if members.len() < 2 {
        return Err(Error::param("a set needs at least two members"));
    }
    for m in members {
        if m.len() != first.len() {
            return Err(Error::LengthMismatch {
                left: first.len(),
                right: m.len(),
            });
        }
        if m.q() != first.q() {
            return Err(Error::AlphabetMismatch {
                left: first.q(),
                right: m.q(),
            });
        }
    }
    Ok(())
}

fn set_mask<T: Scalar>(values: &[Vec<Complex<T>>]) -> ZeroMask {
    let n = values[0].len();
    let m = values.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut aac = vec![false; n];
    let mut acc = vec![false; n];
    for t in 0..n as i64 {
        let auto = values.iter().fold(zero, |s, v| s + aperiodic(v, v, t));
        let cross = (0..m).fold(zero, |s, i| s + aperiodic(&values[i], &values[(i + 1) % m], t));
        // The successor sum is not conjugate-symmetric, so -tau is checked too.
        let cross_neg = (0..m).fold(zero, |s, i| s + aperiodic(&values[i], &values[(i + 1) % m], -t));
        aac[t as usize] = T::is_negligible(auto, n);
        acc[t as usize] = T::is_negligible(cross, n) && T::is_negligible(cross_neg, n);
    }
    ZeroMask { n, aac, acc }
}

fn members_mask(members: &[QarySequence]) -> Result<ZeroMask> {
    check_members(members)?;
    if members[0].alphabet().is_exact() {
        let v = members.iter().map(|m| m.values::<i64>()).collect::<Result<Vec<_>>>()?;
        Ok(set_mask(&v))
    } else {
        let v = members.iter().map(|m| m.values::<f64>()).collect::<Result<Vec<_>>>()?;
        Ok(set_mask(&v))
    }
}

/// Checks the set conditions at the set's stated width; cross sums pair each
/// member with its cyclic successor.
pub fn czcs_check(s: &CzcSet) -> Result<bool> {
    let mask = members_mask(&s.members)?;
    Ok(s.z >= 1 && s.z <= mask.n / 2 && mask.holds(s.z))
}

/// Largest width for which the set conditions hold.
pub fn czcs_width(members: &[QarySequence]) -> Result<usize> {
    Ok(members_mask(members)?.width())
}

/// The alternating set `a, b, a, b, ...` of even size `m`.
pub fn czcs_from_czcp(p: &SequencePair, m: usize) -> Result<CzcSet> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::param(format!("set size must be even and at least 2, got {m}")));
    }
    let members = (0..m)
        .map(|i| if i % 2 == 0 { p.a.clone() } else { p.b.clone() })
        .collect();
    Ok(CzcSet {
        members,
        z: czcp_width(p).z,
    })
}
