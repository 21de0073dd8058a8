//! Monte-Carlo LS channel estimation over frequency-selective channels.
//!
//! Noise variance is `sigma^2 = 10^(-EbNo/10)`. Every trial draws its channel and
//! noise from a ChaCha8 stream keyed by `(rng_seed, point, trial)`, so results do
//! not depend on the worker count and different matrices see common random numbers.
//! Random baselines draw a fresh matrix per trial from a separate stream.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::training::{assemble_x, baseline_matrix, BaselineSpec, StackedConvolutionMatrix, TrainingMatrix};

/// Condition numbers above this make LS estimation fail.
pub const MAX_CONDITION: f64 = 1e12;

const MATRIX_STREAM: u64 = 1 << 63;

/// `N_t` transmit antennas, each seeing `lambda + 1` unit-variance taps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub n_t: usize,
    pub lambda: usize,
}

impl ChannelModel {
    pub fn new(n_t: usize, lambda: usize) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::param("N_t must be positive"));
        }
        Ok(ChannelModel { n_t, lambda })
    }

    pub fn taps(&self) -> usize {
        self.lambda + 1
    }

    /// Length of the stacked channel vector.
    pub fn dim(&self) -> usize {
        self.n_t * self.taps()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub ebno_grid: Vec<f64>,
    pub trials: usize,
    pub rng_seed: u64,
    pub n_r: usize,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            ebno_grid: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            trials: 10_000,
            rng_seed: 1,
            n_r: 1,
            workers: 0,
        }
    }
}

fn parse_grid(v: &str) -> Option<Vec<f64>> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() == 3 {
        let (start, stop, step): (f64, f64, f64) = (
            parts[0].trim().parse().ok()?,
            parts[1].trim().parse().ok()?,
            parts[2].trim().parse().ok()?,
        );
        if step <= 0.0 || stop < start {
            return None;
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Some((0..count).map(|i| start + step * i as f64).collect());
    }
    v.split(',').map(|t| t.trim().parse().ok()).collect()
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if self.n_r == 0 {
            return Err(Error::param("n_r must be at least 1"));
        }
        if self.ebno_grid.is_empty() || self.ebno_grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("ebno_grid must hold finite values"));
        }
        Ok(())
    }

    /// Applies one `key=value` setting. The grid is a comma list or `start:stop:step`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::param(format!("invalid value '{value}' for {key}"));
        match key {
            "ebno_grid" | "ebno" => self.ebno_grid = parse_grid(value).ok_or_else(bad)?,
            "trials" => self.trials = value.parse().map_err(|_| bad())?,
            "rng_seed" | "seed" => self.rng_seed = value.parse().map_err(|_| bad())?,
            "n_r" => self.n_r = value.parse().map_err(|_| bad())?,
            "workers" => self.workers = value.parse().map_err(|_| bad())?,
            _ => return Err(Error::param(format!("unknown key '{key}'"))),
        }
        Ok(())
    }
}

impl FromStr for SimConfig {
    type Err = Error;

    /// Line-oriented `key=value`; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        for (i, line) in text.lines().enumerate() {
            let t = line.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, 1, "expected key=value"))?;
            let col = line.find('=').map_or(1, |c| c + 2);
            cfg.set(k.trim(), v.trim())
                .map_err(|e| Error::parse(i + 1, col, e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn noise_variance(ebno_db: f64) -> f64 {
    10f64.powf(-ebno_db / 10.0)
}

fn cn<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Stacked taps `h = [h_1; ...; h_{N_t}]`, `h_n = (h_{n,0}, ..., h_{n,lambda})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: DVector<Complex64>,
}

pub fn sample_channel<R: Rng + ?Sized>(model: &ChannelModel, rng: &mut R) -> ChannelRealization {
    ChannelRealization {
        h: DVector::from_fn(model.dim(), |_, _| cn(rng, 1.0)),
    }
}

/// `y = X h + w` with `w ~ CN(0, sigma^2)`.
pub fn observe<R: Rng + ?Sized>(
    x: &StackedConvolutionMatrix<f64>,
    h: &DVector<Complex64>,
    sigma: f64,
    rng: &mut R,
) -> Result<DVector<Complex64>> {
    if x.x.ncols() != h.len() {
        return Err(Error::DimensionMismatch(format!(
            "X has {} columns but h has {} entries",
            x.x.ncols(),
            h.len()
        )));
    }
    let mut y = &x.x * h;
    if sigma > 0.0 {
        for v in y.iter_mut() {
            *v += cn(rng, sigma * sigma);
        }
    }
    Ok(y)
}

fn norm1(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `(X^H X)^{-1}`, refused when the 1-norm condition number exceeds [`MAX_CONDITION`].
pub fn gram_inverse(g: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let inv = g.clone().cholesky().map(|c| c.inverse()).ok_or(Error::IllConditioned {
        condition: f64::INFINITY,
    })?;
    let condition = norm1(g) * norm1(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    Ok(inv)
}

/// `h = (X^H X)^{-1} X^H y`.
pub fn ls_estimate(x: &StackedConvolutionMatrix<f64>, y: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    if x.x.nrows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "X has {} rows but y has {} entries",
            x.x.nrows(),
            y.len()
        )));
    }
    let xh = x.x.adjoint();
    Ok(gram_inverse(&(&xh * &x.x))? * (xh * y))
}

/// `X^H y / E`, valid when `X^H X = E I`.
pub fn ls_estimate_optimal(x: &StackedConvolutionMatrix<f64>, y: &DVector<Complex64>, e: f64) -> DVector<Complex64> {
    x.x.adjoint() * y / Complex64::new(e, 0.0)
}

/// `sigma^2 / (N_t (lambda + 1)) * Tr((X^H X)^{-1})`.
pub fn analytic_mse(omega: &TrainingMatrix<f64>, lambda: usize, sigma2: f64) -> Result<f64> {
    let x = assemble_x(omega, lambda)?;
    let inv = gram_inverse(&x.gram())?;
    Ok(sigma2 * inv.trace().re / inv.nrows() as f64)
}

fn mean_row_energy(omega: &TrainingMatrix<f64>) -> f64 {
    (0..omega.n_t()).map(|n| omega.row_energy(n)).sum::<f64>() / omega.n_t() as f64
}

/// Sparse view of one training matrix, with its solver.
struct Estimator {
    nonzeros: Vec<(usize, usize, Complex64)>,
    l: usize,
    n_t: usize,
    taps: usize,
    /// `None` when `X^H X = E I`.
    inverse: Option<DMatrix<Complex64>>,
    energy: f64,
}

impl Estimator {
    fn new(omega: &TrainingMatrix<f64>, lambda: usize) -> Result<Self> {
        let (l, n_t, taps) = (omega.l(), omega.n_t(), lambda + 1);
        if taps > l {
            return Err(Error::DimensionMismatch(format!(
                "{taps} taps exceed the training length {l}"
            )));
        }
        let mut nonzeros = Vec::new();
        for n in 0..n_t {
            for (m, &v) in omega.row(n).iter().enumerate() {
                if v != Complex64::new(0.0, 0.0) {
                    nonzeros.push((n, m, v));
                }
            }
        }
        let mut est = Estimator {
            nonzeros,
            l,
            n_t,
            taps,
            inverse: None,
            energy: mean_row_energy(omega),
        };
        let g = est.gram(omega);
        let scale = g.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
        let diagonal = DMatrix::from_fn(g.nrows(), g.ncols(), |r, c| {
            if r == c {
                Complex64::new(est.energy, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        if (&g - diagonal).iter().any(|v| v.norm() > 1e-12 * scale) {
            est.inverse = Some(gram_inverse(&g)?);
        }
        Ok(est)
    }

    /// `X^H X` from the periodic correlations of the sparse rows.
    fn gram(&self, omega: &TrainingMatrix<f64>) -> DMatrix<Complex64> {
        let (l, w, lam) = (self.l, self.taps, self.taps as i64 - 1);
        let mut phi = vec![Complex64::new(0.0, 0.0); self.n_t * self.n_t * (2 * w - 1)];
        for &(i, m, v) in &self.nonzeros {
            for d in -lam..=lam {
                let col = (m as i64 + d).rem_euclid(l as i64) as usize;
                for j in 0..self.n_t {
                    let u = omega.row(j)[col];
                    if u != Complex64::new(0.0, 0.0) {
                        phi[(i * self.n_t + j) * (2 * w - 1) + (d + lam) as usize] += v * u.conj();
                    }
                }
            }
        }
        DMatrix::from_fn(self.n_t * w, self.n_t * w, |r, c| {
            let (i, c1, j, c2) = (r / w, r % w, c / w, c % w);
            phi[(i * self.n_t + j) * (2 * w - 1) + (c1 as i64 - c2 as i64 + lam) as usize].conj()
        })
    }

    /// Squared error of one LS estimate.
    fn trial<R: Rng + ?Sized>(&self, rng: &mut R, sigma2: f64) -> f64 {
        let (l, w) = (self.l, self.taps);
        let dim = self.n_t * w;
        let h: Vec<Complex64> = (0..dim).map(|_| cn(rng, 1.0)).collect();
        let mut y: Vec<Complex64> = (0..l).map(|_| cn(rng, sigma2)).collect();
        for &(n, m, v) in &self.nonzeros {
            for c in 0..w {
                y[(m + c) % l] += v * h[n * w + c];
            }
        }
        let mut z = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        for &(n, m, v) in &self.nonzeros {
            let vc = v.conj();
            for c in 0..w {
                z[n * w + c] += vc * y[(m + c) % l];
            }
        }
        let est = match &self.inverse {
            Some(inv) => inv * z,
            None => z / Complex64::new(self.energy, 0.0),
        };
        est.iter().zip(&h).map(|(a, b)| (a - b).norm_sqr()).sum()
    }
}

/// Where each trial's training matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    Fixed(TrainingMatrix<f64>),
    /// A random baseline redrawn for every trial.
    Random(BaselineSpec),
}

impl MatrixSource {
    fn energy(&self) -> Option<f64> {
        match self {
            MatrixSource::Fixed(m) => Some(mean_row_energy(m)),
            MatrixSource::Random(s) => s.energy.or(Some(s.q_len as f64)),
        }
    }
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsePoint {
    pub ebno_db: f64,
    pub paths: usize,
    pub matrix: String,
    pub mse_empirical: f64,
    /// `sigma^2 / E`.
    pub mse_min: f64,
    /// The trace formula, for fixed matrices.
    pub mse_trace: Option<f64>,
    pub gap_db: f64,
    /// Standard error of `mse_empirical`.
    pub std_error: f64,
    pub trials: usize,
    /// Trials whose normal matrix was ill-conditioned.
    pub failures: usize,
}

impl MsePoint {
    /// A point where no trial produced an estimate. Values are NaN.
    pub fn failed(ebno_db: f64, paths: usize, matrix: &str, mse_min: f64, trials: usize) -> Self {
        MsePoint {
            ebno_db,
            paths,
            matrix: matrix.to_string(),
            mse_empirical: f64::NAN,
            mse_min,
            mse_trace: None,
            gap_db: f64::NAN,
            std_error: f64::NAN,
            trials: 0,
            failures: trials,
        }
    }

    pub fn is_failed(&self) -> bool {
        self.trials == 0
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MseReport {
    pub points: Vec<MsePoint>,
}

impl MseReport {
    pub const CSV_HEADER: &'static str = "ebno_db,paths,matrix,mse_empirical,mse_min,gap_db,trials";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{:.9e},{:.9e},{:.6},{}\n",
                p.ebno_db, p.paths, p.matrix, p.mse_empirical, p.mse_min, p.gap_db, p.trials
            ));
        }
        out
    }

    pub fn max_gap_db(&self) -> f64 {
        self.points
            .iter()
            .filter(|p| !p.is_failed())
            .map(|p| p.gap_db)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn trial_rng(seed: u64, point: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    key[24..].copy_from_slice(&stream.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Compensated sum in index order.
fn kahan(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))
}

fn sweep_point(
    source: &MatrixSource,
    fixed: Option<&Estimator>,
    model: &ChannelModel,
    cfg: &SimConfig,
    point: u64,
    ebno_db: f64,
    name: &str,
) -> Result<MsePoint> {
    let sigma2 = noise_variance(ebno_db);
    let dim = model.dim() as f64;
    let per_trial: Vec<Option<f64>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.rng_seed, point, t, 0);
            let drawn;
            let est = match (fixed, source) {
                (Some(e), _) => e,
                (None, MatrixSource::Random(spec)) => {
                    let mut mrng = trial_rng(cfg.rng_seed, point, t, MATRIX_STREAM);
                    let m = baseline_matrix(spec, &mut mrng).ok()?;
                    drawn = Estimator::new(&m, model.lambda).ok()?;
                    &drawn
                }
                (None, MatrixSource::Fixed(_)) => unreachable!("fixed matrices carry an estimator"),
            };
            let err: f64 = (0..cfg.n_r).map(|_| est.trial(&mut rng, sigma2)).sum();
            Some(err / (cfg.n_r as f64 * dim))
        })
        .collect();
    let ok: Vec<f64> = per_trial.iter().flatten().copied().collect();
    let failures = cfg.trials - ok.len();
    let sigma2_e = sigma2 / source.energy().unwrap_or(1.0);
    if ok.is_empty() {
        return Ok(MsePoint::failed(ebno_db, model.taps(), name, sigma2_e, cfg.trials));
    }
    let count = ok.len() as f64;
    let mean = kahan(ok.iter().copied()) / count;
    let var = kahan(ok.iter().map(|v| (v - mean) * (v - mean))) / (count - 1.0).max(1.0);
    let mse_min = sigma2_e;
    let mse_trace = match source {
        MatrixSource::Fixed(m) => Some(analytic_mse(m, model.lambda, sigma2)?),
        MatrixSource::Random(_) => None,
    };
    Ok(MsePoint {
        ebno_db,
        paths: model.taps(),
        matrix: name.to_string(),
        mse_empirical: mean,
        mse_min,
        mse_trace,
        gap_db: 10.0 * (mean / mse_min).log10(),
        std_error: (var / count).sqrt(),
        trials: ok.len(),
        failures,
    })
}

fn check_source(source: &MatrixSource, model: &ChannelModel) -> Result<Option<Estimator>> {
    match source {
        MatrixSource::Fixed(m) => {
            if m.n_t() != model.n_t {
                return Err(Error::DimensionMismatch(format!(
                    "matrix has {} rows but the channel has {} transmit antennas",
                    m.n_t(),
                    model.n_t
                )));
            }
            Ok(Some(Estimator::new(m, model.lambda)?))
        }
        MatrixSource::Random(spec) => {
            if spec.n_t != model.n_t {
                return Err(Error::DimensionMismatch(format!(
                    "random matrices have {} rows but the channel has {} transmit antennas",
                    spec.n_t, model.n_t
                )));
            }
            if !spec.kind.is_random() {
                return Err(Error::param(format!("{} is not a random baseline", spec.kind.name())));
            }
            Ok(None)
        }
    }
}

/// Empirical and minimum MSE at every grid point.
pub fn run_sweep(source: &MatrixSource, name: &str, model: &ChannelModel, cfg: &SimConfig) -> Result<MseReport> {
    cfg.validate()?;
    let fixed = check_source(source, model)?;
    pool(cfg.workers)?.install(|| {
        let points = cfg
            .ebno_grid
            .iter()
            .enumerate()
            .map(|(i, &db)| sweep_point(source, fixed.as_ref(), model, cfg, i as u64, db, name))
            .collect::<Result<Vec<_>>>()?;
        Ok(MseReport { points })
    })
}

/// MSE of each matrix at one EbNo for several path counts. All matrices must
/// share the same row energy. A fixed matrix that cannot resolve a path count
/// (singular normal matrix) yields a failed point instead of an error.
pub fn multipath_sweep(
    matrices: &[(String, MatrixSource)],
    ebno_db: f64,
    path_counts: &[usize],
    cfg: &SimConfig,
) -> Result<MseReport> {
    let energies: Vec<f64> = matrices.iter().filter_map(|(_, s)| s.energy()).collect();
    if let Some(&e0) = energies.first() {
        if energies.iter().any(|e| (e - e0).abs() > 1e-9 * e0) {
            return Err(Error::param("matrices must be normalized to a common energy"));
        }
    }
    let cfg = SimConfig {
        ebno_grid: vec![ebno_db],
        ..cfg.clone()
    };
    let mut report = MseReport::default();
    for &paths in path_counts {
        if paths == 0 {
            return Err(Error::param("path counts start at 1"));
        }
        for (name, source) in matrices {
            let n_t = match source {
                MatrixSource::Fixed(m) => m.n_t(),
                MatrixSource::Random(s) => s.n_t,
            };
            let model = ChannelModel::new(n_t, paths - 1)?;
            match run_sweep(source, name, &model, &cfg) {
                Ok(r) => report.points.extend(r.points),
                Err(Error::IllConditioned { .. }) => {
                    let sigma2 = noise_variance(ebno_db) / source.energy().unwrap_or(1.0);
                    report
                        .points
                        .push(MsePoint::failed(ebno_db, paths, name, sigma2, cfg.trials));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::czcp::SequencePair;
    use crate::training::{proposed_matrix, BaselineKind, SeedVariant};

    fn prop84(j: usize) -> TrainingMatrix<f64> {
        let p = SequencePair::parse("+++-++-+", "+++---+-").unwrap();
        proposed_matrix::<f64>(&p, SeedVariant::Psi1, 4, j).unwrap()
    }

    #[test]
    fn channel_shape_and_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(sample_channel(&ChannelModel::new(4, 0).unwrap(), &mut rng).h.len(), 4);
        let model = ChannelModel::new(2, 1).unwrap();
        let draws = 100_000 / 4;
        let mut acc = 0.0;
        for _ in 0..draws {
            acc += sample_channel(&model, &mut rng)
                .h
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>();
        }
        let var = acc / (draws * 4) as f64;
        assert!((0.98..=1.02).contains(&var), "{var}");
        let a = sample_channel(&model, &mut ChaCha8Rng::seed_from_u64(9));
        let b = sample_channel(&model, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn noiseless_estimate_is_exact() {
        let m = prop84(2);
        let x = assemble_x(&m, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = sample_channel(&ChannelModel::new(4, 4).unwrap(), &mut rng).h;
        let y = observe(&x, &h, 0.0, &mut rng).unwrap();
        assert_eq!(y, &x.x * &h);
        let est = ls_estimate(&x, &y).unwrap();
        assert!((est - &h).norm() < 1e-10);
        let closed = ls_estimate_optimal(&x, &y, 16.0);
        assert!((closed - &h).norm() < 1e-10);
        assert!(observe(&x, &DVector::zeros(3), 0.0, &mut rng).is_err());
    }

    #[test]
    fn scalar_channel() {
        let m = TrainingMatrix::from_rows(vec![vec![Complex64::new(2.0, 0.0)]], prop84(2).layout).unwrap();
        let x = assemble_x(&m, 0).unwrap();
        let h = DVector::from_element(1, Complex64::new(0.5, -1.0));
        let y = observe(&x, &h, 0.0, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(y[0], Complex64::new(1.0, -2.0));
    }

    #[test]
    fn pure_noise_variance() {
        let x = assemble_x(&prop84(2), 4).unwrap();
        let h = DVector::zeros(20);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut acc = 0.0;
        for _ in 0..500 {
            acc += observe(&x, &h, 0.5, &mut rng)
                .unwrap()
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>();
        }
        let var = acc / (500.0 * 64.0);
        assert!((var - 0.25).abs() < 0.01, "{var}");
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let m = TrainingMatrix::from_rows(vec![vec![Complex64::new(1.0, 0.0); 8]; 2], prop84(2).layout).unwrap();
        let x = assemble_x(&m, 1).unwrap();
        let y = DVector::zeros(8);
        assert!(matches!(ls_estimate(&x, &y), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = baseline_matrix(&BaselineSpec::new(BaselineKind::Gold31), &mut rng).unwrap();
        let est = Estimator::new(&m, 4).unwrap();
        let x = assemble_x(&m, 4).unwrap();
        let dense = x.gram();
        assert!((est.gram(&m) - dense).norm() < 1e-9);
        let sigma2 = 0.3;
        let sparse_err = est.trial(&mut trial_rng(1, 2, 3, 0), sigma2);
        let mut r = trial_rng(1, 2, 3, 0);
        let h = DVector::from_fn(20, |_, _| cn(&mut r, 1.0));
        let w = DVector::from_fn(m.l(), |_, _| cn(&mut r, sigma2));
        let y = &x.x * &h + w;
        let dense_err = (ls_estimate(&x, &y).unwrap() - h).norm_squared();
        assert!((sparse_err - dense_err).abs() < 1e-9 * dense_err.max(1.0));
    }

    #[test]
    fn optimal_detection() {
        assert!(Estimator::new(&prop84(2), 4).unwrap().inverse.is_none());
        assert!(Estimator::new(&prop84(2), 5).unwrap().inverse.is_some());
    }

    #[test]
    fn sweep_is_reproducible_across_worker_counts() {
        let source = MatrixSource::Random(BaselineSpec {
            kind: BaselineKind::Random,
            n_t: 4,
            q_len: 16,
            energy: None,
        });
        let model = ChannelModel::new(4, 4).unwrap();
        let mut cfg = SimConfig {
            ebno_grid: vec![10.0],
            trials: 300,
            rng_seed: 42,
            n_r: 1,
            workers: 1,
        };
        let a = run_sweep(&source, "random", &model, &cfg).unwrap();
        cfg.workers = 4;
        let b = run_sweep(&source, "random", &model, &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.points[0].gap_db > 0.0);
    }

    #[test]
    fn config_parsing() {
        let cfg: SimConfig = "# sweep\nebno_grid = 0:20:5\ntrials=100\nrng_seed=7\n".parse().unwrap();
        assert_eq!(cfg.ebno_grid, vec![0.0, 5.0, 10.0, 15.0, 20.0]);
        assert_eq!((cfg.trials, cfg.rng_seed, cfg.n_r), (100, 7, 1));
        assert!(matches!(
            "trials=0".parse::<SimConfig>(),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            "x=1".parse::<SimConfig>(),
            Err(Error::Parse { line: 1, column: 3, .. })
        ));
        assert!(matches!(
            "\nebno".parse::<SimConfig>(),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn multipath_requires_common_energy() {
        let cfg = SimConfig {
            trials: 10,
            ..SimConfig::default()
        };
        let list = vec![
            ("a".to_string(), MatrixSource::Fixed(prop84(2))),
            ("b".to_string(), MatrixSource::Fixed(prop84(6))),
        ];
        assert!(multipath_sweep(&list, 16.0, &[5], &cfg).is_err());
    }

    #[test]
    fn unresolvable_path_count_is_a_failed_point() {
        let cfg = SimConfig {
            trials: 20,
            workers: 1,
            ..SimConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let barker = baseline_matrix(&BaselineSpec::new(BaselineKind::Barker13), &mut rng).unwrap();
        let list = vec![("barker13".to_string(), MatrixSource::Fixed(barker))];
        let r = multipath_sweep(&list, 16.0, &[13, 14], &cfg).unwrap();
        assert!(!r.points[0].is_failed());
        assert!(r.points[1].is_failed());
        assert_eq!((r.points[1].paths, r.points[1].failures), (14, 20));
        assert!(r.max_gap_db().is_finite());
    }

    #[test]
    fn csv_header() {
        assert!(MseReport::default()
            .to_csv()
            .starts_with("ebno_db,paths,matrix,mse_empirical,mse_min,gap_db,trials\n"));
    }
}
