//! Closed-form dependence values under multivariate normal models, plus a
//! seeded sampler. These are the ground truth for the statistical tests.
//!
//! For a normal response with squared multiple correlation `rho2` on the
//! conditioning block, the rank correlation is
//! `(3/pi) * asin((1 + rho2) / 2) - 1/2`; the multi-response value chains
//! these terms exactly like the estimator does.

use crate::dataset::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use nalgebra::{DMatrix, DVector};
use rand::RngExt;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// Absolute PSD tolerance on the correlation-scaled matrix.
pub const TOL_PSD: f64 = 1e-9;
/// Entrywise zero tolerance for the cross-covariance block.
pub const TOL_ZERO: f64 = 1e-12;
/// Relative eigenvalue cutoff shared by the pseudo-inverse and rank counts.
const RANK_CUTOFF: f64 = 1e-10;

/// Covariance model for `(X, Y)` with `X` of dimension `p` and `Y` of
/// dimension `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    sigma: Matrix,
    p: usize,
    q: usize,
}

impl GaussianSpec {
    pub fn new(sigma: Matrix, p: usize, q: usize) -> Result<GaussianSpec> {
        let d = p + q;
        if p == 0 || q == 0 {
            return Err(Error::InvalidCovariance("need p >= 1 and q >= 1".into()));
        }
        if sigma.n() != d || sigma.d() != d {
            return Err(Error::ShapeMismatch(format!(
                "covariance is {}x{}, expected {d}x{d}",
                sigma.n(),
                sigma.d()
            )));
        }
        let m = to_nalgebra(&sigma);
        check_symmetric(&m)?;
        for i in 0..d {
            if m[(i, i)] <= 0.0 {
                return Err(Error::InvalidCovariance(format!(
                    "diagonal entry {} is not positive",
                    i + 1
                )));
            }
        }
        let corr = correlation_scale(&m);
        let eigen = corr.clone().symmetric_eigen();
        let min = eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -TOL_PSD {
            return Err(Error::NotPsd(format!(
                "smallest correlation eigenvalue {min:.3e} below -{TOL_PSD:.0e}"
            )));
        }
        Ok(GaussianSpec { sigma, p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    /// Predictor indices with a nonzero cross-covariance row (0-based).
    pub fn informative_predictors(&self) -> Vec<usize> {
        let corr = correlation_scale(&to_nalgebra(&self.sigma));
        (0..self.p)
            .filter(|&j| (0..self.q).any(|i| corr[(j, self.p + i)].abs() > TOL_ZERO))
            .collect()
    }
}

/// Equicorrelated covariance model: constant within-block correlations
/// `rho_x`, `rho_y` and constant cross-block correlation `rho_xy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquicorrSpec {
    pub p: usize,
    pub q: usize,
    pub rho_x: f64,
    pub rho_y: f64,
    pub rho_xy: f64,
}

impl EquicorrSpec {
    pub fn new(p: usize, q: usize, rho_x: f64, rho_y: f64, rho_xy: f64) -> Result<EquicorrSpec> {
        if p == 0 || q == 0 {
            return Err(Error::NotPsd("need p >= 1 and q >= 1".into()));
        }
        for (name, value) in [("rho_x", rho_x), ("rho_y", rho_y), ("rho_xy", rho_xy)] {
            if !value.is_finite() || value.abs() > 1.0 {
                return Err(Error::NotPsd(format!("{name} = {value} outside [-1, 1]")));
            }
        }
        if p > 1 && rho_x < -1.0 / (p as f64 - 1.0) - TOL_ZERO {
            return Err(Error::NotPsd(format!(
                "rho_x = {rho_x} below -1/(p-1) = {}",
                -1.0 / (p as f64 - 1.0)
            )));
        }
        if q > 1 && rho_y < -1.0 / (q as f64 - 1.0) - TOL_ZERO {
            return Err(Error::NotPsd(format!(
                "rho_y = {rho_y} below -1/(q-1) = {}",
                -1.0 / (q as f64 - 1.0)
            )));
        }
        let bound = cross_bound(p, q, rho_x, rho_y);
        if rho_xy * rho_xy > bound + 1e-12 {
            return Err(Error::NotPsd(format!(
                "rho_xy^2 = {} exceeds the cross-correlation bound {bound}",
                rho_xy * rho_xy
            )));
        }
        Ok(EquicorrSpec {
            p,
            q,
            rho_x,
            rho_y,
            rho_xy,
        })
    }

    /// Unit-diagonal covariance matrix of the model.
    pub fn to_covariance(&self) -> Matrix {
        let d = self.p + self.q;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let value = if i == j {
                    1.0
                } else if i < self.p && j < self.p {
                    self.rho_x
                } else if i >= self.p && j >= self.p {
                    self.rho_y
                } else {
                    self.rho_xy
                };
                data[i * d + j] = value;
            }
        }
        Matrix::from_vec(data, d, d).expect("finite by construction")
    }

    pub fn to_gaussian(&self) -> Result<GaussianSpec> {
        GaussianSpec::new(self.to_covariance(), self.p, self.q)
    }
}

fn cross_bound(p: usize, q: usize, rho_x: f64, rho_y: f64) -> f64 {
    let a = (1.0 + (p as f64 - 1.0) * rho_x) / p as f64;
    let b = (1.0 + (q as f64 - 1.0) * rho_y) / q as f64;
    a * b
}

fn to_nalgebra(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.n(), m.d(), |i, j| m.row(i)[j])
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::ShapeMismatch(format!(
                    "matrix not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn correlation_scale(m: &DMatrix<f64>) -> DMatrix<f64> {
    let d = m.nrows();
    let scales: Vec<f64> = (0..d).map(|i| m[(i, i)].sqrt()).collect();
    DMatrix::from_fn(d, d, |i, j| m[(i, j)] / (scales[i] * scales[j]))
}

/// Squared multiple correlation of `target` on the `cond` block of a
/// correlation matrix, through the eigenvalue pseudo-inverse.
fn multiple_corr_sq(corr: &DMatrix<f64>, cond: &[usize], target: usize) -> f64 {
    if cond.is_empty() {
        return 0.0;
    }
    let k = cond.len();
    let block = DMatrix::from_fn(k, k, |i, j| corr[(cond[i], cond[j])]);
    let cross = DVector::from_fn(k, |i, _| corr[(cond[i], target)]);
    let eigen = block.symmetric_eigen();
    let lambda_max = eigen.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = RANK_CUTOFF * lambda_max;
    let mut rho2 = 0.0;
    for (idx, &lambda) in eigen.eigenvalues.iter().enumerate() {
        if lambda > cutoff {
            let proj = eigen.eigenvectors.column(idx).dot(&cross);
            rho2 += proj * proj / lambda;
        }
    }
    rho2
}

fn arcsin_law(rho2: f64) -> f64 {
    let arg = ((1.0 + rho2) / 2.0).clamp(-1.0, 1.0);
    3.0 / PI * arg.asin() - 0.5
}

/// Closed-form rank correlation of a normal response on a normal predictor
/// block: `Sigma11` the predictor covariance and `sigma12` the
/// cross-covariance against a unit-variance response.
pub fn xi_gauss(sigma11: &Matrix, sigma12: &[f64]) -> Result<f64> {
    let p = sigma11.n();
    if sigma11.d() != p {
        return Err(Error::ShapeMismatch(format!(
            "Sigma11 is {}x{}",
            sigma11.n(),
            sigma11.d()
        )));
    }
    if sigma12.len() != p {
        return Err(Error::ShapeMismatch(format!(
            "Sigma12 has {} entries for p = {p}",
            sigma12.len()
        )));
    }
    let m = to_nalgebra(sigma11);
    check_symmetric(&m)?;
    for i in 0..p {
        if m[(i, i)] <= 0.0 {
            return Err(Error::InvalidCovariance(
                "Sigma11 diagonal must be positive".into(),
            ));
        }
    }
    // rescale to correlation form; the response already has unit variance
    let d = p + 1;
    let mut full = DMatrix::zeros(d, d);
    for i in 0..p {
        for j in 0..p {
            full[(i, j)] = m[(i, j)];
        }
        full[(i, p)] = sigma12[i];
        full[(p, i)] = sigma12[i];
    }
    full[(p, p)] = 1.0;
    let corr = correlation_scale(&full);
    let cond: Vec<usize> = (0..p).collect();
    let rho2 = multiple_corr_sq(&corr, &cond, p);
    if rho2 > 1.0 + 1e-8 {
        return Err(Error::InvalidCovariance(format!(
            "squared multiple correlation {rho2} exceeds 1"
        )));
    }
    Ok(arcsin_law(rho2.clamp(0.0, 1.0)))
}

/// Closed-form value of the multi-response measure with its term breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussOracle {
    pub value: f64,
    pub lambda_terms: Vec<f64>,
    pub alpha_terms: Vec<f64>,
    /// Squared multiple correlations feeding the lambda terms.
    pub rho_lambda: Vec<f64>,
    pub rho_alpha: Vec<f64>,
}

fn compose_oracle(rho_lambda: Vec<f64>, rho_alpha: Vec<f64>, q: usize) -> GaussOracle {
    let lambda_terms: Vec<f64> = rho_lambda.iter().map(|&r| arcsin_law(r)).collect();
    let alpha_terms: Vec<f64> = rho_alpha.iter().map(|&r| arcsin_law(r)).collect();
    let value = if q == 1 {
        lambda_terms[0]
    } else {
        let lambda_sum: f64 = lambda_terms.iter().sum();
        let alpha_sum: f64 = alpha_terms.iter().sum();
        1.0 - (q as f64 - lambda_sum) / (q as f64 - alpha_sum)
    };
    GaussOracle {
        value,
        lambda_terms,
        alpha_terms,
        rho_lambda,
        rho_alpha,
    }
}

/// Closed form for the equicorrelated model.
pub fn t_gauss_equicorr(spec: &EquicorrSpec) -> Result<GaussOracle> {
    let EquicorrSpec {
        p,
        q,
        rho_x,
        rho_y,
        rho_xy,
    } = *spec;
    // revalidate so raw struct literals cannot sneak past the PSD check
    EquicorrSpec::new(p, q, rho_x, rho_y, rho_xy)?;
    let pf = p as f64;
    let a = 1.0 + (pf - 1.0) * rho_x;
    let rxy2 = rho_xy * rho_xy;
    let mut rho_lambda = Vec::with_capacity(q);
    let mut rho_alpha = Vec::with_capacity(q.saturating_sub(1));
    rho_lambda.push((pf * rxy2 / a).clamp(0.0, 1.0));
    for i in 2..=q {
        let fi = i as f64;
        let num = a * (fi - 1.0) * rho_y * rho_y - pf * (fi * rho_y - 1.0) * rxy2;
        let den = a * (1.0 + (fi - 2.0) * rho_y) - pf * (fi - 1.0) * rxy2;
        // den -> 0 only at the perfect-dependence boundary of the model
        let rho = if den.abs() < 1e-12 {
            1.0
        } else {
            (num / den).clamp(0.0, 1.0)
        };
        rho_lambda.push(rho);
        let alpha = (fi - 1.0) * rho_y * rho_y / (1.0 + (fi - 2.0) * rho_y);
        rho_alpha.push(alpha.clamp(0.0, 1.0));
    }
    Ok(compose_oracle(rho_lambda, rho_alpha, q))
}

/// General-covariance oracle: each conditional term's squared multiple
/// correlation is read off the corresponding correlation submatrix.
/// Experimental beyond the equicorrelated case, which is the validated path.
pub fn t_gauss_general(spec: &GaussianSpec) -> Result<GaussOracle> {
    let corr = correlation_scale(&to_nalgebra(spec.sigma()));
    let (p, q) = (spec.p(), spec.q());
    let mut rho_lambda = Vec::with_capacity(q);
    let mut rho_alpha = Vec::with_capacity(q.saturating_sub(1));
    for i in 0..q {
        let mut cond: Vec<usize> = (0..p).collect();
        cond.extend((0..i).map(|t| p + t));
        rho_lambda.push(multiple_corr_sq(&corr, &cond, p + i).clamp(0.0, 1.0));
        if i >= 1 {
            let cond: Vec<usize> = (0..i).map(|t| p + t).collect();
            rho_alpha.push(multiple_corr_sq(&corr, &cond, p + i).clamp(0.0, 1.0));
        }
    }
    Ok(compose_oracle(rho_lambda, rho_alpha, q))
}

/// Where a normal model sits between independence and perfect dependence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeClass {
    Independent,
    Perfect,
    Intermediate,
}

impl ExtremeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExtremeClass::Independent => "independent",
            ExtremeClass::Perfect => "perfect",
            ExtremeClass::Intermediate => "intermediate",
        }
    }
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let eigen = m.clone().symmetric_eigen();
    let lambda_max = eigen.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = RANK_CUTOFF * lambda_max;
    eigen.eigenvalues.iter().filter(|&&l| l > cutoff).count()
}

/// Classifies the model: independent iff the cross block vanishes, perfect
/// iff the full matrix has the same numerical rank as the predictor block.
pub fn classify_extremes(spec: &GaussianSpec) -> ExtremeClass {
    let corr = correlation_scale(&to_nalgebra(spec.sigma()));
    let (p, q) = (spec.p(), spec.q());
    let cross_zero = (0..p).all(|i| (0..q).all(|j| corr[(i, p + j)].abs() <= TOL_ZERO));
    if cross_zero {
        return ExtremeClass::Independent;
    }
    let block = DMatrix::from_fn(p, p, |i, j| corr[(i, j)]);
    if numerical_rank(&corr) == numerical_rank(&block) {
        ExtremeClass::Perfect
    } else {
        ExtremeClass::Intermediate
    }
}

/// Draws `n` i.i.d. rows through the symmetric square root of the covariance,
/// tolerating semi-definite models. Columns are labeled `X1..Xp, Y1..Yq`.
pub fn sample_mvn(spec: &GaussianSpec, n: usize, stream: RngStream) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::InsufficientObservations { needed: 2, got: n });
    }
    let sigma = to_nalgebra(spec.sigma());
    let d = sigma.nrows();
    let eigen = sigma.symmetric_eigen();
    let scale = eigen.eigenvalues.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    let mut sqrt_vals = DVector::zeros(d);
    for (i, &lambda) in eigen.eigenvalues.iter().enumerate() {
        if lambda < -TOL_PSD * scale {
            return Err(Error::NotPsd(format!(
                "eigenvalue {lambda:.3e} too negative for sampling"
            )));
        }
        sqrt_vals[i] = lambda.max(0.0).sqrt();
    }
    // root = U * diag(sqrt(lambda)); row = root * z
    let mut root = eigen.eigenvectors;
    for j in 0..d {
        let s = sqrt_vals[j];
        for i in 0..d {
            root[(i, j)] *= s;
        }
    }
    let mut rng = stream.rng();
    let mut data = vec![0.0; n * d];
    let mut z = vec![0.0; d];
    for row in 0..n {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        for i in 0..d {
            let mut acc = 0.0;
            for (j, &zj) in z.iter().enumerate() {
                acc += root[(i, j)] * zj;
            }
            data[row * d + i] = acc;
        }
    }
    let names: Vec<String> = (1..=spec.p())
        .map(|i| format!("X{i}"))
        .chain((1..=spec.q()).map(|i| format!("Y{i}")))
        .collect();
    Dataset::new(names, Matrix::from_vec(data, n, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngConfig;

    fn identity(d: usize) -> Matrix {
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            data[i * d + i] = 1.0;
        }
        Matrix::from_vec(data, d, d).unwrap()
    }

    #[test]
    fn xi_gauss_endpoints() {
        let s11 = identity(1);
        assert!(xi_gauss(&s11, &[0.0]).unwrap().abs() < 1e-15);
        assert!((xi_gauss(&s11, &[1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((xi_gauss(&s11, &[-1.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xi_gauss_half_correlation() {
        // (3/pi) * asin(0.625) - 1/2, frozen from an independent evaluation
        let v = xi_gauss(&identity(1), &[0.5]).unwrap();
        assert!((v - 0.144703124224824).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn xi_gauss_scale_invariance() {
        let s11 = Matrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 9.0]]).unwrap();
        let base = xi_gauss(&s11, &[1.0, 2.0]).unwrap();
        // same correlations, different scale of Sigma11
        let scaled = Matrix::from_rows(&[vec![16.0, 4.0], vec![4.0, 36.0]]).unwrap();
        let v = xi_gauss(&scaled, &[2.0, 4.0]).unwrap();
        assert!((base - v).abs() < 1e-12);
    }

    #[test]
    fn xi_gauss_rejects_bad_shapes() {
        assert!(xi_gauss(&identity(2), &[0.1]).is_err());
        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.2, 1.0]]).unwrap();
        assert!(matches!(
            xi_gauss(&asym, &[0.0, 0.0]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn equicorr_paper_configs() {
        let a = t_gauss_equicorr(&EquicorrSpec::new(5, 2, 0.5, 0.2, 0.5).unwrap()).unwrap();
        assert!((a.value - 0.2712).abs() < 5e-4, "got {}", a.value);
        let b = t_gauss_equicorr(&EquicorrSpec::new(2, 4, 0.25, 0.75, 0.5).unwrap()).unwrap();
        assert!((b.value - 0.1054).abs() < 5e-4, "got {}", b.value);
    }

    #[test]
    fn equicorr_zero_cross_is_zero() {
        let spec = EquicorrSpec::new(4, 3, 0.3, 0.4, 0.0).unwrap();
        let oracle = t_gauss_equicorr(&spec).unwrap();
        assert!(oracle.value.abs() < 1e-14);
    }

    #[test]
    fn equicorr_q1_reduces_to_xi_gauss() {
        let spec = EquicorrSpec::new(3, 1, 0.4, 0.0, 0.3).unwrap();
        let oracle = t_gauss_equicorr(&spec).unwrap();
        // build Sigma11 and Sigma12 directly
        let s11 = Matrix::from_rows(&[
            vec![1.0, 0.4, 0.4],
            vec![0.4, 1.0, 0.4],
            vec![0.4, 0.4, 1.0],
        ])
        .unwrap();
        let direct = xi_gauss(&s11, &[0.3, 0.3, 0.3]).unwrap();
        assert!((oracle.value - direct).abs() < 1e-12);
    }

    #[test]
    fn equicorr_matches_general_oracle() {
        for (p, q, rx, ry, rxy) in [
            (5, 2, 0.5, 0.2, 0.5),
            (2, 4, 0.25, 0.75, 0.5),
            (3, 3, 0.1, 0.6, 0.25),
        ] {
            let spec = EquicorrSpec::new(p, q, rx, ry, rxy).unwrap();
            let closed = t_gauss_equicorr(&spec).unwrap();
            let general = t_gauss_general(&spec.to_gaussian().unwrap()).unwrap();
            assert!(
                (closed.value - general.value).abs() < 1e-10,
                "{p},{q}: {} vs {}",
                closed.value,
                general.value
            );
        }
    }

    #[test]
    fn equicorr_monotone_in_cross_correlation() {
        let mut last = -1.0;
        for step in 0..10 {
            let rho_xy = step as f64 * 0.05;
            let spec = EquicorrSpec::new(5, 2, 0.5, 0.2, rho_xy).unwrap();
            let value = t_gauss_equicorr(&spec).unwrap().value;
            assert!(value >= last - 1e-12, "not monotone at {rho_xy}");
            assert!((0.0..=1.0).contains(&value));
            last = value;
        }
    }

    #[test]
    fn equicorr_rejects_psd_violation() {
        assert!(matches!(
            EquicorrSpec::new(2, 2, 0.0, 0.0, 0.9),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn classify_block_diagonal_is_independent() {
        let spec = EquicorrSpec::new(2, 2, 0.5, 0.3, 0.0)
            .unwrap()
            .to_gaussian()
            .unwrap();
        assert_eq!(classify_extremes(&spec), ExtremeClass::Independent);
    }

    #[test]
    fn classify_exact_copy_is_perfect() {
        let sigma = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let spec = GaussianSpec::new(sigma, 1, 1).unwrap();
        assert_eq!(classify_extremes(&spec), ExtremeClass::Perfect);
    }

    #[test]
    fn classify_equicorr_boundary_is_perfect() {
        let p = 2;
        let rho_x = 0.5;
        let rho_xy = ((1.0 + (p as f64 - 1.0) * rho_x) / p as f64).sqrt();
        let spec = EquicorrSpec::new(p, 2, rho_x, 1.0, rho_xy)
            .unwrap()
            .to_gaussian()
            .unwrap();
        assert_eq!(classify_extremes(&spec), ExtremeClass::Perfect);
        // and the closed form agrees
        let oracle =
            t_gauss_equicorr(&EquicorrSpec::new(p, 2, rho_x, 1.0, rho_xy).unwrap()).unwrap();
        assert!((oracle.value - 1.0).abs() < 1e-9, "got {}", oracle.value);
    }

    #[test]
    fn classify_intermediate() {
        let spec = EquicorrSpec::new(2, 2, 0.2, 0.1, 0.3)
            .unwrap()
            .to_gaussian()
            .unwrap();
        assert_eq!(classify_extremes(&spec), ExtremeClass::Intermediate);
    }

    #[test]
    fn classify_scale_invariant() {
        let sigma = Matrix::from_rows(&[vec![2.0, 0.6], vec![0.6, 5.0]]).unwrap();
        let scaled = Matrix::from_rows(&[vec![6.0, 1.8], vec![1.8, 15.0]]).unwrap();
        let a = classify_extremes(&GaussianSpec::new(sigma, 1, 1).unwrap());
        let b = classify_extremes(&GaussianSpec::new(scaled, 1, 1).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn sampler_is_seeded() {
        let spec = EquicorrSpec::new(2, 2, 0.5, 0.2, 0.3)
            .unwrap()
            .to_gaussian()
            .unwrap();
        let stream = RngConfig::new(5).root();
        let a = sample_mvn(&spec, 50, stream).unwrap();
        let b = sample_mvn(&spec, 50, stream).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.names(), &["X1", "X2", "Y1", "Y2"]);
    }

    #[test]
    fn sampler_moments_identity() {
        let spec = GaussianSpec::new(identity(3), 2, 1).unwrap();
        let data = sample_mvn(&spec, 100_000, RngConfig::new(11).root()).unwrap();
        for j in 0..3 {
            let col = data.column(j);
            let mean: f64 = col.iter().sum::<f64>() / col.len() as f64;
            let var: f64 =
                col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (col.len() - 1) as f64;
            assert!(mean.abs() < 0.02, "mean {mean}");
            assert!((var - 1.0).abs() < 0.05, "var {var}");
        }
    }

    #[test]
    fn sampler_recovers_equicorr_correlation() {
        let spec = EquicorrSpec::new(2, 2, 0.5, 0.0, 0.0)
            .unwrap()
            .to_gaussian()
            .unwrap();
        let data = sample_mvn(&spec, 100_000, RngConfig::new(13).root()).unwrap();
        let x1 = data.column(0);
        let x2 = data.column(1);
        let n = x1.len() as f64;
        let m1: f64 = x1.iter().sum::<f64>() / n;
        let m2: f64 = x2.iter().sum::<f64>() / n;
        let cov: f64 = x1
            .iter()
            .zip(&x2)
            .map(|(a, b)| (a - m1) * (b - m2))
            .sum::<f64>()
            / n;
        let v1: f64 = x1.iter().map(|a| (a - m1) * (a - m1)).sum::<f64>() / n;
        let v2: f64 = x2.iter().map(|a| (a - m2) * (a - m2)).sum::<f64>() / n;
        let corr = cov / (v1 * v2).sqrt();
        assert!((corr - 0.5).abs() < 0.03, "corr {corr}");
    }

    #[test]
    fn sampler_handles_singular_covariance() {
        // rank-1 covariance: Y = X exactly
        let sigma = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let spec = GaussianSpec::new(sigma, 1, 1).unwrap();
        let data = sample_mvn(&spec, 100, RngConfig::new(3).root()).unwrap();
        for i in 0..data.n() {
            let row = data.values().row(i);
            assert!((row[0] - row[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_spec_rejects_indefinite() {
        let sigma = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            GaussianSpec::new(sigma, 1, 1),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn informative_predictors_from_cross_block() {
        let sigma = Matrix::from_rows(&[
            vec![1.0, 0.0, 0.5],
            vec![0.0, 1.0, 0.0],
            vec![0.5, 0.0, 1.0],
        ])
        .unwrap();
        let spec = GaussianSpec::new(sigma, 2, 1).unwrap();
        assert_eq!(spec.informative_predictors(), vec![0]);
    }
}
