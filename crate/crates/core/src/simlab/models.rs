//! Synthetic data generators for the benchmark models.
//!
//! The two-response models (`LM1..LM3`, `GAM1..GAM3`, `nLM1..nLM2`) use
//! `p = 10` standard normal predictors of which only the first three matter;
//! `LM4`/`LM5` use `p = 25` inputs and `q = 10` responses depending on the
//! first ten; `FOURCUBE` is the pairwise-independent triple supported on four
//! diagonal cubes; `GAUSS` draws from an explicit covariance model.

use crate::dataset::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::gauss::{sample_mvn, GaussianSpec};
use crate::rng::RngStream;
use rand::RngExt;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// Identifier of a synthetic model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelId {
    Lm1,
    Lm2,
    Lm3,
    Lm4,
    Lm5,
    Gam1,
    Gam2,
    Gam3,
    NLm1,
    NLm2,
    FourCube,
    Gauss(GaussianSpec),
}

impl ModelId {
    /// Parses the named models; `GAUSS` needs parameters and is built
    /// separately from a covariance spec.
    pub fn parse(s: &str) -> Result<ModelId> {
        match s.to_ascii_uppercase().as_str() {
            "LM1" => Ok(ModelId::Lm1),
            "LM2" => Ok(ModelId::Lm2),
            "LM3" => Ok(ModelId::Lm3),
            "LM4" => Ok(ModelId::Lm4),
            "LM5" => Ok(ModelId::Lm5),
            "GAM1" => Ok(ModelId::Gam1),
            "GAM2" => Ok(ModelId::Gam2),
            "GAM3" => Ok(ModelId::Gam3),
            "NLM1" => Ok(ModelId::NLm1),
            "NLM2" => Ok(ModelId::NLm2),
            "FOURCUBE" => Ok(ModelId::FourCube),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModelId::Lm1 => "LM1".into(),
            ModelId::Lm2 => "LM2".into(),
            ModelId::Lm3 => "LM3".into(),
            ModelId::Lm4 => "LM4".into(),
            ModelId::Lm5 => "LM5".into(),
            ModelId::Gam1 => "GAM1".into(),
            ModelId::Gam2 => "GAM2".into(),
            ModelId::Gam3 => "GAM3".into(),
            ModelId::NLm1 => "nLM1".into(),
            ModelId::NLm2 => "nLM2".into(),
            ModelId::FourCube => "FOURCUBE".into(),
            ModelId::Gauss(spec) => format!("GAUSS(p={},q={})", spec.p(), spec.q()),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            ModelId::Lm1
            | ModelId::Lm2
            | ModelId::Lm3
            | ModelId::Gam1
            | ModelId::Gam2
            | ModelId::Gam3
            | ModelId::NLm1
            | ModelId::NLm2 => (10, 2),
            ModelId::Lm4 | ModelId::Lm5 => (25, 10),
            ModelId::FourCube => (1, 2),
            ModelId::Gauss(spec) => (spec.p(), spec.q()),
        }
    }
}

/// A generated dataset together with its declared relevant predictor set.
#[derive(Debug, Clone)]
pub struct GeneratedData {
    pub dataset: Dataset,
    /// 0-based indices of the predictors the responses actually depend on.
    pub true_predictors: Vec<usize>,
    pub p: usize,
    pub q: usize,
}

impl GeneratedData {
    /// Predictor block as a matrix.
    pub fn predictors(&self) -> Matrix {
        let cols: Vec<Vec<f64>> = (0..self.p).map(|j| self.dataset.column(j)).collect();
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        Matrix::from_columns(&refs).expect("validated")
    }

    /// Response block as a matrix.
    pub fn responses(&self) -> Matrix {
        let cols: Vec<Vec<f64>> = (0..self.q)
            .map(|j| self.dataset.column(self.p + j))
            .collect();
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        Matrix::from_columns(&refs).expect("validated")
    }
}

fn normal(rng: &mut ChaCha12Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn uniform(rng: &mut ChaCha12Rng) -> f64 {
    rng.random()
}

/// Student-t with one degree of freedom via the inverse CDF.
fn student_t1(rng: &mut ChaCha12Rng) -> f64 {
    (PI * (uniform(rng) - 0.5)).tan()
}

/// `|base|^exponent` with the zero-base limit pinned to 0.
fn guarded_pow(base: f64, exponent: f64) -> f64 {
    let b = base.abs();
    if b == 0.0 {
        0.0
    } else {
        b.powf(exponent)
    }
}

/// One row of a two-response model: returns (y1, y2) given the predictor row,
/// or `None` when the formula overflowed and the row must be redrawn.
fn two_response_row(id: &ModelId, x: &[f64], rng: &mut ChaCha12Rng) -> Option<(f64, f64)> {
    let (y1, y2) = match id {
        ModelId::Lm1 => (
            3.0 * x[0] + 2.0 * x[1] - x[2] + normal(rng),
            x[0] / 3.0 - x[1] / 2.0 + x[2] + normal(rng),
        ),
        ModelId::Lm2 => (
            3.0 * x[0] - 4.0 * x[2] + normal(rng),
            -x[0] + 0.75 * x[1] + normal(rng),
        ),
        ModelId::Lm3 => (3.0 * x[0] + 2.0 * x[1] + normal(rng), x[2] + normal(rng)),
        ModelId::Gam1 => (
            x[0].sin() + x[1].cos() + x[2].exp() + normal(rng),
            x[0] * x[1] + (x[0] * x[2]).sin() + normal(rng),
        ),
        ModelId::Gam2 => (
            x[0].sin() + 2.0 * x[1].cos() + x[2].exp() + normal(rng),
            x[0] + 2.0 * (x[0] * x[2]).sin() + normal(rng),
        ),
        ModelId::Gam3 => (
            x[0].sin() + 1.5 * x[1].cos() + x[2].exp() + normal(rng),
            x[0] + 2.0 * (x[0] * x[2]).sin() + normal(rng),
        ),
        ModelId::NLm1 => {
            let t1 = student_t1(rng);
            let v = uniform(rng);
            (
                2.0 * (x[0] * x[0] + x[1].powi(4)).ln() / (x[0].cos() + x[2].sin()) + t1,
                guarded_pow(x[0] + v, (x[1] - x[2]).sin()),
            )
        }
        ModelId::NLm2 => {
            let t1 = student_t1(rng);
            let v = uniform(rng);
            (
                2.0 * (x[0] * x[0] + x[0].powi(4)).ln() / (x[0].cos() + x[2].sin()) + t1,
                guarded_pow(x[0] + v, (x[0] - x[1]).sin()),
            )
        }
        _ => unreachable!("two_response_row is only called for the q = 2 models"),
    };
    (y1.is_finite() && y2.is_finite()).then_some((y1, y2))
}

/// Draws `n` observations from the model (plus the declared relevant set).
pub fn gen_model(id: &ModelId, n: usize, stream: RngStream) -> Result<GeneratedData> {
    if n < 2 {
        return Err(Error::InsufficientObservations { needed: 2, got: n });
    }
    let (p, q) = id.dims();
    match id {
        ModelId::Gauss(spec) => {
            let dataset = sample_mvn(spec, n, stream)?;
            Ok(GeneratedData {
                dataset,
                true_predictors: spec.informative_predictors(),
                p,
                q,
            })
        }
        ModelId::FourCube => {
            let mut rng = stream.rng();
            let offsets = [
                (0.0, 0.0, 0.0),
                (0.5, 0.5, 0.0),
                (0.0, 0.5, 0.5),
                (0.5, 0.0, 0.5),
            ];
            let mut data = Vec::with_capacity(n * 3);
            for _ in 0..n {
                let cube = offsets[rng.random_range(0..4)];
                data.push(cube.0 + uniform(&mut rng) / 2.0);
                data.push(cube.1 + uniform(&mut rng) / 2.0);
                data.push(cube.2 + uniform(&mut rng) / 2.0);
            }
            let dataset = Dataset::new(
                vec!["X1".into(), "Y1".into(), "Y2".into()],
                Matrix::from_vec(data, n, 3)?,
            )?;
            Ok(GeneratedData {
                dataset,
                true_predictors: vec![0],
                p,
                q,
            })
        }
        ModelId::Lm4 | ModelId::Lm5 => {
            let uniform_inputs = matches!(id, ModelId::Lm5);
            let mut rng = stream.rng();
            let mut data = Vec::with_capacity(n * (p + q));
            let mut x = vec![0.0; p];
            for _ in 0..n {
                for xk in x.iter_mut() {
                    *xk = if uniform_inputs {
                        uniform(&mut rng)
                    } else {
                        normal(&mut rng)
                    };
                }
                data.extend_from_slice(&x);
                for i in 1..=q {
                    let noise = if uniform_inputs {
                        uniform(&mut rng)
                    } else {
                        normal(&mut rng)
                    };
                    let mut y = noise;
                    for k in 1..=(11 - i) {
                        y += k as f64 * x[k - 1];
                    }
                    data.push(y);
                }
            }
            let dataset = Dataset::new(block_names(p, q), Matrix::from_vec(data, n, p + q)?)?;
            Ok(GeneratedData {
                dataset,
                true_predictors: (0..10).collect(),
                p,
                q,
            })
        }
        _ => {
            let mut rng = stream.rng();
            let mut data = Vec::with_capacity(n * (p + q));
            let mut x = vec![0.0; p];
            for _ in 0..n {
                // redraw on the measure-zero event that a formula overflows
                loop {
                    for xk in x.iter_mut() {
                        *xk = normal(&mut rng);
                    }
                    if let Some((y1, y2)) = two_response_row(id, &x, &mut rng) {
                        data.extend_from_slice(&x);
                        data.push(y1);
                        data.push(y2);
                        break;
                    }
                }
            }
            let dataset = Dataset::new(block_names(p, q), Matrix::from_vec(data, n, p + q)?)?;
            Ok(GeneratedData {
                dataset,
                true_predictors: vec![0, 1, 2],
                p,
                q,
            })
        }
    }
}

fn block_names(p: usize, q: usize) -> Vec<String> {
    (1..=p)
        .map(|i| format!("X{i}"))
        .chain((1..=q).map(|i| format!("Y{i}")))
        .collect()
}
