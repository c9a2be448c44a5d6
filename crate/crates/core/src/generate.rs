//! Random strictly semi-positive tensors for the bounds harness.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::norms::{norm_bound, Operator};
use crate::rng::{self, stream};
use crate::spositivity::{classify, Classification, Verdict};
use crate::tensor::{unit_tensor, Tensor};
use crate::vector::NormP;

pub const MAX_RESAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    IdentityShift,
    DiagDominant,
    RandomSymmetricCopositive,
    MatrixM2,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::IdentityShift, Family::DiagDominant, Family::RandomSymmetricCopositive, Family::MatrixM2];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::IdentityShift => "identity_shift",
            Family::DiagDominant => "diag_dominant",
            Family::RandomSymmetricCopositive => "random_symmetric_copositive",
            Family::MatrixM2 => "matrix_m2",
        }
    }

    fn default_symmetric(self) -> bool {
        !matches!(self, Family::DiagDominant)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s.replace('-', "_"))
            .ok_or_else(|| Error::Parse(format!("unknown generator family {s:?}")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorParams {
    /// identity_shift: diagonal weight (default 1).
    pub c: Option<f64>,
    /// identity_shift: perturbation weight (default 0.5).
    pub epsilon: Option<f64>,
    /// Whether to emit a symmetric tensor; every family but diag_dominant
    /// defaults to symmetric.
    pub symmetric: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    #[serde(default)]
    pub params: GeneratorParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generated {
    pub tensor: Tensor,
    /// Samples drawn before one passed the gate (1 = first try).
    pub attempts: usize,
    pub classification: Classification,
}

impl GeneratorSpec {
    fn validate(&self) -> Result<()> {
        if self.m < 2 || self.n < 1 {
            return Err(Error::Generator(format!("need m >= 2 and n >= 1, got m = {}, n = {}", self.m, self.n)));
        }
        if self.family == Family::MatrixM2 && self.m != 2 {
            return Err(Error::Generator(format!("matrix_m2 requires m = 2, got {}", self.m)));
        }
        let (c, eps) = self.shift();
        if self.family == Family::IdentityShift && !(c > eps && eps >= 0.0) {
            return Err(Error::Generator(format!(
                "identity_shift requires c > epsilon >= 0, got c = {c}, epsilon = {eps}"
            )));
        }
        Ok(())
    }

    fn shift(&self) -> (f64, f64) {
        (self.params.c.unwrap_or(1.0), self.params.epsilon.unwrap_or(0.5))
    }

    fn symmetric(&self) -> bool {
        self.params.symmetric.unwrap_or(self.family.default_symmetric())
    }
}

fn uniform_tensor(m: usize, n: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Result<Tensor> {
    let len = n.pow(m as u32);
    Tensor::new(m, n, (0..len).map(|_| rng.gen_range(lo..hi)).collect(), false)
}

/// Zeroes the diagonal, symmetrizing first when asked.
fn off_diagonal(t: Tensor, symmetric: bool) -> Tensor {
    let t = if symmetric { t.symmetrize() } else { t };
    t.map_diagonal(|_, _| 0.0)
}

/// One unchecked sample.
fn sample(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Tensor> {
    let (m, n) = (spec.m, spec.n);
    let sym = spec.symmetric();
    match spec.family {
        Family::IdentityShift => {
            let (c, eps) = spec.shift();
            let identity = unit_tensor(m, n)?.scale(c);
            if eps == 0.0 {
                return Ok(identity);
            }
            let p = uniform_tensor(m, n, -1.0, 1.0, rng)?;
            let p = if sym { p.symmetrize() } else { p };
            let s = norm_bound(&p, Operator::T, NormP::Inf)? * (n as f64).powf((m as f64 - 2.0) / 2.0);
            let p = if s > 0.0 { p.scale(eps / s) } else { p };
            identity.add(&p)
        }
        Family::DiagDominant | Family::MatrixM2 => {
            let (lo, hi) = if spec.family == Family::MatrixM2 { (-1.0, 0.0) } else { (-1.0, 1.0) };
            let off = off_diagonal(uniform_tensor(m, n, lo, hi, rng)?, sym);
            let rows = off.abs_row_sums();
            let margins: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
            Ok(off.map_diagonal(|i, _| rows[i] + margins[i]))
        }
        Family::RandomSymmetricCopositive => {
            let off = off_diagonal(uniform_tensor(m, n, 0.0, 1.0, rng)?, true);
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
            Ok(off.map_diagonal(|i, _| diag[i]))
        }
    }
}

/// Accepts `t` only when classified strictly semi-positive.
pub fn gate(t: &Tensor, cfg: &Config) -> Result<Classification> {
    let c = classify(t, cfg);
    if c.verdict == Verdict::StrictlySemiPositive {
        Ok(c)
    } else {
        Err(Error::Generator(format!("gate rejected tensor: {} (beta = {})", c.verdict.as_str(), c.beta.value)))
    }
}

/// Draws from the family until a sample passes the gate, up to
/// [`MAX_RESAMPLES`] tries.
pub fn generate(spec: &GeneratorSpec, cfg: &Config) -> Result<Generated> {
    spec.validate()?;
    let mut last = String::new();
    for attempt in 0..MAX_RESAMPLES {
        let mut rng = rng::substream(spec.seed, &[stream::GENERATOR, attempt as u64]);
        let t = sample(spec, &mut rng)?;
        match gate(&t, cfg) {
            Ok(classification) => return Ok(Generated { tensor: t, attempts: attempt + 1, classification }),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::Generator(format!("no strictly semi-positive sample in {MAX_RESAMPLES} draws; last: {last}")))
}
