use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::space::{leading_minors_positive, InvariantFormSpace};
use crate::error::{Error, Result};
use crate::exactnum::linalg::RatMatrix;
use crate::exactnum::rational::ExactRational;
use crate::exactnum::FactorConfig;
use crate::exec::{self, ExecMode};
use crate::qform::{projective_fingerprint, ProjectiveFingerprint, QuadForm};

/// Coefficient box for sampling: numerators in [-numer, numer], denominators
/// in [1, denom].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleBox {
    pub numer: i64,
    pub denom: i64,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox { numer: 6, denom: 4 }
    }
}

const MAX_REDRAWS: usize = 64;

/// Factoring budget for sampled forms. A draw whose determinant resists it
/// is replaced by the next draw of the same stream.
pub const SAMPLE_FACTOR_CONFIG: FactorConfig = FactorConfig { trial_bound: 1_000_000, rho_budget: 20_000, rho_attempts: 1 };

/// One sampled holonomy form with its projective fingerprint.
#[derive(Debug, Clone)]
pub struct Sample {
    pub index: usize,
    pub form: QuadForm,
    pub fingerprint: ProjectiveFingerprint,
    /// Draws rejected for factoring before this one was accepted.
    pub rejected: usize,
}

fn draw(space: &InvariantFormSpace, rng: &mut ChaCha8Rng, bx: SampleBox) -> RatMatrix {
    let n = space.dim;
    let mut m = vec![vec![ExactRational::zero(); n]; n];
    for b in &space.basis {
        let c = ExactRational::new(rng.gen_range(-bx.numer..=bx.numer).into(), rng.gen_range(1..=bx.denom).into());
        if c.is_zero() {
            continue;
        }
        for (mr, br) in m.iter_mut().zip(b) {
            for (x, y) in mr.iter_mut().zip(br) {
                if !y.is_zero() {
                    *x += &c * y;
                }
            }
        }
    }
    m
}

fn add_scaled(m: &RatMatrix, a: &RatMatrix, s: i64) -> RatMatrix {
    let s = ExactRational::from_integer(s.into());
    m.iter()
        .zip(a)
        .map(|(mr, ar)| mr.iter().zip(ar).map(|(x, y)| x + &s * y).collect())
        .collect()
}

/// The sample with the given index. The stream is fixed by (seed, index), so
/// the result does not depend on which other samples are drawn.
pub fn sample_one(space: &InvariantFormSpace, seed: u64, index: usize, bx: SampleBox) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    for rejected in 0..MAX_REDRAWS {
        let base = draw(space, &mut rng, bx);
        // shift by 0, 1, 2, 4, ... times the averaged form until positive definite
        let mut s = 0i64;
        let gram = loop {
            let g = if s == 0 { base.clone() } else { add_scaled(&base, &space.averaged, s) };
            if leading_minors_positive(&g) {
                break g;
            }
            s = if s == 0 { 1 } else { s.checked_mul(2).ok_or(Error::Overflow("positive shift"))? };
        };
        let form = QuadForm::new(gram)?;
        match form.fingerprint_with(&SAMPLE_FACTOR_CONFIG).and_then(|_| projective_fingerprint(&form)) {
            Ok(fingerprint) => return Ok(Sample { index, form, fingerprint, rejected }),
            Err(Error::FactorizationBudget(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::FactorizationBudget(format!("sample {index}: {MAX_REDRAWS} draws")))
}

/// `count` positive definite invariant forms, deterministic in `seed`.
pub fn sample_holonomy_forms(space: &InvariantFormSpace, count: usize, seed: u64) -> Result<Vec<QuadForm>> {
    Ok(sample_with(space, count, seed, SampleBox::default(), ExecMode::default())?
        .into_iter()
        .map(|s| s.form)
        .collect())
}

pub fn sample_with(
    space: &InvariantFormSpace,
    count: usize,
    seed: u64,
    bx: SampleBox,
    mode: ExecMode,
) -> Result<Vec<Sample>> {
    if count == 0 {
        return Err(Error::InvalidParameters("sample count must be at least 1".into()));
    }
    let idx: Vec<usize> = (0..count).collect();
    exec::map(mode, &idx, |&i| sample_one(space, seed, i, bx)).into_iter().collect()
}
