//! Finite-shot noise on stored expectation values.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};
use crate::ledger::MeasurementLedger;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotNoiseSpec {
    /// Standard deviation added to each expectation value.
    pub eps: f64,
    pub seed: u64,
}

impl ShotNoiseSpec {
    pub fn new(eps: f64, seed: u64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(invalid("shot_noise_eps", "must be finite and non-negative"));
        }
        Ok(Self { eps, seed })
    }
}

/// Adds independent `N(0, ε²)` draws to every stored value, in canonical key
/// order, from a generator seeded with `spec.seed`.
pub fn add_shot_noise(
    ledger: &MeasurementLedger,
    spec: &ShotNoiseSpec,
) -> Result<MeasurementLedger> {
    let spec = ShotNoiseSpec::new(spec.eps, spec.seed)?;
    let mut out = ledger.clone();
    if spec.eps == 0.0 {
        return Ok(out);
    }
    let normal =
        Normal::new(0.0, spec.eps).map_err(|_| invalid("shot_noise_eps", "rejected by sampler"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for v in out.values_mut() {
        *v += normal.sample(&mut rng);
    }
    Ok(out)
}
