//! Dense in-memory store of sweep measurements.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::protocol::sweep::{Block, Observable, Protocol};

/// Position of one measured expectation value.
///
/// `slot` is the `t₃` index for the standard protocol and the probe-line
/// index for the probe protocol. `obs` indexes [`Protocol::observables`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LedgerKey {
    pub phase: usize,
    pub t1: usize,
    pub t2: usize,
    pub slot: usize,
    pub obs: usize,
}

/// Shape of a sweep: how many values each key component can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LedgerShape {
    pub protocol: Protocol,
    pub n_phase: usize,
    pub n_t1: usize,
    pub n_t2: usize,
    pub n_slots: usize,
}

impl LedgerShape {
    pub fn n_obs(&self) -> usize {
        self.protocol.observables().len()
    }

    pub fn len(&self) -> usize {
        self.n_phase * self.n_t1 * self.n_t2 * self.n_slots * self.n_obs()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index in canonical order: phase, t₁, t₂, slot, observable.
    pub fn index(&self, k: &LedgerKey) -> Option<usize> {
        let n_obs = self.n_obs();
        if k.phase >= self.n_phase
            || k.t1 >= self.n_t1
            || k.t2 >= self.n_t2
            || k.slot >= self.n_slots
            || k.obs >= n_obs
        {
            return None;
        }
        Some(
            (((k.phase * self.n_t1 + k.t1) * self.n_t2 + k.t2) * self.n_slots + k.slot) * n_obs
                + k.obs,
        )
    }

    pub fn key(&self, mut i: usize) -> LedgerKey {
        let n_obs = self.n_obs();
        let obs = i % n_obs;
        i /= n_obs;
        let slot = i % self.n_slots;
        i /= self.n_slots;
        let t2 = i % self.n_t2;
        i /= self.n_t2;
        let t1 = i % self.n_t1;
        LedgerKey {
            phase: i / self.n_t1,
            t1,
            t2,
            slot,
            obs,
        }
    }

    pub fn observable(&self, k: &LedgerKey) -> Observable {
        self.protocol.observables()[k.obs]
    }

    pub fn obs_index(&self, o: Observable) -> Option<usize> {
        self.protocol.observables().iter().position(|&x| x == o)
    }
}

/// Measurement values laid out densely in canonical key order. Unmeasured
/// keys hold `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementLedger {
    shape: LedgerShape,
    values: Vec<Option<f64>>,
}

impl MeasurementLedger {
    pub fn new(shape: LedgerShape) -> Self {
        Self {
            values: vec![None; shape.len()],
            shape,
        }
    }

    pub fn shape(&self) -> &LedgerShape {
        &self.shape
    }

    pub fn protocol(&self) -> Protocol {
        self.shape.protocol
    }

    pub fn get(&self, k: &LedgerKey) -> Option<f64> {
        self.shape.index(k).and_then(|i| self.values[i])
    }

    pub fn insert(&mut self, k: &LedgerKey, value: f64) -> Result<()> {
        let i = self
            .shape
            .index(k)
            .ok_or_else(|| invalid("ledger key", format!("{k:?} outside {:?}", self.shape)))?;
        self.values[i] = Some(value);
        Ok(())
    }

    pub fn insert_block(&mut self, b: &Block) -> Result<()> {
        if b.n_t2 != self.shape.n_t2
            || b.n_slots != self.shape.n_slots
            || b.n_obs != self.shape.n_obs()
        {
            return Err(invalid("block", "shape does not match the ledger"));
        }
        for t2 in 0..b.n_t2 {
            for slot in 0..b.n_slots {
                for obs in 0..b.n_obs {
                    let k = LedgerKey {
                        phase: b.phase,
                        t1: b.t1,
                        t2,
                        slot,
                        obs,
                    };
                    self.insert(&k, b.value(t2, slot, obs))?;
                }
            }
        }
        Ok(())
    }

    /// Whether every key of block `(phase, t₁)` is present.
    pub fn has_block(&self, phase: usize, t1: usize) -> bool {
        let per_block = self.shape.n_t2 * self.shape.n_slots * self.shape.n_obs();
        let Some(start) = self.shape.index(&LedgerKey {
            phase,
            t1,
            t2: 0,
            slot: 0,
            obs: 0,
        }) else {
            return false;
        };
        self.values[start..start + per_block]
            .iter()
            .all(Option::is_some)
    }

    /// Present entries in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (LedgerKey, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(move |(i, v)| v.map(|v| (self.shape.key(i), v)))
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.values.iter_mut().flatten()
    }

    pub fn missing_keys(&self) -> impl Iterator<Item = LedgerKey> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(i, _)| self.shape.key(i))
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Errors with a readable listing of at most `limit` missing keys.
    pub fn require_complete(&self, limit: usize) -> Result<()> {
        let total = self.values.iter().filter(|v| v.is_none()).count();
        if total == 0 {
            return Ok(());
        }
        let mut missing: Vec<String> = self
            .missing_keys()
            .take(limit)
            .map(|k| {
                format!(
                    "phase={} t1={} t2={} slot={} obs={}",
                    k.phase,
                    k.t1,
                    k.t2,
                    k.slot,
                    self.shape.observable(&k).tag()
                )
            })
            .collect();
        if total > limit {
            missing.push(format!("... and {} more", total - limit));
        }
        Err(Error::IncompleteLedger { missing })
    }
}

/// Stable 64-bit mix of a base seed with a ledger key.
///
/// Each step is one round of the splitmix64 finalizer, so the result is a
/// fixed function of its inputs on every platform and build.
pub fn point_seed(base: u64, protocol: Protocol, k: &LedgerKey) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    let tag = match protocol {
        Protocol::Sqsp => 1,
        Protocol::Pqp => 2,
    };
    [
        tag,
        k.phase as u64,
        k.t1 as u64,
        k.t2 as u64,
        k.slot as u64,
        k.obs as u64,
    ]
    .iter()
    .fold(mix(base), |h, &x| mix(h ^ x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shape() -> LedgerShape {
        LedgerShape {
            protocol: Protocol::Pqp,
            n_phase: 27,
            n_t1: 4,
            n_t2: 3,
            n_slots: 2,
        }
    }

    proptest! {
        #[test]
        fn index_roundtrip(i in 0usize..(27 * 4 * 3 * 2 * 2)) {
            let s = shape();
            let k = s.key(i);
            prop_assert_eq!(s.index(&k), Some(i));
        }

        #[test]
        fn canonical_order_is_lexicographic(i in 0usize..(27 * 4 * 3 * 2 * 2 - 1)) {
            let s = shape();
            prop_assert!(s.key(i) < s.key(i + 1));
        }
    }

    #[test]
    fn missing_keys_are_listed() {
        let mut l = MeasurementLedger::new(shape());
        assert!(!l.is_complete());
        let n = l.shape().len();
        for i in 0..n - 2 {
            let k = l.shape().key(i);
            l.insert(&k, 0.5).unwrap();
        }
        let Err(Error::IncompleteLedger { missing }) = l.require_complete(10) else {
            panic!()
        };
        assert_eq!(
            missing,
            [
                "phase=26 t1=3 t2=2 slot=1 obs=X_pr",
                "phase=26 t1=3 t2=2 slot=1 obs=Y_pr"
            ]
        );
        assert!(l
            .insert(
                &LedgerKey {
                    phase: 27,
                    t1: 0,
                    t2: 0,
                    slot: 0,
                    obs: 0
                },
                1.0
            )
            .is_err());
    }

    #[test]
    fn block_insertion() {
        let mut l = MeasurementLedger::new(shape());
        let b = Block {
            phase: 3,
            t1: 2,
            n_t2: 3,
            n_slots: 2,
            n_obs: 2,
            values: (0..12).map(f64::from).collect(),
        };
        assert!(!l.has_block(3, 2));
        l.insert_block(&b).unwrap();
        assert!(l.has_block(3, 2));
        assert!(!l.has_block(3, 3));
        assert_eq!(
            l.get(&LedgerKey {
                phase: 3,
                t1: 2,
                t2: 1,
                slot: 1,
                obs: 0
            }),
            Some(6.0)
        );
        assert_eq!(l.iter().count(), 12);
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        let k = LedgerKey {
            phase: 1,
            t1: 2,
            t2: 3,
            slot: 0,
            obs: 1,
        };
        let a = point_seed(7, Protocol::Sqsp, &k);
        assert_eq!(a, point_seed(7, Protocol::Sqsp, &k));
        assert_ne!(a, point_seed(8, Protocol::Sqsp, &k));
        assert_ne!(a, point_seed(7, Protocol::Pqp, &k));
        assert_ne!(
            a,
            point_seed(7, Protocol::Sqsp, &LedgerKey { t1: 3, t2: 2, ..k })
        );
    }
}
