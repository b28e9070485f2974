use crate::error::{invalid, Error, Result};
use crate::model::hamiltonian::Fragment;
use crate::CMatrix;

use super::exact::unitary_exp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrotterOrder {
    First,
    #[default]
    Second,
}

impl TrotterOrder {
    pub fn from_k(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(invalid(
                "trotter_order",
                alloc::format!("order {k} not in {{1, 2}}"),
            )),
        }
    }

    pub fn k(self) -> usize {
        match self {
            Self::First => 1,
            Self::Second => 2,
        }
    }
}

/// `layers` repetitions of a product-formula step of length `step_fs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterPlan {
    pub order: TrotterOrder,
    pub step_fs: f64,
    pub layers: usize,
}

impl TrotterPlan {
    pub fn new(order: TrotterOrder, step_fs: f64, layers: usize) -> Result<Self> {
        if !(step_fs > 0.0 && step_fs.is_finite()) {
            return Err(invalid("step", "Trotter step must be positive and finite"));
        }
        Ok(Self {
            order,
            step_fs,
            layers,
        })
    }

    pub fn total_time(&self) -> f64 {
        self.step_fs * self.layers as f64
    }
}

/// Unitary of one product-formula layer.
///
/// Fragments are applied in slice order: for `k = 1` the result is
/// `e^{-iH_L Δt} ⋯ e^{-iH_1 Δt}`; for `k = 2` the half steps run forward and
/// then back, `e^{-iH_1 Δt/2} ⋯ e^{-iH_L Δt/2} e^{-iH_L Δt/2} ⋯ e^{-iH_1 Δt/2}`.
pub fn trotter_layer(fragments: &[Fragment], order: TrotterOrder, dt: f64) -> Result<CMatrix> {
    layer_from_matrices(fragments.iter().map(|f| f.op.matrix()), order, dt)
}

pub(crate) fn layer_from_matrices<'a>(
    parts: impl ExactSizeIterator<Item = &'a CMatrix> + Clone,
    order: TrotterOrder,
    dt: f64,
) -> Result<CMatrix> {
    let mut it = parts.clone();
    let first = it.next().ok_or(Error::EmptyFragments)?;
    let dim = first.nrows();
    let mut u = CMatrix::identity(dim, dim);
    match order {
        TrotterOrder::First => {
            for h in parts {
                u = unitary_exp(h, dt)? * u;
            }
        }
        TrotterOrder::Second => {
            let halves = parts
                .map(|h| unitary_exp(h, 0.5 * dt))
                .collect::<Result<alloc::vec::Vec<_>>>()?;
            for e in &halves {
                u = e * u;
            }
            for e in halves.iter().rev() {
                u = e * u;
            }
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::exact::{operator_norm, unitarity_defect};
    use crate::model::hamiltonian::{build_system_hamiltonian, system_fragments};
    use crate::model::pauli::max_abs_diff;
    use crate::model::presets;
    use crate::model::spec::{QubitCap, SystemSpec};
    use alloc::vec::Vec;

    #[test]
    fn empty_fragments_rejected() {
        assert_eq!(
            trotter_layer(&[], TrotterOrder::First, 1.0),
            Err(Error::EmptyFragments)
        );
        assert!(TrotterOrder::from_k(3).is_err());
        assert!(TrotterPlan::new(TrotterOrder::First, 0.0, 1).is_err());
    }

    #[test]
    fn single_fragment_is_exact() {
        let spec = presets::dimer();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        let coupler = &frags[2..3];
        for order in [TrotterOrder::First, TrotterOrder::Second] {
            for dt in [0.1, 1.0, 37.0] {
                let u = trotter_layer(coupler, order, dt).unwrap();
                let e = unitary_exp(coupler[0].op.matrix(), dt).unwrap();
                assert!(max_abs_diff(&u, &e) < 1e-12);
            }
        }
    }

    #[test]
    fn commuting_fragments_are_exact() {
        let spec =
            SystemSpec::new(alloc::vec![12_100.0, 11_900.0, 12_050.0], &[], Vec::new()).unwrap();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        let h = build_system_hamiltonian(&spec, QubitCap::default()).unwrap();
        for order in [TrotterOrder::First, TrotterOrder::Second] {
            let u = trotter_layer(&frags, order, 1.25).unwrap();
            assert!(max_abs_diff(&u, &unitary_exp(h.matrix(), 1.25).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn second_order_local_error_is_cubic() {
        let spec = presets::dimer();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        let h = build_system_hamiltonian(&spec, QubitCap::default()).unwrap();
        let steps: Vec<f64> = (0..9).map(|i| 0.01 * 100f64.powf(i as f64 / 8.0)).collect();
        let pts: Vec<(f64, f64)> = steps
            .iter()
            .map(|&dt| {
                let u = trotter_layer(&frags, TrotterOrder::Second, dt).unwrap();
                assert!(unitarity_defect(&u) < 1e-12);
                let err = operator_norm(&(u - unitary_exp(h.matrix(), dt).unwrap()));
                (dt.ln(), err.ln())
            })
            .collect();
        let slope = crate::fit::slope(&pts);
        assert!((slope - 3.0).abs() < 0.1, "slope {slope}");
    }
}
