//! Closed-form measurement, depth and query costs for both protocols.
//!
//! Frequencies are in cm⁻¹ and times in fs. A sampling step `Δt` resolves
//! frequencies up to `1/(2cΔt)`, so `N = 2ω_max/Δω = 1/(cΔtΔω)`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Result};
use crate::model::units::SPEED_OF_LIGHT_CM_PER_FS;

/// Relative slack absorbed before rounding up, so that exact integers are
/// not bumped by representation error.
const CEIL_SLACK: f64 = 1e-9;

fn ceil_count(x: f64) -> u64 {
    (x * (1.0 - CEIL_SLACK)).ceil().max(0.0) as u64
}

/// `ceil(2ω_max/Δω)`.
pub fn samples_needed(delta_omega_cm: f64, omega_max_cm: f64) -> Result<u64> {
    if !(delta_omega_cm > 0.0) || !delta_omega_cm.is_finite() {
        return Err(invalid("delta_omega", "resolution must be positive"));
    }
    if !(omega_max_cm >= 0.0) || !omega_max_cm.is_finite() {
        return Err(invalid(
            "omega_max",
            "maximum frequency must be non-negative",
        ));
    }
    Ok(ceil_count(2.0 * omega_max_cm / delta_omega_cm))
}

/// Highest frequency resolved by sampling step `dt_fs`, `1/(2cΔt)`.
pub fn max_frequency_cm(dt_fs: f64) -> f64 {
    1.0 / (2.0 * SPEED_OF_LIGHT_CM_PER_FS * dt_fs)
}

/// `Q = D(D+1)/2`: Hamiltonian queries summed over all sample depths.
pub fn triangular_queries(d: u64) -> f64 {
    let d = d as f64;
    d * (d + 1.0) / 2.0
}

/// How shots per expectation value are counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShotMode {
    /// Infinite-shot comparison: `S_SQSP = n_qub − 1`, `S_PQP = 1`.
    Relative,
    /// `S_SQSP = n_qub/ε²`, `S_PQP = 1/ε²`. The manifold populations entering
    /// the fluorescence variance are folded into the `n_qub` factor.
    Absolute { eps: f64 },
}

impl ShotMode {
    pub fn label(&self) -> &'static str {
        match self {
            ShotMode::Relative => "relative",
            ShotMode::Absolute { .. } => "absolute",
        }
    }

    pub fn shots(&self, n_qub: usize) -> (f64, f64) {
        let n = n_qub as f64;
        match *self {
            ShotMode::Relative => (n - 1.0, 1.0),
            ShotMode::Absolute { eps } => (n / (eps * eps), 1.0 / (eps * eps)),
        }
    }
}

/// How Trotter layer counts follow from the sample counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepthModel {
    /// One layer per sample, `D_j = N_j`.
    Sampling,
    /// `D_j = ⌈N_j^{1+1/k_j} ε_trot^{−1/k_j}⌉`, the product-formula depth with
    /// the evolution time measured in sampling steps. Reduces to `Sampling`
    /// as `k_j → ∞`.
    Trotter { eps_trot: f64, orders: [u32; 3] },
}

fn layers(model: DepthModel, axis: usize, n_exact: f64) -> u64 {
    match model {
        DepthModel::Sampling => ceil_count(n_exact),
        DepthModel::Trotter { eps_trot, orders } => {
            let k = orders[axis] as f64;
            ceil_count(n_exact.powf(1.0 + 1.0 / k) * eps_trot.powf(-1.0 / k))
        }
    }
}

/// Experiment-level inputs from which every count is derived.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceInputs {
    pub n_qub: usize,
    pub delta_omega1_cm: f64,
    pub delta_omega3_cm: f64,
    pub dt1_fs: f64,
    pub dt3_fs: f64,
    pub n2: u64,
    pub n_freq: u64,
    pub pulse_layers: u64,
    /// Stretch of the probe window over the standard `t₃` depth.
    pub alpha_c: f64,
    /// Cost of one system-probe layer relative to a system layer.
    pub alpha_pqp: f64,
    pub cycle_size: u64,
    pub shots: ShotMode,
    pub depth: DepthModel,
}

impl ResourceInputs {
    /// The 8-site light-harvesting complex measured at 805 nm.
    pub fn fmo(delta_omega3_cm: f64) -> Self {
        Self {
            n_qub: 8,
            delta_omega1_cm: 36.0,
            delta_omega3_cm,
            dt1_fs: 1.8,
            dt3_fs: 1.8,
            n2: 90,
            n_freq: 2,
            pulse_layers: 42,
            alpha_c: 1.45,
            alpha_pqp: 2.5,
            cycle_size: 27,
            shots: ShotMode::Relative,
            depth: DepthModel::Sampling,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_qub == 0 {
            return Err(invalid("n_qub", "need at least one site"));
        }
        for (field, v) in [
            ("delta_omega1", self.delta_omega1_cm),
            ("delta_omega3", self.delta_omega3_cm),
            ("dt1", self.dt1_fs),
            ("dt3", self.dt3_fs),
            ("alpha_c", self.alpha_c),
            ("alpha_pqp", self.alpha_pqp),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(field, "must be positive and finite"));
            }
        }
        if self.n2 == 0 || self.n_freq == 0 || self.cycle_size == 0 {
            return Err(invalid(
                "counts",
                "n2, n_freq and cycle_size must be positive",
            ));
        }
        if let ShotMode::Absolute { eps } = self.shots {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(invalid("eps", "shot accuracy must be positive"));
            }
        }
        if let DepthModel::Trotter { eps_trot, orders } = self.depth {
            if !(eps_trot > 0.0) || orders.contains(&0) {
                return Err(invalid(
                    "depth",
                    "Trotter budget and orders must be positive",
                ));
            }
        }
        Ok(())
    }
}

/// Sample and layer counts on every axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourcePlan {
    pub inputs: ResourceInputs,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub d1: u64,
    pub d2: u64,
    pub d3: u64,
    /// `⌈α_c·D₃⌉`, taken before `D₃` is rounded.
    pub d3_probe: u64,
    pub dp: u64,
}

impl ResourcePlan {
    pub fn new(inputs: ResourceInputs) -> Result<Self> {
        inputs.validate()?;
        let exact = |dt: f64, dw: f64| 1.0 / (SPEED_OF_LIGHT_CM_PER_FS * dt * dw);
        let n1_exact = exact(inputs.dt1_fs, inputs.delta_omega1_cm);
        let n3_exact = exact(inputs.dt3_fs, inputs.delta_omega3_cm);
        let n3 = ceil_count(n3_exact);
        if inputs.n_freq > n3 {
            return Err(invalid(
                "n_freq",
                alloc::format!("{} lines exceed N₃ = {n3}", inputs.n_freq),
            ));
        }
        let d3_exact = match inputs.depth {
            DepthModel::Sampling => n3_exact,
            DepthModel::Trotter { .. } => layers(inputs.depth, 2, n3_exact) as f64,
        };
        Ok(Self {
            n1: ceil_count(n1_exact),
            n2: inputs.n2,
            n3,
            d1: layers(inputs.depth, 0, n1_exact),
            d2: layers(inputs.depth, 1, inputs.n2 as f64),
            d3: layers(inputs.depth, 2, n3_exact),
            d3_probe: ceil_count(inputs.alpha_c * d3_exact),
            dp: inputs.pulse_layers,
            inputs,
        })
    }

    pub fn fmo(delta_omega3_cm: f64) -> Result<Self> {
        Self::new(ResourceInputs::fmo(delta_omega3_cm))
    }

    pub fn shots(&self) -> (f64, f64) {
        self.inputs.shots.shots(self.inputs.n_qub)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostProtocol {
    Sqsp,
    Pqp,
}

/// `cycle · S_SQSP · N₁ · N₂ · N₃`.
pub fn measurements_sqsp(plan: &ResourcePlan) -> f64 {
    plan.inputs.cycle_size as f64 * plan.shots().0 * (plan.n1 * plan.n2 * plan.n3) as f64
}

/// `cycle · S_PQP · N₁ · N₂ · N_freq`.
pub fn measurements_pqp(plan: &ResourcePlan) -> f64 {
    plan.inputs.cycle_size as f64 * plan.shots().1 * (plan.n1 * plan.n2 * plan.inputs.n_freq) as f64
}

/// Deepest circuit in the sweep.
pub fn max_depth(plan: &ResourcePlan, protocol: CostProtocol) -> u64 {
    match protocol {
        CostProtocol::Sqsp => plan.d1 + plan.d2 + plan.d3 + 4 * plan.dp,
        CostProtocol::Pqp => plan.d1 + plan.d2 + plan.d3_probe + 3 * plan.dp,
    }
}

/// Per-axis and total Hamiltonian query counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryCounts {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    /// `α_PQP · D′₃`
    pub q3_probe: f64,
    pub sqsp: f64,
    pub pqp: f64,
    pub ratio: f64,
}

pub fn query_counts(plan: &ResourcePlan) -> QueryCounts {
    let (s_sq, s_pq) = plan.shots();
    let q1 = triangular_queries(plan.d1);
    let q2 = triangular_queries(plan.d2);
    let q3 = triangular_queries(plan.d3);
    let q3_probe = plan.inputs.alpha_pqp * plan.d3_probe as f64;
    let sqsp = s_sq * q1 * q2 * q3;
    let pqp = s_pq * q1 * q2 * q3_probe * plan.inputs.n_freq as f64;
    QueryCounts {
        q1,
        q2,
        q3,
        q3_probe,
        sqsp,
        pqp,
        ratio: sqsp / pqp,
    }
}

/// One row of a cost comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub delta_omega3_cm: f64,
    pub shot_mode: &'static str,
    pub s_sqsp: f64,
    pub s_pqp: f64,
    pub m_sqsp: f64,
    pub m_pqp: f64,
    pub m_ratio: f64,
    pub d_sqsp: u64,
    pub d_pqp: u64,
    pub queries: QueryCounts,
    pub plan: ResourcePlan,
}

impl CostReport {
    pub fn new(plan: ResourcePlan) -> Self {
        let (s_sqsp, s_pqp) = plan.shots();
        let m_sqsp = measurements_sqsp(&plan);
        let m_pqp = measurements_pqp(&plan);
        Self {
            delta_omega3_cm: plan.inputs.delta_omega3_cm,
            shot_mode: plan.inputs.shots.label(),
            s_sqsp,
            s_pqp,
            m_sqsp,
            m_pqp,
            m_ratio: m_sqsp / m_pqp,
            d_sqsp: max_depth(&plan, CostProtocol::Sqsp),
            d_pqp: max_depth(&plan, CostProtocol::Pqp),
            queries: query_counts(&plan),
            plan,
        }
    }
}

/// Evaluates `scenario(Δω₃)` at every requested resolution.
pub fn cost_sweep(
    delta_omega3_cm: &[f64],
    scenario: impl Fn(f64) -> ResourceInputs,
) -> Result<Vec<CostReport>> {
    delta_omega3_cm
        .iter()
        .map(|&dw| ResourcePlan::new(scenario(dw)).map(CostReport::new))
        .collect()
}

/// The light-harvesting scenario across detection resolutions.
pub fn fmo_report(delta_omega3_cm: &[f64]) -> Result<Vec<CostReport>> {
    cost_sweep(delta_omega3_cm, ResourceInputs::fmo)
}

/// `n` points evenly spaced over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::log_log_slope;
    use proptest::prelude::*;

    #[test]
    fn sample_counts() {
        assert_eq!(samples_needed(50.0, 50.0).unwrap(), 2);
        assert_eq!(samples_needed(66.71, 13_339.7).unwrap(), 400);
        assert!(samples_needed(0.0, 1.0).is_err());
        let p = ResourcePlan::fmo(40.0).unwrap();
        assert_eq!((p.n1, p.n2, p.n3), (515, 90, 464));
        assert_eq!(samples_needed(36.0, max_frequency_cm(1.8)).unwrap(), 515);
    }

    #[test]
    fn fmo_headline_numbers() {
        let r = CostReport::new(ResourcePlan::fmo(40.0).unwrap());
        assert_eq!(r.plan.d3_probe, 672);
        assert_eq!((r.d_sqsp, r.d_pqp), (1237, 1403));
        // oracle: hand-expanded formulas
        assert_eq!(r.m_sqsp, 27.0 * 7.0 * 515.0 * 90.0 * 464.0);
        assert_eq!(r.m_pqp, 2_502_900.0);
        assert!((1.5e3..=1.7e3).contains(&r.m_ratio));
        let want = 7.0 * (464.0 * 465.0 / 2.0) / (2.5 * 672.0 * 2.0);
        assert!((r.queries.ratio - want).abs() < 1e-9 * want);
        assert!((2.0e2..=2.5e2).contains(&r.queries.ratio));
    }

    #[test]
    fn unit_plan_degenerates() {
        let mut i = ResourceInputs::fmo(40.0);
        i.n_qub = 2;
        i.n2 = 1;
        i.n_freq = 1;
        i.pulse_layers = 0;
        i.alpha_c = 1.0;
        i.alpha_pqp = 1.0;
        // one sample per axis
        i.dt1_fs = 1.0 / (SPEED_OF_LIGHT_CM_PER_FS * i.delta_omega1_cm);
        i.dt3_fs = 1.0 / (SPEED_OF_LIGHT_CM_PER_FS * i.delta_omega3_cm);
        let p = ResourcePlan::new(i).unwrap();
        assert_eq!((p.n1, p.n3, p.d3, p.d3_probe), (1, 1, 1, 1));
        assert_eq!(measurements_sqsp(&p), 27.0);
        let q = query_counts(&p);
        assert_eq!((q.sqsp, q.pqp), (1.0, 1.0));
        assert_eq!(
            max_depth(&p, CostProtocol::Sqsp),
            max_depth(&p, CostProtocol::Pqp)
        );
    }

    #[test]
    fn worst_case_probe_recovers_standard_count() {
        let mut i = ResourceInputs::fmo(40.0);
        i.n_freq = 464;
        i.shots = ShotMode::Absolute { eps: 1e-3 };
        let p = ResourcePlan::new(i.clone()).unwrap();
        // absolute shots differ by n_qub; matched shots give equality
        let (s_sq, s_pq) = p.shots();
        assert!(
            (measurements_pqp(&p) * s_sq / s_pq - measurements_sqsp(&p)).abs()
                < 1e-6 * measurements_sqsp(&p)
        );
        i.n_freq = 465;
        assert!(ResourcePlan::new(i).is_err());
    }

    #[test]
    fn query_slopes() {
        let rows = fmo_report(&linspace(10.0, 60.0, 26)).unwrap();
        let sq: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.queries.q3, r.delta_omega3_cm))
            .collect();
        let pq: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.queries.q3_probe, r.delta_omega3_cm))
            .collect();
        assert!(
            (log_log_slope(&sq) + 0.5).abs() < 0.05,
            "{}",
            log_log_slope(&sq)
        );
        assert!(
            (log_log_slope(&pq) + 1.0).abs() < 0.05,
            "{}",
            log_log_slope(&pq)
        );
    }

    #[test]
    fn sweep_shape() {
        let rows = fmo_report(&linspace(10.0, 60.0, 51)).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].m_sqsp < w[0].m_sqsp);
            assert_eq!(w[1].m_pqp, w[0].m_pqp);
            assert!(w[1].m_ratio < w[0].m_ratio);
        }
        assert!(rows.iter().all(|r| (1e2..=1e4).contains(&r.m_ratio)));
    }

    #[test]
    fn depth_law_slope() {
        // D₃ ∝ Δω₃^{−(1+1/k)} over a decade
        for k in [1u32, 2, 4] {
            let pts: Vec<(f64, f64)> = linspace(6.0, 60.0, 10)
                .iter()
                .map(|&dw| {
                    let mut i = ResourceInputs::fmo(dw);
                    i.depth = DepthModel::Trotter {
                        eps_trot: 1e-3,
                        orders: [k; 3],
                    };
                    (dw, ResourcePlan::new(i).unwrap().d3 as f64)
                })
                .collect();
            let want = -(1.0 + 1.0 / k as f64);
            assert!(
                (log_log_slope(&pts) - want).abs() < 0.02,
                "k={k}: {}",
                log_log_slope(&pts)
            );
        }
    }

    #[test]
    fn absolute_shots() {
        let mut i = ResourceInputs::fmo(40.0);
        i.shots = ShotMode::Absolute { eps: 1e-5 };
        let r = CostReport::new(ResourcePlan::new(i).unwrap());
        assert_eq!(r.shot_mode, "absolute");
        assert!((r.s_sqsp - 8e10).abs() < 1.0 && (r.s_pqp - 1e10).abs() < 1.0);
    }

    proptest! {
        #[test]
        fn ratios_match_components(dw in 5.0f64..200.0, n_qub in 2usize..12) {
            let mut i = ResourceInputs::fmo(dw);
            i.n_qub = n_qub;
            let r = CostReport::new(ResourcePlan::new(i).unwrap());
            prop_assert!((r.m_ratio - r.m_sqsp / r.m_pqp).abs() <= 1e-9 * r.m_ratio);
            prop_assert!((r.queries.ratio - r.queries.sqsp / r.queries.pqp).abs() <= 1e-9 * r.queries.ratio);
            prop_assert!(r.m_sqsp >= 0.0 && r.queries.pqp >= 0.0);
            prop_assert_eq!(r.d_pqp as i64 - r.d_sqsp as i64,
                r.plan.d3_probe as i64 - r.plan.d3 as i64 - r.plan.dp as i64);
        }

        #[test]
        fn halving_resolution_doubles_samples(dw in 10.0f64..100.0) {
            let a = ResourcePlan::fmo(dw).unwrap().n3 as f64;
            let b = ResourcePlan::fmo(dw / 2.0).unwrap().n3 as f64;
            prop_assert!((b - 2.0 * a).abs() <= 2.0);
        }
    }
}
