//! Fast self-checks against closed-form values.

use spectroqsim_core::model::presets;
use spectroqsim_core::protocol::bounds::t3_bounds;
use spectroqsim_core::protocol::phase_cycle::combine_real;
use spectroqsim_core::protocol::{dimer_probe_lines, Experiment, PhaseCycleScheme, Protocol};
use spectroqsim_core::resources::{query_counts, ResourcePlan};
use spectroqsim_core::spectra::TimeGrid;

use crate::analysis::exciton_gaps;
use crate::config::load_bundled;
use crate::runner::{context, run_parallel};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn failed(name: &'static str, e: impl std::fmt::Display) -> Check {
    check(name, false, format!("error: {e}"))
}

fn eigen_gaps() -> Check {
    let name = "one-exciton gaps";
    let cfg = match load_bundled("paper-2site") {
        Ok(c) => c,
        Err(e) => return failed(name, e),
    };
    match exciton_gaps(&cfg) {
        Ok(g) => {
            let (e1, e2) = presets::dimer_one_exciton();
            let ok = g.len() == 2 && (g[0] - e1).abs() < 1e-6 && (g[1] - e2).abs() < 1e-6;
            check(name, ok, format!("{:.6} / {:.6} cm^-1", g[0], g[1]))
        }
        Err(e) => failed(name, e),
    }
}

fn probe_window() -> Check {
    let name = "probe interaction window";
    let exp = Experiment::dimer();
    let t3 = exp.probe_window.duration_fs();
    for p in dimer_probe_lines() {
        match t3_bounds(&exp.system, &p, exp.cap) {
            Ok(b) if b.contains(t3) => {}
            Ok(b) => {
                return check(
                    name,
                    false,
                    format!(
                        "t3 = {t3} fs outside ({:.1}, {:.1}) at {:.2}",
                        b.lower_fs, b.upper_fs, p.omega_pr
                    ),
                )
            }
            Err(e) => return failed(name, e),
        }
    }
    check(
        name,
        true,
        format!("t3 = {t3} fs inside the bounds of every line"),
    )
}

fn phase_cycle() -> Check {
    let s = PhaseCycleScheme::rephasing();
    let amp = 0.42;
    let values: Vec<f64> = (0..s.len())
        .map(|k| {
            let phi = s.combination(k);
            amp * (-phi[0] + phi[1] + phi[2] - phi[3] + 0.3).cos()
        })
        .collect();
    match combine_real(&values, &s) {
        Ok(z) => {
            // the cosine splits evenly between the rephasing component and its conjugate
            let want = 0.5 * amp;
            let err = (z.norm() - want).abs();
            check(
                "phase-cycle selection",
                err < 1e-12,
                format!("|S| = {:.12}, expected {want}", z.norm()),
            )
        }
        Err(e) => failed("phase-cycle selection", e),
    }
}

fn sampling() -> Check {
    match TimeGrid::new(400, 1.25, "t") {
        Ok(g) => {
            let (dw, wmax) = (g.resolution_cm(), g.max_frequency_cm());
            let ok = (dw - 66.71).abs() < 0.01 && (wmax - 13342.56).abs() < 0.01;
            check(
                "sampling grid",
                ok,
                format!("resolution {dw:.3}, Nyquist {wmax:.2} cm^-1"),
            )
        }
        Err(e) => failed("sampling grid", e),
    }
}

fn resources() -> Check {
    match ResourcePlan::fmo(40.0) {
        Ok(p) => {
            let q = query_counts(&p);
            let ok = p.n1 == 515 && p.n2 == 90 && p.n3 == 464 && (q.ratio - 224.75).abs() < 0.5;
            check(
                "FMO cost model",
                ok,
                format!(
                    "N = ({}, {}, {}), query ratio {:.2}",
                    p.n1, p.n2, p.n3, q.ratio
                ),
            )
        }
        Err(e) => failed("FMO cost model", e),
    }
}

fn parallel_matches_serial() -> Check {
    let name = "parallel sweep determinism";
    let run = || -> crate::Result<bool> {
        let mut cfg = load_bundled("paper-2site-reduced")?.with_protocol(Protocol::Pqp);
        cfg.grids.t1.samples = 3;
        cfg.grids.t2.samples = 2;
        let ctx = context(&cfg)?;
        let a = ctx.run_serial()?;
        let b = run_parallel(&ctx, Some(3))?;
        let same = a
            .iter()
            .zip(b.iter())
            .all(|((ka, va), (kb, vb))| ka == kb && va.to_bits() == vb.to_bits());
        Ok(same)
    };
    match run() {
        Ok(ok) => check(
            name,
            ok,
            "serial and 3-worker ledgers compared bitwise".into(),
        ),
        Err(e) => failed(name, e),
    }
}

pub fn run_checks() -> Vec<Check> {
    vec![
        eigen_gaps(),
        probe_window(),
        phase_cycle(),
        sampling(),
        resources(),
        parallel_matches_serial(),
    ]
}
