use std::fmt::Write as _;

use metaconverse_core::converse::{bank_of_tests, poor_verdu_sweep, tight_poor_verdu, verdu_han, wolfowitz};
use metaconverse_core::lossy::{excess_distortion, theorem3_exact};
use metaconverse_core::mary::{
    corollary1_q, decoder_error, map_solve, max_metric_decoder, remark1_counting, theorem1_alpha_form,
    theorem1_spectrum_form, theorem2_alpha_form,
};
use metaconverse_core::sampling::{
    random_joint_full_prior, random_kernel, random_lossy, random_metric, seeded_rng, sparse_dirichlet,
};
use metaconverse_core::{FiniteMeasure, TOL};
use rand::Rng;

use crate::{CliError, Outcome};

struct Tally {
    name: &'static str,
    passed: usize,
    failed: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, passed: 0, failed: 0 }
    }

    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

/// Checks the tightness identities and bound orderings on `instances`
/// random instances drawn from `seed`.
pub fn cmd_check(seed: u64, instances: usize) -> Result<Outcome, CliError> {
    let mut rng = seeded_rng(seed);
    let mut tallies = [
        Tally::new("output forms equal the MAP error at Q*_Y"),
        Tally::new("output forms stay below at random Q_Y"),
        Tally::new("classical bounds stay below"),
        Tally::new("tight Poor-Verdu and bank of tests equal the MAP error"),
        Tally::new("counting-measure form equals the MAP error"),
        Tally::new("decoder form tight at the true joint"),
        Tally::new("metric auxiliary tight for max-metric decoders"),
        Tally::new("lossy exact form equals excess distortion"),
    ];

    for _ in 0..instances {
        let m = rng.random_range(1..=5);
        let n = rng.random_range(1..=6);
        let joint = random_joint_full_prior(&mut rng, m, n);
        let map = map_solve(&joint)?;
        let eps = map.error;
        let close = |x: f64| (x - eps).abs() <= TOL;

        tallies[0].record(
            close(theorem1_alpha_form(&joint, &map.qy_star)?) && close(theorem1_spectrum_form(&joint, &map.qy_star)?.0),
        );

        let qy = FiniteMeasure::probability(sparse_dirichlet(&mut rng, n, 0.2))?;
        tallies[1].record(
            theorem1_alpha_form(&joint, &qy)? <= eps + TOL && theorem1_spectrum_form(&joint, &qy)?.0 <= eps + TOL,
        );

        let pv = poor_verdu_sweep(&joint, &qy)?;
        let pv_ok = pv.sweep.values.iter().zip(&pv.condition_ok).all(|(&v, &ok)| !ok || v <= eps + TOL);
        tallies[2].record(
            verdu_han(&joint, Some(&qy))?.best_value <= eps + TOL
                && wolfowitz(&joint, &qy)?.best_value <= eps + TOL
                && bank_of_tests(&joint, &qy)?.value <= eps + TOL
                && pv_ok,
        );

        tallies[3].record(close(tight_poor_verdu(&joint)?.best_value) && close(bank_of_tests(&joint, &map.qy_star)?.value));
        tallies[4].record(close(remark1_counting(&joint)?));

        let decoder = random_kernel(&mut rng, n, m);
        let err = decoder_error(&joint, &decoder)?;
        tallies[5].record((theorem2_alpha_form(&joint, &joint, &decoder)?.0 - err).abs() <= TOL);

        let metric = random_metric(&mut rng, m, n);
        let metric_decoder = max_metric_decoder(&metric);
        let metric_err = decoder_error(&joint, &metric_decoder)?;
        let (q, _) = corollary1_q(&joint, &metric)?;
        tallies[6].record((theorem2_alpha_form(&joint, &q, &metric_decoder)?.0 - metric_err).abs() <= TOL);

        let (source_size, recon_size) = (rng.random_range(2..=8), rng.random_range(1..=6));
        let (pv_src, spec, code) = random_lossy(&mut rng, source_size, recon_size);
        let exact = theorem3_exact(&pv_src, &spec, &code)?;
        tallies[7].record((exact - excess_distortion(&pv_src, &spec, &code)?).abs() <= TOL);
    }

    let mut text = String::new();
    let _ = writeln!(text, "seed {seed}, {instances} instances");
    let mut failures = Vec::new();
    for t in &tallies {
        let status = if t.failed == 0 { "ok" } else { "FAILED" };
        let _ = writeln!(text, "{status:>6}  {}: {}/{}", t.name, t.passed, t.passed + t.failed);
        if t.failed > 0 {
            failures.push(t.name.to_string());
        }
    }
    Ok(Outcome { text, failures })
}
