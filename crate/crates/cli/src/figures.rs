use std::fmt::Write as _;

use metaconverse_core::channel::{
    best_code_search_with_workers, bsc, code_to_joint, metaconverse_code, search_size, th27_relaxation,
};
use metaconverse_core::converse::{poor_verdu_sweep, tight_poor_verdu, verdu_han};
use metaconverse_core::instances::ternary_example;
use metaconverse_core::mary::{map_solve, spectrum_tail, theorem1_spectrum_sweep};
use metaconverse_core::measures::marginals;
use metaconverse_core::{FiniteMeasure, TOL};

use crate::format::fmt_g12;
use crate::{CliError, Outcome};

fn row(cells: &[f64]) -> String {
    let mut line = cells.iter().map(|&x| fmt_g12(x)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Bound curves of the ternary example as functions of γ.
///
/// Rows cover `k / grid` for `k = 0..=grid` merged with every jump point of
/// the two likelihood-ratio spectra, so each curve's maximum appears as a row.
pub fn cmd_example_fig1(grid: usize) -> Result<Outcome, CliError> {
    if grid == 0 {
        return Err(CliError::Usage("--gamma-grid must be at least 1".into()));
    }
    let joint = ternary_example();
    let map = map_solve(&joint)?;
    let (_, py) = marginals(&joint)?;
    let exact = map.error;

    let at_qstar = theorem1_spectrum_sweep(&joint, &map.qy_star)?;
    let at_py = verdu_han(&joint, Some(&py))?;
    let pv = poor_verdu_sweep(&joint, &py)?;
    let tight = tight_poor_verdu(&joint)?;

    let mut gammas: Vec<f64> = (0..=grid).map(|k| k as f64 / grid as f64).collect();
    gammas.extend(at_qstar.gammas.iter().chain(&at_py.gammas).filter(|&&g| g <= 1.0));
    gammas.sort_by(f64::total_cmp);
    gammas.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let mut text = String::new();
    text.push_str("# ternary example: three equiprobable hypotheses, exact minimum error 0.6\n");
    text.push_str("# spectrum_qstar peaks at 0.6 for gamma = 0.4\n");
    text.push_str("# reference: Verdu-Han and Poor-Verdu with Q_Y = P_Y reach 0.574\n");
    text.push_str("# reference: Chen-Alajaji bound 0.579 (literature value, not computed here)\n");
    let _ = writeln!(
        text,
        "# maxima: spectrum_qstar {} at gamma {}; verdu_han_py {} at gamma {}",
        fmt_g12(at_qstar.best_value),
        fmt_g12(at_qstar.best_gamma),
        fmt_g12(at_py.best_value),
        fmt_g12(at_py.best_gamma)
    );
    text.push_str("gamma,exact,spectrum_qstar,verdu_han_py,poor_verdu_py,tight_pv\n");

    let mut failures = Vec::new();
    let mut max_qstar = f64::NEG_INFINITY;
    for &g in &gammas {
        let tail_qstar = spectrum_tail(&joint, &map.qy_star, g)?;
        let tail_py = spectrum_tail(&joint, &py, g)?;
        let cells = [g, exact, tail_qstar - g, tail_py - g, (1.0 - g) * tail_py, (1.0 - g) * tail_qstar];
        if cells[2..].iter().any(|&v| v > exact + TOL) {
            failures.push(format!("a bound exceeds the exact error at gamma = {}", fmt_g12(g)));
        }
        max_qstar = max_qstar.max(cells[2]);
        text.push_str(&row(&cells));
    }

    if (max_qstar - exact).abs() > TOL || (at_qstar.best_value - exact).abs() > TOL {
        failures.push(format!("spectrum with Q*_Y peaks at {} instead of {}", fmt_g12(max_qstar), fmt_g12(exact)));
    }
    if (tight.best_value - exact).abs() > TOL {
        failures.push("tight Poor-Verdu does not reach the exact error".into());
    }
    if pv.sweep.best_value > exact + TOL {
        failures.push("Poor-Verdu exceeds the exact error".into());
    }
    Ok(Outcome { text, failures })
}

/// Best-code error, its meta-converse at `Q*_Y`, and the codebook-free
/// relaxation at uniform input and output, for every blocklength from the
/// smallest `n` with `2^n >= m` up to `n_max`.
pub fn cmd_bsc_fig2(n_max: usize, delta: f64, m: usize, workers: usize) -> Result<Outcome, CliError> {
    if m == 0 {
        return Err(CliError::Usage("M must be at least 1".into()));
    }
    let mut n_min = 1;
    while (1usize << n_min) < m {
        n_min += 1;
    }
    if n_max < n_min {
        return Err(CliError::Usage(format!("n-max {n_max} is below the smallest blocklength {n_min} that fits M = {m}")));
    }

    // the largest blocklength is the most expensive; fail before doing any work
    search_size(&bsc(n_max, delta)?, m)?;

    let mut text = String::new();
    let _ = writeln!(text, "# binary symmetric channel, crossover {}, M = {m}", fmt_g12(delta));
    text.push_str("# best_code_error: exhaustive search with the first codeword fixed to 0^n\n");
    text.push_str("# metaconverse_qstar: meta-converse of that code at its Q*_Y\n");
    text.push_str("# relaxation_uniform: codebook-free relaxation at uniform P_X and Q_Y\n");
    text.push_str("n,best_code_error,metaconverse_qstar,relaxation_uniform\n");

    let mut failures = Vec::new();
    for n in n_min..=n_max {
        let channel = bsc(n, delta)?;
        let search = best_code_search_with_workers(&channel, m, workers)?;
        let qstar = map_solve(&code_to_joint(&channel, &search.code)?)?.qy_star;
        let mc = metaconverse_code(&channel, &search.code, &qstar)?;
        let ux = FiniteMeasure::uniform(channel.num_inputs())?;
        let uy = FiniteMeasure::uniform(channel.num_outputs())?;
        let relaxed = th27_relaxation(&channel, m, &ux, &uy)?;
        if (mc - search.error).abs() > TOL {
            failures.push(format!("n = {n}: meta-converse {} differs from best-code error {}", fmt_g12(mc), fmt_g12(search.error)));
        }
        if relaxed > search.error + TOL {
            failures.push(format!("n = {n}: relaxation exceeds the best-code error"));
        }
        text.push_str(&row(&[n as f64, search.error, mc, relaxed]));
    }
    Ok(Outcome { text, failures })
}
