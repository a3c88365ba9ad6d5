use metaconverse_core::channel::{
    best_code_search, best_code_search_with_workers, bsc, code_to_joint, metaconverse_code, th27_relaxation,
    ChannelCode, Dmc,
};
use metaconverse_core::mary::map_solve;
use metaconverse_core::FiniteMeasure;
use metaconverse_oracle::exhaustive_best_code;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn dense(channel: &Dmc) -> Vec<f64> {
    (0..channel.num_inputs()).flat_map(|x| channel.row(x).to_vec()).collect()
}

#[test]
fn bsc_m4_reference_values() {
    // (n, best ML error, lexicographically smallest optimal code)
    let table: [(usize, f64, [usize; 4]); 5] = [
        (2, 0.19, [0, 1, 2, 3]),
        (3, 0.19, [0, 1, 2, 3]),
        (4, 0.1252, [0, 1, 14, 15]),
        (5, 0.06688, [0, 7, 25, 30]),
        (6, 0.055216, [0, 7, 56, 63]),
    ];
    for (n, error, code) in table {
        let w = bsc(n, 0.1).unwrap();
        let search = best_code_search(&w, 4).unwrap();
        assert!((search.error - error).abs() <= TOL, "n={n}: {}", search.error);
        assert_eq!(search.indices, code.to_vec(), "n={n}");
    }
}

#[test]
fn metaconverse_tight_and_relaxation_below() {
    for n in 2..=6 {
        let w = bsc(n, 0.1).unwrap();
        let search = best_code_search(&w, 4).unwrap();
        let qstar = map_solve(&code_to_joint(&w, &search.code).unwrap()).unwrap().qy_star;
        let mc = metaconverse_code(&w, &search.code, &qstar).unwrap();
        assert!((mc - search.error).abs() <= TOL, "n={n}: {mc} vs {}", search.error);
        let ux = FiniteMeasure::uniform(w.num_inputs()).unwrap();
        let uy = FiniteMeasure::uniform(w.num_outputs()).unwrap();
        let relaxed = th27_relaxation(&w, 4, &ux, &uy).unwrap();
        assert!(relaxed <= search.error + TOL, "n={n}: {relaxed}");
        if n == 4 {
            assert!((relaxed - 0.1252).abs() <= TOL);
        }
    }
}

#[test]
fn reduced_search_matches_full_enumeration() {
    for n in 1..=3 {
        let w = bsc(n, 0.1).unwrap();
        for m in 1..=w.num_inputs() {
            let reduced = best_code_search(&w, m).unwrap().error;
            let full = exhaustive_best_code(&dense(&w), w.num_inputs(), w.num_outputs(), m).unwrap();
            assert!((reduced - full).abs() <= TOL, "n={n} m={m}: {reduced} vs {full}");
        }
    }
    for delta in [0.05, 0.2, 0.35] {
        let w = bsc(4, delta).unwrap();
        for m in [2, 3, 5] {
            let reduced = best_code_search(&w, m).unwrap().error;
            let full = exhaustive_best_code(&dense(&w), w.num_inputs(), w.num_outputs(), m).unwrap();
            assert!((reduced - full).abs() <= TOL, "delta={delta} m={m}");
        }
    }
}

#[test]
fn generic_channel_search_matches_oracle() {
    let z = Dmc::memoryless(&[vec![1.0, 0.0], vec![0.25, 0.75]], 3).unwrap();
    for m in 1..=5 {
        let got = best_code_search(&z, m).unwrap().error;
        let want = exhaustive_best_code(&dense(&z), z.num_inputs(), z.num_outputs(), m).unwrap();
        assert!((got - want).abs() <= TOL, "m={m}");
    }
    let ternary = Dmc::memoryless(&[vec![0.8, 0.1, 0.1], vec![0.1, 0.7, 0.2], vec![0.3, 0.3, 0.4]], 2).unwrap();
    let got = best_code_search(&ternary, 3).unwrap().error;
    let want = exhaustive_best_code(&dense(&ternary), 9, 9, 3).unwrap();
    assert!((got - want).abs() <= TOL);
}

#[test]
fn random_codes_are_tight_at_their_qstar() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..60 {
        let n = rng.random_range(2..=5);
        let w = bsc(n, rng.random_range(0.01..0.45)).unwrap();
        let m = rng.random_range(2..=6.min(w.num_inputs()));
        let mut indices: Vec<usize> = Vec::new();
        while indices.len() < m {
            let x = rng.random_range(0..w.num_inputs());
            if !indices.contains(&x) {
                indices.push(x);
            }
        }
        let code = ChannelCode::from_indices(&w, &indices).unwrap();
        let map = map_solve(&code_to_joint(&w, &code).unwrap()).unwrap();
        let mc = metaconverse_code(&w, &code, &map.qy_star).unwrap();
        assert!((mc - map.error).abs() <= TOL);
        let uy = FiniteMeasure::uniform(w.num_outputs()).unwrap();
        assert!(metaconverse_code(&w, &code, &uy).unwrap() <= map.error + TOL);
    }
}

#[test]
fn translating_a_code_preserves_its_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let w = bsc(5, 0.12).unwrap();
    for _ in 0..40 {
        let mut indices: Vec<usize> = Vec::new();
        while indices.len() < 4 {
            let x = rng.random_range(0..32);
            if !indices.contains(&x) {
                indices.push(x);
            }
        }
        let shift = rng.random_range(0..32);
        let shifted: Vec<usize> = indices.iter().map(|x| x ^ shift).collect();
        let a = map_solve(&code_to_joint(&w, &ChannelCode::from_indices(&w, &indices).unwrap()).unwrap()).unwrap();
        let b = map_solve(&code_to_joint(&w, &ChannelCode::from_indices(&w, &shifted).unwrap()).unwrap()).unwrap();
        assert!((a.error - b.error).abs() <= TOL);
    }
}

#[test]
fn search_independent_of_worker_count() {
    let w = bsc(5, 0.1).unwrap();
    let reference = best_code_search_with_workers(&w, 4, 1).unwrap();
    for workers in [2, 3, 8, 64] {
        assert_eq!(best_code_search_with_workers(&w, 4, workers).unwrap(), reference);
    }
}
