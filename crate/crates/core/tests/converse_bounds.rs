use metaconverse_core::converse::{bank_of_tests, poor_verdu_sweep, tight_poor_verdu, verdu_han, wolfowitz};
use metaconverse_core::mary::map_solve;
use metaconverse_core::measures::{marginals, FiniteMeasure, JointDistribution};
use metaconverse_core::sampling::{random_joint_full_prior, sparse_dirichlet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn corpus(seed: u64, count: usize) -> Vec<JointDistribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=5);
            let n = rng.random_range(1..=6);
            random_joint_full_prior(&mut rng, m, n)
        })
        .collect()
}

#[test]
fn bounds_never_exceed_map_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for joint in corpus(10, 300) {
        let map = map_solve(&joint).unwrap();
        let eps = map.error;
        let (_, py) = marginals(&joint).unwrap();
        let random = FiniteMeasure::probability(sparse_dirichlet(&mut rng, joint.num_observations(), 0.2)).unwrap();
        for qy in [&py, &map.qy_star, &random] {
            assert!(verdu_han(&joint, Some(qy)).unwrap().best_value <= eps + TOL);
            assert!(wolfowitz(&joint, qy).unwrap().best_value <= eps + TOL);
            assert!(bank_of_tests(&joint, qy).unwrap().value <= eps + TOL);
            let pv = poor_verdu_sweep(&joint, qy).unwrap();
            for ((&value, &ok), &gamma) in pv.sweep.values.iter().zip(&pv.condition_ok).zip(&pv.sweep.gammas) {
                if ok {
                    assert!(value <= eps + TOL, "poor-verdu at {gamma}: {value} > {eps}");
                }
            }
        }
    }
}

#[test]
fn tight_bounds_attain_map_error() {
    for joint in corpus(11, 300) {
        let map = map_solve(&joint).unwrap();
        let tight = tight_poor_verdu(&joint).unwrap();
        assert!((tight.best_value - map.error).abs() <= TOL, "{} vs {}", tight.best_value, map.error);
        let bank = bank_of_tests(&joint, &map.qy_star).unwrap();
        assert!((bank.value - map.error).abs() <= TOL, "{} vs {}", bank.value, map.error);
        let vh = verdu_han(&joint, Some(&map.qy_star)).unwrap();
        assert!((vh.best_value - map.error).abs() <= TOL);
        let w = wolfowitz(&joint, &map.qy_star).unwrap();
        assert!((w.best_value - map.error).abs() <= TOL);
    }
}

#[test]
fn bank_budgets_sum_to_output_mass() {
    for joint in corpus(12, 100) {
        let map = map_solve(&joint).unwrap();
        let bank = bank_of_tests(&joint, &map.qy_star).unwrap();
        let total: f64 = bank.budgets.iter().sum();
        assert!((total - 1.0).abs() <= TOL);
    }
}

#[test]
fn bank_value_ignores_map_tie_breaking() {
    // two hypotheses tied on every observation
    let joint = JointDistribution::new(3, 2, vec![0.2, 0.15, 0.2, 0.15, 0.1, 0.2]).unwrap();
    let map = map_solve(&joint).unwrap();
    let bank = bank_of_tests(&joint, &map.qy_star).unwrap();
    assert!((bank.value - map.error).abs() <= TOL);
}

#[test]
fn sweeps_report_sorted_jump_points() {
    for joint in corpus(13, 50) {
        let (_, py) = marginals(&joint).unwrap();
        let vh = verdu_han(&joint, None).unwrap();
        assert_eq!(vh.gammas[0], 0.0);
        assert!(vh.gammas.windows(2).all(|w| w[0] < w[1]));
        let explicit = verdu_han(&joint, Some(&py)).unwrap();
        assert_eq!(vh, explicit);
    }
}
