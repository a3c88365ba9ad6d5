use metaconverse_core::lossy::{
    excess_distortion, kostina_budget, kostina_relaxation, lsc_test_budget, qv_codebook, theorem3_exact,
    DistortionSpec, LossyCode,
};
use metaconverse_core::sampling::{random_lossy, random_probability};
use metaconverse_core::FiniteMeasure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn codebooks(size: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn extend(start: usize, size: usize, m: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        for w in start..size {
            current.push(w);
            extend(w + 1, size, m, current, out);
            current.pop();
        }
    }
    extend(0, size, m, &mut current, &mut out);
    out
}

#[test]
fn exact_characterization_matches_excess_distortion() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..300 {
        let v = rng.random_range(2..=8);
        let w = rng.random_range(1..=6);
        let (pv, spec, code) = random_lossy(&mut rng, v, w);
        let exact = theorem3_exact(&pv, &spec, &code).unwrap();
        let direct = excess_distortion(&pv, &spec, &code).unwrap();
        assert!((exact - direct).abs() <= TOL, "{exact} vs {direct}");
        if let Some(qc) = qv_codebook(&spec, &code).unwrap() {
            assert_eq!(lsc_test_budget(&qc, &spec, &code).unwrap(), 0.0);
        }
    }
}

#[test]
fn relaxation_below_every_codebook() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let v = rng.random_range(2..=8);
        let w = rng.random_range(1..=6);
        let (pv, spec, code) = random_lossy(&mut rng, v, w);
        let m = code.len();
        let qv = random_probability(&mut rng, v);
        let bound = kostina_relaxation(&pv, &spec, m, &qv).unwrap();
        let budget = kostina_budget(&qv, &spec, m).unwrap();
        for words in codebooks(w, m) {
            let c = LossyCode::new(words).unwrap();
            assert!(bound <= excess_distortion(&pv, &spec, &c).unwrap() + TOL);
            assert!(lsc_test_budget(&qv, &spec, &c).unwrap() <= budget + TOL);
        }
    }
}

#[test]
fn almost_lossless_uniform_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let v = rng.random_range(2..=8);
        let pv = loop {
            let p = random_probability(&mut rng, v);
            if p.weights().iter().all(|&x| x < 0.99) {
                break p;
            }
        };
        let spec = DistortionSpec::hamming(v, 0.0).unwrap();
        let uniform = FiniteMeasure::uniform(v).unwrap();
        for m in 1..v {
            let best = codebooks(v, m)
                .into_iter()
                .map(|c| excess_distortion(&pv, &spec, &LossyCode::new(c).unwrap()).unwrap())
                .fold(f64::INFINITY, f64::min);
            let bound = kostina_relaxation(&pv, &spec, m, &uniform).unwrap();
            assert!((bound - best).abs() <= TOL, "v={v} m={m}: {bound} vs {best}");
            let budget = lsc_test_budget(&uniform, &spec, &LossyCode::new((0..m).collect()).unwrap()).unwrap();
            assert!((budget - m as f64 / v as f64).abs() <= TOL);
        }
    }
}
