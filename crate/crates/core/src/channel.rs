//! Channel coding as M-ary hypothesis testing.
//!
//! A codebook over an n-use memoryless channel turns into a joint
//! distribution over (message, output) with equiprobable messages. The
//! meta-converse `α_{1/M}(P_X^C x W, P_X^C x Q_Y)` evaluated at that joint's
//! `Q*_Y` equals the ML error of the code; the codebook-free relaxation
//! replaces `P_X^C` by an arbitrary input distribution.
//!
//! Product alphabets are indexed big-endian: the input string
//! `(x_1, .., x_n)` over a letter alphabet of size `a` has index
//! `x_1 a^{n-1} + .. + x_n`.

use std::fmt;

use serde::Serialize;

use crate::binary::alpha_beta;
use crate::error::{Error, Result};
use crate::mary::{map_solve, theorem1_alpha_form};
use crate::measures::{product, validate_kernel, FiniteMeasure, JointDistribution};

/// Cap on dense `inputs x outputs` (and `M x outputs`) materializations.
pub const DENSE_LIMIT: u128 = 1 << 22;
/// Cap on `M x |Y|` for code-induced joints.
pub const JOINT_LIMIT: u128 = 1 << 20;
/// Cap on the number of codebooks visited by [`best_code_search`].
pub const SEARCH_LIMIT: u128 = 10_000_000;

/// A discrete memoryless channel used `blocklength` times, stored as the
/// dense transition matrix of the product channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    letter_inputs: usize,
    letter_outputs: usize,
    blocklength: usize,
    inputs: usize,
    outputs: usize,
    transition: Vec<f64>,
    binary_symmetric: bool,
}

impl Dmc {
    /// `blocklength` independent uses of the single-letter channel `letter`
    /// (rows indexed by input).
    pub fn memoryless(letter: &[Vec<f64>], blocklength: usize) -> Result<Self> {
        if blocklength == 0 {
            return Err(Error::OutOfRange { name: "blocklength", value: 0.0 });
        }
        let a = letter.len();
        let b = letter.first().map_or(0, Vec::len);
        if letter.iter().any(|r| r.len() != b) {
            return Err(Error::SizeMismatch { expected: b, found: letter.iter().map(Vec::len).find(|&l| l != b).unwrap_or(0) });
        }
        let flat = letter.concat();
        validate_kernel(a, b, &flat)?;

        let inputs = checked_pow(a, blocklength, "channel inputs")?;
        let outputs = checked_pow(b, blocklength, "channel outputs")?;
        let dense = inputs as u128 * outputs as u128;
        if dense > DENSE_LIMIT {
            return Err(Error::GuardExceeded { what: "transition entries", size: dense, limit: DENSE_LIMIT });
        }

        let mut transition = vec![1.0];
        let (mut rows, mut cols) = (1usize, 1usize);
        for _ in 0..blocklength {
            let mut next = vec![0.0; rows * a * cols * b];
            for x in 0..rows {
                for xi in 0..a {
                    let new_row = (x * a + xi) * cols * b;
                    for y in 0..cols {
                        let base = transition[x * cols + y];
                        for yi in 0..b {
                            next[new_row + y * b + yi] = base * flat[xi * b + yi];
                        }
                    }
                }
            }
            transition = next;
            rows *= a;
            cols *= b;
        }
        Ok(Self {
            letter_inputs: a,
            letter_outputs: b,
            blocklength,
            inputs,
            outputs,
            transition,
            binary_symmetric: false,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs
    }

    pub fn blocklength(&self) -> usize {
        self.blocklength
    }

    pub fn letter_inputs(&self) -> usize {
        self.letter_inputs
    }

    pub fn letter_outputs(&self) -> usize {
        self.letter_outputs
    }

    /// `W(y | x)` over the product alphabets.
    pub fn transition(&self, x: usize, y: usize) -> f64 {
        self.transition[x * self.outputs + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.transition[x * self.outputs..(x + 1) * self.outputs]
    }

    /// Whether translating every codeword by a fixed binary word preserves
    /// the error of any code (true for products of a BSC).
    pub fn is_binary_symmetric(&self) -> bool {
        self.binary_symmetric
    }
}

fn checked_pow(base: usize, exp: usize, what: &'static str) -> Result<usize> {
    let value = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if value > DENSE_LIMIT {
        return Err(Error::GuardExceeded { what, size: value, limit: DENSE_LIMIT });
    }
    Ok(value as usize)
}

/// `n` uses of a binary symmetric channel with crossover `delta`.
pub fn bsc(n: usize, delta: f64) -> Result<Dmc> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange { name: "delta", value: delta });
    }
    let mut channel = Dmc::memoryless(&[vec![1.0 - delta, delta], vec![delta, 1.0 - delta]], n)?;
    channel.binary_symmetric = true;
    Ok(channel)
}

/// `M` distinct input strings of length `blocklength`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChannelCode {
    blocklength: usize,
    codewords: Vec<Vec<usize>>,
}

impl ChannelCode {
    pub fn new(blocklength: usize, codewords: Vec<Vec<usize>>) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::OutOfRange { name: "M", value: 0.0 });
        }
        for (index, word) in codewords.iter().enumerate() {
            if word.len() != blocklength {
                return Err(Error::SizeMismatch { expected: blocklength, found: word.len() });
            }
            if codewords[..index].contains(word) {
                return Err(Error::DuplicateCodeword { index });
            }
        }
        Ok(Self { blocklength, codewords })
    }

    /// Builds a code for `channel` from product-alphabet input indices.
    pub fn from_indices(channel: &Dmc, indices: &[usize]) -> Result<Self> {
        let a = channel.letter_inputs;
        let n = channel.blocklength;
        let mut words = Vec::with_capacity(indices.len());
        for (index, &x) in indices.iter().enumerate() {
            if x >= channel.inputs {
                return Err(Error::SymbolOutOfRange { index });
            }
            let mut word = vec![0; n];
            let mut rest = x;
            for slot in word.iter_mut().rev() {
                *slot = rest % a;
                rest /= a;
            }
            words.push(word);
        }
        Self::new(n, words)
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn blocklength(&self) -> usize {
        self.blocklength
    }

    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }

    /// Product-alphabet indices of the codewords for a letter alphabet of size `letters`.
    pub fn indices(&self, letters: usize) -> Result<Vec<usize>> {
        self.codewords
            .iter()
            .enumerate()
            .map(|(index, word)| {
                word.iter().try_fold(0usize, |acc, &s| {
                    if s >= letters {
                        Err(Error::SymbolOutOfRange { index })
                    } else {
                        Ok(acc * letters + s)
                    }
                })
            })
            .collect()
    }
}

impl fmt::Display for ChannelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self
            .codewords
            .iter()
            .map(|w| w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        write!(f, "{{{}}}", words.join(","))
    }
}

/// `P(v, y) = W(y | x(v)) / M`.
pub fn code_to_joint(channel: &Dmc, code: &ChannelCode) -> Result<JointDistribution> {
    if code.blocklength != channel.blocklength {
        return Err(Error::SizeMismatch { expected: channel.blocklength, found: code.blocklength });
    }
    let size = code.len() as u128 * channel.outputs as u128;
    if size > JOINT_LIMIT {
        return Err(Error::GuardExceeded { what: "M x |Y|", size, limit: JOINT_LIMIT });
    }
    let m = code.len() as f64;
    let mass = code
        .indices(channel.letter_inputs)?
        .into_iter()
        .flat_map(|x| channel.row(x).iter().map(move |w| w / m))
        .collect();
    JointDistribution::new(code.len(), channel.outputs, mass)
}

/// Meta-converse `α_{1/M}(P_X^C x W, P_X^C x Q_Y)` for a fixed code.
pub fn metaconverse_code(channel: &Dmc, code: &ChannelCode, qy: &FiniteMeasure) -> Result<f64> {
    theorem1_alpha_form(&code_to_joint(channel, code)?, qy)
}

/// `α_{1/M}(P_X x W, P_X x Q_Y)` for a given input/output pair. The outer
/// min over `P_X` and max over `Q_Y` are left to the caller; for a BSC the
/// saddle point is uniform/uniform.
pub fn th27_relaxation(channel: &Dmc, m: usize, px: &FiniteMeasure, qy: &FiniteMeasure) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange { name: "M", value: 0.0 });
    }
    px.require_len(channel.inputs)?;
    qy.require_len(channel.outputs)?;
    let mass = (0..channel.inputs)
        .flat_map(|x| channel.row(x).iter().map(move |w| px.get(x) * w))
        .collect();
    let joint = JointDistribution::new(channel.inputs, channel.outputs, mass)?;
    let auxiliary = product(px, qy);
    Ok(alpha_beta(joint.flat(), auxiliary.flat(), 1.0 / m as f64)?.alpha)
}

/// Result of an exhaustive codebook search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeSearch {
    pub code: ChannelCode,
    pub indices: Vec<usize>,
    pub error: f64,
    pub candidates: u128,
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of codebooks [`best_code_search`] would visit, or the guard it
/// would trip.
pub fn search_size(channel: &Dmc, m: usize) -> Result<u128> {
    if m == 0 || m > channel.inputs {
        return Err(Error::OutOfRange { name: "M", value: m as f64 });
    }
    let joint_size = m as u128 * channel.outputs as u128;
    if joint_size > JOINT_LIMIT {
        return Err(Error::GuardExceeded { what: "M x |Y|", size: joint_size, limit: JOINT_LIMIT });
    }
    let fixed = usize::from(channel.binary_symmetric);
    let candidates = binomial((channel.inputs - fixed) as u128, (m - fixed) as u128);
    if candidates > SEARCH_LIMIT {
        return Err(Error::GuardExceeded { what: "candidate codebooks", size: candidates, limit: SEARCH_LIMIT });
    }
    Ok(candidates)
}

/// Best ML code of size `m` by exhaustive search, using every available core.
pub fn best_code_search(channel: &Dmc, m: usize) -> Result<CodeSearch> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    best_code_search_with_workers(channel, m, workers)
}

/// Exhaustive search over unordered sets of `m` distinct inputs.
///
/// For a binary-symmetric channel the first codeword is fixed to the
/// all-zero word. Among optimal codes the one with the lexicographically
/// smallest sorted index list is returned, so the result does not depend
/// on `workers`.
pub fn best_code_search_with_workers(channel: &Dmc, m: usize, workers: usize) -> Result<CodeSearch> {
    let candidates = search_size(channel, m)?;
    let fixed: Vec<usize> = if channel.binary_symmetric { vec![0] } else { Vec::new() };
    let pool_start = fixed.len();
    let free = m - fixed.len();

    // one partition per choice of the first free codeword
    let partitions: Vec<usize> = if free == 0 {
        vec![usize::MAX]
    } else {
        (pool_start..=channel.inputs - free).collect()
    };
    let workers = workers.max(1).min(partitions.len());

    // pass 1: the optimal score (a min, hence independent of visiting order)
    let best_score = parallel_partitions(&partitions, workers, |first| {
        let mut best = f64::INFINITY;
        for_each_code(channel, &fixed, first, free, |code| {
            best = best.min(ml_error(channel, code));
            true
        });
        Some(best)
    })
    .into_iter()
    .fold(f64::INFINITY, f64::min);

    // pass 2: the lexicographically smallest code within float noise of it
    let cutoff = best_score + TIE_SLACK;
    let indices = parallel_partitions(&partitions, workers, |first| {
        let mut found = None;
        for_each_code(channel, &fixed, first, free, |code| {
            if ml_error(channel, code) <= cutoff {
                found = Some(code.to_vec());
                return false;
            }
            true
        });
        found
    })
    .into_iter()
    .min()
    .expect("the optimal score is attained");

    let code = ChannelCode::from_indices(channel, &indices)?;
    let error = map_solve(&code_to_joint(channel, &code)?)?.error;
    Ok(CodeSearch { code, indices, error, candidates })
}

/// Scores closer than this are treated as tied when picking the reported code.
const TIE_SLACK: f64 = 1e-12;

/// Runs `task` on every partition with `workers` scoped threads, returning
/// the non-`None` results.
fn parallel_partitions<T: Send>(
    partitions: &[usize],
    workers: usize,
    task: impl Fn(usize) -> Option<T> + Sync,
) -> Vec<T> {
    let task = &task;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|id| {
                scope.spawn(move || {
                    partitions.iter().skip(id).step_by(workers).filter_map(|&first| task(first)).collect::<Vec<T>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
    })
}

/// Visits codebooks `fixed ∪ {first} ∪ rest`, with `rest` drawn from inputs
/// above `first`, in lexicographic order until `visit` returns false.
fn for_each_code(channel: &Dmc, fixed: &[usize], first: usize, free: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    let mut code: Vec<usize> = fixed.to_vec();
    if free == 0 {
        visit(&code);
        return;
    }
    code.push(first);
    let tail = free - 1;
    let base = code.len();
    code.extend((1..=tail).map(|k| first + k));
    if tail > 0 && code[code.len() - 1] >= channel.inputs {
        return;
    }
    loop {
        if !visit(&code) {
            return;
        }
        // advance the free tail to the next combination
        let mut k = tail;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let pos = base + k;
            if code[pos] < channel.inputs - (tail - k) {
                code[pos] += 1;
                for r in pos + 1..base + tail {
                    code[r] = code[r - 1] + 1;
                }
                break;
            }
        }
    }
}

fn ml_error(channel: &Dmc, code: &[usize]) -> f64 {
    let success: f64 = (0..channel.outputs)
        .map(|y| code.iter().map(|&x| channel.transition(x, y)).fold(0.0, f64::max))
        .sum();
    1.0 - success / code.len() as f64
}
