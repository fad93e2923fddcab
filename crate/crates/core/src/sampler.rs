//! Discrete-time walks on `L(P)` and exact distribution iteration.
//!
//! With probabilities summing to 1 every vertex of a chain has total
//! outgoing weight 1 once loops are counted, so the jump chain is the
//! stochastic matrix `T = Id + M(x)` and no clocks are needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chains::{build_graph, ChainKind};
use crate::error::{Error, Result};
use crate::extensions::ExtensionIndex;
use crate::linform::{format_rational, RatMatrix, Rational, RationalAssignment};
use crate::poset::Poset;

/// Transition structure of one chain at fixed probabilities.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub kind: ChainKind,
    pub extensions: ExtensionIndex,
    pub probabilities: RationalAssignment,
    /// `moves[s][i − 1]`: state reached from `s` when variable `x_i` fires
    /// (`s` itself when no edge out of `s` carries `x_i`).
    moves: Vec<Vec<usize>>,
}

fn require_probabilities(n: usize, p: &RationalAssignment) -> Result<()> {
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.len(),
        });
    }
    if !p.sums_to_one() {
        return Err(Error::BadProbabilities(format_rational(&p.sum())));
    }
    Ok(())
}

/// Kernel of the uniform promotion chain, the sampler's default.
pub fn step_kernel(poset: &Poset, probabilities: &RationalAssignment) -> Result<Kernel> {
    kernel_for(poset, ChainKind::UniformPromotion, probabilities)
}

/// Kernel of any of the four chains.
pub fn kernel_for(
    poset: &Poset,
    kind: ChainKind,
    probabilities: &RationalAssignment,
) -> Result<Kernel> {
    let n = poset.len();
    require_probabilities(n, probabilities)?;
    let graph = build_graph(poset, kind)?;
    let size = graph.vertices.len();
    let mut moves: Vec<Vec<usize>> = (0..size).map(|s| vec![s; n]).collect();
    for e in &graph.edges {
        let var = (1..=n)
            .find(|&i| e.weight.coeff(i) == 1)
            .expect("edge weights are single variables");
        moves[e.from][var - 1] = e.to;
    }
    Ok(Kernel {
        kind,
        extensions: graph.vertices,
        probabilities: probabilities.clone(),
        moves,
    })
}

impl Kernel {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// State reached from `s` when `x_i` fires.
    pub fn next(&self, s: usize, i: usize) -> usize {
        self.moves[s][i - 1]
    }

    /// `T(t, s)`: probability of moving from `s` to `t`.
    pub fn matrix(&self) -> RatMatrix {
        let size = self.len();
        let mut t = RatMatrix::zeros(size, size);
        for s in 0..size {
            for (k, &to) in self.moves[s].iter().enumerate() {
                let cur = t.get(to, s).clone();
                t.set(to, s, cur + self.probabilities.get(k + 1));
            }
        }
        t
    }

    /// `p ↦ T·p`, using the sparse move table.
    pub fn step(&self, p: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); p.len()];
        for (s, mass) in p.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for (k, &to) in self.moves[s].iter().enumerate() {
                out[to] += mass * self.probabilities.get(k + 1);
            }
        }
        out
    }

    /// A pair `(π, π′)` with `T(π′, π) ≠ T(π, π′)`. For a doubly stochastic
    /// kernel this certifies that the chain is not reversible.
    pub fn irreversibility_witness(&self) -> Option<(usize, usize)> {
        let t = self.matrix();
        for a in 0..self.len() {
            for b in (a + 1)..self.len() {
                if t.get(b, a) != t.get(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// Exact distributions `δ_start, Tδ, T²δ, …` and their total-variation
/// distance to uniform.
#[derive(Clone, Debug)]
pub struct DistributionTrace {
    pub distributions: Vec<Vec<Rational>>,
    pub tv: Vec<Rational>,
}

impl DistributionTrace {
    /// `TV(t+1) ≤ TV(t)` for every step.
    pub fn is_monotone(&self) -> bool {
        self.tv.windows(2).all(|w| w[1] <= w[0])
    }

    /// First step with `TV < bound`.
    pub fn first_below(&self, bound: &Rational) -> Option<usize> {
        self.tv.iter().position(|t| t < bound)
    }

    /// CSV with columns `step,tv,tv_exact`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,tv,tv_exact\n");
        for (t, tv) in self.tv.iter().enumerate() {
            out.push_str(&format!("{t},{},{}\n", decimal(tv), format_rational(tv)));
        }
        out
    }
}

/// Scientific notation with 12 significant digits.
pub fn decimal(r: &Rational) -> String {
    format!("{:.11e}", r.to_f64().unwrap_or(f64::NAN))
}

/// `½ Σ |p(π) − 1/|L||`.
pub fn tv_to_uniform(p: &[Rational]) -> Rational {
    let u = Rational::new(BigInt::one(), BigInt::from(p.len()));
    let total = p
        .iter()
        .fold(Rational::zero(), |acc, x| acc + (x - &u).abs());
    total / Rational::from_integer(BigInt::from(2))
}

pub fn iterate_distribution(
    kernel: &Kernel,
    start: usize,
    steps: usize,
) -> Result<DistributionTrace> {
    if start >= kernel.len() {
        return Err(Error::IndexOutOfRange {
            index: start,
            max: kernel.len().saturating_sub(1),
        });
    }
    let mut p = vec![Rational::zero(); kernel.len()];
    p[start] = Rational::one();
    let mut trace = DistributionTrace {
        tv: vec![tv_to_uniform(&p)],
        distributions: vec![p.clone()],
    };
    for _ in 0..steps {
        p = kernel.step(&p);
        trace.tv.push(tv_to_uniform(&p));
        trace.distributions.push(p.clone());
    }
    Ok(trace)
}

/// Parameters of a seeded walk.
#[derive(Clone, Debug)]
pub struct WalkConfig {
    pub probabilities: RationalAssignment,
    pub steps: usize,
    pub burnin: usize,
    pub seed: u64,
    pub start: usize,
}

/// Integer weights proportional to the probabilities.
fn integer_weights(p: &RationalAssignment) -> Result<Vec<u64>> {
    let lcm = p
        .values()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    p.values()
        .iter()
        .map(|x| {
            (x.numer() * (&lcm / x.denom()))
                .to_u64()
                .ok_or(Error::DenominatorTooLarge)
        })
        .collect()
}

/// Run the walk: each step fires `x_i` with probability `x_i`. Returns the
/// `steps` states visited after `burnin` discarded steps.
pub fn sample_walk(kernel: &Kernel, cfg: &WalkConfig) -> Result<Vec<usize>> {
    if cfg.start >= kernel.len() {
        return Err(Error::IndexOutOfRange {
            index: cfg.start,
            max: kernel.len().saturating_sub(1),
        });
    }
    let weights = integer_weights(&cfg.probabilities)?;
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::BadProbabilities(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = cfg.start;
    let mut out = Vec::with_capacity(cfg.steps);
    for step in 0..(cfg.burnin + cfg.steps) {
        let i = dist.sample(&mut rng) + 1;
        state = kernel.next(state, i);
        if step >= cfg.burnin {
            out.push(state);
        }
    }
    Ok(out)
}

/// Occupation counts per state.
pub fn counts(samples: &[usize], states: usize) -> Vec<u64> {
    let mut c = vec![0u64; states];
    for &s in samples {
        c[s] += 1;
    }
    c
}

/// Pearson statistic of `counts` against the uniform distribution.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Upper 0.999 quantile of `χ²(df)`: tabulated for `df ≤ 10`,
/// Wilson–Hilferty beyond.
pub fn chi_square_999(df: usize) -> f64 {
    const TABLE: [f64; 10] = [
        10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322, 26.124, 27.877, 29.588,
    ];
    if (1..=10).contains(&df) {
        return TABLE[df - 1];
    }
    let k = df as f64;
    let z = 3.090_232_306;
    let a = 2.0 / (9.0 * k);
    k * (1.0 - a + z * a.sqrt()).powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(BigInt::from(a), BigInt::from(b))
    }

    fn p0() -> Poset {
        Poset::new(4, &[(1, 3), (1, 4), (2, 3)]).unwrap()
    }

    #[test]
    fn kernel_is_doubly_stochastic() {
        let k = step_kernel(&p0(), &RationalAssignment::uniform_probabilities(4)).unwrap();
        let t = k.matrix();
        assert!(t.column_sums().iter().all(One::is_one));
        assert!(t.row_sums().iter().all(One::is_one));
    }

    #[test]
    fn kernel_is_identity_plus_generator() {
        let v = RationalAssignment::random_probabilities(4, 3);
        for kind in ChainKind::ALL {
            let k = kernel_for(&p0(), kind, &v).unwrap();
            let m = build_graph(&p0(), kind)
                .unwrap()
                .generator_matrix()
                .evaluate(&v)
                .unwrap();
            let t = k.matrix();
            for r in 0..5 {
                for c in 0..5 {
                    let id = if r == c {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    assert_eq!(t.get(r, c), &(m.get(r, c) + id));
                }
            }
        }
    }

    #[test]
    fn two_antichain_kernel() {
        let v = RationalAssignment::new(vec![q(1, 3), q(2, 3)]).unwrap();
        let t = step_kernel(&Poset::antichain(2), &v).unwrap().matrix();
        // 12 ∂_1 = 21, 21 ∂_1 = 12, ∂_2 fixes both.
        assert_eq!(t.get(0, 0), &q(2, 3));
        assert_eq!(t.get(1, 0), &q(1, 3));
        assert_eq!(t.get(0, 1), &q(1, 3));
    }

    #[test]
    fn rejects_bad_probabilities() {
        let v = RationalAssignment::new(vec![q(1, 3), q(1, 3)]).unwrap();
        assert!(matches!(
            step_kernel(&Poset::antichain(2), &v),
            Err(Error::BadProbabilities(_))
        ));
    }

    #[test]
    fn trace_starts_at_point_mass() {
        let k = step_kernel(&p0(), &RationalAssignment::uniform_probabilities(4)).unwrap();
        let tr = iterate_distribution(&k, 0, 50).unwrap();
        assert_eq!(tr.tv[0], q(4, 5));
        assert!(tr.is_monotone());
        assert!(tr
            .distributions
            .iter()
            .all(|p| p.iter().fold(Rational::zero(), |a, b| a + b).is_one()));
        let chain = step_kernel(
            &Poset::chain(3),
            &RationalAssignment::uniform_probabilities(3),
        )
        .unwrap();
        assert!(iterate_distribution(&chain, 0, 5)
            .unwrap()
            .tv
            .iter()
            .all(Zero::is_zero));
    }

    #[test]
    fn walks_are_reproducible() {
        let k = step_kernel(&p0(), &RationalAssignment::uniform_probabilities(4)).unwrap();
        let cfg = WalkConfig {
            probabilities: RationalAssignment::uniform_probabilities(4),
            steps: 1000,
            burnin: 10,
            seed: 42,
            start: 0,
        };
        assert_eq!(
            sample_walk(&k, &cfg).unwrap(),
            sample_walk(&k, &cfg).unwrap()
        );
    }

    #[test]
    fn p0_uniform_promotion_is_irreversible() {
        let k = step_kernel(&p0(), &RationalAssignment::random_probabilities(4, 9)).unwrap();
        assert!(k.irreversibility_witness().is_some());
    }

    #[test]
    fn wilson_hilferty_is_close_to_table() {
        let k = 10.0f64;
        let a = 2.0 / (9.0 * k);
        let wh = k * (1.0 - a + 3.090_232_306 * a.sqrt()).powi(3);
        assert!((wh - chi_square_999(10)).abs() < 0.3);
    }
}
