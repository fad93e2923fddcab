//! The self-verification suite run by `linext verify`.
//!
//! Each check sweeps the corpus and stops at the first counterexample.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chains::{self, build_graph, check_stationary, ChainKind};
use crate::corpus::CorpusEntry;
use crate::extensions::{self, tau_as_promotions, then, ExtensionIndex};
use crate::linform::{spectrum_matches, LinearForm, Rational, RationalAssignment, Spectrum};
use crate::monoid::{
    chamber_matrix, check_axioms, rtrivial_spectrum, PromotionMonoid, SuppDes, DEFAULT_CAP,
};
use crate::poset::{LabelSet, Poset};
use crate::sampler::{iterate_distribution, step_kernel};
use crate::spectral::{
    chain_count_by_extensions, chain_word_identity, chains_sign_finding, check_forest_spectrum,
    nonlinear_factor_degree, poset_derangements, DerangementTable, UpperSetLattice,
};

/// Seeds of the random assignments used by every evaluation check.
pub const ASSIGNMENT_SEEDS: [u64; 3] = [1, 2, 3];

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub invariant: &'static str,
    pub checked: usize,
    pub failure: Option<String>,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type CheckFn = fn(&[CorpusEntry]) -> Result<usize, String>;

/// `(name, invariant, check)` for every check in the suite.
pub fn checks() -> Vec<(&'static str, &'static str, CheckFn)> {
    vec![
        ("poset.lattice", "upper and lower sets are complementary and closed under union and intersection; reduction is idempotent", check_poset),
        ("extensions.identities", "tau involution, commutation, (tau_i tau_i+1)^6 = 1, tau as promotions, braid iff union of chains, sliding = tau product", check_operator_identities),
        ("chains.structure", "columns sum to zero, uniform rows sum to zero, symmetry, x_n absent, strong connectivity", check_chain_structure),
        ("chains.stationary", "closed-form weights span the generator kernel", check_stationary_all),
        ("chains.partition", "sum of Z_P w(pi) is 1 on rooted forests", check_partition),
        ("spectral.lattice", "maximal-chain counts equal extension counts; d_S >= 0; sum d_S = |L(P)|", check_lattice),
        ("spectral.forest", "char poly of shifted promotion generator equals prod (lambda - x_S)^d_S", check_forest_spectra),
        ("spectral.chains", "union of chains: d and poset derangements agree; eigenvalues are -x_S", check_chain_spectra),
        ("spectral.chain-word", "f([S,1]) equals extensions fixing a letter of every chosen chain", check_chain_words),
        ("spectral.non-forest", "P0 eigenvalues are linear forms; claw spectrum does not factor", check_non_forest),
        ("monoid.r-trivial", "forest monoids are R-trivial and weakly ordered; P2 is not R-trivial; P0 is not aperiodic", check_monoids),
        ("sampler.kernel", "kernel doubly stochastic; TV to uniform monotone and below 1e-6 by step 200", check_sampler),
    ]
}

pub fn run(entries: &[CorpusEntry]) -> Vec<CheckOutcome> {
    checks()
        .into_iter()
        .map(|(name, invariant, f)| {
            let start = Instant::now();
            let result = f(entries);
            let (checked, failure) = match result {
                Ok(k) => (k, None),
                Err(e) => (0, Some(e)),
            };
            CheckOutcome {
                name,
                invariant,
                checked,
                failure,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

fn full(entries: &[CorpusEntry]) -> impl Iterator<Item = &CorpusEntry> {
    entries.iter().filter(|e| e.is_full())
}

fn assignments(n: usize) -> Vec<RationalAssignment> {
    ASSIGNMENT_SEEDS
        .iter()
        .map(|&s| RationalAssignment::random(n, s))
        .collect()
}

fn err<E: std::fmt::Display>(name: &str, e: E) -> String {
    format!("{name}: {e}")
}

fn check_poset(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries) {
        let p = &e.poset;
        let n = p.len();
        let ups = p.upper_sets();
        let lows = p.lower_sets();
        if ups.len() != lows.len() {
            return Err(format!(
                "{}: {} upper sets but {} lower sets",
                e.name,
                ups.len(),
                lows.len()
            ));
        }
        for &u in &ups {
            if !p.is_lower_set(u.complement(n)) {
                return Err(format!(
                    "{}: complement of upper set {u} is not a lower set",
                    e.name
                ));
            }
        }
        for &a in &ups {
            for &b in &ups {
                if !p.is_upper_set(a.union(b)) || !p.is_upper_set(a.intersection(b)) {
                    return Err(format!("{}: upper sets {a}, {b} not closed", e.name));
                }
            }
        }
        let again = Poset::new(n, p.covers()).map_err(|x| err(&e.name, x))?;
        if again.covers() != p.covers() {
            return Err(format!(
                "{}: transitive reduction is not idempotent",
                e.name
            ));
        }
        if p.is_union_of_chains() && !p.is_rooted_forest() {
            return Err(format!(
                "{}: union of chains but not a rooted forest",
                e.name
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

fn check_operator_identities(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries) {
        let p = &e.poset;
        let n = p.len();
        let idx = ExtensionIndex::new(p).map_err(|x| err(&e.name, x))?;
        let id: Vec<usize> = (0..idx.len()).collect();
        let taus: Vec<Vec<usize>> = (1..n).map(|i| idx.tau_table(i).unwrap()).collect();
        let proms: Vec<Vec<usize>> = (1..=n).map(|j| idx.promotion_table(j).unwrap()).collect();
        for (i, t) in taus.iter().enumerate() {
            if then(t, t) != id {
                return Err(format!("{}: tau_{} is not an involution", e.name, i + 1));
            }
            for (j, u) in taus.iter().enumerate() {
                if i.abs_diff(j) > 1 && then(t, u) != then(u, t) {
                    return Err(format!(
                        "{}: tau_{} and tau_{} do not commute",
                        e.name,
                        i + 1,
                        j + 1
                    ));
                }
            }
            if i + 1 < taus.len() {
                let pair = then(t, &taus[i + 1]);
                let mut pow = id.clone();
                for _ in 0..6 {
                    pow = then(&pow, &pair);
                }
                if pow != id {
                    return Err(format!(
                        "{}: (tau_{} tau_{})^6 is not the identity",
                        e.name,
                        i + 1,
                        i + 2
                    ));
                }
            }
            let mut via = id.clone();
            for a in tau_as_promotions(n, i + 1) {
                via = then(&via, &proms[a - 1]);
            }
            if via != *t {
                return Err(format!(
                    "{}: tau_{} differs from its promotion factorization",
                    e.name,
                    i + 1
                ));
            }
        }
        let braid = (0..taus.len().saturating_sub(1)).all(|i| {
            let (a, b) = (&taus[i], &taus[i + 1]);
            then(&then(a, b), a) == then(&then(b, a), b)
        });
        if braid != p.is_union_of_chains() {
            return Err(format!(
                "{}: braid relations {} but union of chains is {}",
                e.name,
                if braid { "hold" } else { "fail" },
                p.is_union_of_chains()
            ));
        }
        if proms[n - 1] != id && n > 0 {
            return Err(format!("{}: promotion at n is not the identity", e.name));
        }
        for w in idx.words() {
            for j in 1..=n {
                let a = extensions::promotion(p, w, j).unwrap();
                let b = extensions::promotion_by_sliding(p, w, j).unwrap();
                if a != b {
                    return Err(format!(
                        "{}: sliding {:?} at {j} gives {:?}, tau product gives {:?}",
                        e.name, w, b, a
                    ));
                }
            }
        }
        checked += 1;
    }
    Ok(checked)
}

fn check_chain_structure(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries) {
        let n = e.poset.len();
        for kind in ChainKind::ALL {
            let g = build_graph(&e.poset, kind).map_err(|x| err(&e.name, x))?;
            let m = g.generator_matrix();
            let tag = format!("{} {kind}", e.name);
            if (0..m.dim()).any(|c| !m.column_sum(c).is_zero()) {
                return Err(format!("{tag}: a column does not sum to zero"));
            }
            if kind.is_uniform() && (0..m.dim()).any(|r| !m.row_sum(r).is_zero()) {
                return Err(format!("{tag}: a row does not sum to zero"));
            }
            if kind == ChainKind::UniformTransposition && !m.is_symmetric() {
                return Err(format!("{tag}: generator is not symmetric"));
            }
            if kind == ChainKind::UniformPromotion
                && (0..m.dim()).any(|r| (0..m.dim()).any(|c| m.get(r, c).coeff(n) != 0))
            {
                return Err(format!("{tag}: x{n} occurs in the generator"));
            }
            if !g.is_strongly_connected() {
                return Err(format!("{tag}: graph is not strongly connected"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn check_stationary_all(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries) {
        for kind in ChainKind::ALL {
            for v in assignments(e.poset.len()) {
                let c = check_stationary(&e.poset, kind, &v).map_err(|x| err(&e.name, x))?;
                if !c.passed() {
                    return Err(format!("{} {kind} at ({v}): {c:?}", e.name));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn check_partition(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries).filter(|e| e.poset.is_rooted_forest()) {
        for v in assignments(e.poset.len()) {
            let probs =
                chains::promotion_probabilities(&e.poset, &v).map_err(|x| err(&e.name, x))?;
            let total = probs.iter().fold(Rational::zero(), |a, b| a + b);
            if !total.is_one() {
                return Err(format!(
                    "{} at ({v}): Z_P-normalized weights sum to {total}",
                    e.name
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn check_lattice(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries) {
        let l = UpperSetLattice::new(&e.poset);
        for &s in l.elements() {
            let dp = l.chain_count(s).unwrap();
            let direct = chain_count_by_extensions(&e.poset, s) as u128;
            if dp != direct {
                return Err(format!(
                    "{}: f([{s},1]) is {dp} by recursion, {direct} by extensions",
                    e.name
                ));
            }
        }
        if l.len() <= 64 {
            let mu = l.mobius_by_recursion();
            for (x, &sx) in l.elements().iter().enumerate() {
                for (y, &sy) in l.elements().iter().enumerate() {
                    if l.mobius(sx, sy) != mu[x][y] {
                        return Err(format!("{}: mobius({sx},{sy}) mismatch", e.name));
                    }
                }
            }
        }
        let table = DerangementTable::new(&e.poset);
        if !table.all_nonnegative() {
            return Err(format!("{}: negative derangement number", e.name));
        }
        if table.total() != e.extension_count as i128 {
            return Err(format!(
                "{}: sum of d_S is {}, |L(P)| is {}",
                e.name,
                table.total(),
                e.extension_count
            ));
        }
        for &s in l.elements() {
            if l.covers_of(s).len() == 1 && table.d_of(s) != Some(0) {
                return Err(format!(
                    "{}: {s} has one successor but d_S is not 0",
                    e.name
                ));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

fn check_forest_spectra(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries).filter(|e| e.poset.is_rooted_forest()) {
        for v in assignments(e.poset.len()) {
            if !check_forest_spectrum(&e.poset, &v).map_err(|x| err(&e.name, x))? {
                return Err(format!(
                    "{} at ({v}): predicted spectrum does not match",
                    e.name
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn check_chain_spectra(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries).filter(|e| e.poset.is_consecutive_chain_union()) {
        let p = &e.poset;
        let n = p.len();
        let table = DerangementTable::new(p);
        let dfrak = table.dfrak.as_ref().expect("consecutive chains");
        let total: usize = dfrak.iter().map(|(_, c)| c).sum();
        if total != e.extension_count {
            return Err(format!(
                "{}: 1 + sum of poset derangements is {total}, |L(P)| is {}",
                e.name, e.extension_count
            ));
        }
        for &(lower, count) in dfrak {
            if table.d_of(lower.complement(n)) != Some(count as i128) {
                return Err(format!(
                    "{}: d of complement of {lower} differs from {count}",
                    e.name
                ));
            }
        }
        for v in assignments(n) {
            let s = chains_sign_finding(p, &v).map_err(|x| err(&e.name, x))?;
            if !s.minus_matches {
                return Err(format!(
                    "{} at ({v}): eigenvalues -x_S do not match ({s:?})",
                    e.name
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn check_chain_words(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in entries
        .iter()
        .filter(|e| e.poset.is_consecutive_chain_union())
    {
        let k = e.poset.chain_components().unwrap().len();
        let subsets: Vec<Vec<usize>> = if e.is_full() {
            (0u32..(1 << k))
                .map(|mask| (1..=k).filter(|i| mask >> (i - 1) & 1 == 1).collect())
                .collect()
        } else if k >= 4 {
            vec![vec![2, 4]]
        } else {
            vec![]
        };
        for set in subsets {
            let (lhs, rhs) = chain_word_identity(&e.poset, &set).map_err(|x| err(&e.name, x))?;
            if lhs != rhs {
                return Err(format!(
                    "{} I={set:?}: f([S,1]) = {lhs}, direct count = {rhs}",
                    e.name
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Nonzero eigenvalue forms of P0's promotion generator.
pub fn p0_promotion_spectrum() -> Spectrum {
    let f = LinearForm::from_coeffs;
    Spectrum::new(vec![
        (f(vec![0, 0, 0, 0]), 1),
        (f(vec![-1, -1, 0, 0]), 1),
        (f(vec![-1, -1, 0, -1]), 1),
        (f(vec![-1, -1, -1, -1]), 1),
        (f(vec![-2, -1, -1, -1]), 1),
    ])
}

fn check_non_forest(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in entries {
        let expect_linear = match e.name.as_str() {
            "P0" => true,
            "claw" => false,
            _ => continue,
        };
        let g = build_graph(&e.poset, ChainKind::Promotion).map_err(|x| err(&e.name, x))?;
        for v in assignments(e.poset.len()) {
            let m = g
                .generator_matrix()
                .evaluate(&v)
                .map_err(|x| err(&e.name, x))?;
            if expect_linear {
                if !spectrum_matches(&m, &p0_promotion_spectrum(), &v)
                    .map_err(|x| err(&e.name, x))?
                {
                    return Err(format!(
                        "P0 at ({v}): eigenvalues differ from the four stated forms"
                    ));
                }
            } else if nonlinear_factor_degree(&m) == 0 {
                return Err(format!(
                    "{} at ({v}): characteristic polynomial splits over Q",
                    e.name
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn check_monoids(entries: &[CorpusEntry]) -> Result<usize, String> {
    let mut checked = 0;
    for e in full(entries) {
        let p = &e.poset;
        let m = PromotionMonoid::generate(p, DEFAULT_CAP).map_err(|x| err(&e.name, x))?;
        let r = m.is_r_trivial();
        if e.name == "P2" && r.trivial {
            return Err("P2: monoid is R-trivial".into());
        }
        if e.name == "P0" && m.aperiodicity_witness().is_none() {
            return Err("P0: monoid is aperiodic".into());
        }
        if !p.is_rooted_forest() {
            checked += 1;
            continue;
        }
        if !r.trivial {
            let (a, b) = r.witness.unwrap();
            return Err(format!(
                "{}: not R-trivial, {} and {} share a right ideal",
                e.name,
                m.describe(a),
                m.describe(b)
            ));
        }
        let idx = m.extensions();
        for i in 1..=p.len() {
            for w in idx.words() {
                let a = extensions::promotion_hat(p, w, i).unwrap();
                let b = extensions::move_to_end_and_reorder(p, w, i).unwrap();
                if a != b {
                    return Err(format!(
                        "{}: {w:?} hat-promotion at {i} is {a:?}, move-to-end gives {b:?}",
                        e.name
                    ));
                }
            }
        }
        if m.chambers().len() != idx.len() {
            return Err(format!(
                "{}: {} chambers for {} extensions",
                e.name,
                m.chambers().len(),
                idx.len()
            ));
        }
        let sd = SuppDes::new(&m).map_err(|x| err(&e.name, x))?;
        let report = check_axioms(&m, &sd);
        if !report.passed() {
            return Err(format!(
                "{}: axioms failed: {}",
                e.name,
                report.counterexample.unwrap_or_default()
            ));
        }
        let predicted = rtrivial_spectrum(&m, &sd).map_err(|x| err(&e.name, x))?;
        let forest = crate::spectral::predict_spectrum_forest(p).map_err(|x| err(&e.name, x))?;
        if predicted.normalized() != forest.normalized() {
            return Err(format!(
                "{}: monoid spectrum {:?} differs from lattice spectrum {:?}",
                e.name,
                predicted.normalized(),
                forest.normalized()
            ));
        }
        let v = RationalAssignment::random(p.len(), ASSIGNMENT_SEEDS[0]);
        let cm = chamber_matrix(&m, &v).map_err(|x| err(&e.name, x))?;
        let shifted =
            crate::spectral::shifted_promotion_matrix(p, &v).map_err(|x| err(&e.name, x))?;
        if cm != shifted {
            return Err(format!(
                "{}: chamber matrix differs from the shifted promotion generator",
                e.name
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

fn check_sampler(entries: &[CorpusEntry]) -> Result<usize, String> {
    let bound = Rational::new(BigInt::one(), BigInt::from(1_000_000));
    let mut checked = 0;
    for e in full(entries) {
        let n = e.poset.len();
        let k = step_kernel(&e.poset, &RationalAssignment::uniform_probabilities(n))
            .map_err(|x| err(&e.name, x))?;
        let t = k.matrix();
        if !t.column_sums().iter().all(One::is_one) || !t.row_sums().iter().all(One::is_one) {
            return Err(format!("{}: kernel is not doubly stochastic", e.name));
        }
        let trace = iterate_distribution(&k, 0, 200).map_err(|x| err(&e.name, x))?;
        if !trace.is_monotone() {
            return Err(format!("{}: TV to uniform increases", e.name));
        }
        if trace.first_below(&bound).is_none() {
            return Err(format!("{}: TV at step 200 is {}", e.name, trace.tv[200]));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Upper sets rendered as `{..}` strings, for reports.
pub fn render_sets(sets: &[LabelSet]) -> String {
    sets.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Poset derangements rendered one word per entry.
pub fn render_derangements(p: &Poset) -> Vec<String> {
    poset_derangements(p)
        .iter()
        .map(|w| w.iter().map(|a| a.to_string()).collect::<String>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn small_corpus_passes() {
        let entries: Vec<CorpusEntry> = corpus::bundled()
            .into_iter()
            .filter(|e| e.extension_count <= 20 || !e.is_full())
            .collect();
        for o in run(&entries) {
            assert!(o.passed(), "{}: {:?}", o.name, o.failure);
            assert!(o.checked > 0, "{} checked nothing", o.name);
        }
    }

    #[test]
    fn broken_entry_is_reported() {
        let mut entries =
            corpus::parse(r#"[{"name":"P2","n":4,"covers":[[1,3],[2,3],[2,4]]}]"#).unwrap();
        entries[0].name = "chain-4".into();
        let outcomes = run(&entries);
        assert!(outcomes.iter().all(|o| o.passed()));
        entries[0].extension_count += 1;
        let lattice = run(&entries)
            .into_iter()
            .find(|o| o.name == "spectral.lattice")
            .unwrap();
        assert!(lattice.failure.unwrap().contains("|L(P)|"));
    }
}
