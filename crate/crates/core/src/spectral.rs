//! Upper-set lattices, derangement numbers and the promotion-chain spectrum
//! of rooted forests.
//!
//! For a rooted forest the shifted generator `M̄ = M + (x_1+⋯+x_n)·Id` of the
//! promotion chain has eigenvalues `x_S`, one per upper set `S`, with
//! multiplicity the lattice derangement number `d_S`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::chains::{build_graph, ChainKind};
use crate::error::{Error, Result};
use crate::extensions::{count_extensions, for_each_extension, Word};
use crate::linform::{char_poly, LinearForm, RatMatrix, RationalAssignment, Spectrum};
use crate::linform::{char_poly_integer, integer_roots};
use crate::poset::{LabelSet, Poset};

/// All upper sets of a poset ordered by inclusion, with maximal-chain counts.
#[derive(Clone, Debug)]
pub struct UpperSetLattice {
    poset: Poset,
    elements: Vec<LabelSet>,
    index: HashMap<LabelSet, usize>,
    /// `addable[k]`: elements outside `elements[k]` whose addition keeps it
    /// an upper set (the maximal elements of the complement).
    addable: Vec<Vec<usize>>,
    chain_counts: Vec<u128>,
}

impl UpperSetLattice {
    pub fn new(poset: &Poset) -> Self {
        let elements = poset.upper_sets();
        let index: HashMap<LabelSet, usize> =
            elements.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let addable: Vec<Vec<usize>> = elements
            .iter()
            .map(|&s| {
                (1..=poset.len())
                    .filter(|&a| {
                        !s.contains(a) && poset.upper_covers(a).iter().all(|&b| s.contains(b))
                    })
                    .collect()
            })
            .collect();
        // Canonical order is by size, so larger sets are finished first.
        let mut chain_counts = vec![0u128; elements.len()];
        for k in (0..elements.len()).rev() {
            chain_counts[k] = if addable[k].is_empty() {
                1
            } else {
                addable[k]
                    .iter()
                    .map(|&a| chain_counts[index[&elements[k].with(a)]])
                    .sum()
            };
        }
        UpperSetLattice {
            poset: poset.clone(),
            elements,
            index,
            addable,
            chain_counts,
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn elements(&self) -> &[LabelSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, s: LabelSet) -> Option<usize> {
        self.index.get(&s).copied()
    }

    /// Upper sets covering `s` in the lattice.
    pub fn covers_of(&self, s: LabelSet) -> Vec<LabelSet> {
        match self.index_of(s) {
            Some(k) => self.addable[k].iter().map(|&a| s.with(a)).collect(),
            None => Vec::new(),
        }
    }

    /// `f([S, 1̂])`, the number of maximal chains from `S` to the full set.
    pub fn chain_count(&self, s: LabelSet) -> Option<u128> {
        self.index_of(s).map(|k| self.chain_counts[k])
    }

    /// `μ(X, Y)`. The lattice is distributive, so `μ(X, Y) = (−1)^{|Y∖X|}`
    /// when `Y∖X` consists of minimal elements of `Y`, and 0 otherwise.
    pub fn mobius(&self, x: LabelSet, y: LabelSet) -> i64 {
        if !x.is_subset(y) || self.index_of(x).is_none() || self.index_of(y).is_none() {
            return 0;
        }
        let diff = LabelSet::from_bits(y.bits() & !x.bits());
        let boolean = diff
            .labels()
            .into_iter()
            .all(|a| self.poset.lower_covers(a).iter().all(|&b| !y.contains(b)));
        match (boolean, diff.len() % 2) {
            (false, _) => 0,
            (true, 0) => 1,
            (true, _) => -1,
        }
    }

    /// The full Möbius table by the defining recursion
    /// `μ(X,Y) = −Σ_{X⊆Z⊊Y} μ(X,Z)`. Cubic in the lattice size; an oracle
    /// for [`UpperSetLattice::mobius`].
    pub fn mobius_by_recursion(&self) -> Vec<Vec<i64>> {
        let len = self.elements.len();
        let mut mu = vec![vec![0i64; len]; len];
        for x in 0..len {
            mu[x][x] = 1;
            for y in (x + 1)..len {
                let (sx, sy) = (self.elements[x], self.elements[y]);
                if !sx.is_subset(sy) {
                    continue;
                }
                let mut acc = 0;
                for z in x..y {
                    let sz = self.elements[z];
                    if sx.is_subset(sz) && sz.is_subset(sy) && sz != sy {
                        acc += mu[x][z];
                    }
                }
                mu[x][y] = -acc;
            }
        }
        mu
    }

    /// `d_S = Σ_{T ⊇ S} μ(S,T) f([T, 1̂])` for every upper set, in lattice order.
    pub fn derangement_numbers(&self) -> Vec<(LabelSet, i128)> {
        self.elements
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let add = &self.addable[k];
                let mut d: i128 = 0;
                // Only Boolean intervals contribute: T = S ∪ A, A ⊆ addable(S).
                for mask in 0u64..(1u64 << add.len()) {
                    let mut t = s;
                    for (bit, &a) in add.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            t.insert(a);
                        }
                    }
                    let f = self.chain_counts[self.index[&t]] as i128;
                    if mask.count_ones() % 2 == 0 {
                        d += f;
                    } else {
                        d -= f;
                    }
                }
                (s, d)
            })
            .collect()
    }
}

/// `f([S,1̂])` computed independently as `|L(P restricted to the complement of S)|`.
pub fn chain_count_by_extensions(poset: &Poset, s: LabelSet) -> usize {
    count_extensions(&poset.restrict(s.complement(poset.len())))
}

/// Derangement numbers `d_S` and, for unions of chains, poset-derangement
/// counts `𝔡_S` of the lower sets.
#[derive(Clone, Debug)]
pub struct DerangementTable {
    pub d: Vec<(LabelSet, i128)>,
    pub dfrak: Option<Vec<(LabelSet, usize)>>,
}

impl DerangementTable {
    pub fn new(poset: &Poset) -> Self {
        let lattice = UpperSetLattice::new(poset);
        let dfrak = poset.is_consecutive_chain_union().then(|| {
            poset
                .lower_sets()
                .into_iter()
                .map(|s| (s, poset_derangements(&poset.restrict(s)).len()))
                .collect()
        });
        DerangementTable {
            d: lattice.derangement_numbers(),
            dfrak,
        }
    }

    pub fn total(&self) -> i128 {
        self.d.iter().map(|(_, d)| d).sum()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.d.iter().all(|(_, d)| *d >= 0)
    }

    pub fn d_of(&self, s: LabelSet) -> Option<i128> {
        self.d.iter().find(|(t, _)| *t == s).map(|(_, d)| *d)
    }
}

/// Linear extensions with `π_i ≠ i` for every `i`.
pub fn poset_derangements(poset: &Poset) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_extension(poset, |w| {
        if w.iter().enumerate().all(|(i, &a)| a != i + 1) {
            out.push(w.to_vec());
        }
    });
    out
}

/// Spectrum of `M̄ = M + (x_1+⋯+x_n)·Id` for the promotion chain of a rooted
/// forest: `x_S` with multiplicity `d_S`, zero multiplicities included.
pub fn predict_spectrum_forest(poset: &Poset) -> Result<Spectrum> {
    poset.require_rooted_forest()?;
    poset.require_natural()?;
    let n = poset.len();
    let lattice = UpperSetLattice::new(poset);
    Ok(Spectrum::new(
        lattice
            .derangement_numbers()
            .into_iter()
            .map(|(s, d)| (LinearForm::of_set(n, s), d.max(0) as usize))
            .collect(),
    ))
}

/// Spectrum of `M` itself for a union of consecutively labeled chains:
/// `0` once, and `−x_S` with multiplicity `𝔡_S` for each nonempty lower set.
pub fn predict_spectrum_chains(poset: &Poset) -> Result<Spectrum> {
    spectrum_chains_with_sign(poset, -1)
}

/// As [`predict_spectrum_chains`] with eigenvalues `sign·x_S`. Used to test
/// which sign the generator realizes.
pub fn spectrum_chains_with_sign(poset: &Poset, sign: i64) -> Result<Spectrum> {
    if !poset.is_consecutive_chain_union() {
        return Err(Error::NotConsecutiveChains);
    }
    let n = poset.len();
    let mut entries = vec![(LinearForm::zero(n), 1)];
    for s in poset.lower_sets() {
        if s.is_empty() {
            continue;
        }
        let form = LinearForm::of_set(n, s);
        let form = if sign < 0 { form.neg() } else { form };
        entries.push((form, poset_derangements(&poset.restrict(s)).len()));
    }
    Ok(Spectrum::new(entries))
}

/// Count both sides of the chain-word identity: `f([S,1̂])` for `S` the tops
/// of the chains indexed by `chains` (1-based, in order of minimal element),
/// and the number of extensions fixing at least one element of each of
/// those chains.
pub fn chain_word_identity(poset: &Poset, chains: &[usize]) -> Result<(u128, u128)> {
    if !poset.is_consecutive_chain_union() {
        return Err(Error::NotConsecutiveChains);
    }
    let comps = poset.chain_components().expect("union of chains");
    let mut selected = Vec::new();
    for &i in chains {
        if i == 0 || i > comps.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: comps.len(),
            });
        }
        selected.push(&comps[i - 1]);
    }
    let tops = LabelSet::from_labels(selected.iter().map(|c| *c.last().expect("nonempty")));
    let lattice = UpperSetLattice::new(poset);
    let lhs = lattice.chain_count(tops).expect("tops form an upper set");
    let mut rhs: u128 = 0;
    for_each_extension(poset, |w| {
        if selected.iter().all(|c| c.iter().any(|&a| w[a - 1] == a)) {
            rhs += 1;
        }
    });
    Ok((lhs, rhs))
}

/// The promotion generator shifted to `M̄`, evaluated at `v`.
pub fn shifted_promotion_matrix(poset: &Poset, v: &RationalAssignment) -> Result<RatMatrix> {
    let m = build_graph(poset, ChainKind::Promotion)?.generator_matrix();
    m.shift_diagonal(&LinearForm::total(poset.len()))
        .evaluate(v)
}

/// Brute-force check of [`predict_spectrum_forest`] at `v`.
pub fn check_forest_spectrum(poset: &Poset, v: &RationalAssignment) -> Result<bool> {
    let predicted = predict_spectrum_forest(poset)?;
    let m = shifted_promotion_matrix(poset, v)?;
    Ok(predicted.total_multiplicity() == m.rows() && char_poly(&m) == predicted.char_poly_at(v)?)
}

/// Which sign of `±x_S` the union-of-chains generator realizes at `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignFinding {
    pub minus_matches: bool,
    pub plus_matches: bool,
}

pub fn chains_sign_finding(poset: &Poset, v: &RationalAssignment) -> Result<SignFinding> {
    let m = build_graph(poset, ChainKind::Promotion)?
        .generator_matrix()
        .evaluate(v)?;
    let cp = char_poly(&m);
    let minus = spectrum_chains_with_sign(poset, -1)?.char_poly_at(v)?;
    let plus = spectrum_chains_with_sign(poset, 1)?.char_poly_at(v)?;
    Ok(SignFinding {
        minus_matches: cp == minus,
        plus_matches: cp == plus,
    })
}

/// Degree of what remains of `det(λ − D·M)` after removing every integer
/// root, `D` the common denominator. A positive value means the
/// characteristic polynomial has an irreducible factor of degree ≥ 2 over
/// the rationals (rational eigenvalues of `M` are exactly the integer roots
/// of the scaled monic polynomial divided by `D`).
pub fn nonlinear_factor_degree(m: &RatMatrix) -> usize {
    let (a, _) = m.to_integer();
    let coeffs = char_poly_integer(&a);
    let bound: BigInt = a.max_abs_row_sum();
    let (_, cofactor) = integer_roots(&coeffs, &bound);
    cofactor.len() - 1
}
