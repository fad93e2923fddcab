//! The promotion monoid generated by `G_1 … G_n`, where `G_i` moves each
//! extension `π` to `π ∂̂_i`.
//!
//! Products follow the matrix convention: `X·Y` applies `Y` first, then `X`,
//! so an element's table maps extension index `π` to the index of the
//! column where `X` sends `e_π`. With this convention the monoid is
//! R-trivial for rooted forests, and right multiplication `X ↦ X·G_i` is
//! the edge relation of the right Cayley graph.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::extensions::{ExtensionIndex, Word};
use crate::linform::{LinearForm, RatMatrix, RationalAssignment, Spectrum};
use crate::poset::{sort_canonical, LabelSet, Poset};

/// Default element budget for [`PromotionMonoid::generate`].
pub const DEFAULT_CAP: usize = 50_000;

type Table = Box<[u32]>;

/// The monoid together with its right Cayley graph.
#[derive(Clone)]
pub struct PromotionMonoid {
    extensions: ExtensionIndex,
    tables: Vec<Table>,
    lookup: HashMap<Table, usize>,
    /// BFS tree: `(parent, letter)` with `element = parent·G_letter`.
    parent: Vec<Option<(usize, usize)>>,
    /// `right[k][i − 1]` is the index of `element_k · G_i`.
    right: Vec<Vec<usize>>,
}

impl fmt::Debug for PromotionMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PromotionMonoid")
            .field("elements", &self.tables.len())
            .field("extensions", &self.extensions.len())
            .finish()
    }
}

fn compose(x: &[u32], y: &[u32]) -> Table {
    y.iter().map(|&p| x[p as usize]).collect()
}

/// Outcome of the R-triviality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RTriviality {
    pub trivial: bool,
    /// Two distinct elements generating the same right ideal.
    pub witness: Option<(usize, usize)>,
}

impl PromotionMonoid {
    /// Breadth-first closure of `{G_1, …, G_n}` under right multiplication.
    pub fn generate(poset: &Poset, cap: usize) -> Result<Self> {
        let extensions = ExtensionIndex::new(poset)?;
        let n = poset.len();
        let gens: Vec<Table> = (1..=n)
            .map(|i| {
                extensions
                    .promotion_hat_table(i)
                    .map(|t| t.into_iter().map(|k| k as u32).collect())
            })
            .collect::<Result<_>>()?;
        let identity: Table = (0..extensions.len() as u32).collect();
        let mut m = PromotionMonoid {
            extensions,
            tables: vec![identity.clone()],
            lookup: HashMap::from([(identity, 0)]),
            parent: vec![None],
            right: Vec::new(),
        };
        let mut k = 0;
        while k < m.tables.len() {
            let mut row = Vec::with_capacity(n);
            for (i, g) in gens.iter().enumerate() {
                let t = compose(&m.tables[k], g);
                let idx = match m.lookup.get(&t) {
                    Some(&idx) => idx,
                    None => {
                        if m.tables.len() >= cap {
                            return Err(Error::BudgetExceeded(cap));
                        }
                        let idx = m.tables.len();
                        m.lookup.insert(t.clone(), idx);
                        m.tables.push(t);
                        m.parent.push(Some((k, i + 1)));
                        idx
                    }
                };
                row.push(idx);
            }
            m.right.push(row);
            k += 1;
        }
        Ok(m)
    }

    pub fn extensions(&self) -> &ExtensionIndex {
        &self.extensions
    }

    pub fn poset(&self) -> &Poset {
        self.extensions.poset()
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generator(&self, i: usize) -> usize {
        self.right[0][i - 1]
    }

    pub fn table(&self, k: usize) -> &[u32] {
        &self.tables[k]
    }

    /// A word `a_1 … a_m` with `element_k = G_{a_1} ⋯ G_{a_m}`.
    pub fn word(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = k;
        while let Some((p, letter)) = self.parent[cur] {
            out.push(letter);
            cur = p;
        }
        out.reverse();
        out
    }

    /// `G_{a_1} ⋯ G_{a_m}` followed through the right Cayley graph.
    pub fn element_of_word(&self, word: &[usize]) -> Result<usize> {
        let n = self.poset().len();
        let mut k = self.identity();
        for &a in word {
            if a == 0 || a > n {
                return Err(Error::IndexOutOfRange { index: a, max: n });
            }
            k = self.right[k][a - 1];
        }
        Ok(k)
    }

    pub fn right_mul(&self, k: usize, i: usize) -> usize {
        self.right[k][i - 1]
    }

    /// `G_i · element_k`.
    pub fn left_mul(&self, k: usize, i: usize) -> usize {
        let g = &self.tables[self.generator(i)];
        self.lookup[&compose(g, &self.tables[k])]
    }

    /// `element_a · element_b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.word(b)
            .into_iter()
            .fold(a, |k, i| self.right[k][i - 1])
    }

    pub fn is_idempotent(&self, k: usize) -> bool {
        self.mul(k, k) == k
    }

    /// `(index, period)` of the power sequence: `x^{index+period} = x^index`
    /// with both minimal.
    pub fn power_cycle(&self, k: usize) -> (usize, usize) {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut cur = k;
        let mut e = 1;
        loop {
            if let Some(&first) = seen.get(&cur) {
                return (first, e - first);
            }
            seen.insert(cur, e);
            cur = self.mul(cur, k);
            e += 1;
        }
    }

    /// The idempotent power `x^ω` with `x^ω·x = x^ω`.
    pub fn omega(&self, k: usize) -> Result<usize> {
        let (index, period) = self.power_cycle(k);
        if period != 1 {
            return Err(Error::NotAperiodic { index, period });
        }
        let mut cur = k;
        for _ in 1..index {
            cur = self.mul(cur, k);
        }
        Ok(cur)
    }

    /// First element whose powers cycle with period > 1, if any.
    pub fn aperiodicity_witness(&self) -> Option<(usize, usize, usize)> {
        (0..self.len()).find_map(|k| {
            let (index, period) = self.power_cycle(k);
            (period > 1).then_some((k, index, period))
        })
    }

    /// Image of the transformation, as sorted extension indices.
    pub fn image(&self, k: usize) -> Vec<usize> {
        let mut img: Vec<usize> = self.tables[k].iter().map(|&p| p as usize).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// Longest common suffix of the image words, and its letter set.
    pub fn rfactor(&self, k: usize) -> (Word, LabelSet) {
        let img = self.image(k);
        let first = self.extensions.word(img[0]);
        let n = first.len();
        let mut len = n;
        for &p in &img[1..] {
            let w = self.extensions.word(p);
            let common = (0..n)
                .take_while(|&t| first[n - 1 - t] == w[n - 1 - t])
                .count();
            len = len.min(common);
        }
        let suffix = first[n - len..].to_vec();
        let set = LabelSet::from_labels(suffix.iter().copied());
        (suffix, set)
    }

    /// `I_x`: letters `i` with `x·G_i = x`.
    pub fn stabilizer_letters(&self, k: usize) -> LabelSet {
        LabelSet::from_labels((1..=self.poset().len()).filter(|&i| self.right[k][i - 1] == k))
    }

    /// Maximal elements in R-order: `c·G_i = c` for every `i`.
    pub fn chambers(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.right[k].iter().all(|&t| t == k))
            .collect()
    }

    /// Strongly connected components of the right Cayley graph. Two
    /// elements share a component iff they generate the same right ideal.
    pub fn r_classes(&self) -> Vec<usize> {
        tarjan(&self.right)
    }

    pub fn is_r_trivial(&self) -> RTriviality {
        let comp = self.r_classes();
        let mut first_of: HashMap<usize, usize> = HashMap::new();
        for (k, &c) in comp.iter().enumerate() {
            if let Some(&j) = first_of.get(&c) {
                return RTriviality {
                    trivial: false,
                    witness: Some((j, k)),
                };
            }
            first_of.insert(c, k);
        }
        RTriviality {
            trivial: true,
            witness: None,
        }
    }

    /// `x·M` as a sorted index set, by search in the right Cayley graph.
    pub fn right_ideal(&self, k: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([k]);
        seen[k] = true;
        let mut out = vec![k];
        while let Some(u) = queue.pop_front() {
            for &v in &self.right[u] {
                if !seen[v] {
                    seen[v] = true;
                    out.push(v);
                    queue.push_back(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Right ideals `x·M` computed as sets of products `x·y` over every `y`.
    /// Quadratic; an oracle for [`PromotionMonoid::is_r_trivial`].
    pub fn right_ideal_by_products(&self, k: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.len()).map(|y| self.mul(k, y)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Readable rendering of an element: its word and its table as words.
    pub fn describe(&self, k: usize) -> String {
        let word = self.word(k);
        let name = if word.is_empty() {
            "1".to_string()
        } else {
            word.iter()
                .map(|a| format!("G{a}"))
                .collect::<Vec<_>>()
                .join("")
        };
        let map: Vec<String> = self.tables[k]
            .iter()
            .enumerate()
            .map(|(p, &q)| {
                format!(
                    "{}->{}",
                    join(self.extensions.word(p)),
                    join(self.extensions.word(q as usize))
                )
            })
            .collect();
        format!("{name} [{}]", map.join(" "))
    }
}

fn join(w: &[usize]) -> String {
    w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("")
}

/// Iterative Tarjan; returns a component id per vertex.
fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < adj[v].len() {
                let w = adj[v][*edge];
                *edge += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// The semilattice `L^M` and the maps `supp`, `des` of an R-trivial monoid.
#[derive(Clone, Debug)]
pub struct SuppDes {
    /// `{Rfactor(e) : e idempotent}`, canonically sorted.
    pub lattice: Vec<LabelSet>,
    pub supp: Vec<LabelSet>,
    pub des: Vec<LabelSet>,
    pub idempotent: Vec<bool>,
    pub omega: Vec<usize>,
}

impl SuppDes {
    pub fn new(m: &PromotionMonoid) -> Result<Self> {
        if !m.is_r_trivial().trivial {
            return Err(Error::NotRTrivial);
        }
        let len = m.len();
        let omega: Vec<usize> = (0..len).map(|k| m.omega(k)).collect::<Result<_>>()?;
        let idempotent: Vec<bool> = (0..len).map(|k| omega[k] == k).collect();
        let des: Vec<LabelSet> = (0..len).map(|k| m.stabilizer_letters(k)).collect();
        let supp: Vec<LabelSet> = (0..len).map(|k| m.rfactor(omega[k]).1).collect();
        let mut lattice: Vec<LabelSet> = (0..len)
            .filter(|&k| idempotent[k])
            .map(|k| m.rfactor(k).1)
            .collect();
        sort_canonical(&mut lattice);
        lattice.dedup();
        Ok(SuppDes {
            lattice,
            supp,
            des,
            idempotent,
            omega,
        })
    }

    /// Least member of `L^M` containing both arguments.
    pub fn join(&self, a: LabelSet, b: LabelSet) -> Result<LabelSet> {
        let u = a.union(b);
        let above: Vec<LabelSet> = self
            .lattice
            .iter()
            .copied()
            .filter(|s| u.is_subset(*s))
            .collect();
        above
            .iter()
            .copied()
            .find(|s| above.iter().all(|t| s.is_subset(*t)))
            .ok_or_else(|| Error::NoJoin(a.to_string(), b.to_string()))
    }

    /// Möbius function of `L^M` ordered by inclusion.
    pub fn mobius(&self) -> Vec<Vec<i64>> {
        let l = &self.lattice;
        let len = l.len();
        let mut mu = vec![vec![0i64; len]; len];
        for x in 0..len {
            mu[x][x] = 1;
            for y in (x + 1)..len {
                if !l[x].is_subset(l[y]) {
                    continue;
                }
                let acc: i64 = (x..y)
                    .filter(|&z| l[x].is_subset(l[z]) && l[z].is_subset(l[y]) && l[z] != l[y])
                    .map(|z| mu[x][z])
                    .sum();
                mu[x][y] = -acc;
            }
        }
        mu
    }
}

/// Which axioms of a weakly ordered monoid held, and how many pairs were
/// examined.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    /// `supp(xy) = supp(x) ∨ supp(y)` and `supp` onto `L^M`.
    pub morphism: bool,
    /// `xy ≤_R x` implies `supp(y) ⪯ des(x)`.
    pub descent_bound: bool,
    /// `supp(y) ⪯ des(x)` implies `xy = x`.
    pub absorption: bool,
    /// Idempotents have `supp = des = Rfactor`.
    pub idempotents: bool,
    /// Every member of `L^M` is an upper set.
    pub upper_sets: bool,
    pub pairs_checked: usize,
    pub exhaustive: bool,
    pub counterexample: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.morphism
            && self.descent_bound
            && self.absorption
            && self.idempotents
            && self.upper_sets
    }
}

/// Pairs beyond this many elements squared are sampled rather than
/// enumerated in [`check_axioms`].
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 4_000;

/// Check the three axioms of a weakly ordered monoid. The morphism axiom
/// is checked against every generator, which implies it for all pairs by
/// induction on word length; the other two on all pairs when the monoid
/// has at most [`EXHAUSTIVE_AXIOM_LIMIT`] elements, else on a deterministic
/// stride through the pairs.
pub fn check_axioms(m: &PromotionMonoid, sd: &SuppDes) -> AxiomReport {
    let len = m.len();
    let n = m.poset().len();
    let mut report = AxiomReport {
        morphism: true,
        descent_bound: true,
        absorption: true,
        idempotents: true,
        upper_sets: true,
        ..Default::default()
    };
    let fail = |flag: &mut bool, msg: String, slot: &mut Option<String>| {
        *flag = false;
        if slot.is_none() {
            *slot = Some(msg);
        }
    };

    let mut image: Vec<LabelSet> = sd.supp.clone();
    sort_canonical(&mut image);
    image.dedup();
    if image != sd.lattice {
        fail(
            &mut report.morphism,
            "supp is not onto L^M".into(),
            &mut report.counterexample,
        );
    }
    for s in &sd.lattice {
        if !m.poset().is_upper_set(*s) {
            fail(
                &mut report.upper_sets,
                format!("{s} is not an upper set"),
                &mut report.counterexample,
            );
        }
    }
    for k in 0..len {
        if sd.idempotent[k] {
            let rf = m.rfactor(k).1;
            if sd.supp[k] != rf || sd.des[k] != rf {
                fail(
                    &mut report.idempotents,
                    format!(
                        "idempotent {} has supp {}, des {}, Rfactor {rf}",
                        m.describe(k),
                        sd.supp[k],
                        sd.des[k]
                    ),
                    &mut report.counterexample,
                );
            }
        }
        for i in 1..=n {
            let xy = m.right_mul(k, i);
            let g = m.generator(i);
            let ok = sd
                .join(sd.supp[k], sd.supp[g])
                .map(|j| j == sd.supp[xy])
                .unwrap_or(false);
            if !ok {
                fail(
                    &mut report.morphism,
                    format!(
                        "supp({}·G{i}) = {} differs from the join",
                        m.describe(k),
                        sd.supp[xy]
                    ),
                    &mut report.counterexample,
                );
            }
        }
    }

    let total = len * len;
    let stride = if len <= EXHAUSTIVE_AXIOM_LIMIT {
        1
    } else {
        total / (EXHAUSTIVE_AXIOM_LIMIT * EXHAUSTIVE_AXIOM_LIMIT) + 1
    };
    report.exhaustive = stride == 1;
    let words: Vec<Vec<usize>> = (0..len).map(|k| m.word(k)).collect();
    let comp = m.r_classes();
    let mut pair = 0;
    while pair < total {
        let (x, y) = (pair / len, pair % len);
        pair += stride;
        report.pairs_checked += 1;
        let xy = words[y].iter().fold(x, |k, &i| m.right_mul(k, i));
        let bounded = sd.supp[y].is_subset(sd.des[x]);
        // xy always lies in xM, so xy ≤_R x means the two share an R-class.
        let below = comp[xy] == comp[x];
        if below && !bounded {
            fail(
                &mut report.descent_bound,
                format!(
                    "x={} y={}: xy ≤_R x but supp(y) ⋠ des(x)",
                    m.describe(x),
                    m.describe(y)
                ),
                &mut report.counterexample,
            );
        }
        if bounded && xy != x {
            fail(
                &mut report.absorption,
                format!(
                    "x={} y={}: supp(y) ⪯ des(x) but xy ≠ x",
                    m.describe(x),
                    m.describe(y)
                ),
                &mut report.counterexample,
            );
        }
    }
    report
}

/// Predicted spectrum of the chamber walk with `w_{G_i} = x_i`:
/// `λ_X = Σ_{supp(G_i) ⪯ X} x_i` with multiplicity `d_X = Σ_{Y ⪰ X} μ(X,Y) c_Y`.
pub fn rtrivial_spectrum(m: &PromotionMonoid, sd: &SuppDes) -> Result<Spectrum> {
    let n = m.poset().len();
    let chambers = m.chambers();
    let mut is_chamber = vec![false; m.len()];
    for &c in &chambers {
        is_chamber[c] = true;
    }
    let counts: Vec<usize> = sd
        .lattice
        .iter()
        .map(|&x| {
            let rep = (0..m.len())
                .find(|&k| sd.idempotent[k] && sd.supp[k] == x)
                .expect("every member of L^M is an idempotent's support");
            m.right_ideal(rep)
                .into_iter()
                .filter(|&k| is_chamber[k])
                .count()
        })
        .collect();
    let mu = sd.mobius();
    let len = sd.lattice.len();
    let mut entries = Vec::with_capacity(len);
    for x in 0..len {
        let mut form = LinearForm::zero(n);
        for i in 1..=n {
            if sd.supp[m.generator(i)].is_subset(sd.lattice[x]) {
                form.add_var(i, 1);
            }
        }
        let d: i64 = (x..len).map(|y| mu[x][y] * counts[y] as i64).sum();
        if d < 0 {
            return Err(Error::NotRTrivial);
        }
        entries.push((form, d as usize));
    }
    Ok(Spectrum::new(entries))
}

/// The chamber walk `(d, c) ↦ Σ_{G_i·c = d} x_i`, rows and columns indexed
/// by the extension each chamber maps everything to.
pub fn chamber_matrix(m: &PromotionMonoid, v: &RationalAssignment) -> Result<RatMatrix> {
    let n = m.poset().len();
    let size = m.extensions().len();
    let mut out = RatMatrix::zeros(size, size);
    let target = |k: usize| m.table(k)[0] as usize;
    for c in m.chambers() {
        for i in 1..=n {
            let d = m.left_mul(c, i);
            let (row, col) = (target(d), target(c));
            let cur = out.get(row, col).clone();
            out.set(row, col, cur + v.get(i));
        }
    }
    debug_assert!(out
        .column_sums()
        .iter()
        .all(|s| *s == v.sum() || s.is_zero()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> Poset {
        Poset::new(3, &[(1, 2)]).unwrap()
    }

    fn p2() -> Poset {
        Poset::new(3, &[(1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn p1_has_six_elements_and_expected_idempotents() {
        let m = PromotionMonoid::generate(&p1(), DEFAULT_CAP).unwrap();
        assert_eq!(m.len(), 6);
        let idem: Vec<usize> = [vec![], vec![2], vec![3], vec![2, 3], vec![1, 1]]
            .iter()
            .map(|w| m.element_of_word(w).unwrap())
            .collect();
        for &k in &idem {
            assert!(m.is_idempotent(k), "{}", m.describe(k));
        }
        let g1 = m.generator(1);
        assert!(!m.is_idempotent(g1));
        assert_eq!(m.omega(g1).unwrap(), m.element_of_word(&[1, 1]).unwrap());
        let mut all = idem.clone();
        all.push(g1);
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn p1_supp_des() {
        let m = PromotionMonoid::generate(&p1(), DEFAULT_CAP).unwrap();
        assert!(m.is_r_trivial().trivial);
        let sd = SuppDes::new(&m).unwrap();
        let names: Vec<String> = sd.lattice.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, vec!["{}", "{2}", "{1,2,3}"]);
        let g1 = m.generator(1);
        assert_eq!(sd.supp[g1].to_string(), "{1,2,3}");
        assert_eq!(sd.des[g1].to_string(), "{}");
        assert_eq!(sd.supp[m.identity()], LabelSet::EMPTY);
        assert!(check_axioms(&m, &sd).passed());
        let spec = rtrivial_spectrum(&m, &sd).unwrap();
        let rendered: Vec<String> = spec
            .entries
            .iter()
            .map(|(f, d)| format!("{f}:{d}"))
            .collect();
        assert_eq!(rendered, vec!["0:1", "x2:1", "x1+x2+x3:1"]);
    }

    #[test]
    fn p2_is_not_r_trivial() {
        let m = PromotionMonoid::generate(&p2(), DEFAULT_CAP).unwrap();
        let r = m.is_r_trivial();
        assert!(!r.trivial);
        let (a, b) = r.witness.unwrap();
        assert_eq!(m.right_ideal_by_products(a), m.right_ideal_by_products(b));
        let tables: Vec<&[u32]> = vec![m.table(a), m.table(b)];
        assert!(tables.contains(&&[0u32, 1][..]));
        assert!(tables.contains(&&[1u32, 0][..]));
        assert_eq!(SuppDes::new(&m).unwrap_err(), Error::NotRTrivial);
    }

    #[test]
    fn scc_agrees_with_ideal_oracle() {
        for p in [
            p1(),
            p2(),
            Poset::new(4, &[(1, 3), (1, 4), (2, 3)]).unwrap(),
        ] {
            let m = PromotionMonoid::generate(&p, DEFAULT_CAP).unwrap();
            let comp = m.r_classes();
            let ideals: Vec<Vec<usize>> =
                (0..m.len()).map(|k| m.right_ideal_by_products(k)).collect();
            for a in 0..m.len() {
                assert_eq!(ideals[a], m.right_ideal(a));
                for b in 0..m.len() {
                    assert_eq!(comp[a] == comp[b], ideals[a] == ideals[b]);
                }
            }
        }
    }

    #[test]
    fn chain_gives_trivial_monoid() {
        let m = PromotionMonoid::generate(&Poset::chain(4), DEFAULT_CAP).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.is_r_trivial().trivial);
        let sd = SuppDes::new(&m).unwrap();
        let s = rtrivial_spectrum(&m, &sd).unwrap();
        assert_eq!(s.entries, vec![(LinearForm::total(4), 1)]);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            PromotionMonoid::generate(&p1(), 3).unwrap_err(),
            Error::BudgetExceeded(3)
        );
    }

    #[test]
    fn witness_words_reproduce_tables() {
        let m = PromotionMonoid::generate(&p1(), DEFAULT_CAP).unwrap();
        for k in 0..m.len() {
            let mut t: Vec<u32> = (0..m.extensions().len() as u32).collect();
            // G_{a_1} ⋯ G_{a_m} applies G_{a_m} first.
            for &a in m.word(k).iter().rev() {
                let g = m.table(m.generator(a));
                t = t.iter().map(|&p| g[p as usize]).collect();
            }
            assert_eq!(&t[..], m.table(k));
        }
    }

    #[test]
    fn p0_is_not_aperiodic() {
        let p0 = Poset::new(4, &[(1, 3), (1, 4), (2, 3)]).unwrap();
        let m = PromotionMonoid::generate(&p0, DEFAULT_CAP).unwrap();
        let (k, _, period) = m.aperiodicity_witness().unwrap();
        assert!(period > 1);
        assert!(matches!(m.omega(k), Err(Error::NotAperiodic { .. })));
    }
}
