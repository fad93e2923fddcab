//! Finite posets on the labels `1..=n`.
//!
//! Labels are 1-based at every public boundary. Internally the reachability
//! relation is a dense `n × n` boolean table indexed from zero.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest poset we accept; label sets are 64-bit masks.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{1..n}` stored as a bit mask (bit `i - 1` set for label `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn from_bits(bits: u64) -> Self {
        LabelSet(bits)
    }

    /// The full set `{1..n}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            LabelSet(u64::MAX)
        } else {
            LabelSet((1u64 << n) - 1)
        }
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        let mut bits = 0u64;
        for l in labels {
            debug_assert!((1..=64).contains(&l));
            bits |= 1u64 << (l - 1);
        }
        LabelSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=64).contains(&label) && self.0 & (1u64 << (label - 1)) != 0
    }

    pub fn insert(&mut self, label: usize) {
        self.0 |= 1u64 << (label - 1);
    }

    pub fn with(self, label: usize) -> Self {
        LabelSet(self.0 | (1u64 << (label - 1)))
    }

    pub fn union(self, other: LabelSet) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LabelSet) -> Self {
        LabelSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside `{1..n}`.
    pub fn complement(self, n: usize) -> Self {
        LabelSet(!self.0 & LabelSet::full(n).0)
    }

    /// Members in increasing order.
    pub fn labels(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut bits = self.0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out.push(i + 1);
            bits &= bits - 1;
        }
        out
    }

    /// Canonical sort key: size first, then lexicographic membership list.
    pub fn canonical_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.labels())
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, l) in self.labels().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Sort label sets canonically (size, then lexicographic membership).
pub fn sort_canonical(sets: &mut [LabelSet]) {
    sets.sort_by_cached_key(|s| s.canonical_key());
}

/// On-disk poset description: `{"n": 4, "covers": [[1,3],[1,4],[2,3]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

/// A finite partial order on `1..=n`, stored with its cover relation and
/// the reflexive-transitive closure.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    reach: Vec<bool>,
    up_covers: Vec<Vec<usize>>,
    down_covers: Vec<Vec<usize>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("covers", &self.covers)
            .finish()
    }
}

impl Poset {
    /// Build a poset from relations `(a, b)` meaning `a ⪯ b`. Relations
    /// implied by transitivity are dropped so `covers()` is the Hasse diagram.
    pub fn new(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge {
                n,
                max: MAX_ELEMENTS,
            });
        }
        let mut seen = HashSet::new();
        for &(a, b) in relations {
            for l in [a, b] {
                if l == 0 || l > n {
                    return Err(Error::LabelOutOfRange { label: l, n });
                }
            }
            if a == b {
                return Err(Error::Cycle(a));
            }
            if !seen.insert((a, b)) {
                return Err(Error::DuplicatePair(a, b));
            }
        }

        let mut reach = vec![false; n * n];
        for i in 0..n {
            reach[i * n + i] = true;
        }
        for &(a, b) in relations {
            reach[(a - 1) * n + (b - 1)] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if reach[i * n + k] {
                    for j in 0..n {
                        if reach[k * n + j] {
                            reach[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if reach[i * n + j] && reach[j * n + i] {
                    return Err(Error::Cycle(i + 1));
                }
            }
        }

        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !reach[a * n + b] {
                    continue;
                }
                let implied =
                    (0..n).any(|c| c != a && c != b && reach[a * n + c] && reach[c * n + b]);
                if !implied {
                    covers.push((a + 1, b + 1));
                }
            }
        }
        covers.sort_unstable();

        let mut up_covers = vec![Vec::new(); n];
        let mut down_covers = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up_covers[a - 1].push(b);
            down_covers[b - 1].push(a);
        }
        Ok(Poset {
            n,
            covers,
            reach,
            up_covers,
            down_covers,
        })
    }

    pub fn from_spec(spec: &PosetSpec) -> Result<Self> {
        let rel: Vec<(usize, usize)> = spec.covers.iter().map(|p| (p[0], p[1])).collect();
        Poset::new(spec.n, &rel)
    }

    pub fn to_spec(&self) -> PosetSpec {
        PosetSpec {
            n: self.n,
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let spec: PosetSpec = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Poset::from_spec(&spec).map_err(|e| e.to_string())
    }

    /// The `n`-element chain `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Self {
        let rel: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Poset::new(n, &rel).expect("chain is a valid poset")
    }

    pub fn antichain(n: usize) -> Self {
        Poset::new(n, &[]).expect("antichain is a valid poset")
    }

    /// Disjoint union of chains of the given lengths, labeled consecutively
    /// within chains.
    pub fn chain_union(lengths: &[usize]) -> Self {
        let mut rel = Vec::new();
        let mut base = 0;
        for &len in lengths {
            for k in 1..len {
                rel.push((base + k, base + k + 1));
            }
            base += len;
        }
        Poset::new(base, &rel).expect("chain union is a valid poset")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// `a ⪯ b` (reflexive).
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.reach[(a - 1) * self.n + (b - 1)]
    }

    /// `a ≺ b` (strict).
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Labels covering `a`.
    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.up_covers[a - 1]
    }

    /// Labels covered by `a`.
    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.down_covers[a - 1]
    }

    /// `{j : j ⪰ a}` including `a`.
    pub fn up_closure(&self, a: usize) -> LabelSet {
        LabelSet::from_labels((1..=self.n).filter(|&j| self.leq(a, j)))
    }

    /// `{j : j ⪯ a}` including `a`.
    pub fn down_closure(&self, a: usize) -> LabelSet {
        LabelSet::from_labels((1..=self.n).filter(|&j| self.leq(j, a)))
    }

    pub fn full_set(&self) -> LabelSet {
        LabelSet::full(self.n)
    }

    /// `a ⪯ b ⇒ a ≤ b`, i.e. the identity word is a linear extension.
    pub fn is_naturally_labeled(&self) -> bool {
        self.covers.iter().all(|&(a, b)| a < b)
    }

    pub fn require_natural(&self) -> Result<()> {
        match self.covers.iter().find(|&&(a, b)| a > b) {
            Some(&(a, b)) => Err(Error::NotNaturallyLabeled { lower: a, upper: b }),
            None => Ok(()),
        }
    }

    /// Every element has at most one upper cover.
    pub fn is_rooted_forest(&self) -> bool {
        self.up_covers.iter().all(|c| c.len() <= 1)
    }

    pub fn require_rooted_forest(&self) -> Result<()> {
        match self.up_covers.iter().position(|c| c.len() > 1) {
            Some(i) => Err(Error::NotRootedForest(i + 1)),
            None => Ok(()),
        }
    }

    /// Every element has at most one cover above and at most one below.
    pub fn is_union_of_chains(&self) -> bool {
        self.is_rooted_forest() && self.down_covers.iter().all(|c| c.len() <= 1)
    }

    /// Chains of a union of chains, each listed bottom to top, ordered by
    /// their minimal element. `None` when the poset is not a union of chains.
    pub fn chain_components(&self) -> Option<Vec<Vec<usize>>> {
        if !self.is_union_of_chains() {
            return None;
        }
        let mut chains = Vec::new();
        for a in 1..=self.n {
            if !self.lower_covers(a).is_empty() {
                continue;
            }
            let mut chain = vec![a];
            let mut cur = a;
            while let Some(&next) = self.upper_covers(cur).first() {
                chain.push(next);
                cur = next;
            }
            chains.push(chain);
        }
        Some(chains)
    }

    /// True for a union of chains whose chains carry consecutive labels in
    /// increasing order, e.g. `1<2<3, 4<5`.
    pub fn is_consecutive_chain_union(&self) -> bool {
        match self.chain_components() {
            None => false,
            Some(chains) => chains
                .iter()
                .all(|c| c.windows(2).all(|w| w[1] == w[0] + 1)),
        }
    }

    pub fn is_upper_set(&self, s: LabelSet) -> bool {
        s.labels()
            .into_iter()
            .all(|a| self.up_covers[a - 1].iter().all(|&b| s.contains(b)))
    }

    pub fn is_lower_set(&self, s: LabelSet) -> bool {
        s.labels()
            .into_iter()
            .all(|a| self.down_covers[a - 1].iter().all(|&b| s.contains(b)))
    }

    /// All upper sets, canonically sorted.
    pub fn upper_sets(&self) -> Vec<LabelSet> {
        // Grow from ∅ by adding an element all of whose upper covers are present.
        let mut seen: HashSet<LabelSet> = HashSet::new();
        let mut stack = vec![LabelSet::EMPTY];
        seen.insert(LabelSet::EMPTY);
        while let Some(s) = stack.pop() {
            for a in 1..=self.n {
                if s.contains(a) {
                    continue;
                }
                if self.up_covers[a - 1].iter().all(|&b| s.contains(b)) {
                    let t = s.with(a);
                    if seen.insert(t) {
                        stack.push(t);
                    }
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        sort_canonical(&mut out);
        out
    }

    /// All lower sets, canonically sorted.
    pub fn lower_sets(&self) -> Vec<LabelSet> {
        let mut out: Vec<_> = self
            .upper_sets()
            .into_iter()
            .map(|s| s.complement(self.n))
            .collect();
        sort_canonical(&mut out);
        out
    }

    /// Induced subposet on `s`, relabeled order-isomorphically onto `1..=|s|`.
    pub fn restrict(&self, s: LabelSet) -> Poset {
        let keep = s.intersection(self.full_set()).labels();
        let index: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &l)| (l, i + 1)).collect();
        let mut rel = Vec::new();
        for &a in &keep {
            for &b in &keep {
                if self.lt(a, b) {
                    rel.push((index[&a], index[&b]));
                }
            }
        }
        Poset::new(keep.len(), &rel).expect("induced subposet of a valid poset")
    }

    /// Map externally labeled elements onto `1..=n` so that the result is
    /// naturally labeled. Labels are assigned along the lexicographically
    /// smallest topological order of the input names. Returns the poset and
    /// the name carried by each new label (index `i` holds label `i + 1`).
    pub fn relabel_natural(
        elements: &[String],
        relations: &[(String, String)],
    ) -> Result<(Poset, Vec<String>)> {
        let pos: BTreeMap<&str, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        if pos.len() != elements.len() {
            return Err(Error::Relabel("duplicate element name".into()));
        }
        let m = elements.len();
        let mut indeg = vec![0usize; m];
        let mut succ = vec![Vec::new(); m];
        for (a, b) in relations {
            let ia = *pos
                .get(a.as_str())
                .ok_or_else(|| Error::Relabel(format!("unknown element {a:?}")))?;
            let ib = *pos
                .get(b.as_str())
                .ok_or_else(|| Error::Relabel(format!("unknown element {b:?}")))?;
            succ[ia].push(ib);
            indeg[ib] += 1;
        }
        let mut ready: std::collections::BTreeSet<(&str, usize)> = (0..m)
            .filter(|&i| indeg[i] == 0)
            .map(|i| (elements[i].as_str(), i))
            .collect();
        let mut order = Vec::with_capacity(m);
        while let Some(&first) = ready.iter().next() {
            ready.remove(&first);
            let i = first.1;
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert((elements[j].as_str(), j));
                }
            }
        }
        if order.len() != m {
            return Err(Error::Relabel("relations contain a cycle".into()));
        }
        let mut new_label = vec![0; m];
        for (k, &i) in order.iter().enumerate() {
            new_label[i] = k + 1;
        }
        let mut rel: Vec<(usize, usize)> = relations
            .iter()
            .map(|(a, b)| (new_label[pos[a.as_str()]], new_label[pos[b.as_str()]]))
            .collect();
        rel.sort_unstable();
        rel.dedup();
        let names = order.iter().map(|&i| elements[i].clone()).collect();
        Ok((Poset::new(m, &rel)?, names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p0() -> Poset {
        Poset::new(4, &[(1, 3), (1, 4), (2, 3)]).unwrap()
    }

    #[test]
    fn running_example_relations() {
        let p = p0();
        assert!(p.leq(1, 3) && p.leq(1, 4) && p.leq(2, 3));
        assert!(!p.comparable(2, 4));
        assert!(!p.comparable(3, 4));
        assert!(!p.comparable(1, 2));
        assert_eq!(p.covers(), &[(1, 3), (1, 4), (2, 3)]);
    }

    #[test]
    fn transitive_reduction() {
        let a = Poset::new(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let b = Poset::new(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(a, b);
        let again = Poset::from_spec(&a.to_spec()).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Poset::new(2, &[(1, 3)]).unwrap_err(),
            Error::LabelOutOfRange { label: 3, n: 2 }
        );
        assert!(matches!(
            Poset::new(3, &[(1, 2), (2, 3), (3, 1)]),
            Err(Error::Cycle(_))
        ));
        assert_eq!(
            Poset::new(2, &[(1, 2), (1, 2)]).unwrap_err(),
            Error::DuplicatePair(1, 2)
        );
    }

    #[test]
    fn single_and_empty() {
        let p = Poset::new(1, &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.upper_sets().len(), 2);
        let e = p0().restrict(LabelSet::EMPTY);
        assert_eq!(e.len(), 0);
        assert_eq!(e.upper_sets(), vec![LabelSet::EMPTY]);
    }

    #[test]
    fn natural_labeling() {
        assert!(p0().is_naturally_labeled());
        assert!(!Poset::new(2, &[(2, 1)]).unwrap().is_naturally_labeled());
        assert!(Poset::new(4, &[(1, 4), (2, 3)])
            .unwrap()
            .is_naturally_labeled());
    }

    #[test]
    fn classification() {
        assert!(!p0().is_rooted_forest());
        assert!(!p0().is_union_of_chains());
        let u = Poset::chain_union(&[3, 2]);
        assert!(u.is_rooted_forest() && u.is_union_of_chains());
        assert!(Poset::new(3, &[(1, 2)]).unwrap().is_rooted_forest());
        assert!(Poset::antichain(4).is_union_of_chains());
        assert!(u.is_consecutive_chain_union());
        let alt = Poset::new(4, &[(1, 4), (2, 3)]).unwrap();
        assert!(alt.is_union_of_chains() && !alt.is_consecutive_chain_union());
    }

    #[test]
    fn upper_sets_of_small_poset() {
        let p1 = Poset::new(3, &[(1, 2)]).unwrap();
        let got: Vec<Vec<usize>> = p1.upper_sets().into_iter().map(|s| s.labels()).collect();
        assert_eq!(
            got,
            vec![
                vec![],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
        assert_eq!(Poset::antichain(4).upper_sets().len(), 16);
    }

    #[test]
    fn upper_lower_duality() {
        let p = p0();
        let ups = p.upper_sets();
        let lows = p.lower_sets();
        assert_eq!(ups.len(), lows.len());
        for s in &ups {
            assert!(p.is_upper_set(*s));
            assert!(lows.contains(&s.complement(4)));
        }
        for s in &lows {
            assert!(p.is_lower_set(*s));
        }
    }

    #[test]
    fn restrict_relabels() {
        let q = p0().restrict(LabelSet::from_labels([2, 3, 4]));
        assert_eq!(q.len(), 3);
        assert_eq!(q.covers(), &[(1, 2)]);
        assert_eq!(p0().restrict(p0().full_set()), p0());
    }

    #[test]
    fn relabel_produces_natural_labeling() {
        let names: Vec<String> = ["top", "left", "right"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let rel = vec![
            ("left".to_string(), "top".to_string()),
            ("right".to_string(), "top".to_string()),
        ];
        let (p, order) = Poset::relabel_natural(&names, &rel).unwrap();
        assert!(p.is_naturally_labeled());
        assert_eq!(order, vec!["left", "right", "top"]);
        assert_eq!(p.covers(), &[(1, 3), (2, 3)]);
    }

    #[test]
    fn chain_components_of_union() {
        let u = Poset::chain_union(&[2, 1, 3]);
        assert_eq!(
            u.chain_components().unwrap(),
            vec![vec![1, 2], vec![3], vec![4, 5, 6]]
        );
        assert!(p0().chain_components().is_none());
    }
}
