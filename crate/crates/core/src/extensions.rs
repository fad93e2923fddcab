//! Linear extensions and the operators `τ_i`, `∂_j`, `∂̂_i` acting on them.
//!
//! Words are in one-line notation with 1-based labels and operators act on
//! the right: `π τ_i`, `π ∂_j`. Operator indices are 1-based as well.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poset::Poset;

/// A linear extension in one-line notation `π_1 … π_n`.
pub type Word = Vec<usize>;

/// Visit every linear extension of `poset` in lexicographic order.
///
/// Depth-first removal of minimal elements, smallest label first, so the
/// words come out sorted without a separate pass.
pub fn for_each_extension<F: FnMut(&[usize])>(poset: &Poset, mut visit: F) {
    let n = poset.len();
    let mut pending: Vec<usize> = (1..=n).map(|a| poset.lower_covers(a).len()).collect();
    let mut placed = vec![false; n];
    let mut word = Vec::with_capacity(n);
    fn rec<F: FnMut(&[usize])>(
        poset: &Poset,
        pending: &mut [usize],
        placed: &mut [bool],
        word: &mut Vec<usize>,
        visit: &mut F,
    ) {
        let n = poset.len();
        if word.len() == n {
            visit(word);
            return;
        }
        for a in 1..=n {
            if placed[a - 1] || pending[a - 1] != 0 {
                continue;
            }
            placed[a - 1] = true;
            for &b in poset.upper_covers(a) {
                pending[b - 1] -= 1;
            }
            word.push(a);
            rec(poset, pending, placed, word, visit);
            word.pop();
            for &b in poset.upper_covers(a) {
                pending[b - 1] += 1;
            }
            placed[a - 1] = false;
        }
    }
    rec(poset, &mut pending, &mut placed, &mut word, &mut visit);
}

/// Number of linear extensions, by enumeration.
pub fn count_extensions(poset: &Poset) -> usize {
    let mut count = 0;
    for_each_extension(poset, |_| count += 1);
    count
}

/// `true` iff `word` is a permutation of `1..=n` respecting the order.
pub fn is_extension(poset: &Poset, word: &[usize]) -> bool {
    let n = poset.len();
    if word.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &a) in word.iter().enumerate() {
        if a == 0 || a > n || pos[a - 1] != usize::MAX {
            return false;
        }
        pos[a - 1] = k;
    }
    poset.covers().iter().all(|&(a, b)| pos[a - 1] < pos[b - 1])
}

/// `π τ_i`: swap positions `i` and `i+1` when their letters are incomparable.
pub fn tau(poset: &Poset, word: &[usize], i: usize) -> Result<Word> {
    let n = poset.len();
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: n.saturating_sub(1),
        });
    }
    let mut out = word.to_vec();
    tau_in_place(poset, &mut out, i);
    Ok(out)
}

fn tau_in_place(poset: &Poset, word: &mut [usize], i: usize) {
    let (a, b) = (word[i - 1], word[i]);
    if !poset.comparable(a, b) {
        word.swap(i - 1, i);
    }
}

/// Extended promotion `π ∂_j = π τ_j τ_{j+1} ⋯ τ_{n-1}`.
pub fn promotion(poset: &Poset, word: &[usize], j: usize) -> Result<Word> {
    let n = poset.len();
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    let mut out = word.to_vec();
    for i in j..n {
        tau_in_place(poset, &mut out, i);
    }
    Ok(out)
}

/// Extended promotion computed by sliding labels through the Hasse diagram.
///
/// Element `k` carries the label `π⁻¹(k)`. The label `j` is removed, the
/// vacated spot is refilled from the upper cover with the smallest label,
/// repeatedly, until a local maximum takes the label `n + 1`; then every
/// label above `j` drops by one. Kept independent of [`promotion`] so the
/// two can be checked against each other.
pub fn promotion_by_sliding(poset: &Poset, word: &[usize], j: usize) -> Result<Word> {
    let n = poset.len();
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    // label[k-1] = position of element k (1-based).
    let mut label = vec![0usize; n];
    for (pos, &k) in word.iter().enumerate() {
        label[k - 1] = pos + 1;
    }
    let mut spot = word[j - 1];
    loop {
        let next = poset
            .upper_covers(spot)
            .iter()
            .copied()
            .min_by_key(|&c| label[c - 1]);
        match next {
            Some(c) => {
                label[spot - 1] = label[c - 1];
                spot = c;
            }
            None => {
                label[spot - 1] = n + 1;
                break;
            }
        }
    }
    for l in label.iter_mut() {
        if *l > j {
            *l -= 1;
        }
    }
    let mut out = vec![0; n];
    for (k, &l) in label.iter().enumerate() {
        out[l - 1] = k + 1;
    }
    Ok(out)
}

/// `π ∂̂_i = π ∂_{π⁻¹(i)}`: promotion seeded at the position of letter `i`.
pub fn promotion_hat(poset: &Poset, word: &[usize], i: usize) -> Result<Word> {
    let n = poset.len();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let pos = word
        .iter()
        .position(|&a| a == i)
        .expect("word is a permutation");
    promotion(poset, word, pos + 1)
}

/// On a rooted forest, `π ∂̂_i` is `π` with letter `i` moved to the end and
/// the letters `⪰ i` (a chain) rewritten in increasing order into the
/// positions they occupy.
pub fn move_to_end_and_reorder(poset: &Poset, word: &[usize], i: usize) -> Result<Word> {
    poset.require_rooted_forest()?;
    let n = poset.len();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let mut out: Word = word.iter().copied().filter(|&a| a != i).collect();
    out.push(i);
    let above = poset.up_closure(i);
    let slots: Vec<usize> = (0..n).filter(|&k| above.contains(out[k])).collect();
    let mut letters: Vec<usize> = slots.iter().map(|&k| out[k]).collect();
    // `above` is a chain; sort along the order.
    letters.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if poset.leq(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    for (k, l) in slots.into_iter().zip(letters) {
        out[k] = l;
    }
    Ok(out)
}

/// The bijective operators whose order can be measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Tau(usize),
    Promotion(usize),
}

/// All of `L(P)` in lexicographic order, with a reverse lookup.
#[derive(Debug, Clone)]
pub struct ExtensionIndex {
    poset: Poset,
    words: Vec<Word>,
    lookup: HashMap<Word, usize>,
}

impl ExtensionIndex {
    /// Enumerate `L(P)`. The poset must be naturally labeled.
    pub fn new(poset: &Poset) -> Result<Self> {
        poset.require_natural()?;
        let mut words = Vec::new();
        for_each_extension(poset, |w| words.push(w.to_vec()));
        let lookup = words
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), k))
            .collect();
        Ok(ExtensionIndex {
            poset: poset.clone(),
            words,
            lookup,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, k: usize) -> &[usize] {
        &self.words[k]
    }

    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        self.lookup.get(word).copied()
    }

    fn index_or_err(&self, word: Word) -> Result<usize> {
        self.lookup
            .get(&word)
            .copied()
            .ok_or(Error::NotAnExtension(word))
    }

    /// Index-to-index table of `π ↦ π τ_i`.
    pub fn tau_table(&self, i: usize) -> Result<Vec<usize>> {
        self.words
            .iter()
            .map(|w| self.index_or_err(tau(&self.poset, w, i)?))
            .collect()
    }

    /// Index-to-index table of `π ↦ π ∂_j`.
    pub fn promotion_table(&self, j: usize) -> Result<Vec<usize>> {
        self.words
            .iter()
            .map(|w| self.index_or_err(promotion(&self.poset, w, j)?))
            .collect()
    }

    /// Index-to-index table of `π ↦ π ∂̂_i`.
    pub fn promotion_hat_table(&self, i: usize) -> Result<Vec<usize>> {
        self.words
            .iter()
            .map(|w| self.index_or_err(promotion_hat(&self.poset, w, i)?))
            .collect()
    }

    pub fn table(&self, op: Operator) -> Result<Vec<usize>> {
        match op {
            Operator::Tau(i) => self.tau_table(i),
            Operator::Promotion(j) => self.promotion_table(j),
        }
    }

    /// Least `k ≥ 1` with `op^k = id` on `L(P)`.
    pub fn operator_order(&self, op: Operator) -> Result<u128> {
        Ok(permutation_order(&self.table(op)?))
    }
}

/// Order of a permutation given as an index table (lcm of cycle lengths).
pub fn permutation_order(table: &[usize]) -> u128 {
    let mut seen = vec![false; table.len()];
    let mut order: u128 = 1;
    for start in 0..table.len() {
        if seen[start] {
            continue;
        }
        let mut len: u128 = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = table[k];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

/// Compose index tables left to right: first `a`, then `b`.
pub fn then(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&k| b[k]).collect()
}

/// Promotion indices `a_1 … a_m` with `τ_j = ∂_{a_1} ⋯ ∂_{a_m}` on `L(P)`
/// for any poset of size `n`, from `τ_{n−1} = ∂_{n−1}` and
/// `τ_j = ∂_j τ_{n−1} ⋯ τ_{j+1}`.
pub fn tau_as_promotions(n: usize, j: usize) -> Vec<usize> {
    assert!(j >= 1 && j < n, "tau index out of range");
    let mut out = vec![j];
    for k in ((j + 1)..n).rev() {
        out.extend(tau_as_promotions(n, k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p0() -> Poset {
        Poset::new(4, &[(1, 3), (1, 4), (2, 3)]).unwrap()
    }

    fn w(s: &str) -> Word {
        s.chars()
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect()
    }

    #[test]
    fn running_example_extensions() {
        let idx = ExtensionIndex::new(&p0()).unwrap();
        let got: Vec<Word> = idx.words().to_vec();
        let want: Vec<Word> = ["1234", "1243", "1423", "2134", "2143"]
            .iter()
            .map(|s| w(s))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn antichain_and_chain() {
        assert_eq!(ExtensionIndex::new(&Poset::antichain(3)).unwrap().len(), 6);
        let c = ExtensionIndex::new(&Poset::chain(5)).unwrap();
        assert_eq!(c.words(), &[vec![1, 2, 3, 4, 5]]);
    }

    #[test]
    fn enumeration_rejects_unnatural_labels() {
        let p = Poset::new(2, &[(2, 1)]).unwrap();
        assert!(matches!(
            ExtensionIndex::new(&p),
            Err(Error::NotNaturallyLabeled { .. })
        ));
    }

    #[test]
    fn tau_from_promotions() {
        assert_eq!(tau_as_promotions(4, 3), vec![3]);
        assert_eq!(tau_as_promotions(4, 2), vec![2, 3]);
        let idx = ExtensionIndex::new(&p0()).unwrap();
        for j in 1..4 {
            let mut t: Vec<usize> = (0..idx.len()).collect();
            for a in tau_as_promotions(4, j) {
                t = then(&t, &idx.promotion_table(a).unwrap());
            }
            assert_eq!(t, idx.tau_table(j).unwrap());
        }
    }

    #[test]
    fn tau_examples() {
        let p = p0();
        assert_eq!(tau(&p, &w("1234"), 1).unwrap(), w("2134"));
        assert_eq!(tau(&p, &w("1243"), 2).unwrap(), w("1423"));
        assert_eq!(tau(&p, &w("1234"), 2).unwrap(), w("1234"));
        assert!(tau(&p, &w("1234"), 4).is_err());
        assert!(tau(&p, &w("1234"), 0).is_err());
    }

    #[test]
    fn promotion_examples() {
        let p = p0();
        for word in ExtensionIndex::new(&p).unwrap().words() {
            assert_eq!(&promotion(&p, word, 4).unwrap(), word);
        }
        assert_eq!(promotion(&p, &w("1243"), 1).unwrap(), w("2134"));
        assert_eq!(promotion(&p, &w("1423"), 1).unwrap(), w("1234"));
        assert!(promotion(&p, &w("1423"), 5).is_err());
        let c = Poset::chain(4);
        for j in 1..=4 {
            assert_eq!(promotion(&c, &w("1234"), j).unwrap(), w("1234"));
        }
    }

    #[test]
    fn sliding_matches_tau_product_on_running_example() {
        let p = p0();
        for word in ExtensionIndex::new(&p).unwrap().words() {
            for j in 1..=4 {
                assert_eq!(
                    promotion_by_sliding(&p, word, j).unwrap(),
                    promotion(&p, word, j).unwrap()
                );
            }
        }
    }

    #[test]
    fn promotion_hat_examples() {
        let p = Poset::chain_union(&[3, 2]);
        assert_eq!(promotion_hat(&p, &w("41235"), 1).unwrap(), w("41253"));
        assert_eq!(
            move_to_end_and_reorder(&p, &w("41235"), 1).unwrap(),
            w("41253")
        );
        let a = Poset::antichain(3);
        assert_eq!(promotion_hat(&a, &w("213"), 2).unwrap(), w("132"));
        for word in ExtensionIndex::new(&p0()).unwrap().words() {
            let last = *word.last().unwrap();
            assert_eq!(&promotion_hat(&p0(), word, last).unwrap(), word);
        }
    }

    #[test]
    fn operator_orders() {
        let idx = ExtensionIndex::new(&p0()).unwrap();
        for i in 1..4 {
            let o = idx.operator_order(Operator::Tau(i)).unwrap();
            assert!(o == 1 || o == 2);
        }
        assert_eq!(idx.operator_order(Operator::Promotion(4)).unwrap(), 1);
        // Oracle: iterate ∂₁ until every extension returns.
        let t = idx.promotion_table(1).unwrap();
        let mut cur: Vec<usize> = (0..idx.len()).collect();
        let mut k = 0u128;
        loop {
            cur = then(&cur, &t);
            k += 1;
            if cur.iter().enumerate().all(|(i, &j)| i == j) {
                break;
            }
        }
        assert_eq!(idx.operator_order(Operator::Promotion(1)).unwrap(), k);
    }
}
