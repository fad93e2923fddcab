//! The four weighted graphs on `L(P)` and their generators.
//!
//! Each chain is a [`ChainRule`]: a family of operators on linear
//! extensions plus a rule assigning a variable to every edge. Rules are
//! registered by name in a [`ChainRegistry`] and selected at runtime.
//!
//! Generator convention: entry `(π′, π)` is the total weight of edges
//! `π → π′` for `π′ ≠ π`, and the diagonal holds minus the total weight of
//! the non-loop edges leaving `π`. Columns therefore sum to zero and the
//! stationary distribution is the right kernel vector.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::extensions::{self, ExtensionIndex, Word};
use crate::linform::{
    format_rational, kernel_vector, FormMatrix, LinearForm, Rational, RationalAssignment,
};
use crate::poset::Poset;

/// Which of the four chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainKind {
    UniformTransposition,
    Transposition,
    UniformPromotion,
    Promotion,
}

impl ChainKind {
    pub const ALL: [ChainKind; 4] = [
        ChainKind::UniformTransposition,
        ChainKind::Transposition,
        ChainKind::UniformPromotion,
        ChainKind::Promotion,
    ];

    /// Registry key.
    pub fn name(self) -> &'static str {
        match self {
            ChainKind::UniformTransposition => "uniform-transposition",
            ChainKind::Transposition => "transposition",
            ChainKind::UniformPromotion => "uniform-promotion",
            ChainKind::Promotion => "promotion",
        }
    }

    pub fn from_name(name: &str) -> Option<ChainKind> {
        ChainKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn is_uniform(self) -> bool {
        matches!(
            self,
            ChainKind::UniformTransposition | ChainKind::UniformPromotion
        )
    }
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Product `∏ f_k^{e_k}` of linear forms with signed exponents.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FactoredWeight {
    factors: Vec<(LinearForm, i32)>,
}

impl FactoredWeight {
    pub fn one() -> Self {
        FactoredWeight::default()
    }

    /// Multiply by `f^e`, merging with an equal factor already present.
    pub fn times(&mut self, f: LinearForm, e: i32) {
        if e == 0 {
            return;
        }
        match self.factors.iter_mut().find(|(g, _)| *g == f) {
            Some(entry) => entry.1 += e,
            None => self.factors.push((f, e)),
        }
        self.factors.retain(|(_, e)| *e != 0);
    }

    pub fn factors(&self) -> &[(LinearForm, i32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn evaluate(&self, v: &RationalAssignment) -> Result<Rational> {
        let mut acc = Rational::one();
        for (f, e) in &self.factors {
            let base = f.evaluate(v)?;
            if base.is_zero() {
                return Err(Error::NonPositiveAssignment);
            }
            let p = if *e > 0 {
                num_traits::pow(base, *e as usize)
            } else {
                num_traits::pow(base.recip(), (-*e) as usize)
            };
            acc *= p;
        }
        Ok(acc)
    }
}

impl fmt::Display for FactoredWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alone = self.factors.len() == 1 && self.factors[0].1 == 1;
        let render = |parts: Vec<(&LinearForm, i32)>| -> String {
            if parts.is_empty() {
                return "1".into();
            }
            let many = parts.len() > 1 || !alone;
            parts
                .into_iter()
                .map(|(g, e)| {
                    let s = g.to_string();
                    let multi = g.coeffs().iter().filter(|&&c| c != 0).count() > 1
                        || g.coeffs().iter().any(|&c| c.abs() > 1);
                    let base = if multi && (many || e > 1) {
                        format!("({s})")
                    } else {
                        s
                    };
                    if e > 1 {
                        format!("{base}^{e}")
                    } else {
                        base
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        let num: Vec<_> = self
            .factors
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(g, e)| (g, *e))
            .collect();
        let den: Vec<_> = self
            .factors
            .iter()
            .filter(|(_, e)| *e < 0)
            .map(|(g, e)| (g, -*e))
            .collect();
        let den_many = den.len() > 1 || den.iter().any(|(_, e)| *e > 1);
        let num_s = render(num);
        if den.is_empty() {
            write!(f, "{num_s}")
        } else {
            let den_s = render(den);
            if den_many {
                write!(f, "{num_s}/({den_s})")
            } else {
                write!(f, "{num_s}/{den_s}")
            }
        }
    }
}

/// A chain on `L(P)`: operators indexed `1..=count`, each edge weighted by
/// one variable.
pub trait ChainRule: Send + Sync {
    fn kind(&self) -> ChainKind;

    /// Number of operators for a poset of size `n`.
    fn operator_count(&self, n: usize) -> usize;

    /// Index table of operator `j` over the extension index.
    fn operator_table(&self, index: &ExtensionIndex, j: usize) -> Result<Vec<usize>>;

    /// Variable (1-based) weighting the edge out of `word` along operator `j`.
    fn weight_variable(&self, word: &[usize], j: usize) -> usize;

    /// Closed-form stationary weight, normalized so the identity has weight 1.
    fn stationary_weight(&self, poset: &Poset, word: &[usize]) -> FactoredWeight;
}

struct UniformTransposition;
struct Transposition;
struct UniformPromotion;
struct Promotion;

impl ChainRule for UniformTransposition {
    fn kind(&self) -> ChainKind {
        ChainKind::UniformTransposition
    }
    fn operator_count(&self, n: usize) -> usize {
        n.saturating_sub(1)
    }
    fn operator_table(&self, index: &ExtensionIndex, j: usize) -> Result<Vec<usize>> {
        index.tau_table(j)
    }
    fn weight_variable(&self, _word: &[usize], j: usize) -> usize {
        j
    }
    fn stationary_weight(&self, _poset: &Poset, _word: &[usize]) -> FactoredWeight {
        FactoredWeight::one()
    }
}

impl ChainRule for Transposition {
    fn kind(&self) -> ChainKind {
        ChainKind::Transposition
    }
    fn operator_count(&self, n: usize) -> usize {
        n.saturating_sub(1)
    }
    fn operator_table(&self, index: &ExtensionIndex, j: usize) -> Result<Vec<usize>> {
        index.tau_table(j)
    }
    fn weight_variable(&self, word: &[usize], j: usize) -> usize {
        word[j - 1]
    }
    /// `∏ x_{π_i}^{i − π_i}`.
    fn stationary_weight(&self, poset: &Poset, word: &[usize]) -> FactoredWeight {
        let n = poset.len();
        let mut w = FactoredWeight::one();
        for (pos, &a) in word.iter().enumerate() {
            let e = (pos + 1) as i32 - a as i32;
            w.times(LinearForm::var(n, a), e);
        }
        w
    }
}

impl ChainRule for UniformPromotion {
    fn kind(&self) -> ChainKind {
        ChainKind::UniformPromotion
    }
    fn operator_count(&self, n: usize) -> usize {
        n
    }
    fn operator_table(&self, index: &ExtensionIndex, j: usize) -> Result<Vec<usize>> {
        index.promotion_table(j)
    }
    fn weight_variable(&self, _word: &[usize], j: usize) -> usize {
        j
    }
    fn stationary_weight(&self, _poset: &Poset, _word: &[usize]) -> FactoredWeight {
        FactoredWeight::one()
    }
}

impl ChainRule for Promotion {
    fn kind(&self) -> ChainKind {
        ChainKind::Promotion
    }
    fn operator_count(&self, n: usize) -> usize {
        n
    }
    fn operator_table(&self, index: &ExtensionIndex, j: usize) -> Result<Vec<usize>> {
        index.promotion_table(j)
    }
    fn weight_variable(&self, word: &[usize], j: usize) -> usize {
        word[j - 1]
    }
    /// `∏_i (x_1 + ⋯ + x_i) / (x_{π_1} + ⋯ + x_{π_i})`.
    fn stationary_weight(&self, poset: &Poset, word: &[usize]) -> FactoredWeight {
        let n = poset.len();
        let mut w = FactoredWeight::one();
        let mut natural = LinearForm::zero(n);
        let mut prefix = LinearForm::zero(n);
        for (pos, &a) in word.iter().enumerate() {
            natural.add_var(pos + 1, 1);
            prefix.add_var(a, 1);
            w.times(natural.clone(), 1);
            w.times(prefix.clone(), -1);
        }
        w
    }
}

/// Chain rules by name.
#[derive(Clone, Default)]
pub struct ChainRegistry {
    rules: BTreeMap<String, Arc<dyn ChainRule>>,
}

impl ChainRegistry {
    /// Registry holding the four standard chains.
    pub fn standard() -> Self {
        let mut reg = ChainRegistry::default();
        reg.register(Arc::new(UniformTransposition));
        reg.register(Arc::new(Transposition));
        reg.register(Arc::new(UniformPromotion));
        reg.register(Arc::new(Promotion));
        reg
    }

    pub fn register(&mut self, rule: Arc<dyn ChainRule>) {
        self.rules.insert(rule.kind().name().to_string(), rule);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn ChainRule>> {
        self.rules.get(name).cloned()
    }

    pub fn rule(&self, kind: ChainKind) -> Arc<dyn ChainRule> {
        self.get(kind.name())
            .expect("standard kinds are registered")
    }

    pub fn names(&self) -> Vec<&str> {
        self.rules.keys().map(String::as_str).collect()
    }
}

/// Look up a standard rule.
pub fn rule_for(kind: ChainKind) -> Arc<dyn ChainRule> {
    ChainRegistry::standard().rule(kind)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Operator index `j` that produced the edge.
    pub operator: usize,
    pub weight: LinearForm,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// Vertices are `L(P)`; one edge per vertex and operator, loops included.
#[derive(Clone, Debug)]
pub struct WeightedDigraph {
    pub kind: ChainKind,
    pub vertices: ExtensionIndex,
    pub edges: Vec<Edge>,
}

/// Build the weighted graph of `kind` on `L(P)`.
pub fn build_graph(poset: &Poset, kind: ChainKind) -> Result<WeightedDigraph> {
    let index = ExtensionIndex::new(poset)?;
    build_graph_on(index, rule_for(kind).as_ref())
}

/// Build the graph of an arbitrary rule on an existing extension index.
pub fn build_graph_on(index: ExtensionIndex, rule: &dyn ChainRule) -> Result<WeightedDigraph> {
    let n = index.poset().len();
    let mut edges = Vec::with_capacity(index.len() * rule.operator_count(n));
    for j in 1..=rule.operator_count(n) {
        let table = rule.operator_table(&index, j)?;
        for (from, &to) in table.iter().enumerate() {
            let var = rule.weight_variable(index.word(from), j);
            edges.push(Edge {
                from,
                to,
                operator: j,
                weight: LinearForm::var(n, var),
            });
        }
    }
    edges.sort_by_key(|e| (e.from, e.operator));
    Ok(WeightedDigraph {
        kind: rule.kind(),
        vertices: index,
        edges,
    })
}

impl WeightedDigraph {
    pub fn poset(&self) -> &Poset {
        self.vertices.poset()
    }

    /// The generator: off-diagonal `(π′, π)` sums edge weights `π → π′`,
    /// diagonal is minus the non-loop outgoing weight.
    pub fn generator_matrix(&self) -> FormMatrix {
        let dim = self.vertices.len();
        let mut m = FormMatrix::zeros(dim, self.poset().len());
        for e in &self.edges {
            if e.is_loop() {
                continue;
            }
            m.get_mut(e.to, e.from).add_assign(&e.weight);
            m.get_mut(e.from, e.from).sub_assign(&e.weight);
        }
        m
    }

    /// One strongly connected component covering every vertex.
    pub fn is_strongly_connected(&self) -> bool {
        let dim = self.vertices.len();
        if dim <= 1 {
            return true;
        }
        let mut fwd = vec![Vec::new(); dim];
        let mut bwd = vec![Vec::new(); dim];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            fwd[e.from].push(e.to);
            bwd[e.to].push(e.from);
        }
        let reach_all = |adj: &[Vec<usize>]| {
            let mut seen = vec![false; dim];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        count += 1;
                        queue.push_back(v);
                    }
                }
            }
            count == dim
        };
        reach_all(&fwd) && reach_all(&bwd)
    }

    /// Graphviz rendering with vertices named by their words and edges
    /// labeled by their weight variable.
    pub fn to_dot(&self, include_loops: bool) -> String {
        let name = |k: usize| {
            self.vertices
                .word(k)
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(if self.poset().len() > 9 { "." } else { "" })
        };
        let mut out = format!("digraph \"{}\" {{\n", self.kind.name());
        for k in 0..self.vertices.len() {
            out.push_str(&format!("  v{k} [label=\"{}\"];\n", name(k)));
        }
        for e in &self.edges {
            if e.is_loop() && !include_loops {
                continue;
            }
            out.push_str(&format!(
                "  v{} -> v{} [label=\"{}\"];\n",
                e.from, e.to, e.weight
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Closed-form stationary weights for every extension, lexicographic order,
/// normalized so the identity has weight 1.
pub fn stationary_closed_form(poset: &Poset, kind: ChainKind) -> Result<Vec<FactoredWeight>> {
    let index = ExtensionIndex::new(poset)?;
    let rule = rule_for(kind);
    Ok(index
        .words()
        .iter()
        .map(|w| rule.stationary_weight(poset, w))
        .collect())
}

/// Outcome of checking a closed form against the generator's kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryCheck {
    /// `M·w = 0` exactly.
    pub annihilated: bool,
    /// `w` is a multiple of the kernel vector of `M`.
    pub proportional: bool,
}

impl StationaryCheck {
    pub fn passed(&self) -> bool {
        self.annihilated && self.proportional
    }
}

/// Evaluate generator and closed form at `v`; check `M·w = 0` and that `w`
/// spans the kernel.
pub fn check_stationary(
    poset: &Poset,
    kind: ChainKind,
    v: &RationalAssignment,
) -> Result<StationaryCheck> {
    let graph = build_graph(poset, kind)?;
    let weights: Vec<Rational> = stationary_closed_form(poset, kind)?
        .iter()
        .map(|w| w.evaluate(v))
        .collect::<Result<_>>()?;
    check_weights(&graph, &weights, v)
}

/// Check explicit weights against the generator of `graph` at `v`.
pub fn check_weights(
    graph: &WeightedDigraph,
    weights: &[Rational],
    v: &RationalAssignment,
) -> Result<StationaryCheck> {
    let m = graph.generator_matrix().evaluate(v)?;
    let annihilated = m.mul_vec(weights).iter().all(Zero::is_zero);
    let kernel = kernel_vector(&m)?;
    let proportional = match weights.iter().position(|w| !w.is_zero()) {
        None => false,
        Some(k) => {
            let scale = &weights[k] / &kernel[k];
            weights.iter().zip(&kernel).all(|(w, c)| *w == c * &scale)
        }
    };
    Ok(StationaryCheck {
        annihilated,
        proportional,
    })
}

pub fn verify_stationary(poset: &Poset, kind: ChainKind, v: &RationalAssignment) -> Result<bool> {
    Ok(check_stationary(poset, kind, v)?.passed())
}

/// `Z_P = ∏_i x_{⪯i} / (x_1 + ⋯ + x_i)`, defined for rooted forests.
pub fn partition_function(poset: &Poset, v: &RationalAssignment) -> Result<Rational> {
    poset.require_rooted_forest()?;
    let n = poset.len();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let mut z = Rational::one();
    let mut prefix = Rational::zero();
    for i in 1..=n {
        prefix += v.get(i);
        let below = LinearForm::of_set(n, poset.down_closure(i)).evaluate(v)?;
        z *= below / &prefix;
    }
    Ok(z)
}

/// Stationary probabilities of the promotion chain at `v`: `Z_P·w` on
/// rooted forests, plain normalization otherwise.
pub fn promotion_probabilities(poset: &Poset, v: &RationalAssignment) -> Result<Vec<Rational>> {
    let weights: Vec<Rational> = stationary_closed_form(poset, ChainKind::Promotion)?
        .iter()
        .map(|w| w.evaluate(v))
        .collect::<Result<_>>()?;
    if poset.is_rooted_forest() {
        let z = partition_function(poset, v)?;
        Ok(weights.into_iter().map(|w| w * &z).collect())
    } else {
        Ok(normalize(weights))
    }
}

/// Scale a positive vector to sum to one.
pub fn normalize(weights: Vec<Rational>) -> Vec<Rational> {
    let total = weights.iter().fold(Rational::zero(), |a, b| a + b);
    weights.into_iter().map(|w| w / &total).collect()
}

/// Render a rational vector as `a,b,c`.
pub fn format_vector(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

/// Apply the rule's operator `j` to a single word.
pub fn apply(poset: &Poset, kind: ChainKind, word: &[usize], j: usize) -> Result<Word> {
    match kind {
        ChainKind::UniformTransposition | ChainKind::Transposition => {
            extensions::tau(poset, word, j)
        }
        ChainKind::UniformPromotion | ChainKind::Promotion => extensions::promotion(poset, word, j),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p0() -> Poset {
        Poset::new(4, &[(1, 3), (1, 4), (2, 3)]).unwrap()
    }

    #[test]
    fn registry_lookup() {
        let reg = ChainRegistry::standard();
        assert_eq!(
            reg.names(),
            vec![
                "promotion",
                "transposition",
                "uniform-promotion",
                "uniform-transposition"
            ]
        );
        for k in ChainKind::ALL {
            assert_eq!(reg.get(k.name()).unwrap().kind(), k);
            assert_eq!(ChainKind::from_name(k.name()), Some(k));
        }
        assert!(reg.get("bogus").is_none());
    }

    #[test]
    fn single_extension_is_zero_matrix() {
        for k in ChainKind::ALL {
            let g = build_graph(&Poset::chain(4), k).unwrap();
            assert!(g.edges.iter().all(Edge::is_loop));
            let m = g.generator_matrix();
            assert_eq!(m.dim(), 1);
            assert!(m.get(0, 0).is_zero());
            assert!(g.is_strongly_connected());
        }
    }

    #[test]
    fn promotion_edge_from_1423() {
        let g = build_graph(&p0(), ChainKind::Promotion).unwrap();
        let idx = &g.vertices;
        let from = idx.index_of(&[1, 4, 2, 3]).unwrap();
        let to = idx.index_of(&[1, 2, 3, 4]).unwrap();
        let x4 = LinearForm::var(4, 4);
        assert!(g
            .edges
            .iter()
            .any(|e| e.from == from && e.to == to && e.weight == x4));
    }

    #[test]
    fn transposition_weight_rendering() {
        let rule = rule_for(ChainKind::Transposition);
        assert_eq!(
            rule.stationary_weight(&p0(), &[1, 2, 4, 3]).to_string(),
            "x3/x4"
        );
        assert_eq!(
            rule.stationary_weight(&p0(), &[1, 4, 2, 3]).to_string(),
            "x2*x3/(x4^2)"
        );
        assert_eq!(
            rule.stationary_weight(&p0(), &[1, 2, 3, 4]).to_string(),
            "1"
        );
    }

    #[test]
    fn promotion_weight_rendering() {
        let rule = rule_for(ChainKind::Promotion);
        assert_eq!(
            rule.stationary_weight(&p0(), &[1, 2, 4, 3]).to_string(),
            "(x1+x2+x3)/(x1+x2+x4)"
        );
        assert_eq!(
            rule.stationary_weight(&p0(), &[1, 4, 2, 3]).to_string(),
            "(x1+x2)*(x1+x2+x3)/((x1+x4)*(x1+x2+x4))"
        );
        assert_eq!(
            rule.stationary_weight(&p0(), &[2, 1, 3, 4]).to_string(),
            "x1/x2"
        );
        let mut single = FactoredWeight::one();
        single.times(LinearForm::total(3), 1);
        assert_eq!(single.to_string(), "x1+x2+x3");
    }

    #[test]
    fn partition_function_refuses_non_forest() {
        let v = RationalAssignment::ones(4);
        assert_eq!(
            partition_function(&p0(), &v).unwrap_err(),
            Error::NotRootedForest(1)
        );
    }

    #[test]
    fn partition_function_of_chain_is_one() {
        let v = RationalAssignment::random(5, 11);
        assert!(partition_function(&Poset::chain(5), &v).unwrap().is_one());
    }

    #[test]
    fn negative_control_perturbed_weight() {
        let v = RationalAssignment::random(4, 5);
        let g = build_graph(&p0(), ChainKind::Promotion).unwrap();
        let mut w: Vec<Rational> = stationary_closed_form(&p0(), ChainKind::Promotion)
            .unwrap()
            .iter()
            .map(|f| f.evaluate(&v).unwrap())
            .collect();
        assert!(check_weights(&g, &w, &v).unwrap().passed());
        w[2] += Rational::one();
        let c = check_weights(&g, &w, &v).unwrap();
        assert!(!c.annihilated && !c.proportional);
    }

    #[test]
    fn dot_output_has_labels() {
        let g = build_graph(&p0(), ChainKind::UniformTransposition).unwrap();
        let dot = g.to_dot(false);
        assert!(dot.contains("label=\"1234\""));
        assert!(dot.contains("label=\"x3\""));
        assert!(!g.to_dot(false).contains("v2 -> v2"));
        assert!(g.to_dot(true).contains("v2 -> v2"));
    }
}
