//! Nearest-neighbour interactions, their Gibbs cocycles, and the
//! construction of an interaction on X from one on a fold of X.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cocycle::{act_cocycle, is_markov, restrict, Cocycle};
use crate::error::invalid;
use crate::folding::{specials_equivariant, FoldCertificate};
use crate::graph::AutSubgroup;
use crate::linalg;
use crate::space::{ConfigSpace, Pattern, Sym};
use crate::{Error, Result, Q};

/// Spaces up to this size are verified on every ordered pair.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 512;

/// Rational weights on vertex and edge patterns. Missing patterns weigh zero.
#[derive(Clone, Debug, Default)]
pub struct Interaction {
    weights: BTreeMap<Pattern, Q>,
}

impl PartialEq for Interaction {
    fn eq(&self, other: &Self) -> bool {
        let keys: BTreeSet<&Pattern> = self.weights.keys().chain(other.weights.keys()).collect();
        keys.into_iter().all(|p| self.get(p) == other.get(p))
    }
}

impl Eq for Interaction {}

impl Interaction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, p: Pattern, w: Q) {
        self.weights.insert(p, w);
    }

    pub fn get(&self, p: &Pattern) -> Q {
        self.weights.get(p).cloned().unwrap_or_else(Q::zero)
    }

    /// Explicitly stored weights, sorted by pattern.
    pub fn weights(&self) -> &BTreeMap<Pattern, Q> {
        &self.weights
    }

    /// Fail unless every stored pattern is in the language of `space`.
    pub fn check_support(&self, space: &ConfigSpace) -> Result<()> {
        match self.weights.keys().find(|p| !space.pattern_allowed(p)) {
            Some(p) => Err(invalid!("interaction weight on {p:?}, which is not in the language")),
            None => Ok(()),
        }
    }

    /// Total energy: sum of weights over all vertex and edge patterns of `x`.
    pub fn energy(&self, space: &ConfigSpace, x: &[Sym]) -> Q {
        let g = space.graph();
        let mut e = Q::zero();
        for v in 0..g.len() {
            e += self.get(&Pattern::site(v, x[v]));
        }
        for (u, v) in g.sorted_edges() {
            e += self.get(&Pattern::bond(u, x[u], v, x[v]));
        }
        e
    }

    /// `gV([p]) = V([g⁻¹ p])`, i.e. the weight of `p` moves to `g p`.
    pub fn act(&self, g: &[usize]) -> Interaction {
        Interaction { weights: self.weights.iter().map(|(p, w)| (p.act(g), w.clone())).collect() }
    }

    pub fn is_invariant(&self, group: &AutSubgroup) -> bool {
        group.elements().iter().all(|g| self.act(g) == *self)
    }

    /// `(1/|G|) Σ_g gV`.
    pub fn average(&self, group: &AutSubgroup) -> Interaction {
        let mut acc: BTreeMap<Pattern, Q> = BTreeMap::new();
        for g in group.elements() {
            for (p, w) in &self.act(g).weights {
                *acc.entry(p.clone()).or_insert_with(Q::zero) += w;
            }
        }
        let order = Q::from_integer(group.order().into());
        Interaction { weights: acc.into_iter().map(|(p, w)| (p, w / &order)).collect() }
    }
}

/// Gibbs cocycle of `v`: `M(x, y) = E(y) - E(x)`.
pub fn coboundary(space: &ConfigSpace, v: &Interaction) -> Result<Cocycle> {
    space.require_nonempty()?;
    Cocycle::from_potential(space.configs().iter().map(|x| v.energy(space, x)).collect())
}

/// `E(y) - E(x)` summed only over cliques that meet the difference set.
pub fn energy_difference(space: &ConfigSpace, v: &Interaction, x: &[Sym], y: &[Sym]) -> Q {
    let g = space.graph();
    let mut e = Q::zero();
    for u in (0..g.len()).filter(|&u| x[u] != y[u]) {
        e += v.get(&Pattern::site(u, y[u])) - v.get(&Pattern::site(u, x[u]));
        for &w in g.neighbors(u) {
            // count each edge once when both ends change
            if x[w] != y[w] && w < u {
                continue;
            }
            e += v.get(&Pattern::bond(u, y[u], w, y[w])) - v.get(&Pattern::bond(u, x[u], w, x[w]));
        }
    }
    e
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessReport {
    pub pair: (usize, usize),
    pub satisfied: bool,
    pub cocycle_value: Q,
    pub energy_difference: Q,
}

/// Whether `M(x_i, x_j)` equals the energy difference of `v`.
pub fn v_good(space: &ConfigSpace, m: &Cocycle, v: &Interaction, i: usize, j: usize) -> Result<GoodnessReport> {
    m.check_space(space)?;
    if i >= space.len() || j >= space.len() {
        return Err(invalid!("configuration index out of range"));
    }
    let cocycle_value = m.value(i, j);
    let energy_difference = energy_difference(space, v, space.config(i), space.config(j));
    Ok(GoodnessReport { pair: (i, j), satisfied: cocycle_value == energy_difference, cocycle_value, energy_difference })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationReport {
    pub verified: bool,
    /// All ordered pairs were checked, not only the pairs with the base.
    pub exhaustive: bool,
    pub pairs_checked: usize,
    pub failure: Option<GoodnessReport>,
}

/// Check that every pair is `v`-good. Small spaces are checked pair by pair;
/// larger ones on the pairs `(base, x)`, which span all pairs by the
/// cocycle identity.
pub fn verify_realization(space: &ConfigSpace, m: &Cocycle, v: &Interaction) -> Result<RealizationReport> {
    space.require_nonempty()?;
    m.check_space(space)?;
    v.check_support(space)?;
    let len = space.len();
    let exhaustive = len <= EXHAUSTIVE_PAIR_LIMIT;
    let energy: Vec<Q> = space.configs().iter().map(|x| v.energy(space, x)).collect();
    // Scale everything to integers so that each pair costs one integer comparison.
    let lcm = m.potential().iter().chain(&energy).fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scale = |q: &Q| (q * Q::from_integer(lcm.clone())).to_integer();
    let pot: Vec<BigInt> = m.potential().iter().map(scale).collect();
    let en: Vec<BigInt> = energy.iter().map(scale).collect();
    let small: Option<Vec<(i128, i128)>> = pot
        .iter()
        .zip(&en)
        .map(|(p, e)| Some((p.to_i64()? as i128, e.to_i64()? as i128)))
        .collect();
    let good = |i: usize, j: usize| match &small {
        Some(s) => s[j].0 - s[i].0 == s[j].1 - s[i].1,
        None => &pot[j] - &pot[i] == &en[j] - &en[i],
    };
    let mut pairs_checked = 0;
    let firsts = if exhaustive { len } else { 1 };
    for i in 0..firsts {
        for j in 0..len {
            if i == j {
                continue;
            }
            pairs_checked += 1;
            if !good(i, j) {
                let failure = v_good(space, m, v, i, j)?;
                return Ok(RealizationReport { verified: false, exhaustive, pairs_checked, failure: Some(failure) });
            }
        }
    }
    Ok(RealizationReport { verified: true, exhaustive, pairs_checked, failure: None })
}

/// Interaction realizing `m`, found by an exact linear solve over the
/// language patterns (free weights set to zero), or `None` if `m` is not Gibbs.
pub fn solve_interaction(space: &ConfigSpace, m: &Cocycle) -> Result<Option<Interaction>> {
    space.require_nonempty()?;
    m.check_space(space)?;
    if !is_markov(space, m)? {
        return Err(invalid!("the cocycle is not Markov"));
    }
    let patterns = space.local_patterns();
    let col: BTreeMap<&Pattern, usize> = patterns.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let g = space.graph();
    let edges = g.sorted_edges();
    let cliques = |x: &[Sym]| {
        let mut out: Vec<usize> = (0..g.len()).map(|v| col[&Pattern::site(v, x[v])]).collect();
        out.extend(edges.iter().map(|&(u, v)| col[&Pattern::bond(u, x[u], v, x[v])]));
        out
    };
    let base = cliques(space.config(0));
    let rows: Vec<Vec<(usize, i64)>> = space
        .configs()
        .iter()
        .skip(1)
        .map(|x| {
            let plus = cliques(x).into_iter().map(|c| (c, 1));
            linalg::sparse_row(plus.chain(base.iter().map(|&c| (c, -1))))
        })
        .collect();
    let rhs: Vec<Q> = m.potential()[1..].to_vec();
    let Some(sol) = linalg::solve(&rows, &rhs, patterns.len()) else { return Ok(None) };
    let mut v = Interaction::new();
    for (p, w) in patterns.into_iter().zip(sol) {
        if !w.is_zero() {
            v.set(p, w);
        }
    }
    Ok(Some(v))
}

struct Builder<'a> {
    cert: &'a FoldCertificate,
    m: &'a Cocycle,
    v: &'a Interaction,
    out: BTreeMap<Pattern, Q>,
}

impl Builder<'_> {
    fn assign(&mut self, p: Pattern, w: Q) -> Result<()> {
        if self.out.insert(p.clone(), w).is_some() {
            return Err(Error::Internal(format!("pattern {p:?} assigned twice")));
        }
        Ok(())
    }

    /// `M(x, y)` for configurations given explicitly.
    fn m(&self, x: &[Sym], y: &[Sym]) -> Result<Q> {
        let space = &self.cert.space;
        let i = space.index_of(x).ok_or_else(|| Error::Internal(format!("{x:?} is not in X")))?;
        let j = space.index_of(y).ok_or_else(|| Error::Internal(format!("{y:?} is not in X")))?;
        Ok(self.m.value(i, j))
    }

    fn site(&self, v: usize, s: Sym) -> Q {
        self.v.get(&Pattern::site(v, s))
    }

    fn bond(&self, u: usize, su: Sym, v: usize, sv: Sym) -> Q {
        self.v.get(&Pattern::bond(u, su, v, sv))
    }

    fn theta(x: &[Sym], w: usize, c: Sym) -> Vec<Sym> {
        let mut y = x.to_vec();
        y[w] = c;
        y
    }

    /// `V'([a]_v) = M(θ^v_b x^v, x^v) + V([b]_v) + Σ_{w~v} V([θ^v_b x^v]_{v,w})`
    fn single_a(&self, v: usize) -> Result<Q> {
        let (a, b) = (self.cert.a, self.cert.b);
        let xv = &self.cert.special[&v];
        debug_assert_eq!(xv[v], a);
        let y = Self::theta(xv, v, b);
        let g = self.cert.space.graph();
        let mut w = self.m(&y, xv)? + self.site(v, b);
        for &u in g.neighbors(v) {
            w += self.bond(v, b, u, y[u]);
        }
        Ok(w)
    }

    fn run(mut self) -> Result<Interaction> {
        let cert = self.cert;
        let space = &cert.space;
        let g = space.graph();
        let (a, b) = (cert.a, cert.b);
        let k = space.alphabet().len() as Sym;

        for p in space.local_patterns() {
            if !p.mentions(a) {
                let w = self.v.get(&p);
                self.assign(p, w)?;
            }
        }

        let centres: Vec<usize> = cert.v1.iter().chain(&cert.v2).copied().collect();
        for &v in &centres {
            let xv = cert.special[&v].clone();
            for &w in g.neighbors(v) {
                self.assign(Pattern::bond(v, a, w, xv[w]), Q::zero())?;
            }
            let single = self.single_a(v)?;
            self.assign(Pattern::site(v, a), single)?;
            for &w in g.neighbors(v) {
                for c in (0..k).filter(|&c| c != a && c != xv[w] && space.bond_allowed(v, a, w, c)) {
                    let z = Self::theta(&xv, w, c);
                    let mut val = self.m(&xv, &z)? + self.site(w, xv[w]) - self.site(w, c);
                    for &u in g.neighbors(w).iter().filter(|&&u| u != v) {
                        val += self.bond(u, xv[u], w, xv[w]) - self.bond(u, z[u], w, c);
                    }
                    self.assign(Pattern::bond(v, a, w, c), val)?;
                }
            }
        }

        let first: BTreeSet<usize> = cert.first_part.iter().copied().collect();
        for &v in cert.v1.iter().filter(|v| first.contains(v)) {
            let xv = cert.special[&v].clone();
            for &w in g.neighbors(v).iter().filter(|&&w| space.bond_allowed(v, a, w, a)) {
                let xw = cert.special.get(&w).cloned().ok_or_else(|| Error::Internal("missing special configuration".into()))?;
                let z = Self::theta(&xv, w, a);
                let y = Self::theta(&xw, w, b);
                let mut val = self.m(&xv, &z)? + self.site(w, xv[w]) - self.m(&y, &xw)? - self.site(w, b);
                for &u in g.neighbors(w) {
                    if u != v {
                        val += self.bond(u, xv[u], w, xv[w]);
                    }
                    val -= self.bond(w, b, u, y[u]);
                }
                self.assign(Pattern::bond(v, a, w, a), val)?;
            }
        }

        let language: BTreeSet<Pattern> = space.local_patterns().into_iter().collect();
        if let Some(p) = language.iter().find(|p| !self.out.contains_key(p)) {
            return Err(Error::Internal(format!("pattern {p:?} left unassigned")));
        }
        if let Some(p) = self.out.keys().find(|p| !language.contains(p)) {
            return Err(Error::Internal(format!("assigned pattern {p:?} is outside the language")));
        }
        Ok(Interaction { weights: self.out })
    }
}

fn check_inputs(cert: &FoldCertificate, m: &Cocycle, v: &Interaction) -> Result<()> {
    m.check_space(&cert.space)?;
    v.check_support(&cert.folded)?;
    if !is_markov(&cert.space, m)? {
        return Err(invalid!("the cocycle is not Markov"));
    }
    let restricted = restrict(m, cert)?;
    let report = verify_realization(&cert.folded, &restricted, v)?;
    if !report.verified {
        return Err(invalid!("the interaction does not realize the restricted cocycle on the fold"));
    }
    Ok(())
}

/// Extend an interaction `v` realizing `m` on the fold to an interaction
/// on X, following the special configurations of the certificate.
pub fn build_interaction_via_fold(cert: &FoldCertificate, m: &Cocycle, v: &Interaction) -> Result<Interaction> {
    check_inputs(cert, m, v)?;
    Builder { cert, m, v, out: BTreeMap::new() }.run()
}

/// Invariant version: `m` must be invariant; `v` is averaged over the
/// group first, and the result is checked to be invariant.
pub fn build_invariant_interaction_via_fold(
    cert: &FoldCertificate,
    m: &Cocycle,
    v: &Interaction,
    group: &AutSubgroup,
) -> Result<Interaction> {
    let space = &cert.space;
    if !space.is_invariant(group)? {
        return Err(invalid!("the space is not invariant under the group"));
    }
    for g in group.elements() {
        if act_cocycle(space, g, m)? != *m {
            return Err(invalid!("the cocycle is not invariant under the group"));
        }
    }
    if !specials_equivariant(cert, group)? {
        return Err(invalid!("the certificate's special configurations are not equivariant; fold with the group"));
    }
    let averaged = v.average(group);
    check_inputs(cert, m, &averaged)?;
    let built = Builder { cert, m, v: &averaged, out: BTreeMap::new() }.run()?;
    if !built.is_invariant(group) {
        return Err(Error::Internal("extended interaction is not invariant".into()));
    }
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{gibbs_space, lift, markov_space};
    use crate::folding::fold;
    use crate::graph::Graph;
    use crate::space::{Alphabet, ConstraintSet};

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn hard_core(g: &Graph) -> ConfigSpace {
        let forbidden = g.sorted_edges().into_iter().map(|(u, v)| Pattern::bond(u, 1, v, 1));
        ConfigSpace::enumerate(g, &Alphabet::range(2), &ConstraintSet::new(forbidden), crate::DEFAULT_CAP).unwrap()
    }

    #[test]
    fn local_and_global_energy_differences_agree() {
        let x = hard_core(&Graph::grid(2, 3));
        let mut v = Interaction::new();
        for (i, p) in x.local_patterns().into_iter().enumerate() {
            v.set(p, q(i as i64 * 3 - 7, 5));
        }
        for a in x.configs() {
            for b in x.configs() {
                assert_eq!(energy_difference(&x, &v, a, b), v.energy(&x, b) - v.energy(&x, a));
            }
        }
    }

    #[test]
    fn solver_recovers_gibbs_cocycles() {
        let x = hard_core(&Graph::cycle(4));
        for basis_vec in gibbs_space(&x).unwrap().vectors {
            let v = solve_interaction(&x, &basis_vec).unwrap().unwrap();
            assert!(verify_realization(&x, &basis_vec, &v).unwrap().verified);
        }
    }

    #[test]
    fn extension_across_hard_core_fold() {
        let x = hard_core(&Graph::grid(2, 3));
        let cert = fold(&x, 1, 0).unwrap();
        let basis = markov_space(&x).unwrap();
        let coeffs: Vec<Q> = (0..basis.dim()).map(|i| q(i as i64 + 1, 3)).collect();
        let m = Cocycle::combination(&basis.vectors, &coeffs, x.len()).unwrap();
        let restricted = restrict(&m, &cert).unwrap();
        let v = solve_interaction(&cert.folded, &restricted).unwrap().unwrap();
        let built = build_interaction_via_fold(&cert, &m, &v).unwrap();
        let report = verify_realization(&x, &m, &built).unwrap();
        assert!(report.verified && report.exhaustive);
        // the zero cocycle lifts to itself
        let zero = lift(&Cocycle::zero(cert.folded.len()), &cert).unwrap();
        let built = build_interaction_via_fold(&cert, &zero, &Interaction::new()).unwrap();
        assert!(coboundary(&x, &built).unwrap().is_zero());
    }

    #[test]
    fn rejects_interaction_that_does_not_realize_the_restriction() {
        let x = hard_core(&Graph::path(3));
        let cert = fold(&x, 1, 0).unwrap();
        let m = Cocycle::zero(x.len());
        let mut v = Interaction::new();
        v.set(Pattern::bond(0, 0, 1, 0), q(1, 1));
        // constant edge weight is harmless on the singleton fold
        assert!(build_interaction_via_fold(&cert, &m, &v).is_ok());
        let mut bad = Interaction::new();
        bad.set(Pattern::site(0, 1), q(1, 1));
        assert!(build_interaction_via_fold(&cert, &m, &bad).is_err());
    }

    #[test]
    fn averaging_gives_invariant_interaction() {
        let x = hard_core(&Graph::cycle(4));
        let group = x.graph().automorphisms().unwrap();
        let mut v = Interaction::new();
        v.set(Pattern::site(0, 1), q(4, 1));
        v.set(Pattern::bond(0, 1, 1, 0), q(1, 2));
        let avg = v.average(&group);
        assert!(avg.is_invariant(&group));
        assert!(!v.is_invariant(&group));
        assert_eq!(avg.get(&Pattern::site(2, 1)), q(1, 1));
    }
}
