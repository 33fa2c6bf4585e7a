//! Probability measures on finite configuration spaces, Gibbs measures
//! with multiplicative weights, and an exhaustive Markov random field check.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::invalid;
use crate::graph::AutSubgroup;
use crate::space::{Config, ConfigSpace, Pattern, Sym};
use crate::{Result, DEFAULT_CAP, Q};

/// Graphs up to this many vertices are checked on every subset.
pub const EXHAUSTIVE_MRF_VERTICES: usize = 8;
/// Largest subset size checked on bigger graphs by [`is_mrf`].
pub const DEFAULT_MRF_SUBSET_BOUND: usize = 3;

/// A probability measure: one exact weight per configuration, summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    space: ConfigSpace,
    weights: Vec<Q>,
}

impl Measure {
    /// Nonnegative weights, rescaled to sum to one.
    pub fn new(space: ConfigSpace, weights: Vec<Q>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(invalid!("{} weights given for {} configurations", weights.len(), space.len()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(invalid!("measure weights must be nonnegative"));
        }
        let total: Q = weights.iter().sum();
        if total.is_zero() {
            return Err(invalid!("measure weights must not all be zero"));
        }
        let weights = weights.into_iter().map(|w| w / &total).collect();
        Ok(Measure { space, weights })
    }

    pub fn uniform(space: &ConfigSpace) -> Result<Self> {
        space.require_nonempty()?;
        Measure::new(space.clone(), alloc::vec![Q::one(); space.len()])
    }

    pub fn space(&self) -> &ConfigSpace {
        &self.space
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn weight(&self, x: &[Sym]) -> Q {
        self.space.index_of(x).map_or_else(Q::zero, |i| self.weights[i].clone())
    }

    /// Configurations of positive weight as a space of their own.
    pub fn support(&self) -> Result<ConfigSpace> {
        Ok(self.support_weights()?.0)
    }

    /// Support together with the weights of its configurations, in order.
    pub fn support_weights(&self) -> Result<(ConfigSpace, Vec<Q>)> {
        let (configs, weights): (Vec<Config>, Vec<Q>) = self
            .space
            .configs()
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| w.is_positive())
            .map(|(x, w)| (x.clone(), w.clone()))
            .unzip();
        let support = ConfigSpace::from_configs(self.space.graph(), self.space.alphabet(), configs, DEFAULT_CAP)?;
        Ok((support, weights))
    }

    /// `(gμ)(x) = μ(g⁻¹ x)`. The space must be invariant under `g`.
    pub fn act(&self, g: &[usize]) -> Result<Measure> {
        let mut weights = alloc::vec![Q::zero(); self.space.len()];
        for (x, w) in self.space.configs().iter().zip(&self.weights) {
            let (gx, inside) = self.space.act(g, x)?;
            if !inside {
                return Err(invalid!("the space is not invariant under the automorphism"));
            }
            weights[self.space.index_of(&gx).expect("inside")] = w.clone();
        }
        Ok(Measure { space: self.space.clone(), weights })
    }

    pub fn is_invariant(&self, group: &AutSubgroup) -> Result<bool> {
        for g in group.elements() {
            if self.act(g)? != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Nearest-neighbour interaction in multiplicative form: a positive factor
/// per vertex or edge pattern, one where unset. The weight of `x` is the
/// product of the factors of its patterns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicativeInteraction {
    factors: BTreeMap<Pattern, Q>,
}

impl MultiplicativeInteraction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, p: Pattern, factor: Q) -> Result<()> {
        if !factor.is_positive() {
            return Err(invalid!("multiplicative weights must be positive"));
        }
        self.factors.insert(p, factor);
        Ok(())
    }

    pub fn get(&self, p: &Pattern) -> Q {
        self.factors.get(p).cloned().unwrap_or_else(Q::one)
    }

    pub fn factors(&self) -> &BTreeMap<Pattern, Q> {
        &self.factors
    }

    pub fn weight(&self, space: &ConfigSpace, x: &[Sym]) -> Q {
        let g = space.graph();
        let mut w = Q::one();
        for v in 0..g.len() {
            w *= self.get(&Pattern::site(v, x[v]));
        }
        for (u, v) in g.sorted_edges() {
            w *= self.get(&Pattern::bond(u, x[u], v, x[v]));
        }
        w
    }

    /// Multiplicative coboundary: `weight(x) / weight(base)` for every `x`.
    pub fn coboundary_ratios(&self, space: &ConfigSpace) -> Result<Vec<Q>> {
        space.require_nonempty()?;
        let weights: Vec<Q> = space.configs().iter().map(|x| self.weight(space, x)).collect();
        Ok(weights.iter().map(|w| w / &weights[0]).collect())
    }
}

/// The Gibbs measure of `v` on `space`, normalized exactly.
pub fn gibbs_measure(space: &ConfigSpace, v: &MultiplicativeInteraction) -> Result<Measure> {
    space.require_nonempty()?;
    let weights = space.configs().iter().map(|x| v.weight(space, x)).collect();
    Measure::new(space.clone(), weights)
}

/// A failure of the conditional independence `μ(a_A | b_B) = μ(a_A | b_∂A)`
/// with `B` the complement of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrfWitness {
    pub a_set: Vec<usize>,
    pub b_set: Vec<usize>,
    /// Symbols on `a_set`, in its order.
    pub a: Vec<Sym>,
    /// Symbols on `b_set`, in its order.
    pub b: Vec<Sym>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrfReport {
    pub holds: bool,
    /// Every subset of vertices was checked.
    pub exhaustive: bool,
    pub subsets_checked: usize,
    pub witness: Option<MrfWitness>,
}

/// Markov random field check. All subsets are tried on graphs of at most
/// [`EXHAUSTIVE_MRF_VERTICES`] vertices, otherwise those of size at most
/// [`DEFAULT_MRF_SUBSET_BOUND`].
pub fn is_mrf(mu: &Measure) -> Result<MrfReport> {
    let n = mu.space.graph().len();
    let bound = if n <= EXHAUSTIVE_MRF_VERTICES { n } else { DEFAULT_MRF_SUBSET_BOUND };
    is_mrf_bounded(mu, bound)
}

/// Check conditional independence for every nonempty subset `A` with
/// `|A| <= max_size`, conditioning on the whole complement. Conditioning
/// on any `B` between `∂A` and the complement follows from this case by
/// summing over the rest of the complement.
pub fn is_mrf_bounded(mu: &Measure, max_size: usize) -> Result<MrfReport> {
    let g = mu.space.graph();
    let n = g.len();
    let max_size = max_size.min(n);
    let positive: Vec<(&Config, &Q)> =
        mu.space.configs().iter().zip(&mu.weights).filter(|(_, w)| w.is_positive()).collect();
    let mut subsets_checked = 0;
    for size in 1..=max_size {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            subsets_checked += 1;
            if let Some(w) = check_subset(mu, &positive, &subset)? {
                return Ok(MrfReport { holds: false, exhaustive: max_size == n, subsets_checked, witness: Some(w) });
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    Ok(MrfReport { holds: true, exhaustive: max_size == n, subsets_checked, witness: None })
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn restrict_to(x: &[Sym], set: &[usize]) -> Vec<Sym> {
    set.iter().map(|&v| x[v]).collect()
}

fn check_subset(mu: &Measure, positive: &[(&Config, &Q)], a_set: &[usize]) -> Result<Option<MrfWitness>> {
    let g = mu.space.graph();
    let boundary = g.boundary(a_set)?;
    let b_set: Vec<usize> = (0..g.len()).filter(|v| !a_set.contains(v)).collect();

    // mass of each complement pattern, and of each boundary pattern
    let mut outer: BTreeMap<Vec<Sym>, Q> = BTreeMap::new();
    let mut edge: BTreeMap<Vec<Sym>, Q> = BTreeMap::new();
    // joint mass of (boundary pattern, inner pattern)
    let mut joint: BTreeMap<(Vec<Sym>, Vec<Sym>), Q> = BTreeMap::new();
    for (x, w) in positive {
        *outer.entry(restrict_to(x, &b_set)).or_insert_with(Q::zero) += *w;
        let e = restrict_to(x, &boundary);
        *edge.entry(e.clone()).or_insert_with(Q::zero) += *w;
        *joint.entry((e, restrict_to(x, a_set))).or_insert_with(Q::zero) += *w;
    }
    let mut inner_count: BTreeMap<Vec<Sym>, usize> = BTreeMap::new();
    for (e, _) in joint.keys() {
        *inner_count.entry(e.clone()).or_default() += 1;
    }
    let mut seen: BTreeMap<Vec<Sym>, usize> = BTreeMap::new();
    let witness = |x: &[Sym], a: Vec<Sym>| MrfWitness {
        a_set: a_set.to_vec(),
        b_set: b_set.clone(),
        a,
        b: restrict_to(x, &b_set),
    };
    for (x, w) in positive {
        let b = restrict_to(x, &b_set);
        let e = restrict_to(x, &boundary);
        let a = restrict_to(x, a_set);
        let lhs = *w / &outer[&b];
        let rhs = &joint[&(e.clone(), a.clone())] / &edge[&e];
        if lhs != rhs {
            return Ok(Some(witness(x, a)));
        }
        *seen.entry(b).or_default() += 1;
    }
    // every inner pattern seen with the boundary must also occur with the
    // full complement; otherwise some μ(a | b_B) is zero while μ(a | b_∂A) is not
    for (x, _) in positive {
        let b = restrict_to(x, &b_set);
        let e = restrict_to(x, &boundary);
        if seen[&b] != inner_count[&e] {
            let present: Vec<Vec<Sym>> =
                positive.iter().filter(|(y, _)| restrict_to(y, &b_set) == b).map(|(y, _)| restrict_to(y, a_set)).collect();
            let missing = joint
                .keys()
                .filter(|(f, _)| *f == e)
                .map(|(_, a)| a.clone())
                .find(|a| !present.contains(a))
                .expect("counts differ");
            return Ok(Some(witness(x, missing)));
        }
    }
    Ok(None)
}
