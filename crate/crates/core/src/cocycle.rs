//! Exact Markov and Gibbs cocycle spaces.
//!
//! A cocycle on a finite space X is determined by its potential `p` with
//! `M(x, y) = p(y) - p(x)`. Potentials are pinned to zero at the base
//! configuration, so a cocycle is a vector in `Q^X` with first entry zero.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::invalid;
use crate::folding::FoldCertificate;
use crate::graph::{inverse, AutSubgroup};
use crate::linalg::{self, sparse_row, Rows};
use crate::measure::{is_mrf, Measure};
use crate::space::{act_config, ConfigSpace, Pattern, Sym};
use crate::{Error, Result, Q};

/// Largest space for which the all-pairs Markov system is built.
pub const MAX_MARKOV_CONFIGS: usize = 4000;

/// A cocycle stored as a base-pinned potential over the configurations of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    potential: Vec<Q>,
}

impl Cocycle {
    /// Cocycle `M(x, y) = p(y) - p(x)`; the potential is re-pinned at index 0.
    pub fn from_potential(mut p: Vec<Q>) -> Result<Self> {
        let Some(first) = p.first().cloned() else { return Err(Error::EmptySpace) };
        if !first.is_zero() {
            for v in p.iter_mut() {
                *v -= &first;
            }
        }
        Ok(Cocycle { potential: p })
    }

    pub fn zero(len: usize) -> Self {
        Cocycle { potential: vec![Q::zero(); len] }
    }

    pub fn potential(&self) -> &[Q] {
        &self.potential
    }

    pub fn len(&self) -> usize {
        self.potential.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potential.is_empty()
    }

    /// `M(x_i, x_j)`.
    pub fn value(&self, i: usize, j: usize) -> Q {
        &self.potential[j] - &self.potential[i]
    }

    pub fn is_zero(&self) -> bool {
        self.potential.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Cocycle) -> Result<Cocycle> {
        if self.len() != other.len() {
            return Err(invalid!("cocycles live on spaces of different sizes"));
        }
        Ok(Cocycle { potential: self.potential.iter().zip(&other.potential).map(|(a, b)| a + b).collect() })
    }

    pub fn scale(&self, c: &Q) -> Cocycle {
        Cocycle { potential: self.potential.iter().map(|a| a * c).collect() }
    }

    /// `Σ c_i M_i`.
    pub fn combination(vectors: &[Cocycle], coeffs: &[Q], len: usize) -> Result<Cocycle> {
        if vectors.len() != coeffs.len() {
            return Err(invalid!("{} vectors but {} coefficients", vectors.len(), coeffs.len()));
        }
        let mut acc = Cocycle::zero(len);
        for (v, c) in vectors.iter().zip(coeffs) {
            acc = acc.add(&v.scale(c))?;
        }
        Ok(acc)
    }

    pub(crate) fn check_space(&self, space: &ConfigSpace) -> Result<()> {
        if self.len() != space.len() {
            return Err(invalid!("cocycle has {} entries but the space has {} configurations", self.len(), space.len()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleKind {
    Markov,
    Gibbs,
    InvariantMarkov,
    InvariantGibbs,
}

#[derive(Clone, Debug)]
pub struct CocycleBasis {
    pub kind: CocycleKind,
    pub vectors: Vec<Cocycle>,
    pub group: Option<AutSubgroup>,
}

impl CocycleBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Dimensions of the Markov and Gibbs spaces; `holds` when they agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HcReport {
    pub markov_dim: usize,
    pub gibbs_dim: usize,
    pub holds: bool,
}

fn neighbour_masks(space: &ConfigSpace) -> Vec<u64> {
    let g = space.graph();
    (0..g.len()).map(|v| g.neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << w)).collect()
}

fn diff_mask(x: &[Sym], y: &[Sym]) -> u64 {
    x.iter().zip(y).enumerate().filter(|(_, (a, b))| a != b).fold(0, |acc, (v, _)| acc | 1 << v)
}

fn closure(f: u64, nbr: &[u64]) -> u64 {
    let mut s = f;
    let mut m = f;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        s |= nbr[v];
    }
    s
}

/// `(x, y) ~ (z, w)`: with `A` the union of both difference sets, `x = z`
/// and `y = w` on `A ∪ ∂A`.
pub fn markov_similar(space: &ConfigSpace, x: &[Sym], y: &[Sym], z: &[Sym], w: &[Sym]) -> Result<bool> {
    for c in [x, y, z, w] {
        if !space.contains(c) {
            return Err(invalid!("{c:?} is not a configuration of the space"));
        }
    }
    let nbr = neighbour_masks(space);
    let s = closure(diff_mask(x, y) | diff_mask(z, w), &nbr);
    Ok((0..x.len()).filter(|&v| s >> v & 1 == 1).all(|v| x[v] == z[v] && y[v] == w[v]))
}

/// Rows `p(a) - p(b) - p(c) + p(d) = 0` over the non-base potentials.
struct QuadRows {
    quads: Vec<[u32; 4]>,
}

impl Rows for QuadRows {
    type E = i64;
    fn count(&self) -> usize {
        self.quads.len()
    }
    fn row(&self, i: usize) -> Vec<(usize, i64)> {
        let [a, b, c, d] = self.quads[i];
        let terms = [(a, 1), (b, -1), (c, -1), (d, 1)];
        sparse_row(terms.into_iter().filter(|&(k, _)| k != 0).map(|(k, s)| (k as usize - 1, s)))
    }
}

/// Visit every pair `i < j` together with the first pair of its Markov class.
///
/// Pairs in one class share the set `S = F ∪ ∂F` (F the difference set)
/// and the restrictions to `S`. Lexicographic order of the whole
/// configurations agrees with the order of the restrictions, so pairs of a
/// class are all oriented the same way.
fn for_each_markov_pair(space: &ConfigSpace, mut visit: impl FnMut((usize, usize), (usize, usize))) -> Result<()> {
    let m = space.len();
    if m > MAX_MARKOV_CONFIGS {
        return Err(Error::Capacity(format!(
            "Markov system on {m} configurations exceeds the limit of {MAX_MARKOV_CONFIGS}"
        )));
    }
    let nbr = neighbour_masks(space);
    let mut first: BTreeMap<Vec<u8>, (usize, usize)> = BTreeMap::new();
    let configs = space.configs();
    for i in 0..m {
        for j in i + 1..m {
            let (x, y) = (&configs[i], &configs[j]);
            let s = closure(diff_mask(x, y), &nbr);
            let mut key = Vec::with_capacity(8 + 2 * s.count_ones() as usize);
            key.extend_from_slice(&s.to_le_bytes());
            let mut rest = s;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                key.push(x[v]);
                key.push(y[v]);
            }
            let head = *first.entry(key).or_insert((i, j));
            visit(head, (i, j));
        }
    }
    Ok(())
}

fn markov_quads(space: &ConfigSpace) -> Result<Vec<[u32; 4]>> {
    let mut quads = Vec::new();
    for_each_markov_pair(space, |(i0, j0), (i, j)| {
        if (i0, j0) != (i, j) {
            quads.push([j as u32, i as u32, j0 as u32, i0 as u32]);
        }
    })?;
    Ok(quads)
}

fn invariance_quads(space: &ConfigSpace, group: &AutSubgroup) -> Result<Vec<[u32; 4]>> {
    if !space.is_invariant(group)? {
        return Err(invalid!("the space is not invariant under the group"));
    }
    let mut quads = Vec::new();
    for g in group.elements().iter().skip(1) {
        let gb = space.index_of(&act_config(g, space.config(0))).expect("invariant space");
        for (i, x) in space.configs().iter().enumerate() {
            let gx = space.index_of(&act_config(g, x)).expect("invariant space");
            quads.push([gx as u32, i as u32, gb as u32, 0]);
        }
    }
    Ok(quads)
}

fn kernel_basis(rows: &QuadRows, m: usize, kind: CocycleKind, group: Option<AutSubgroup>) -> CocycleBasis {
    let red = linalg::reduce(rows, m - 1);
    let vectors = red
        .kernel
        .into_iter()
        .map(|(_, v)| {
            let mut p = Vec::with_capacity(m);
            p.push(Q::zero());
            p.extend(v);
            Cocycle { potential: p }
        })
        .collect();
    CocycleBasis { kind, vectors, group }
}

/// An independent subset of the Markov equations; it cuts out the same
/// space as the full system. Computed once per space.
fn independent_markov_quads(space: &ConfigSpace) -> Result<&[[u32; 4]]> {
    if let Some(q) = space.markov_rows.get() {
        return Ok(q);
    }
    let rows = QuadRows { quads: markov_quads(space)? };
    let red = linalg::reduce(&rows, space.len() - 1);
    let selected = red.selected.iter().map(|&i| rows.quads[i]).collect();
    Ok(space.markov_rows.get_or_init(|| selected))
}

/// Basis of the Markov cocycles of X.
pub fn markov_space(space: &ConfigSpace) -> Result<CocycleBasis> {
    space.require_nonempty()?;
    let rows = QuadRows { quads: independent_markov_quads(space)?.to_vec() };
    Ok(kernel_basis(&rows, space.len(), CocycleKind::Markov, None))
}

/// Basis of the Markov cocycles invariant under `group`.
pub fn invariant_markov_space(space: &ConfigSpace, group: &AutSubgroup) -> Result<CocycleBasis> {
    space.require_nonempty()?;
    let mut quads = independent_markov_quads(space)?.to_vec();
    quads.extend(invariance_quads(space, group)?);
    let rows = QuadRows { quads };
    Ok(kernel_basis(&rows, space.len(), CocycleKind::InvariantMarkov, Some(group.clone())))
}

/// Whether `c` takes equal values on Markov-similar pairs.
pub fn is_markov(space: &ConfigSpace, c: &Cocycle) -> Result<bool> {
    c.check_space(space)?;
    space.require_nonempty()?;
    let p = &c.potential;
    Ok(independent_markov_quads(space)?.iter().all(|&[a, b, cc, d]| {
        let [a, b, cc, d] = [a, b, cc, d].map(|k| &p[k as usize]);
        a - b == cc - d
    }))
}

/// `gM(x, y) = M(g⁻¹x, g⁻¹y)`.
pub fn act_cocycle(space: &ConfigSpace, g: &[usize], c: &Cocycle) -> Result<Cocycle> {
    c.check_space(space)?;
    let inv = inverse(g);
    let p: Option<Vec<Q>> =
        space.configs().iter().map(|x| space.index_of(&act_config(&inv, x)).map(|i| c.potential[i].clone())).collect();
    let p = p.ok_or_else(|| invalid!("the space is not invariant under {g:?}"))?;
    Cocycle::from_potential(p)
}

pub fn is_invariant_cocycle(space: &ConfigSpace, group: &AutSubgroup, c: &Cocycle) -> Result<bool> {
    for g in group.elements() {
        if act_cocycle(space, g, c)? != *c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coboundary of the pattern indicator, as a row over non-base configurations.
fn indicator_row(space: &ConfigSpace, patterns: &[Pattern]) -> Vec<(usize, i64)> {
    let count = |x: &[Sym]| patterns.iter().filter(|p| p.matches(x)).count() as i64;
    let base = count(space.config(0));
    sparse_row(space.configs().iter().enumerate().skip(1).map(|(i, x)| (i - 1, count(x) - base)))
}

fn row_basis(
    space: &ConfigSpace,
    rows: Vec<Vec<(usize, i64)>>,
    kind: CocycleKind,
    group: Option<AutSubgroup>,
) -> CocycleBasis {
    let m = space.len();
    let red = linalg::reduce(&rows, m - 1);
    let vectors = red
        .selected
        .iter()
        .map(|&r| {
            let mut p = vec![Q::zero(); m];
            for (c, v) in &rows[r] {
                p[c + 1] = Q::from_integer((*v).into());
            }
            Cocycle { potential: p }
        })
        .collect();
    CocycleBasis { kind, vectors, group }
}

/// Basis of the Gibbs cocycles: coboundaries of nearest-neighbour interactions.
pub fn gibbs_space(space: &ConfigSpace) -> Result<CocycleBasis> {
    space.require_nonempty()?;
    let rows = space.local_patterns().into_iter().map(|p| indicator_row(space, &[p])).collect();
    Ok(row_basis(space, rows, CocycleKind::Gibbs, None))
}

/// Orbits of the language patterns under `group`, each sorted, listed by least element.
pub fn pattern_orbits(space: &ConfigSpace, group: &AutSubgroup) -> Vec<Vec<Pattern>> {
    let mut seen = alloc::collections::BTreeSet::new();
    let mut out = Vec::new();
    for p in space.local_patterns() {
        if seen.contains(&p) {
            continue;
        }
        let orbit: alloc::collections::BTreeSet<Pattern> = group.elements().iter().map(|g| p.act(g)).collect();
        seen.extend(orbit.iter().cloned());
        out.push(orbit.into_iter().collect());
    }
    out
}

/// Basis of the Gibbs cocycles of `group`-invariant interactions.
pub fn invariant_gibbs_space(space: &ConfigSpace, group: &AutSubgroup) -> Result<CocycleBasis> {
    space.require_nonempty()?;
    if !space.is_invariant(group)? {
        return Err(invalid!("the space is not invariant under the group"));
    }
    let rows = pattern_orbits(space, group).iter().map(|orbit| indicator_row(space, orbit)).collect();
    Ok(row_basis(space, rows, CocycleKind::InvariantGibbs, Some(group.clone())))
}

pub fn is_hammersley_clifford(space: &ConfigSpace) -> Result<HcReport> {
    let markov_dim = markov_space(space)?.dim();
    let gibbs_dim = gibbs_space(space)?.dim();
    Ok(HcReport { markov_dim, gibbs_dim, holds: markov_dim == gibbs_dim })
}

pub fn is_invariant_hammersley_clifford(space: &ConfigSpace, group: &AutSubgroup) -> Result<HcReport> {
    let markov_dim = invariant_markov_space(space, group)?.dim();
    let gibbs_dim = invariant_gibbs_space(space, group)?.dim();
    Ok(HcReport { markov_dim, gibbs_dim, holds: markov_dim == gibbs_dim })
}

/// `dim M_X - dim G_X`.
pub fn quotient_dimension(space: &ConfigSpace) -> Result<usize> {
    let r = is_hammersley_clifford(space)?;
    Ok(r.markov_dim - r.gibbs_dim)
}

pub fn invariant_quotient_dimension(space: &ConfigSpace, group: &AutSubgroup) -> Result<usize> {
    let r = is_invariant_hammersley_clifford(space, group)?;
    Ok(r.markov_dim - r.gibbs_dim)
}

/// Restriction of a cocycle on X to the folded space, re-pinned at its base.
pub fn restrict(c: &Cocycle, cert: &FoldCertificate) -> Result<Cocycle> {
    c.check_space(&cert.space)?;
    cert.folded.require_nonempty()?;
    Cocycle::from_potential(cert.fold_indices.iter().map(|&i| c.potential[i].clone()).collect())
}

/// Pull back a cocycle on the folded space along the fold map.
pub fn lift(c: &Cocycle, cert: &FoldCertificate) -> Result<Cocycle> {
    c.check_space(&cert.folded)?;
    Cocycle::from_potential(cert.phi_indices.iter().map(|&i| c.potential[i].clone()).collect())
}

/// A cocycle in multiplicative form on the support of a measure:
/// `ratios[i] = μ(x_i) / μ(base)`, so `M(x, y) = ratios[y] / ratios[x]`.
#[derive(Clone, Debug)]
pub struct RatioCocycle {
    pub support: ConfigSpace,
    pub ratios: Vec<Q>,
}

impl RatioCocycle {
    pub fn value(&self, i: usize, j: usize) -> Q {
        &self.ratios[j] / &self.ratios[i]
    }

    /// The identity element: every ratio equals one.
    pub fn is_trivial(&self) -> bool {
        self.ratios.iter().all(One::is_one)
    }

    /// Markov property of the multiplicative cocycle.
    pub fn is_markov(&self) -> Result<bool> {
        let mut ok = true;
        for_each_markov_pair(&self.support, |(i0, j0), (i, j)| {
            if ok && self.value(i0, j0) != self.value(i, j) {
                ok = false;
            }
        })?;
        Ok(ok)
    }
}

/// `M(x, y) = μ(y) / μ(x)` on the support of a Markov random field.
pub fn cocycle_from_measure(mu: &Measure) -> Result<RatioCocycle> {
    if !is_mrf(mu)?.holds {
        return Err(invalid!("the measure is not a Markov random field"));
    }
    let (support, weights) = mu.support_weights()?;
    let base = weights[0].clone();
    let ratios = weights.iter().map(|w| w / &base).collect();
    Ok(RatioCocycle { support, ratios })
}
