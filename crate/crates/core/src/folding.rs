//! Folding a symbol of a nearest-neighbour space into another one.
//!
//! Symbol `a` folds into `b` when, for all edges `(v1, v2)`, `(v2, v3)`
//! (with `v3 = v1` allowed) and every `c` with `[a, c]` allowed on
//! `(v1, v2)`:
//!
//! 1. `[b, c]` is allowed on `(v1, v2)`,
//! 2. `[c, b]` is allowed on `(v2, v3)`,
//! 3. some configuration equals `b` at every vertex at distance two from `v1`.
//!
//! For a vertex without neighbours, `[a]_v` allowed must imply `[b]_v`
//! allowed. The fold `X_a` keeps the alphabet and forbids `a` everywhere.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::invalid;
use crate::graph::AutSubgroup;
use crate::space::{Config, ConfigSpace, Sym};
use crate::{Error, Result};

/// Everything needed to move cocycles and interactions across one fold.
#[derive(Clone, Debug)]
pub struct FoldCertificate {
    pub a: Sym,
    pub b: Sym,
    pub space: ConfigSpace,
    pub folded: ConfigSpace,
    /// Index in `space` of each configuration of `folded`.
    pub fold_indices: Vec<usize>,
    /// Index in `folded` of `φ(x)` for each configuration `x` of `space`.
    pub phi_indices: Vec<usize>,
    /// Vertices with `[a, a]` allowed on some incident edge.
    pub v1: Vec<usize>,
    /// Remaining vertices where `[a]_v` is allowed.
    pub v2: Vec<usize>,
    /// The partite class used for `[a, a]` edge patterns.
    pub first_part: Vec<usize>,
    /// Special configuration `x^v` for every `v` in `v1 ∪ v2`.
    pub special: BTreeMap<usize, Config>,
    /// Symbol placed on neighbour `w` of `v ∈ v2`, keyed by `(v, w)`.
    pub neighbour_symbols: BTreeMap<(usize, usize), Sym>,
    pub group: Option<AutSubgroup>,
}

impl FoldCertificate {
    /// `φ`: replace every `a` by `b`.
    pub fn phi(&self, x: &[Sym]) -> Config {
        phi(x, self.a, self.b)
    }
}

fn phi(x: &[Sym], a: Sym, b: Sym) -> Config {
    x.iter().map(|&s| if s == a { b } else { s }).collect()
}

fn require_foldable_space(space: &ConfigSpace) -> Result<()> {
    space.require_nonempty()?;
    if !space.is_nearest_neighbour() {
        return Err(invalid!("folding needs a nearest-neighbour constraint space"));
    }
    Ok(())
}

/// First configuration equal to `b` on the sphere of radius two around `v`.
fn b_sphere_witness(space: &ConfigSpace, v: usize, b: Sym) -> Result<Option<&Config>> {
    let sphere = space.graph().sphere(v, 2)?;
    Ok(space.configs().iter().find(|x| sphere.iter().all(|&u| x[u] == b)))
}

/// Reason why `a` does not fold into `b`, or `None` if it does.
pub fn fold_violation(space: &ConfigSpace, a: Sym, b: Sym) -> Result<Option<String>> {
    require_foldable_space(space)?;
    let k = space.alphabet().len();
    if a as usize >= k || b as usize >= k {
        return Err(invalid!("symbol index outside the alphabet"));
    }
    if a == b {
        return Ok(Some("a symbol cannot fold into itself".into()));
    }
    let g = space.graph();
    let al = space.alphabet();
    if !space.active_symbols().contains(&a) {
        return Ok(Some(format!("symbol {} does not occur in the space", al.label(a))));
    }
    for v1 in 0..g.len() {
        if g.neighbors(v1).is_empty() {
            if space.site_allowed(v1, a) && !space.site_allowed(v1, b) {
                return Ok(Some(format!("{} is allowed at isolated vertex {} but {} is not", al.label(a), g.label(v1), al.label(b))));
            }
            continue;
        }
        let mut needs_sphere = false;
        for &v2 in g.neighbors(v1) {
            for c in 0..k as Sym {
                if !space.bond_allowed(v1, a, v2, c) {
                    continue;
                }
                needs_sphere = true;
                if !space.bond_allowed(v1, b, v2, c) {
                    return Ok(Some(format!(
                        "[{}, {}] is allowed on ({}, {}) but [{}, {}] is not",
                        al.label(a),
                        al.label(c),
                        g.label(v1),
                        g.label(v2),
                        al.label(b),
                        al.label(c)
                    )));
                }
                for &v3 in g.neighbors(v2) {
                    if !space.bond_allowed(v2, c, v3, b) {
                        return Ok(Some(format!(
                            "[{}, {}] is not allowed on ({}, {})",
                            al.label(c),
                            al.label(b),
                            g.label(v2),
                            g.label(v3)
                        )));
                    }
                }
            }
        }
        if needs_sphere && b_sphere_witness(space, v1, b)?.is_none() {
            return Ok(Some(format!(
                "no configuration is {} at distance two from {}",
                al.label(b),
                g.label(v1)
            )));
        }
    }
    Ok(None)
}

pub fn can_fold(space: &ConfigSpace, a: Sym, b: Sym) -> Result<bool> {
    Ok(fold_violation(space, a, b)?.is_none())
}

/// All valid folds `(a, b)` of the space, sorted.
pub fn available_folds(space: &ConfigSpace) -> Result<Vec<(Sym, Sym)>> {
    require_foldable_space(space)?;
    let mut out = Vec::new();
    for a in space.active_symbols() {
        for b in space.active_symbols() {
            if a != b && can_fold(space, a, b)? {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// Fold `a` into `b`, building the special configurations with the
/// least admissible neighbour symbols.
pub fn fold(space: &ConfigSpace, a: Sym, b: Sym) -> Result<FoldCertificate> {
    build(space, a, b, None)
}

/// As [`fold`], with neighbour symbols chosen constant on orbits of
/// directed edges, so that `g x^v` and `x^{gv}` agree on `g D_2(v)`.
pub fn fold_with_group(space: &ConfigSpace, a: Sym, b: Sym, group: &AutSubgroup) -> Result<FoldCertificate> {
    if !space.is_invariant(group)? {
        return Err(invalid!("the space is not invariant under the group"));
    }
    build(space, a, b, Some(group))
}

fn build(space: &ConfigSpace, a: Sym, b: Sym, group: Option<&AutSubgroup>) -> Result<FoldCertificate> {
    if let Some(reason) = fold_violation(space, a, b)? {
        return Err(Error::InvalidFold(reason));
    }
    let g = space.graph();
    let n = g.len();
    let folded = space.without_symbol(a);
    let fold_indices: Vec<usize> = folded
        .configs()
        .iter()
        .map(|x| space.index_of(x).ok_or_else(|| Error::Internal("folded configuration missing from X".into())))
        .collect::<Result<_>>()?;
    let phi_indices: Vec<usize> = space
        .configs()
        .iter()
        .map(|x| folded.index_of(&phi(x, a, b)).ok_or_else(|| Error::Internal("φ(x) is not in the fold".into())))
        .collect::<Result<_>>()?;

    let v1: Vec<usize> =
        (0..n).filter(|&v| g.neighbors(v).iter().any(|&w| space.bond_allowed(v, a, w, a))).collect();
    let v2: Vec<usize> = (0..n).filter(|&v| !v1.contains(&v) && space.site_allowed(v, a)).collect();

    let neighbour_symbols = neighbour_choices(space, a, &v2, group)?;

    let mut special = BTreeMap::new();
    for &v in v1.iter().chain(&v2) {
        let tail = b_sphere_witness(space, v, b)?
            .map(|x| phi(x, a, b))
            .ok_or_else(|| Error::Internal(format!("no completion around vertex {}", g.label(v))))?;
        let dist = g.distances(v);
        let mut x = tail;
        for u in 0..n {
            match dist[u] {
                0 => x[u] = a,
                1 if v1.contains(&v) => x[u] = b,
                1 => x[u] = neighbour_symbols[&(v, u)],
                2 => x[u] = b,
                _ => {}
            }
        }
        if !space.contains(&x) {
            return Err(Error::Internal(format!("special configuration at {} is not in X", g.label(v))));
        }
        special.insert(v, x);
    }

    Ok(FoldCertificate {
        a,
        b,
        space: space.clone(),
        folded,
        fold_indices,
        phi_indices,
        v1,
        v2,
        first_part: space.bipartition().first_part(),
        special,
        neighbour_symbols,
        group: group.cloned(),
    })
}

/// Least symbol `c != a` with `[a, c]` allowed on `(v, w)`, for each `v ∈ v2`
/// and neighbour `w`. With a group, the choice is made on the least
/// directed edge of each orbit and copied along the orbit.
fn neighbour_choices(
    space: &ConfigSpace,
    a: Sym,
    v2: &[usize],
    group: Option<&AutSubgroup>,
) -> Result<BTreeMap<(usize, usize), Sym>> {
    let g = space.graph();
    let k = space.alphabet().len() as Sym;
    let least = |v: usize, w: usize| (0..k).find(|&c| c != a && space.bond_allowed(v, a, w, c));
    let mut out = BTreeMap::new();
    let directed: BTreeSet<(usize, usize)> = v2.iter().flat_map(|&v| g.neighbors(v).iter().map(move |&w| (v, w))).collect();
    for &(v, w) in &directed {
        if out.contains_key(&(v, w)) {
            continue;
        }
        let c = least(v, w).ok_or_else(|| Error::Internal(format!("no admissible neighbour symbol on ({}, {})", g.label(v), g.label(w))))?;
        match group {
            None => {
                out.insert((v, w), c);
            }
            Some(group) => {
                for h in group.elements() {
                    let image = (h[v], h[w]);
                    if !space.bond_allowed(image.0, a, image.1, c) {
                        return Err(Error::Internal("edge language is not invariant under the group".into()));
                    }
                    out.insert(image, c);
                }
            }
        }
    }
    Ok(out)
}

/// Check `(g x^v)|_{g D_2(v)} = x^{gv}|_{g D_2(v)}` for every group element.
pub fn specials_equivariant(cert: &FoldCertificate, group: &AutSubgroup) -> Result<bool> {
    let graph = cert.space.graph();
    for g in group.elements() {
        for (&v, x) in &cert.special {
            let Some(y) = cert.special.get(&g[v]) else { return Ok(false) };
            for u in graph.ball(v, 2)? {
                // (g x)_{g u} = x_u
                if x[u] != y[g[u]] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Greedy fold sequence: repeatedly apply the least available fold.
#[derive(Clone, Debug)]
pub struct FoldSequence {
    pub steps: Vec<FoldCertificate>,
    pub terminal: ConfigSpace,
}

pub fn fold_sequence(space: &ConfigSpace) -> Result<FoldSequence> {
    require_foldable_space(space)?;
    let mut steps = Vec::new();
    let mut current = space.clone();
    while let Some(&(a, b)) = available_folds(&current)?.first() {
        let cert = fold(&current, a, b)?;
        current = cert.folded.clone();
        steps.push(cert);
    }
    Ok(FoldSequence { steps, terminal: current })
}
