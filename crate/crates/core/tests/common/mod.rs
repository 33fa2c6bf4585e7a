#![allow(dead_code)]

use hcfold::graph::Graph;
use hcfold::space::{Alphabet, ConfigSpace, ConstraintSet, Pattern, Sym};
use hcfold::{Label, DEFAULT_CAP, Q};
use rand::Rng;

/// Randomized instances larger than this are skipped to keep the suite quick.
pub const MAX_RANDOM_CONFIGS: usize = 600;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn int_graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new((0..n as i64).map(Label::Int).collect(), edges).unwrap()
}

pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    int_graph(leaves + 1, &edges)
}

pub fn complete_bipartite(m: usize, n: usize) -> Graph {
    let edges: Vec<_> = (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))).collect();
    int_graph(m + n, &edges)
}

pub fn hard_core(g: &Graph) -> ConfigSpace {
    let forbidden = g.sorted_edges().into_iter().map(|(u, v)| Pattern::bond(u, 1, v, 1));
    ConfigSpace::enumerate(g, &Alphabet::range(2), &ConstraintSet::new(forbidden), DEFAULT_CAP).unwrap()
}

/// Bipartite graphs with at most six vertices.
pub fn random_domain<R: Rng>(rng: &mut R) -> Graph {
    match rng.gen_range(0..9) {
        0 => Graph::path(rng.gen_range(2..=6)),
        1 => Graph::cycle(4),
        2 => Graph::cycle(6),
        3 => Graph::grid(2, 2),
        4 => Graph::grid(2, 3),
        5 => star(rng.gen_range(2..=5)),
        6 => complete_bipartite(2, 3),
        7 => int_graph(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]),
        _ => int_graph(6, &[(0, 1), (1, 2), (3, 4)]),
    }
}

/// Random nearest-neighbour constraints. Half of the time the same
/// symmetric relation is forbidden on every edge, which keeps the space
/// invariant under every automorphism of the domain.
pub fn random_constraints<R: Rng>(rng: &mut R, g: &Graph, k: usize) -> ConstraintSet {
    let density = rng.gen_range(0.15..0.55);
    let mut forbidden = Vec::new();
    if rng.gen_bool(0.5) {
        let mut relation = Vec::new();
        for s in 0..k {
            for t in s..k {
                if rng.gen_bool(density) {
                    relation.push((s as Sym, t as Sym));
                }
            }
        }
        for (u, v) in g.sorted_edges() {
            for &(s, t) in &relation {
                forbidden.push(Pattern::bond(u, s, v, t));
                forbidden.push(Pattern::bond(u, t, v, s));
            }
        }
    } else {
        for (u, v) in g.sorted_edges() {
            for s in 0..k {
                for t in 0..k {
                    if rng.gen_bool(density) {
                        forbidden.push(Pattern::bond(u, s as Sym, v, t as Sym));
                    }
                }
            }
        }
        for v in 0..g.len() {
            for s in 0..k {
                if rng.gen_bool(0.05) {
                    forbidden.push(Pattern::site(v, s as Sym));
                }
            }
        }
    }
    ConstraintSet::new(forbidden)
}

/// A random nonempty space of manageable size.
pub fn random_space<R: Rng>(rng: &mut R) -> Option<ConfigSpace> {
    let g = random_domain(rng);
    let k = rng.gen_range(2..=4);
    let cs = random_constraints(rng, &g, k);
    let x = ConfigSpace::enumerate(&g, &Alphabet::range(k), &cs, DEFAULT_CAP).unwrap();
    (!x.is_empty() && x.len() <= MAX_RANDOM_CONFIGS).then_some(x)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn random_positive<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

/// Every ordered pair `(x, y)` satisfies `M(x, y) = E(y) - E(x)`, i.e.
/// `p(y) - E(y) = p(x) - E(x)` with `p` the potential of `m`.
pub fn all_pairs_good(space: &ConfigSpace, m: &hcfold::cocycle::Cocycle, v: &hcfold::interaction::Interaction) -> bool {
    let offsets: Vec<Q> = space.configs().iter().zip(m.potential()).map(|(x, p)| p - v.energy(space, x)).collect();
    offsets.iter().all(|d| *d == offsets[0])
}
