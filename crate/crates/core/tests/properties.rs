mod common;

use common::*;
use hcfold::cocycle::{
    gibbs_space, is_hammersley_clifford, is_markov, lift, markov_similar, markov_space, quotient_dimension, restrict,
    Cocycle,
};
use hcfold::folding::{available_folds, fold};
use hcfold::graph::{compose, Graph};
use hcfold::interaction::{coboundary, energy_difference, solve_interaction, v_good, Interaction};
use hcfold::measure::{gibbs_measure, is_mrf, MultiplicativeInteraction};
use hcfold::space::{act_config, Alphabet, ConfigSpace, ConstraintSet, Sym};
use hcfold::{cocycle::cocycle_from_measure, DEFAULT_CAP};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn space_from(seed: u64) -> (ChaCha8Rng, ConfigSpace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(x) = random_space(&mut rng) {
            if x.len() <= 300 {
                return (rng, x);
            }
        }
    }
}

fn brute_force(x: &ConfigSpace) -> Vec<Vec<Sym>> {
    let n = x.graph().len();
    let k = x.alphabet().len();
    let mut out = Vec::new();
    for code in 0..k.pow(n as u32) {
        let mut c = code;
        let config: Vec<Sym> = (0..n)
            .map(|_| {
                let s = (c % k) as Sym;
                c /= k;
                s
            })
            .rev()
            .collect();
        if x.satisfies_constraints(&config) {
            out.push(config);
        }
    }
    out.sort();
    out
}

fn random_interaction(rng: &mut ChaCha8Rng, x: &ConfigSpace) -> Interaction {
    let mut v = Interaction::new();
    for p in x.local_patterns() {
        if rng.gen_bool(0.5) {
            v.set(p, random_rational(rng));
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn enumeration_matches_brute_force(seed in any::<u64>()) {
        let (_, x) = space_from(seed);
        let expected = brute_force(&x);
        prop_assert_eq!(x.configs(), expected.as_slice());
        prop_assert!(x.is_tmf().unwrap().holds);
        if !x.safe_symbols().unwrap().is_empty() {
            prop_assert!(x.induced_constraints(DEFAULT_CAP).unwrap().1);
        }
    }

    #[test]
    fn languages_restrict_along_inclusions(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        let n = x.graph().len();
        let mut big: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        if big.is_empty() {
            big.push(0);
        }
        let small: Vec<usize> = big.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let lang_small = x.language(&small).unwrap();
        for pattern in x.language(&big).unwrap() {
            let restricted: Vec<Sym> = small.iter().map(|v| pattern[big.iter().position(|u| u == v).unwrap()]).collect();
            prop_assert!(lang_small.contains(&restricted));
        }
    }

    #[test]
    fn single_site_theta_membership(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        let g = x.graph();
        let xi = x.config(rng.gen_range(0..x.len())).clone();
        let v = rng.gen_range(0..g.len());
        for c in 0..x.alphabet().len() as Sym {
            let (_, member) = x.theta(&xi, &[v], &[c]).unwrap();
            let local = x.site_allowed(v, c) && g.neighbors(v).iter().all(|&w| x.bond_allowed(v, c, w, xi[w]));
            prop_assert_eq!(member, local);
        }
    }

    #[test]
    fn boundary_is_disjoint_and_folds_are_neighbourhood_inclusions(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        let g = x.graph();
        let f: Vec<usize> = (0..g.len()).filter(|_| rng.gen_bool(0.4)).collect();
        let b = g.boundary(&f).unwrap();
        prop_assert!(b.iter().all(|v| !f.contains(v)));
        for (a, c) in g.graph_folds() {
            prop_assert!(g.neighbors(a).iter().all(|w| g.is_adjacent(*w, c)));
        }
        let aut = g.automorphisms().unwrap();
        for p in aut.elements() {
            prop_assert!(g.is_automorphism(p));
            for h in aut.elements() {
                prop_assert!(aut.elements().contains(&compose(p, h)));
            }
        }
    }

    #[test]
    fn gibbs_is_inside_markov_and_antisymmetric(seed in any::<u64>()) {
        let (_, x) = space_from(seed);
        let markov = markov_space(&x).unwrap();
        let gibbs = gibbs_space(&x).unwrap();
        prop_assert!(gibbs.dim() <= markov.dim());
        for c in &gibbs.vectors {
            prop_assert!(is_markov(&x, c).unwrap());
        }
        for c in &markov.vectors {
            prop_assert!(is_markov(&x, c).unwrap());
            for i in 0..x.len().min(12) {
                for j in 0..x.len().min(12) {
                    prop_assert_eq!(c.value(i, j), -c.value(j, i));
                }
            }
        }
    }

    #[test]
    fn dimensions_do_not_depend_on_vertex_order(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        let n = x.graph().len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let g2 = x.graph().reordered(&order).unwrap();
        let configs = x.configs().iter().map(|c| order.iter().map(|&v| c[v]).collect()).collect();
        let y = ConfigSpace::from_configs(&g2, x.alphabet(), configs, DEFAULT_CAP).unwrap();
        let (a, b) = (is_hammersley_clifford(&x).unwrap(), is_hammersley_clifford(&y).unwrap());
        prop_assert_eq!((a.markov_dim, a.gibbs_dim), (b.markov_dim, b.gibbs_dim));
    }

    #[test]
    fn folds_preserve_the_quotient_and_lift_is_a_section(seed in any::<u64>()) {
        let (_, x) = space_from(seed);
        for (a, b) in available_folds(&x).unwrap() {
            let cert = fold(&x, a, b).unwrap();
            prop_assert!(cert.folded.len() < x.len());
            prop_assert!(cert.folded.configs().iter().all(|c| !c.contains(&a)));
            for c in x.configs() {
                for v in (0..c.len()).filter(|&v| c[v] == a) {
                    prop_assert!(x.theta(c, &[v], &[b]).unwrap().1);
                }
            }
            for (&v, special) in &cert.special {
                prop_assert!(x.contains(special));
                prop_assert_eq!(special[v], a);
            }
            prop_assert_eq!(quotient_dimension(&x).unwrap(), quotient_dimension(&cert.folded).unwrap());
            for c in markov_space(&cert.folded).unwrap().vectors {
                prop_assert_eq!(restrict(&lift(&c, &cert).unwrap(), &cert).unwrap(), c);
            }
        }
    }

    #[test]
    fn energy_differences_are_local(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        let v = random_interaction(&mut rng, &x);
        let c = coboundary(&x, &v).unwrap();
        for _ in 0..20 {
            let (i, j) = (rng.gen_range(0..x.len()), rng.gen_range(0..x.len()));
            let d = energy_difference(&x, &v, x.config(i), x.config(j));
            prop_assert_eq!(&d, &(v.energy(&x, x.config(j)) - v.energy(&x, x.config(i))));
            prop_assert_eq!(c.value(i, j), d);
        }
    }

    #[test]
    fn goodness_transfers_along_markov_similarity(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        let basis = markov_space(&x).unwrap();
        let coeffs: Vec<_> = basis.vectors.iter().map(|_| random_rational(&mut rng)).collect();
        let m = Cocycle::combination(&basis.vectors, &coeffs, x.len()).unwrap();
        let v = solve_interaction(&x, &m).unwrap().unwrap_or_else(|| random_interaction(&mut rng, &x));
        let len = x.len().min(30);
        for i in 0..len {
            for j in 0..len {
                for k in 0..len {
                    for l in 0..len {
                        if (i, j) != (k, l)
                            && rng.gen_bool(0.01)
                            && markov_similar(&x, x.config(i), x.config(j), x.config(k), x.config(l)).unwrap()
                        {
                            let first = v_good(&x, &m, &v, i, j).unwrap().satisfied;
                            prop_assert_eq!(first, v_good(&x, &m, &v, k, l).unwrap().satisfied);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn solved_interactions_reproduce_gibbs_cocycles(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        let v = random_interaction(&mut rng, &x);
        let m = coboundary(&x, &v).unwrap();
        let w = solve_interaction(&x, &m).unwrap().unwrap();
        prop_assert_eq!(coboundary(&x, &w).unwrap(), m);
    }

    #[test]
    fn gibbs_measures_are_markov_fields(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        prop_assume!(x.graph().len() <= 6);
        let mut v = MultiplicativeInteraction::new();
        for p in x.local_patterns() {
            if rng.gen_bool(0.5) {
                v.set(p, random_positive(&mut rng)).unwrap();
            }
        }
        let mu = gibbs_measure(&x, &v).unwrap();
        prop_assert!(is_mrf(&mu).unwrap().holds);
        prop_assert_eq!(cocycle_from_measure(&mu).unwrap().ratios, v.coboundary_ratios(&x).unwrap());
        let group = x.stabilizer().unwrap();
        let invariant = mu.is_invariant(&group).unwrap();
        if invariant {
            prop_assert!(mu.support().unwrap().is_invariant(&group).unwrap());
        }
    }

    #[test]
    fn group_action_composes(seed in any::<u64>()) {
        let (mut rng, x) = space_from(seed);
        let aut = x.graph().automorphisms().unwrap();
        let g = aut.elements()[rng.gen_range(0..aut.order())].clone();
        let h = aut.elements()[rng.gen_range(0..aut.order())].clone();
        for c in x.configs().iter().take(20) {
            prop_assert_eq!(act_config(&g, &act_config(&h, c)), act_config(&compose(&g, &h), c));
        }
    }
}

#[test]
fn dismantling_replays() {
    for g in [Graph::path_power(7, 2), Graph::path_power(5, 1), Graph::path_power(6, 3)] {
        let seq = g.dismantle().unwrap();
        let mut alive: Vec<usize> = (0..g.len()).collect();
        for (a, b) in seq {
            let live = |v: &usize| alive.contains(v);
            let na: Vec<usize> = g.neighbourhood(a).into_iter().filter(live).collect();
            let nb: Vec<usize> = g.neighbourhood(b).into_iter().filter(live).collect();
            assert!(na.iter().all(|v| nb.contains(v)), "fold ({a},{b}) is not valid on the intermediate graph");
            alive.retain(|&v| v != a);
        }
        assert_eq!(alive.len(), 1);
    }
    let x = ConfigSpace::enumerate(&Graph::path(2), &Alphabet::range(2), &ConstraintSet::default(), DEFAULT_CAP).unwrap();
    assert_eq!(x.len(), 4);
}
