//! Acceptance suite. Run with `--nocapture` to see one line per criterion.

mod common;

use std::time::Instant;

use common::*;
use hcfold::cocycle::{
    gibbs_space, invariant_markov_space, is_hammersley_clifford, is_invariant_cocycle, is_invariant_hammersley_clifford,
    is_markov, lift, markov_space, quotient_dimension, invariant_quotient_dimension, restrict, cocycle_from_measure,
    Cocycle,
};
use hcfold::folding::{available_folds, fold, fold_with_group, FoldCertificate};
use hcfold::graph::{AutSubgroup, Graph};
use hcfold::interaction::{build_interaction_via_fold, build_invariant_interaction_via_fold, solve_interaction, verify_realization};
use hcfold::measure::{gibbs_measure, is_mrf, Measure, MultiplicativeInteraction};
use hcfold::space::{Alphabet, ConfigSpace, ConstraintSet, Pattern, Sym};
use hcfold::{Label, DEFAULT_CAP, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| format!("{err:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let graphs = [("path-4", Graph::path(4)), ("4-cycle", Graph::cycle(4)), ("2x2 grid", Graph::grid(2, 2)), ("2x3 grid", Graph::grid(2, 3))];
    let mut dims = Vec::new();
    for (name, g) in &graphs {
        let x = hard_core(g);
        check(x.safe_symbols().unwrap() == vec![0], || format!("{name}: 0 should be the only safe symbol"))?;
        let plain = e(is_hammersley_clifford(&x))?;
        check(plain.holds, || format!("{name}: Markov dim {} != Gibbs dim {}", plain.markov_dim, plain.gibbs_dim))?;
        let group = e(g.automorphisms())?;
        let inv = e(is_invariant_hammersley_clifford(&x, &group))?;
        check(inv.holds, || format!("{name}: invariant Markov dim {} != invariant Gibbs dim {}", inv.markov_dim, inv.gibbs_dim))?;
        dims.push(format!("{name} {}/{}", plain.markov_dim, inv.markov_dim));
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("dims (plain/invariant): {} in {secs:.2}s", dims.join(", ")))
}

fn criterion_2() -> Outcome {
    let c4 = Graph::cycle(4);
    let graphs = [("path-3", Graph::path(3)), ("path-4", Graph::path(4)), ("4-cycle", Graph::cycle(4)), ("2x3 grid", Graph::grid(2, 3))];
    let mut dims = Vec::new();
    for (name, g) in &graphs {
        let x = e(ConfigSpace::hom(g, &c4, DEFAULT_CAP))?;
        let plain = e(is_hammersley_clifford(&x))?;
        check(plain.holds, || format!("{name}: Markov dim {} != Gibbs dim {}", plain.markov_dim, plain.gibbs_dim))?;
        let group = e(g.automorphisms())?;
        let inv = e(is_invariant_hammersley_clifford(&x, &group))?;
        check(inv.holds, || format!("{name}: invariant Markov dim {} != invariant Gibbs dim {}", inv.markov_dim, inv.gibbs_dim))?;
        dims.push(format!("{name} |X|={} {}/{}", x.len(), plain.markov_dim, inv.markov_dim));
    }
    Ok(dims.join(", "))
}

struct Instance {
    space: ConfigSpace,
    folds: Vec<(Sym, Sym)>,
    group: AutSubgroup,
}

fn instances(count: usize, seed: u64) -> (Vec<Instance>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    // a space that is not Hammersley-Clifford, so the unrealizable case is exercised too
    let k4_plus = int_graph(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 1), (4, 2)]);
    let space = ConfigSpace::hom(&Graph::cycle(4), &k4_plus, DEFAULT_CAP).unwrap();
    out.push(Instance { folds: available_folds(&space).unwrap(), group: space.stabilizer().unwrap(), space });
    let mut discarded = 0;
    while out.len() < count {
        let Some(space) = random_space(&mut rng) else {
            discarded += 1;
            continue;
        };
        let folds = available_folds(&space).unwrap();
        if folds.is_empty() {
            discarded += 1;
            continue;
        }
        let group = space.stabilizer().unwrap();
        out.push(Instance { space, folds, group });
    }
    (out, discarded)
}

fn random_combination(rng: &mut ChaCha8Rng, vectors: &[Cocycle], len: usize) -> Cocycle {
    let coeffs: Vec<Q> = vectors.iter().map(|_| random_rational(rng)).collect();
    Cocycle::combination(vectors, &coeffs, len).unwrap()
}

const INSTANCES: usize = 220;
const SEED: u64 = 0x5eed_f01d;

fn criterion_3(instances: &[Instance]) -> Outcome {
    let mut folds = 0;
    let mut invariant_folds = 0;
    let mut non_hc = 0;
    for (n, inst) in instances.iter().enumerate() {
        let x = &inst.space;
        let q_x = e(quotient_dimension(x))?;
        non_hc += usize::from(q_x > 0);
        let q_xg = if inst.group.is_trivial() { None } else { Some(e(invariant_quotient_dimension(x, &inst.group))?) };
        for &(a, b) in &inst.folds {
            let cert = e(fold(x, a, b))?;
            let q_fold = e(quotient_dimension(&cert.folded))?;
            check(q_x == q_fold, || format!("instance {n}, fold ({a},{b}): quotient {q_x} vs {q_fold}"))?;
            folds += 1;
            if let Some(q_xg) = q_xg {
                let cert = e(fold_with_group(x, a, b, &inst.group))?;
                let q_fold = e(invariant_quotient_dimension(&cert.folded, &inst.group))?;
                check(q_xg == q_fold, || format!("instance {n}, fold ({a},{b}): invariant quotient {q_xg} vs {q_fold}"))?;
                invariant_folds += 1;
            }
        }
    }
    check(invariant_folds > 0, || "no instance had a nontrivial automorphism subgroup".into())?;
    Ok(format!("{} spaces ({non_hc} not Hammersley-Clifford), {folds} folds, {invariant_folds} invariant folds, zero failures", instances.len()))
}

fn extend_one(cert: &FoldCertificate, m: &Cocycle) -> Result<bool, String> {
    let restricted = e(restrict(m, cert))?;
    let on_fold = e(solve_interaction(&cert.folded, &restricted))?;
    let on_space = e(solve_interaction(&cert.space, m))?;
    check(on_fold.is_some() == on_space.is_some(), || "realizability on X and on the fold disagree".into())?;
    let Some(v) = on_fold else { return Ok(false) };
    let built = e(build_interaction_via_fold(cert, m, &v))?;
    let report = e(verify_realization(&cert.space, m, &built))?;
    check(report.verified, || format!("built interaction fails: {:?}", report.failure))?;
    check(all_pairs_good(&cert.space, m, &built), || "some pair is not good for the built interaction".into())?;
    Ok(true)
}

fn criterion_4(instances: &[Instance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let (mut built, mut unrealizable, mut invariant_built) = (0, 0, 0);
    for (n, inst) in instances.iter().enumerate() {
        let x = &inst.space;
        let basis = e(markov_space(x))?;
        let mut cocycles = vec![random_combination(&mut rng, &basis.vectors, x.len())];
        cocycles.extend(basis.vectors.iter().take(3).cloned());
        for &(a, b) in &inst.folds {
            let cert = e(fold(x, a, b))?;
            for m in &cocycles {
                match extend_one(&cert, m) {
                    Ok(true) => built += 1,
                    Ok(false) => unrealizable += 1,
                    Err(msg) => return Err(format!("instance {n}, fold ({a},{b}): {msg}")),
                }
            }
            if inst.group.is_trivial() {
                continue;
            }
            let cert = e(fold_with_group(x, a, b, &inst.group))?;
            let inv_basis = e(invariant_markov_space(x, &inst.group))?;
            let m = random_combination(&mut rng, &inv_basis.vectors, x.len());
            let restricted = e(restrict(&m, &cert))?;
            let Some(v) = e(solve_interaction(&cert.folded, &restricted))? else { continue };
            let v_prime = e(build_invariant_interaction_via_fold(&cert, &m, &v, &inst.group))?;
            check(v_prime.is_invariant(&inst.group), || format!("instance {n}: built interaction is not invariant"))?;
            let report = e(verify_realization(x, &m, &v_prime))?;
            check(report.verified && all_pairs_good(x, &m, &v_prime), || format!("instance {n}: invariant interaction fails: {:?}", report.failure))?;
            invariant_built += 1;
        }
    }
    check(built > 0 && invariant_built > 0, || "nothing was built".into())?;
    Ok(format!("{built} built and verified, {invariant_built} invariant, {unrealizable} not realizable on either side"))
}

fn criterion_5(instances: &[Instance]) -> Outcome {
    let mut checked = 0;
    for (n, inst) in instances.iter().enumerate() {
        for &(a, b) in &inst.folds {
            let cert = e(fold(&inst.space, a, b))?;
            for c in e(markov_space(&cert.folded))?.vectors {
                let up = e(lift(&c, &cert))?;
                check(e(restrict(&up, &cert))? == c, || format!("instance {n}: restrict(lift(c)) != c"))?;
                check(e(is_markov(&inst.space, &up))?, || format!("instance {n}: lift of a Markov cocycle is not Markov"))?;
                checked += 1;
            }
            for c in e(gibbs_space(&cert.folded))?.vectors {
                let up = e(lift(&c, &cert))?;
                check(e(solve_interaction(&inst.space, &up))?.is_some(), || format!("instance {n}: lift of a Gibbs cocycle is not Gibbs"))?;
            }
        }
    }
    Ok(format!("{checked} basis vectors lifted and restricted exactly"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let spaces: Vec<ConfigSpace> = [Graph::path(4), Graph::cycle(4), Graph::grid(2, 2), Graph::grid(2, 3)].iter().map(hard_core).collect();
    let mut count = 0;
    for round in 0..60 {
        let x = &spaces[round % spaces.len()];
        let mut v = MultiplicativeInteraction::new();
        for p in x.local_patterns() {
            if rng.gen_bool(0.6) {
                e(v.set(p, random_positive(&mut rng)))?;
            }
        }
        let mu = e(gibbs_measure(x, &v))?;
        let report = is_mrf(&mu).unwrap();
        check(report.holds && report.exhaustive, || format!("round {round}: Gibbs measure fails the MRF check: {:?}", report.witness))?;
        let c = e(cocycle_from_measure(&mu))?;
        check(c.support.configs() == x.configs(), || format!("round {round}: support is not the full space"))?;
        check(c.ratios == e(v.coboundary_ratios(x))?, || format!("round {round}: measure cocycle differs from the coboundary"))?;
        count += 1;
    }
    for x in &spaces {
        let c = e(cocycle_from_measure(&e(Measure::uniform(x))?))?;
        check(c.is_trivial(), || "uniform measure gives a nonzero cocycle".into())?;
    }
    Ok(format!("{count} random Gibbs measures, uniform measures give the zero cocycle"))
}

/// `H`: `a - c`, `a - d`, `b - c`, `b - d` and a loop at `b`. `H'` drops `a`.
fn golden_targets() -> (Graph, Graph) {
    let l = |s: &str| Label::from(s);
    let edges = [(l("a"), l("c")), (l("a"), l("d")), (l("b"), l("c")), (l("b"), l("d"))];
    let h = Graph::from_labels(vec![l("a"), l("b"), l("d"), l("c")], &edges, &[l("b")]).unwrap();
    let h_prime = Graph::from_labels(vec![l("b"), l("d"), l("c")], &edges[2..], &[l("b")]).unwrap();
    (h, h_prime)
}

fn golden_on(domain: &Graph, invariant: bool) -> Result<(), String> {
    let (h, h_prime) = golden_targets();
    let x = e(ConfigSpace::hom(domain, &h, DEFAULT_CAP))?;
    let sym = |s: &str| x.alphabet().index_of(&Label::from(s)).unwrap();
    let (a, b, c, d) = (sym("a"), sym("b"), sym("c"), sym("d"));
    let group = if invariant { e(domain.automorphisms())? } else { AutSubgroup::trivial(domain.len()) };

    check(e(x.safe_symbols())?.is_empty(), || "X should have no safe symbol".into())?;
    let cert = if invariant { e(fold_with_group(&x, a, b, &group))? } else { e(fold(&x, a, b))? };
    // the fold is Hom(domain, H')
    let x_prime = e(ConfigSpace::hom(domain, &h_prime, DEFAULT_CAP))?;
    let relabel = |s: Sym| sym(&x_prime.alphabet().label(s).to_string());
    let mut expected: Vec<Vec<Sym>> = x_prime.configs().iter().map(|y| y.iter().map(|&s| relabel(s)).collect()).collect();
    expected.sort();
    check(cert.folded.configs() == expected.as_slice(), || "folded space is not Hom(domain, H')".into())?;
    check(e(cert.folded.safe_symbols())?.contains(&b), || "b should be safe for the fold".into())?;

    let basis = if invariant { e(invariant_markov_space(&x, &group))? } else { e(markov_space(&x))? };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let m = random_combination(&mut rng, &basis.vectors, x.len());
    let restricted = e(restrict(&m, &cert))?;
    let v = e(solve_interaction(&cert.folded, &restricted))?.ok_or("restricted cocycle is not Gibbs")?;
    let (v, v_prime) = if invariant {
        check(e(is_invariant_cocycle(&x, &group, &m))?, || "cocycle not invariant".into())?;
        let v = v.average(&group);
        let built = e(build_invariant_interaction_via_fold(&cert, &m, &v, &group))?;
        (v, built)
    } else {
        let built = e(build_interaction_via_fold(&cert, &m, &v))?;
        (v, built)
    };
    let report = e(verify_realization(&x, &m, &v_prime))?;
    check(report.verified, || format!("built interaction fails: {:?}", report.failure))?;

    // V' = V away from a
    for p in cert.folded.local_patterns() {
        check(v_prime.get(&p) == v.get(&p), || format!("V' differs from V on {p:?}"))?;
    }
    let mval = |x1: &[Sym], x2: &[Sym]| m.value(x.index_of(x1).unwrap(), x.index_of(x2).unwrap());
    for v0 in 0..domain.len() {
        let nbrs = domain.neighbors(v0);
        // x^v: a at v, d around it, b elsewhere
        let xv: Vec<Sym> = (0..domain.len()).map(|u| if u == v0 { a } else if nbrs.contains(&u) { d } else { b }).collect();
        check(cert.special[&v0] == xv, || format!("special configuration at {v0} is {:?}", cert.special[&v0]))?;
        for &w in nbrs {
            check(v_prime.get(&Pattern::bond(v0, a, w, d)).is_zero(), || format!("V'([a,d]) != 0 on ({v0},{w})"))?;
        }
        let mut xb = xv.clone();
        xb[v0] = b;
        let mut single = mval(&xb, &xv) + v.get(&Pattern::site(v0, b));
        for &w in nbrs {
            single += v.get(&Pattern::bond(v0, b, w, d));
        }
        check(v_prime.get(&Pattern::site(v0, a)) == single, || format!("V'([a]) at {v0} does not match"))?;
        for &w in nbrs {
            let mut z = xv.clone();
            z[w] = c;
            let mut val = mval(&xv, &z) + v.get(&Pattern::site(w, d)) - v.get(&Pattern::site(w, c));
            for &u in domain.neighbors(w).iter().filter(|&&u| u != v0) {
                val += v.get(&Pattern::bond(w, d, u, b)) - v.get(&Pattern::bond(w, c, u, b));
            }
            check(v_prime.get(&Pattern::bond(v0, a, w, c)) == val, || format!("V'([a,c]) on ({v0},{w}) does not match"))?;
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    for (name, g) in [("4-cycle", Graph::cycle(4)), ("2x3 grid", Graph::grid(2, 3))] {
        for invariant in [false, true] {
            golden_on(&g, invariant).map_err(|m| format!("{name} (invariant: {invariant}): {m}"))?;
        }
    }
    Ok("4-cycle and 2x3 grid, plain and invariant: V'([a,d]) = 0 and all identities hold".into())
}

fn criterion_8() -> Outcome {
    check(Graph::cycle(4).graph_folds().contains(&(3, 1)), || "C4 is missing the fold (3,1)".into())?;
    check(Graph::cycle(3).graph_folds().is_empty(), || "C3 has folds".into())?;
    for g in [Graph::path(2), Graph::path(5), Graph::cycle(6), Graph::grid(2, 3), complete_bipartite(2, 3)] {
        let x = e(ConfigSpace::hom(&g, &Graph::edge(), DEFAULT_CAP))?;
        check(x.len() == 2, || format!("Hom(G, Edge) has {} configurations", x.len()))?;
    }
    let looped = Graph::with_loops(vec![Label::Int(0)], &[], &[0]).unwrap();
    let frozen_hom = e(ConfigSpace::hom(&Graph::grid(2, 3), &looped, DEFAULT_CAP))?;
    let g = Graph::cycle(4);
    let pinned = ConstraintSet::new((0..4).map(|v| Pattern::site(v, 1)));
    let frozen_pinned = e(ConfigSpace::enumerate(&g, &Alphabet::range(2), &pinned, DEFAULT_CAP))?;
    for x in [frozen_hom, frozen_pinned] {
        check(x.len() == 1, || "space is not a singleton".into())?;
        let r = e(is_hammersley_clifford(&x))?;
        check((r.markov_dim, r.gibbs_dim) == (0, 0), || format!("frozen dims ({}, {})", r.markov_dim, r.gibbs_dim))?;
    }
    Ok("C4 folds include (3,1), C3 has none, Hom(G, Edge) has 2 points, frozen dims (0,0)".into())
}

#[test]
fn acceptance_criteria() {
    let (instances, discarded) = instances(INSTANCES, SEED);
    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        r.map(|s| format!("{s} [{secs:.1}s]")).map_err(|s| format!("{s} [{secs:.1}s]"))
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("1 safe-symbol Hammersley-Clifford", timed(&criterion_1)),
        ("2 Hom(G, C4) Hammersley-Clifford", timed(&criterion_2)),
        ("3 fold invariance of the quotient", timed(&|| criterion_3(&instances)).map(|s| format!("{s}, {discarded} draws discarded"))),
        ("4 constructive extension", timed(&|| criterion_4(&instances))),
        ("5 restrict/lift identities", timed(&|| criterion_5(&instances))),
        ("6 measure bridge", timed(&criterion_6)),
        ("7 worked example", timed(&criterion_7)),
        ("8 structural sanity", timed(&criterion_8)),
    ];
    let mut failed = Vec::new();
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL criterion {name}: {detail}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
