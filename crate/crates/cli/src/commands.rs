use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use hcfold::cocycle::{
    gibbs_space, invariant_gibbs_space, invariant_markov_space, markov_space, quotient_dimension, restrict, Cocycle,
    CocycleBasis, cocycle_from_measure,
};
use hcfold::folding::{available_folds, fold, fold_sequence, fold_violation, fold_with_group, FoldCertificate};
use hcfold::graph::{AutSubgroup, Graph};
use hcfold::interaction::{
    build_interaction_via_fold, build_invariant_interaction_via_fold, solve_interaction, verify_realization,
};
use hcfold::measure::{is_mrf, Measure};
use hcfold::space::{ConfigSpace, Pattern, Sym};
use hcfold::{format_rational, Error};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::format::*;
use crate::{
    Cli, Command, FoldCmd, GlobalOpts, GraphCmd, SpaceCmd, EXIT_CAPACITY, EXIT_INPUT, EXIT_INVALID_FOLD, EXIT_OTHER,
    EXIT_VERIFICATION,
};

/// Output of a command: a JSON record and its text rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({"schema_version": SCHEMA_VERSION, "error": {"code": self.code, "message": self.message}})
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::EmptySpace => EXIT_INPUT,
            Error::Capacity(_) => EXIT_CAPACITY,
            Error::InvalidFold(_) => EXIT_INVALID_FOLD,
            Error::Internal(_) => EXIT_VERIFICATION,
        };
        CliError::new(code, e.to_string())
    }
}

type Res<T> = Result<T, CliError>;

fn report(command: &str, mut body: Value, text: String) -> Report {
    body["schema_version"] = json!(SCHEMA_VERSION);
    body["command"] = json!(command);
    Report { json: body, text }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::new(EXIT_INPUT, format!("malformed JSON in {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Res<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::new(EXIT_OTHER, format!("cannot write {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Res<Graph> {
    Ok(read_json::<GraphFile>(path)?.to_graph()?)
}

fn load_space(path: &Path, cap: u64) -> Res<ConfigSpace> {
    Ok(read_json::<SpaceFile>(path)?.to_space(cap)?)
}

fn group_for(opts: &GlobalOpts, space: &ConfigSpace) -> Res<Option<AutSubgroup>> {
    let g = space.graph();
    let group = match opts.group.as_str() {
        "trivial" => return Ok(None),
        "full-aut" => g.automorphisms()?,
        "stabilizer" => space.stabilizer()?,
        other => match other.strip_prefix("file:") {
            Some(path) => read_json::<GroupFile>(Path::new(path))?.to_group(g)?,
            None => return Err(CliError::new(EXIT_INPUT, format!("unknown group {other:?}"))),
        },
    };
    Ok(Some(group))
}

fn label_pairs(g: &Graph, pairs: &[(usize, usize)]) -> Vec<[Id; 2]> {
    pairs.iter().map(|&(a, b)| [Id::from(g.label(a)), Id::from(g.label(b))]).collect()
}

fn symbol_pairs(space: &ConfigSpace, pairs: &[(Sym, Sym)]) -> Vec<[Id; 2]> {
    let l = |s: Sym| Id::from(space.alphabet().label(s));
    pairs.iter().map(|&(a, b)| [l(a), l(b)]).collect()
}

fn show_config(space: &ConfigSpace, x: &[Sym]) -> String {
    let parts: Vec<String> = x.iter().map(|&s| space.alphabet().label(s).to_string()).collect();
    format!("[{}]", parts.join(" "))
}

fn show_pattern(space: &ConfigSpace, p: &Pattern) -> String {
    let parts: Vec<String> = p
        .support()
        .iter()
        .zip(p.values())
        .map(|(&v, &s)| format!("{}={}", space.graph().label(v), space.alphabet().label(s)))
        .collect();
    parts.join(",")
}

pub fn run(cli: &Cli) -> Res<Report> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Graph { cmd } => graph_cmd(cmd),
        Command::Space { cmd } => space_cmd(opts, cmd),
        Command::Cocycles { space, export_basis } => cocycles_cmd(opts, space, export_basis.as_deref()),
        Command::Fold { cmd } => fold_cmd(opts, cmd),
        Command::Restrict { space, certificate, cocycle, output } => {
            restrict_cmd(opts, space, certificate, cocycle, output.as_deref())
        }
        Command::Solve { space, cocycle, output } => solve_cmd(opts, space, cocycle, output.as_deref()),
        Command::Build { space, certificate, cocycle, interaction, output } => {
            build_cmd(opts, space, certificate, cocycle, interaction, output.as_deref())
        }
        Command::Measure { space, measure } => measure_cmd(opts, space, measure),
    }
}

fn graph_cmd(cmd: &GraphCmd) -> Res<Report> {
    match cmd {
        GraphCmd::Folds { graph } => {
            let g = load_graph(graph)?;
            let folds = g.graph_folds();
            let mut text = format!("{} fold(s)\n", folds.len());
            for &(a, b) in &folds {
                writeln!(text, "  {} -> {}", g.label(a), g.label(b)).unwrap();
            }
            Ok(report("graph folds", json!({"folds": label_pairs(&g, &folds)}), text))
        }
        GraphCmd::Dismantle { graph } => {
            let g = load_graph(graph)?;
            match g.dismantle() {
                Some(seq) => {
                    let last = (0..g.len()).find(|v| !seq.iter().any(|&(a, _)| a == *v)).expect("one vertex remains");
                    let mut text = format!("dismantlable in {} folds, ending at {}\n", seq.len(), g.label(last));
                    for &(a, b) in &seq {
                        writeln!(text, "  {} -> {}", g.label(a), g.label(b)).unwrap();
                    }
                    let body = json!({"dismantlable": true, "sequence": label_pairs(&g, &seq), "final_vertex": Id::from(g.label(last))});
                    Ok(report("graph dismantle", body, text))
                }
                None => Ok(report("graph dismantle", json!({"dismantlable": false}), "not dismantlable\n".into())),
            }
        }
        GraphCmd::Autgroup { graph } => {
            let g = load_graph(graph)?;
            let group = g.automorphisms()?;
            let elements: Vec<Vec<Id>> = group.elements().iter().map(|p| permutation_ids(&g, p)).collect();
            let text = format!("automorphism group of order {}\n", group.order());
            Ok(report("graph autgroup", json!({"order": group.order(), "elements": elements}), text))
        }
    }
}

fn space_summary(space: &ConfigSpace) -> (Value, String) {
    let configs: Vec<Vec<Id>> = space.configs().iter().map(|x| config_ids(space, x)).collect();
    let mut text = format!("{} configurations\n", space.len());
    for x in space.configs().iter().take(20) {
        writeln!(text, "  {}", show_config(space, x)).unwrap();
    }
    if space.len() > 20 {
        writeln!(text, "  ...").unwrap();
    }
    let body = json!({
        "count": space.len(),
        "configurations": configs,
        "nearest_neighbour": space.is_nearest_neighbour(),
        "space_hash": space_hash(space),
    });
    (body, text)
}

fn with_group_invariance(opts: &GlobalOpts, space: &ConfigSpace, body: &mut Value, text: &mut String) -> Res<()> {
    if let Some(group) = group_for(opts, space)? {
        let inv = space.is_invariant(&group)?;
        body["group_order"] = json!(group.order());
        body["invariant"] = json!(inv);
        writeln!(text, "invariant under the group of order {}: {inv}", group.order()).unwrap();
    }
    Ok(())
}

fn space_cmd(opts: &GlobalOpts, cmd: &SpaceCmd) -> Res<Report> {
    match cmd {
        SpaceCmd::Enumerate { space, output } => {
            let x = load_space(space, opts.cap)?;
            let (mut body, mut text) = space_summary(&x);
            with_group_invariance(opts, &x, &mut body, &mut text)?;
            if let Some(out) = output {
                write_json(out, &SpaceFile::from_space(&x))?;
            }
            Ok(report("space enumerate", body, text))
        }
        SpaceCmd::Hom { domain, target, output } => {
            let file = SpaceFile {
                graph: read_json(domain)?,
                target: Some(read_json(target)?),
                alphabet: None,
                forbidden: None,
                configurations: None,
            };
            let x = file.to_space(opts.cap)?;
            let (mut body, mut text) = space_summary(&x);
            with_group_invariance(opts, &x, &mut body, &mut text)?;
            if let Some(out) = output {
                write_json(out, &file)?;
            }
            Ok(report("space hom", body, text))
        }
        SpaceCmd::TmfCheck { space } => {
            let x = load_space(space, opts.cap)?;
            let r = x.is_tmf()?;
            let (body, text) = match &r.witness {
                None => (json!({"tmf": true, "witness": null}), "topological Markov field: yes\n".to_string()),
                Some(w) => {
                    let subset: Vec<Id> = w.subset.iter().map(|&v| Id::from(x.graph().label(v))).collect();
                    let body = json!({"tmf": false, "witness": {
                        "x": config_ids(&x, &w.x), "y": config_ids(&x, &w.y),
                        "subset": subset, "glued": config_ids(&x, &w.glued),
                    }});
                    let text = format!(
                        "topological Markov field: no\n  gluing {} and {} gives {}, which is not in X\n",
                        show_config(&x, &w.x),
                        show_config(&x, &w.y),
                        show_config(&x, &w.glued)
                    );
                    (body, text)
                }
            };
            Ok(report("space tmf-check", body, text))
        }
        SpaceCmd::SafeSymbols { space } => {
            let x = load_space(space, opts.cap)?;
            let safe = x.safe_symbols()?;
            let ids: Vec<Id> = safe.iter().map(|&s| Id::from(x.alphabet().label(s))).collect();
            let names: Vec<String> = safe.iter().map(|&s| x.alphabet().label(s).to_string()).collect();
            let text = format!("safe symbols: {}\n", if names.is_empty() { "none".into() } else { names.join(", ") });
            Ok(report("space safe-symbols", json!({"safe_symbols": ids, "method": "single-site replacement"}), text))
        }
        SpaceCmd::Constraints { space } => {
            let x = load_space(space, opts.cap)?;
            let (cs, exact) = x.induced_constraints(opts.cap)?;
            let patterns: Vec<Value> = cs
                .patterns()
                .iter()
                .map(|p| {
                    let support: Vec<Id> = p.support().iter().map(|&v| Id::from(x.graph().label(v))).collect();
                    let values: Vec<Id> = p.values().iter().map(|&s| Id::from(x.alphabet().label(s))).collect();
                    json!({"support": support, "values": values})
                })
                .collect();
            let text = format!(
                "{} forbidden patterns induced; they define exactly this space: {exact}\n",
                cs.patterns().len()
            );
            Ok(report("space constraints", json!({"forbidden": patterns, "exact": exact}), text))
        }
    }
}

fn basis_json(b: &CocycleBasis) -> Vec<Vec<String>> {
    b.vectors.iter().map(|c| c.potential().iter().map(format_rational).collect()).collect()
}

fn cocycles_cmd(opts: &GlobalOpts, space: &Path, export: Option<&Path>) -> Res<Report> {
    let x = load_space(space, opts.cap)?;
    let markov = markov_space(&x)?;
    let gibbs = gibbs_space(&x)?;
    let (m, g) = (markov.dim(), gibbs.dim());
    let mut body = json!({
        "configurations": x.len(),
        "markov_dim": m,
        "gibbs_dim": g,
        "quotient_dim": m - g,
        "hammersley_clifford": m == g,
    });
    let mut text = format!(
        "{} configurations\nMarkov cocycles: {m}\nGibbs cocycles: {g}\nquotient: {}\nHammersley-Clifford: {}\n",
        x.len(),
        m - g,
        m == g
    );
    let mut export_body = json!({
        "schema_version": SCHEMA_VERSION,
        "space_hash": space_hash(&x),
        "markov": basis_json(&markov),
        "gibbs": basis_json(&gibbs),
    });
    if let Some(group) = group_for(opts, &x)? {
        let im = invariant_markov_space(&x, &group)?;
        let ig = invariant_gibbs_space(&x, &group)?;
        let (m, g) = (im.dim(), ig.dim());
        body["group_order"] = json!(group.order());
        body["invariant"] = json!({
            "markov_dim": m, "gibbs_dim": g, "quotient_dim": m - g, "hammersley_clifford": m == g,
        });
        write!(
            text,
            "invariant under the group of order {}:\n  Markov cocycles: {m}\n  Gibbs cocycles: {g}\n  quotient: {}\n  Hammersley-Clifford: {}\n",
            group.order(),
            m - g,
            m == g
        )
        .unwrap();
        export_body["invariant_markov"] = json!(basis_json(&im));
        export_body["invariant_gibbs"] = json!(basis_json(&ig));
    }
    if let Some(path) = export {
        write_json(path, &export_body)?;
        writeln!(text, "bases written to {}", path.display()).unwrap();
    }
    Ok(report("cocycles", body, text))
}

fn make_certificate(opts: &GlobalOpts, x: &ConfigSpace, a: Sym, b: Sym) -> Res<FoldCertificate> {
    Ok(match group_for(opts, x)? {
        Some(group) => fold_with_group(x, a, b, &group)?,
        None => fold(x, a, b)?,
    })
}

fn fold_cmd(opts: &GlobalOpts, cmd: &FoldCmd) -> Res<Report> {
    match cmd {
        FoldCmd::List { space } => {
            let x = load_space(space, opts.cap)?;
            let folds = available_folds(&x)?;
            let mut text = format!("{} fold(s)\n", folds.len());
            for &(a, b) in &folds {
                writeln!(text, "  {} -> {}", x.alphabet().label(a), x.alphabet().label(b)).unwrap();
            }
            Ok(report("fold list", json!({"folds": symbol_pairs(&x, &folds)}), text))
        }
        FoldCmd::Check { space, a, b } => {
            let x = load_space(space, opts.cap)?;
            let (sa, sb) = (symbol_by_name(x.alphabet(), a)?, symbol_by_name(x.alphabet(), b)?);
            match fold_violation(&x, sa, sb)? {
                None => Ok(report("fold check", json!({"a": a, "b": b, "valid": true}), format!("{a} can be folded into {b}\n"))),
                Some(reason) => Err(CliError::new(EXIT_INVALID_FOLD, format!("{a} cannot be folded into {b}: {reason}"))),
            }
        }
        FoldCmd::Apply { space, a, b, output, folded_output } => {
            let x = load_space(space, opts.cap)?;
            let (sa, sb) = (symbol_by_name(x.alphabet(), a)?, symbol_by_name(x.alphabet(), b)?);
            let cert = make_certificate(opts, &x, sa, sb)?;
            let file = CertificateFile::from_certificate(&cert);
            let mut text = format!(
                "folded {a} into {b}: {} -> {} configurations\n  special configurations at {} vertices\n",
                x.len(),
                cert.folded.len(),
                cert.special.len()
            );
            let mut body = json!({"a": a, "b": b, "space_size": x.len(), "folded_size": cert.folded.len()});
            match output {
                Some(path) => {
                    write_json(path, &file)?;
                    writeln!(text, "certificate written to {}", path.display()).unwrap();
                }
                None => body["certificate"] = json!(file),
            }
            if let Some(path) = folded_output {
                write_json(path, &SpaceFile::from_space(&cert.folded))?;
                writeln!(text, "folded space written to {}", path.display()).unwrap();
            }
            Ok(report("fold apply", body, text))
        }
        FoldCmd::Sequence { space } => {
            let x = load_space(space, opts.cap)?;
            let seq = fold_sequence(&x)?;
            let mut trace = vec![quotient_dimension(&x)?];
            let mut sizes = vec![x.len()];
            let mut steps = Vec::new();
            for step in &seq.steps {
                trace.push(quotient_dimension(&step.folded)?);
                sizes.push(step.folded.len());
                steps.push((step.a, step.b));
            }
            if trace.iter().any(|&q| q != trace[0]) {
                return Err(CliError::new(EXIT_VERIFICATION, format!("quotient dimension changed along the sequence: {trace:?}")));
            }
            let mut text = format!("{} fold(s), {} -> {} configurations\n", steps.len(), x.len(), seq.terminal.len());
            for (i, &(a, b)) in steps.iter().enumerate() {
                writeln!(
                    text,
                    "  {} -> {}: {} configurations, quotient {}",
                    x.alphabet().label(a),
                    x.alphabet().label(b),
                    sizes[i + 1],
                    trace[i + 1]
                )
                .unwrap();
            }
            let body = json!({
                "steps": symbol_pairs(&x, &steps),
                "sizes": sizes,
                "quotient_trace": trace,
                "terminal_size": seq.terminal.len(),
                "terminal_singleton": seq.terminal.len() == 1,
            });
            Ok(report("fold sequence", body, text))
        }
    }
}

/// Recompute the certificate described by `path` and check it matches.
fn load_certificate(opts: &GlobalOpts, x: &ConfigSpace, path: &Path) -> Res<FoldCertificate> {
    let file: CertificateFile = read_json(path)?;
    let (a, b, group) = file.resolve(x)?;
    let group = match group_for(opts, x)? {
        Some(g) => Some(g),
        None => group,
    };
    let cert = match &group {
        Some(g) => fold_with_group(x, a, b, g)?,
        None => fold(x, a, b)?,
    };
    let mut again = CertificateFile::from_certificate(&cert);
    again.group = file.group.clone();
    if again != file {
        return Err(CliError::new(EXIT_INPUT, "certificate does not match the fold recomputed from the space"));
    }
    Ok(cert)
}

fn load_cocycle(x: &ConfigSpace, path: &Path) -> Res<Cocycle> {
    let p = read_json::<CocycleFile>(path)?.potential(x)?;
    Ok(Cocycle::from_potential(p)?)
}

fn restrict_cmd(opts: &GlobalOpts, space: &Path, cert: &Path, cocycle: &Path, output: Option<&Path>) -> Res<Report> {
    let x = load_space(space, opts.cap)?;
    let cert = load_certificate(opts, &x, cert)?;
    let m = load_cocycle(&x, cocycle)?;
    let r = restrict(&m, &cert)?;
    let file = CocycleFile::new(&cert.folded, r.potential());
    let mut body = json!({"folded_size": cert.folded.len()});
    let mut text = format!("restricted to the fold: {} configurations\n", cert.folded.len());
    match output {
        Some(path) => {
            write_json(path, &file)?;
            writeln!(text, "cocycle written to {}", path.display()).unwrap();
        }
        None => body["cocycle"] = json!(file),
    }
    Ok(report("restrict", body, text))
}

fn solve_cmd(opts: &GlobalOpts, space: &Path, cocycle: &Path, output: Option<&Path>) -> Res<Report> {
    let x = load_space(space, opts.cap)?;
    let m = load_cocycle(&x, cocycle)?;
    let Some(v) = solve_interaction(&x, &m)? else {
        return Ok(report("solve", json!({"gibbs": false, "interaction": null}), "not a Gibbs cocycle\n".into()));
    };
    let entries = interaction_to_file(&x, &v);
    let mut body = json!({"gibbs": true});
    let mut text = format!("Gibbs cocycle, realized by {} nonzero weights\n", entries.len());
    match output {
        Some(path) => {
            write_json(path, &entries)?;
            writeln!(text, "interaction written to {}", path.display()).unwrap();
        }
        None => body["interaction"] = json!(entries),
    }
    Ok(report("solve", body, text))
}

fn build_cmd(
    opts: &GlobalOpts,
    space: &Path,
    cert: &Path,
    cocycle: &Path,
    interaction: &Path,
    output: Option<&Path>,
) -> Res<Report> {
    let x = load_space(space, opts.cap)?;
    let cert = load_certificate(opts, &x, cert)?;
    let m = load_cocycle(&x, cocycle)?;
    let entries: Vec<InteractionEntry> = read_json(interaction)?;
    let v = interaction_from_file(&cert.folded, &entries)?;
    let built = match &cert.group {
        Some(group) => build_invariant_interaction_via_fold(&cert, &m, &v, group)?,
        None => build_interaction_via_fold(&cert, &m, &v)?,
    };
    let check = verify_realization(&x, &m, &built)?;
    if !check.verified {
        let f = check.failure.expect("failure is reported");
        return Err(CliError::new(
            EXIT_VERIFICATION,
            format!(
                "built interaction fails on pair {:?}: cocycle {} but energy difference {}",
                f.pair,
                format_rational(&f.cocycle_value),
                format_rational(&f.energy_difference)
            ),
        ));
    }
    let entries = interaction_to_file(&x, &built);
    let mut body = json!({
        "verified": true,
        "exhaustive": check.exhaustive,
        "pairs_checked": check.pairs_checked,
        "weights": entries.len(),
        "invariant": cert.group.is_some(),
    });
    let mut text = format!(
        "extended interaction with {} weights; {} pairs checked{}\n",
        entries.len(),
        check.pairs_checked,
        if check.exhaustive { " (all pairs)" } else { " (pairs with the base)" }
    );
    let a = cert.a;
    for (p, w) in built.weights().iter().filter(|(p, _)| p.mentions(a)) {
        writeln!(text, "  V'({}) = {}", show_pattern(&x, p), format_rational(w)).unwrap();
    }
    match output {
        Some(path) => {
            write_json(path, &entries)?;
            writeln!(text, "interaction written to {}", path.display()).unwrap();
        }
        None => body["interaction"] = json!(entries),
    }
    Ok(report("build", body, text))
}

fn measure_cmd(opts: &GlobalOpts, space: &Path, measure: &Path) -> Res<Report> {
    let x = load_space(space, opts.cap)?;
    let file: BTreeMap<String, String> = read_json(measure)?;
    let mu = Measure::new(x.clone(), measure_weights(&x, &file)?)?;
    let r = is_mrf(&mu)?;
    let mut body = json!({"mrf": r.holds, "exhaustive": r.exhaustive, "subsets_checked": r.subsets_checked});
    let mut text = format!("Markov random field: {} ({} subsets checked)\n", r.holds, r.subsets_checked);
    if let Some(w) = &r.witness {
        let ids = |set: &[usize]| set.iter().map(|&v| Id::from(x.graph().label(v))).collect::<Vec<_>>();
        let syms = |vals: &[Sym]| vals.iter().map(|&s| Id::from(x.alphabet().label(s))).collect::<Vec<_>>();
        body["witness"] = json!({"a_set": ids(&w.a_set), "b_set": ids(&w.b_set), "a": syms(&w.a), "b": syms(&w.b)});
        writeln!(text, "  conditional independence fails for A = {:?}", ids(&w.a_set)).unwrap();
    } else {
        let c = cocycle_from_measure(&mu)?;
        let support = &c.support;
        body["support_size"] = json!(support.len());
        body["support_tmf"] = json!(support.is_tmf()?.holds);
        body["ratios"] = json!(c.ratios.iter().map(format_rational).collect::<Vec<_>>());
        body["support"] = json!(support.configs().iter().map(|y| config_ids(support, y)).collect::<Vec<_>>());
        body["trivial"] = json!(c.is_trivial());
        writeln!(text, "  support: {} configurations; cocycle trivial: {}", support.len(), c.is_trivial()).unwrap();
    }
    Ok(report("measure", body, text))
}
