//! JSON file formats for graphs, spaces, interactions, cocycles, measures,
//! groups and fold certificates.

use std::collections::BTreeMap;

use hcfold::folding::FoldCertificate;
use hcfold::graph::{AutSubgroup, Graph};
use hcfold::interaction::Interaction;
use hcfold::space::{Alphabet, Config, ConfigSpace, ConstraintSet, Pattern, Sym};
use hcfold::{format_rational, parse_rational, Error, Label, Q};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// A vertex or symbol identifier as written in JSON: an integer or a string.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum Id {
    Int(i64),
    Str(String),
}

impl From<&Label> for Id {
    fn from(l: &Label) -> Self {
        match l {
            Label::Int(i) => Id::Int(*i),
            Label::Str(s) => Id::Str(s.clone()),
        }
    }
}

impl From<&Id> for Label {
    fn from(id: &Id) -> Self {
        match id {
            Id::Int(i) => Label::Int(*i),
            Id::Str(s) => Label::Str(s.clone()),
        }
    }
}

fn vertex(g: &Graph, id: &Id) -> Result<usize, Error> {
    g.index_of(&id.into()).ok_or_else(|| bad(format!("unknown vertex {id:?}")))
}

fn symbol(a: &Alphabet, id: &Id) -> Result<Sym, Error> {
    a.index_of(&id.into()).ok_or_else(|| bad(format!("unknown symbol {id:?}")))
}

/// Symbol named on the command line, matched against the printed form of the labels.
pub fn symbol_by_name(a: &Alphabet, name: &str) -> Result<Sym, Error> {
    (0..a.len() as Sym)
        .find(|&s| a.label(s).to_string() == name)
        .ok_or_else(|| bad(format!("unknown symbol {name:?}")))
}

pub fn rational(s: &str) -> Result<Q, Error> {
    parse_rational(s).ok_or_else(|| bad(format!("malformed rational {s:?}")))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<Id>,
    #[serde(default)]
    pub edges: Vec<[Id; 2]>,
    #[serde(default)]
    pub loops: Vec<Id>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        let id = |v: usize| Id::from(g.label(v));
        GraphFile {
            vertices: g.labels().iter().map(Id::from).collect(),
            edges: g.edges().iter().map(|&(u, v)| [id(u), id(v)]).collect(),
            loops: g.loops().iter().map(|&v| id(v)).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, Error> {
        let labels = self.vertices.iter().map(Label::from).collect();
        let edges: Vec<(Label, Label)> = self.edges.iter().map(|[u, v]| (u.into(), v.into())).collect();
        let loops: Vec<Label> = self.loops.iter().map(Label::from).collect();
        Graph::from_labels(labels, &edges, &loops)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub support: Vec<Id>,
    pub values: Vec<Id>,
}

fn pattern_file(space: &ConfigSpace, p: &Pattern) -> PatternFile {
    PatternFile {
        support: p.support().iter().map(|&v| Id::from(space.graph().label(v))).collect(),
        values: p.values().iter().map(|&s| Id::from(space.alphabet().label(s))).collect(),
    }
}

fn pattern_from_ids(g: &Graph, a: &Alphabet, support: &[Id], values: &[Id]) -> Result<Pattern, Error> {
    let support = support.iter().map(|id| vertex(g, id)).collect::<Result<_, _>>()?;
    let values = values.iter().map(|id| symbol(a, id)).collect::<Result<_, _>>()?;
    Pattern::new(support, values)
}

/// A configuration space given by forbidden patterns, by a homomorphism
/// target, or by an explicit list of configurations.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub graph: GraphFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<GraphFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<Id>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Vec<PatternFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configurations: Option<Vec<Vec<Id>>>,
}

impl SpaceFile {
    pub fn from_space(space: &ConfigSpace) -> Self {
        SpaceFile {
            graph: GraphFile::from_graph(space.graph()),
            target: None,
            alphabet: Some(space.alphabet().symbols().iter().map(Id::from).collect()),
            forbidden: Some(space.constraints().patterns().iter().map(|p| pattern_file(space, p)).collect()),
            configurations: Some(space.configs().iter().map(|x| config_ids(space, x)).collect()),
        }
    }

    pub fn to_space(&self, cap: u64) -> Result<ConfigSpace, Error> {
        let graph = self.graph.to_graph()?;
        if let Some(target) = &self.target {
            if self.alphabet.is_some() || self.forbidden.is_some() || self.configurations.is_some() {
                return Err(bad("a space with a target takes no alphabet, forbidden patterns or configurations"));
            }
            return ConfigSpace::hom(&graph, &target.to_graph()?, cap);
        }
        let ids = self.alphabet.as_ref().ok_or_else(|| bad("space needs an alphabet or a target"))?;
        let alphabet = Alphabet::new(ids.iter().map(Label::from).collect())?;
        let forbidden = match &self.forbidden {
            Some(list) => list
                .iter()
                .map(|p| pattern_from_ids(&graph, &alphabet, &p.support, &p.values))
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        let constraints = ConstraintSet::new(forbidden);
        match &self.configurations {
            None => ConfigSpace::enumerate(&graph, &alphabet, &constraints, cap),
            Some(list) => {
                let configs = list
                    .iter()
                    .map(|x| {
                        if x.len() != graph.len() {
                            return Err(bad(format!("configuration {x:?} has the wrong length")));
                        }
                        x.iter().map(|id| symbol(&alphabet, id)).collect::<Result<Config, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(x) = configs.iter().find(|x| constraints.patterns().iter().any(|p| p.matches(x))) {
                    return Err(bad(format!("configuration {x:?} contains a forbidden pattern")));
                }
                ConfigSpace::from_configs(&graph, &alphabet, configs, cap)
            }
        }
    }
}

pub fn config_ids(space: &ConfigSpace, x: &[Sym]) -> Vec<Id> {
    x.iter().map(|&s| Id::from(space.alphabet().label(s))).collect()
}

/// Content hash of a space: graph, alphabet and configuration list.
pub fn space_hash(space: &ConfigSpace) -> String {
    let canonical = serde_json::json!({
        "graph": GraphFile::from_graph(space.graph()),
        "alphabet": space.alphabet().symbols().iter().map(Id::from).collect::<Vec<_>>(),
        "configurations": space.configs().iter().map(|x| config_ids(space, x)).collect::<Vec<_>>(),
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InteractionEntry {
    pub support: Vec<Id>,
    pub pattern: Vec<Id>,
    pub weight: String,
}

pub fn interaction_to_file(space: &ConfigSpace, v: &Interaction) -> Vec<InteractionEntry> {
    v.weights()
        .iter()
        .map(|(p, w)| {
            let f = pattern_file(space, p);
            InteractionEntry { support: f.support, pattern: f.values, weight: format_rational(w) }
        })
        .collect()
}

pub fn interaction_from_file(space: &ConfigSpace, entries: &[InteractionEntry]) -> Result<Interaction, Error> {
    let mut v = Interaction::new();
    for e in entries {
        let p = pattern_from_ids(space.graph(), space.alphabet(), &e.support, &e.pattern)?;
        if v.weights().contains_key(&p) {
            return Err(bad(format!("pattern {:?} on {:?} listed twice", e.pattern, e.support)));
        }
        v.set(p, rational(&e.weight)?);
    }
    Ok(v)
}

/// A cocycle as its potential over the configurations of a space, in order.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum CocycleFile {
    Bare(Vec<String>),
    Tagged {
        #[serde(default)]
        schema_version: Option<u32>,
        #[serde(default)]
        space_hash: Option<String>,
        potential: Vec<String>,
    },
}

impl CocycleFile {
    pub fn new(space: &ConfigSpace, potential: &[Q]) -> Self {
        CocycleFile::Tagged {
            schema_version: Some(SCHEMA_VERSION),
            space_hash: Some(space_hash(space)),
            potential: potential.iter().map(format_rational).collect(),
        }
    }

    pub fn potential(&self, space: &ConfigSpace) -> Result<Vec<Q>, Error> {
        let (hash, values) = match self {
            CocycleFile::Bare(v) => (None, v),
            CocycleFile::Tagged { space_hash, potential, .. } => (space_hash.as_ref(), potential),
        };
        if let Some(h) = hash {
            if *h != space_hash(space) {
                return Err(bad("cocycle was written for a different space"));
            }
        }
        if values.len() != space.len() {
            return Err(bad(format!("potential has {} entries, the space has {} configurations", values.len(), space.len())));
        }
        values.iter().map(|s| rational(s)).collect()
    }
}

/// Configuration index to weight; missing indices weigh zero.
pub fn measure_weights(space: &ConfigSpace, file: &BTreeMap<String, String>) -> Result<Vec<Q>, Error> {
    let mut w = vec![Q::from_integer(0.into()); space.len()];
    for (k, v) in file {
        let i: usize = k.parse().map_err(|_| bad(format!("measure key {k:?} is not a configuration index")))?;
        if i >= space.len() {
            return Err(bad(format!("configuration index {i} out of range")));
        }
        w[i] = rational(v)?;
    }
    Ok(w)
}

/// Permutations written as the images of the vertices, in vertex order.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Id>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<Id>>>,
}

fn permutation(g: &Graph, images: &[Id]) -> Result<Vec<usize>, Error> {
    if images.len() != g.len() {
        return Err(bad("a permutation must list one image per vertex"));
    }
    images.iter().map(|id| vertex(g, id)).collect()
}

pub fn permutation_ids(g: &Graph, p: &[usize]) -> Vec<Id> {
    p.iter().map(|&v| Id::from(g.label(v))).collect()
}

impl GroupFile {
    pub fn to_group(&self, g: &Graph) -> Result<AutSubgroup, Error> {
        match (&self.generators, &self.elements) {
            (Some(gens), None) => {
                let gens = gens.iter().map(|p| permutation(g, p)).collect::<Result<Vec<_>, _>>()?;
                AutSubgroup::generated_by(g, &gens)
            }
            (None, Some(elems)) => {
                let elems = elems.iter().map(|p| permutation(g, p)).collect::<Result<Vec<_>, _>>()?;
                AutSubgroup::new(g, elems)
            }
            _ => Err(bad("a group file lists either generators or elements")),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpecialEntry {
    pub vertex: Id,
    pub configuration: Vec<Id>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NeighbourEntry {
    pub vertex: Id,
    pub neighbour: Id,
    pub symbol: Id,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub a: Id,
    pub b: Id,
    pub space_hash: String,
    pub folded_hash: String,
    pub space_size: usize,
    pub folded_size: usize,
    pub first_part: Vec<Id>,
    pub v1: Vec<Id>,
    pub v2: Vec<Id>,
    pub special: Vec<SpecialEntry>,
    pub neighbour_symbols: Vec<NeighbourEntry>,
    pub group: Option<Vec<Vec<Id>>>,
}

impl CertificateFile {
    pub fn from_certificate(cert: &FoldCertificate) -> Self {
        let x = &cert.space;
        let g = x.graph();
        let vid = |v: usize| Id::from(g.label(v));
        let sid = |s: Sym| Id::from(x.alphabet().label(s));
        CertificateFile {
            schema_version: SCHEMA_VERSION,
            a: sid(cert.a),
            b: sid(cert.b),
            space_hash: space_hash(x),
            folded_hash: space_hash(&cert.folded),
            space_size: x.len(),
            folded_size: cert.folded.len(),
            first_part: cert.first_part.iter().map(|&v| vid(v)).collect(),
            v1: cert.v1.iter().map(|&v| vid(v)).collect(),
            v2: cert.v2.iter().map(|&v| vid(v)).collect(),
            special: cert
                .special
                .iter()
                .map(|(&v, c)| SpecialEntry { vertex: vid(v), configuration: config_ids(x, c) })
                .collect(),
            neighbour_symbols: cert
                .neighbour_symbols
                .iter()
                .map(|(&(v, w), &s)| NeighbourEntry { vertex: vid(v), neighbour: vid(w), symbol: sid(s) })
                .collect(),
            group: cert.group.as_ref().map(|grp| grp.elements().iter().map(|p| permutation_ids(g, p)).collect()),
        }
    }

    /// Symbols of the fold and the group it was made with, checked against `space`.
    pub fn resolve(&self, space: &ConfigSpace) -> Result<(Sym, Sym, Option<AutSubgroup>), Error> {
        if self.space_hash != space_hash(space) {
            return Err(bad("certificate was issued for a different space"));
        }
        let a = symbol(space.alphabet(), &self.a)?;
        let b = symbol(space.alphabet(), &self.b)?;
        let group = match &self.group {
            Some(elems) => {
                let elems = elems.iter().map(|p| permutation(space.graph(), p)).collect::<Result<Vec<_>, _>>()?;
                Some(AutSubgroup::new(space.graph(), elems)?)
            }
            None => None,
        };
        Ok((a, b, group))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip_is_exact() {
        let text = r#"{"vertices":["a",2,"c"],"edges":[["a",2],[2,"c"]],"loops":["c"]}"#;
        let f: GraphFile = serde_json::from_str(text).unwrap();
        let g = f.to_graph().unwrap();
        assert_eq!(serde_json::to_string(&GraphFile::from_graph(&g)).unwrap(), text);
    }

    #[test]
    fn spaces_load_three_ways() {
        let g = r#"{"vertices":[0,1,2],"edges":[[0,1],[1,2]]}"#;
        let hard_core = format!(
            r#"{{"graph":{g},"alphabet":[0,1],"forbidden":[{{"support":[0,1],"values":[1,1]}},{{"support":[1,2],"values":[1,1]}}]}}"#
        );
        let x = serde_json::from_str::<SpaceFile>(&hard_core).unwrap().to_space(1000).unwrap();
        assert_eq!(x.len(), 5);
        let again = SpaceFile::from_space(&x).to_space(1000).unwrap();
        assert_eq!(again.configs(), x.configs());
        assert_eq!(space_hash(&again), space_hash(&x));
        let hom = format!(r#"{{"graph":{g},"target":{{"vertices":["p","q"],"edges":[["p","q"]]}}}}"#);
        assert_eq!(serde_json::from_str::<SpaceFile>(&hom).unwrap().to_space(1000).unwrap().len(), 2);
        let bad_target = format!(r#"{{"graph":{g},"target":{{"vertices":[0],"edges":[]}},"alphabet":[0]}}"#);
        assert!(serde_json::from_str::<SpaceFile>(&bad_target).unwrap().to_space(1000).is_err());
    }

    #[test]
    fn rationals_and_measures() {
        let x = serde_json::from_str::<SpaceFile>(r#"{"graph":{"vertices":[0]},"alphabet":["u","v"]}"#)
            .unwrap()
            .to_space(10)
            .unwrap();
        let m: BTreeMap<String, String> = serde_json::from_str(r#"{"1":"2/3"}"#).unwrap();
        let w = measure_weights(&x, &m).unwrap();
        assert_eq!(format_rational(&w[1]), "2/3");
        assert_eq!(format_rational(&w[0]), "0/1");
        let bad: BTreeMap<String, String> = serde_json::from_str(r#"{"7":"1"}"#).unwrap();
        assert!(measure_weights(&x, &bad).is_err());
        assert_eq!(symbol_by_name(x.alphabet(), "v").unwrap(), 1);
    }
}
