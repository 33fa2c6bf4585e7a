//! Configuration spaces: sets of colourings of a bipartite domain graph,
//! usually cut out by forbidden vertex and edge patterns.

use alloc::collections::{BTreeMap, BTreeSet};
use core::cell::OnceCell;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::invalid;
use crate::graph::{inverse, AutSubgroup, Bipartition, Graph};
use crate::{Error, Label, Result};

/// Index of a symbol in its alphabet.
pub type Sym = u8;

/// A configuration: one symbol index per vertex, in vertex order.
pub type Config = Vec<Sym>;

pub const MAX_SYMBOLS: usize = 64;
pub const MAX_VERTICES: usize = 64;

/// Largest `|X|^2 * 2^|V|` the brute-force TMF check will attempt.
pub const TMF_WORK_LIMIT: u128 = 200_000_000;

/// Ordered, duplicate-free list of symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Label>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Label>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(invalid!("alphabet is empty"));
        }
        if symbols.len() > MAX_SYMBOLS {
            return Err(Error::Capacity(format!("alphabets are limited to {MAX_SYMBOLS} symbols")));
        }
        let distinct: BTreeSet<&Label> = symbols.iter().collect();
        if distinct.len() != symbols.len() {
            return Err(invalid!("duplicate symbol in alphabet"));
        }
        Ok(Alphabet { symbols })
    }

    /// Symbols `0..k` as integer labels.
    pub fn range(k: usize) -> Self {
        Self::new((0..k as i64).map(Label::Int).collect()).expect("valid alphabet")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Label] {
        &self.symbols
    }

    pub fn label(&self, s: Sym) -> &Label {
        &self.symbols[s as usize]
    }

    pub fn index_of(&self, l: &Label) -> Option<Sym> {
        self.symbols.iter().position(|x| x == l).map(|i| i as Sym)
    }
}

/// A pattern on one vertex or on the two ends of an edge. Edge patterns are
/// stored with the smaller vertex first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    support: Vec<usize>,
    values: Vec<Sym>,
}

impl Pattern {
    pub fn site(v: usize, s: Sym) -> Self {
        Pattern { support: vec![v], values: vec![s] }
    }

    pub fn bond(u: usize, su: Sym, v: usize, sv: Sym) -> Self {
        if u <= v {
            Pattern { support: vec![u, v], values: vec![su, sv] }
        } else {
            Pattern { support: vec![v, u], values: vec![sv, su] }
        }
    }

    pub fn new(support: Vec<usize>, values: Vec<Sym>) -> Result<Self> {
        match (support.as_slice(), values.as_slice()) {
            ([v], [s]) => Ok(Self::site(*v, *s)),
            ([u, v], [su, sv]) if u != v => Ok(Self::bond(*u, *su, *v, *sv)),
            _ => Err(invalid!("pattern must sit on one vertex or on an edge, with one value per vertex")),
        }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[Sym] {
        &self.values
    }

    pub fn is_site(&self) -> bool {
        self.support.len() == 1
    }

    /// Whether `x` restricted to the support equals this pattern.
    pub fn matches(&self, x: &[Sym]) -> bool {
        self.support.iter().zip(&self.values).all(|(&v, &s)| x[v] == s)
    }

    pub fn mentions(&self, s: Sym) -> bool {
        self.values.contains(&s)
    }

    /// Image under a vertex permutation: `(g p)_{g v} = p_v`.
    pub fn act(&self, g: &[usize]) -> Pattern {
        match (self.support.as_slice(), self.values.as_slice()) {
            ([v], [s]) => Pattern::site(g[*v], *s),
            ([u, v], [su, sv]) => Pattern::bond(g[*u], *su, g[*v], *sv),
            _ => unreachable!("patterns are normalised on construction"),
        }
    }
}

/// Forbidden patterns defining a nearest-neighbour space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    forbidden: Vec<Pattern>,
}

impl ConstraintSet {
    pub fn new(patterns: impl IntoIterator<Item = Pattern>) -> Self {
        let set: BTreeSet<Pattern> = patterns.into_iter().collect();
        ConstraintSet { forbidden: set.into_iter().collect() }
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.forbidden
    }

    pub fn len(&self) -> usize {
        self.forbidden.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forbidden.is_empty()
    }

    fn validate(&self, graph: &Graph, k: usize) -> Result<()> {
        for p in &self.forbidden {
            for &v in &p.support {
                if v >= graph.len() {
                    return Err(invalid!("forbidden pattern refers to missing vertex {v}"));
                }
            }
            if p.values.iter().any(|&s| s as usize >= k) {
                return Err(invalid!("forbidden pattern uses a symbol outside the alphabet"));
            }
            if p.support.len() == 2 && !graph.is_adjacent(p.support[0], p.support[1]) {
                return Err(invalid!(
                    "forbidden pattern on {} and {}, which are not adjacent",
                    graph.label(p.support[0]),
                    graph.label(p.support[1])
                ));
            }
        }
        Ok(())
    }
}

/// Backtracking enumerator with forward checking over nearest-neighbour constraints.
struct Solver {
    n: usize,
    site_ok: Vec<u64>,
    /// For each vertex, its later neighbours with a table `sym -> allowed symbols there`.
    forward: Vec<Vec<(usize, Vec<u64>)>>,
}

fn full_mask(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

impl Solver {
    fn new(graph: &Graph, k: usize, cs: &ConstraintSet) -> Self {
        let n = graph.len();
        let mut site_ok = vec![full_mask(k); n];
        let mut bond_bad: BTreeMap<(usize, usize), Vec<u64>> = BTreeMap::new();
        for p in &cs.forbidden {
            match (p.support.as_slice(), p.values.as_slice()) {
                ([v], [s]) => site_ok[*v] &= !(1u64 << s),
                ([u, v], [su, sv]) => {
                    bond_bad.entry((*u, *v)).or_insert_with(|| vec![0; k])[*su as usize] |= 1u64 << sv;
                }
                _ => unreachable!("patterns are normalised on construction"),
            }
        }
        let mut forward = vec![Vec::new(); n];
        for u in 0..n {
            for &w in graph.neighbors(u).iter().filter(|&&w| w > u) {
                let table: Vec<u64> = match bond_bad.get(&(u, w)) {
                    Some(bad) => bad.iter().map(|b| full_mask(k) & !b).collect(),
                    None => vec![full_mask(k); k],
                };
                forward[u].push((w, table));
            }
        }
        Solver { n, site_ok, forward }
    }

    /// Configurations in lexicographic order. `pins` fixes symbols at some
    /// vertices; `limit` stops after that many solutions.
    fn run(&self, pins: &[(usize, Sym)], cap: u64, limit: Option<usize>) -> Result<Vec<Config>> {
        let mut doms = self.site_ok.clone();
        for &(v, s) in pins {
            doms[v] &= 1u64 << s;
        }
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(Vec::new());
            return Ok(out);
        }
        if doms.contains(&0) {
            return Ok(out);
        }
        let mut cur = vec![0; self.n];
        let mut work = 0u64;
        self.dfs(0, &mut cur, &doms, cap, &mut work, limit, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        i: usize,
        cur: &mut Config,
        doms: &[u64],
        cap: u64,
        work: &mut u64,
        limit: Option<usize>,
        out: &mut Vec<Config>,
    ) -> Result<bool> {
        let mut d = doms[i];
        while d != 0 {
            let s = d.trailing_zeros() as Sym;
            d &= d - 1;
            *work += 1;
            if *work > cap {
                return Err(Error::Capacity(format!("enumeration explored more than {cap} assignments")));
            }
            cur[i] = s;
            if i + 1 == self.n {
                out.push(cur.clone());
                if limit.is_some_and(|l| out.len() >= l) {
                    return Ok(true);
                }
                continue;
            }
            let mut next = doms.to_vec();
            let mut dead = false;
            for (w, table) in &self.forward[i] {
                next[*w] &= table[s as usize];
                if next[*w] == 0 {
                    dead = true;
                    break;
                }
            }
            if !dead && self.dfs(i + 1, cur, &next, cap, work, limit, out)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Result of the topological Markov field check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmfReport {
    pub holds: bool,
    pub witness: Option<TmfWitness>,
}

/// `x` and `y` agree on `∂F`, but `glued` (x on F, y elsewhere) is not in X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmfWitness {
    pub x: Config,
    pub y: Config,
    pub subset: Vec<usize>,
    pub glued: Config,
}

/// A finite set of configurations on a loop-free bipartite graph.
#[derive(Clone, Debug)]
pub struct ConfigSpace {
    graph: Graph,
    alphabet: Alphabet,
    constraints: ConstraintSet,
    configs: Vec<Config>,
    index: BTreeMap<Config, usize>,
    exact: bool,
    parts: Bipartition,
    site_lang: Vec<u64>,
    bond_lang: BTreeMap<(usize, usize), Vec<u64>>,
    /// Independent Markov equations, filled on first use.
    pub(crate) markov_rows: OnceCell<Vec<[u32; 4]>>,
}

impl PartialEq for ConfigSpace {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
            && self.alphabet == other.alphabet
            && self.constraints == other.constraints
            && self.configs == other.configs
    }
}

fn check_domain(graph: &Graph) -> Result<Bipartition> {
    if graph.len() > MAX_VERTICES {
        return Err(Error::Capacity(format!("domain graphs are limited to {MAX_VERTICES} vertices")));
    }
    if !graph.is_loop_free() {
        return Err(invalid!("domain graph must be loop-free"));
    }
    graph.bipartition().ok_or_else(|| invalid!("domain graph must be bipartite"))
}

impl ConfigSpace {
    /// `X_F`: all configurations avoiding every forbidden pattern.
    pub fn enumerate(graph: &Graph, alphabet: &Alphabet, constraints: &ConstraintSet, cap: u64) -> Result<Self> {
        let parts = check_domain(graph)?;
        constraints.validate(graph, alphabet.len())?;
        let configs = Solver::new(graph, alphabet.len(), constraints).run(&[], cap, None)?;
        Ok(Self::assemble(graph.clone(), alphabet.clone(), constraints.clone(), configs, true, parts))
    }

    /// Graph homomorphisms from `domain` to `target`, as a nearest-neighbour space
    /// whose alphabet is the target's vertex set.
    pub fn hom(domain: &Graph, target: &Graph, cap: u64) -> Result<Self> {
        let alphabet = Alphabet::new(target.labels().to_vec())?;
        let k = target.len();
        let mut forbidden = Vec::new();
        for (u, v) in domain.sorted_edges() {
            for a in 0..k {
                for b in 0..k {
                    if !target.is_adjacent(a, b) {
                        forbidden.push(Pattern::bond(u, a as Sym, v, b as Sym));
                    }
                }
            }
        }
        Self::enumerate(domain, &alphabet, &ConstraintSet::new(forbidden), cap)
    }

    /// An explicit set of configurations. Its constraint set is the induced
    /// one, and [`ConfigSpace::is_nearest_neighbour`] reports whether the
    /// set is exactly the space those constraints define.
    pub fn from_configs(graph: &Graph, alphabet: &Alphabet, configs: Vec<Config>, cap: u64) -> Result<Self> {
        let parts = check_domain(graph)?;
        for x in &configs {
            if x.len() != graph.len() || x.iter().any(|&s| s as usize >= alphabet.len()) {
                return Err(invalid!("configuration {x:?} does not fit the graph and alphabet"));
            }
        }
        let configs: Vec<Config> = configs.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut space = Self::assemble(graph.clone(), alphabet.clone(), ConstraintSet::default(), configs, false, parts);
        let (cs, exact) = space.induced_constraints(cap)?;
        space.constraints = cs;
        space.exact = exact;
        Ok(space)
    }

    fn assemble(
        graph: Graph,
        alphabet: Alphabet,
        constraints: ConstraintSet,
        configs: Vec<Config>,
        exact: bool,
        parts: Bipartition,
    ) -> Self {
        let n = graph.len();
        let k = alphabet.len();
        let mut site_lang = vec![0u64; n];
        let mut bond_lang: BTreeMap<(usize, usize), Vec<u64>> =
            graph.sorted_edges().into_iter().map(|e| (e, vec![0u64; k])).collect();
        for x in &configs {
            for v in 0..n {
                site_lang[v] |= 1u64 << x[v];
            }
            for (&(u, v), table) in bond_lang.iter_mut() {
                table[x[u] as usize] |= 1u64 << x[v];
            }
        }
        let index = configs.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        ConfigSpace { graph, alphabet, constraints, configs, index, exact, parts, site_lang, bond_lang, markov_rows: OnceCell::new() }
    }

    /// Subspace of configurations that avoid symbol `a`, with `[a]_v`
    /// added to the forbidden set at every vertex.
    pub fn without_symbol(&self, a: Sym) -> Self {
        let mut forbidden = self.constraints.forbidden.clone();
        forbidden.extend((0..self.graph.len()).map(|v| Pattern::site(v, a)));
        let configs = self.configs.iter().filter(|x| !x.contains(&a)).cloned().collect();
        Self::assemble(
            self.graph.clone(),
            self.alphabet.clone(),
            ConstraintSet::new(forbidden),
            configs,
            self.exact,
            self.parts.clone(),
        )
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    pub fn bipartition(&self) -> &Bipartition {
        &self.parts
    }

    /// Whether the configurations are exactly those allowed by the constraint set.
    pub fn is_nearest_neighbour(&self) -> bool {
        self.exact
    }

    /// Configurations in lexicographic order.
    pub fn configs(&self) -> &[Config] {
        &self.configs
    }

    pub fn config(&self, i: usize) -> &Config {
        &self.configs[i]
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// The base configuration (the lexicographically least one).
    pub fn base(&self) -> Result<&Config> {
        self.configs.first().ok_or(Error::EmptySpace)
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.configs.is_empty() {
            Err(Error::EmptySpace)
        } else {
            Ok(())
        }
    }

    pub fn index_of(&self, x: &[Sym]) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &[Sym]) -> bool {
        self.index.contains_key(x)
    }

    /// Whether `x` avoids every pattern of the constraint set.
    pub fn satisfies_constraints(&self, x: &[Sym]) -> bool {
        x.len() == self.graph.len()
            && self.constraints.forbidden.iter().all(|p| p.support.iter().zip(&p.values).any(|(&v, &s)| x[v] != s))
    }

    /// Symbols that occur somewhere in X.
    pub fn active_symbols(&self) -> Vec<Sym> {
        let all = self.site_lang.iter().fold(0u64, |acc, m| acc | m);
        (0..self.alphabet.len() as Sym).filter(|&s| all >> s & 1 == 1).collect()
    }

    /// Whether `[s]_v` is in the language.
    pub fn site_allowed(&self, v: usize, s: Sym) -> bool {
        self.site_lang[v] >> s & 1 == 1
    }

    /// Whether `[su, sv]_{u,v}` is in the language; `u` and `v` must be adjacent.
    pub fn bond_allowed(&self, u: usize, su: Sym, v: usize, sv: Sym) -> bool {
        if u < v {
            self.bond_lang.get(&(u, v)).is_some_and(|t| t[su as usize] >> sv & 1 == 1)
        } else {
            self.bond_lang.get(&(v, u)).is_some_and(|t| t[sv as usize] >> su & 1 == 1)
        }
    }

    /// Every vertex and edge pattern in the language, sorted.
    pub fn local_patterns(&self) -> Vec<Pattern> {
        let k = self.alphabet.len() as Sym;
        let mut out = Vec::new();
        for v in 0..self.graph.len() {
            out.extend((0..k).filter(|&s| self.site_allowed(v, s)).map(|s| Pattern::site(v, s)));
        }
        for (u, v) in self.graph.sorted_edges() {
            for su in 0..k {
                for sv in 0..k {
                    if self.bond_allowed(u, su, v, sv) {
                        out.push(Pattern::bond(u, su, v, sv));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Whether `p` is a vertex or edge pattern in the language.
    pub fn pattern_allowed(&self, p: &Pattern) -> bool {
        match (p.support(), p.values()) {
            ([v], [s]) => *v < self.graph.len() && (*s as usize) < self.alphabet.len() && self.site_allowed(*v, *s),
            ([u, v], [su, sv]) => {
                *v < self.graph.len()
                    && (*su as usize) < self.alphabet.len()
                    && (*sv as usize) < self.alphabet.len()
                    && self.bond_allowed(*u, *su, *v, *sv)
            }
            _ => false,
        }
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &v in subset {
            if v >= self.graph.len() {
                return Err(invalid!("vertex index {v} out of range"));
            }
            if !seen.insert(v) {
                return Err(invalid!("vertex {} listed twice", self.graph.label(v)));
            }
        }
        Ok(())
    }

    /// `L_U(X)`: restrictions of configurations to `subset`, values in `subset` order.
    pub fn language(&self, subset: &[usize]) -> Result<BTreeSet<Vec<Sym>>> {
        self.check_subset(subset)?;
        Ok(self.configs.iter().map(|x| subset.iter().map(|&v| x[v]).collect()).collect())
    }

    /// Brute-force check of the topological Markov field property.
    pub fn is_tmf(&self) -> Result<TmfReport> {
        let n = self.graph.len();
        let m = self.configs.len() as u128;
        if n > 24 || (m * m) << n > TMF_WORK_LIMIT {
            return Err(Error::Capacity(format!("TMF check on {n} vertices and {m} configurations")));
        }
        let nbr: Vec<u64> = (0..n).map(|v| self.graph.neighbors(v).iter().fold(0, |acc, &w| acc | 1 << w)).collect();
        let boundary: Vec<u64> = (0u64..1 << n)
            .map(|f| {
                let around = (0..n).filter(|&v| f >> v & 1 == 1).fold(0u64, |acc, v| acc | nbr[v]);
                around & !f
            })
            .collect();
        for x in &self.configs {
            for y in &self.configs {
                let agree = (0..n).filter(|&v| x[v] == y[v]).fold(0u64, |acc, v| acc | 1 << v);
                for f in 0u64..1 << n {
                    if f & !agree == 0 || boundary[f as usize] & !agree != 0 {
                        continue;
                    }
                    let glued: Config = (0..n).map(|v| if f >> v & 1 == 1 { x[v] } else { y[v] }).collect();
                    if !self.contains(&glued) {
                        let subset = (0..n).filter(|&v| f >> v & 1 == 1).collect();
                        return Ok(TmfReport {
                            holds: false,
                            witness: Some(TmfWitness { x: x.clone(), y: y.clone(), subset, glued }),
                        });
                    }
                }
            }
        }
        Ok(TmfReport { holds: true, witness: None })
    }

    /// Symbols `s` such that replacing any set of coordinates of any
    /// configuration by `s` stays inside X.
    ///
    /// Checking single coordinates suffices: applying the single-site
    /// replacement repeatedly reaches every subset.
    pub fn safe_symbols(&self) -> Result<Vec<Sym>> {
        self.require_nonempty()?;
        let n = self.graph.len();
        let mut out = Vec::new();
        'symbols: for s in 0..self.alphabet.len() as Sym {
            for x in &self.configs {
                let mut y = x.clone();
                for v in 0..n {
                    if x[v] == s {
                        continue;
                    }
                    y[v] = s;
                    if !self.contains(&y) {
                        continue 'symbols;
                    }
                    y[v] = x[v];
                }
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Constraint set forbidding every vertex and edge pattern outside the
    /// language, and whether it cuts out exactly this space.
    pub fn induced_constraints(&self, cap: u64) -> Result<(ConstraintSet, bool)> {
        let k = self.alphabet.len() as Sym;
        let mut forbidden = Vec::new();
        for v in 0..self.graph.len() {
            forbidden.extend((0..k).filter(|&s| !self.site_allowed(v, s)).map(|s| Pattern::site(v, s)));
        }
        for (u, v) in self.graph.sorted_edges() {
            for su in 0..k {
                for sv in 0..k {
                    if !self.bond_allowed(u, su, v, sv) {
                        forbidden.push(Pattern::bond(u, su, v, sv));
                    }
                }
            }
        }
        let cs = ConstraintSet::new(forbidden);
        let again = Solver::new(&self.graph, self.alphabet.len(), &cs).run(&[], cap, None)?;
        let exact = again == self.configs;
        Ok((cs, exact))
    }

    /// Replace the symbols at `sites` by `values`; also report membership in X.
    pub fn theta(&self, x: &[Sym], sites: &[usize], values: &[Sym]) -> Result<(Config, bool)> {
        self.check_config(x)?;
        self.check_subset(sites)?;
        if sites.len() != values.len() {
            return Err(invalid!("{} sites but {} values", sites.len(), values.len()));
        }
        if values.iter().any(|&s| s as usize >= self.alphabet.len()) {
            return Err(invalid!("replacement symbol outside the alphabet"));
        }
        let mut y = x.to_vec();
        for (&v, &s) in sites.iter().zip(values) {
            y[v] = s;
        }
        let member = self.contains(&y);
        Ok((y, member))
    }

    fn check_config(&self, x: &[Sym]) -> Result<()> {
        if x.len() != self.graph.len() || x.iter().any(|&s| s as usize >= self.alphabet.len()) {
            Err(invalid!("configuration {x:?} does not fit the space"))
        } else {
            Ok(())
        }
    }

    /// `(g x)_v = x_{g^{-1} v}`; also report membership in X.
    pub fn act(&self, g: &[usize], x: &[Sym]) -> Result<(Config, bool)> {
        self.check_config(x)?;
        if !self.graph.is_automorphism(g) {
            return Err(invalid!("{g:?} is not an automorphism of the domain graph"));
        }
        let y = act_config(g, x);
        let member = self.contains(&y);
        Ok((y, member))
    }

    /// Whether every element of `group` maps X onto itself.
    pub fn is_invariant(&self, group: &AutSubgroup) -> Result<bool> {
        if group.degree() != self.graph.len() {
            return Err(invalid!("group acts on {} vertices, graph has {}", group.degree(), self.graph.len()));
        }
        Ok(group.elements().iter().all(|g| self.configs.iter().all(|x| self.contains(&act_config(g, x)))))
    }

    /// Automorphisms of the domain that map X onto itself.
    pub fn stabilizer(&self) -> Result<AutSubgroup> {
        let all = self.graph.automorphisms()?;
        let keep = all
            .elements()
            .iter()
            .filter(|g| self.configs.iter().all(|x| self.contains(&act_config(g, x))))
            .cloned()
            .collect();
        AutSubgroup::new(&self.graph, keep)
    }
}

/// `(g x)_v = x_{g^{-1} v}`, without checks.
pub fn act_config(g: &[usize], x: &[Sym]) -> Config {
    let inv = inverse(g);
    inv.iter().map(|&u| x[u]).collect()
}
