//! Exact small-instance values of `A_4^{GC}(n, d, w)` and relatives.
//!
//! A code is a clique in the compatibility graph on the candidate strands,
//! so the maximum code size is found with [`clique::max_weight_clique`].
//! Reverse and reverse-complement variants search over orbits `{x, t(x)}`
//! with the orbit size as vertex weight, so every witness is closed under
//! `t`. With `cross_distance` set, closure is dropped and instead every word
//! must be at distance at least `d` from `t(y)` for every codeword `y`,
//! itself included.

pub mod clique;
pub mod relations;
pub mod transforms;
pub mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{self, CostModel};
use crate::z4::{Base, DnaStrand};

use clique::Graph;

pub const DEFAULT_VERTEX_BUDGET: usize = 2000;
pub const DEFAULT_NODE_LIMIT: u64 = 2_000_000;
/// Largest candidate universe materialised for greedy bounds in gap mode.
pub const MAX_UNIVERSE: usize = 1 << 20;
/// Largest graph on which a colouring upper bound is attempted.
const MAX_COLOURING_VERTICES: usize = 8192;

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Metric {
    Hamming,
    Edit(CostModel),
}

impl Metric {
    pub fn unit_edit() -> Self {
        Metric::Edit(CostModel::unit())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Hamming => "hamming",
            Metric::Edit(cm) if cm.is_unit() => "edit",
            Metric::Edit(_) => "edit-custom",
        }
    }

    pub fn distance(&self, s: &[Base], t: &[Base]) -> f64 {
        match self {
            Metric::Hamming => s.iter().zip(t).filter(|(a, b)| a != b).count() as f64,
            Metric::Edit(cm) => metrics::edit_distance(s, t, cm),
        }
    }

    pub fn at_least(&self, value: f64, d: usize) -> bool {
        match self {
            Metric::Hamming => value >= d as f64,
            Metric::Edit(cm) => cm.at_least(value, d as f64),
        }
    }

    fn far(&self, s: &[Base], t: &[Base], d: usize) -> bool {
        d == 0 || self.at_least(self.distance(s, t), d)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    R,
    RC,
}

impl Variant {
    pub fn apply(self, s: &DnaStrand) -> DnaStrand {
        match self {
            Variant::Plain => s.clone(),
            Variant::R => s.reverse(),
            Variant::RC => s.reverse_complement(),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::R => "r",
            Variant::RC => "rc",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(Variant::Plain),
            "r" => Ok(Variant::R),
            "rc" => Ok(Variant::RC),
            _ => Err(Error::InvalidKey(format!("unknown variant {s:?} (plain, r, rc)"))),
        }
    }
}

/// Parameters of one maximum-code-size question.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundKey {
    pub n: usize,
    pub d: usize,
    /// Exact GC weight, or `None` for unconstrained.
    pub w: Option<usize>,
    pub metric: Metric,
    pub variant: Variant,
    pub cross_distance: bool,
}

impl BoundKey {
    pub fn gc(n: usize, d: usize, w: usize, metric: Metric) -> Self {
        Self { n, d, w: Some(w), metric, variant: Variant::Plain, cross_distance: false }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d > self.n {
            return Err(Error::InvalidKey(format!("d={} exceeds n={}", self.d, self.n)));
        }
        if let Some(w) = self.w {
            if w > self.n {
                return Err(Error::InvalidKey(format!("w={w} exceeds n={}", self.n)));
            }
        }
        if self.n > 16 {
            return Err(Error::InvalidKey(format!("n={} is beyond the exhaustive range", self.n)));
        }
        Ok(())
    }

    /// Number of strands satisfying the length and GC constraints.
    pub fn universe_size(&self) -> u128 {
        match self.w {
            Some(w) => binomial(self.n, w) << self.n,
            None => 1u128 << (2 * self.n),
        }
    }

    fn cache_key(&self) -> CacheKey {
        (self.n, self.d, self.w, metric_label(&self.metric), self.variant, self.cross_distance)
    }
}

impl fmt::Display for BoundKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.w.map_or("*".to_string(), |w| w.to_string());
        write!(f, "A[{}](n={}, d={}, w={w}; {}", self.variant, self.n, self.d, self.metric)?;
        if self.cross_distance {
            f.write_str(", cross")?;
        }
        f.write_str(")")
    }
}

fn metric_label(m: &Metric) -> String {
    match m {
        Metric::Hamming => "hamming".into(),
        Metric::Edit(cm) if cm.is_unit() => "edit".into(),
        Metric::Edit(cm) => format!("{:?}", CostTable::from(cm)),
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn all_strands(n: usize, alphabet: &[Base], keep: impl Fn(&[Base]) -> bool) -> Vec<DnaStrand> {
    let mut out = Vec::new();
    let mut word = vec![alphabet[0]; n];
    let mut idx = vec![0usize; n];
    loop {
        if keep(&word) {
            out.push(DnaStrand::new(word.clone()));
        }
        // odometer, last position fastest so output is lexicographic
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < alphabet.len() {
                word[pos] = alphabet[idx[pos]];
                break;
            }
            idx[pos] = 0;
            word[pos] = alphabet[0];
        }
    }
}

/// All strands of length `n` with exactly `w` G/C symbols, lexicographic.
pub fn constant_gc_universe(n: usize, w: usize) -> Vec<DnaStrand> {
    if w > n {
        return Vec::new();
    }
    all_strands(n, &Base::ALL, |s| s.iter().filter(|b| b.is_gc()).count() == w)
}

/// All strands of length `n`, lexicographic.
pub fn full_universe(n: usize) -> Vec<DnaStrand> {
    all_strands(n, &Base::ALL, |_| true)
}

/// Images under the symbol map of the binary words `{0, 1}^n`.
pub fn binary_universe(n: usize) -> Vec<DnaStrand> {
    let zero = Base::from_residue(0);
    let one = Base::from_residue(1);
    let mut pair = [zero, one];
    pair.sort();
    all_strands(n, &pair, |_| true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exact,
    Gap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExhaustiveClique,
    PartitionArgument,
    ColouringBound,
    Trivial,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExhaustiveClique => "exhaustive-clique",
            Method::PartitionArgument => "partition-argument",
            Method::ColouringBound => "colouring-bound",
            Method::Trivial => "trivial",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRecord {
    pub key: BoundKey,
    pub lower: u64,
    pub upper: u64,
    pub status: Status,
    pub witness: Vec<DnaStrand>,
    pub method: Method,
    pub runtime_ms: Option<u64>,
}

impl BoundRecord {
    /// Exact value, if known.
    pub fn value(&self) -> Option<u64> {
        (self.status == Status::Exact).then_some(self.lower)
    }
}

#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub max_vertices: usize,
    pub node_limit: u64,
    /// Return a `Gap` record instead of failing when over budget.
    pub allow_gap: bool,
    pub timings: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_vertices: DEFAULT_VERTEX_BUDGET, node_limit: DEFAULT_NODE_LIMIT, allow_gap: false, timings: false }
    }
}

/// One vertex of the compatibility graph: a strand or a closed orbit.
struct Candidate {
    words: Vec<DnaStrand>,
}

fn candidates(key: &BoundKey, universe: Vec<DnaStrand>) -> Vec<Candidate> {
    let t = key.variant;
    if t == Variant::Plain {
        return universe.into_iter().map(|s| Candidate { words: vec![s] }).collect();
    }
    let mut out = Vec::new();
    for s in universe {
        let image = t.apply(&s);
        if key.cross_distance {
            if key.metric.far(s.bases(), image.bases(), key.d) {
                out.push(Candidate { words: vec![s] });
            }
        } else if image == s {
            out.push(Candidate { words: vec![s] });
        } else if s < image && key.metric.far(s.bases(), image.bases(), key.d) {
            out.push(Candidate { words: vec![s, image] });
        }
    }
    out
}

fn compatible(key: &BoundKey, a: &Candidate, b: &Candidate) -> bool {
    let far = |x: &DnaStrand, y: &DnaStrand| key.metric.far(x.bases(), y.bases(), key.d);
    let pairwise = a.words.iter().all(|x| b.words.iter().all(|y| far(x, y)));
    if !pairwise || !key.cross_distance {
        return pairwise;
    }
    let (x, y) = (&a.words[0], &b.words[0]);
    far(x, &key.variant.apply(y)) && far(&key.variant.apply(x), y)
}

fn build_graph(key: &BoundKey, cands: &[Candidate]) -> Graph {
    let mut g = Graph::new(cands.iter().map(|c| c.words.len() as u64).collect());
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            if compatible(key, &cands[i], &cands[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

fn collect_witness(cands: &[Candidate], vertices: &[usize]) -> Vec<DnaStrand> {
    let mut words: Vec<DnaStrand> = vertices.iter().flat_map(|&v| cands[v].words.iter().cloned()).collect();
    words.sort();
    words
}

fn universe_for(key: &BoundKey) -> Vec<DnaStrand> {
    match key.w {
        Some(w) => constant_gc_universe(key.n, w),
        None => full_universe(key.n),
    }
}

/// Maximum size of a code for `key`.
///
/// Exact when the candidate graph has at most `budget.max_vertices` vertices
/// and the search finishes within `budget.node_limit` nodes. Otherwise a
/// greedy lower bound and the best available upper bound are returned with
/// status `Gap`, or `Error::OverBudget` if gaps are not allowed.
pub fn exact_max_code(key: &BoundKey, budget: &SearchBudget) -> Result<BoundRecord> {
    key.validate()?;
    let start = Instant::now();
    let size = key.universe_size();
    if size > budget.max_vertices as u128 * 2 && !budget.allow_gap {
        return Err(Error::OverBudget { universe: size.min(usize::MAX as u128) as usize, limit: budget.max_vertices });
    }
    if size > MAX_UNIVERSE as u128 {
        return Err(Error::OverBudget { universe: size.min(usize::MAX as u128) as usize, limit: MAX_UNIVERSE });
    }
    let cands = candidates(key, universe_for(key));
    let mut record = if cands.len() <= budget.max_vertices {
        let g = build_graph(key, &cands);
        let found = if transitive(key) {
            clique::max_weight_clique_through(&g, 0, budget.node_limit)
        } else {
            clique::max_weight_clique_limited(&g, budget.node_limit)
        };
        let witness = collect_witness(&cands, &found.vertices);
        if found.complete {
            BoundRecord {
                key: key.clone(),
                lower: found.weight,
                upper: found.weight,
                status: Status::Exact,
                witness,
                method: Method::ExhaustiveClique,
                runtime_ms: None,
            }
        } else if budget.allow_gap {
            let upper = g.colouring_bound();
            gap_record(key, found.weight, witness, upper, Method::ColouringBound)
        } else {
            return Err(Error::OverBudget { universe: cands.len(), limit: budget.max_vertices });
        }
    } else if budget.allow_gap {
        gap_fallback(key, &cands, budget)?
    } else {
        return Err(Error::OverBudget { universe: cands.len(), limit: budget.max_vertices });
    };
    if budget.timings {
        record.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(record)
}

/// Coordinate permutations together with independent G/C and A/T swaps in
/// each coordinate preserve Hamming distance and GC weight and act
/// transitively on a constant-weight universe, so some maximum code
/// contains its first strand.
fn transitive(key: &BoundKey) -> bool {
    key.metric == Metric::Hamming && key.variant == Variant::Plain && key.w.is_some()
}

fn gap_record(key: &BoundKey, lower: u64, witness: Vec<DnaStrand>, upper: u64, method: Method) -> BoundRecord {
    BoundRecord { key: key.clone(), lower, upper: upper.max(lower), status: Status::Gap, witness, method, runtime_ms: None }
}

fn gap_fallback(key: &BoundKey, cands: &[Candidate], budget: &SearchBudget) -> Result<BoundRecord> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..cands.len() {
        if chosen.iter().all(|&j| compatible(key, &cands[j], &cands[i])) {
            chosen.push(i);
        }
    }
    let lower: u64 = chosen.iter().map(|&i| cands[i].words.len() as u64).sum();
    let witness = collect_witness(cands, &chosen);
    let mut upper = cands.iter().map(|c| c.words.len() as u64).sum::<u64>();
    let mut method = Method::Trivial;
    if cands.len() <= MAX_COLOURING_VERTICES {
        let bound = build_graph(key, cands).colouring_bound();
        if bound < upper {
            upper = bound;
            method = Method::ColouringBound;
        }
    }
    if let Some(bound) = partition_upper_bound(key, budget)? {
        if bound < upper {
            upper = bound;
            method = Method::PartitionArgument;
        }
    }
    Ok(gap_record(key, lower, witness, upper, method))
}

/// Splitting a code by its first symbol gives codes of length `n - 1` with
/// GC weight `w - 1` (G/C prefix) or `w` (A/T prefix), so
/// `A(n, d, w) <= 2 A(n-1, d, w-1) + 2 A(n-1, d, w)`. Valid for Hamming and
/// unit edit distance, where a common first symbol can be removed without
/// changing the distance.
fn partition_upper_bound(key: &BoundKey, budget: &SearchBudget) -> Result<Option<u64>> {
    let unit_like = matches!(&key.metric, Metric::Hamming) || matches!(&key.metric, Metric::Edit(cm) if cm.is_unit());
    if key.variant != Variant::Plain || !unit_like || key.n < 2 || key.d > key.n - 1 {
        return Ok(None);
    }
    let n = key.n;
    let parts: Vec<(Option<usize>, u64)> = match key.w {
        Some(w) => vec![(w.checked_sub(1), 2), ((w < n).then_some(w), 2)],
        None => vec![(None, 4)],
    };
    let mut total = 0u64;
    for (w, mult) in parts {
        if key.w.is_some() && w.is_none() {
            continue;
        }
        let sub = BoundKey { n: n - 1, w, ..key.clone() };
        total += mult * exact_max_code(&sub, budget)?.upper;
    }
    Ok(Some(total))
}

/// `A_2(n, d)` over the binary words `{0, 1}^n`, searched exhaustively.
pub fn a2(n: usize, d: usize, metric: &Metric, budget: &SearchBudget) -> Result<u64> {
    if d > n {
        return Err(Error::InvalidKey(format!("d={d} exceeds n={n}")));
    }
    let universe = binary_universe(n);
    if universe.len() > budget.max_vertices {
        return Err(Error::OverBudget { universe: universe.len(), limit: budget.max_vertices });
    }
    let mut g = Graph::unweighted(universe.len());
    for i in 0..universe.len() {
        for j in i + 1..universe.len() {
            if metric.far(universe[i].bases(), universe[j].bases(), d) {
                g.add_edge(i, j);
            }
        }
    }
    let found = clique::max_weight_clique_limited(&g, budget.node_limit);
    if !found.complete {
        return Err(Error::OverBudget { universe: universe.len(), limit: budget.max_vertices });
    }
    Ok(found.weight)
}

type CacheKey = (usize, usize, Option<usize>, String, Variant, bool);

/// Memoising front end over [`exact_max_code`].
pub struct Oracle {
    budget: SearchBudget,
    cache: BTreeMap<CacheKey, BoundRecord>,
}

impl Oracle {
    pub fn new(budget: SearchBudget) -> Self {
        Self { budget, cache: BTreeMap::new() }
    }

    pub fn record(&mut self, key: &BoundKey) -> Result<&BoundRecord> {
        let k = key.cache_key();
        if !self.cache.contains_key(&k) {
            let rec = exact_max_code(key, &self.budget)?;
            self.cache.insert(k.clone(), rec);
        }
        Ok(&self.cache[&k])
    }

    pub fn value(&mut self, key: &BoundKey) -> Result<Option<u64>> {
        Ok(self.record(key)?.value())
    }

    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }

    pub fn records(&self) -> impl Iterator<Item = &BoundRecord> {
        self.cache.values()
    }
}

/// Serialisable cost table (rows and columns in A, C, G, T order).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    pub substitution: [[f64; 4]; 4],
    pub insertion: [f64; 4],
    pub deletion: [f64; 4],
}

impl From<&CostModel> for CostTable {
    fn from(cm: &CostModel) -> Self {
        let mut substitution = [[0.0; 4]; 4];
        for a in Base::ALL {
            for b in Base::ALL {
                substitution[a.index()][b.index()] = cm.substitution(a, b);
            }
        }
        Self {
            substitution,
            insertion: Base::ALL.map(|b| cm.insertion(b)),
            deletion: Base::ALL.map(|b| cm.deletion(b)),
        }
    }
}

/// On-disk form of a [`BoundRecord`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordDocument {
    pub n: usize,
    pub d: usize,
    pub w: Option<usize>,
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_model: Option<CostTable>,
    pub variant: Variant,
    pub cross_distance: bool,
    pub lower: u64,
    pub upper: u64,
    pub status: Status,
    pub witness: Vec<DnaStrand>,
    pub method: Method,
    pub runtime_ms: Option<u64>,
    pub tool_version: String,
}

impl From<&BoundRecord> for RecordDocument {
    fn from(r: &BoundRecord) -> Self {
        let cost_model = match &r.key.metric {
            Metric::Edit(cm) if !cm.is_unit() => Some(CostTable::from(cm)),
            _ => None,
        };
        Self {
            n: r.key.n,
            d: r.key.d,
            w: r.key.w,
            metric: r.key.metric.name().to_string(),
            cost_model,
            variant: r.key.variant,
            cross_distance: r.key.cross_distance,
            lower: r.lower,
            upper: r.upper,
            status: r.status,
            witness: r.witness.clone(),
            method: r.method,
            runtime_ms: r.runtime_ms,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

impl RecordDocument {
    pub fn to_record(&self) -> Result<BoundRecord> {
        let metric = match (self.metric.as_str(), &self.cost_model) {
            ("hamming", _) => Metric::Hamming,
            ("edit", None) => Metric::unit_edit(),
            ("edit" | "edit-custom", Some(t)) => Metric::Edit(CostModel::new(t.substitution, t.insertion, t.deletion)?),
            (other, _) => return Err(Error::InvalidKey(format!("unknown metric {other:?}"))),
        };
        let key = BoundKey {
            n: self.n,
            d: self.d,
            w: self.w,
            metric,
            variant: self.variant,
            cross_distance: self.cross_distance,
        };
        key.validate()?;
        Ok(BoundRecord {
            key,
            lower: self.lower,
            upper: self.upper,
            status: self.status,
            witness: self.witness.clone(),
            method: self.method,
            runtime_ms: self.runtime_ms,
        })
    }

    pub fn file_name(&self) -> String {
        let w = self.w.map_or("any".to_string(), |w| w.to_string());
        let cross = if self.cross_distance { "-cross" } else { "" };
        format!("{}-{}{cross}-n{}-d{}-w{w}.json", self.variant, self.metric, self.n, self.d)
    }
}

/// Writes one JSON document for `record` into `dir`, returning its path.
pub fn save_record(record: &BoundRecord, dir: &Path) -> Result<PathBuf> {
    let doc = RecordDocument::from(record);
    std::fs::create_dir_all(dir)?;
    let path = dir.join(doc.file_name());
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

/// Loads every `*.json` record in `dir`, sorted by file name.
pub fn load_records(dir: &Path) -> Result<Vec<BoundRecord>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let doc: RecordDocument = serde_json::from_str(&std::fs::read_to_string(p)?)?;
            doc.to_record()
        })
        .collect()
}

/// Text grid of records: one block per (metric, variant, n), rows `w`,
/// columns `d`. Gaps print as `lower-upper`.
pub fn render_table(records: &[BoundRecord]) -> String {
    type Grid = BTreeMap<(Option<usize>, usize), String>;
    let mut blocks: BTreeMap<(String, Variant, bool, usize), Grid> = BTreeMap::new();
    for r in records {
        let cell = match r.status {
            Status::Exact => r.lower.to_string(),
            Status::Gap => format!("{}-{}", r.lower, r.upper),
        };
        blocks
            .entry((r.key.metric.name().to_string(), r.key.variant, r.key.cross_distance, r.key.n))
            .or_default()
            .insert((r.key.w, r.key.d), cell);
    }
    let mut out = String::new();
    for ((metric, variant, cross, n), cells) in blocks {
        let cross = if cross { " cross" } else { "" };
        out.push_str(&format!("{metric} {variant}{cross} n={n}\n"));
        let ds: Vec<usize> = {
            let mut v: Vec<usize> = cells.keys().map(|&(_, d)| d).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let ws: Vec<Option<usize>> = {
            let mut v: Vec<Option<usize>> = cells.keys().map(|&(w, _)| w).collect();
            v.dedup();
            v
        };
        let width = cells.values().map(String::len).max().unwrap_or(1).max(4);
        out.push_str(&format!("{:>5} |", "w\\d"));
        for d in &ds {
            out.push_str(&format!(" {d:>width$}"));
        }
        out.push('\n');
        out.push_str(&format!("{}+{}\n", "-".repeat(6), "-".repeat(ds.len() * (width + 1))));
        for w in ws {
            let label = w.map_or("*".to_string(), |w| w.to_string());
            out.push_str(&format!("{label:>5} |"));
            for d in &ds {
                let cell = cells.get(&(w, *d)).map_or(".", String::as_str);
                out.push_str(&format!(" {cell:>width$}"));
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(key: &BoundKey) -> u64 {
        exact_max_code(key, &SearchBudget::default()).unwrap().value().unwrap()
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(constant_gc_universe(2, 1).len(), 8);
        let at = constant_gc_universe(4, 0);
        assert_eq!(at.len(), 16);
        assert!(at.iter().all(|s| s.bases().iter().all(|b| matches!(b, Base::A | Base::T))));
        assert_eq!(constant_gc_universe(4, 4).len(), 16);
        for n in 0..=6 {
            for w in 0..=n {
                assert_eq!(constant_gc_universe(n, w).len() as u128, binomial(n, w) << n);
            }
        }
        let u = constant_gc_universe(3, 2);
        assert!(u.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn small_values() {
        for n in 1..=4 {
            for w in 0..=n {
                let k = BoundKey::gc(n, 1, w, Metric::Hamming);
                assert_eq!(exact(&k) as u128, binomial(n, w) << n);
            }
        }
        assert_eq!(exact(&BoundKey::gc(3, 3, 0, Metric::Hamming)), 2);
        assert_eq!(exact(&BoundKey::gc(1, 1, 1, Metric::Hamming)), 2);
        assert_eq!(exact(&BoundKey::gc(1, 1, 1, Metric::unit_edit())), 2);
    }

    #[test]
    fn binary_values() {
        let b = SearchBudget::default();
        assert_eq!(a2(3, 3, &Metric::Hamming, &b).unwrap(), 2);
        assert_eq!(a2(4, 4, &Metric::Hamming, &b).unwrap(), 2);
        for n in 1..=5 {
            assert_eq!(a2(n, 1, &Metric::Hamming, &b).unwrap(), 1 << n);
        }
    }

    #[test]
    fn over_budget_is_reported() {
        let key = BoundKey::gc(8, 3, 4, Metric::Hamming);
        let strict = SearchBudget::default();
        assert!(matches!(exact_max_code(&key, &strict), Err(Error::OverBudget { .. })));
        let key = BoundKey::gc(7, 5, 3, Metric::Hamming);
        let loose = SearchBudget { allow_gap: true, ..SearchBudget::default() };
        let rec = exact_max_code(&key, &loose).unwrap();
        assert_eq!(rec.status, Status::Gap);
        assert!(rec.lower <= rec.upper);
        assert_eq!(rec.lower as usize, rec.witness.len());
    }

    #[test]
    fn reverse_variant_witness_is_closed() {
        for variant in [Variant::R, Variant::RC] {
            let key = BoundKey::gc(4, 2, 2, Metric::unit_edit()).with_variant(variant);
            let rec = exact_max_code(&key, &SearchBudget::default()).unwrap();
            assert_eq!(rec.lower as usize, rec.witness.len());
            for s in &rec.witness {
                assert!(rec.witness.contains(&variant.apply(s)));
            }
        }
    }

    #[test]
    fn record_document_round_trip() {
        let key = BoundKey::gc(3, 2, 1, Metric::Hamming).with_variant(Variant::R);
        let rec = exact_max_code(&key, &SearchBudget::default()).unwrap();
        let doc = RecordDocument::from(&rec);
        let text = serde_json::to_string(&doc).unwrap();
        let back: RecordDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_record().unwrap(), rec);
        assert_eq!(doc.file_name(), "r-hamming-n3-d2-w1.json");
    }
}
