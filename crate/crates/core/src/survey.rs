//! Exhaustive surveys of small digraphs: enumeration with balance pruning,
//! brute-force canonical labels, `(alpha, alpha_comp)` scatter records and
//! empirical conjecture checks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fmt::{g17, json_number, json_string};
use crate::graph::{code_bits, code_to_hex, hex_to_code, Digraph};
use crate::par::Execution;
use crate::rnr::{alpha_beta_with, tidy, classify_restricted, wu_bound, ClassifyConfig, PolygonalClass, Restrictor};

pub const MAX_ALL_ORDER: usize = 5;
pub const MAX_BALANCED_ORDER: usize = 6;
/// Largest order with precomputed canonicalization tables.
pub const MAX_DEDUP_ORDER: usize = 6;
/// Half-width of the excluded spread windows around 0 and 1.
pub const SPREAD_EPS: f64 = 1e-6;
/// Slack on `curve_f` sign tests and on the `x, y <= 1` window.
pub const CURVE_TOL: f64 = 1e-9;
/// An algebraic connectivity this close to zero counts as zero.
pub const ZERO_TOL: f64 = 1e-9;

pub const CSV_HEADER: &str = "id,n,balanced,class,alpha,alpha_comp,beta,spread";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    All,
    Balanced,
    Polygonal,
}

impl Filter {
    pub fn as_str(self) -> &'static str {
        match self {
            Filter::All => "all",
            Filter::Balanced => "balanced",
            Filter::Polygonal => "polygonal",
        }
    }

    pub fn max_order(self) -> usize {
        match self {
            Filter::Balanced => MAX_BALANCED_ORDER,
            Filter::All | Filter::Polygonal => MAX_ALL_ORDER,
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "balanced" => Ok(Filter::Balanced),
            "polygonal" => Ok(Filter::Polygonal),
            other => Err(Error::InvalidArgument(format!("unknown filter '{other}'"))),
        }
    }
}

fn check_order(n: usize, filter: Filter) -> Result<()> {
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    if n > filter.max_order() {
        return Err(Error::OrderUnsupported {
            n,
            filter: filter.as_str(),
            max: filter.max_order(),
        });
    }
    Ok(())
}

/// Position of arc `(i, j)` in the row-major off-diagonal order.
fn arc_index(n: usize, i: usize, j: usize) -> usize {
    i * (n - 1) + if j < i { j } else { j - 1 }
}

fn arc_bit(n: usize, i: usize, j: usize) -> u64 {
    1 << (code_bits(n) - 1 - arc_index(n, i, j))
}

/// All balanced arc codes of order `n`, ascending.
///
/// Pairs `{i, j}` are assigned in lexicographic order; after each pair the
/// imbalance `d+ - d-` of each endpoint must still be repairable by the
/// pairs left at that vertex (each changes it by at most one).
pub fn balanced_codes(n: usize) -> Vec<u64> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut state = Backtrack {
        n,
        pairs: &pairs,
        imbalance: vec![0i32; n],
        remaining: vec![n as i32 - 1; n],
        out: Vec::new(),
    };
    state.descend(0, 0);
    state.out.sort_unstable();
    state.out
}

struct Backtrack<'a> {
    n: usize,
    pairs: &'a [(usize, usize)],
    imbalance: Vec<i32>,
    remaining: Vec<i32>,
    out: Vec<u64>,
}

impl Backtrack<'_> {
    fn descend(&mut self, k: usize, code: u64) {
        let Some(&(i, j)) = self.pairs.get(k) else {
            self.out.push(code);
            return;
        };
        self.remaining[i] -= 1;
        self.remaining[j] -= 1;
        let (fwd, back) = (arc_bit(self.n, i, j), arc_bit(self.n, j, i));
        // none, i->j, j->i, both; net change to imbalance[i]
        for (bits, delta) in [(0, 0), (fwd, 1), (back, -1), (fwd | back, 0)] {
            self.imbalance[i] += delta;
            self.imbalance[j] -= delta;
            if self.imbalance[i].abs() <= self.remaining[i]
                && self.imbalance[j].abs() <= self.remaining[j]
            {
                self.descend(k + 1, code | bits);
            }
            self.imbalance[i] -= delta;
            self.imbalance[j] += delta;
        }
        self.remaining[i] += 1;
        self.remaining[j] += 1;
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Minimum arc code over all relabelings, via per-permutation byte tables.
pub struct Canonicalizer {
    n: usize,
    chunks: usize,
    perms: usize,
    table: Vec<u64>,
}

impl Canonicalizer {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_DEDUP_ORDER {
            return Err(Error::OrderUnsupported {
                n,
                filter: "dedup",
                max: MAX_DEDUP_ORDER,
            });
        }
        let bits = code_bits(n);
        let chunks = bits.div_ceil(8).max(1);
        // image of each code bit (indexed from the LSB) under each permutation
        let arcs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let perms = permutations(n);
        let mut table = vec![0u64; perms.len() * chunks * 256];
        for (p, perm) in perms.iter().enumerate() {
            let image: Vec<u64> = (0..bits)
                .map(|lsb| {
                    let (i, j) = arcs[bits - 1 - lsb];
                    arc_bit(n, perm[i], perm[j])
                })
                .collect();
            for c in 0..chunks {
                let base = (p * chunks + c) * 256;
                for byte in 0..256usize {
                    let mut acc = 0;
                    for b in 0..8 {
                        let lsb = 8 * c + b;
                        if byte >> b & 1 == 1 && lsb < bits {
                            acc |= image[lsb];
                        }
                    }
                    table[base + byte] = acc;
                }
            }
        }
        Ok(Canonicalizer {
            n,
            chunks,
            perms: perms.len(),
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn canonical(&self, code: u64) -> u64 {
        let bytes: Vec<usize> = (0..self.chunks)
            .map(|c| (code >> (8 * c) & 0xff) as usize)
            .collect();
        (0..self.perms)
            .map(|p| {
                let base = p * self.chunks * 256;
                bytes
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (c, &b)| acc | self.table[base + c * 256 + b])
            })
            .min()
            .unwrap_or(code)
    }

    pub fn canonical_id(&self, code: u64) -> String {
        code_to_hex(self.n, self.canonical(code))
    }
}

/// Labeled candidate codes before any polygonality test, ascending.
fn labeled_codes(n: usize, filter: Filter) -> Vec<u64> {
    match filter {
        Filter::Balanced => balanced_codes(n),
        Filter::All | Filter::Polygonal => (0..1u64 << code_bits(n)).collect(),
    }
}

/// Codes passing the structural part of `filter`, optionally reduced to
/// canonical representatives. Polygonality is tested by the caller.
pub fn candidate_codes(n: usize, filter: Filter, dedup: bool, exec: Execution) -> Result<Vec<u64>> {
    check_order(n, filter)?;
    let codes = labeled_codes(n, filter);
    if !dedup {
        return Ok(codes);
    }
    let canon = Canonicalizer::new(n)?;
    let mut reps = exec.map(&codes, |&c| canon.canonical(c));
    reps.sort_unstable();
    reps.dedup();
    Ok(reps)
}

pub fn enumerate(n: usize, filter: Filter, dedup: bool) -> Result<Vec<Digraph>> {
    enumerate_with(n, filter, dedup, Execution::default())
}

pub fn enumerate_with(n: usize, filter: Filter, dedup: bool, exec: Execution) -> Result<Vec<Digraph>> {
    let codes = candidate_codes(n, filter, dedup, exec)?;
    let cfg = ClassifyConfig::default();
    let q = Restrictor::householder(n)?;
    let kept = exec.try_map(&codes, |&c| -> Result<Option<Digraph>> {
        let g = Digraph::from_arc_code(n, c)?;
        if filter == Filter::Polygonal && !classify_restricted(&g, &q, &cfg)?.is_polygonal() {
            return Ok(None);
        }
        Ok(Some(g))
    })?;
    Ok(kept.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyRecord {
    pub id: String,
    pub code: u64,
    pub n: usize,
    pub balanced: bool,
    pub class: PolygonalClass,
    pub alpha: f64,
    /// Algebraic connectivity of the complement, computed directly.
    pub alpha_comp: f64,
    pub beta: f64,
    pub spread: f64,
}

impl SurveyRecord {
    pub fn digraph(&self) -> Result<Digraph> {
        Digraph::from_arc_code(self.n, self.code)
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.id,
            self.n,
            self.balanced,
            self.class,
            g17(self.alpha),
            g17(self.alpha_comp),
            g17(self.beta),
            g17(self.spread)
        )
    }
}

fn compute_record(n: usize, code: u64, q: &Restrictor, cfg: &ClassifyConfig) -> Result<SurveyRecord> {
    let g = Digraph::from_arc_code(n, code)?;
    let (alpha, beta) = alpha_beta_with(&g, q)?;
    let (alpha, beta) = (tidy(alpha), tidy(beta));
    let alpha_comp = tidy(alpha_beta_with(&g.complement(), q)?.0);
    Ok(SurveyRecord {
        id: code_to_hex(n, code),
        code,
        n,
        balanced: g.is_balanced(0.0),
        class: classify_restricted(&g, q, cfg)?,
        alpha,
        alpha_comp,
        beta,
        spread: beta - alpha,
    })
}

/// Recomputes the record of the digraph with hex id `id`.
pub fn record_from_id(n: usize, id: &str, cfg: &ClassifyConfig) -> Result<SurveyRecord> {
    let code = hex_to_code(n, id)?;
    compute_record(n, code, &Restrictor::householder(n)?, cfg)
}

pub fn scatter(n: usize, filter: Filter, dedup: bool) -> Result<Vec<SurveyRecord>> {
    scatter_with(n, filter, dedup, Execution::default(), &ClassifyConfig::default())
}

pub fn scatter_with(
    n: usize,
    filter: Filter,
    dedup: bool,
    exec: Execution,
    cfg: &ClassifyConfig,
) -> Result<Vec<SurveyRecord>> {
    let codes = candidate_codes(n, filter, dedup, exec)?;
    let q = Restrictor::householder(n)?;
    let mut records = exec.try_map(&codes, |&c| compute_record(n, c, &q, cfg))?;
    if filter == Filter::Polygonal {
        records.retain(|r| r.class.is_polygonal());
    }
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(records)
}

/// Spread statistics over every digraph of order `n`, without classification.
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadScan {
    pub n: usize,
    pub count: u64,
    pub max_spread: f64,
    /// Smallest code attaining `max_spread`.
    pub argmax: u64,
    /// Largest `spread - wu_bound` seen.
    pub max_wu_excess: f64,
    pub max_wu_bound: f64,
}

pub fn spread_scan(n: usize, exec: Execution) -> Result<SpreadScan> {
    check_order(n, Filter::All)?;
    let q = Restrictor::householder(n)?;
    let total = 1u64 << code_bits(n);
    let rows = exec.try_filter_map_range(0..total, |c| -> Result<Option<(f64, f64)>> {
        let g = Digraph::from_arc_code(n, c)?;
        let (a, b) = alpha_beta_with(&g, &q)?;
        Ok(Some((b - a, wu_bound(&g))))
    })?;
    let mut scan = SpreadScan {
        n,
        count: total,
        max_spread: f64::NEG_INFINITY,
        argmax: 0,
        max_wu_excess: f64::NEG_INFINITY,
        max_wu_bound: f64::NEG_INFINITY,
    };
    for (c, &(s, wu)) in rows.iter().enumerate() {
        if s > scan.max_spread {
            scan.max_spread = s;
            scan.argmax = c as u64;
        }
        scan.max_wu_excess = scan.max_wu_excess.max(s - wu);
        scan.max_wu_bound = scan.max_wu_bound.max(wu);
    }
    Ok(scan)
}

/// `xy(2 - xy) - n(1 - x)(1 - y)(n - 2 - x - y)`.
pub fn curve_f(x: f64, y: f64, n: usize) -> f64 {
    let n = n as f64;
    x * y * (2.0 - x * y) - n * (1.0 - x) * (1.0 - y) * (n - 2.0 - x - y)
}

pub fn emit_csv(records: &[SurveyRecord]) -> String {
    let mut sorted: Vec<&SurveyRecord> = records.iter().collect();
    sorted.sort_by(|a, b| (a.n, &a.id).cmp(&(b.n, &b.id)));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

pub fn is_tournament(g: &Digraph) -> bool {
    let n = g.order();
    (0..n).all(|i| (i + 1..n).all(|j| g.weight(i, j) + g.weight(j, i) == 1.0))
        && g.is_unweighted()
}

pub fn is_regular_tournament(g: &Digraph) -> bool {
    is_tournament(g) && g.regular_degree() == Some((g.order() as f64 - 1.0) / 2.0)
}

/// `Some(k)` if `g` is the k-imploding star up to relabeling.
pub fn imploding_star_k(g: &Digraph) -> Option<usize> {
    let n = g.order();
    let sink: Vec<bool> = (0..n).map(|v| g.in_degree(v) == (n - 1) as f64).collect();
    let matches = (0..n).all(|i| (0..n).all(|j| i == j || g.weight(i, j) == f64::from(u8::from(sink[j]))));
    matches.then(|| sink.iter().filter(|&&s| s).count())
}

/// Regular with `d+ = d- = r` at every vertex.
fn is_r_regular(g: &Digraph, r: f64) -> bool {
    g.regular_degree() == Some(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Supported,
    Counterexample,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Supported => "supported",
            Status::Counterexample => "counterexample",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Population {
    Balanced,
    Polygonal,
    All,
}

impl Population {
    pub fn as_str(self) -> &'static str {
        match self {
            Population::Balanced => "balanced",
            Population::Polygonal => "polygonal",
            Population::All => "all",
        }
    }

    pub fn contains(self, r: &SurveyRecord) -> bool {
        match self {
            Population::Balanced => r.balanced,
            Population::Polygonal => r.class.is_polygonal(),
            Population::All => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureStats {
    pub records: usize,
    pub min_positive_spread: Option<f64>,
    pub max_spread: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureReport {
    pub conjecture: &'static str,
    pub order: usize,
    pub population: Population,
    pub status: Status,
    pub witnesses: Vec<String>,
    pub stats: ConjectureStats,
    pub notes: Vec<String>,
}

impl ConjectureReport {
    pub fn is_counterexample(&self) -> bool {
        self.status == Status::Counterexample
    }

    pub fn to_json(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "null".to_string(), json_number);
        let list = |v: &[String]| v.iter().map(|s| json_string(s)).collect::<Vec<_>>().join(",");
        format!(
            "{{\"conjecture\":{},\"order\":{},\"population\":{},\"status\":{},\"witnesses\":[{}],\"stats\":{{\"records\":{},\"min_positive_spread\":{},\"max_spread\":{}}},\"notes\":[{}]}}",
            json_string(self.conjecture),
            self.order,
            json_string(self.population.as_str()),
            json_string(self.status.as_str()),
            list(&self.witnesses),
            self.stats.records,
            opt(self.stats.min_positive_spread),
            opt(self.stats.max_spread),
            list(&self.notes),
        )
    }
}

/// JSON array with one report per line.
pub fn reports_to_json(reports: &[ConjectureReport]) -> String {
    let body: Vec<String> = reports.iter().map(|r| format!("  {}", r.to_json())).collect();
    format!("[\n{}\n]\n", body.join(",\n"))
}

const REGULAR_NOTE: &str = "regular digraph read as d+(v) = d-(v) = r at every vertex";

fn in_gap(s: f64) -> bool {
    s > SPREAD_EPS && s < 1.0 - SPREAD_EPS
}

fn in_window(r: &SurveyRecord) -> bool {
    r.alpha <= 1.0 + CURVE_TOL && r.alpha_comp <= 1.0 + CURVE_TOL
}

/// Spread in {0, 1} implies: 0 -> regular tournament or imploding star;
/// 1 -> even n >= 4 and g or its complement is (n-2)/2-regular.
fn zero_one_ok(r: &SurveyRecord) -> Result<bool> {
    let g = r.digraph()?;
    if r.spread.abs() <= SPREAD_EPS {
        return Ok(is_regular_tournament(&g) || imploding_star_k(&g).is_some());
    }
    if (r.spread - 1.0).abs() <= SPREAD_EPS {
        let n = r.n;
        let k = (n as f64 - 2.0) / 2.0;
        return Ok(n >= 4 && n.is_multiple_of(2) && (is_r_regular(&g, k) || is_r_regular(&g.complement(), k)));
    }
    Ok(true)
}

fn build(
    id: &'static str,
    n: usize,
    pop: Population,
    members: &[&SurveyRecord],
    witnesses: Vec<String>,
    notes: Vec<String>,
) -> ConjectureReport {
    let spreads = members.iter().map(|r| r.spread);
    let stats = ConjectureStats {
        records: members.len(),
        min_positive_spread: spreads.clone().filter(|&s| s > SPREAD_EPS).reduce(f64::min),
        max_spread: spreads.reduce(f64::max),
    };
    ConjectureReport {
        conjecture: id,
        order: n,
        population: pop,
        status: if witnesses.is_empty() {
            Status::Supported
        } else {
            Status::Counterexample
        },
        witnesses,
        stats,
        notes,
    }
}

fn ids<'a>(it: impl Iterator<Item = &'a &'a SurveyRecord>) -> Vec<String> {
    it.map(|r| r.id.clone()).collect()
}

/// Runs the empirical checks on `records`, all of which must have order `n`.
pub fn check_conjectures(records: &[SurveyRecord], n: usize) -> Result<Vec<ConjectureReport>> {
    if records.iter().any(|r| r.n != n) {
        return Err(Error::MixedOrders);
    }
    let balanced: Vec<&SurveyRecord> = records.iter().filter(|r| r.balanced).collect();
    let polygonal: Vec<&SurveyRecord> = records.iter().filter(|r| r.class.is_polygonal()).collect();
    let mut reports = Vec::with_capacity(8);

    let gap = |pop: &[&SurveyRecord]| ids(pop.iter().filter(|r| in_gap(r.spread)));
    let zero_one = |pop: &[&SurveyRecord]| -> Result<Vec<String>> {
        let mut w = Vec::new();
        for r in pop {
            if !zero_one_ok(r)? {
                w.push(r.id.clone());
            }
        }
        Ok(w)
    };
    let below_curve = |r: &SurveyRecord| in_window(r) && curve_f(r.alpha, r.alpha_comp, n) < -CURVE_TOL;
    let curve_anchor = |pop: &[&SurveyRecord]| {
        ids(pop
            .iter()
            .filter(|r| below_curve(r) && r.alpha > ZERO_TOL && r.alpha_comp > ZERO_TOL))
    };

    reports.push(build("C6.1", n, Population::Balanced, &balanced, gap(&balanced), vec![]));

    let (w, mut notes) = if n >= 3 {
        (zero_one(&balanced)?, vec![])
    } else {
        (vec![], vec!["hypothesis requires n >= 3; vacuous".to_string()])
    };
    notes.push(REGULAR_NOTE.to_string());
    notes.push("spread-0 members may be imploding stars; for balanced digraphs only the empty and complete digraphs".to_string());
    reports.push(build("C6.2", n, Population::Balanced, &balanced, w, notes));

    let w = ids(balanced.iter().filter(|r| below_curve(r)));
    reports.push(build("C6.3", n, Population::Balanced, &balanced, w, vec![]));

    reports.push(build("C6.4", n, Population::Polygonal, &polygonal, gap(&polygonal), vec![]));

    let w = zero_one(&polygonal)?;
    reports.push(build("C6.5", n, Population::Polygonal, &polygonal, w, vec![REGULAR_NOTE.to_string()]));

    for (pop, members) in [(Population::Balanced, &balanced), (Population::Polygonal, &polygonal)] {
        let w = curve_anchor(members);
        let note = format!("checked on the {} population", pop.as_str());
        reports.push(build("C6.6", n, pop, members, w, vec![note]));
    }

    let all: Vec<&SurveyRecord> = records.iter().collect();
    let note = "trend data only (max spread at this order); no pass/fail".to_string();
    reports.push(build("C6.7", n, Population::All, &all, vec![], vec![note]));
    Ok(reports)
}
