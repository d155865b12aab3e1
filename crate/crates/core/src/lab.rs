//! Exhaustive state-space harness: enumeration, classification by
//! content, closure, period verification and the completeness diagnostic.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::automaton::{Evolvability, OrbitOutcome, Space, SpaceSpec, State};
use crate::bethe::{
    content_weight, format_ratio, is_valid_content, lambda_weight, omega, omega_rational, orbit_size, period_formula,
    DominantWeight,
};
use crate::content::Content;
use crate::error::{Error, Result};

/// Default refusal threshold for exhaustive enumeration.
pub const DEFAULT_STATE_BOUND: u128 = 10_000_000;

/// All states of a space in mixed-radix order, last factor fastest.
#[derive(Clone, Debug)]
pub struct StateEnumerator {
    radices: Vec<u32>,
    size: u64,
}

impl StateEnumerator {
    pub fn size(&self) -> u64 {
        self.size
    }

    /// The `k`-th state as component indices.
    pub fn nth(&self, mut k: u64) -> Vec<u32> {
        let mut out = vec![0u32; self.radices.len()];
        for (slot, &r) in out.iter_mut().zip(&self.radices).rev() {
            *slot = (k % r as u64) as u32;
            k /= r as u64;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.size).map(|k| self.nth(k))
    }
}

/// Refuses when `prod |B^{r_i,l_i}|` exceeds `bound`.
pub fn enumerate_states(space: &Space<'_>, bound: u128) -> Result<StateEnumerator> {
    let radices: Vec<u32> = space.factor_crystals().iter().map(|c| c.len() as u32).collect();
    let size = radices.iter().fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
    if size > bound {
        return Err(Error::TooManyStates { size, bound });
    }
    Ok(StateEnumerator { radices, size: size as u64 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRow {
    pub content: Content,
    pub lambda: DominantWeight,
    pub orbit: u64,
    pub population: u64,
    pub omega: BigInt,
    /// `T(P(m)) = P(m)`.
    pub closed: bool,
    /// `Omega = |P| / |W lambda|`.
    pub ratio_ok: bool,
    /// `|P| / |W lambda|` is an integer dividing `Omega`.
    pub divisor_ok: bool,
    /// Weights of `P(m)` are exactly `W lambda`, each equally often.
    pub weights_ok: bool,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub spec: SpaceSpec,
    pub total: u64,
    pub evolvable: u64,
    pub rows: Vec<ClassificationRow>,
    /// First failing `(a, j)` of each non-evolvable state, counted.
    pub failures: BTreeMap<(usize, usize), u64>,
    /// `P(m)` as component indices, sorted.
    pub members: BTreeMap<Content, Vec<Vec<u32>>>,
}

impl Classification {
    pub fn row(&self, m: &Content) -> Option<&ClassificationRow> {
        self.rows.iter().find(|r| &r.content == m)
    }

    /// States of `P(m)` whose weight is the dominant `lambda(m)`.
    pub fn fixed_weight_states(&self, space: &Space<'_>, m: &Content) -> Vec<State> {
        let Some(row) = self.row(m) else { return Vec::new() };
        let target: Vec<u32> = row.lambda.0.iter().map(|&x| x as u32).collect();
        self.members[m].iter().filter(|p| space.weight_indexed(p).0 == target).map(|p| space.state(p)).collect()
    }
}

enum Scanned {
    Evolvable { content: Content, images: Vec<Vec<u32>> },
    Failed { color: usize, length: usize },
}

fn scan_one(space: &Space<'_>, p: &[u32]) -> Result<Scanned> {
    let mut images = Vec::new();
    match space.scan(p, Some(&mut images))? {
        Evolvability::Evolvable(spectrum) => {
            let content = spectrum.content()?;
            if !is_valid_content(space.spec(), &content) {
                return Err(Error::InvalidContent { state: space.state(p).to_string(), content: content.to_string() });
            }
            Ok(Scanned::Evolvable { content, images })
        }
        Evolvability::NotEvolvable { color, length } => Ok(Scanned::Failed { color, length }),
    }
}

fn prepare_all(space: &Space<'_>) -> Result<()> {
    for a in 1..=space.rank() {
        for j in 1..=space.spec().cutoff() {
            space.prepare(a, j)?;
        }
    }
    Ok(())
}

/// Distinct permutations of a weight.
pub fn weyl_orbit(w: &[u64]) -> Vec<Vec<u64>> {
    let mut v = w.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { break };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
    out
}

fn row_order(m: &Content) -> (usize, u64, Vec<Vec<usize>>) {
    let top = (1..=m.rank()).rev().find(|&a| !m.partition(a).is_empty()).unwrap_or(0);
    let size = (1..=m.rank()).map(|a| m.color_size(a)).sum();
    (top, size, (1..=m.rank()).map(|a| m.partition(a)).collect())
}

/// Group all evolvable states of the space by soliton content.
pub fn classify(space: &Space<'_>, bound: u128) -> Result<Classification> {
    let states = enumerate_states(space, bound)?;
    prepare_all(space)?;
    let scanned: Vec<(Vec<u32>, Scanned)> = (0..states.size())
        .into_par_iter()
        .map(|k| {
            let p = states.nth(k);
            scan_one(space, &p).map(|s| (p, s))
        })
        .collect::<Result<_>>()?;

    let mut failures = BTreeMap::new();
    let mut members: BTreeMap<Content, Vec<Vec<u32>>> = BTreeMap::new();
    let mut content_of: HashMap<Vec<u32>, Content> = HashMap::new();
    let mut images_of: HashMap<Vec<u32>, Vec<Vec<u32>>> = HashMap::new();
    for (p, s) in scanned {
        match s {
            Scanned::Evolvable { content, images } => {
                members.entry(content.clone()).or_default().push(p.clone());
                content_of.insert(p.clone(), content);
                images_of.insert(p, images);
            }
            Scanned::Failed { color, length } => *failures.entry((color, length)).or_insert(0) += 1,
        }
    }

    let mut rows = Vec::with_capacity(members.len());
    for (m, ps) in &members {
        let lambda = lambda_weight(space.spec(), m)?;
        let orbit = orbit_size(&lambda);
        let population = ps.len() as u64;
        let om = omega(space.spec(), m)?;
        let closed = ps.iter().all(|p| images_of[p].iter().all(|q| content_of.get(q) == Some(m)));
        let ratio_ok = om == BigInt::from(population) / orbit && population % orbit == 0;
        let divisor_ok = population % orbit == 0 && {
            let d = BigInt::from(population / orbit);
            !d.is_zero() && (&om % &d).is_zero()
        };
        let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for p in ps {
            *counts.entry(space.weight_indexed(p).0.iter().map(|&x| x as u64).collect()).or_insert(0) += 1;
        }
        let orbit_set: BTreeSet<Vec<u64>> = weyl_orbit(&lambda.0).into_iter().collect();
        let weights_ok = counts.keys().cloned().collect::<BTreeSet<_>>() == orbit_set
            && counts.values().all(|&c| c * orbit == population);
        rows.push(ClassificationRow {
            content: m.clone(),
            lambda,
            orbit,
            population,
            omega: om,
            closed,
            ratio_ok,
            divisor_ok,
            weights_ok,
        });
    }
    rows.sort_by_key(|r| row_order(&r.content));
    for ps in members.values_mut() {
        ps.sort();
    }
    let evolvable = content_of.len() as u64;
    Ok(Classification { spec: space.spec().clone(), total: states.size(), evolvable, rows, failures, members })
}

/// Whether every one-step image `T^{(a)}_j(p)`, `p` in `members`,
/// `j <= cutoff`, is evolvable with content `m`.
pub fn closure_check(space: &Space<'_>, members: &[Vec<u32>], m: &Content) -> Result<bool> {
    for p in members {
        let mut images = Vec::new();
        if !space.scan(p, Some(&mut images))?.is_evolvable() {
            return Ok(false);
        }
        for q in images {
            match space.scan(&q, None)? {
                Evolvability::Evolvable(s) if s.content().ok().as_ref() == Some(m) => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodVerdict {
    Equal,
    /// Measured is a proper divisor of predicted.
    Divisor,
    Violation,
    /// No return within the step cap.
    NotReturned,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodRow {
    pub r: usize,
    pub l: usize,
    pub ratios: Vec<BigRational>,
    pub predicted: BigInt,
    pub measured: Option<u64>,
    pub verdict: PeriodVerdict,
}

/// Predicted vs measured periods of `state` under each `T^{(r)}_l`.
/// The step cap is `max(cap, predicted)`.
pub fn verify_periods(space: &Space<'_>, state: &State, pairs: &[(usize, usize)], cap: u64) -> Result<Vec<PeriodRow>> {
    let m = space.soliton_content(state)?;
    let mut out = Vec::with_capacity(pairs.len());
    for &(r, l) in pairs {
        let pred = period_formula(space.spec(), &m, r, l)?;
        let limit = pred.period.to_u64().unwrap_or(u64::MAX).max(cap);
        let (measured, verdict) = match space.orbit_period(state, r, l, limit)? {
            OrbitOutcome::Period(t) => {
                let t_big = BigInt::from(t);
                let v = if t_big == pred.period {
                    PeriodVerdict::Equal
                } else if (&pred.period % &t_big).is_zero() {
                    PeriodVerdict::Divisor
                } else {
                    PeriodVerdict::Violation
                };
                (Some(t), v)
            }
            OrbitOutcome::NotReturned { .. } => (None, PeriodVerdict::NotReturned),
            OrbitOutcome::Dies { step, state } => return Err(Error::Dies { step, state: state.to_string() }),
        };
        out.push(PeriodRow {
            r,
            l,
            ratios: pred.ratios.into_iter().map(|(_, q)| q).collect(),
            predicted: pred.period,
            measured,
            verdict,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightLine {
    /// Letter counts; may be negative for contents beyond capacity.
    pub weight: Vec<i64>,
    pub character: u64,
    /// `sum_m Omega(m) [lambda(m) = weight]` over every `m` within the bound.
    pub signed: BigRational,
    /// `sum_m Omega(m) [weight in W lambda(m)]` over valid `m` within the bound.
    pub orbit_sum: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub bound: usize,
    pub contents: usize,
    pub valid_contents: usize,
    pub lines: Vec<WeightLine>,
}

impl CompletenessReport {
    pub fn signed_matches(&self) -> bool {
        self.lines.iter().all(|l| l.signed == BigRational::from_integer(l.character.into()))
    }

    pub fn orbit_matches(&self) -> bool {
        self.lines.iter().all(|l| l.orbit_sum == BigInt::from(l.character))
    }

    pub fn character_total(&self) -> u64 {
        self.lines.iter().map(|l| l.character).sum()
    }

    pub fn orbit_total(&self) -> BigInt {
        self.lines.iter().map(|l| &l.orbit_sum).sum()
    }
}

fn partitions_up_to(max: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for j in (1..=cap.min(rest)).rev() {
            cur.push(j);
            go(rest - j, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max, max, &mut Vec::new(), &mut out);
    out
}

/// Letter-count character of `B`, by convolution over the factors.
pub fn character(space: &Space<'_>) -> BTreeMap<Vec<i64>, u64> {
    let n = space.rank();
    let mut acc: BTreeMap<Vec<i64>, u64> = BTreeMap::from([(vec![0; n + 1], 1)]);
    for c in space.factor_crystals() {
        let mut local: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
        for t in c.elements() {
            *local.entry(t.weight().0.iter().map(|&x| x as i64).collect()).or_insert(0) += 1;
        }
        let mut next = BTreeMap::new();
        for (w, a) in &acc {
            for (v, b) in &local {
                let s: Vec<i64> = w.iter().zip(v).map(|(x, y)| x + y).collect();
                *next.entry(s).or_insert(0) += a * b;
            }
        }
        acc = next;
    }
    acc
}

/// Truncated completeness sums against the character of `B`. Every
/// content with at most `bound` boxes per color enters the signed sum;
/// the valid ones also enter the orbit sum. Diagnostic only.
pub fn completeness_diagnostic(space: &Space<'_>, bound: usize) -> Result<CompletenessReport> {
    let spec = space.spec();
    let n = spec.rank();
    let parts = partitions_up_to(bound);
    let mut contents = vec![Vec::<Vec<usize>>::new()];
    for _ in 0..n {
        contents = contents
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    let evaluated: Vec<(Vec<i64>, BigRational, Option<(Vec<u64>, BigInt)>)> = contents
        .par_iter()
        .map(|parts| -> Result<_> {
            let m = Content::from_partitions(n, parts)?;
            let lam = content_weight(spec, &m);
            let om = omega_rational(spec, &m);
            let valid = if is_valid_content(spec, &m) {
                let w = lambda_weight(spec, &m)?;
                Some((w.0, omega(spec, &m)?))
            } else {
                None
            };
            Ok((lam, om, valid))
        })
        .collect::<Result<_>>()?;

    let chars = character(space);
    let mut signed: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    let mut orbit: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    let mut valid_contents = 0;
    for (lam, om, valid) in &evaluated {
        *signed.entry(lam.clone()).or_insert_with(BigRational::zero) += om;
        if let Some((w, om)) = valid {
            valid_contents += 1;
            for v in weyl_orbit(w) {
                *orbit.entry(v.into_iter().map(|x| x as i64).collect()).or_insert_with(BigInt::zero) += om;
            }
        }
    }
    let keys: BTreeSet<Vec<i64>> = chars.keys().chain(signed.keys()).chain(orbit.keys()).cloned().collect();
    let mut lines: Vec<WeightLine> = keys
        .into_iter()
        .map(|w| WeightLine {
            character: chars.get(&w).copied().unwrap_or(0),
            signed: signed.get(&w).cloned().unwrap_or_else(BigRational::zero),
            orbit_sum: orbit.get(&w).cloned().unwrap_or_else(BigInt::zero),
            weight: w,
        })
        .collect();
    lines.sort_by(|a, b| b.weight.cmp(&a.weight));
    Ok(CompletenessReport { bound, contents: evaluated.len(), valid_contents, lines })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("unknown format '{s}' (text, csv, json)")),
        }
    }
}

fn big_json(x: &BigInt) -> Value {
    x.to_i64().map(Value::from).unwrap_or_else(|| Value::from(x.to_string()))
}

fn row_json(r: &ClassificationRow) -> Value {
    json!({
        "content": r.content.tuple_notation(),
        "lambda": r.lambda.to_string(),
        "orbit": r.orbit,
        "population": r.population,
        "omega": big_json(&r.omega),
        "closed": r.closed,
        "ratio_ok": r.ratio_ok,
    })
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn align(table: &[Vec<String>]) -> String {
    let cols = table.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| table.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in table {
        let cells: Vec<String> =
            row.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

pub fn render_classification(c: &Classification, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut table = vec![["m", "lambda", "|W lambda|", "|P|", "Omega", "closed", "ratio_ok"]
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()];
            for r in &c.rows {
                let star = if r.closed { "" } else { "*" };
                table.push(vec![
                    format!("{}{star}", r.content.tuple_notation()),
                    r.lambda.to_string(),
                    r.orbit.to_string(),
                    r.population.to_string(),
                    r.omega.to_string(),
                    r.closed.to_string(),
                    r.ratio_ok.to_string(),
                ]);
            }
            let mut out = format!("B = {}\n", c.spec);
            out += &align(&table);
            let _ = writeln!(out, "states {}  evolvable {}", c.total, c.evolvable);
            for ((a, j), k) in &c.failures {
                let _ = writeln!(out, "first failure at T({a},{j}): {k}");
            }
            out
        }
        OutputFormat::Csv => {
            let mut rows: Vec<Vec<String>> = c
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.content.tuple_notation(),
                        r.lambda.to_string(),
                        r.orbit.to_string(),
                        r.population.to_string(),
                        r.omega.to_string(),
                        r.closed.to_string(),
                        r.ratio_ok.to_string(),
                    ]
                })
                .collect();
            rows.push(vec!["total".into(), String::new(), String::new(), c.total.to_string(), String::new(), String::new(), String::new()]);
            rows.push(vec!["evolvable".into(), String::new(), String::new(), c.evolvable.to_string(), String::new(), String::new(), String::new()]);
            write_csv(&["m", "lambda", "orbit", "population", "omega", "closed", "ratio_ok"], rows)
        }
        OutputFormat::Json => {
            let v = json!({
                "space": c.spec.to_string(),
                "states": c.total,
                "evolvable": c.evolvable,
                "rows": c.rows.iter().map(row_json).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
    }
}

pub fn render_periods(rows: &[PeriodRow], format: OutputFormat) -> String {
    let ratio_list = |r: &PeriodRow| {
        std::iter::once("1".to_string()).chain(r.ratios.iter().map(format_ratio)).collect::<Vec<_>>()
    };
    let measured = |r: &PeriodRow| r.measured.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
    let verdict = |r: &PeriodRow| serde_json::to_value(r.verdict).unwrap().as_str().unwrap().to_string();
    match format {
        OutputFormat::Text => {
            let mut table = vec![vec!["(r,l)".to_string(), "LCM of".into(), "predicted".into(), "measured".into(), "verdict".into()]];
            for r in rows {
                table.push(vec![
                    format!("({},{})", r.r, r.l),
                    ratio_list(r).join(", "),
                    r.predicted.to_string(),
                    measured(r),
                    verdict(r),
                ]);
            }
            align(&table)
        }
        OutputFormat::Csv => write_csv(
            &["r", "l", "ratios", "predicted", "measured", "verdict"],
            rows.iter().map(|r| {
                vec![r.r.to_string(), r.l.to_string(), ratio_list(r).join(" "), r.predicted.to_string(), measured(r), verdict(r)]
            }),
        ),
        OutputFormat::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "r": r.r,
                        "l": r.l,
                        "ratios": ratio_list(r),
                        "predicted": big_json(&r.predicted),
                        "measured": r.measured,
                        "verdict": r.verdict,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
    }
}

pub fn render_completeness(report: &CompletenessReport) -> String {
    let mut table = vec![["weight", "char B", "signed sum", "orbit sum"].iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for l in &report.lines {
        let w: Vec<String> = l.weight.iter().map(|x| x.to_string()).collect();
        let signed = if l.signed.is_integer() { l.signed.numer().to_string() } else { l.signed.to_string() };
        table.push(vec![format!("({})", w.join(",")), l.character.to_string(), signed, l.orbit_sum.to_string()]);
    }
    let mut out = format!(
        "bound {} boxes per color: {} contents, {} valid\n",
        report.bound, report.contents, report.valid_contents
    );
    out += &align(&table);
    let _ = writeln!(
        out,
        "character total {}  orbit-sum total {}  signed matches: {}  orbit matches: {}",
        report.character_total(),
        report.orbit_total(),
        report.signed_matches(),
        report.orbit_matches()
    );
    out
}
