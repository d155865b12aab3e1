//! The periodic automaton on `B = B^{r_1,l_1} (x) ... (x) B^{r_L,l_L}`.
//!
//! `T^{(r)}_l` is defined through carriers: `v (x) p ~ p' (x) v'` with the
//! exit carrier equal to the entry carrier. Every `v` in `B^{r,l}` is tried;
//! the evolution is defined when at least one fixed carrier exists and all
//! of them produce the same `p'`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::content::Content;
use crate::crystal::{signature, Crystal, CrystalLabel, Tableau, Weight};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::rmatrix::RTable;

/// The tensor factors `(r_i, l_i)` of `B` at rank `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    n: usize,
    factors: Vec<CrystalLabel>,
}

impl SpaceSpec {
    pub fn new(n: usize, factors: &[(usize, usize)]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("a space needs at least one factor".into()));
        }
        let factors = factors.iter().map(|&(r, l)| CrystalLabel::new(n, r, l)).collect::<Result<_>>()?;
        Ok(SpaceSpec { n, factors })
    }

    pub fn from_labels(n: usize, factors: Vec<CrystalLabel>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("a space needs at least one factor".into()));
        }
        if let Some(bad) = factors.iter().find(|l| l.rank() != n) {
            return Err(Error::RankMismatch { expected: n, found: bad.rank() });
        }
        Ok(SpaceSpec { n, factors })
    }

    /// Parse `"1,1;1,3;2,2"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let mut pos = 0;
        for item in text.split(';') {
            let (r, l) = item
                .split_once(',')
                .and_then(|(r, l)| Some((r.trim().parse().ok()?, l.trim().parse().ok()?)))
                .ok_or_else(|| Error::parse(pos, format!("expected 'r,l', found '{item}'")))?;
            factors.push(CrystalLabel::new(n, r, l).map_err(|e| Error::parse(pos, e.to_string()))?);
            pos += item.len() + 1;
        }
        Self::from_labels(n, factors)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[CrystalLabel] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total_boxes(&self) -> usize {
        self.factors.iter().map(|l| l.boxes()).sum()
    }

    /// Largest `j` probed for evolvability: `sum_i l_i + 1`.
    pub fn cutoff(&self) -> usize {
        self.factors.iter().map(|l| l.cols()).sum::<usize>() + 1
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, ";")?;
            }
            write!(f, "{},{}", l.rows(), l.cols())?;
        }
        Ok(())
    }
}

/// An element `b_1 (x) ... (x) b_L` of `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    components: Vec<Tableau>,
}

impl State {
    pub fn new(components: Vec<Tableau>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Precondition("a state needs at least one component".into()));
        };
        let n = first.label().rank();
        if let Some(bad) = components.iter().find(|t| t.label().rank() != n) {
            return Err(Error::RankMismatch { expected: n, found: bad.label().rank() });
        }
        Ok(State { components })
    }

    /// Parse `"2.1.233.4.1.2.12"` against a space.
    pub fn parse(spec: &SpaceSpec, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split('.').collect();
        if parts.len() != spec.len() {
            return Err(Error::parse(0, format!("state has {} components, space has {}", parts.len(), spec.len())));
        }
        let mut pos = 0;
        let mut components = Vec::with_capacity(parts.len());
        for (part, &label) in parts.iter().zip(spec.factors()) {
            components.push(Tableau::parse_at(label, part, pos)?);
            pos += part.len() + 1;
        }
        Ok(State { components })
    }

    pub fn components(&self) -> &[Tableau] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components[0].label().rank()
    }

    pub fn spec(&self) -> SpaceSpec {
        SpaceSpec { n: self.rank(), factors: self.components.iter().map(|t| t.label()).collect() }
    }

    pub fn weight(&self) -> Weight {
        let mut w = Weight::zero(self.rank());
        for t in &self.components {
            w.add_letters(t.cells());
        }
        w
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Outcome of one application of `T^{(r)}_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolutionResult {
    pub next: Option<State>,
    pub energy: Option<u64>,
    /// Number of fixed carriers found.
    pub carriers: usize,
}

/// [`EvolutionResult`] on canonical component indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedEvolution {
    pub next: Option<Vec<u32>>,
    pub energy: Option<u64>,
    pub carriers: usize,
}

/// `E^{(a)}_j` for `a = 1..=n`, `j = 1..=cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergySpectrum {
    n: usize,
    cutoff: usize,
    values: Vec<Vec<u64>>,
}

impl EnergySpectrum {
    pub fn get(&self, a: usize, j: usize) -> u64 {
        let row = &self.values[a - 1];
        row[j.min(self.cutoff) - 1]
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn color(&self, a: usize) -> &[u64] {
        &self.values[a - 1]
    }

    /// Second differences `m^{(a)}_j = 2E_j - E_{j-1} - E_{j+1}`.
    pub fn content(&self) -> Result<Content> {
        let mut items = Vec::new();
        for a in 1..=self.n {
            let e = |j: usize| if j == 0 { 0i64 } else { self.get(a, j) as i64 };
            if e(self.cutoff) != e(self.cutoff - 1) {
                return Err(Error::NoPlateau { color: a, cutoff: self.cutoff });
            }
            for j in 1..self.cutoff {
                let m = 2 * e(j) - e(j - 1) - e(j + 1);
                if m < 0 {
                    return Err(Error::NegativeContent { color: a, length: j });
                }
                items.push(((a, j), m as u64));
            }
        }
        Content::from_multiplicities(self.n, items)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evolvability {
    Evolvable(EnergySpectrum),
    /// First `(a, j)` in the scan with `T^{(a)}_j(p) = 0`.
    NotEvolvable { color: usize, length: usize },
}

impl Evolvability {
    pub fn is_evolvable(&self) -> bool {
        matches!(self, Evolvability::Evolvable(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitOutcome {
    Period(u64),
    NotReturned { cap: u64 },
    /// The iterate after `step` applications is not evolvable.
    Dies { step: u64, state: State },
}

type CarrierTables = Arc<Vec<Arc<RTable>>>;

/// A space `B` bound to an engine, with carrier tables cached per label.
#[derive(Debug)]
pub struct Space<'e> {
    engine: &'e Engine,
    spec: SpaceSpec,
    factors: Vec<Arc<Crystal>>,
    carriers: RwLock<HashMap<CrystalLabel, CarrierTables>>,
}

impl<'e> Space<'e> {
    pub fn new(engine: &'e Engine, spec: SpaceSpec) -> Self {
        let factors = spec.factors().iter().map(|&l| engine.crystal(l)).collect();
        Space { engine, spec, factors, carriers: RwLock::new(HashMap::new()) }
    }

    pub fn engine(&self) -> &'e Engine {
        self.engine
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.n
    }

    pub fn factor_crystals(&self) -> &[Arc<Crystal>] {
        &self.factors
    }

    pub fn parse_state(&self, text: &str) -> Result<State> {
        State::parse(&self.spec, text)
    }

    pub fn index(&self, p: &State) -> Result<Vec<u32>> {
        if p.components.len() != self.factors.len() {
            return Err(Error::Precondition(format!("state {p} does not belong to {}", self.spec)));
        }
        p.components
            .iter()
            .zip(&self.factors)
            .map(|(t, c)| {
                c.index_of(t).ok_or_else(|| Error::Precondition(format!("{t} is not an element of {}", c.label())))
            })
            .collect()
    }

    pub fn state(&self, idx: &[u32]) -> State {
        State { components: idx.iter().zip(&self.factors).map(|(&b, c)| c.element(b).clone()).collect() }
    }

    pub fn weight_indexed(&self, idx: &[u32]) -> Weight {
        let mut w = Weight::zero(self.rank());
        for (&b, c) in idx.iter().zip(&self.factors) {
            w.add_letters(c.element(b).cells());
        }
        w
    }

    fn carrier_tables(&self, label: CrystalLabel) -> Result<CarrierTables> {
        if let Some(t) = self.carriers.read().unwrap().get(&label) {
            return Ok(t.clone());
        }
        let tables: Vec<Arc<RTable>> =
            self.spec.factors().iter().map(|&f| self.engine.r_table(label, f)).collect::<Result<_>>()?;
        let tables = Arc::new(tables);
        Ok(self.carriers.write().unwrap().entry(label).or_insert(tables).clone())
    }

    fn carrier_label(&self, r: usize, l: usize) -> Result<CrystalLabel> {
        CrystalLabel::new(self.rank(), r, l)
            .map_err(|_| Error::Precondition(format!("T({r},{l}) needs 1 <= r <= {} and l >= 1", self.rank())))
    }

    /// Build the carrier tables of `T^{(r)}_l` ahead of a parallel run.
    pub fn prepare(&self, r: usize, l: usize) -> Result<()> {
        self.carrier_tables(self.carrier_label(r, l)?).map(drop)
    }

    /// Push carrier `v` through `p`; returns the exit carrier.
    fn pass(tables: &[Arc<RTable>], v: u32, p: &[u32], out: &mut [u32], degrees: &mut [i32]) -> u32 {
        let mut cur = v;
        for (k, (&b, t)) in p.iter().zip(tables).enumerate() {
            let im = t.image(cur, b);
            out[k] = im.out_left;
            degrees[k] = im.energy;
            cur = im.out_right;
        }
        cur
    }

    /// `T^{(r)}_l` by exhaustive carrier search.
    pub fn evolve_indexed(&self, p: &[u32], r: usize, l: usize) -> Result<IndexedEvolution> {
        let label = self.carrier_label(r, l)?;
        let carrier_len = self.engine.crystal(label).len() as u32;
        let tables = self.carrier_tables(label)?;
        let mut out = vec![0u32; p.len()];
        let mut degrees = vec![0i32; p.len()];
        let mut found: Option<(Vec<u32>, Vec<i32>)> = None;
        let mut carriers = 0;
        let mut unique = true;
        for v in 0..carrier_len {
            if Self::pass(&tables, v, p, &mut out, &mut degrees) != v {
                continue;
            }
            carriers += 1;
            match &found {
                None => found = Some((out.clone(), degrees.clone())),
                Some((o, d)) => {
                    if *o != out {
                        unique = false;
                    } else if *d != degrees {
                        return Err(Error::AmbiguousEnergy { r, l });
                    }
                }
            }
        }
        Ok(match found {
            Some((next, d)) if unique => {
                let energy = -d.iter().map(|&h| h as i64).sum::<i64>();
                debug_assert!(energy >= 0);
                IndexedEvolution { next: Some(next), energy: Some(energy as u64), carriers }
            }
            _ => IndexedEvolution { next: None, energy: None, carriers },
        })
    }

    /// Fixed-point iteration from the highest carrier: feed each exit
    /// carrier back in until it repeats. Finds one fixed carrier when the
    /// iteration settles; says nothing about uniqueness.
    pub fn evolve_fast(&self, p: &[u32], r: usize, l: usize) -> Result<Option<(Vec<u32>, u64)>> {
        let label = self.carrier_label(r, l)?;
        let tables = self.carrier_tables(label)?;
        let mut out = vec![0u32; p.len()];
        let mut degrees = vec![0i32; p.len()];
        let mut v = 0;
        for _ in 0..p.len() + 2 {
            let exit = Self::pass(&tables, v, p, &mut out, &mut degrees);
            if exit == v {
                let energy = -degrees.iter().map(|&h| h as i64).sum::<i64>();
                return Ok(Some((out, energy as u64)));
            }
            v = exit;
        }
        Ok(None)
    }

    pub fn time_evolution(&self, p: &State, r: usize, l: usize) -> Result<EvolutionResult> {
        let ev = self.evolve_indexed(&self.index(p)?, r, l)?;
        Ok(EvolutionResult { next: ev.next.map(|x| self.state(&x)), energy: ev.energy, carriers: ev.carriers })
    }

    /// `E^{(a)}_j(p)`; an error when `p` is not `(a, j)`-evolvable.
    pub fn energy(&self, p: &State, a: usize, j: usize) -> Result<u64> {
        self.time_evolution(p, a, j)?.energy.ok_or(Error::NotEvolvable { color: a, length: j })
    }

    /// Scan every `(a, j)` with `j <= cutoff`, optionally keeping the images.
    pub(crate) fn scan(&self, p: &[u32], mut images: Option<&mut Vec<Vec<u32>>>) -> Result<Evolvability> {
        let cutoff = self.spec.cutoff();
        let mut values = Vec::with_capacity(self.rank());
        for a in 1..=self.rank() {
            let mut row = Vec::with_capacity(cutoff);
            for j in 1..=cutoff {
                let ev = self.evolve_indexed(p, a, j)?;
                match (ev.next, ev.energy) {
                    (Some(next), Some(e)) => {
                        row.push(e);
                        if let Some(imgs) = images.as_deref_mut() {
                            imgs.push(next);
                        }
                    }
                    _ => return Ok(Evolvability::NotEvolvable { color: a, length: j }),
                }
            }
            values.push(row);
        }
        Ok(Evolvability::Evolvable(EnergySpectrum { n: self.rank(), cutoff, values }))
    }

    pub fn is_evolvable(&self, p: &State) -> Result<Evolvability> {
        self.scan(&self.index(p)?, None)
    }

    pub fn soliton_content(&self, p: &State) -> Result<Content> {
        self.content_indexed(&self.index(p)?)
    }

    pub fn content_indexed(&self, p: &[u32]) -> Result<Content> {
        match self.scan(p, None)? {
            Evolvability::Evolvable(s) => s.content(),
            Evolvability::NotEvolvable { color, length } => Err(Error::NotEvolvable { color, length }),
        }
    }

    fn step_indexed(&self, i: usize, p: &mut [u32], raise: bool) -> bool {
        let sig = signature(p.iter().zip(&self.factors).map(|(&b, c)| (c.eps(i, b), c.phi(i, b))));
        let at = if raise { sig.raise_at } else { sig.lower_at };
        let Some(at) = at else { return false };
        let c = &self.factors[at];
        match if raise { c.raise(i, p[at]) } else { c.lower(i, p[at]) } {
            Some(x) => {
                p[at] = x;
                true
            }
            None => false,
        }
    }

    /// `e_i` (`raise`) or `f_i` on a state, in place; false when annihilated.
    pub fn kashiwara_indexed(&self, i: usize, p: &mut [u32], raise: bool) -> bool {
        self.step_indexed(i, p, raise)
    }

    /// Weyl reflection `S_i`, `i = 0..=n`: `f_i^k` or `e_i^{-k}` with `k = <h_i, wt p>`.
    pub fn weyl_indexed(&self, i: usize, p: &[u32]) -> Vec<u32> {
        let sig = signature(p.iter().zip(&self.factors).map(|(&b, c)| (c.eps(i, b), c.phi(i, b))));
        let k = sig.phi as i64 - sig.eps as i64;
        let mut q = p.to_vec();
        for _ in 0..k.unsigned_abs() {
            let ok = self.step_indexed(i, &mut q, k < 0);
            debug_assert!(ok, "i-string shorter than |<h_i, wt>|");
        }
        q
    }

    pub fn weyl_s(&self, i: usize, p: &State) -> Result<State> {
        if i > self.rank() {
            return Err(Error::Precondition(format!("S_{i} needs 0 <= i <= {}", self.rank())));
        }
        Ok(self.state(&self.weyl_indexed(i, &self.index(p)?)))
    }

    pub fn promotion_indexed(&self, p: &[u32]) -> Vec<u32> {
        p.iter().zip(&self.factors).map(|(&b, c)| c.promote(b)).collect()
    }

    pub fn demotion_indexed(&self, p: &[u32]) -> Vec<u32> {
        p.iter().zip(&self.factors).map(|(&b, c)| c.demote(b)).collect()
    }

    pub fn promotion_state(&self, p: &State) -> Result<State> {
        Ok(self.state(&self.promotion_indexed(&self.index(p)?)))
    }

    pub fn orbit_period(&self, p: &State, r: usize, l: usize, cap: u64) -> Result<OrbitOutcome> {
        let start = self.index(p)?;
        let mut cur = start.clone();
        for t in 1..=cap {
            match self.evolve_indexed(&cur, r, l)?.next {
                None => return Ok(OrbitOutcome::Dies { step: t - 1, state: self.state(&cur) }),
                Some(next) if next == start => return Ok(OrbitOutcome::Period(t)),
                Some(next) => cur = next,
            }
        }
        Ok(OrbitOutcome::NotReturned { cap })
    }
}

/// `R_j`: exchange components `j` and `j+1` (1-based) with the combinatorial R.
pub fn factor_swap(engine: &Engine, j: usize, p: &State) -> Result<State> {
    let len = p.components.len();
    if j == 0 || j >= len {
        return Err(Error::Precondition(format!("R_{j} needs 1 <= j < {len}")));
    }
    let (b, c) = (&p.components[j - 1], &p.components[j]);
    let table = engine.r_table(b.label(), c.label())?;
    let e = table.get(b, c).expect("components belong to their own crystals");
    let mut components = p.components.clone();
    components[j - 1] = e.out_left;
    components[j] = e.out_right;
    Ok(State { components })
}

/// `pi(b_1 (x) ... (x) b_L) = b_L (x) b_1 (x) ... (x) b_{L-1}`.
pub fn rotate(p: &State) -> State {
    let mut components = p.components.clone();
    components.rotate_right(1);
    State { components }
}
