//! Combinatorial R and the energy function on `B^{a,j} (x) B^{b,k}`.
//!
//! The affine crystal graph of the tensor product is connected, so the
//! isomorphism is pinned down by the highest pair `u (x) u -> u (x) u` with
//! `H = 0`. [`build_r_table`] propagates that seed along every `e_i`, `f_i`
//! (`i = 0..=n`) and records `H`, which only moves along the `0`-arrows.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::BufRead;
use std::sync::Arc;

use crate::crystal::{Crystal, CrystalLabel, Tableau};
use crate::error::{Error, Result};

/// `zeta^degree b` in the affinization of a crystal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub degree: i64,
    pub element: Tableau,
}

impl AffineElement {
    pub fn new(degree: i64, element: Tableau) -> Self {
        AffineElement { degree, element }
    }
}

/// Image of one pair under `R`: `b (x) c -> out_left (x) out_right`, and `H(b (x) c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct REntry {
    pub out_left: Tableau,
    pub out_right: Tableau,
    pub energy: i32,
}

/// The same on canonical indices: `out_left` indexes the right crystal,
/// `out_right` the left one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairImage {
    pub out_left: u32,
    pub out_right: u32,
    pub energy: i32,
}

#[derive(Debug)]
pub struct RTable {
    left: Arc<Crystal>,
    right: Arc<Crystal>,
    entries: Vec<PairImage>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Raise,
    Lower,
}

/// Apply `e_i`/`f_i` to `b (x) c` in `X (x) Y`; also report whether the
/// left factor moved.
#[inline]
fn act_pair(x: &Crystal, y: &Crystal, op: Op, i: usize, b: u32, c: u32) -> Option<(u32, u32, bool)> {
    let (phi, eps) = (x.phi(i, b), y.eps(i, c));
    match op {
        Op::Lower if phi > eps => x.lower(i, b).map(|b2| (b2, c, true)),
        Op::Lower => y.lower(i, c).map(|c2| (b, c2, false)),
        Op::Raise if phi >= eps => x.raise(i, b).map(|b2| (b2, c, true)),
        Op::Raise => y.raise(i, c).map(|c2| (b, c2, false)),
    }
}

// Change of H along a 0-arrow, keyed by which factor moved on each side
// of the isomorphism.
fn energy_step(op: Op, source_left: bool, image_left: bool) -> i32 {
    match (op, source_left, image_left) {
        (Op::Lower, true, true) => -1,
        (Op::Lower, false, false) => 1,
        (Op::Raise, true, true) => 1,
        (Op::Raise, false, false) => -1,
        _ => 0,
    }
}

/// Build `R: B^{left} (x) B^{right} -> B^{right} (x) B^{left}` with its energy.
pub fn build_r_table(left: Arc<Crystal>, right: Arc<Crystal>) -> Result<RTable> {
    let (ll, rl) = (left.label(), right.label());
    let fail = |msg: String| Error::RTable { left: ll.to_string(), right: rl.to_string(), msg };
    if ll.rank() != rl.rank() {
        return Err(Error::RankMismatch { expected: ll.rank(), found: rl.rank() });
    }
    let n = ll.rank();
    let (nl, nr) = (left.len(), right.len());
    let mut img: Vec<Option<PairImage>> = vec![None; nl * nr];
    img[0] = Some(PairImage { out_left: 0, out_right: 0, energy: 0 });
    let mut queue = VecDeque::from([(0u32, 0u32)]);
    while let Some((b, c)) = queue.pop_front() {
        let here = img[b as usize * nr + c as usize].expect("queued pairs are assigned");
        for i in 0..=n {
            for op in [Op::Raise, Op::Lower] {
                let src = act_pair(&left, &right, op, i, b, c);
                let dst = act_pair(&right, &left, op, i, here.out_left, here.out_right);
                let ((b2, c2, sl), (ct, bt, dl)) = match (src, dst) {
                    (None, None) => continue,
                    (Some(s), Some(d)) => (s, d),
                    _ => {
                        return Err(fail(format!(
                            "operator {} {} is defined on only one side at pair ({b},{c})",
                            if op == Op::Raise { "e" } else { "f" },
                            i
                        )))
                    }
                };
                let dh = if i == 0 { energy_step(op, sl, dl) } else { 0 };
                let next = PairImage { out_left: ct, out_right: bt, energy: here.energy + dh };
                let slot = &mut img[b2 as usize * nr + c2 as usize];
                match slot {
                    None => {
                        *slot = Some(next);
                        queue.push_back((b2, c2));
                    }
                    Some(old) if *old != next => {
                        return Err(fail(format!("inconsistent images for pair ({b2},{c2})")));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let mut entries = Vec::with_capacity(nl * nr);
    for (k, e) in img.into_iter().enumerate() {
        match e {
            Some(e) if e.energy > 0 => {
                return Err(fail(format!("positive energy {} at pair {k}", e.energy)));
            }
            Some(e) => entries.push(e),
            None => return Err(fail(format!("pair ({},{}) not reached from the highest pair", k / nr, k % nr))),
        }
    }
    Ok(RTable { left, right, entries })
}

impl RTable {
    pub fn left(&self) -> &Arc<Crystal> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Crystal> {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn image(&self, b: u32, c: u32) -> PairImage {
        self.entries[b as usize * self.right.len() + c as usize]
    }

    pub fn entries(&self) -> &[PairImage] {
        &self.entries
    }

    /// Look up a pair of tableaux.
    pub fn get(&self, b: &Tableau, c: &Tableau) -> Option<REntry> {
        let bi = self.left.index_of(b)?;
        let ci = self.right.index_of(c)?;
        let e = self.image(bi, ci);
        Some(REntry {
            out_left: self.right.element(e.out_left).clone(),
            out_right: self.left.element(e.out_right).clone(),
            energy: e.energy,
        })
    }

    /// `R(zeta^d b (x) zeta^e c) = zeta^{e+H} c~ (x) zeta^{d-H} b~`.
    pub fn apply(&self, x: &AffineElement, y: &AffineElement) -> Result<(AffineElement, AffineElement)> {
        let e = self.get(&x.element, &y.element).ok_or_else(|| {
            Error::Precondition(format!(
                "pair {} (x) {} does not belong to {} (x) {}",
                x.element,
                y.element,
                self.left.label(),
                self.right.label()
            ))
        })?;
        let h = e.energy as i64;
        Ok((AffineElement::new(y.degree + h, e.out_left), AffineElement::new(x.degree - h, e.out_right)))
    }

    /// Serialize in the line-oriented cache format.
    pub fn to_text(&self) -> String {
        let (l, r) = (self.left.label(), self.right.label());
        let mut s = String::with_capacity(self.entries.len() * 16);
        writeln!(s, "R {} {} {} {} {} version=1", l.rank(), l.rows(), l.cols(), r.rows(), r.cols()).unwrap();
        let nr = self.right.len();
        for (k, e) in self.entries.iter().enumerate() {
            writeln!(s, "{} {} -> {} {} {}", k / nr, k % nr, e.out_left, e.out_right, e.energy).unwrap();
        }
        s
    }

    /// Parse the cache format against the given crystals. Every pair must
    /// appear exactly once.
    pub fn from_reader<R: BufRead>(left: Arc<Crystal>, right: Arc<Crystal>, reader: R) -> Result<RTable> {
        let (l, r) = (left.label(), right.label());
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| Error::Cache("empty file".into()))??;
        let expect = format!("R {} {} {} {} {} version=1", l.rank(), l.rows(), l.cols(), r.rows(), r.cols());
        if header != expect {
            return Err(Error::Cache(format!("header '{header}' does not match '{expect}'")));
        }
        let (nl, nr) = (left.len(), right.len());
        let mut img: Vec<Option<PairImage>> = vec![None; nl * nr];
        for (ln, line) in lines.enumerate() {
            let line = line?;
            let bad = || Error::Cache(format!("line {}: malformed entry '{line}'", ln + 2));
            let f: Vec<&str> = line.split(' ').collect();
            if f.len() != 6 || f[2] != "->" {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<u32>().map_err(|_| bad());
            let (bi, ci, ol, or) = (num(f[0])?, num(f[1])?, num(f[3])?, num(f[4])?);
            let h: i32 = f[5].parse().map_err(|_| bad())?;
            if bi as usize >= nl || ci as usize >= nr || ol as usize >= nr || or as usize >= nl {
                return Err(bad());
            }
            let slot = &mut img[bi as usize * nr + ci as usize];
            if slot.is_some() {
                return Err(Error::Cache(format!("line {}: duplicate pair", ln + 2)));
            }
            *slot = Some(PairImage { out_left: ol, out_right: or, energy: h });
        }
        let entries = img
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Cache("table is not total".into()))?;
        Ok(RTable { left, right, entries })
    }
}

/// A Yang-Baxter failure on `b1 (x) b2 (x) b3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YangBaxterViolation {
    pub triple: [u32; 3],
    pub lhs: [(u32, i64); 3],
    pub rhs: [(u32, i64); 3],
}

/// Source of R tables for the Yang-Baxter check.
pub trait RTableSource {
    fn r_table(&self, left: CrystalLabel, right: CrystalLabel) -> Result<Arc<RTable>>;
}

/// Check `R12 R13 R23 = R23 R13 R12` on every triple of
/// `B1 (x) B2 (x) B3`, tracking affine degrees. `Ok(None)` means it holds.
pub fn check_yang_baxter<S: RTableSource + ?Sized>(
    source: &S,
    l1: CrystalLabel,
    l2: CrystalLabel,
    l3: CrystalLabel,
) -> Result<Option<YangBaxterViolation>> {
    let r12 = source.r_table(l1, l2)?;
    let r13 = source.r_table(l1, l3)?;
    let r23 = source.r_table(l2, l3)?;
    let (n1, n2, n3) = (r12.left().len() as u32, r12.right().len() as u32, r13.right().len() as u32);
    // R(zeta^d b (x) zeta^e c) = zeta^{e+h} c~ (x) zeta^{d-h} b~
    let step = |t: &RTable, (b, d): (u32, i64), (c, e): (u32, i64)| {
        let im = t.image(b, c);
        let h = im.energy as i64;
        ((im.out_left, e + h), (im.out_right, d - h))
    };
    for b1 in 0..n1 {
        for b2 in 0..n2 {
            for b3 in 0..n3 {
                let (x1, x2, x3) = ((b1, 0), (b2, 0), (b3, 0));
                // swap 12, then 23, then 12
                let (y2, y1) = step(&r12, x1, x2);
                let (y3, y1) = step(&r13, y1, x3);
                let (z3, z2) = step(&r23, y2, y3);
                let lhs = [z3, z2, y1];
                // swap 23, then 12, then 23
                let (w3, w2) = step(&r23, x2, x3);
                let (v3, v1) = step(&r13, x1, w3);
                let (u2, u1) = step(&r12, v1, w2);
                let rhs = [v3, u2, u1];
                if lhs != rhs {
                    return Ok(Some(YangBaxterViolation { triple: [b1, b2, b3], lhs, rhs }));
                }
            }
        }
    }
    Ok(None)
}
