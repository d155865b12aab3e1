//! Kirillov-Reshetikhin crystals `B^{a,j}` of type `A^{(1)}_n`.
//!
//! Elements are `a x j` semistandard tableaux on the letters `1..=n+1`.
//! Tensor products follow the Kashiwara convention: in `b (x) c` the
//! operator `f_i` acts on `b` iff `phi_i(b) > eps_i(c)` and `e_i` acts on
//! `b` iff `phi_i(b) >= eps_i(c)`. A single tableau is embedded into a
//! tensor of boxes through its Japanese reading word (columns right to
//! left, each column top to bottom). The affine operators are
//! `e_0 = pr^-1 e_1 pr` and `f_0 = pr^-1 f_1 pr`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub type Letter = u8;

/// Label `(n, a, j)` of the crystal `B^{a,j}` at rank `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrystalLabel {
    n: usize,
    rows: usize,
    cols: usize,
}

impl CrystalLabel {
    pub fn new(n: usize, rows: usize, cols: usize) -> Result<Self> {
        if n == 0 || rows == 0 || rows > n || cols == 0 || n + 1 > Letter::MAX as usize {
            return Err(Error::InvalidLabel { n, rows, cols });
        }
        Ok(CrystalLabel { n, rows, cols })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn boxes(&self) -> usize {
        self.rows * self.cols
    }

    /// Largest letter, `n + 1`.
    pub fn top(&self) -> Letter {
        (self.n + 1) as Letter
    }
}

impl fmt::Display for CrystalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B^{{{},{}}}", self.rows, self.cols)
    }
}

/// Letter multiplicities; `counts[c]` is the number of letters `c + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<u32>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n + 1])
    }

    pub fn of_letters(n: usize, letters: &[Letter]) -> Self {
        let mut w = Weight::zero(n);
        w.add_letters(letters);
        w
    }

    pub fn add_letters(&mut self, letters: &[Letter]) {
        for &x in letters {
            self.0[x as usize - 1] += 1;
        }
    }

    pub fn add(&mut self, other: &Weight) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `<h_i, wt>` for `i = 1..=n`.
    pub fn pairing(&self, i: usize) -> i64 {
        self.0[i - 1] as i64 - self.0[i] as i64
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Reduced `i`-signature of a tensor product of crystal elements.
///
/// Factor `k` contributes `eps_k` minus signs followed by `phi_k` plus
/// signs; adjacent `+ -` pairs cancel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Signature {
    pub eps: usize,
    pub phi: usize,
    /// Factor hit by `e_i`: owner of the rightmost unmatched minus.
    pub raise_at: Option<usize>,
    /// Factor hit by `f_i`: owner of the leftmost unmatched plus.
    pub lower_at: Option<usize>,
}

pub(crate) fn signature<I>(items: I) -> Signature
where
    I: IntoIterator<Item = (usize, usize)>,
{
    // pending pluses, run-length encoded as (owner, count)
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut eps = 0;
    let mut raise_at = None;
    for (owner, (minus, plus)) in items.into_iter().enumerate() {
        let mut minus = minus;
        while minus > 0 {
            match pending.last_mut() {
                Some(top) => {
                    let c = top.1.min(minus);
                    top.1 -= c;
                    minus -= c;
                    if top.1 == 0 {
                        pending.pop();
                    }
                }
                None => {
                    eps += minus;
                    raise_at = Some(owner);
                    minus = 0;
                }
            }
        }
        if plus > 0 {
            pending.push((owner, plus));
        }
    }
    Signature {
        eps,
        phi: pending.iter().map(|p| p.1).sum(),
        raise_at,
        lower_at: pending.first().map(|p| p.0),
    }
}

/// A rectangular semistandard tableau, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    label: CrystalLabel,
    cells: Vec<Letter>,
}

impl Tableau {
    pub fn from_rows(label: CrystalLabel, rows: &[Vec<Letter>]) -> Result<Self> {
        let cells: Vec<Letter> = rows.concat();
        if rows.len() != label.rows || rows.iter().any(|r| r.len() != label.cols) {
            return Err(Error::NotSemistandard {
                rows: label.rows,
                cols: label.cols,
                top: label.n + 1,
                text: format!("{rows:?}"),
            });
        }
        Self::from_cells(label, cells)
    }

    pub fn from_cells(label: CrystalLabel, cells: Vec<Letter>) -> Result<Self> {
        let t = Tableau { label, cells };
        if t.cells.len() != label.boxes() || !t.is_semistandard() {
            return Err(Error::NotSemistandard {
                rows: label.rows,
                cols: label.cols,
                top: label.n + 1,
                text: format!("{:?}", t.cells),
            });
        }
        Ok(t)
    }

    /// Classically highest element `u^{a,j}`: row `r` filled with `r`.
    pub fn highest(label: CrystalLabel) -> Self {
        let cells = (0..label.rows)
            .flat_map(|r| std::iter::repeat((r + 1) as Letter).take(label.cols))
            .collect();
        Tableau { label, cells }
    }

    pub fn label(&self) -> CrystalLabel {
        self.label
    }

    pub fn cells(&self) -> &[Letter] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> Letter {
        self.cells[row * self.label.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Letter] {
        let j = self.label.cols;
        &self.cells[row * j..(row + 1) * j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Letter]> {
        self.cells.chunks(self.label.cols)
    }

    pub fn is_semistandard(&self) -> bool {
        let (a, j, top) = (self.label.rows, self.label.cols, self.label.top());
        for r in 0..a {
            for c in 0..j {
                let x = self.get(r, c);
                if x < 1 || x > top {
                    return false;
                }
                if c > 0 && self.get(r, c - 1) > x {
                    return false;
                }
                if r > 0 && self.get(r - 1, c) >= x {
                    return false;
                }
            }
        }
        true
    }

    pub fn weight(&self) -> Weight {
        Weight::of_letters(self.label.n, &self.cells)
    }

    /// Cell indices in Japanese reading order.
    fn reading_order(&self) -> impl Iterator<Item = usize> + '_ {
        let (a, j) = (self.label.rows, self.label.cols);
        (0..j).rev().flat_map(move |c| (0..a).map(move |r| r * j + c))
    }

    /// Japanese reading word.
    pub fn reading_word(&self) -> Vec<Letter> {
        self.reading_order().map(|k| self.cells[k]).collect()
    }

    fn classical_signature(&self, i: usize) -> (Signature, Vec<usize>) {
        let (lo, hi) = (i as Letter, (i + 1) as Letter);
        let order: Vec<usize> = self.reading_order().collect();
        let sig = signature(order.iter().map(|&k| {
            let x = self.cells[k];
            ((x == hi) as usize, (x == lo) as usize)
        }));
        (sig, order)
    }

    /// `(eps_i, phi_i)` for a classical color `i = 1..=n`.
    pub(crate) fn classical_string(&self, i: usize) -> (usize, usize) {
        let (sig, _) = self.classical_signature(i);
        (sig.eps, sig.phi)
    }

    fn classical_step(&self, i: usize, raise: bool) -> Option<Tableau> {
        debug_assert!(i >= 1 && i <= self.label.n);
        let (sig, order) = self.classical_signature(i);
        let pos = if raise { sig.raise_at } else { sig.lower_at }?;
        let mut out = self.clone();
        let cell = order[pos];
        out.cells[cell] = if raise { i as Letter } else { (i + 1) as Letter };
        debug_assert!(out.is_semistandard());
        Some(out)
    }

    /// Kashiwara raising operator `e_i`, `i = 0..=n`.
    pub fn raise(&self, i: usize) -> Option<Tableau> {
        if i == 0 {
            self.promotion().classical_step(1, true).map(|t| t.promotion_inverse())
        } else {
            self.classical_step(i, true)
        }
    }

    /// Kashiwara lowering operator `f_i`, `i = 0..=n`.
    pub fn lower(&self, i: usize) -> Option<Tableau> {
        if i == 0 {
            self.promotion().classical_step(1, false).map(|t| t.promotion_inverse())
        } else {
            self.classical_step(i, false)
        }
    }

    /// `(eps_i, phi_i)` for `i = 0..=n`.
    pub fn string_lengths(&self, i: usize) -> (usize, usize) {
        if i == 0 {
            self.promotion().classical_string(1)
        } else {
            self.classical_string(i)
        }
    }

    /// Schützenberger promotion on the alphabet `1..=n+1`.
    ///
    /// Letters `n+1` (necessarily at the right end of the bottom row) are
    /// removed, the holes slide to the upper left by reverse jeu de taquin,
    /// leftmost hole first, every entry is incremented and the vacated
    /// cells are filled with `1`.
    pub fn promotion(&self) -> Tableau {
        let (a, j, top) = (self.label.rows, self.label.cols, self.label.top());
        let mut grid: Vec<Option<Letter>> = self
            .cells
            .iter()
            .map(|&x| if x == top { None } else { Some(x) })
            .collect();
        let holes: Vec<usize> = (0..a * j).filter(|&k| grid[k].is_none()).collect();
        for start in holes {
            let (mut r, mut c) = (start / j, start % j);
            loop {
                let up = if r > 0 { grid[(r - 1) * j + c] } else { None };
                let left = if c > 0 { grid[r * j + c - 1] } else { None };
                let from_up = match (up, left) {
                    (None, None) => break,
                    (Some(_), None) => true,
                    (None, Some(_)) => false,
                    (Some(u), Some(l)) => u >= l,
                };
                let (nr, nc) = if from_up { (r - 1, c) } else { (r, c - 1) };
                grid[r * j + c] = grid[nr * j + nc].take();
                r = nr;
                c = nc;
            }
        }
        let cells = grid.into_iter().map(|x| x.map_or(1, |v| v + 1)).collect();
        let out = Tableau { label: self.label, cells };
        debug_assert!(out.is_semistandard());
        out
    }

    /// Inverse promotion, computed as `pr^n`.
    pub fn promotion_inverse(&self) -> Tableau {
        let mut t = self.clone();
        for _ in 0..self.label.n {
            t = t.promotion();
        }
        t
    }

    /// Parse the text form: rows joined by `/`; a row is a digit string
    /// when `n + 1 <= 9`, otherwise comma-separated integers.
    pub fn parse(label: CrystalLabel, text: &str) -> Result<Self> {
        Self::parse_at(label, text, 0)
    }

    pub(crate) fn parse_at(label: CrystalLabel, text: &str, offset: usize) -> Result<Self> {
        let digits = label.n + 1 <= 9;
        let mut rows: Vec<Vec<Letter>> = Vec::new();
        let mut pos = offset;
        for part in text.split('/') {
            let mut row = Vec::new();
            if digits {
                for (k, ch) in part.char_indices() {
                    let v = ch
                        .to_digit(10)
                        .ok_or_else(|| Error::parse(pos + k, format!("unexpected '{ch}' in tableau")))?;
                    if v == 0 || v as usize > label.n + 1 {
                        return Err(Error::parse(pos + k, format!("letter {v} outside 1..={}", label.n + 1)));
                    }
                    row.push(v as Letter);
                }
            } else {
                let mut k = 0;
                for item in part.split(',') {
                    let v: usize = item
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(pos + k, format!("bad letter '{item}'")))?;
                    if v == 0 || v > label.n + 1 {
                        return Err(Error::parse(pos + k, format!("letter {v} outside 1..={}", label.n + 1)));
                    }
                    row.push(v as Letter);
                    k += item.len() + 1;
                }
            }
            if row.len() != label.cols {
                return Err(Error::parse(
                    pos,
                    format!("row has {} letters, {} expects {}", row.len(), label, label.cols),
                ));
            }
            rows.push(row);
            pos += part.len() + 1;
        }
        if rows.len() != label.rows {
            return Err(Error::parse(
                offset,
                format!("tableau has {} rows, {} expects {}", rows.len(), label, label.rows),
            ));
        }
        Tableau::from_rows(label, &rows).map_err(|_| Error::parse(offset, format!("'{text}' is not semistandard")))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.label.n + 1 <= 9;
        for (r, row) in self.rows().enumerate() {
            if r > 0 {
                write!(f, "/")?;
            }
            for (c, x) in row.iter().enumerate() {
                if !digits && c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// All elements of `B^{a,j}` in lexicographic order of the row-reading word.
pub fn enumerate_crystal(label: CrystalLabel) -> Vec<Tableau> {
    fn fill(label: CrystalLabel, pos: usize, cells: &mut Vec<Letter>, out: &mut Vec<Tableau>) {
        let (a, j) = (label.rows, label.cols);
        if pos == a * j {
            out.push(Tableau { label, cells: cells.clone() });
            return;
        }
        let (r, c) = (pos / j, pos % j);
        let mut lo: Letter = 1;
        if c > 0 {
            lo = lo.max(cells[pos - 1]);
        }
        if r > 0 {
            lo = lo.max(cells[pos - j] + 1);
        }
        let hi = label.top() - (a - 1 - r) as Letter;
        for v in lo..=hi {
            cells[pos] = v;
            fill(label, pos + 1, cells, out);
        }
    }
    let mut out = Vec::new();
    let mut cells = vec![0; label.boxes()];
    fill(label, 0, &mut cells, &mut out);
    out
}

pub fn highest_element(label: CrystalLabel) -> Tableau {
    Tableau::highest(label)
}

fn tensor_step(i: usize, word: &[Tableau], raise: bool) -> Option<Vec<Tableau>> {
    let sig = signature(word.iter().map(|t| t.string_lengths(i)));
    let at = if raise { sig.raise_at } else { sig.lower_at }?;
    let mut out = word.to_vec();
    out[at] = if raise { word[at].raise(i) } else { word[at].lower(i) }?;
    Some(out)
}

/// `f_i` on a tensor product of tableaux; `None` when annihilated.
pub fn apply_f(i: usize, word: &[Tableau]) -> Option<Vec<Tableau>> {
    tensor_step(i, word, false)
}

/// `e_i` on a tensor product of tableaux; `None` when annihilated.
pub fn apply_e(i: usize, word: &[Tableau]) -> Option<Vec<Tableau>> {
    tensor_step(i, word, true)
}

const NONE: u32 = u32::MAX;

/// A crystal `B^{a,j}` with every Kashiwara operator tabulated on
/// canonical element indices. Index 0 is the highest element.
#[derive(Debug)]
pub struct Crystal {
    label: CrystalLabel,
    elements: Vec<Tableau>,
    index: HashMap<Vec<Letter>, u32>,
    promotion: Vec<u32>,
    promotion_inv: Vec<u32>,
    // flat per color: [i * len + b]
    raise: Vec<u32>,
    lower: Vec<u32>,
    eps: Vec<u32>,
    phi: Vec<u32>,
}

impl Crystal {
    pub fn new(label: CrystalLabel) -> Self {
        let elements = enumerate_crystal(label);
        let len = elements.len();
        let index: HashMap<Vec<Letter>, u32> =
            elements.iter().enumerate().map(|(k, t)| (t.cells.clone(), k as u32)).collect();
        let find = |t: &Tableau| index[&t.cells];
        let promotion: Vec<u32> = elements.iter().map(|t| find(&t.promotion())).collect();
        let mut promotion_inv = vec![0u32; len];
        for (b, &p) in promotion.iter().enumerate() {
            promotion_inv[p as usize] = b as u32;
        }
        let colors = label.n + 1;
        let mut raise = vec![NONE; colors * len];
        let mut lower = vec![NONE; colors * len];
        let mut eps = vec![0; colors * len];
        let mut phi = vec![0; colors * len];
        for i in 1..colors {
            for (b, t) in elements.iter().enumerate() {
                let (e, p) = t.classical_string(i);
                eps[i * len + b] = e as u32;
                phi[i * len + b] = p as u32;
                if let Some(x) = t.classical_step(i, true) {
                    raise[i * len + b] = find(&x);
                }
                if let Some(x) = t.classical_step(i, false) {
                    lower[i * len + b] = find(&x);
                }
            }
        }
        for b in 0..len {
            let pb = promotion[b] as usize;
            eps[b] = eps[len + pb];
            phi[b] = phi[len + pb];
            let r = raise[len + pb];
            raise[b] = if r == NONE { NONE } else { promotion_inv[r as usize] };
            let l = lower[len + pb];
            lower[b] = if l == NONE { NONE } else { promotion_inv[l as usize] };
        }
        Crystal { label, elements, index, promotion, promotion_inv, raise, lower, eps, phi }
    }

    pub fn label(&self) -> CrystalLabel {
        self.label
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Tableau] {
        &self.elements
    }

    pub fn element(&self, b: u32) -> &Tableau {
        &self.elements[b as usize]
    }

    pub fn index_of(&self, t: &Tableau) -> Option<u32> {
        if t.label != self.label {
            return None;
        }
        self.index.get(&t.cells).copied()
    }

    #[inline]
    pub fn raise(&self, i: usize, b: u32) -> Option<u32> {
        let x = self.raise[i * self.len() + b as usize];
        (x != NONE).then_some(x)
    }

    #[inline]
    pub fn lower(&self, i: usize, b: u32) -> Option<u32> {
        let x = self.lower[i * self.len() + b as usize];
        (x != NONE).then_some(x)
    }

    #[inline]
    pub fn eps(&self, i: usize, b: u32) -> usize {
        self.eps[i * self.len() + b as usize] as usize
    }

    #[inline]
    pub fn phi(&self, i: usize, b: u32) -> usize {
        self.phi[i * self.len() + b as usize] as usize
    }

    #[inline]
    pub fn promote(&self, b: u32) -> u32 {
        self.promotion[b as usize]
    }

    #[inline]
    pub fn demote(&self, b: u32) -> u32 {
        self.promotion_inv[b as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(n: usize, a: usize, j: usize) -> CrystalLabel {
        CrystalLabel::new(n, a, j).unwrap()
    }

    fn tab(n: usize, a: usize, j: usize, s: &str) -> Tableau {
        Tableau::parse(label(n, a, j), s).unwrap()
    }

    fn strings(ts: &[Tableau]) -> Vec<String> {
        ts.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn small_crystals_match_hand_lists() {
        assert_eq!(strings(&enumerate_crystal(label(2, 1, 1))), ["1", "2", "3"]);
        assert_eq!(strings(&enumerate_crystal(label(2, 1, 2))), ["11", "12", "13", "22", "23", "33"]);
        assert_eq!(
            strings(&enumerate_crystal(label(2, 2, 2))),
            ["11/22", "11/23", "11/33", "12/23", "12/33", "22/33"]
        );
        assert_eq!(enumerate_crystal(label(3, 1, 3)).len(), 20);
    }

    #[test]
    fn row_crystal_cardinality_is_binomial() {
        for n in 1..=3usize {
            for j in 1..=6usize {
                let expect: usize = (1..=j).map(|k| n + k).product::<usize>() / (1..=j).product::<usize>();
                assert_eq!(enumerate_crystal(label(n, 1, j)).len(), expect, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn highest_elements() {
        assert_eq!(highest_element(label(3, 1, 4)).to_string(), "1111");
        assert_eq!(highest_element(label(3, 2, 2)).to_string(), "11/22");
        assert_eq!(highest_element(label(2, 2, 1)).to_string(), "1/2");
        for n in 1..=3 {
            for a in 1..=n {
                for j in 1..=3 {
                    let u = highest_element(label(n, a, j));
                    for i in 1..=n {
                        assert!(u.raise(i).is_none());
                    }
                    assert_eq!(enumerate_crystal(label(n, a, j))[0], u);
                }
            }
        }
    }

    #[test]
    fn weights() {
        assert_eq!(tab(3, 1, 4, "1344").weight(), Weight(vec![1, 0, 1, 2]));
        assert_eq!(highest_element(label(3, 2, 2)).weight(), Weight(vec![2, 2, 0, 0]));
        assert_eq!(Weight::of_letters(3, &[]), Weight(vec![0, 0, 0, 0]));
    }

    #[test]
    fn promotion_examples() {
        assert_eq!(tab(3, 2, 3, "223/334").promotion().to_string(), "133/444");
        assert_eq!(tab(3, 1, 4, "1344").promotion().to_string(), "1124");
        assert_eq!(tab(1, 1, 1, "1").promotion().to_string(), "2");
        assert_eq!(tab(3, 1, 1, "1").promotion_inverse().to_string(), "4");
        assert_eq!(tab(2, 1, 1, "2").promotion_inverse().to_string(), "1");
        assert_eq!(tab(3, 2, 3, "133/444").promotion_inverse().to_string(), "223/334");
    }

    #[test]
    fn promotion_has_order_n_plus_one() {
        for n in 1..=3usize {
            for a in 1..=n {
                for j in 1..=8 / a {
                    let all = enumerate_crystal(label(n, a, j));
                    let mut images: Vec<Tableau> = all.iter().map(|t| t.promotion()).collect();
                    images.sort();
                    assert_eq!(images, all, "promotion not bijective on B^{{{a},{j}}} n={n}");
                    for t in &all {
                        let mut x = t.clone();
                        for _ in 0..=n {
                            x = x.promotion();
                        }
                        assert_eq!(&x, t);
                        assert_eq!(&t.promotion().promotion_inverse(), t);
                    }
                }
            }
        }
    }

    #[test]
    fn single_box_strings() {
        let one = vec![tab(2, 1, 1, "1")];
        let two = vec![tab(2, 1, 1, "2")];
        assert_eq!(apply_f(1, &one), Some(two.clone()));
        assert_eq!(apply_e(1, &two), Some(one.clone()));
        assert_eq!(apply_e(1, &one), None);
        let two1 = vec![tab(1, 1, 1, "2")];
        assert_eq!(apply_f(1, &two1), None);
    }

    #[test]
    fn tensor_rule_pairs_i_before_i_plus_one() {
        let w = vec![tab(2, 1, 1, "1"), tab(2, 1, 1, "2")];
        assert_eq!(apply_f(1, &w), None);
        assert_eq!(apply_e(1, &w), None);
        let w = vec![tab(2, 1, 1, "2"), tab(2, 1, 1, "1")];
        assert_eq!(strings(&apply_f(1, &w).unwrap()), ["2", "2"]);
        assert_eq!(strings(&apply_e(1, &w).unwrap()), ["1", "1"]);
    }

    #[test]
    fn tableau_operators() {
        // a column 1/2 is an sl2 singlet
        let col = tab(2, 2, 1, "1/2");
        assert!(col.lower(1).is_none() && col.raise(1).is_none());
        assert_eq!(tab(2, 1, 2, "12").lower(1).unwrap().to_string(), "22");
        assert_eq!(tab(2, 1, 2, "12").raise(1).unwrap().to_string(), "11");
        // affine direction on a row of A(1)_2 turns a 3 into a 1
        assert_eq!(tab(2, 1, 2, "13").lower(0).unwrap().to_string(), "11");
        assert_eq!(tab(2, 1, 2, "11").raise(0).unwrap().to_string(), "13");
    }

    #[test]
    fn indexed_crystal_agrees_with_tableau_operators() {
        for n in 1..=3usize {
            for a in 1..=n {
                for j in 1..=3 {
                    let c = Crystal::new(label(n, a, j));
                    for (b, t) in c.elements().iter().enumerate() {
                        let b = b as u32;
                        assert_eq!(c.index_of(t), Some(b));
                        for i in 0..=n {
                            assert_eq!(c.raise(i, b).map(|x| c.element(x).clone()), t.raise(i));
                            assert_eq!(c.lower(i, b).map(|x| c.element(x).clone()), t.lower(i));
                            assert_eq!((c.eps(i, b), c.phi(i, b)), t.string_lengths(i));
                        }
                        assert_eq!(c.demote(c.promote(b)), b);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let l = label(3, 1, 4);
        match Tableau::parse(l, "13x4") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(Tableau::parse(l, "4311").is_err());
        assert!(Tableau::parse(l, "135").is_err());
        let wide = label(9, 1, 2);
        let t = Tableau::parse(wide, "3,10").unwrap();
        assert_eq!(t.to_string(), "3,10");
    }

    #[test]
    fn signature_counts() {
        // - + | + - | -   (minus, plus) per factor
        let s = signature([(1, 1), (0, 1), (1, 0), (1, 0)]);
        assert_eq!((s.eps, s.phi), (1, 0));
        assert_eq!(s.raise_at, Some(0));
        let s = signature([(0, 2), (1, 0)]);
        assert_eq!((s.eps, s.phi, s.lower_at), (0, 1, Some(0)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy() -> impl Strategy<Value = (usize, Vec<Tableau>)> {
            (1usize..=3).prop_flat_map(|n| {
                let factor = (1..=n, 1usize..=3).prop_flat_map(move |(a, j)| {
                    let all = enumerate_crystal(CrystalLabel::new(n, a, j).unwrap());
                    proptest::sample::select(all)
                });
                (Just(n), proptest::collection::vec(factor, 1..5))
            })
        }

        proptest! {
            #[test]
            fn raise_inverts_lower((n, w) in word_strategy(), i in 0usize..=3) {
                let i = i % (n + 1);
                if let Some(fw) = apply_f(i, &w) {
                    prop_assert_eq!(apply_e(i, &fw), Some(w.clone()));
                    if i >= 1 {
                        let mut before = Weight::zero(n);
                        let mut after = Weight::zero(n);
                        for t in &w { before.add(&t.weight()); }
                        for t in &fw { after.add(&t.weight()); }
                        before.0[i - 1] -= 1;
                        before.0[i] += 1;
                        prop_assert_eq!(before, after);
                    }
                }
                if let Some(ew) = apply_e(i, &w) {
                    prop_assert_eq!(apply_f(i, &ew), Some(w.clone()));
                }
            }
        }
    }
}
