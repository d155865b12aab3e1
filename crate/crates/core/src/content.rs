//! Soliton (string) contents: an `n`-tuple of partitions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// `m = (m^{(1)}, ..., m^{(n)})`; `m^{(a)}_j` is the number of rows of
/// length `j` in the `a`-th partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Content {
    n: usize,
    rows: BTreeMap<(usize, usize), u64>,
}

impl Content {
    pub fn empty(n: usize) -> Self {
        Content { n, rows: BTreeMap::new() }
    }

    /// From `((a, j), m^{(a)}_j)` pairs; zero multiplicities are dropped.
    pub fn from_multiplicities<I>(n: usize, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), u64)>,
    {
        let mut rows = BTreeMap::new();
        for ((a, j), m) in items {
            if a == 0 || a > n || j == 0 {
                return Err(Error::Precondition(format!("row ({a},{j}) outside rank {n}")));
            }
            if m > 0 {
                *rows.entry((a, j)).or_insert(0) += m;
            }
        }
        Ok(Content { n, rows })
    }

    /// From one partition (list of row lengths) per color.
    pub fn from_partitions(n: usize, parts: &[Vec<usize>]) -> Result<Self> {
        if parts.len() != n {
            return Err(Error::Precondition(format!("{} partitions given for rank {n}", parts.len())));
        }
        let items = parts.iter().enumerate().flat_map(|(a, p)| p.iter().map(move |&j| ((a + 1, j), 1)));
        Self::from_multiplicities(n, items)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn multiplicity(&self, a: usize, j: usize) -> u64 {
        self.rows.get(&(a, j)).copied().unwrap_or(0)
    }

    /// Support `H = {(a, j) | m^{(a)}_j > 0}` in lexicographic order.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.rows.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.rows.iter().map(|(&k, &v)| (k, v))
    }

    /// Row lengths of the `a`-th partition, longest first.
    pub fn partition(&self, a: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (&(b, j), &m) in self.rows.range((a, 0)..(a + 1, 0)).rev() {
            debug_assert_eq!(b, a);
            out.extend(std::iter::repeat(j).take(m as usize));
        }
        out
    }

    /// `sum_k min(j, k) m^{(a)}_k`: the boxes in the first `j` columns of `m^{(a)}`.
    pub fn energy(&self, a: usize, j: usize) -> u64 {
        self.rows.range((a, 0)..(a + 1, 0)).map(|(&(_, k), &m)| k.min(j) as u64 * m).sum()
    }

    /// Total boxes of `m^{(a)}`.
    pub fn color_size(&self, a: usize) -> u64 {
        self.rows.range((a, 0)..(a + 1, 0)).map(|(&(_, k), &m)| k as u64 * m).sum()
    }

    /// Notation used in printed tables, e.g. `((21),(1),∅)`.
    pub fn tuple_notation(&self) -> String {
        let body: Vec<String> = (1..=self.n)
            .map(|a| {
                let p = self.partition(a);
                if p.is_empty() {
                    "∅".to_string()
                } else if p.iter().all(|&j| j < 10) {
                    format!("({})", p.iter().map(|j| j.to_string()).collect::<String>())
                } else {
                    format!("({})", p.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        format!("({})", body.join(","))
    }

    /// Parse `"3,1,1,1/2,1/1"`; `-` marks an empty color.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let colors: Vec<&str> = text.split('/').collect();
        if colors.len() != n {
            return Err(Error::parse(0, format!("content has {} colors, rank {n} needs {n}", colors.len())));
        }
        let mut parts = Vec::with_capacity(n);
        let mut pos = 0;
        for color in colors {
            let mut p = Vec::new();
            if color != "-" {
                let mut k = pos;
                for item in color.split(',') {
                    let j: usize = item
                        .trim()
                        .parse()
                        .ok()
                        .filter(|&j| j > 0)
                        .ok_or_else(|| Error::parse(k, format!("bad row length '{item}'")))?;
                    if p.last().is_some_and(|&prev| prev < j) {
                        return Err(Error::parse(k, "row lengths must be weakly decreasing"));
                    }
                    p.push(j);
                    k += item.len() + 1;
                }
            }
            parts.push(p);
            pos += color.len() + 1;
        }
        Self::from_partitions(n, &parts)
    }
}

impl fmt::Display for Content {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 1..=self.n {
            if a > 1 {
                write!(f, "/")?;
            }
            let p = self.partition(a);
            if p.is_empty() {
                write!(f, "-")?;
            } else {
                let s: Vec<String> = p.iter().map(|j| j.to_string()).collect();
                write!(f, "{}", s.join(","))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        let m = Content::parse(3, "3,1,1,1/2,1/1").unwrap();
        assert_eq!(m.multiplicity(1, 1), 3);
        assert_eq!(m.multiplicity(1, 3), 1);
        assert_eq!(m.partition(1), vec![3, 1, 1, 1]);
        assert_eq!(m.to_string(), "3,1,1,1/2,1/1");
        assert_eq!(m.tuple_notation(), "((3111),(21),(1))");
        let e = Content::parse(3, "2,2/2/-").unwrap();
        assert_eq!(e.tuple_notation(), "((22),(2),∅)");
        assert_eq!(Content::parse(1, "-").unwrap(), Content::empty(1));
        assert!(Content::parse(2, "1").is_err());
        assert!(matches!(Content::parse(2, "1,2/-"), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn energies_count_columns() {
        let m = Content::parse(1, "3,2,1").unwrap();
        let e: Vec<u64> = (1..=4).map(|j| m.energy(1, j)).collect();
        assert_eq!(e, vec![3, 5, 6, 6]);
        assert_eq!(m.color_size(1), 6);
        assert_eq!(m.support(), vec![(1, 1), (1, 2), (1, 3)]);
    }
}
