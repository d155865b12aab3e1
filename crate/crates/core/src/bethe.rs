//! Bethe ansatz at `q = 0`: vacancy numbers, the matrix `F`, the LCM
//! period formula and the fermionic count `Omega(m)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::automaton::SpaceSpec;
use crate::content::Content;
use crate::error::{Error, Result};
use crate::exact::{binomial, det_exact, rational_lcm};

/// Cartan matrix of `A_n`.
pub fn cartan(a: usize, b: usize) -> i64 {
    if a == b {
        2
    } else if a.abs_diff(b) == 1 {
        -1
    } else {
        0
    }
}

/// `p^{(a)}_j = sum_i min(j, l_i) [r_i = a] - sum_{(b,k)} C_ab min(j, k) m^{(b)}_k`.
pub fn vacancy(spec: &SpaceSpec, m: &Content, a: usize, j: usize) -> i64 {
    let own: i64 = spec.factors().iter().filter(|f| f.rows() == a).map(|f| j.min(f.cols()) as i64).sum();
    let taken: i64 = m.iter().map(|((b, k), mult)| cartan(a, b) * j.min(k) as i64 * mult as i64).sum();
    own - taken
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VacancyData {
    pub values: BTreeMap<(usize, usize), i64>,
    /// `p^{(a)}_infinity` for `a = 1..=n`.
    pub infinity: Vec<i64>,
}

impl VacancyData {
    pub fn get(&self, a: usize, j: usize) -> Option<i64> {
        self.values.get(&(a, j)).copied()
    }
}

fn stable_length(spec: &SpaceSpec, m: &Content) -> usize {
    let l = spec.factors().iter().map(|f| f.cols()).max().unwrap_or(1);
    m.support().iter().map(|&(_, j)| j).max().unwrap_or(1).max(l)
}

pub fn vacancy_numbers(spec: &SpaceSpec, m: &Content) -> VacancyData {
    let values = m.support().into_iter().map(|(a, j)| ((a, j), vacancy(spec, m, a, j))).collect();
    let big = stable_length(spec, m);
    let infinity = (1..=spec.rank()).map(|a| vacancy(spec, m, a, big)).collect();
    VacancyData { values, infinity }
}

/// A content iff every vacancy number on the support is nonnegative.
pub fn is_valid_content(spec: &SpaceSpec, m: &Content) -> bool {
    m.support().into_iter().all(|(a, j)| vacancy(spec, m, a, j) >= 0)
}

fn check_rank(spec: &SpaceSpec, m: &Content) -> Result<()> {
    if spec.rank() != m.rank() {
        return Err(Error::RankMismatch { expected: spec.rank(), found: m.rank() });
    }
    Ok(())
}

/// Column `(b, k)` of `F` replaced by `(delta_{a r} min(j, l))_{(a,j)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub column: (usize, usize),
    pub r: usize,
    pub l: usize,
}

/// `F_{aj,bk} = delta p^{(a)}_j + C_ab min(j, k) m^{(b)}_k` over the support,
/// rows and columns in lexicographic `(a, j)` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetheMatrix {
    pub index: Vec<(usize, usize)>,
    pub entries: Vec<Vec<i64>>,
    pub replaced: Option<Replacement>,
}

impl BetheMatrix {
    pub fn det(&self) -> BigInt {
        det_exact(&self.entries)
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }
}

pub fn f_matrix(spec: &SpaceSpec, m: &Content) -> BetheMatrix {
    let index = m.support();
    let entries = index
        .iter()
        .map(|&(a, j)| {
            index
                .iter()
                .map(|&(b, k)| {
                    let diag = if (a, j) == (b, k) { vacancy(spec, m, a, j) } else { 0 };
                    diag + cartan(a, b) * j.min(k) as i64 * m.multiplicity(b, k) as i64
                })
                .collect()
        })
        .collect();
    BetheMatrix { index, entries, replaced: None }
}

pub fn f_replaced(spec: &SpaceSpec, m: &Content, column: (usize, usize), r: usize, l: usize) -> Result<BetheMatrix> {
    let mut f = f_matrix(spec, m);
    let c = f
        .index
        .iter()
        .position(|&x| x == column)
        .ok_or_else(|| Error::Precondition(format!("({},{}) is not in the support of {m}", column.0, column.1)))?;
    for (row, &(a, j)) in f.entries.iter_mut().zip(&f.index) {
        row[c] = if a == r { j.min(l) as i64 } else { 0 };
    }
    f.replaced = Some(Replacement { column, r, l });
    Ok(f)
}

/// Predicted period of `T^{(r)}_l` together with the `det F / det F[b,k]`
/// entries it is the LCM of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodPrediction {
    pub det_f: BigInt,
    /// `((b, k), det F / det F[b,k])` for every `(b, k)` with `det F[b,k] != 0`.
    pub ratios: Vec<((usize, usize), BigRational)>,
    pub period: BigInt,
}

pub fn period_formula(spec: &SpaceSpec, m: &Content, r: usize, l: usize) -> Result<PeriodPrediction> {
    check_rank(spec, m)?;
    if r == 0 || r > spec.rank() || l == 0 {
        return Err(Error::Precondition(format!("T({r},{l}) outside rank {}", spec.rank())));
    }
    let det_f = f_matrix(spec, m).det();
    if det_f.is_zero() {
        return Err(Error::SingularF { content: m.to_string() });
    }
    let mut ratios = Vec::new();
    for col in m.support() {
        let d = f_replaced(spec, m, col, r, l)?.det();
        if !d.is_zero() {
            ratios.push((col, BigRational::new(det_f.clone(), d)));
        }
    }
    let one = BigRational::one();
    let lcm = rational_lcm(std::iter::once(&one).chain(ratios.iter().map(|(_, q)| q)));
    debug_assert!(lcm.is_integer());
    Ok(PeriodPrediction { det_f, ratios, period: lcm.to_integer() })
}

/// Closed LCM formula for `A^{(1)}_1`, `r = 1`, all factors `B^{1,1}`.
///
/// With `H = {J_1 < ... < J_s}`, `i_k = min(J_k, l)`, `i_0 = 0` and the
/// boundary value `p_0 = L`, the terms are
/// `p_{i_{k+1}} p_{i_k} / ((i_{k+1} - i_k) p_{i_s})` for `k = 0..=t`, where
/// `t` is the last index with `i_{t+1} > i_t`. The common `p_{i_s}` of the
/// `k = t` term is cancelled; zero or undefined terms are skipped.
pub fn period_formula_sl2(spec: &SpaceSpec, m: &Content, l: usize) -> Result<BigInt> {
    check_rank(spec, m)?;
    if spec.rank() != 1 || spec.factors().iter().any(|f| f.cols() != 1) || l == 0 {
        return Err(Error::Precondition("closed sl2 formula needs rank 1, (B^{1,1})^L and l >= 1".into()));
    }
    let big_l = spec.len() as i64;
    let heights: Vec<usize> = m.support().into_iter().map(|(_, j)| j).collect();
    let s = heights.len();
    if s == 0 {
        return Ok(BigInt::one());
    }
    let i: Vec<usize> = std::iter::once(0).chain(heights.iter().map(|&j| j.min(l))).collect();
    let p = |x: usize| if x == 0 { big_l } else { vacancy(spec, m, 1, x) };
    let t = (0..s).rev().find(|&k| i[k + 1] > i[k]).expect("i_1 > i_0 = 0");
    let tail = p(i[s]);
    let mut terms = Vec::new();
    for k in 0..=t {
        // i_{t+1} = i_s, so the last term's p_{i_s} cancels before evaluation
        let (num, den) = if k == t {
            (p(i[k]), (i[k + 1] - i[k]) as i64)
        } else {
            (p(i[k + 1]) * p(i[k]), (i[k + 1] - i[k]) as i64 * tail)
        };
        if num != 0 && den != 0 {
            terms.push(BigRational::new(num.into(), den.into()));
        }
    }
    let one = BigRational::one();
    Ok(rational_lcm(std::iter::once(&one).chain(terms.iter())).to_integer())
}

/// `Omega(m) = det F prod_{(a,j) in H} binom(p + m - 1, m - 1) / m`, exactly.
pub fn omega_rational(spec: &SpaceSpec, m: &Content) -> BigRational {
    let mut value = BigRational::from_integer(f_matrix(spec, m).det());
    for ((a, j), mult) in m.iter() {
        let p = vacancy(spec, m, a, j);
        value *= binomial(p + mult as i64 - 1, mult - 1) / BigRational::from_integer(BigInt::from(mult));
    }
    value
}

/// [`omega_rational`], asserted integral; for valid contents also `>= 1`.
pub fn omega(spec: &SpaceSpec, m: &Content) -> Result<BigInt> {
    check_rank(spec, m)?;
    let value = omega_rational(spec, m);
    if !value.is_integer() {
        return Err(Error::NonIntegralOmega { content: m.to_string(), value: value.to_string() });
    }
    let value = value.to_integer();
    if is_valid_content(spec, m) && value < BigInt::one() {
        return Err(Error::NonIntegralOmega { content: m.to_string(), value: format!("{value} < 1 on a valid content") });
    }
    Ok(value)
}

/// A dominant weight as a weakly decreasing tuple `(lambda_1, ..., lambda_{n+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DominantWeight(pub Vec<u64>);

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `lambda(m)` as a letter-count tuple, without the dominance requirement:
/// `lambda_k - lambda_{k+1} = p^{(k)}_infinity` and `sum lambda = |B|`.
pub fn content_weight(spec: &SpaceSpec, m: &Content) -> Vec<i64> {
    let n = spec.rank();
    let inf = vacancy_numbers(spec, m).infinity;
    let total = spec.total_boxes() as i64;
    let weighted: i64 = inf.iter().enumerate().map(|(k, &p)| (k as i64 + 1) * p).sum();
    let rest = total - weighted;
    debug_assert_eq!(rest.rem_euclid(n as i64 + 1), 0);
    let mut lam = vec![0i64; n + 1];
    lam[n] = rest / (n as i64 + 1);
    for k in (0..n).rev() {
        lam[k] = lam[k + 1] + inf[k];
    }
    lam
}

pub fn lambda_weight(spec: &SpaceSpec, m: &Content) -> Result<DominantWeight> {
    check_rank(spec, m)?;
    let inf = vacancy_numbers(spec, m).infinity;
    let lam = content_weight(spec, m);
    if inf.iter().any(|&p| p < 0) || lam.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant { content: m.to_string() });
    }
    Ok(DominantWeight(lam.into_iter().map(|x| x as u64).collect()))
}

/// `|W lambda| = (n+1)! / prod (multiplicities of equal parts)!`.
pub fn orbit_size(w: &DominantWeight) -> u64 {
    let mut out = BigInt::one();
    for k in 2..=w.0.len() {
        out *= k;
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in &w.0 {
        *counts.entry(x).or_insert(0) += 1;
    }
    for &c in counts.values() {
        for k in 2..=c {
            out /= k;
        }
    }
    out.to_u64().expect("orbit size fits in u64")
}

/// `|numerator| / denominator`, the form the ratio tables print.
pub fn format_ratio(q: &BigRational) -> String {
    let q = q.abs();
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn homogeneous(n: usize, len: usize) -> SpaceSpec {
        SpaceSpec::new(n, &vec![(1, 1); len]).unwrap()
    }

    fn table1_space() -> SpaceSpec {
        SpaceSpec::parse(3, "1,2;1,1;1,2;1,1").unwrap()
    }

    fn table2_space() -> SpaceSpec {
        SpaceSpec::parse(3, "2,1;2,1;2,2").unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn vacancy_numbers_by_substitution() {
        let spec = homogeneous(1, 13);
        let m = Content::parse(1, "3,2,1").unwrap();
        let v = vacancy_numbers(&spec, &m);
        assert_eq!((v.get(1, 1), v.get(1, 2), v.get(1, 3)), (Some(7), Some(3), Some(1)));
        assert_eq!(v.infinity, vec![1]);
        let m = Content::parse(3, "2,1/-/-").unwrap();
        let v = vacancy_numbers(&table1_space(), &m);
        assert_eq!((v.get(1, 1), v.get(1, 2)), (Some(0), Some(0)));
        let empty = Content::empty(3);
        assert_eq!(vacancy(&table1_space(), &empty, 1, 1), 4);
        assert_eq!(vacancy(&table1_space(), &empty, 1, 5), 6);
        assert_eq!(vacancy(&table1_space(), &empty, 2, 5), 0);
    }

    #[test]
    fn content_validity() {
        assert!(is_valid_content(&homogeneous(1, 13), &Content::parse(1, "3,2,1").unwrap()));
        assert!(!is_valid_content(&homogeneous(1, 4), &Content::parse(1, "2,2").unwrap()));
        assert!(is_valid_content(&homogeneous(1, 4), &Content::empty(1)));
    }

    #[test]
    fn f_matrix_and_replacement() {
        let spec = homogeneous(1, 13);
        let m = Content::parse(1, "3,2,1").unwrap();
        let f = f_matrix(&spec, &m);
        assert_eq!(f.entries, vec![vec![9, 2, 2], vec![2, 7, 4], vec![2, 4, 7]]);
        assert_eq!(f.det(), BigInt::from(273));
        let g = f_replaced(&spec, &m, (1, 1), 1, 1).unwrap();
        assert_eq!(g.entries, vec![vec![1, 2, 2], vec![1, 7, 4], vec![1, 4, 7]]);
        assert!(f_replaced(&spec, &m, (1, 4), 1, 1).is_err());
        let empty = f_matrix(&spec, &Content::empty(1));
        assert_eq!((empty.dim(), empty.det()), (0, BigInt::one()));
    }

    #[test]
    fn period_table_one() {
        let spec = homogeneous(1, 13);
        let m = Content::parse(1, "3,2,1").unwrap();
        let expect = [
            (1, vec![q(13, 1), q(13, 1), q(13, 1)], 13),
            (2, vec![q(91, 3), q(91, 16), q(91, 16)], 91),
            (3, vec![q(91, 1), q(273, 16), q(273, 107)], 273),
        ];
        for (l, ratios, period) in expect {
            let p = period_formula(&spec, &m, 1, l).unwrap();
            let got: Vec<BigRational> = p.ratios.iter().map(|(_, x)| x.clone()).collect();
            assert_eq!(got, ratios);
            assert_eq!(p.period, BigInt::from(period));
            assert_eq!(period_formula_sl2(&spec, &m, l).unwrap(), BigInt::from(period));
        }
    }

    #[test]
    fn sl2_last_term_cancels_a_vanishing_vacancy() {
        // p_1 = 0; the two-box state 12 has period 2
        let spec = homogeneous(1, 2);
        let m = Content::parse(1, "1").unwrap();
        assert_eq!(period_formula_sl2(&spec, &m, 1).unwrap(), BigInt::from(2));
        assert_eq!(period_formula(&spec, &m, 1, 1).unwrap().period, BigInt::from(2));
    }

    #[test]
    fn period_inhomogeneous_sl2() {
        let spec = SpaceSpec::parse(1, "1,3;1,3;1,2;1,4;1,1;1,5;1,4;1,3").unwrap();
        let m = Content::parse(1, "4,3,2,1").unwrap();
        // det F and det F[1] from an independent sympy evaluation
        assert_eq!(f_matrix(&spec, &m).det(), BigInt::from(252));
        assert_eq!(f_replaced(&spec, &m, (1, 1), 1, 1).unwrap().det(), BigInt::from(126));
        let p = period_formula(&spec, &m, 1, 1).unwrap();
        assert_eq!(p.ratios.len(), 1);
        assert_eq!(p.period, BigInt::from(2));
        assert!(period_formula_sl2(&spec, &m, 1).is_err());
    }

    #[test]
    fn period_rank_three() {
        let spec = SpaceSpec::parse(3, "1,3;1,2;1,1;1,3;1,2;1,1;1,2").unwrap();
        let m = Content::parse(3, "4,3,2/3,1/1").unwrap();
        assert_eq!(period_formula(&spec, &m, 2, 2).unwrap().period, BigInt::from(76));
        assert_eq!(period_formula(&spec, &m, 3, 1).unwrap().period, BigInt::from(380));
    }

    #[test]
    fn fermionic_counts() {
        let spec = table1_space();
        for (text, expect) in [("1/-/-", 4), ("2,1/-/-", 4), ("2/-/-", 6), ("-/-/-", 1), ("2,1/1/-", 18)] {
            let m = Content::parse(3, text).unwrap();
            assert_eq!(omega(&spec, &m).unwrap(), BigInt::from(expect), "{text}");
        }
        let m = Content::parse(3, "2/2,2/2").unwrap();
        assert_eq!(omega(&table2_space(), &m).unwrap(), BigInt::from(32));
        // invalid contents go through generalized binomials
        let bad = Content::parse(1, "1,1").unwrap();
        assert_eq!(omega(&homogeneous(1, 2), &bad).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn weights_and_orbits() {
        let spec = table1_space();
        let w = lambda_weight(&spec, &Content::parse(3, "2,1/-/-").unwrap()).unwrap();
        assert_eq!((w.to_string(), orbit_size(&w)), ("(3,3,0,0)".to_string(), 6));
        let w = lambda_weight(&spec, &Content::parse(3, "1,1,1/1,1/1").unwrap()).unwrap();
        assert_eq!((w.to_string(), orbit_size(&w)), ("(3,1,1,1)".to_string(), 4));
        let w = lambda_weight(&table2_space(), &Content::empty(3)).unwrap();
        assert_eq!((w.to_string(), orbit_size(&w)), ("(4,4,0,0)".to_string(), 6));
        assert!(lambda_weight(&homogeneous(1, 2), &Content::parse(1, "1,1").unwrap()).is_err());
    }

    #[test]
    fn orbit_size_matches_distinct_permutations() {
        fn perms(v: &[u64]) -> std::collections::BTreeSet<Vec<u64>> {
            if v.len() <= 1 {
                return [v.to_vec()].into();
            }
            let mut out = std::collections::BTreeSet::new();
            for k in 0..v.len() {
                let mut rest = v.to_vec();
                let x = rest.remove(k);
                for mut p in perms(&rest) {
                    p.insert(0, x);
                    out.insert(p);
                }
            }
            out
        }
        for w in [vec![6, 0, 0, 0], vec![3, 2, 1, 0], vec![2, 2, 1, 1], vec![2, 2, 2, 2], vec![5, 1], vec![3, 3, 0]] {
            assert_eq!(orbit_size(&DominantWeight(w.clone())) as usize, perms(&w).len(), "{w:?}");
        }
    }

    #[test]
    fn ratio_format() {
        assert_eq!(format_ratio(&q(380, 39)), "380/39");
        assert_eq!(format_ratio(&q(-13, 1)), "13");
    }
}
