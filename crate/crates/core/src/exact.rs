//! Exact integer linear algebra and rational helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant by Bareiss fraction-free elimination. The empty matrix has
/// determinant 1.
pub fn det_exact<T>(rows: &[Vec<T>]) -> BigInt
where
    T: Clone + Into<BigInt>,
{
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().cloned().map(Into::into).collect()).collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// LCM of nonzero rationals: `lcm(|numerators|) / gcd(denominators)`.
/// The empty LCM is 1.
pub fn rational_lcm<'a, I>(values: I) -> BigRational
where
    I: IntoIterator<Item = &'a BigRational>,
{
    let mut num = BigInt::one();
    let mut den: Option<BigInt> = None;
    for q in values {
        assert!(!q.is_zero(), "LCM of zero");
        num = num.lcm(&q.numer().abs());
        den = Some(match den {
            None => q.denom().clone(),
            Some(d) => d.gcd(q.denom()),
        });
    }
    BigRational::new(num, den.unwrap_or_else(BigInt::one))
}

/// Generalized binomial `s (s-1) ... (s-t+1) / t!` for integer `s` and `t >= 0`.
pub fn binomial(s: i64, t: u64) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..t {
        num *= BigInt::from(s) - BigInt::from(k);
        den *= BigInt::from(k + 1);
    }
    BigRational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cofactor(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for c in 0..n {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect()).collect();
            let term = BigInt::from(m[0][c]) * cofactor(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn determinants() {
        let f = vec![vec![9i64, 2, 2], vec![2, 7, 4], vec![2, 4, 7]];
        assert_eq!(cofactor(&f), BigInt::from(273));
        assert_eq!(det_exact(&f), BigInt::from(273));
        assert_eq!(det_exact::<i64>(&[]), BigInt::one());
        // needs a pivot swap
        assert_eq!(det_exact(&[vec![0i64, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(det_exact(&[vec![0i64, 0], vec![1, 0]]), BigInt::zero());
    }

    #[test]
    fn lcm_of_rationals() {
        assert_eq!(rational_lcm(&[q(1, 1), q(91, 3), q(91, 16), q(91, 16)]), q(91, 1));
        assert_eq!(rational_lcm(&[q(1, 1), q(91, 1), q(273, 16), q(273, 107)]), q(273, 1));
        assert_eq!(rational_lcm(&[q(3, 2), q(5, 4)]), q(15, 2));
        assert_eq!(rational_lcm(std::iter::empty()), q(1, 1));
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(5, 2), q(10, 1));
        assert_eq!(binomial(-1, 1), q(-1, 1));
        assert_eq!(binomial(-2, 3), q(-4, 1));
        assert_eq!(binomial(7, 0), q(1, 1));
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(
            m in (0usize..=5).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-9i64..=9, n), n))
        ) {
            prop_assert_eq!(det_exact(&m), cofactor(&m));
        }
    }
}
