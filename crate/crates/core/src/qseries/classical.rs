use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{series_mul, QSeries};
use crate::field::{reduce_rational, ExactRational, Field, FieldElement, Prime};
use crate::Error;

/// `sigma_r(n) = sum_{d | n} d^r`.
pub fn divisor_power_sum(n: u64, r: u32) -> BigUint {
    assert!(n >= 1, "divisor_power_sum needs n >= 1");
    let mut total = BigUint::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigUint::from(d).pow(r);
            let e = n / d;
            if e != d {
                total += BigUint::from(e).pow(r);
            }
        }
        d += 1;
    }
    total
}

/// `sigma_r(n)` reduced into the prime field `field`.
pub(crate) fn divisor_power_sum_mod(n: u64, r: u32, field: Field) -> FieldElement {
    let mut total = field.zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += field.from_u64(d).pow(r as u64);
            let e = n / d;
            if e != d {
                total += field.from_u64(e).pow(r as u64);
            }
        }
        d += 1;
    }
    total
}

/// Bernoulli numbers `B_0 .. B_k` with `B_1 = -1/2`, from
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
fn bernoulli_table(k: usize) -> Vec<ExactRational> {
    let mut table = Vec::with_capacity(k + 1);
    table.push(ExactRational::one());
    for m in 1..=k {
        let mut acc = ExactRational::zero();
        let mut binom = BigInt::one();
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc = acc + ExactRational::from_integer(binom.clone()) * b.clone();
            }
            // C(m+1, j+1) from C(m+1, j)
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let b_m = -(acc / ExactRational::from_integer(m as i64 + 1));
        table.push(b_m);
    }
    table
}

pub fn bernoulli(k: u32) -> ExactRational {
    if k >= 3 && k % 2 == 1 {
        return ExactRational::zero();
    }
    bernoulli_table(k as usize).pop().expect("nonempty table")
}

fn check_eisenstein_args(k: u32, p: Prime, precision: usize) -> Result<(), Error> {
    p.require_modular()?;
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidWeight(k));
    }
    if precision == 0 {
        return Err(Error::EmptySeries);
    }
    Ok(())
}

fn eisenstein_with_constant(k: u32, p: Prime, precision: usize, c: FieldElement) -> QSeries {
    let field = Field::prime(p);
    let mut coeffs = Vec::with_capacity(precision);
    coeffs.push(field.one());
    for n in 1..precision as u64 {
        coeffs.push(c * divisor_power_sum_mod(n, k - 1, field));
    }
    QSeries::new(field, k, coeffs).expect("nonempty, single field")
}

/// `-2k / B_k` reduced mod p.
fn eisenstein_constant(k: u32, p: Prime) -> Result<FieldElement, Error> {
    let c = ExactRational::from_integer(-2 * k as i64) / bernoulli(k);
    reduce_rational(&c, p)
}

/// `E_k = 1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^n` mod p, for even `k >= 4`.
///
/// When `(p - 1) | k` the constant `-2k/B_k` is divisible by `p` and the
/// series is returned as the constant 1 without rational reduction.
pub fn eisenstein_qexp(k: u32, p: Prime, precision: usize) -> Result<QSeries, Error> {
    check_eisenstein_args(k, p, precision)?;
    if k % (p.get() - 1) == 0 {
        let field = Field::prime(p);
        return QSeries::constant(field.one(), k, precision);
    }
    Ok(eisenstein_with_constant(k, p, precision, eisenstein_constant(k, p)?))
}

/// [`eisenstein_qexp`] without the `(p - 1) | k` shortcut: always reduces
/// `-2k/B_k` through exact rationals.
pub fn eisenstein_via_bernoulli(k: u32, p: Prime, precision: usize) -> Result<QSeries, Error> {
    check_eisenstein_args(k, p, precision)?;
    Ok(eisenstein_with_constant(k, p, precision, eisenstein_constant(k, p)?))
}

/// `Delta = q prod_{n>=1} (1 - q^n)^24` mod p, weight 12.
pub fn delta_qexp(p: Prime, precision: usize) -> Result<QSeries, Error> {
    p.require_modular()?;
    if precision < 2 {
        return Err(Error::InsufficientPrecision {
            needed: 2,
            available: precision,
        });
    }
    let field = Field::prime(p);
    // Euler product to precision m - 1; the final shift by q restores m.
    let inner = precision - 1;
    let mut euler = alloc::vec![field.zero(); inner];
    euler[0] = field.one();
    for n in 1..inner {
        for i in (n..inner).rev() {
            let below = euler[i - n];
            euler[i] -= below;
        }
    }
    let euler = QSeries::new(field, 0, euler)?;
    let e2 = series_mul(&euler, &euler)?;
    let e4 = series_mul(&e2, &e2)?;
    let e8 = series_mul(&e4, &e4)?;
    let e16 = series_mul(&e8, &e8)?;
    let e24 = series_mul(&e16, &e8)?;
    let mut coeffs = Vec::with_capacity(precision);
    coeffs.push(field.zero());
    coeffs.extend_from_slice(e24.coefficients());
    QSeries::new(field, 12, coeffs)
}

/// The Hasse invariant `A = E_{p-1}` mod p, checked to be the constant 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseInvariant {
    p: Prime,
    series: QSeries,
}

impl HasseInvariant {
    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn as_series(&self) -> &QSeries {
        &self.series
    }

    pub fn weight(&self) -> u32 {
        self.p.get() - 1
    }
}

pub fn hasse_qexp(p: Prime, precision: usize) -> Result<HasseInvariant, Error> {
    p.require_modular()?;
    let series = eisenstein_via_bernoulli(p.get() - 1, p, precision)?;
    let one = QSeries::constant(series.field().one(), p.get() - 1, precision)?;
    if series != one {
        return Err(Error::HasseNotConstant(p.get()));
    }
    Ok(HasseInvariant { p, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn prime(q: u32) -> Prime {
        Prime::new(q).unwrap()
    }

    fn residues(s: &QSeries) -> Vec<u32> {
        s.coefficients().iter().map(|c| c.prime_residue().unwrap()).collect()
    }

    /// Akiyama-Tanigawa; yields B_1 = +1/2.
    fn akiyama_tanigawa(n: usize) -> BigRational {
        let mut a: Vec<BigRational> = Vec::new();
        for m in 0..=n {
            a.push(BigRational::new(1.into(), (m as i64 + 1).into()));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigRational::from_integer((j as i64).into());
            }
        }
        a[0].clone()
    }

    /// Ramanujan tau over the integers via 1728 Delta = E_4^3 - E_6^2.
    fn tau_table(len: usize) -> Vec<i128> {
        let sigma = |n: u64, r: u32| -> i128 {
            (1..=n).filter(|d| n % d == 0).map(|d| (d as i128).pow(r)).sum()
        };
        let e4: Vec<i128> = (0..len as u64)
            .map(|n| if n == 0 { 1 } else { 240 * sigma(n, 3) })
            .collect();
        let e6: Vec<i128> = (0..len as u64)
            .map(|n| if n == 0 { 1 } else { -504 * sigma(n, 5) })
            .collect();
        let mul = |a: &[i128], b: &[i128]| -> Vec<i128> {
            (0..len).map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum()).collect()
        };
        let e4_cubed = mul(&mul(&e4, &e4), &e4);
        let e6_sq = mul(&e6, &e6);
        e4_cubed
            .iter()
            .zip(&e6_sq)
            .map(|(a, b)| {
                assert_eq!((a - b) % 1728, 0);
                (a - b) / 1728
            })
            .collect()
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_power_sum(1, 3), BigUint::from(1u32));
        assert_eq!(divisor_power_sum(6, 3), BigUint::from(252u32));
        assert_eq!(divisor_power_sum(4, 5), BigUint::from(1057u32));
        assert_eq!(divisor_power_sum(12, 0), BigUint::from(6u32));
    }

    #[test]
    fn bernoulli_values() {
        assert!(bernoulli(3).is_zero());
        assert_eq!(bernoulli(1), ExactRational::new((-1).into(), 2.into()).unwrap());
        assert_eq!(bernoulli(4), ExactRational::new((-1).into(), 30.into()).unwrap());
        assert_eq!(bernoulli(12), ExactRational::new((-691).into(), 2730.into()).unwrap());
        for n in (0..=40).filter(|&n| n != 1) {
            let b = bernoulli(n);
            let oracle = akiyama_tanigawa(n as usize);
            assert_eq!(b.numerator(), oracle.numer(), "B_{n}");
            assert_eq!(b.denominator(), oracle.denom(), "B_{n}");
        }
    }

    #[test]
    fn eisenstein_examples() {
        let e4_5 = eisenstein_qexp(4, prime(5), 3).unwrap();
        assert_eq!(residues(&e4_5), [1, 0, 0]);
        assert_eq!(residues(&eisenstein_qexp(4, prime(7), 3).unwrap()), [1, 2, 4]);
        assert_eq!(residues(&eisenstein_qexp(6, prime(5), 3).unwrap()), [1, 1, 3]);
        assert_eq!(eisenstein_qexp(6, prime(5), 3).unwrap().weight(), 6);
    }

    #[test]
    fn eisenstein_argument_errors() {
        assert_eq!(eisenstein_qexp(2, prime(5), 3), Err(Error::InvalidWeight(2)));
        assert_eq!(eisenstein_qexp(5, prime(5), 3), Err(Error::InvalidWeight(5)));
        assert_eq!(eisenstein_qexp(4, prime(3), 3), Err(Error::Unsupported(3)));
        assert_eq!(eisenstein_qexp(4, prime(7), 0), Err(Error::EmptySeries));
        // 691 divides the numerator of B_12
        assert!(matches!(
            eisenstein_qexp(12, prime(691), 3),
            Err(Error::DenominatorDivisibleByP(_, 691))
        ));
    }

    #[test]
    fn shortcut_agrees_with_rational_route() {
        for q in [5u32, 7, 11, 13] {
            for k in (4..=60).step_by(2) {
                let a = eisenstein_qexp(k, prime(q), 30).unwrap();
                let b = eisenstein_via_bernoulli(k, prime(q), 30).unwrap();
                assert_eq!(a, b, "k = {k}, p = {q}");
            }
        }
    }

    #[test]
    fn delta_examples() {
        let d5 = delta_qexp(prime(5), 5).unwrap();
        assert_eq!(residues(&d5), [0, 1, 1, 2, 3]);
        assert_eq!(residues(&delta_qexp(prime(7), 3).unwrap()), [0, 1, 4]);
        assert_eq!(d5.weight(), 12);
        assert!(matches!(delta_qexp(prime(5), 1), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn delta_matches_integer_tau() {
        let tau = tau_table(40);
        for q in [5u32, 7, 11, 13, 691] {
            let d = delta_qexp(prime(q), 40).unwrap();
            for (n, &t) in tau.iter().enumerate() {
                let expected = t.rem_euclid(q as i128) as u32;
                assert_eq!(d.coefficient(n).unwrap().prime_residue(), Some(expected), "tau({n}) mod {q}");
            }
        }
        assert_eq!(&tau[1..5], &[1, -24, 252, -1472]);
    }

    #[test]
    fn hasse_invariant_is_one() {
        for (q, m) in [(5u32, 10usize), (7, 10), (11, 20), (13, 200), (5, 200), (7, 200), (11, 200)] {
            let a = hasse_qexp(prime(q), m).unwrap();
            assert_eq!(a.weight(), q - 1);
            assert_eq!(a.as_series().weight(), q - 1);
            assert_eq!(a.as_series().precision(), m);
            assert!(a.as_series().coefficient(0).unwrap().is_one());
            assert!(a.as_series().coefficients()[1..].iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn classical_identities() {
        for q in [5u32, 7, 11, 13] {
            let p = prime(q);
            let m = 60;
            let e4 = eisenstein_qexp(4, p, m).unwrap();
            let e6 = eisenstein_qexp(6, p, m).unwrap();
            let delta = delta_qexp(p, m).unwrap();
            let lhs = delta.scale(delta.field().from_u64(1728)).unwrap();
            let rhs = e4.pow(3).sub(&e6.pow(2)).unwrap();
            assert_eq!(lhs, rhs, "1728 Delta, p = {q}");
            assert_eq!(e4.mul(&e4).unwrap(), eisenstein_qexp(8, p, m).unwrap());
            assert_eq!(e4.mul(&e6).unwrap(), eisenstein_qexp(10, p, m).unwrap());
            assert_eq!(e4.mul(&eisenstein_qexp(10, p, m).unwrap()).unwrap(), eisenstein_qexp(14, p, m).unwrap());
        }
    }

    #[test]
    fn e4_squared_mod_7_at_precision_5() {
        let p = prime(7);
        let e4 = eisenstein_qexp(4, p, 5).unwrap();
        assert_eq!(series_mul(&e4, &e4).unwrap(), eisenstein_qexp(8, p, 5).unwrap());
    }

    proptest! {
        #[test]
        fn sigma_is_multiplicative(m in 1u64..200, n in 1u64..200, r in 0u32..8) {
            if num_integer::gcd(m, n) == 1 {
                prop_assert_eq!(divisor_power_sum(m * n, r), divisor_power_sum(m, r) * divisor_power_sum(n, r));
            }
        }

        #[test]
        fn sigma_mod_p_agrees(n in 1u64..500, r in 0u32..30) {
            let field = Field::prime(prime(13));
            let big = divisor_power_sum(n, r) % BigUint::from(13u32);
            let expected = big.to_u32_digits().first().copied().unwrap_or(0);
            prop_assert_eq!(divisor_power_sum_mod(n, r, field).prime_residue(), Some(expected));
        }
    }

    #[test]
    fn hasse_examples_report_weight() {
        assert_eq!(hasse_qexp(prime(7), 10).unwrap().weight(), 6);
        assert_eq!(hasse_qexp(prime(3), 10), Err(Error::Unsupported(3)));
    }
}
