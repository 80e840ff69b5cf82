//! Miller bases of `M_k` and `S_k` mod p at level one, membership by
//! q-expansion comparison, and Serre filtration.

use alloc::vec::Vec;

use crate::field::{Field, FieldElement, Prime};
use crate::linalg::Matrix;
use crate::qseries::{delta_qexp, eisenstein_qexp, series_mul, QSeries};
use crate::Error;

/// `dim M_k` (or `dim S_k`) at level one; zero for odd or negative-like weights.
pub fn space_dimension(k: u32, cuspidal: bool) -> usize {
    if k % 2 == 1 || k == 2 {
        return 0;
    }
    let full = if k % 12 == 2 {
        (k / 12) as usize
    } else {
        (k / 12) as usize + 1
    };
    if cuspidal {
        if k == 0 {
            0
        } else {
            full - 1
        }
    } else {
        full
    }
}

/// Agreement of `a_0 .. a_{sturm_bound(k)}` certifies equality in weight `k`.
pub fn sturm_bound(k: u32) -> usize {
    (k / 12) as usize + 1
}

/// An echelonized basis of `M_k` or `S_k` mod p to a fixed precision.
///
/// Row `i` has `a_{pivot_i} = 1` and `a_{pivot_j} = 0` for `j != i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpace {
    p: Prime,
    weight: u32,
    cuspidal: bool,
    precision: usize,
    basis: Vec<QSeries>,
    pivots: Vec<usize>,
}

impl FormSpace {
    /// Validates externally supplied rows (e.g. from a cache) against the
    /// dimension formula, the precision floor and the echelon property.
    pub fn from_rows(
        p: Prime,
        weight: u32,
        cuspidal: bool,
        precision: usize,
        basis: Vec<QSeries>,
    ) -> Result<FormSpace, Error> {
        p.require_modular()?;
        let needed = sturm_bound(weight) + 1;
        if precision < needed {
            return Err(Error::InsufficientPrecision {
                needed,
                available: precision,
            });
        }
        if basis.len() != space_dimension(weight, cuspidal) {
            return Err(Error::DimensionMismatch("basis length vs dimension formula"));
        }
        let field = Field::prime(p);
        let offset = usize::from(cuspidal);
        let pivots: Vec<usize> = (0..basis.len()).map(|i| i + offset).collect();
        for (i, row) in basis.iter().enumerate() {
            if row.field() != field || row.precision() != precision || row.weight() != weight {
                return Err(Error::DimensionMismatch("basis row shape"));
            }
            for (j, &pj) in pivots.iter().enumerate() {
                let expected = if i == j { field.one() } else { field.zero() };
                if row.coefficients()[pj] != expected {
                    return Err(Error::DimensionMismatch("basis is not echelonized"));
                }
            }
            if cuspidal && !row.coefficients()[0].is_zero() {
                return Err(Error::DimensionMismatch("cusp form with constant term"));
            }
        }
        Ok(FormSpace {
            p,
            weight,
            cuspidal,
            precision,
            basis,
            pivots,
        })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn field(&self) -> Field {
        Field::prime(self.p)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn is_cuspidal(&self) -> bool {
        self.cuspidal
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QSeries] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn truncate(&self, precision: usize) -> Result<FormSpace, Error> {
        let basis = self
            .basis
            .iter()
            .map(|f| f.truncate(precision))
            .collect::<Result<Vec<_>, _>>()?;
        FormSpace::from_rows(self.p, self.weight, self.cuspidal, precision, basis)
    }

    /// `sum c_i f_i`, over the coordinates' field.
    pub fn combination(&self, coords: &[FieldElement]) -> Result<QSeries, Error> {
        if coords.len() != self.dimension() {
            return Err(Error::DimensionMismatch("coordinate vector"));
        }
        let field = coords.first().map_or(self.field(), FieldElement::field);
        let mut acc = QSeries::zero(field, self.weight, self.precision)?;
        for (row, &c) in self.basis.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&row.embed(field)?.scale(c)?)?;
        }
        Ok(acc)
    }

    /// Coordinates of `f` if its first `precision` coefficients lie in the
    /// span of the basis, `None` otherwise.
    pub fn coordinates(
        &self,
        f: &QSeries,
        precision: usize,
    ) -> Result<Option<Vec<FieldElement>>, Error> {
        if f.field().characteristic() != self.p.get() {
            return Err(Error::FieldMismatch);
        }
        let available = f.precision().min(self.precision);
        if precision > available {
            return Err(Error::InsufficientPrecision {
                needed: precision,
                available,
            });
        }
        if let Some(&last) = self.pivots.last() {
            if last >= precision {
                return Err(Error::InsufficientPrecision {
                    needed: last + 1,
                    available: precision,
                });
            }
        }
        let field = f.field();
        let coords: Vec<FieldElement> = self.pivots.iter().map(|&j| f.coefficients()[j]).collect();
        let mut residual: Vec<FieldElement> = f.coefficients()[..precision].to_vec();
        for (row, &c) in self.basis.iter().zip(&coords) {
            if c.is_zero() {
                continue;
            }
            for (r, &b) in residual.iter_mut().zip(row.coefficients()) {
                *r -= c * field.embed(b)?;
            }
        }
        if residual.iter().all(FieldElement::is_zero) {
            Ok(Some(coords))
        } else {
            Ok(None)
        }
    }
}

/// Monomials `E_4^a E_6^b Delta^c` of weight `k`, one per power of `Delta`,
/// with `b` in `{0, 1}`, listed by decreasing power of `Delta`.
fn miller_exponents(k: u32, cuspidal: bool) -> Vec<(u32, u32, u32)> {
    let d = space_dimension(k, false) as u32;
    let lowest = u32::from(cuspidal);
    (lowest..d)
        .rev()
        .map(|c| {
            let rest = k - 12 * c;
            let b = if rest % 4 == 0 { 0 } else { 1 };
            ((rest - 6 * b) / 4, b, c)
        })
        .collect()
}

fn powers(base: &QSeries, max: u32) -> Result<Vec<QSeries>, Error> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(QSeries::constant(base.field().one(), 0, base.precision())?);
    for i in 1..=max as usize {
        let next = series_mul(&out[i - 1], base)?;
        out.push(next);
    }
    Ok(out)
}

/// The Miller basis of `M_k` (or `S_k`) mod p at precision `m`.
pub fn miller_basis(k: u32, p: Prime, m: usize, cuspidal: bool) -> Result<FormSpace, Error> {
    p.require_modular()?;
    let needed = sturm_bound(k) + 1;
    if m < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: m,
        });
    }
    let field = Field::prime(p);
    let exps = miller_exponents(k, cuspidal);
    if exps.is_empty() {
        return FormSpace::from_rows(p, k, cuspidal, m, Vec::new());
    }
    let max_a = exps.iter().map(|e| e.0).max().unwrap_or(0);
    let max_c = exps.iter().map(|e| e.2).max().unwrap_or(0);
    let e4 = eisenstein_qexp(4, p, m)?;
    let e6 = eisenstein_qexp(6, p, m)?;
    let e4_pows = powers(&e4, max_a)?;
    let delta_pows = if max_c > 0 {
        powers(&delta_qexp(p, m)?, max_c)?
    } else {
        Vec::from([QSeries::constant(field.one(), 0, m)?])
    };
    let mut rows = Vec::with_capacity(exps.len());
    for &(a, b, c) in &exps {
        let mut mono = series_mul(&e4_pows[a as usize], &delta_pows[c as usize])?;
        if b == 1 {
            mono = series_mul(&mono, &e6)?;
        }
        rows.push(mono.coefficients().to_vec());
    }
    let mut mat = Matrix::from_rows(field, &rows)?;
    let pivots = mat.rref_in_place();
    if pivots.len() != exps.len() {
        return Err(Error::Internal("Miller monomials are dependent"));
    }
    let basis = (0..mat.rows())
        .map(|i| QSeries::new(field, k, mat.row(i).to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    FormSpace::from_rows(p, k, cuspidal, m, basis)
}

/// Where form spaces come from. The CLI plugs a disk cache in here.
pub trait BasisSource {
    fn basis(&self, k: u32, p: Prime, precision: usize, cuspidal: bool) -> Result<FormSpace, Error>;
}

/// Computes every basis from scratch.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirectBasis;

impl BasisSource for DirectBasis {
    fn basis(&self, k: u32, p: Prime, precision: usize, cuspidal: bool) -> Result<FormSpace, Error> {
        miller_basis(k, p, precision, cuspidal)
    }
}

fn check_characteristic(f: &QSeries, p: Prime) -> Result<(), Error> {
    if f.field().characteristic() == p.get() {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}

/// Coordinates of `f` in the Miller basis of `M_k` mod p, certified at
/// precision `sturm_bound(max(k, weight(f))) + 1`.
pub fn membership(f: &QSeries, k: u32, p: Prime) -> Result<Option<Vec<FieldElement>>, Error> {
    membership_with(&DirectBasis, f, k, p)
}

pub fn membership_with(
    source: &dyn BasisSource,
    f: &QSeries,
    k: u32,
    p: Prime,
) -> Result<Option<Vec<FieldElement>>, Error> {
    p.require_modular()?;
    check_characteristic(f, p)?;
    let precision = sturm_bound(k.max(f.weight())) + 1;
    if f.precision() < precision {
        return Err(Error::InsufficientPrecision {
            needed: precision,
            available: f.precision(),
        });
    }
    let space = source.basis(k, p, precision, false)?;
    space.coordinates(f, precision)
}

/// Result of a filtration computation: `f = f~ * A^n` with `f~` in `M_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    pub input_weight: u32,
    pub filtration: u32,
    /// `n = (k - w) / (p - 1)`.
    pub hasse_power: u32,
    /// Coordinates of `f~` in the Miller basis of `M_w`.
    pub witness: Vec<FieldElement>,
    /// Number of coefficients compared.
    pub precision: usize,
}

/// Least `w = k mod (p - 1)` with `f` in `M_w` as a q-series.
pub fn filtration(f: &QSeries, p: Prime) -> Result<FiltrationReport, Error> {
    filtration_with(&DirectBasis, f, p)
}

pub fn filtration_with(source: &dyn BasisSource, f: &QSeries, p: Prime) -> Result<FiltrationReport, Error> {
    p.require_modular()?;
    check_characteristic(f, p)?;
    let k = f.weight();
    let precision = sturm_bound(k) + 1;
    if f.precision() < precision {
        return Err(Error::InsufficientPrecision {
            needed: precision,
            available: f.precision(),
        });
    }
    let f = f.truncate(precision)?;
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let step = p.get() - 1;
    let mut w = k % step;
    while w <= k {
        if space_dimension(w, false) > 0 {
            let space = source.basis(w, p, precision, false)?;
            if let Some(witness) = space.coordinates(&f, precision)? {
                return Ok(FiltrationReport {
                    input_weight: k,
                    filtration: w,
                    hasse_power: (k - w) / step,
                    witness,
                    precision,
                });
            }
        }
        w += step;
    }
    Err(Error::NotAModularForm(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::hasse_qexp;
    use alloc::vec;
    use proptest::prelude::*;

    fn prime(q: u32) -> Prime {
        Prime::new(q).unwrap()
    }

    fn residues(s: &QSeries) -> Vec<u32> {
        s.coefficients().iter().map(|c| c.prime_residue().unwrap()).collect()
    }

    #[test]
    fn dimensions() {
        assert_eq!(space_dimension(0, false), 1);
        assert_eq!(space_dimension(0, true), 0);
        assert_eq!(space_dimension(2, false), 0);
        assert_eq!(space_dimension(24, false), 3);
        assert_eq!(space_dimension(24, true), 2);
        assert_eq!(space_dimension(7, false), 0);
        assert_eq!(space_dimension(12, true), 1);
        assert_eq!(space_dimension(14, false), 1);
        assert_eq!(space_dimension(14, true), 0);
        assert_eq!(space_dimension(26, true), 1);
    }

    #[test]
    fn sturm_bounds() {
        assert_eq!(sturm_bound(12), 2);
        assert_eq!(sturm_bound(24), 3);
        assert_eq!(sturm_bound(56), 5);
        assert_eq!(sturm_bound(0), 1);
    }

    #[test]
    fn weight_zero_basis_is_constant() {
        let s = miller_basis(0, prime(5), 5, false).unwrap();
        assert_eq!(s.dimension(), 1);
        assert_eq!(residues(&s.basis()[0]), [1, 0, 0, 0, 0]);
        assert_eq!(miller_basis(0, prime(5), 5, true).unwrap().dimension(), 0);
    }

    #[test]
    fn weight_twelve_cusp_space_is_delta() {
        let s = miller_basis(12, prime(5), 10, true).unwrap();
        assert_eq!(s.dimension(), 1);
        assert_eq!(s.basis()[0], delta_qexp(prime(5), 10).unwrap());
    }

    #[test]
    fn weight_24_pivots() {
        let s = miller_basis(24, prime(5), 10, false).unwrap();
        assert_eq!(s.dimension(), 3);
        assert_eq!(s.pivots(), [0, 1, 2]);
        // independent construction from E_4^6, E_4^3 Delta, Delta^2
        let p = prime(5);
        let e4 = eisenstein_qexp(4, p, 10).unwrap();
        let d = delta_qexp(p, 10).unwrap();
        let monos = [e4.pow(6), e4.pow(3).mul(&d).unwrap(), d.pow(2)];
        for m in &monos {
            assert!(s.coordinates(m, 10).unwrap().is_some());
        }
        let cusp = miller_basis(24, p, 10, true).unwrap();
        assert_eq!(cusp.pivots(), [1, 2]);
    }

    #[test]
    fn insufficient_precision_is_loud() {
        assert_eq!(
            miller_basis(24, prime(5), 3, false),
            Err(Error::InsufficientPrecision { needed: 4, available: 3 })
        );
        let e4 = eisenstein_qexp(4, prime(5), 1).unwrap();
        assert!(matches!(membership(&e4, 4, prime(5)), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn membership_examples() {
        let p = prime(5);
        let f = Field::prime(p);
        let zero = QSeries::zero(f, 12, 5).unwrap();
        assert_eq!(membership(&zero, 12, p).unwrap(), Some(vec![f.zero(); 2]));
        let e4 = eisenstein_qexp(4, p, 10).unwrap();
        assert!(membership(&e4.pow(3).with_weight(12), 12, p).unwrap().is_some());
        let delta = delta_qexp(p, 10).unwrap();
        assert!(membership(&delta, 8, p).unwrap().is_none());
    }

    #[test]
    fn round_trip_through_coordinates() {
        let p = prime(7);
        let s = miller_basis(36, p, 20, false).unwrap();
        let e6 = eisenstein_qexp(6, p, 20).unwrap();
        let d = delta_qexp(p, 20).unwrap();
        let f = e6.pow(4).mul(&d).unwrap().add(&d.pow(3)).unwrap();
        let coords = s.coordinates(&f, 20).unwrap().unwrap();
        assert_eq!(s.combination(&coords).unwrap(), f);
    }

    #[test]
    fn printed_filtrations() {
        let cases = [(5, 4, 0), (5, 6, 6), (7, 4, 4), (7, 6, 0), (7, 8, 8)];
        for (q, k, w) in cases {
            let e = eisenstein_qexp(k, prime(q), 20).unwrap();
            let report = filtration(&e, prime(q)).unwrap();
            assert_eq!(report.filtration, w, "E_{k} mod {q}");
            assert_eq!(report.hasse_power, (k - w) / (q - 1));
        }
    }

    #[test]
    fn filtration_errors() {
        let p = prime(5);
        let f = Field::prime(p);
        assert_eq!(filtration(&QSeries::zero(f, 12, 5).unwrap(), p), Err(Error::ZeroForm));
        // q alone is not a weight-12 form
        let q = QSeries::from_integers(f, 12, &[0, 1, 0, 0, 0]).unwrap();
        assert_eq!(filtration(&q, p), Err(Error::NotAModularForm(12)));
    }

    #[test]
    fn hasse_multiplication_keeps_filtration() {
        for q in [5u32, 7] {
            let p = prime(q);
            let a = hasse_qexp(p, 40).unwrap();
            for f in [delta_qexp(p, 40).unwrap(), eisenstein_qexp(6, p, 40).unwrap(), eisenstein_qexp(10, p, 40).unwrap()] {
                let w = filtration(&f, p).unwrap().filtration;
                let lifted = series_mul(&f, a.as_series()).unwrap();
                assert_eq!(lifted.weight(), f.weight() + q - 1);
                assert_eq!(filtration(&lifted, p).unwrap().filtration, w);
            }
        }
    }

    #[test]
    fn dimensions_match_formula() {
        for q in [5u32, 7, 11, 13] {
            for k in (0..=60).step_by(2) {
                for cusp in [false, true] {
                    let s = miller_basis(k, prime(q), sturm_bound(k) + 3, cusp).unwrap();
                    assert_eq!(s.dimension(), space_dimension(k, cusp));
                    for (i, row) in s.basis().iter().enumerate() {
                        for (j, &pj) in s.pivots().iter().enumerate() {
                            assert_eq!(row.coefficients()[pj].is_one(), i == j);
                            assert_eq!(row.coefficients()[pj].is_zero(), i != j);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn from_rows_rejects_bad_input() {
        let p = prime(5);
        let good = miller_basis(24, p, 10, false).unwrap();
        let mut rows = good.basis().to_vec();
        rows.swap(0, 1);
        assert!(FormSpace::from_rows(p, 24, false, 10, rows).is_err());
        assert!(FormSpace::from_rows(p, 24, false, 10, good.basis()[..2].to_vec()).is_err());
        assert_eq!(FormSpace::from_rows(p, 24, false, 10, good.basis().to_vec()).unwrap(), good);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn filtration_is_congruent_to_weight(k in (0u32..=30).prop_map(|x| 2 * x), seed in proptest::collection::vec(0i64..7, 6), q in prop::sample::select(vec![5u32, 7])) {
            let p = prime(q);
            let s = miller_basis(k, p, sturm_bound(k) + 1, false).unwrap();
            let f = Field::prime(p);
            let coords: Vec<FieldElement> = (0..s.dimension()).map(|i| f.from_i64(seed[i % seed.len()] + i as i64)).collect();
            let form = s.combination(&coords).unwrap();
            if !form.is_zero() {
                let r = filtration(&form, p).unwrap();
                prop_assert_eq!(r.filtration % (q - 1), k % (q - 1));
                prop_assert!(r.filtration <= k);
            }
        }
    }
}
