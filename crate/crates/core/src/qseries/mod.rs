//! Truncated q-expansions over a finite field and the classical level-one
//! generators.

mod classical;

pub use classical::{
    bernoulli, delta_qexp, divisor_power_sum, eisenstein_qexp, eisenstein_via_bernoulli,
    hasse_qexp, HasseInvariant,
};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Field, FieldElement};
use crate::Error;

/// `a_0 + a_1 q + ... + a_{m-1} q^{m-1} + O(q^m)` with a weight tag.
///
/// The weight is bookkeeping only: it is preserved by addition, summed by
/// multiplication, and never inferred from the coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    field: Field,
    weight: u32,
    coefficients: Vec<FieldElement>,
}

impl QSeries {
    pub fn new(field: Field, weight: u32, coefficients: Vec<FieldElement>) -> Result<Self, Error> {
        if coefficients.is_empty() {
            return Err(Error::EmptySeries);
        }
        if coefficients.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(QSeries {
            field,
            weight,
            coefficients,
        })
    }

    /// Prime-field series from integer coefficients.
    pub fn from_integers(field: Field, weight: u32, coefficients: &[i64]) -> Result<Self, Error> {
        QSeries::new(
            field,
            weight,
            coefficients.iter().map(|&c| field.from_i64(c)).collect(),
        )
    }

    pub fn zero(field: Field, weight: u32, precision: usize) -> Result<Self, Error> {
        QSeries::new(field, weight, vec![field.zero(); precision])
    }

    pub fn constant(c: FieldElement, weight: u32, precision: usize) -> Result<Self, Error> {
        let field = c.field();
        let mut s = QSeries::zero(field, weight, precision)?;
        s.coefficients[0] = c;
        Ok(s)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.weight
    }

    #[inline]
    pub fn precision(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coefficients
    }

    /// `a_n`, or `None` past the precision.
    pub fn coefficient(&self, n: usize) -> Option<FieldElement> {
        self.coefficients.get(n).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(FieldElement::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_index(&self) -> Option<usize> {
        self.coefficients.iter().position(|c| !c.is_zero())
    }

    pub fn with_weight(mut self, weight: u32) -> Self {
        self.weight = weight;
        self
    }

    pub fn truncate(&self, precision: usize) -> Result<Self, Error> {
        if precision == 0 {
            return Err(Error::EmptySeries);
        }
        if precision > self.precision() {
            return Err(Error::InsufficientPrecision {
                needed: precision,
                available: self.precision(),
            });
        }
        Ok(QSeries {
            field: self.field,
            weight: self.weight,
            coefficients: self.coefficients[..precision].to_vec(),
        })
    }

    /// The same series over a field containing the current prime field.
    pub fn embed(&self, field: Field) -> Result<Self, Error> {
        if field == self.field {
            return Ok(self.clone());
        }
        Ok(QSeries {
            field,
            weight: self.weight,
            coefficients: self
                .coefficients
                .iter()
                .map(|&c| field.embed(c))
                .collect::<Result<_, _>>()?,
        })
    }

    fn check_compatible(&self, other: &QSeries) -> Result<(), Error> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(self.weight, other.weight));
        }
        Ok(())
    }

    pub fn add(&self, other: &QSeries) -> Result<Self, Error> {
        self.check_compatible(other)?;
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(QSeries {
            field: self.field,
            weight: self.weight,
            coefficients,
        })
    }

    pub fn sub(&self, other: &QSeries) -> Result<Self, Error> {
        self.check_compatible(other)?;
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(QSeries {
            field: self.field,
            weight: self.weight,
            coefficients,
        })
    }

    pub fn scale(&self, c: FieldElement) -> Result<Self, Error> {
        let c = self.field.embed(c)?;
        Ok(QSeries {
            field: self.field,
            weight: self.weight,
            coefficients: self.coefficients.iter().map(|&a| a * c).collect(),
        })
    }

    pub fn mul(&self, other: &QSeries) -> Result<Self, Error> {
        series_mul(self, other)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = QSeries::constant(self.field.one(), 0, self.precision()).expect("nonempty");
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = series_mul(&acc, &base).expect("same field");
            }
            exp >>= 1;
            if exp > 0 {
                base = series_mul(&base, &base).expect("same field");
            }
        }
        acc
    }

    /// Scaled so the first nonzero coefficient is 1; `None` for the zero series.
    pub fn normalized(&self) -> Option<Self> {
        let lead = self.coefficients[self.leading_index()?];
        self.scale(lead.inverse()?).ok()
    }

    /// Coefficient-wise equality of `a_0 .. a_{precision-1}`, ignoring weight tags.
    pub fn agrees_with(&self, other: &QSeries, precision: usize) -> Result<bool, Error> {
        let available = self.precision().min(other.precision());
        if precision > available {
            return Err(Error::InsufficientPrecision {
                needed: precision,
                available,
            });
        }
        if self.field == other.field {
            return Ok(self.coefficients[..precision] == other.coefficients[..precision]);
        }
        if self.field.characteristic() != other.field.characteristic() {
            return Err(Error::FieldMismatch);
        }
        Ok(self.coefficients[..precision]
            .iter()
            .zip(&other.coefficients[..precision])
            .all(|(a, b)| a.same_value(b)))
    }
}

/// Cauchy product truncated to the smaller precision; weights add.
pub fn series_mul(f: &QSeries, g: &QSeries) -> Result<QSeries, Error> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    let m = f.precision().min(g.precision());
    let field = f.field;
    let mut out = vec![field.zero(); m];
    let (a, b) = (&f.coefficients[..m], &g.coefficients[..m]);
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b[..m - i].iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    Ok(QSeries {
        field,
        weight: f.weight + g.weight,
        coefficients: out,
    })
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[weight {}, {}] ", self.weight, self.field)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (n, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{c}q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{c}q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.precision())
    }
}
