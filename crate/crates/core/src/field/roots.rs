use alloc::vec::Vec;

use super::{Field, FieldElement};
use crate::Error;

pub const DEFAULT_ROOT_DEGREE_BOUND: usize = 64;

/// Horner evaluation of `poly` (ascending coefficients, already in `x`'s field).
pub fn evaluate(poly: &[FieldElement], x: FieldElement) -> FieldElement {
    poly.iter()
        .rev()
        .fold(x.field().zero(), |acc, &c| acc * x + c)
}

/// All roots of `poly` in `field`, in enumeration order, each once.
pub fn find_roots(poly: &[FieldElement], field: &Field) -> Result<Vec<FieldElement>, Error> {
    find_roots_bounded(poly, field, DEFAULT_ROOT_DEGREE_BOUND)
}

/// [`find_roots`] with an explicit degree bound. Coefficients from the prime
/// subfield are embedded into `field`.
pub fn find_roots_bounded(
    poly: &[FieldElement],
    field: &Field,
    bound: usize,
) -> Result<Vec<FieldElement>, Error> {
    let coeffs: Vec<FieldElement> = poly
        .iter()
        .map(|&c| field.embed(c))
        .collect::<Result<_, _>>()?;
    let degree = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or(Error::ZeroPolynomial)?;
    if degree > bound {
        return Err(Error::DegreeTooLarge { degree, bound });
    }
    let coeffs = &coeffs[..=degree];
    Ok(field
        .elements()
        .filter(|&x| evaluate(coeffs, x).is_zero())
        .collect())
}
