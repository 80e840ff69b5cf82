//! Hecke operators `T_l` on q-expansions and on Miller coordinates, and the
//! splitting of a form space into simultaneous eigensystems.

use alloc::vec::Vec;

use crate::field::{find_roots, is_prime, Field, FieldElement, Prime};
use crate::linalg::Matrix;
use crate::qseries::QSeries;
use crate::spaces::{sturm_bound, FormSpace};
use crate::Error;

/// `l^(k-1)` in `F_p`, with the exponent read mod `p - 1` so that `k = 0`
/// gives `l^(-1)`.
fn ell_power(ell: u32, k: u32, field: Field) -> FieldElement {
    let order = field.characteristic() as i64 - 1;
    let exp = (k as i64 - 1).rem_euclid(order) as u64;
    field.from_u64(ell as u64).pow(exp)
}

fn check_ell(ell: u32, p: Prime) -> Result<(), Error> {
    if !is_prime(ell as u64) {
        return Err(Error::NotPrime(ell as u64));
    }
    if ell == p.get() {
        return Err(Error::EllEqualsP(ell));
    }
    Ok(())
}

/// Coefficient count that certifies a `T_l` image at weight `k`.
pub fn required_precision(k: u32, ell: u32) -> usize {
    ell as usize * (sturm_bound(k) + 1)
}

/// Precision at which to build a weight-`k` basis when the largest Hecke
/// prime in play is `ell_max`.
pub fn precision_budget(k: u32, ell_max: u32) -> usize {
    required_precision(k, ell_max) + 1
}

/// `a_n(T_l f) = a_{nl}(f) + l^(k-1) a_{n/l}(f)`, to precision `(m-1)/l + 1`.
pub fn apply_tl(f: &QSeries, ell: u32, p: Prime) -> Result<QSeries, Error> {
    check_ell(ell, p)?;
    if f.field().characteristic() != p.get() {
        return Err(Error::FieldMismatch);
    }
    let field = f.field();
    let m = f.precision();
    let out_len = (m - 1) / ell as usize + 1;
    let lk = field.embed(ell_power(ell, f.weight(), Field::prime(p)))?;
    let a = f.coefficients();
    let l = ell as usize;
    let coeffs = (0..out_len)
        .map(|n| {
            let mut c = a[n * l];
            if n % l == 0 {
                c += lk * a[n / l];
            }
            c
        })
        .collect();
    QSeries::new(field, f.weight(), coeffs)
}

/// Matrix of `T_l` in Miller coordinates; column `i` is the image of `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub ell: u32,
    pub weight: u32,
    pub cuspidal: bool,
    pub matrix: Matrix,
}

pub fn hecke_matrix(space: &FormSpace, ell: u32) -> Result<HeckeMatrix, Error> {
    let p = space.p();
    check_ell(ell, p)?;
    let needed = required_precision(space.weight(), ell);
    if space.precision() < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: space.precision(),
        });
    }
    let mut columns = Vec::with_capacity(space.dimension());
    for f in space.basis() {
        let image = apply_tl(f, ell, p)?;
        let coords = space
            .coordinates(&image, image.precision().min(space.precision()))?
            .ok_or(Error::Internal("T_l image left the space"))?;
        columns.push(coords);
    }
    Ok(HeckeMatrix {
        ell,
        weight: space.weight(),
        cuspidal: space.is_cuspidal(),
        matrix: Matrix::from_columns(space.field(), space.dimension(), &columns)?,
    })
}

/// Hecke eigenvalues at primes `l != p`, all in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigensystem {
    p: Prime,
    field: Field,
    values: Vec<(u32, FieldElement)>,
}

impl Eigensystem {
    pub fn new(p: Prime, field: Field, values: Vec<(u32, FieldElement)>) -> Result<Self, Error> {
        if field.characteristic() != p.get() {
            return Err(Error::FieldMismatch);
        }
        for w in values.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::DimensionMismatch("eigensystem primes must increase"));
            }
        }
        for &(ell, v) in &values {
            check_ell(ell, p)?;
            if v.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(Eigensystem { p, field, values })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn values(&self) -> &[(u32, FieldElement)] {
        &self.values
    }

    pub fn primes(&self) -> impl Iterator<Item = u32> + '_ {
        self.values.iter().map(|&(l, _)| l)
    }

    pub fn value(&self, ell: u32) -> Option<FieldElement> {
        self.values.iter().find(|&&(l, _)| l == ell).map(|&(_, v)| v)
    }

    /// Same primes and the same eigenvalue at each, allowing one side to
    /// live in the prime subfield of the other.
    pub fn agrees_with(&self, other: &Eigensystem) -> bool {
        self.p == other.p
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.0 == b.0 && a.1.same_value(&b.1))
    }
}

/// `T_l -> 1 + l^(k-1)` mod p.
pub fn eisenstein_eigensystem(k: u32, p: Prime, primes: &[u32]) -> Result<Eigensystem, Error> {
    p.require_modular()?;
    let field = Field::prime(p);
    let values = primes
        .iter()
        .map(|&ell| (ell, field.one() + ell_power(ell, k, field)))
        .collect();
    Eigensystem::new(p, field, values)
}

/// One piece of a Hecke decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenformRecord {
    pub eigensystem: Eigensystem,
    /// Normalized so its first nonzero coefficient is 1. Present whenever a
    /// common eigenvector was found; a representative when
    /// `eigenspace_dimension > 1`.
    pub eigenform: Option<QSeries>,
    pub weight: u32,
    pub cuspidal: bool,
    /// True when the common eigenspace is one-dimensional.
    pub resolved: bool,
    /// False when splitting stopped because eigenvalues needed an extension
    /// beyond the degree cap; the eigensystem then lists only the primes
    /// processed before that.
    pub complete: bool,
    pub eigenspace_dimension: usize,
    pub generalized_dimension: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Largest extension degree tried for eigenvalues.
    pub max_degree: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { max_degree: 2 }
    }
}

struct Piece {
    field: Field,
    /// Columns span the piece, in Miller coordinates.
    basis: Matrix,
    values: Vec<(u32, FieldElement)>,
    stalled: bool,
}

/// Matrix of `t` restricted to the invariant subspace spanned by `basis`.
fn restrict(t: &Matrix, basis: &Matrix) -> Result<Matrix, Error> {
    basis
        .solve(&t.mul(basis)?)
        .ok_or(Error::Internal("subspace is not Hecke-stable"))
}

struct Split {
    field: Field,
    roots: Vec<FieldElement>,
    kernels: Vec<Matrix>,
    covered: usize,
}

fn split_over(chi: &[FieldElement], restricted: &Matrix, field: Field) -> Result<Split, Error> {
    let r = restricted.rows();
    let local = restricted.embed(field)?;
    let roots = find_roots(chi, &field)?;
    let mut kernels = Vec::with_capacity(roots.len());
    let mut covered = 0;
    for &lambda in &roots {
        let k = local.shift(lambda).pow(r as u32).kernel();
        covered += k.cols();
        kernels.push(k);
    }
    Ok(Split {
        field,
        roots,
        kernels,
        covered,
    })
}

fn split_piece(
    piece: Piece,
    t: &Matrix,
    ell: u32,
    options: &DecomposeOptions,
    out: &mut Vec<Piece>,
) -> Result<(), Error> {
    let r = piece.basis.cols();
    let restricted = restrict(&t.embed(piece.field)?, &piece.basis)?;
    let chi = restricted.charpoly();
    let mut best = split_over(&chi, &restricted, piece.field)?;
    if best.covered < r && piece.field.is_prime_field() {
        let p = piece.field.characteristic_prime();
        for degree in 2..=options.max_degree {
            let ext = Field::extension(p, degree)?;
            let candidate = split_over(&chi, &restricted, ext)?;
            let done = candidate.covered == r;
            if candidate.covered > best.covered {
                best = candidate;
            }
            if done {
                break;
            }
        }
    }
    let field = best.field;
    let basis = piece.basis.embed(field)?;
    let values: Vec<(u32, FieldElement)> = piece
        .values
        .iter()
        .map(|&(l, v)| Ok((l, field.embed(v)?)))
        .collect::<Result<_, Error>>()?;
    for (lambda, kernel) in best.roots.iter().zip(&best.kernels) {
        let mut child_values = values.clone();
        child_values.push((ell, *lambda));
        out.push(Piece {
            field,
            basis: basis.mul(kernel)?,
            values: child_values,
            stalled: false,
        });
    }
    if best.covered < r {
        let local = restricted.embed(field)?;
        let mut annihilator = Matrix::identity(field, r);
        for &lambda in &best.roots {
            annihilator = annihilator.mul(&local.shift(lambda).pow(r as u32))?;
        }
        out.push(Piece {
            field,
            basis: basis.mul(&annihilator.image())?,
            values,
            stalled: true,
        });
    }
    Ok(())
}

/// Representative eigenform of the span of `columns` (Miller coordinates):
/// the first row of the q-expansion echelon form, normalized.
fn representative(space: &FormSpace, columns: &Matrix) -> Result<QSeries, Error> {
    let field = columns.field();
    let mut rows = Vec::with_capacity(columns.cols());
    for j in 0..columns.cols() {
        rows.push(space.combination(&columns.column(j))?.coefficients().to_vec());
    }
    let (echelon, _) = Matrix::from_rows(field, &rows)?.rref();
    let first = QSeries::new(field, space.weight(), echelon.row(0).to_vec())?;
    first
        .normalized()
        .ok_or(Error::Internal("zero eigenvector"))
}

pub fn decompose_eigensystems(space: &FormSpace, primes: &[u32]) -> Result<Vec<EigenformRecord>, Error> {
    decompose_with_options(space, primes, &DecomposeOptions::default())
}

pub fn decompose_with_options(
    space: &FormSpace,
    primes: &[u32],
    options: &DecomposeOptions,
) -> Result<Vec<EigenformRecord>, Error> {
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    let p = space.p();
    for &ell in &primes {
        check_ell(ell, p)?;
    }
    let n = space.dimension();
    if n == 0 {
        return Ok(Vec::new());
    }
    if let Some(&ell_max) = primes.last() {
        let needed = required_precision(space.weight(), ell_max);
        if space.precision() < needed {
            return Err(Error::InsufficientPrecision {
                needed,
                available: space.precision(),
            });
        }
    }
    let matrices: Vec<HeckeMatrix> = primes
        .iter()
        .map(|&ell| hecke_matrix(space, ell))
        .collect::<Result<_, _>>()?;

    let base = space.field();
    let mut pieces = Vec::from([Piece {
        field: base,
        basis: Matrix::identity(base, n),
        values: Vec::new(),
        stalled: false,
    }]);
    for h in &matrices {
        let mut next = Vec::new();
        for piece in pieces {
            if piece.stalled {
                next.push(piece);
            } else {
                split_piece(piece, &h.matrix, h.ell, options, &mut next)?;
            }
        }
        pieces = next;
    }

    let mut records = Vec::with_capacity(pieces.len());
    for piece in pieces {
        let field = piece.field;
        let r = piece.basis.cols();
        let eigensystem = Eigensystem::new(p, field, piece.values.clone())?;
        if piece.stalled {
            records.push(EigenformRecord {
                eigensystem,
                eigenform: None,
                weight: space.weight(),
                cuspidal: space.is_cuspidal(),
                resolved: false,
                complete: false,
                eigenspace_dimension: 0,
                generalized_dimension: r,
            });
            continue;
        }
        // common eigenspace inside the generalized one
        let mut stacked: Option<Matrix> = None;
        for (h, &(_, lambda)) in matrices.iter().zip(&piece.values) {
            let local = restrict(&h.matrix.embed(field)?, &piece.basis)?.shift(lambda);
            stacked = Some(match stacked {
                None => local,
                Some(s) => s.vstack(&local)?,
            });
        }
        let eigen = match stacked {
            Some(s) => s.kernel(),
            None => Matrix::identity(field, r),
        };
        let vectors = piece.basis.mul(&eigen)?;
        let eigenform = if vectors.cols() > 0 {
            Some(representative(space, &vectors)?)
        } else {
            None
        };
        records.push(EigenformRecord {
            eigensystem,
            eigenform,
            weight: space.weight(),
            cuspidal: space.is_cuspidal(),
            resolved: vectors.cols() == 1,
            complete: true,
            eigenspace_dimension: vectors.cols(),
            generalized_dimension: r,
        });
    }
    Ok(records)
}
