use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::Prime;
use crate::Error;

/// Largest extension degree a [`Field`] can represent.
pub const MAX_DEGREE: usize = 4;

/// `F_p` or `F_p[x]/(m(x))` for a monic irreducible `m` of degree `d`.
///
/// Two fields compare equal exactly when `p`, `d` and the modulus agree, so
/// a `Field` doubles as the tag carried by every [`FieldElement`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
    degree: u8,
    /// Low coefficients `m_0 .. m_{d-1}` of the monic modulus. Unused for `d = 1`.
    modulus: [u32; MAX_DEGREE],
}

/// An element of a [`Field`], stored as a canonical polynomial of degree `< d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    coeffs: [u32; MAX_DEGREE],
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    if s >= p as u64 {
        (s - p as u64) as u32
    } else {
        s as u32
    }
}

#[inline]
fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

fn pow_mod(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Remainder of `a` modulo the monic polynomial `b` over `F_p`, both in
/// ascending coefficient order.
fn poly_rem_monic(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = sub_mod(r[shift + j], mul_mod(lead, bj, p), p);
            }
        }
        r.pop();
    }
    r
}

/// Brute-force irreducibility test: no monic factor of degree `1..=d/2`.
fn is_irreducible(monic: &[u32], p: u32) -> bool {
    let d = monic.len() - 1;
    for e in 1..=d / 2 {
        let count = (p as u64).pow(e as u32);
        for idx in 0..count {
            let mut factor = Vec::with_capacity(e + 1);
            let mut t = idx;
            for _ in 0..e {
                factor.push((t % p as u64) as u32);
                t /= p as u64;
            }
            factor.push(1);
            if poly_rem_monic(monic, &factor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    pub fn prime(p: Prime) -> Field {
        Field {
            p: p.get(),
            degree: 1,
            modulus: [0; MAX_DEGREE],
        }
    }

    /// `F_{p^d}` with the deterministic modulus: the monic irreducible
    /// `x^d + m_{d-1} x^{d-1} + ... + m_0` whose coefficient list
    /// `(m_0, m_1, ..., m_{d-1})` is lexicographically smallest.
    pub fn extension(p: Prime, degree: usize) -> Result<Field, Error> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::InvalidDegree(degree));
        }
        if degree == 1 {
            return Ok(Field::prime(p));
        }
        let pv = p.get() as u64;
        let count = pv.pow(degree as u32);
        // m_0 is the most significant digit of the enumeration index.
        for idx in 0..count {
            let mut low = [0u32; MAX_DEGREE];
            let mut t = idx;
            for j in (0..degree).rev() {
                low[j] = (t % pv) as u32;
                t /= pv;
            }
            if let Ok(f) = Field::with_modulus(p, &low[..degree]) {
                return Ok(f);
            }
        }
        Err(Error::InvalidDegree(degree))
    }

    /// Field with explicit modulus `x^d + low[d-1] x^{d-1} + ... + low[0]`.
    pub fn with_modulus(p: Prime, low: &[u32]) -> Result<Field, Error> {
        let degree = low.len();
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::InvalidDegree(degree));
        }
        if degree == 1 {
            return Ok(Field::prime(p));
        }
        let pv = p.get();
        let mut monic: Vec<u32> = low.iter().map(|&c| c % pv).collect();
        monic.push(1);
        if !is_irreducible(&monic, pv) {
            return Err(Error::ReducibleModulus(pv));
        }
        let mut modulus = [0; MAX_DEGREE];
        modulus[..degree].copy_from_slice(&monic[..degree]);
        Ok(Field {
            p: pv,
            degree: degree as u8,
            modulus,
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn characteristic_prime(&self) -> Prime {
        Prime(self.p)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree == 1
    }

    /// Full monic modulus in ascending order (`[0, 1]`, i.e. `x`, for `F_p`).
    pub fn modulus(&self) -> Vec<u32> {
        if self.degree == 1 {
            return alloc::vec![0, 1];
        }
        let mut m = self.modulus[..self.degree()].to_vec();
        m.push(1);
        m
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.degree as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: *self,
            coeffs: [0; MAX_DEGREE],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> FieldElement {
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[0] = (n % self.p as u64) as u32;
        FieldElement {
            field: *self,
            coeffs,
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_u64(n.rem_euclid(self.p as i64) as u64)
    }

    /// Element with the given polynomial coefficients (ascending).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, Error> {
        if coeffs.len() > self.degree() {
            return Err(Error::FieldMismatch);
        }
        let mut c = [0; MAX_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v % self.p;
        }
        Ok(FieldElement {
            field: *self,
            coeffs: c,
        })
    }

    /// The `index`-th element in enumeration order: `index = sum c_j p^j`.
    pub fn element(&self, index: u64) -> FieldElement {
        let mut c = [0; MAX_DEGREE];
        let mut t = index;
        for slot in c.iter_mut().take(self.degree()) {
            *slot = (t % self.p as u64) as u32;
            t /= self.p as u64;
        }
        FieldElement {
            field: *self,
            coeffs: c,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    /// Moves `x` into this field. Only elements of the same field or of the
    /// prime subfield `F_p` can be embedded.
    pub fn embed(&self, x: FieldElement) -> Result<FieldElement, Error> {
        if x.field == *self {
            return Ok(x);
        }
        if x.field.p != self.p || x.field.degree != 1 {
            return Err(Error::FieldMismatch);
        }
        Ok(self.from_u64(x.coeffs[0] as u64))
    }

    fn reduce_product(&self, prod: &mut [u64; 2 * MAX_DEGREE - 1]) -> [u32; MAX_DEGREE] {
        let d = self.degree();
        let p = self.p as u64;
        for v in prod.iter_mut() {
            *v %= p;
        }
        for i in (d..2 * d - 1).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..d {
                let sub = t * self.modulus[j] as u64 % p;
                prod[i - d + j] = (prod[i - d + j] + p - sub) % p;
            }
        }
        let mut out = [0; MAX_DEGREE];
        for j in 0..d {
            out[j] = prod[j] as u32;
        }
        out
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}[", self.p, self.degree)?;
            for (i, c) in self.modulus().iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("]")
        }
    }
}

impl FieldElement {
    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    /// Canonical coefficients, `d` of them.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs[..self.field.degree()]
    }

    /// The residue in `[0, p)` if the element lies in the prime subfield.
    pub fn prime_residue(&self) -> Option<u32> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Index in [`Field::element`] enumeration order.
    pub fn index(&self) -> u64 {
        self.coeffs()
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.field.p as u64 + c as u64)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn pow(self, mut exp: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `x^(q-2)`; `None` for zero.
    pub fn inverse(self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        if self.field.degree == 1 {
            let p = self.field.p;
            return Some(self.field.from_u64(pow_mod(self.coeffs[0], p as u64 - 2, p) as u64));
        }
        Some(self.pow(self.field.order() - 2))
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement, Error> {
        same_field(&self, &rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement, Error> {
        same_field(&self, &rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement, Error> {
        same_field(&self, &rhs)?;
        Ok(self * rhs)
    }

    /// Equality after embedding prime-subfield elements into the larger field.
    pub fn same_value(&self, other: &FieldElement) -> bool {
        if self.field == other.field {
            return self == other;
        }
        if self.field.p != other.field.p {
            return false;
        }
        match (self.prime_residue(), other.prime_residue()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

fn same_field(a: &FieldElement, b: &FieldElement) -> Result<(), Error> {
    if a.field == b.field {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}

#[inline]
#[track_caller]
fn assert_same(a: &FieldElement, b: &FieldElement) {
    assert!(a.field == b.field, "field mismatch: {} vs {}", a.field, b.field);
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(mut self, rhs: FieldElement) -> FieldElement {
        assert_same(&self, &rhs);
        let p = self.field.p;
        for j in 0..self.field.degree() {
            self.coeffs[j] = add_mod(self.coeffs[j], rhs.coeffs[j], p);
        }
        self
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn sub(mut self, rhs: FieldElement) -> FieldElement {
        assert_same(&self, &rhs);
        let p = self.field.p;
        for j in 0..self.field.degree() {
            self.coeffs[j] = sub_mod(self.coeffs[j], rhs.coeffs[j], p);
        }
        self
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.zero() - self
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert_same(&self, &rhs);
        let field = self.field;
        let d = field.degree();
        if d == 1 {
            let mut coeffs = [0; MAX_DEGREE];
            coeffs[0] = mul_mod(self.coeffs[0], rhs.coeffs[0], field.p);
            return FieldElement { field, coeffs };
        }
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        let p = field.p as u64;
        for i in 0..d {
            for j in 0..d {
                prod[i + j] = (prod[i + j] + self.coeffs[i] as u64 * rhs.coeffs[j] as u64) % p;
            }
        }
        FieldElement {
            field,
            coeffs: field.reduce_product(&mut prod),
        }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: FieldElement) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: FieldElement) {
        *self = *self * rhs;
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            f.write_str("[")?;
            for (i, c) in self.coeffs().iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("]")
        }
    }
}
