use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// A rational prime, checked by trial division at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(pub(crate) u32);

impl Prime {
    pub fn new(value: u32) -> Result<Self, Error> {
        if is_prime(value as u64) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value as u64))
        }
    }

    /// Like [`Prime::new`], but also rejects 2 and 3.
    pub fn modular(value: u32) -> Result<Self, Error> {
        Prime::new(value)?.require_modular()
    }

    pub fn require_modular(self) -> Result<Self, Error> {
        if self.0 < 5 {
            Err(Error::Unsupported(self.0))
        } else {
            Ok(self)
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `l <= bound` with `l != p`, in increasing order.
pub fn primes_excluding(bound: u32, p: Prime) -> Vec<u32> {
    (2..=bound)
        .filter(|&l| l != p.get() && is_prime(l as u64))
        .collect()
}
