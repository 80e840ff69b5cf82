//! From a mod-p eigenform to a cuspidal eigenform with the same eigensystem,
//! at weight `w` or `w + p^2 - 1` where `w` is the filtration.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{primes_excluding, Prime};
use crate::hecke::{apply_tl, decompose_eigensystems, precision_budget, EigenformRecord, Eigensystem};
use crate::qseries::{delta_qexp, eisenstein_qexp, QSeries};
use crate::spaces::{filtration_with, BasisSource, DirectBasis};
use crate::Error;

/// The form fed into the pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Eisenstein(u32),
    Delta,
    /// Any q-series; its weight tag is taken as the weight.
    Explicit(QSeries),
}

impl Source {
    pub fn weight(&self) -> u32 {
        match self {
            Source::Eisenstein(k) => *k,
            Source::Delta => 12,
            Source::Explicit(f) => f.weight(),
        }
    }

    /// Truncated q-expansion mod p.
    pub fn qexp(&self, p: Prime, precision: usize) -> Result<QSeries, Error> {
        match self {
            Source::Eisenstein(k) => eisenstein_qexp(*k, p, precision),
            Source::Delta => delta_qexp(p, precision),
            Source::Explicit(f) => {
                if f.field().characteristic() != p.get() {
                    return Err(Error::FieldMismatch);
                }
                if f.precision() < precision {
                    return Err(Error::InsufficientPrecision {
                        needed: precision,
                        available: f.precision(),
                    });
                }
                f.truncate(precision)
            }
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Eisenstein(k) => write!(f, "eisenstein:{k}"),
            Source::Delta => f.write_str("delta"),
            Source::Explicit(s) => write!(f, "explicit:{}", s.weight()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub p: Prime,
    pub source: Source,
    pub weight: u32,
    pub filtration: u32,
    pub eigensystem: Eigensystem,
    pub source_is_cuspidal: bool,
    pub matched_weight: u32,
    pub matched: EigenformRecord,
    /// Number of records in the matched space carrying the same eigensystem.
    pub multiplicity: usize,
    pub primes: Vec<u32>,
    /// Precision of the basis in which the match was found.
    pub precision: usize,
}

impl Verdict {
    pub fn shift(&self) -> u32 {
        self.matched_weight - self.filtration
    }

    /// The matched normalized eigenform.
    pub fn qexpansion(&self) -> &QSeries {
        self.matched
            .eigenform
            .as_ref()
            .expect("matched records carry an eigenform")
    }
}

/// Eigenvalues of `f` at each prime, or `NotAnEigenform` at the first prime
/// where `T_l f` is not a multiple of `f`.
pub fn eigenvalues(f: &QSeries, p: Prime, primes: &[u32]) -> Result<Eigensystem, Error> {
    let lead = f.leading_index().ok_or(Error::ZeroForm)?;
    let mut values = Vec::with_capacity(primes.len());
    for &ell in primes {
        let t = apply_tl(f, ell, p)?;
        let m = t.precision();
        if lead >= m {
            return Err(Error::InsufficientPrecision {
                needed: lead * ell as usize + 1,
                available: f.precision(),
            });
        }
        let inv = f.coefficients()[lead]
            .inverse()
            .ok_or(Error::Internal("leading coefficient is zero"))?;
        let lambda = t.coefficients()[lead] * inv;
        if t != f.truncate(m)?.scale(lambda)? {
            return Err(Error::NotAnEigenform(ell));
        }
        values.push((ell, lambda));
    }
    Eigensystem::new(p, f.field(), values)
}

fn hecke_primes(p: Prime, bound: u32) -> Result<Vec<u32>, Error> {
    let primes = primes_excluding(bound, p);
    if primes.is_empty() {
        return Err(Error::NoPrimes(bound));
    }
    Ok(primes)
}

pub fn verify_theorem(p: Prime, source: &Source, prime_bound: u32) -> Result<Verdict, Error> {
    verify_theorem_with(&DirectBasis, p, source, prime_bound)
}

pub fn verify_theorem_with(
    bases: &dyn BasisSource,
    p: Prime,
    source: &Source,
    prime_bound: u32,
) -> Result<Verdict, Error> {
    if p.get() == 2 {
        // the characteristic-2 statement shifts by a different period
        return Err(Error::Unsupported(2));
    }
    p.require_modular()?;
    let primes = hecke_primes(p, prime_bound)?;
    let ell_max = *primes.last().unwrap_or(&2);
    let k = source.weight();
    let f = source.qexp(p, precision_budget(k, ell_max))?;
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let phi = eigenvalues(&f, p, &primes)?;
    let report = filtration_with(bases, &f, p)?;
    let w = report.filtration;
    let source_is_cuspidal = f.coefficients()[0].is_zero();

    let mut saw_unresolved = false;
    for target in [w, w + p.get() * p.get() - 1] {
        let precision = precision_budget(target, ell_max);
        let space = bases.basis(target, p, precision, true)?;
        let records = decompose_eigensystems(&space, &primes)?;
        saw_unresolved |= records.iter().any(|r| !r.complete);
        let mut matches = records
            .into_iter()
            .filter(|r| r.complete && r.eigenform.is_some() && r.eigensystem.agrees_with(&phi));
        let Some(first) = matches.next() else {
            continue;
        };
        let multiplicity = 1 + matches.count();
        if (target == w) != source_is_cuspidal {
            return Err(Error::IffClauseViolation {
                w,
                matched_weight: target,
                source_is_cuspidal,
            });
        }
        return Ok(Verdict {
            p,
            source: source.clone(),
            weight: k,
            filtration: w,
            eigensystem: phi,
            source_is_cuspidal,
            matched_weight: target,
            matched: first,
            multiplicity,
            primes,
            precision,
        });
    }
    if saw_unresolved {
        Err(Error::UnresolvedEigensystem(w))
    } else {
        Err(Error::TheoremViolation {
            w,
            shifted: w + p.get() * p.get() - 1,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryEntry {
    pub weight: u32,
    /// Position of the record in the decomposition of `M_k`.
    pub index: usize,
    pub eigenform: QSeries,
    pub eigensystem: Eigensystem,
    pub filtration: u32,
    pub cuspidal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnresolvedEntry {
    pub weight: u32,
    pub index: usize,
    pub eigenspace_dimension: usize,
    pub generalized_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    pub p: Prime,
    pub k_max: u32,
    pub primes: Vec<u32>,
    pub entries: Vec<CorollaryEntry>,
    pub unresolved: Vec<UnresolvedEntry>,
    /// Entries with filtration above `p + 1` and nonzero constant term.
    pub violations: Vec<CorollaryEntry>,
}

pub fn corollary_sweep(p: Prime, k_max: u32, prime_bound: u32) -> Result<CorollaryReport, Error> {
    corollary_sweep_with(&DirectBasis, p, k_max, prime_bound)
}

pub fn corollary_sweep_with(
    bases: &dyn BasisSource,
    p: Prime,
    k_max: u32,
    prime_bound: u32,
) -> Result<CorollaryReport, Error> {
    p.require_modular()?;
    let primes = hecke_primes(p, prime_bound)?;
    let ell_max = *primes.last().unwrap_or(&2);
    let mut entries = Vec::new();
    let mut unresolved = Vec::new();
    for k in (0..=k_max).step_by(2) {
        let space = bases.basis(k, p, precision_budget(k, ell_max), false)?;
        for (index, record) in decompose_eigensystems(&space, &primes)?.into_iter().enumerate() {
            match (record.resolved, record.eigenform) {
                (true, Some(eigenform)) => {
                    let report = filtration_with(bases, &eigenform, p)?;
                    entries.push(CorollaryEntry {
                        weight: k,
                        index,
                        cuspidal: eigenform.coefficients()[0].is_zero(),
                        eigenform,
                        eigensystem: record.eigensystem,
                        filtration: report.filtration,
                    });
                }
                _ => unresolved.push(UnresolvedEntry {
                    weight: k,
                    index,
                    eigenspace_dimension: record.eigenspace_dimension,
                    generalized_dimension: record.generalized_dimension,
                }),
            }
        }
    }
    let violations = entries
        .iter()
        .filter(|e| e.filtration > p.get() + 1 && !e.cuspidal)
        .cloned()
        .collect();
    Ok(CorollaryReport {
        p,
        k_max,
        primes,
        entries,
        unresolved,
        violations,
    })
}

/// A reference case: `E_k` mod p, its filtration, the weight of the
/// matching cusp form and that form's nonzero coefficients `a_1..a_37`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceCase {
    pub p: u32,
    pub k: u32,
    pub filtration: u32,
    pub matched_weight: u32,
    pub nonzero: &'static [(usize, u32)],
}

/// Highest coefficient index compared by [`regression_examples`].
pub const REFERENCE_DEPTH: usize = 37;

pub const REFERENCE_CASES: [ReferenceCase; 5] = [
    ReferenceCase {
        p: 5,
        k: 4,
        filtration: 0,
        matched_weight: 24,
        nonzero: &[
            (1, 1), (2, 4), (3, 3), (4, 3), (6, 2), (7, 4), (9, 2), (11, 2), (12, 4),
            (13, 3), (14, 1), (16, 1), (17, 4), (18, 3), (21, 2), (22, 3), (23, 3),
            (26, 2), (28, 2), (31, 2), (32, 4), (33, 1), (34, 1), (36, 1), (37, 4),
        ],
    },
    ReferenceCase {
        p: 5,
        k: 6,
        filtration: 6,
        matched_weight: 30,
        nonzero: &[
            (1, 1), (2, 3), (3, 4), (4, 2), (6, 2), (7, 3), (9, 3), (11, 2), (12, 3),
            (13, 4), (14, 4), (16, 1), (17, 3), (18, 4), (21, 2), (22, 1), (23, 4),
            (26, 2), (28, 1), (31, 2), (32, 3), (33, 3), (34, 4), (36, 1), (37, 3),
        ],
    },
    ReferenceCase {
        p: 7,
        k: 4,
        filtration: 4,
        matched_weight: 52,
        nonzero: &[
            (1, 1), (2, 2), (4, 3), (8, 4), (9, 1), (11, 2), (16, 5), (18, 2), (22, 4),
            (23, 2), (25, 1), (29, 2), (32, 6), (36, 3), (37, 2),
        ],
    },
    ReferenceCase {
        p: 7,
        k: 6,
        filtration: 0,
        matched_weight: 48,
        nonzero: &[
            (1, 1), (2, 5), (3, 6), (5, 4), (6, 2), (8, 1), (9, 3), (10, 6), (11, 3),
            (15, 3), (16, 5), (17, 6), (18, 1), (19, 4), (22, 1), (23, 5), (24, 6),
            (25, 6), (27, 2), (29, 2), (30, 1), (31, 6), (33, 4), (34, 2), (37, 5),
        ],
    },
    ReferenceCase {
        p: 7,
        k: 8,
        filtration: 8,
        matched_weight: 56,
        nonzero: &[
            (1, 1), (2, 3), (3, 4), (5, 6), (6, 5), (8, 1), (9, 6), (10, 4), (11, 5),
            (15, 3), (16, 3), (17, 4), (18, 4), (19, 6), (22, 1), (23, 3), (24, 4),
            (25, 3), (27, 5), (29, 2), (30, 2), (31, 4), (33, 6), (34, 5), (37, 3),
        ],
    },
];

impl ReferenceCase {
    /// `a_1..a_37` with the omitted terms filled in as zeros.
    pub fn expected(&self) -> Vec<u32> {
        let mut out = alloc::vec![0; REFERENCE_DEPTH];
        for &(n, a) in self.nonzero {
            out[n - 1] = a;
        }
        out
    }
}

/// `(n, expected a_n, computed a_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientDiff {
    pub n: usize,
    pub expected: u32,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub case: ReferenceCase,
    pub verdict: Option<Verdict>,
    pub error: Option<Error>,
    pub filtration_ok: bool,
    pub weight_ok: bool,
    pub diffs: Vec<CoefficientDiff>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.filtration_ok && self.weight_ok && self.diffs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegressionReport {
    pub cases: Vec<CaseOutcome>,
}

impl RegressionReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseOutcome::passed)
    }
}

fn compare(case: &ReferenceCase, form: &QSeries) -> Vec<CoefficientDiff> {
    let field = form.field();
    case.expected()
        .into_iter()
        .enumerate()
        .filter_map(|(i, expected)| {
            let n = i + 1;
            match form.coefficient(n) {
                Some(c) if c.same_value(&field.from_u64(expected as u64)) => None,
                Some(c) => Some(CoefficientDiff {
                    n,
                    expected,
                    found: alloc::format!("{c}"),
                }),
                None => Some(CoefficientDiff {
                    n,
                    expected,
                    found: String::from("missing"),
                }),
            }
        })
        .collect()
}

pub fn regression_examples() -> RegressionReport {
    regression_examples_with(&DirectBasis)
}

pub fn regression_examples_with(bases: &dyn BasisSource) -> RegressionReport {
    let cases = REFERENCE_CASES
        .iter()
        .map(|case| {
            let outcome = Prime::new(case.p)
                .and_then(|p| verify_theorem_with(bases, p, &Source::Eisenstein(case.k), REFERENCE_DEPTH as u32));
            match outcome {
                Ok(verdict) => CaseOutcome {
                    case: *case,
                    filtration_ok: verdict.filtration == case.filtration,
                    weight_ok: verdict.matched_weight == case.matched_weight,
                    diffs: compare(case, verdict.qexpansion()),
                    verdict: Some(verdict),
                    error: None,
                },
                Err(e) => CaseOutcome {
                    case: *case,
                    verdict: None,
                    error: Some(e),
                    filtration_ok: false,
                    weight_ok: false,
                    diffs: Vec::new(),
                },
            }
        })
        .collect();
    RegressionReport { cases }
}
