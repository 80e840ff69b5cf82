//! JSON encodings. Every integer is written as a decimal string.

use mmfp_core::field::{Field, FieldElement, Prime};
use mmfp_core::hecke::{EigenformRecord, Eigensystem, HeckeMatrix};
use mmfp_core::verifier::{CorollaryReport, RegressionReport, Verdict};
use mmfp_core::{Error, FiltrationReport, FormSpace, QSeries};
use serde::Deserialize;
use serde_json::{json, Value};

fn s<T: ToString>(n: T) -> Value {
    Value::String(n.to_string())
}

/// `"3"` in `F_p`, `["c0", "c1"]` in `F_{p^2}`.
pub fn element(x: &FieldElement) -> Value {
    match x.prime_residue() {
        Some(r) if x.field().is_prime_field() => s(r),
        _ => Value::Array(x.coeffs().iter().map(s).collect()),
    }
}

pub fn field(f: &Field) -> Value {
    json!({
        "p": s(f.characteristic()),
        "degree": s(f.degree()),
        "modulus": f.modulus().iter().map(s).collect::<Vec<_>>(),
    })
}

pub fn series(f: &QSeries) -> Value {
    Value::Array(f.coefficients().iter().map(element).collect())
}

pub fn eigensystem(e: &Eigensystem) -> Value {
    json!({
        "field": field(&e.field()),
        "values": e.values().iter().map(|(l, v)| json!({"ell": s(l), "value": element(v)})).collect::<Vec<_>>(),
    })
}

pub fn record(r: &EigenformRecord) -> Value {
    json!({
        "weight": s(r.weight),
        "cuspidal": r.cuspidal,
        "resolved": r.resolved,
        "complete": r.complete,
        "eigenspace_dimension": s(r.eigenspace_dimension),
        "generalized_dimension": s(r.generalized_dimension),
        "eigensystem": eigensystem(&r.eigensystem),
        "eigenform": r.eigenform.as_ref().map(series),
    })
}

pub fn basis(space: &FormSpace) -> Value {
    json!({
        "p": s(space.p()),
        "k": s(space.weight()),
        "cuspidal": space.is_cuspidal(),
        "precision": s(space.precision()),
        "dimension": s(space.dimension()),
        "rows": space.basis().iter().map(series).collect::<Vec<_>>(),
    })
}

pub fn hecke_matrix(h: &HeckeMatrix) -> Value {
    let m = &h.matrix;
    json!({
        "ell": s(h.ell),
        "k": s(h.weight),
        "cuspidal": h.cuspidal,
        "entries": (0..m.rows()).map(|i| m.row(i).iter().map(element).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn filtration(p: Prime, r: &FiltrationReport) -> Value {
    json!({
        "p": s(p),
        "weight": s(r.input_weight),
        "filtration": s(r.filtration),
        "hasse_power": s(r.hasse_power),
        "precision": s(r.precision),
    })
}

pub fn verdict(v: &Verdict) -> Value {
    json!({
        "p": s(v.p),
        "source": s(&v.source),
        "weight": s(v.weight),
        "filtration": s(v.filtration),
        "eigensystem": eigensystem(&v.eigensystem),
        "source_is_cuspidal": v.source_is_cuspidal,
        "matched_weight": s(v.matched_weight),
        "multiplicity": s(v.multiplicity),
        "qexpansion": series(v.qexpansion()),
        "primes": v.primes.iter().map(s).collect::<Vec<_>>(),
        "precision": s(v.precision),
    })
}

pub fn corollary(r: &CorollaryReport) -> Value {
    let entry = |e: &mmfp_core::verifier::CorollaryEntry| {
        json!({
            "k": s(e.weight),
            "id": s(e.index),
            "filtration": s(e.filtration),
            "cuspidal": e.cuspidal,
            "eigensystem": eigensystem(&e.eigensystem),
        })
    };
    json!({
        "p": s(r.p),
        "k_max": s(r.k_max),
        "primes": r.primes.iter().map(s).collect::<Vec<_>>(),
        "entries": r.entries.iter().map(entry).collect::<Vec<_>>(),
        "unresolved": r.unresolved.iter().map(|u| json!({
            "k": s(u.weight),
            "id": s(u.index),
            "eigenspace_dimension": s(u.eigenspace_dimension),
            "generalized_dimension": s(u.generalized_dimension),
        })).collect::<Vec<_>>(),
        "violations": r.violations.iter().map(entry).collect::<Vec<_>>(),
    })
}

pub fn regression(r: &RegressionReport) -> Value {
    json!({
        "passed": r.passed(),
        "cases": r.cases.iter().map(|c| json!({
            "p": s(c.case.p),
            "k": s(c.case.k),
            "passed": c.passed(),
            "filtration": c.verdict.as_ref().map(|v| s(v.filtration)),
            "matched_weight": c.verdict.as_ref().map(|v| s(v.matched_weight)),
            "error": c.error.as_ref().map(s),
            "diffs": c.diffs.iter().map(|d| json!({
                "n": s(d.n), "expected": s(d.expected), "found": d.found,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// An integer given either as a JSON number or a decimal string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Number(u64),
    Text(String),
}

impl Int {
    pub fn value(&self) -> Result<u64, String> {
        match self {
            Int::Number(n) => Ok(*n),
            Int::Text(t) => t.trim().parse().map_err(|_| format!("not an integer: {t:?}")),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Prime(Int),
    Pair([Int; 2]),
}

/// `{weight, p, coefficients}`; coefficients are residues, or `[c0, c1]`
/// pairs in `F_{p^2}`.
#[derive(Clone, Debug, Deserialize)]
pub struct SeriesInput {
    pub weight: Int,
    pub p: Int,
    pub coefficients: Vec<Coefficient>,
}

#[derive(Debug)]
pub enum InputError {
    Format(String),
    Math(Error),
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError::Math(e)
    }
}

impl SeriesInput {
    pub fn parse(text: &str) -> Result<SeriesInput, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Format(e.to_string()))
    }

    pub fn to_series(&self) -> Result<QSeries, InputError> {
        let fmt = InputError::Format;
        let p = u32::try_from(self.p.value().map_err(fmt)?)
            .map_err(|_| InputError::Format("p out of range".into()))?;
        let weight = u32::try_from(self.weight.value().map_err(fmt)?)
            .map_err(|_| InputError::Format("weight out of range".into()))?;
        let p = Prime::modular(p)?;
        let extended = self.coefficients.iter().any(|c| matches!(c, Coefficient::Pair(_)));
        let field = if extended { Field::extension(p, 2)? } else { Field::prime(p) };
        let mut coeffs = Vec::with_capacity(self.coefficients.len());
        for c in &self.coefficients {
            let x = match c {
                Coefficient::Prime(n) => field.from_u64(n.value().map_err(fmt)?),
                Coefficient::Pair([a, b]) => {
                    let a = a.value().map_err(fmt)? % p.get() as u64;
                    let b = b.value().map_err(fmt)? % p.get() as u64;
                    field.from_coeffs(&[a as u32, b as u32])?
                }
            };
            coeffs.push(x);
        }
        Ok(QSeries::new(field, weight, coeffs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elements_encode_as_strings_or_pairs() {
        let p = Prime::new(7).unwrap();
        assert_eq!(element(&Field::prime(p).from_u64(12)), json!("5"));
        let f49 = Field::extension(p, 2).unwrap();
        assert_eq!(element(&f49.from_coeffs(&[3, 4]).unwrap()), json!(["3", "4"]));
        assert_eq!(field(&f49)["modulus"], json!(["1", "0", "1"]));
    }

    #[test]
    fn series_input_accepts_numbers_strings_and_pairs() {
        let s = SeriesInput::parse(r#"{"weight": "12", "p": 5, "coefficients": [0, "1", 4]}"#)
            .unwrap()
            .to_series()
            .unwrap();
        assert_eq!(s.weight(), 12);
        assert!(s.field().is_prime_field());
        assert_eq!(series(&s), json!(["0", "1", "4"]));

        let s = SeriesInput::parse(r#"{"weight": 4, "p": "7", "coefficients": [1, [0, 1]]}"#)
            .unwrap()
            .to_series()
            .unwrap();
        assert_eq!(s.field().degree(), 2);
        assert_eq!(series(&s), json!([["1", "0"], ["0", "1"]]));

        assert!(matches!(SeriesInput::parse("{}"), Err(InputError::Format(_))));
        let bad = SeriesInput::parse(r#"{"weight": 4, "p": 4, "coefficients": [1]}"#).unwrap();
        assert!(matches!(bad.to_series(), Err(InputError::Math(Error::NotPrime(4)))));
    }
}
