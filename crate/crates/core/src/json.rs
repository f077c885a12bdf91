//! Stable JSON encodings of series, reports, data and monomials.
//!
//! Rationals are strings `"num/den"` (integers without the slash) and
//! coefficients are decimal strings. Terms are sorted by `q`, then
//! lexicographically by `y`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quasiparticle::QPMonomial;
use crate::rational::{format_rational, parse_rational, Q};
use crate::root_datum::TwistedRootDatum;
use crate::series::{Exponent, GradedSeries};
use crate::verification::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub series: String,
    pub rank: usize,
    pub k0: u32,
    pub kj: u32,
    pub object: String,
    pub qmax: String,
    pub denominator: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub q: String,
    pub y: Vec<String>,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub meta: SeriesMeta,
    pub terms: Vec<Term>,
}

fn rationals(v: &[Q]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn series_document(series: &GradedSeries, meta: SeriesMeta) -> SeriesDocument {
    // the series map is already ordered by (q, y)
    let terms = series
        .iter()
        .map(|(e, c)| Term { q: format_rational(&e.q), y: rationals(&e.y), c: c.to_string() })
        .collect();
    SeriesDocument { meta: SeriesMeta { denominator: series.denominator(), ..meta }, terms }
}

pub fn series_to_json(series: &GradedSeries, meta: SeriesMeta) -> String {
    serde_json::to_string(&series_document(series, meta)).expect("series documents always serialize")
}

/// Inverse of [`series_to_json`]; the declared denominator is re-checked.
pub fn series_from_json(text: &str) -> Result<(SeriesMeta, GradedSeries)> {
    let doc: SeriesDocument =
        serde_json::from_str(text).map_err(|e| Error::Precondition(format!("malformed series JSON: {e}")))?;
    let qmax = parse_rational(&doc.meta.qmax)?;
    let ncolors = doc.terms.first().map_or(doc.meta.rank, |t| t.y.len());
    let mut series = GradedSeries::zero(ncolors, qmax).with_denominator(doc.meta.denominator)?;
    for t in &doc.terms {
        let y = t.y.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        let c: BigInt = t.c.parse().map_err(|_| Error::Precondition(format!("malformed coefficient `{}`", t.c)))?;
        series.insert(Exponent::new(parse_rational(&t.q)?, y), c)?;
    }
    Ok((doc.meta, series))
}

#[derive(Debug, Clone, Serialize)]
struct ReportJson<'a> {
    check: &'a str,
    status: String,
    series: Option<String>,
    rank: Option<usize>,
    k0: Option<u32>,
    kj: Option<u32>,
    qmax: Option<String>,
    seed: Option<u64>,
    trials: Option<usize>,
    terms_compared: usize,
    witness: Option<WitnessJson>,
}

#[derive(Debug, Clone, Serialize)]
struct WitnessJson {
    q: String,
    y: Vec<String>,
    lhs: String,
    rhs: String,
}

/// Report as a JSON object. The elapsed time is left out so that the output
/// is identical across runs.
pub fn report_to_json(report: &VerificationReport) -> String {
    let p = &report.parameters;
    let doc = ReportJson {
        check: &report.check_name,
        status: report.status.to_string(),
        series: p.series.map(|s| s.to_string()),
        rank: p.rank,
        k0: p.weight.map(|w| w.k0),
        kj: p.weight.map(|w| w.kj),
        qmax: p.qmax.as_ref().map(format_rational),
        seed: p.seed,
        trials: p.trials,
        terms_compared: report.terms_compared,
        witness: report.witness.as_ref().map(|w| WitnessJson {
            q: format_rational(&w.exponent.q),
            y: rationals(&w.exponent.y),
            lhs: w.left.to_string(),
            rhs: w.right.to_string(),
        }),
    };
    serde_json::to_string(&doc).expect("reports always serialize")
}

#[derive(Debug, Clone, Serialize)]
struct OrbitJson {
    a: Vec<i64>,
    halfnorm: String,
}

#[derive(Debug, Clone, Serialize)]
struct DatumJson {
    series: String,
    rank: usize,
    gram0: Vec<Vec<String>>,
    mu: Vec<String>,
    j_node: usize,
    gamma: Vec<String>,
    orbits: Vec<OrbitJson>,
}

/// `j_node` is 1-based, as in the usual node labelling.
pub fn datum_to_json(datum: &TwistedRootDatum) -> String {
    let doc = DatumJson {
        series: datum.series.to_string(),
        rank: datum.l,
        gram0: datum.gram0.iter().map(|r| rationals(r)).collect(),
        mu: rationals(&datum.mu),
        j_node: datum.j_node(),
        gamma: rationals(&datum.gamma_coords),
        orbits: datum
            .orbit_projections()
            .iter()
            .map(|o| OrbitJson { a: o.a.clone(), halfnorm: format_rational(&o.halfnorm) })
            .collect(),
    };
    serde_json::to_string(&doc).expect("data always serialize")
}

#[derive(Debug, Clone, Serialize)]
struct MonomialJson {
    charges: Vec<Vec<u32>>,
    energies: Vec<Vec<String>>,
    charge_type: Vec<Vec<u32>>,
    dual_charge_type: Vec<Vec<u32>>,
    total_energy: String,
}

/// One basis monomial; `energies` are the negated modes.
pub fn monomial_to_json(m: &QPMonomial) -> String {
    let l = m.ncolors();
    let doc = MonomialJson {
        charges: (0..l).map(|i| m.charge_type(i)).collect(),
        energies: (0..l).map(|i| m.color(i).iter().map(|p| format_rational(&-p.mode)).collect()).collect(),
        charge_type: (0..l).map(|i| m.charge_type(i)).collect(),
        dual_charge_type: (0..l).map(|i| m.dual_charge_type(i)).collect(),
        total_energy: format_rational(&m.total_energy()),
    };
    serde_json::to_string(&doc).expect("monomials always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::ch_principal_standard;
    use crate::rational::{q, qi};
    use crate::root_datum::{RectangularWeight, RootSeries};

    fn meta() -> SeriesMeta {
        SeriesMeta {
            series: "A".into(),
            rank: 2,
            k0: 1,
            kj: 0,
            object: "psp-std".into(),
            qmax: "5".into(),
            denominator: 0,
        }
    }

    #[test]
    fn schema_layout() {
        let d = TwistedRootDatum::build(RootSeries::A, 2).unwrap();
        let s = ch_principal_standard(&d, &RectangularWeight::new(1, 0).unwrap(), q(1, 2)).unwrap();
        let text = series_to_json(&s, SeriesMeta { qmax: "1/2".into(), ..meta() });
        assert_eq!(
            text,
            r#"{"meta":{"series":"A","rank":2,"k0":1,"kj":0,"object":"psp-std","qmax":"1/2","denominator":4},"terms":[{"q":"0","y":["0","0"],"c":"1"},{"q":"1/2","y":["1","0"],"c":"1"},{"q":"1/2","y":["1","1"],"c":"1"}]}"#
        );
    }

    #[test]
    fn round_trip() {
        let d = TwistedRootDatum::build(RootSeries::D, 2).unwrap();
        let s = ch_principal_standard(&d, &RectangularWeight::new(1, 1).unwrap(), qi(3)).unwrap();
        let m = SeriesMeta { qmax: "3".into(), ..meta() };
        let (back_meta, back) = series_from_json(&series_to_json(&s, m)).unwrap();
        assert_eq!(back_meta.denominator, s.denominator());
        assert_eq!(back, s);
        assert!(series_from_json("{").is_err());
    }
}
