//! Named identity checks, each pairing two independent computations.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characters::{self, CharacterObject, CharacterRequest, Method};
use crate::error::{Error, Result};
use crate::fixtures::{paper_example, PaperExample};
use crate::linalg;
use crate::quasiparticle::{conjugate, dual_rows, min_pairing, minsum_quadratic};
use crate::rational::{qi, Q};
use crate::root_datum::{RectangularWeight, RootSeries, TwistedRootDatum};
use crate::series::{Exponent, GradedSeries, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Pass,
    Fail,
    InsufficientPrecision,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::InsufficientPrecision => "insufficient-precision",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Parameters {
    pub series: Option<RootSeries>,
    pub rank: Option<usize>,
    pub weight: Option<RectangularWeight>,
    pub qmax: Option<Q>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub check_name: String,
    pub parameters: Parameters,
    pub status: CheckStatus,
    /// First disagreement in term order; present exactly when the check fails.
    pub witness: Option<Witness>,
    pub terms_compared: usize,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.check_name, self.status)?;
        let p = &self.parameters;
        if let (Some(s), Some(l)) = (p.series, p.rank) {
            write!(f, " {s}{l}")?;
        }
        if let Some(w) = p.weight {
            write!(f, " {w}")?;
        }
        if let Some(q) = p.qmax {
            write!(f, " qmax={q}")?;
        }
        if let Some(s) = p.seed {
            write!(f, " seed={s}")?;
        }
        if let Some(t) = p.trials {
            write!(f, " trials={t}")?;
        }
        write!(f, " terms={} time={:.3}s", self.terms_compared, self.elapsed.as_secs_f64())?;
        if let Some(w) = &self.witness {
            let y: Vec<String> = w.exponent.y.iter().map(ToString::to_string).collect();
            write!(f, " witness q^{} y=({}) {} != {}", w.exponent.q, y.join(","), w.left, w.right)?;
        }
        Ok(())
    }
}

/// A check together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Corollary { series: RootSeries, rank: usize, qmax: Q },
    /// Negative control: the product over all roots instead of orbits.
    CorollaryAllRoots { series: RootSeries, rank: usize, qmax: Q },
    Psp { series: RootSeries, rank: usize, weight: RectangularWeight, qmax: Q },
    Verma { series: RootSeries, rank: usize, qmax: Q },
    Para { series: RootSeries, rank: usize, weight: RectangularWeight, qmax: Q },
    ParaExamples { qmax: Q },
    StandardExamples { qmax: Q },
    LevelOne { qmax: Q },
    Minsum { seed: u64, trials: usize },
}

pub const CHECK_NAMES: [&str; 8] =
    ["corollary", "psp", "verma", "para", "para-examples", "minsum", "level-one", "std-examples"];

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Corollary { .. } => "corollary",
            Check::CorollaryAllRoots { .. } => "corollary-all-roots",
            Check::Psp { .. } => "psp",
            Check::Verma { .. } => "verma",
            Check::Para { .. } => "para",
            Check::ParaExamples { .. } => "para-examples",
            Check::StandardExamples { .. } => "std-examples",
            Check::LevelOne { .. } => "level-one",
            Check::Minsum { .. } => "minsum",
        }
    }

    pub fn run(&self) -> Result<VerificationReport> {
        match *self {
            Check::Corollary { series, rank, qmax } => verify_corollary(&TwistedRootDatum::build(series, rank)?, qmax),
            Check::CorollaryAllRoots { series, rank, qmax } => {
                verify_corollary_all_roots(&TwistedRootDatum::build(series, rank)?, qmax)
            }
            Check::Psp { series, rank, weight, qmax } => verify_psp(&TwistedRootDatum::build(series, rank)?, &weight, qmax),
            Check::Verma { series, rank, qmax } => verify_verma(&TwistedRootDatum::build(series, rank)?, qmax),
            Check::Para { series, rank, weight, qmax } => {
                verify_para(&TwistedRootDatum::build(series, rank)?, &weight, qmax)
            }
            Check::ParaExamples { qmax } => verify_para_examples(qmax),
            Check::StandardExamples { qmax } => verify_standard_examples(qmax),
            Check::LevelOne { qmax } => verify_level_one(qmax),
            Check::Minsum { seed, trials } => verify_minsum(seed, trials),
        }
    }
}

/// The full suite at its default sizes.
pub fn default_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for series in [RootSeries::A, RootSeries::D] {
        out.push(Check::Corollary { series, rank: 2, qmax: qi(5) });
    }
    for series in [RootSeries::A, RootSeries::D] {
        for k in 1..=2 {
            for weight in RectangularWeight::all_of_level(k) {
                out.push(Check::Psp { series, rank: 2, weight, qmax: qi(4) });
            }
        }
    }
    for series in [RootSeries::A, RootSeries::D] {
        out.push(Check::Verma { series, rank: 2, qmax: qi(4) });
    }
    for series in [RootSeries::A, RootSeries::D] {
        for weight in RectangularWeight::all_of_level(2) {
            out.push(Check::Para { series, rank: 2, weight, qmax: qi(3) });
        }
    }
    out.push(Check::ParaExamples { qmax: qi(4) });
    out.push(Check::LevelOne { qmax: qi(3) });
    out.push(Check::Minsum { seed: 42, trials: 500 });
    out
}

fn datum_parameters(datum: &TwistedRootDatum, weight: Option<RectangularWeight>, qmax: Q) -> Parameters {
    Parameters { series: Some(datum.series), rank: Some(datum.l), weight, qmax: Some(qmax), ..Default::default() }
}

/// Compares two series to `qmax`; a precision shortfall becomes a status
/// rather than an error.
fn compare(
    name: &str,
    parameters: Parameters,
    start: Instant,
    lhs: &GradedSeries,
    rhs: &GradedSeries,
    qmax: Q,
) -> Result<VerificationReport> {
    let (status, witness, terms) = match lhs.equal_to_order(rhs, qmax) {
        Ok(c) if c.equal => (CheckStatus::Pass, None, c.terms_compared),
        Ok(c) => (CheckStatus::Fail, c.witness, c.terms_compared),
        Err(Error::InsufficientPrecision { .. }) => (CheckStatus::InsufficientPrecision, None, 0),
        Err(e) => return Err(e),
    };
    Ok(VerificationReport {
        check_name: name.to_string(),
        parameters,
        status,
        witness,
        terms_compared: terms,
        elapsed: start.elapsed(),
    })
}

/// Folds several reports into one: the first failure wins, term counts add.
fn combine(name: &str, parameters: Parameters, start: Instant, parts: Vec<VerificationReport>) -> VerificationReport {
    let mut status = CheckStatus::Pass;
    let mut witness = None;
    for p in &parts {
        match p.status {
            CheckStatus::Fail if status != CheckStatus::Fail => {
                status = CheckStatus::Fail;
                witness = p.witness.clone();
            }
            CheckStatus::InsufficientPrecision if status == CheckStatus::Pass => {
                status = CheckStatus::InsufficientPrecision;
            }
            _ => {}
        }
    }
    VerificationReport {
        check_name: name.to_string(),
        parameters,
        status,
        witness,
        terms_compared: parts.iter().map(|p| p.terms_compared).sum(),
        elapsed: start.elapsed(),
    }
}

/// Product over orbits of positive roots against the Verma fermionic sum.
pub fn verify_corollary(datum: &TwistedRootDatum, qmax: Q) -> Result<VerificationReport> {
    let start = Instant::now();
    let product = characters::ch_product_side(datum, qmax)?;
    let fermionic = characters::ch_principal_verma(datum, qmax)?;
    compare("corollary", datum_parameters(datum, None, qmax), start, &product, &fermionic, qmax)
}

/// The same comparison with one product factor per positive root; expected
/// to fail.
pub fn verify_corollary_all_roots(datum: &TwistedRootDatum, qmax: Q) -> Result<VerificationReport> {
    let start = Instant::now();
    let product = characters::ch_product_side_all_roots(datum, qmax)?;
    let fermionic = characters::ch_principal_verma(datum, qmax)?;
    compare("corollary-all-roots", datum_parameters(datum, None, qmax), start, &product, &fermionic, qmax)
}

/// Enumerated principal-subspace basis against its fermionic sum.
pub fn verify_psp(datum: &TwistedRootDatum, w: &RectangularWeight, qmax: Q) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut req = CharacterRequest::new(datum.clone(), *w, CharacterObject::PrincipalStandard, qmax);
    let formula = req.evaluate()?;
    req.method = Method::Enumerate;
    let listed = req.evaluate()?;
    compare("psp", datum_parameters(datum, Some(*w), qmax), start, &listed, &formula, qmax)
}

pub fn verify_verma(datum: &TwistedRootDatum, qmax: Q) -> Result<VerificationReport> {
    let start = Instant::now();
    let w = RectangularWeight::new(1, 0)?;
    let mut req = CharacterRequest::new(datum.clone(), w, CharacterObject::PrincipalVerma, qmax);
    let formula = req.evaluate()?;
    req.method = Method::Enumerate;
    let listed = req.evaluate()?;
    compare("verma", datum_parameters(datum, None, qmax), start, &listed, &formula, qmax)
}

/// Conformal-energy tally of the enumerated parafermionic basis against
/// `sum_P D_P G_P B_P`, with color tracking on both sides.
pub fn verify_para(datum: &TwistedRootDatum, w: &RectangularWeight, qmax: Q) -> Result<VerificationReport> {
    let start = Instant::now();
    let formula = characters::ch_parafermionic(datum, w, qmax, true)?;
    let listed = characters::enumerate_parafermionic(datum, w, qmax, true)?;
    compare("para", datum_parameters(datum, Some(*w), qmax), start, &listed, &formula, qmax)
}

fn example_datum(example: PaperExample) -> Result<(TwistedRootDatum, RectangularWeight)> {
    let (series, rank, k0, kj) = example.parameters();
    let series = if series == 'A' { RootSeries::A } else { RootSeries::D };
    Ok((TwistedRootDatum::build(series, rank)?, RectangularWeight::new(k0, kj)?))
}

/// General formula specialised to one example against its hand-coded series.
pub fn verify_example(example: PaperExample, qmax: Q) -> Result<VerificationReport> {
    let start = Instant::now();
    let (datum, w) = example_datum(example)?;
    let general = if example.is_parafermionic() {
        characters::ch_parafermionic(&datum, &w, qmax, false)?
    } else {
        characters::ch_standard_module(&datum, &w, qmax)?
    };
    let literal = paper_example(example, qmax)?;
    let name = format!("example {example}");
    compare(&name, datum_parameters(&datum, Some(w), qmax), start, &general, &literal, qmax)
}

fn verify_examples(name: &str, examples: &[PaperExample], qmax: Q) -> Result<VerificationReport> {
    let start = Instant::now();
    let parts = examples.iter().map(|&e| verify_example(e, qmax)).collect::<Result<Vec<_>>>()?;
    let parameters = Parameters { qmax: Some(qmax), ..Default::default() };
    Ok(combine(name, parameters, start, parts))
}

pub fn verify_para_examples(qmax: Q) -> Result<VerificationReport> {
    let examples = [
        PaperExample::A5Para2L1,
        PaperExample::A5ParaL0L1,
        PaperExample::D3Para2L2,
        PaperExample::D3ParaL0L2,
    ];
    verify_examples("para-examples", &examples, qmax)
}

/// Level-one standard characters against their displayed theta-sum form.
pub fn verify_level_one(qmax: Q) -> Result<VerificationReport> {
    verify_examples("level-one", &[PaperExample::A5L1, PaperExample::D3L2], qmax)
}

/// The level-two standard characters of the examples.
pub fn verify_standard_examples(qmax: Q) -> Result<VerificationReport> {
    let examples = [PaperExample::A52L1, PaperExample::A5L0L1, PaperExample::D32L2, PaperExample::D3L0L2];
    verify_examples("std-examples", &examples, qmax)
}

/// Random `P`: both sides of `sum min(m,n) p^(m) p^(n) = sum_t (r^(t))^2`
/// per color pair, and `minsum_quadratic` against `1/2 sum_t R_t^T G R_t`.
/// A failing trial is reported with `q` the trial index, `y` the flattened
/// `P`, and both sides scaled by 4.
pub fn verify_minsum(seed: u64, trials: usize) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::Precondition("minsum needs at least one trial".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = [
        TwistedRootDatum::build(RootSeries::A, 2)?,
        TwistedRootDatum::build(RootSeries::D, 2)?,
        TwistedRootDatum::build(RootSeries::A, 3)?,
        TwistedRootDatum::build(RootSeries::D, 3)?,
    ];
    let mut witness = None;
    let mut compared = 0;
    for trial in 0..trials {
        let datum = &data[trial % data.len()];
        let depth = rng.gen_range(1..=5usize);
        let p: Vec<Vec<u64>> = (0..datum.l).map(|_| (0..depth).map(|_| rng.gen_range(0..5)).collect()).collect();
        let rows = dual_rows(&p);
        let mut ok = true;
        for a in 0..datum.l {
            for b in 0..datum.l {
                let lhs = min_pairing(&p[a], &p[b]);
                let rhs: u64 = rows.iter().map(|r| r[a] * r[b]).sum();
                ok &= lhs == rhs;
            }
        }
        // conjugation view: the charge partition of each color has the rows
        // as its conjugate
        for (a, pa) in p.iter().enumerate() {
            let mut charges = Vec::new();
            for (s, &x) in pa.iter().enumerate().rev() {
                charges.extend(std::iter::repeat_n(s as u32 + 1, x as usize));
            }
            let conj = conjugate(&charges)?;
            let column: Vec<u32> = rows.iter().map(|r| r[a] as u32).filter(|&x| x > 0).collect();
            ok &= conj == column;
        }
        let lhs = minsum_quadratic(datum, &p);
        let rhs: Q = rows
            .iter()
            .map(|r| {
                let rq: Vec<Q> = r.iter().map(|&x| qi(x as i64)).collect();
                linalg::quadratic_form(&datum.gram0, &rq)
            })
            .sum::<Q>()
            / qi(2);
        ok &= lhs == rhs;
        compared += 1;
        if !ok && witness.is_none() {
            let y = p.iter().flatten().map(|&x| qi(x as i64)).collect();
            witness = Some(Witness {
                exponent: Exponent::new(qi(trial as i64), y),
                left: BigInt::from((lhs * qi(4)).to_integer()),
                right: BigInt::from((rhs * qi(4)).to_integer()),
            });
        }
    }
    let status = if witness.is_some() { CheckStatus::Fail } else { CheckStatus::Pass };
    Ok(VerificationReport {
        check_name: "minsum".into(),
        parameters: Parameters { seed: Some(seed), trials: Some(trials), ..Default::default() },
        status,
        witness,
        terms_compared: compared,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn datum(series: RootSeries, l: usize) -> TwistedRootDatum {
        TwistedRootDatum::build(series, l).unwrap()
    }

    #[test]
    fn corollary_small_orders() {
        for s in [RootSeries::A, RootSeries::D] {
            let r = verify_corollary(&datum(s, 2), qi(2)).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.terms_compared > 0);
        }
    }

    #[test]
    fn all_roots_control_fails_at_first_short_root() {
        let r = verify_corollary_all_roots(&datum(RootSeries::A, 2), qi(1)).unwrap();
        assert_eq!(r.status, CheckStatus::Fail);
        let w = r.witness.unwrap();
        assert_eq!(w.exponent, Exponent::new(q(1, 2), vec![qi(1), qi(0)]));
        assert_eq!((w.left, w.right), (BigInt::from(2), BigInt::from(1)));
    }

    #[test]
    fn verma_at_order_zero_compares_constant_terms() {
        let r = verify_verma(&datum(RootSeries::A, 2), qi(0)).unwrap();
        assert!(r.passed());
        assert_eq!(r.terms_compared, 1);
    }

    #[test]
    fn level_one_para_is_trivial() {
        for w in RectangularWeight::all_of_level(1) {
            assert!(verify_para(&datum(RootSeries::D, 2), &w, qi(3)).unwrap().passed());
        }
    }

    #[test]
    fn minsum_is_deterministic() {
        let a = verify_minsum(42, 50).unwrap();
        let b = verify_minsum(42, 50).unwrap();
        assert!(a.passed());
        assert_eq!((a.status, a.terms_compared), (b.status, b.terms_compared));
        assert!(verify_minsum(1, 0).is_err());
    }

    #[test]
    fn standard_examples_agree_at_low_order() {
        let r = verify_standard_examples(q(1, 2)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn reports_precision_shortfall() {
        let a = GradedSeries::one(1, qi(1));
        let b = GradedSeries::one(1, qi(1));
        let r = compare("x", Parameters::default(), Instant::now(), &a, &b, qi(2)).unwrap();
        assert_eq!(r.status, CheckStatus::InsufficientPrecision);
        assert!(r.witness.is_none());
    }
}
