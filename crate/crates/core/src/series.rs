//! Truncated formal series in `q` and color variables `y_1..y_l`, both with
//! rational exponents, and big-integer coefficients.
//!
//! Terms with `q`-exponent above `qmax` are never stored (the bound itself is
//! kept). Every stored `q`-exponent is a multiple of `1/denominator`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, lcm, Q};

/// Key of one term: ordering is ascending `q`, then lexicographic `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    pub q: Q,
    pub y: Vec<Q>,
}

impl Exponent {
    pub fn new(q: Q, y: Vec<Q>) -> Self {
        Self { q, y }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ys: Vec<String> = self.y.iter().map(format_rational).collect();
        write!(f, "q^{} y^[{}]", format_rational(&self.q), ys.join(","))
    }
}

/// First disagreement found by [`GradedSeries::equal_to_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub exponent: Exponent,
    pub left: BigInt,
    pub right: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    pub witness: Option<Witness>,
    /// Distinct exponents with `q <= qbound` present in either operand.
    pub terms_compared: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    ncolors: usize,
    qmax: Q,
    denominator: i64,
    terms: BTreeMap<Exponent, BigInt>,
}

impl GradedSeries {
    pub fn zero(ncolors: usize, qmax: Q) -> Self {
        Self { ncolors, qmax, denominator: 1, terms: BTreeMap::new() }
    }

    pub fn one(ncolors: usize, qmax: Q) -> Self {
        Self::monomial(Q::zero(), vec![Q::zero(); ncolors], BigInt::one(), qmax)
    }

    /// Single term `coeff q^qexp y^yexp`, or the empty series if it lies past
    /// the truncation or `coeff` is zero.
    pub fn monomial(qexp: Q, yexp: Vec<Q>, coeff: BigInt, qmax: Q) -> Self {
        let mut s = Self::zero(yexp.len(), qmax);
        s.denominator = *qexp.denom();
        if qexp <= qmax && !coeff.is_zero() {
            s.terms.insert(Exponent::new(qexp, yexp), coeff);
        }
        s
    }

    pub fn ncolors(&self) -> usize {
        self.ncolors
    }

    pub fn qmax(&self) -> Q {
        self.qmax
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    /// Declares the common denominator, failing if any stored term violates it.
    pub fn with_denominator(mut self, denominator: i64) -> Result<Self> {
        for e in self.terms.keys() {
            if !(e.q * Q::from_integer(denominator)).is_integer() {
                return Err(Error::DenominatorViolation { qexp: e.q, denominator });
            }
        }
        self.denominator = denominator;
        Ok(self)
    }

    /// Adds `coeff` to the term at `exp`. Terms past `qmax` are dropped; terms
    /// off the declared denominator are rejected.
    pub fn insert(&mut self, exp: Exponent, coeff: BigInt) -> Result<()> {
        if exp.y.len() != self.ncolors {
            return Err(Error::ShapeMismatch { left: self.ncolors, right: exp.y.len() });
        }
        if !(exp.q * Q::from_integer(self.denominator)).is_integer() {
            return Err(Error::DenominatorViolation { qexp: exp.q, denominator: self.denominator });
        }
        if exp.q > self.qmax || coeff.is_zero() {
            return Ok(());
        }
        accumulate(&mut self.terms, exp, coeff);
        Ok(())
    }

    pub fn coefficient(&self, qexp: Q, yexp: &[Q]) -> BigInt {
        self.terms
            .get(&Exponent::new(qexp, yexp.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ncolors != other.ncolors {
            return Err(Error::ShapeMismatch { left: self.ncolors, right: other.ncolors });
        }
        if self.qmax != other.qmax {
            return Err(Error::TruncationMismatch { left: self.qmax, right: other.qmax });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.denominator = lcm(self.denominator, other.denominator);
        for (e, c) in &other.terms {
            accumulate(&mut out.terms, e.clone(), c.clone());
        }
        Ok(out)
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        self.denominator = lcm(self.denominator, other.denominator);
        for (e, c) in &other.terms {
            accumulate(&mut self.terms, e.clone(), c.clone());
        }
        Ok(())
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc: HashMap<Exponent, BigInt> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let qsum = ea.q + eb.q;
                if qsum > self.qmax {
                    // `other` is sorted by q, nothing further fits
                    break;
                }
                let y = ea.y.iter().zip(&eb.y).map(|(a, b)| a + b).collect();
                *acc.entry(Exponent::new(qsum, y)).or_default() += ca * cb;
            }
        }
        Ok(Self {
            ncolors: self.ncolors,
            qmax: self.qmax,
            denominator: lcm(self.denominator, other.denominator),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// Multiplies by `q^qshift y^yshift`, dropping anything pushed past `qmax`.
    pub fn shifted(&self, qshift: Q, yshift: &[Q]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.q + qshift <= self.qmax)
            .map(|(e, c)| {
                let y = e.y.iter().zip(yshift).map(|(a, b)| a + b).collect();
                (Exponent::new(e.q + qshift, y), c.clone())
            })
            .collect();
        Self {
            ncolors: self.ncolors,
            qmax: self.qmax,
            denominator: lcm(self.denominator, *qshift.denom()),
            terms,
        }
    }

    /// Same terms viewed with a different number of (zero) color exponents.
    /// Only valid when every stored `y` vector is zero.
    pub fn with_colors(&self, ncolors: usize) -> Self {
        debug_assert!(self.terms.keys().all(|e| e.y.iter().all(Q::is_zero)));
        Self {
            ncolors,
            qmax: self.qmax,
            denominator: self.denominator,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (Exponent::new(e.q, vec![Q::zero(); ncolors]), c.clone()))
                .collect(),
        }
    }

    /// Keeps only terms with `q <= qmax` and lowers the truncation bound.
    pub fn truncate(&self, qmax: Q) -> Result<Self> {
        if qmax > self.qmax {
            return Err(Error::InsufficientPrecision { requested: qmax, available: self.qmax });
        }
        Ok(Self {
            ncolors: self.ncolors,
            qmax,
            denominator: self.denominator,
            terms: self.terms.iter().filter(|(e, _)| e.q <= qmax).map(|(e, c)| (e.clone(), c.clone())).collect(),
        })
    }

    /// Forgets the color grading: coefficients summed over `y` for each `q`.
    pub fn q_coefficients(&self) -> BTreeMap<Q, BigInt> {
        let mut out: BTreeMap<Q, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            *out.entry(e.q).or_default() += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Compares both series on every exponent with `q <= qbound`, reporting
    /// the first disagreement in term order.
    pub fn equal_to_order(&self, other: &Self, qbound: Q) -> Result<Comparison> {
        if self.ncolors != other.ncolors {
            return Err(Error::ShapeMismatch { left: self.ncolors, right: other.ncolors });
        }
        let available = self.qmax.min(other.qmax);
        if qbound > available {
            return Err(Error::InsufficientPrecision { requested: qbound, available });
        }
        let zero = BigInt::zero();
        let mut keys: Vec<&Exponent> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|e| e.q <= qbound)
            .collect();
        keys.sort();
        keys.dedup();
        let mut witness = None;
        for e in &keys {
            let l = self.terms.get(e).unwrap_or(&zero);
            let r = other.terms.get(e).unwrap_or(&zero);
            if l != r {
                witness = Some(Witness { exponent: (*e).clone(), left: l.clone(), right: r.clone() });
                break;
            }
        }
        Ok(Comparison { equal: witness.is_none(), witness, terms_compared: keys.len() })
    }

    /// `1/(q^step; q^step)_r = sum_s p_r(s) q^{step s}`, with `p_r(s)` the
    /// number of partitions of `s` into at most `r` parts.
    pub fn inv_pochhammer_finite(step: Q, r: u32, ncolors: usize, qmax: Q) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::NonConvergentProduct(step, step));
        }
        let mut out = Self::zero(ncolors, qmax);
        out.denominator = *step.denom();
        if qmax.is_negative() {
            return Ok(out);
        }
        let n = (qmax / step).floor().to_integer() as usize;
        // at most r parts == parts of size at most r (conjugation)
        let mut table = vec![BigInt::zero(); n + 1];
        table[0] = BigInt::one();
        for part in 1..=(r as usize).min(n) {
            for s in part..=n {
                let prev = table[s - part].clone();
                table[s] += prev;
            }
        }
        for (s, c) in table.into_iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(Exponent::new(step * Q::from_integer(s as i64), vec![Q::zero(); ncolors]), c);
            }
        }
        Ok(out)
    }

    /// `prod_{i>=1} (1 - q^{base_q + (i-1) step} y^{base_y})^{-1}`, truncated.
    pub fn inv_pochhammer_infinite(base_q: Q, base_y: &[Q], step: Q, qmax: Q) -> Result<Self> {
        if !base_q.is_positive() || !step.is_positive() {
            return Err(Error::NonConvergentProduct(base_q, step));
        }
        let ncolors = base_y.len();
        let mut out = Self::one(ncolors, qmax);
        let mut exponent = base_q;
        while exponent <= qmax {
            // geometric series in x = q^exponent y^base_y
            let mut factor = Self::zero(ncolors, qmax);
            factor.denominator = *exponent.denom();
            let mut power = 0i64;
            while exponent * Q::from_integer(power) <= qmax {
                let y = base_y.iter().map(|a| a * Q::from_integer(power)).collect();
                factor.terms.insert(Exponent::new(exponent * Q::from_integer(power), y), BigInt::one());
                power += 1;
            }
            out = out.mul(&factor)?;
            exponent += step;
        }
        Ok(out)
    }
}

fn accumulate(terms: &mut BTreeMap<Exponent, BigInt>, exp: Exponent, coeff: BigInt) {
    use std::collections::btree_map::Entry;
    match terms.entry(exp) {
        Entry::Vacant(v) => {
            if !coeff.is_zero() {
                v.insert(coeff);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}*{e}")).collect();
        write!(f, "{} + O(q^>{})", parts.join(" + "), format_rational(&self.qmax))
    }
}
