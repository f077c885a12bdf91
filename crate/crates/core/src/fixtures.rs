//! Hand-transcribed example characters for `A_5^(2)` (rank 3, series A) and
//! `D_3^(2)` (rank 2, series D).
//!
//! Each example is written out with its own literal quadratic forms and
//! constants and summed over a fixed box; only the Pochhammer expansions are
//! shared with the rest of the crate. A term with exponent at most `qmax` on
//! the boundary of a box is reported as an error, since the box would then be
//! too small.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};
use crate::series::{Exponent, GradedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PaperExample {
    A5L1,
    A52L1,
    A5L0L1,
    D3L2,
    D32L2,
    D3L0L2,
    A5Para2L1,
    A5ParaL0L1,
    D3Para2L2,
    D3ParaL0L2,
}

impl PaperExample {
    pub const ALL: [PaperExample; 10] = [
        PaperExample::A5L1,
        PaperExample::A52L1,
        PaperExample::A5L0L1,
        PaperExample::D3L2,
        PaperExample::D32L2,
        PaperExample::D3L0L2,
        PaperExample::A5Para2L1,
        PaperExample::A5ParaL0L1,
        PaperExample::D3Para2L2,
        PaperExample::D3ParaL0L2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PaperExample::A5L1 => "A5_L1",
            PaperExample::A52L1 => "A5_2L1",
            PaperExample::A5L0L1 => "A5_L0L1",
            PaperExample::D3L2 => "D3_L2",
            PaperExample::D32L2 => "D3_2L2",
            PaperExample::D3L0L2 => "D3_L0L2",
            PaperExample::A5Para2L1 => "A5_para_2L1",
            PaperExample::A5ParaL0L1 => "A5_para_L0L1",
            PaperExample::D3Para2L2 => "D3_para_2L2",
            PaperExample::D3ParaL0L2 => "D3_para_L0L2",
        }
    }

    /// `(series letter, rank, k0, kj)` of the module the example describes.
    pub fn parameters(&self) -> (char, usize, u32, u32) {
        match self {
            PaperExample::A5L1 => ('A', 3, 0, 1),
            PaperExample::A52L1 | PaperExample::A5Para2L1 => ('A', 3, 0, 2),
            PaperExample::A5L0L1 | PaperExample::A5ParaL0L1 => ('A', 3, 1, 1),
            PaperExample::D3L2 => ('D', 2, 0, 1),
            PaperExample::D32L2 | PaperExample::D3Para2L2 => ('D', 2, 0, 2),
            PaperExample::D3L0L2 | PaperExample::D3ParaL0L2 => ('D', 2, 1, 1),
        }
    }

    pub fn is_parafermionic(&self) -> bool {
        matches!(
            self,
            PaperExample::A5Para2L1 | PaperExample::A5ParaL0L1 | PaperExample::D3Para2L2 | PaperExample::D3ParaL0L2
        )
    }
}

impl fmt::Display for PaperExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PaperExample {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// Literal data of one algebra.
struct Algebra {
    gram: Vec<Vec<Q>>,
    mu: Vec<Q>,
    /// `(<alpha_i(0), Lambda_j>)_i`
    pairing_j: Vec<Q>,
    /// `h_{lambda_i}(Lambda_j)`
    h_j: Vec<Q>,
    /// `1/2 p^T G p` written out as in the display.
    half_form: fn(&[i64]) -> Q,
}

fn a5() -> Algebra {
    Algebra {
        gram: vec![
            vec![qi(1), q(-1, 2), qi(0)],
            vec![q(-1, 2), qi(1), qi(-1)],
            vec![qi(0), qi(-1), qi(2)],
        ],
        mu: vec![q(1, 2), q(1, 2), qi(1)],
        pairing_j: vec![q(1, 2), qi(0), qi(0)],
        h_j: vec![qi(1), qi(1), q(1, 2)],
        half_form: |p| {
            q(1, 2) * qi(p[0] * p[0] - p[0] * p[1] + p[1] * p[1] - 2 * p[1] * p[2] + 2 * p[2] * p[2])
        },
    }
}

fn d3() -> Algebra {
    Algebra {
        gram: vec![vec![qi(2), qi(-1)], vec![qi(-1), qi(1)]],
        mu: vec![qi(1), q(1, 2)],
        pairing_j: vec![qi(0), q(1, 2)],
        h_j: vec![q(1, 2), qi(1)],
        half_form: |p| q(1, 2) * qi(2 * p[0] * p[0] - 2 * p[0] * p[1] + p[1] * p[1]),
    }
}

fn inner(gram: &[Vec<Q>], a: &[Q], b: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, row) in gram.iter().enumerate() {
        for (r, g) in row.iter().enumerate() {
            acc += a[i] * g * b[r];
        }
    }
    acc
}

/// Odometer over `[lo, hi]^dim`; the flag marks the box boundary.
fn for_box(dim: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64], bool) -> Result<()>) -> Result<()> {
    let mut v = vec![lo; dim];
    loop {
        let edge = v.iter().any(|&x| x == hi || (x == lo && lo < 0));
        f(&v, edge)?;
        let mut idx = dim;
        loop {
            if idx == 0 {
                return Ok(());
            }
            idx -= 1;
            if v[idx] < hi {
                v[idx] += 1;
                break;
            }
            v[idx] = lo;
        }
    }
}

fn too_small(name: &str) -> Error {
    Error::Precondition(format!("summation box for example {name} is too small"))
}

fn poch_product(mu: &[Q], p: &[i64], budget: Q) -> Result<GradedSeries> {
    let mut out = GradedSeries::one(0, budget);
    for (i, &x) in p.iter().enumerate() {
        out = out.mul(&GradedSeries::inv_pochhammer_finite(mu[i], x as u32, 0, budget)?)?;
    }
    Ok(out)
}

pub fn paper_example(name: PaperExample, qmax: Q) -> Result<GradedSeries> {
    let (series, _, k0, kj) = name.parameters();
    let alg = if series == 'A' { a5() } else { d3() };
    let l = alg.mu.len();
    let k = (k0 + kj) as i64;
    let mut out = GradedSeries::zero(l, qmax).with_denominator(4 * k)?;
    let reach = 2 * qmax.ceil().to_integer() + 4;

    if name.is_parafermionic() {
        // q^{1/2 (1/2 p^T G p) - (1/4) p_j [k0 = 1]} / prod (q^mu_i; q^mu_i)_{p_i}
        let jx = if series == 'A' { 0 } else { 1 };
        for_box(l, 0, reach, |p, edge| {
            let mut e = (alg.half_form)(p) / qi(2);
            if k0 == 1 {
                e -= q(1, 4) * qi(p[jx]);
            }
            if e > qmax {
                return Ok(());
            }
            if edge {
                return Err(too_small(name.name()));
            }
            for (t, c) in poch_product(&alg.mu, p, qmax - e)?.iter() {
                out.insert(Exponent::new(e + t.q, vec![Q::zero(); l]), c.clone())?;
            }
            Ok(())
        })?;
        return Ok(out);
    }

    // full standard module: Heisenberg factor, then the P-sum and theta sum
    let pairing: Vec<Q> = alg.pairing_j.iter().map(|x| qi(kj as i64) * x).collect();
    let h: Vec<Q> = alg.h_j.iter().map(|x| qi(kj as i64) * x).collect();
    let kq = qi(k);
    let jx = if series == 'A' { 0 } else { 1 };
    let mut vacuum = GradedSeries::zero(l, qmax).with_denominator(4 * k)?;
    let p_reach = if k == 1 { 0 } else { reach };
    let v_reach = if k == 1 { 2 * reach } else { reach };
    for_box(l, 0, p_reach, |p, p_edge| {
        let pq: Vec<Q> = p.iter().map(|&x| qi(x)).collect();
        let mut e_p = (alg.half_form)(p);
        if kj == 2 {
            // + (1/2) p_j from the weight shift at k0 = 0
            e_p += q(1, 2) * qi(p[jx]);
        }
        let mut found = false;
        let mut err = None;
        for_box(l, -v_reach, v_reach, |v, v_edge| {
            let vq: Vec<Q> = v.iter().map(|&x| qi(x)).collect();
            // <alpha, (k/2) alpha + Lambda + sum_i p_i alpha_i>
            let theta = kq / qi(2) * inner(&alg.gram, &vq, &vq)
                + vq.iter().zip(&pairing).map(|(a, b)| a * b).sum::<Q>()
                + inner(&alg.gram, &vq, &pq);
            let e = e_p + theta;
            if e > qmax {
                return Ok(());
            }
            if v_edge {
                err = Some(too_small(name.name()));
            }
            found = true;
            let y: Vec<Q> = (0..l).map(|i| kq * vq[i] + h[i] + pq[i]).collect();
            for (t, c) in poch_product(&alg.mu, p, qmax - e)?.iter() {
                vacuum.insert(Exponent::new(e + t.q, y.clone()), c.clone())?;
            }
            Ok(())
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if found && p_edge && k > 1 {
            return Err(too_small(name.name()));
        }
        Ok(())
    })?;
    let zero = vec![Q::zero(); l];
    let mut heisenberg = GradedSeries::one(l, qmax);
    for &mu in &alg.mu {
        heisenberg = heisenberg.mul(&GradedSeries::inv_pochhammer_infinite(mu, &zero, mu, qmax)?)?;
    }
    out.add_assign(&heisenberg.mul(&vacuum)?)?;
    Ok(out)
}

/// Coefficient helper used by callers that only care about `q`.
pub fn leading_terms(series: &GradedSeries, count: usize) -> Vec<(Q, BigInt)> {
    series.q_coefficients().into_iter().take(count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn names_round_trip() {
        for e in PaperExample::ALL {
            assert_eq!(e.name().parse::<PaperExample>().unwrap(), e);
        }
        assert_eq!("A5_L2".parse::<PaperExample>(), Err(Error::UnknownExample("A5_L2".into())));
    }

    #[test]
    fn para_example_at_order_zero_is_one() {
        let s = paper_example(PaperExample::D3Para2L2, qi(0)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(qi(0), &[qi(0), qi(0)]), BigInt::one());
    }

    #[test]
    fn para_example_low_terms() {
        // A5, 2 Lambda_1: the form is 1 at p = (1,0,0), (0,1,0), (1,1,0),
        // (0,1,1), (1,1,1), (1,2,1)
        let s = paper_example(PaperExample::A5Para2L1, qi(1)).unwrap();
        let lead = leading_terms(&s, 3);
        assert_eq!(lead[0], (qi(0), BigInt::one()));
        assert_eq!(lead[1], (q(1, 4), BigInt::from(6)));
        // D3, Lambda_0 + Lambda_2: p = (0,0), (0,1), (1,1), (1,2) all sit at q^0
        let s = paper_example(PaperExample::D3ParaL0L2, q(1, 2)).unwrap();
        assert_eq!(s.coefficient(qi(0), &[qi(0), qi(0)]), BigInt::from(4));
    }

    #[test]
    fn level_one_example_constant_term() {
        let s = paper_example(PaperExample::A5L1, qi(1)).unwrap();
        assert_eq!(s.coefficient(qi(0), &[qi(1), qi(1), q(1, 2)]), BigInt::one());
    }
}
