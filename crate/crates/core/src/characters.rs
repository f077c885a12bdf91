//! Closed-form characters as truncated graded series, together with
//! enumeration-based evaluations of the same objects.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::quasiparticle::{
    self, minsum_quadratic, visit_configurations, BasisKind, ChargeCap, QPMonomial,
};
use crate::rational::{qi, Q};
use crate::root_datum::{OrbitProjection, RectangularWeight, TwistedRootDatum};
use crate::series::{Exponent, GradedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharacterObject {
    PrincipalStandard,
    PrincipalVerma,
    ProductSide,
    StandardModule,
    VacuumSpace,
    Parafermionic,
}

impl CharacterObject {
    pub const ALL: [CharacterObject; 6] = [
        CharacterObject::PrincipalStandard,
        CharacterObject::PrincipalVerma,
        CharacterObject::ProductSide,
        CharacterObject::StandardModule,
        CharacterObject::VacuumSpace,
        CharacterObject::Parafermionic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CharacterObject::PrincipalStandard => "psp-std",
            CharacterObject::PrincipalVerma => "psp-verma",
            CharacterObject::ProductSide => "product",
            CharacterObject::StandardModule => "std",
            CharacterObject::VacuumSpace => "vacuum",
            CharacterObject::Parafermionic => "para",
        }
    }
}

impl fmt::Display for CharacterObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CharacterObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown character object `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    #[default]
    Formula,
    Enumerate,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(Method::Formula),
            "enumerate" => Ok(Method::Enumerate),
            other => Err(Error::Precondition(format!("unknown method `{other}` (expected formula or enumerate)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Formula => "formula",
            Method::Enumerate => "enumerate",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CharacterRequest {
    pub datum: TwistedRootDatum,
    pub weight: RectangularWeight,
    pub object: CharacterObject,
    pub qmax: Q,
    /// Parafermionic only: attach `y^n` per term instead of zero exponents.
    pub track_colors: bool,
    pub method: Method,
}

impl CharacterRequest {
    pub fn new(datum: TwistedRootDatum, weight: RectangularWeight, object: CharacterObject, qmax: Q) -> Self {
        Self { datum, weight, object, qmax, track_colors: false, method: Method::Formula }
    }

    /// Common denominator declared on the result.
    pub fn denominator(&self) -> i64 {
        character_denominator(self.object, &self.weight)
    }

    pub fn evaluate(&self) -> Result<GradedSeries> {
        if self.qmax.is_negative() {
            return Err(Error::Precondition(format!("qmax must be nonnegative, got {}", self.qmax)));
        }
        let (d, w, qmax) = (&self.datum, &self.weight, self.qmax);
        let series = match (self.object, self.method) {
            (CharacterObject::PrincipalStandard, Method::Formula) => ch_principal_standard(d, w, qmax)?,
            (CharacterObject::PrincipalVerma, Method::Formula) => ch_principal_verma(d, qmax)?,
            (CharacterObject::ProductSide, Method::Formula) => ch_product_side(d, qmax)?,
            (CharacterObject::StandardModule, Method::Formula) => ch_standard_module(d, w, qmax)?,
            (CharacterObject::VacuumSpace, Method::Formula) => ch_vacuum(d, w, qmax)?,
            (CharacterObject::Parafermionic, Method::Formula) => ch_parafermionic(d, w, qmax, self.track_colors)?,
            (CharacterObject::PrincipalStandard, Method::Enumerate) => {
                enumerate_principal(d, w, BasisKind::Standard, ChargeCap::Finite(w.level()), qmax)?
            }
            (CharacterObject::PrincipalVerma, Method::Enumerate) => {
                enumerate_principal(d, w, BasisKind::Verma, ChargeCap::Unbounded, qmax)?
            }
            (CharacterObject::ProductSide, Method::Enumerate) => {
                let gens: Vec<(Q, Vec<Q>)> =
                    d.orbit_projections().iter().map(|o| (o.halfnorm, to_q(&o.a))).collect();
                pbw_series(&gens, d.l, qmax)?
            }
            (CharacterObject::StandardModule, Method::Enumerate) => enumerate_standard(d, w, qmax, true)?,
            (CharacterObject::VacuumSpace, Method::Enumerate) => enumerate_standard(d, w, qmax, false)?,
            (CharacterObject::Parafermionic, Method::Enumerate) => {
                enumerate_parafermionic(d, w, qmax, self.track_colors)?
            }
        };
        series.with_denominator(self.denominator())
    }
}

pub fn character_denominator(object: CharacterObject, w: &RectangularWeight) -> i64 {
    match object {
        CharacterObject::PrincipalVerma | CharacterObject::ProductSide => 4,
        _ => 4 * w.level() as i64,
    }
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| qi(x)).collect()
}

fn to_q_u(v: &[u64]) -> Vec<Q> {
    v.iter().map(|&x| qi(x as i64)).collect()
}

/// Total charge per color, `n_i = sum_s s p_i^(s)`.
pub fn color_charges(p: &[Vec<u64>]) -> Vec<u64> {
    p.iter().map(|pi| pi.iter().enumerate().map(|(s, x)| (s as u64 + 1) * x).sum()).collect()
}

/// `sum_{s=k0+1}^{smax} (s-k0) mu_j p_j^(s)`.
pub fn p_tilde(datum: &TwistedRootDatum, w: &RectangularWeight, p: &[Vec<u64>], smax: u32) -> Q {
    let pj = &p[datum.j];
    let mut acc = 0u64;
    for s in (w.k0 + 1)..=smax {
        if let Some(x) = pj.get(s as usize - 1) {
            acc += (s - w.k0) as u64 * x;
        }
    }
    datum.mu[datum.j] * qi(acc as i64)
}

/// Every `P` whose dual-charge rows `R_1 >= R_2 >= ...` (componentwise, at
/// most `depth` of them) satisfy `1/2 sum_t R_t^T G R_t <= qmax`, paired with
/// that quadratic value.
pub fn p_vectors_by_rows(datum: &TwistedRootDatum, depth: Option<usize>, qmax: Q) -> Vec<(Vec<Vec<u64>>, Q)> {
    let l = datum.l;
    let mut out = vec![(vec![Vec::new(); l], Q::zero())];
    if qmax.is_negative() {
        return Vec::new();
    }
    // 1/2 R^T G R >= (lam/2) |R|^2 bounds every entry
    let limit = qi(2) * qmax / datum.eigen_lower_bound();
    let mut b = 0u64;
    while qi(((b + 1) * (b + 1)) as i64) <= limit {
        b += 1;
    }
    let mut candidates = Vec::new();
    for code in 0..(b + 1).pow(l as u32) {
        let r: Vec<u64> = (0..l).map(|i| (code / (b + 1).pow(i as u32)) % (b + 1)).collect();
        if r.iter().any(|&x| x > 0) {
            let half = linalg::quadratic_form(&datum.gram0, &to_q_u(&r)) / qi(2);
            if half <= qmax {
                candidates.push((r, half));
            }
        }
    }
    let mut rows = Vec::new();
    extend_rows(&candidates, depth.unwrap_or(usize::MAX), qmax, &mut rows, Q::zero(), &mut out);
    out
}

fn extend_rows(
    candidates: &[(Vec<u64>, Q)],
    depth: usize,
    qmax: Q,
    rows: &mut Vec<Vec<u64>>,
    acc: Q,
    out: &mut Vec<(Vec<Vec<u64>>, Q)>,
) {
    if rows.len() == depth {
        return;
    }
    for (r, half) in candidates {
        if acc + half > qmax {
            continue;
        }
        if let Some(last) = rows.last() {
            if r.iter().zip(last).any(|(a, b)| a > b) {
                continue;
            }
        }
        rows.push(r.clone());
        out.push((p_from_rows(rows), acc + half));
        extend_rows(candidates, depth, qmax, rows, acc + half, out);
        rows.pop();
    }
}

fn p_from_rows(rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let l = rows[0].len();
    (0..l)
        .map(|i| {
            (0..rows.len())
                .map(|t| rows[t][i] - rows.get(t + 1).map_or(0, |next| next[i]))
                .collect()
        })
        .collect()
}

/// `1/(q^mu_i; q^mu_i)_r` for every color and count, memoised as q-only series.
struct PochhammerTable {
    qmax: Q,
    denominator: i64,
    table: HashMap<(usize, u64), GradedSeries>,
}

impl PochhammerTable {
    fn new<'a>(
        datum: &TwistedRootDatum,
        ps: impl IntoIterator<Item = &'a Vec<Vec<u64>>>,
        qmax: Q,
        denominator: i64,
    ) -> Result<Self> {
        let mut table = HashMap::new();
        for p in ps {
            for (i, pi) in p.iter().enumerate() {
                for &r in pi {
                    if r > 0 && !table.contains_key(&(i, r)) {
                        let s = GradedSeries::inv_pochhammer_finite(datum.mu[i], r as u32, 0, qmax)?;
                        table.insert((i, r), s);
                    }
                }
            }
        }
        Ok(Self { qmax, denominator, table })
    }

    /// `prod_{i,s} 1/(q^mu_i; q^mu_i)_{p_i^(s)}` times `q^shift y^y`.
    fn placed(&self, p: &[Vec<u64>], shift: Q, y: &[Q]) -> Result<GradedSeries> {
        if shift.is_negative() {
            return Err(Error::Precondition(format!("negative leading exponent {shift} in a fermionic sum")));
        }
        let budget = self.qmax - shift;
        let mut prod = GradedSeries::one(0, budget);
        for (i, pi) in p.iter().enumerate() {
            for &r in pi {
                if r > 0 {
                    prod = prod.mul(&self.table[&(i, r)].truncate(budget)?)?;
                }
            }
        }
        let mut out = GradedSeries::zero(y.len(), self.qmax).with_denominator(self.denominator)?;
        for (e, c) in prod.iter() {
            out.insert(Exponent::new(e.q + shift, y.to_vec()), c.clone())?;
        }
        Ok(out)
    }
}

fn sum_terms<T, F>(items: &[T], ncolors: usize, qmax: Q, f: F) -> Result<GradedSeries>
where
    T: Sync,
    F: Fn(&T) -> Result<GradedSeries> + Sync + Send,
{
    items
        .par_iter()
        .map(f)
        .try_reduce(|| GradedSeries::zero(ncolors, qmax), |a, b| a.add(&b))
}

/// Fermionic sum for the principal subspace of `L(Lambda)`: charges `1..=k`,
/// exponent `minsum_quadratic(P) + p~_j(P)`.
pub fn ch_principal_standard(datum: &TwistedRootDatum, w: &RectangularWeight, qmax: Q) -> Result<GradedSeries> {
    let k = w.level();
    let ps = p_vectors_by_rows(datum, Some(k as usize), qmax);
    let table = PochhammerTable::new(datum, ps.iter().map(|(p, _)| p), qmax, 4 * k as i64)?;
    sum_terms(&ps, datum.l, qmax, |(p, quad)| {
        let shift = quad + p_tilde(datum, w, p, k);
        if shift > qmax {
            return Ok(GradedSeries::zero(datum.l, qmax));
        }
        table.placed(p, shift, &to_q_u(&color_charges(p)))
    })
}

/// Fermionic sum for the principal subspace of the generalized Verma module:
/// charges unbounded, no weight shift.
pub fn ch_principal_verma(datum: &TwistedRootDatum, qmax: Q) -> Result<GradedSeries> {
    let ps = p_vectors_by_rows(datum, None, qmax);
    let table = PochhammerTable::new(datum, ps.iter().map(|(p, _)| p), qmax, 4)?;
    sum_terms(&ps, datum.l, qmax, |(p, quad)| table.placed(p, *quad, &to_q_u(&color_charges(p))))
}

/// Product over orbits of positive roots of `1/(q^h y^a; q^h)_inf`.
pub fn ch_product_side(datum: &TwistedRootDatum, qmax: Q) -> Result<GradedSeries> {
    product_over(datum.orbit_projections(), datum.l, qmax)
}

/// The same product taken over every positive root separately (one factor
/// per root, not per orbit).
pub fn ch_product_side_all_roots(datum: &TwistedRootDatum, qmax: Q) -> Result<GradedSeries> {
    product_over(&datum.all_root_projections(), datum.l, qmax)
}

fn product_over(factors: &[OrbitProjection], ncolors: usize, qmax: Q) -> Result<GradedSeries> {
    let mut out = GradedSeries::one(ncolors, qmax);
    for o in factors {
        let f = GradedSeries::inv_pochhammer_infinite(o.halfnorm, &to_q(&o.a), o.halfnorm, qmax)?;
        out = out.mul(&f)?;
    }
    Ok(out)
}

/// `prod_i 1/(q^mu_i; q^mu_i)_inf` with zero color exponents.
pub fn heisenberg_factor(datum: &TwistedRootDatum, qmax: Q) -> Result<GradedSeries> {
    let zero = vec![Q::zero(); datum.l];
    let mut out = GradedSeries::one(datum.l, qmax);
    for &mu in &datum.mu {
        out = out.mul(&GradedSeries::inv_pochhammer_infinite(mu, &zero, mu, qmax)?)?;
    }
    Ok(out)
}

/// `C[m][n] = min(m,n) - mn/k` for charges `1..k-1`.
fn charge_form(k: u32) -> Matrix {
    let kq = qi(k as i64);
    (1..k)
        .map(|m| (1..k).map(|n| qi(m.min(n) as i64) - qi((m * n) as i64) / kq).collect())
        .collect()
}

/// `1/2 sum_{i,r} G[i][r] sum_{m,n} (min(m,n) - mn/k) p_i^(m) p_r^(n)`.
pub fn g_exponent(datum: &TwistedRootDatum, k: u32, p: &[Vec<u64>]) -> Q {
    let c = charge_form(k);
    let mut acc = Q::zero();
    for (i, pi) in p.iter().enumerate() {
        for (r, pr) in p.iter().enumerate() {
            let g = datum.gram0[i][r];
            if g.is_zero() {
                continue;
            }
            for (m, x) in pi.iter().enumerate() {
                for (n, y) in pr.iter().enumerate() {
                    acc += g * c[m][n] * qi((x * y) as i64);
                }
            }
        }
    }
    acc / qi(2)
}

/// `mu_j sum_{t=k0+1}^{k-1} (t-k0) p_j^(t) - mu_j (kj/k) sum_t t p_j^(t)`.
pub fn b_exponent(datum: &TwistedRootDatum, w: &RectangularWeight, p: &[Vec<u64>]) -> Q {
    let k = w.level();
    let nj = color_charges(p)[datum.j];
    p_tilde(datum, w, p, k - 1) - datum.mu[datum.j] * qi(w.kj as i64) / qi(k as i64) * qi(nj as i64)
}

/// Every `P` with charges `1..k-1` and `G_P + B_P <= bound`, paired with that
/// exponent. Fails if some `G_P` is negative.
///
/// The search box comes from `G_P >= a |P|^2` with `a = lam_G lam_C / 2` and
/// `B_P >= -c sum P` with `c = mu_j kj (k-1)/k`: every coordinate `x` then
/// satisfies `a x^2 - c x <= bound + (N-1) c^2 / (4a)`.
pub fn p_vectors_in_box(datum: &TwistedRootDatum, w: &RectangularWeight, bound: Q) -> Result<Vec<(Vec<Vec<u64>>, Q)>> {
    let k = w.level();
    let l = datum.l;
    if k == 1 {
        return Ok(if bound.is_negative() { Vec::new() } else { vec![(vec![Vec::new(); l], Q::zero())] });
    }
    let width = (k - 1) as usize;
    let n = l * width;
    let lam_c = linalg::min_eigenvalue_lower_bound(&charge_form(k));
    let a = datum.eigen_lower_bound() * lam_c / qi(2);
    let c = datum.mu[datum.j] * qi((w.kj * (k - 1)) as i64) / qi(k as i64);
    let rhs = bound + qi(n as i64 - 1) * c * c / (qi(4) * a);
    let mut side = (c / (qi(2) * a)).ceil().to_integer().max(0);
    while a * qi(side) * qi(side) - c * qi(side) <= rhs {
        side += 1;
    }
    // coordinates range over 0..side
    let mut out = Vec::new();
    let mut flat = vec![0u64; n];
    loop {
        let p: Vec<Vec<u64>> = flat.chunks(width).map(<[u64]>::to_vec).collect();
        let g = g_exponent(datum, k, &p);
        if g.is_negative() {
            return Err(Error::NegativeQuadraticExponent(g));
        }
        let e = g + b_exponent(datum, w, &p);
        if e <= bound {
            out.push((p, e));
        }
        let mut idx = n;
        loop {
            if idx == 0 {
                return Ok(out);
            }
            idx -= 1;
            if (flat[idx] as i64) < side - 1 {
                flat[idx] += 1;
                break;
            }
            flat[idx] = 0;
        }
    }
}

/// Parafermionic character `sum_P D_P G_P B_P`.
pub fn ch_parafermionic(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    qmax: Q,
    track_colors: bool,
) -> Result<GradedSeries> {
    let ps = p_vectors_in_box(datum, w, qmax)?;
    let table = PochhammerTable::new(datum, ps.iter().map(|(p, _)| p), qmax, 4 * w.level() as i64)?;
    sum_terms(&ps, datum.l, qmax, |(p, e)| {
        let y = if track_colors { to_q_u(&color_charges(p)) } else { vec![Q::zero(); datum.l] };
        table.placed(p, *e, &y)
    })
}

/// Standard-module character: Heisenberg factor times the charge `<= k-1`
/// fermionic sum times the theta sum over the projected root lattice.
pub fn ch_standard_module(datum: &TwistedRootDatum, w: &RectangularWeight, qmax: Q) -> Result<GradedSeries> {
    let vacuum = ch_vacuum(datum, w, qmax)?;
    heisenberg_factor(datum, qmax)?.mul(&vacuum)
}

/// Vacuum-space character: the standard-module character without its
/// Heisenberg factor.
pub fn ch_vacuum(datum: &TwistedRootDatum, w: &RectangularWeight, qmax: Q) -> Result<GradedSeries> {
    let k = w.level();
    let pairing = datum.weight_pairing(w);
    let h = datum.dual_coordinates(&pairing);
    // total exponent >= G_P + B_P - <h, pairing>/(2k), minimising over real v
    let slack = linalg::dot(&h, &pairing) / qi(2 * k as i64);
    let ps = p_vectors_in_box(datum, w, qmax + slack)?;
    let table = PochhammerTable::new(datum, ps.iter().map(|(p, _)| p), qmax, 4 * w.level() as i64)?;
    let kq = qi(k as i64);
    sum_terms(&ps, datum.l, qmax, |(p, _)| {
        let n = to_q_u(&color_charges(p));
        let exp_p = minsum_quadratic(datum, p) + p_tilde(datum, w, p, k - 1);
        let gn = linalg::mat_vec(&datum.gram0, &n);
        let linear: Vec<Q> = pairing.iter().zip(&gn).map(|(a, b)| a + b).collect();
        let mut acc = GradedSeries::zero(datum.l, qmax);
        for v in datum.lattice_ball(k, &linear, qmax - exp_p) {
            let vq = to_q(&v);
            let theta = kq / qi(2) * linalg::quadratic_form(&datum.gram0, &vq) + linalg::dot(&vq, &linear);
            let y: Vec<Q> = (0..datum.l).map(|i| kq * vq[i] + h[i] + n[i]).collect();
            acc.add_assign(&table.placed(p, exp_p + theta, &y)?)?;
        }
        Ok(acc)
    })
}

/// Conformal energy of a monomial of the parafermionic basis (charges at most
/// `k-1`).
pub fn para_conformal_energy(datum: &TwistedRootDatum, w: &RectangularWeight, monomial: &QPMonomial) -> Result<Q> {
    let k = w.level();
    let kq = qi(k as i64);
    let mut energy = Q::zero();
    let mut earlier_colors = vec![Q::zero(); datum.l];
    for i in 0..monomial.ncolors() {
        let mut same_color = 0i64;
        for qp in monomial.color(i) {
            if qp.charge + 1 > k {
                return Err(Error::ChargeTooLarge { charge: qp.charge, max: k - 1 });
            }
            let n = qi(qp.charge as i64);
            energy -= qp.mode;
            let mut inner = qi(same_color) * datum.gram0[i][i];
            for (p, np) in earlier_colors.iter().enumerate().take(i) {
                inner += np * datum.gram0[i][p];
            }
            energy -= n * n * datum.mu[i] / kq + n * inner / kq;
            same_color += qp.charge as i64;
        }
        earlier_colors[i] = qi(same_color);
    }
    let nj = earlier_colors[datum.j];
    energy -= datum.mu[datum.j] * qi(w.kj as i64) / kq * nj;
    Ok(energy)
}

fn enumerate_principal(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    kind: BasisKind,
    cap: ChargeCap,
    qmax: Q,
) -> Result<GradedSeries> {
    let basis = quasiparticle::enumerate_basis(datum, w, kind, cap, qmax);
    quasiparticle::tally(&basis, datum.l, qmax, 4 * w.level() as i64, quasiparticle::energy_weight)
}

/// Charge-types of a `P` vector: color `i` holds `p_i^(s)` particles of charge `s`.
fn charge_types(p: &[Vec<u64>]) -> Vec<Vec<u32>> {
    p.iter()
        .map(|pi| {
            let mut c = Vec::new();
            for (s, &x) in pi.iter().enumerate().rev() {
                c.extend(std::iter::repeat_n(s as u32 + 1, x as usize));
            }
            c
        })
        .collect()
}

fn charge_totals(charges: &[Vec<u32>]) -> Vec<Q> {
    charges.iter().map(|c| qi(c.iter().map(|&x| x as i64).sum())).collect()
}

/// Parafermionic character by direct enumeration of the charge `<= k-1`
/// monomials graded by their conformal energy.
pub fn enumerate_parafermionic(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    qmax: Q,
    track_colors: bool,
) -> Result<GradedSeries> {
    let k = w.level();
    let kq = qi(k as i64);
    let configs: Vec<Vec<Vec<u32>>> = p_vectors_in_box(datum, w, qmax)?.iter().map(|(p, _)| charge_types(p)).collect();
    // conformal energy = total energy + offset(charges)
    let offset = |charges: &[Vec<u32>]| {
        let n = charge_totals(charges);
        -linalg::quadratic_form(&datum.gram0, &n) / (qi(2) * kq) - datum.mu[datum.j] * qi(w.kj as i64) / kq * n[datum.j]
    };
    let mut out = GradedSeries::zero(datum.l, qmax).with_denominator(4 * k as i64)?;
    let mut failure = None;
    visit_configurations(datum, w, BasisKind::Standard, configs, qmax, offset, |m| {
        if failure.is_some() {
            return;
        }
        let result = para_conformal_energy(datum, w, m).and_then(|e| {
            let y = if track_colors { m.color_type().into_iter().map(|x| qi(x as i64)).collect() } else { vec![Q::zero(); datum.l] };
            out.insert(Exponent::new(e, y), BigInt::one())
        });
        if let Err(e) = result {
            failure = Some(e);
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Generating series of multisets of generators `(energy, y)`, each usable
/// at integer multiples `t * energy` for `t >= 1` (a PBW basis), counted one
/// by one.
pub fn pbw_series(generators: &[(Q, Vec<Q>)], ncolors: usize, qmax: Q) -> Result<GradedSeries> {
    let mut modes = Vec::new();
    for (e, y) in generators {
        if !e.is_positive() {
            return Err(Error::NonConvergentProduct(*e, *e));
        }
        let mut t = 1;
        while qi(t) * e <= qmax {
            modes.push((qi(t) * e, y.clone()));
            t += 1;
        }
    }
    let mut counts: HashMap<Exponent, BigInt> = HashMap::new();
    pbw_walk(&modes, 0, Q::zero(), &mut vec![Q::zero(); ncolors], qmax, &mut counts);
    let denominator = modes.iter().fold(1, |d, (e, _)| crate::rational::lcm(d, *e.denom()));
    let mut out = GradedSeries::zero(ncolors, qmax).with_denominator(denominator)?;
    for (e, c) in counts {
        out.insert(e, c)?;
    }
    Ok(out)
}

fn pbw_walk(
    modes: &[(Q, Vec<Q>)],
    from: usize,
    energy: Q,
    y: &mut Vec<Q>,
    qmax: Q,
    counts: &mut HashMap<Exponent, BigInt>,
) {
    *counts.entry(Exponent::new(energy, y.clone())).or_default() += 1;
    for (idx, (e, dy)) in modes.iter().enumerate().skip(from) {
        if energy + e > qmax {
            continue;
        }
        for (a, b) in y.iter_mut().zip(dy) {
            *a += b;
        }
        pbw_walk(modes, idx, energy + e, y, qmax, counts);
        for (a, b) in y.iter_mut().zip(dy) {
            *a -= b;
        }
    }
}

/// Standard module (or vacuum space) by enumerating lattice points, charge
/// `<= k-1` quasi-particle monomials and, optionally, Heisenberg monomials.
pub fn enumerate_standard(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    qmax: Q,
    with_heisenberg: bool,
) -> Result<GradedSeries> {
    let k = w.level();
    let kq = qi(k as i64);
    let pairing = datum.weight_pairing(w);
    let h = datum.dual_coordinates(&pairing);
    let slack = linalg::dot(&h, &pairing) / (qi(2) * kq);
    let configs: Vec<Vec<Vec<u32>>> =
        p_vectors_in_box(datum, w, qmax + slack)?.iter().map(|(p, _)| charge_types(p)).collect();
    // lowest theta value over real v
    let offset = |charges: &[Vec<u32>]| {
        let shifted: Vec<Q> = charge_totals(charges).iter().zip(&h).map(|(a, b)| a + b).collect();
        -linalg::quadratic_form(&datum.gram0, &shifted) / (qi(2) * kq)
    };
    let mut monomials = Vec::new();
    visit_configurations(datum, w, BasisKind::Standard, configs, qmax, offset, |m| monomials.push(m.clone()));

    let heisenberg = if with_heisenberg {
        let gens: Vec<(Q, Vec<Q>)> = datum.mu.iter().map(|&mu| (mu, vec![Q::zero(); datum.l])).collect();
        pbw_series(&gens, datum.l, qmax)?
    } else {
        GradedSeries::one(datum.l, qmax)
    };
    let mut out = GradedSeries::zero(datum.l, qmax).with_denominator(4 * k as i64)?;
    for m in &monomials {
        let en = m.total_energy();
        let n: Vec<Q> = m.color_type().into_iter().map(|x| qi(x as i64)).collect();
        let gn = linalg::mat_vec(&datum.gram0, &n);
        let linear: Vec<Q> = pairing.iter().zip(&gn).map(|(a, b)| a + b).collect();
        for v in datum.lattice_ball(k, &linear, qmax - en) {
            let vq = to_q(&v);
            let theta = kq / qi(2) * linalg::quadratic_form(&datum.gram0, &vq) + linalg::dot(&vq, &linear);
            let y: Vec<Q> = (0..datum.l).map(|i| kq * vq[i] + h[i] + n[i]).collect();
            for (e, c) in heisenberg.iter() {
                let q = en + theta + e.q;
                if q > qmax {
                    break;
                }
                out.insert(Exponent::new(q, y.clone()), c.clone())?;
            }
        }
    }
    Ok(out)
}
