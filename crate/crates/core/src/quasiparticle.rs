//! Quasi-particle monomials, their difference conditions, and exhaustive
//! enumeration of basis monomials below an energy cutoff.
//!
//! A monomial stores, for every color `i`, its quasi-particles in canonical
//! order: charges nonincreasing and, among equal charges, modes
//! nonincreasing. A quasi-particle with mode `m` carries energy `-m`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, on_lattice, qi, Q};
use crate::root_datum::{RectangularWeight, TwistedRootDatum};
use crate::series::{Exponent, GradedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiParticle {
    pub charge: u32,
    pub mode: Q,
}

/// Which principal subspace the difference conditions describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    /// Standard module: the weight enters through the `j`-node shift.
    Standard,
    /// Generalized Verma module: no weight shift.
    Verma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChargeCap {
    Finite(u32),
    Unbounded,
}

impl ChargeCap {
    pub fn allows(&self, charge: u32) -> bool {
        match self {
            ChargeCap::Finite(c) => charge <= *c,
            ChargeCap::Unbounded => true,
        }
    }

    fn max_part(&self) -> u32 {
        match self {
            ChargeCap::Finite(c) => *c,
            ChargeCap::Unbounded => u32::MAX,
        }
    }
}

impl fmt::Display for ChargeCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChargeCap::Finite(c) => write!(f, "{c}"),
            ChargeCap::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPMonomial {
    colors: Vec<Vec<QuasiParticle>>,
}

impl QPMonomial {
    pub fn empty(ncolors: usize) -> Self {
        Self { colors: vec![Vec::new(); ncolors] }
    }

    /// Builds a monomial from per-color `(charge, mode)` lists, which must
    /// already be in canonical order.
    pub fn new(colors: Vec<Vec<(u32, Q)>>) -> Result<Self> {
        let colors: Vec<Vec<QuasiParticle>> = colors
            .into_iter()
            .map(|c| c.into_iter().map(|(charge, mode)| QuasiParticle { charge, mode }).collect())
            .collect();
        for (i, list) in colors.iter().enumerate() {
            if list.iter().any(|p| p.charge == 0) {
                return Err(Error::Precondition(format!("color {}: charges must be positive", i + 1)));
            }
            for w in list.windows(2) {
                let ordered = w[0].charge > w[1].charge || (w[0].charge == w[1].charge && w[0].mode >= w[1].mode);
                if !ordered {
                    return Err(Error::Precondition(format!("color {}: quasi-particles not in canonical order", i + 1)));
                }
            }
        }
        Ok(Self { colors })
    }

    pub fn ncolors(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, i: usize) -> &[QuasiParticle] {
        &self.colors[i]
    }

    pub fn is_empty(&self) -> bool {
        self.colors.iter().all(Vec::is_empty)
    }

    /// Charge-type of color `i`: its charges, largest first.
    pub fn charge_type(&self, i: usize) -> Vec<u32> {
        self.colors[i].iter().map(|p| p.charge).collect()
    }

    /// Dual-charge-type of color `i`: the conjugate of the charge-type.
    pub fn dual_charge_type(&self, i: usize) -> Vec<u32> {
        conjugate(&self.charge_type(i)).expect("canonical charge-types are nonincreasing")
    }

    /// Total charge of each color, the exponent of `y_i`.
    pub fn color_type(&self) -> Vec<u32> {
        self.colors.iter().map(|c| c.iter().map(|p| p.charge).sum()).collect()
    }

    /// Number of quasi-particles of each color.
    pub fn particle_counts(&self) -> Vec<usize> {
        self.colors.iter().map(Vec::len).collect()
    }

    /// `P[i][s-1]` = number of color-`i` quasi-particles of charge `s`.
    pub fn p_vector(&self) -> Vec<Vec<u64>> {
        self.colors
            .iter()
            .map(|c| {
                let top = c.first().map_or(0, |p| p.charge as usize);
                let mut counts = vec![0u64; top];
                for p in c {
                    counts[p.charge as usize - 1] += 1;
                }
                counts
            })
            .collect()
    }

    pub fn total_energy(&self) -> Q {
        -self.colors.iter().flatten().map(|p| p.mode).sum::<Q>()
    }

    pub fn max_charge(&self) -> u32 {
        self.colors.iter().flatten().map(|p| p.charge).max().unwrap_or(0)
    }
}

impl fmt::Display for QPMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.colors.iter().enumerate() {
            for p in c {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "x[{}]_{}({})", i + 1, p.charge, format_rational(&p.mode))?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Conjugate of a partition given as a nonincreasing list of positive parts.
pub fn conjugate(partition: &[u32]) -> Result<Vec<u32>> {
    if partition.windows(2).any(|w| w[0] < w[1]) || partition.contains(&0) {
        return Err(Error::NonMonotonePartition(partition.to_vec()));
    }
    let top = partition.first().copied().unwrap_or(0);
    Ok((1..=top).map(|t| partition.iter().filter(|&&n| n >= t).count() as u32).collect())
}

/// Rows of the dual-charge-type for every color: `rows[t][i] = r_i^{(t+1)}`.
pub fn dual_rows(p: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let depth = p.iter().map(Vec::len).max().unwrap_or(0);
    (0..depth)
        .map(|t| p.iter().map(|pi| pi.iter().skip(t).sum()).collect())
        .collect()
}

/// `1/2 sum_{i,r} G[i][r] sum_{m,n} min(m,n) p_i^(m) p_r^(n)`.
pub fn minsum_quadratic(datum: &TwistedRootDatum, p: &[Vec<u64>]) -> Q {
    let mut acc = Q::zero();
    for (i, pi) in p.iter().enumerate() {
        for (r, pr) in p.iter().enumerate() {
            let g = datum.gram0[i][r];
            if g.is_zero() {
                continue;
            }
            acc += g * qi(min_pairing(pi, pr) as i64);
        }
    }
    acc / qi(2)
}

/// `sum_{m,n} min(m,n) a^(m) b^(n)` with charges indexed from 1.
pub fn min_pairing(a: &[u64], b: &[u64]) -> u64 {
    let mut acc = 0;
    for (m, x) in a.iter().enumerate() {
        for (n, y) in b.iter().enumerate() {
            acc += (m.min(n) as u64 + 1) * x * y;
        }
    }
    acc
}

/// Upper bound on `m_{p,i}` from the difference conditions (rel8 form):
/// `(1-2p) mu_i n - <a_i(0), a_{i-1}(0)> sum_q min(n_{q,i-1}, n) - shift`,
/// where the shift `mu_j max(0, n - k0)` only applies to the special color of
/// a standard module. `color` and `position` are 0-based.
pub fn difference_bound(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    kind: BasisKind,
    monomial: &QPMonomial,
    color: usize,
    position: usize,
) -> Result<Q> {
    let list = monomial
        .colors
        .get(color)
        .ok_or_else(|| Error::IndexOutOfRange(format!("color {color}")))?;
    let n = list
        .get(position)
        .ok_or_else(|| Error::IndexOutOfRange(format!("position {position} of color {color}")))?
        .charge;
    Ok(bound_for_charge(datum, w, kind, monomial, color, position, n))
}

fn bound_for_charge(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    kind: BasisKind,
    monomial: &QPMonomial,
    color: usize,
    position: usize,
    n: u32,
) -> Q {
    let p = position as i64 + 1;
    let mu = datum.mu[color];
    let mut bound = qi(1 - 2 * p) * mu * qi(n as i64);
    if color > 0 {
        let neighbour: u32 = monomial.colors[color - 1].iter().map(|x| x.charge.min(n)).sum();
        bound -= datum.gram0[color][color - 1] * qi(neighbour as i64);
    }
    if kind == BasisKind::Standard && color == datum.j {
        let excess = (n as i64 - w.k0 as i64).max(0);
        bound -= datum.mu[datum.j] * qi(excess);
    }
    bound
}

/// Charge cap, mode lattice, rel8 bounds and the rel9 gap between equal
/// adjacent charges.
pub fn satisfies_conditions(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    kind: BasisKind,
    cap: ChargeCap,
    monomial: &QPMonomial,
) -> bool {
    if monomial.ncolors() != datum.l {
        return false;
    }
    for (i, list) in monomial.colors.iter().enumerate() {
        let mu = datum.mu[i];
        for (p, qp) in list.iter().enumerate() {
            if !cap.allows(qp.charge) || !on_lattice(&qp.mode, &mu) {
                return false;
            }
            if qp.mode > bound_for_charge(datum, w, kind, monomial, i, p, qp.charge) {
                return false;
            }
            if p > 0 {
                let prev = &list[p - 1];
                if prev.charge == qp.charge && qp.mode > prev.mode - qi(2) * mu * qi(prev.charge as i64) {
                    return false;
                }
            }
        }
    }
    true
}

/// Calls `visit` on every basis monomial with total energy at most `qmax`.
///
/// Charge configurations are bounded through the energy floor: the lowest
/// total energy of a configuration equals `1/2 sum_t R_t^T G R_t` plus a
/// nonnegative shift, which is at least `(lam/2) sum_{i,t} (r_i^(t))^2` for a
/// lower eigenvalue bound `lam` of the Gram matrix.
pub fn visit_basis<F: FnMut(&QPMonomial)>(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    kind: BasisKind,
    cap: ChargeCap,
    qmax: Q,
    visit: F,
) {
    if qmax.is_negative() {
        return;
    }
    let budget = (qi(2) * qmax / datum.eigen_lower_bound()).floor().to_integer() as u64;
    let mut configs = Vec::new();
    charge_configs(datum.l, &mut Vec::new(), budget, cap.max_part(), &mut configs);
    visit_configurations(datum, w, kind, configs, qmax, |_| Q::zero(), visit);
}

/// Visits every monomial whose charge-types are one of `configs` and whose
/// graded energy `total_energy + offset(charge-types)` is at most `qmax`.
/// Modes are walked from the rel8 bound downwards, with the rel9 gap between
/// equal neighbouring charges.
pub fn visit_configurations<C, O, F>(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    kind: BasisKind,
    configs: C,
    qmax: Q,
    offset: O,
    mut visit: F,
) where
    C: IntoIterator<Item = Vec<Vec<u32>>>,
    O: Fn(&[Vec<u32>]) -> Q,
    F: FnMut(&QPMonomial),
{
    let mut walker = Walker { datum, w, kind, visit: &mut visit };
    for charges in configs {
        let budget = qmax - offset(&charges);
        walker.with_charges(&charges, budget);
    }
}

fn charge_configs(l: usize, charges: &mut Vec<Vec<u32>>, budget: u64, max_part: u32, out: &mut Vec<Vec<Vec<u32>>>) {
    if charges.len() == l {
        out.push(charges.clone());
        return;
    }
    let mut found = Vec::new();
    partitions_within(&mut Vec::new(), budget, max_part, &mut found);
    for (partition, cost) in found {
        charges.push(partition);
        charge_configs(l, charges, budget - cost, max_part, out);
        charges.pop();
    }
}

pub fn enumerate_basis(
    datum: &TwistedRootDatum,
    w: &RectangularWeight,
    kind: BasisKind,
    cap: ChargeCap,
    qmax: Q,
) -> Vec<QPMonomial> {
    let mut out = Vec::new();
    visit_basis(datum, w, kind, cap, qmax, |m| out.push(m.clone()));
    out
}

/// Lowest total energy of any monomial with these charge-types: the sum of
/// the negated rel8 bounds (attained with every mode at its bound).
pub fn energy_floor(datum: &TwistedRootDatum, w: &RectangularWeight, kind: BasisKind, charges: &[Vec<u32>]) -> Q {
    let skeleton = skeleton(charges);
    let mut floor = Q::zero();
    for (i, c) in charges.iter().enumerate() {
        for (p, &n) in c.iter().enumerate() {
            floor -= bound_for_charge(datum, w, kind, &skeleton, i, p, n);
        }
    }
    floor
}

fn skeleton(charges: &[Vec<u32>]) -> QPMonomial {
    QPMonomial {
        colors: charges
            .iter()
            .map(|c| c.iter().map(|&charge| QuasiParticle { charge, mode: Q::zero() }).collect())
            .collect(),
    }
}

struct Walker<'a, F> {
    datum: &'a TwistedRootDatum,
    w: &'a RectangularWeight,
    kind: BasisKind,
    visit: &'a mut F,
}

impl<F: FnMut(&QPMonomial)> Walker<'_, F> {
    fn with_charges(&mut self, charges: &[Vec<u32>], budget: Q) {
        let skeleton = skeleton(charges);
        let mut slots = Vec::new();
        for (i, c) in charges.iter().enumerate() {
            for (p, &n) in c.iter().enumerate() {
                let bound = bound_for_charge(self.datum, self.w, self.kind, &skeleton, i, p, n);
                debug_assert!(on_lattice(&bound, &self.datum.mu[i]), "bound {bound} off the mode lattice");
                slots.push(Slot { color: i, charge: n, bound, same_as_prev: p > 0 && c[p - 1] == n });
            }
        }
        // suffix sums of the per-slot energy floors
        let mut floor_after = vec![Q::zero(); slots.len() + 1];
        for s in (0..slots.len()).rev() {
            floor_after[s] = floor_after[s + 1] - slots[s].bound;
        }
        if floor_after[0] > budget {
            return;
        }
        let mut modes = vec![Q::zero(); slots.len()];
        self.assign_modes(&slots, &floor_after, &mut modes, 0, Q::zero(), budget, charges);
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_modes(
        &mut self,
        slots: &[Slot],
        floor_after: &[Q],
        modes: &mut Vec<Q>,
        idx: usize,
        spent: Q,
        budget: Q,
        charges: &[Vec<u32>],
    ) {
        if idx == slots.len() {
            let mut k = 0;
            let colors = charges
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&charge| {
                            let qp = QuasiParticle { charge, mode: modes[k] };
                            k += 1;
                            qp
                        })
                        .collect()
                })
                .collect();
            let monomial = QPMonomial { colors };
            debug_assert!(monomial.total_energy() <= budget);
            (self.visit)(&monomial);
            return;
        }
        let slot = &slots[idx];
        let mu = self.datum.mu[slot.color];
        let mut upper = slot.bound;
        if slot.same_as_prev {
            upper = upper.min(modes[idx - 1] - qi(2) * mu * qi(slot.charge as i64));
        }
        // energy left for this slot once the remaining floors are paid
        let allowance = budget - spent - floor_after[idx + 1];
        let mut m = upper;
        while -m <= allowance {
            modes[idx] = m;
            self.assign_modes(slots, floor_after, modes, idx + 1, spent - m, budget, charges);
            m -= mu;
        }
    }
}

struct Slot {
    color: usize,
    charge: u32,
    bound: Q,
    same_as_prev: bool,
}

/// Partitions (nonincreasing, parts `<= max_part`) whose dual rows satisfy
/// `sum_t (r^(t))^2 = sum_p (2p-1) n_p <= budget`, paired with that cost.
fn partitions_within(parts: &mut Vec<u32>, budget: u64, max_part: u32, out: &mut Vec<(Vec<u32>, u64)>) {
    let cost: u64 = parts.iter().enumerate().map(|(p, &n)| (2 * p as u64 + 1) * n as u64).sum();
    out.push((parts.clone(), cost));
    let weight = 2 * parts.len() as u64 + 1;
    let limit = parts.last().copied().unwrap_or(max_part).min(max_part) as u64;
    let room = (budget - cost) / weight;
    for n in 1..=limit.min(room) {
        parts.push(n as u32);
        partitions_within(parts, budget, max_part, out);
        parts.pop();
    }
}

/// Folds monomials into a series using `weight` to grade each one.
pub fn tally<'a, I, W>(monomials: I, ncolors: usize, qmax: Q, denominator: i64, mut weight: W) -> Result<GradedSeries>
where
    I: IntoIterator<Item = &'a QPMonomial>,
    W: FnMut(&QPMonomial) -> Result<(Q, Vec<Q>, BigInt)>,
{
    let mut out = GradedSeries::zero(ncolors, qmax).with_denominator(denominator)?;
    for m in monomials {
        let (qexp, y, c) = weight(m)?;
        out.insert(Exponent::new(qexp, y), c)?;
    }
    Ok(out)
}

/// Grading by total energy and color-type.
pub fn energy_weight(m: &QPMonomial) -> Result<(Q, Vec<Q>, BigInt)> {
    Ok((m.total_energy(), m.color_type().into_iter().map(|n| qi(n as i64)).collect(), BigInt::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::root_datum::RootSeries;
    use rand::{Rng, SeedableRng};

    fn a2() -> TwistedRootDatum {
        TwistedRootDatum::build(RootSeries::A, 2).unwrap()
    }

    fn w(k0: u32, kj: u32) -> RectangularWeight {
        RectangularWeight::new(k0, kj).unwrap()
    }

    fn mono(colors: Vec<Vec<(u32, Q)>>) -> QPMonomial {
        QPMonomial::new(colors).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&[3, 1]).unwrap(), vec![2, 1, 1]);
        assert_eq!(conjugate(&[]).unwrap(), Vec::<u32>::new());
        assert_eq!(conjugate(&[2, 2, 1]).unwrap(), vec![3, 2]);
        assert!(matches!(conjugate(&[1, 2]), Err(Error::NonMonotonePartition(_))));
    }

    /// Exhaustive: all partitions with parts <= 12 and weight <= 40.
    #[test]
    fn conjugate_is_an_involution() {
        fn walk(parts: &mut Vec<u32>, remaining: u32, max_part: u32, count: &mut usize) {
            let c = conjugate(parts).unwrap();
            assert_eq!(conjugate(&c).unwrap(), *parts);
            assert_eq!(c.iter().sum::<u32>(), parts.iter().sum::<u32>());
            *count += 1;
            for n in 1..=max_part.min(remaining) {
                parts.push(n);
                walk(parts, remaining - n, n, count);
                parts.pop();
            }
        }
        let mut count = 0;
        walk(&mut Vec::new(), 40, 12, &mut count);
        assert!(count > 30_000);
    }

    #[test]
    fn minsum_examples() {
        let d = a2();
        assert_eq!(minsum_quadratic(&d, &[vec![1], vec![1]]), q(1, 2));
        assert_eq!(minsum_quadratic(&d, &[vec![], vec![]]), qi(0));
        let a3 = TwistedRootDatum::build(RootSeries::A, 3).unwrap();
        assert_eq!(minsum_quadratic(&a3, &[vec![1], vec![1], vec![1]]), q(1, 2));
        assert_eq!(min_pairing(&[2, 1], &[2, 1]), 10);
    }

    #[test]
    fn minsum_equals_dual_row_form() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let series = if rng.gen_bool(0.5) { RootSeries::A } else { RootSeries::D };
            let d = TwistedRootDatum::build(series, rng.gen_range(2..=4)).unwrap();
            let p: Vec<Vec<u64>> = (0..d.l)
                .map(|_| (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..4)).collect())
                .collect();
            let rows = dual_rows(&p);
            let via_rows: Q = rows
                .iter()
                .map(|r| {
                    let rq: Vec<Q> = r.iter().map(|&x| qi(x as i64)).collect();
                    crate::linalg::quadratic_form(&d.gram0, &rq)
                })
                .sum::<Q>()
                / qi(2);
            assert_eq!(minsum_quadratic(&d, &p), via_rows);
        }
    }

    #[test]
    fn difference_bound_examples() {
        let d = a2();
        let single = mono(vec![vec![(1, q(-1, 2))], vec![]]);
        let b = |wt, kind| difference_bound(&d, &wt, kind, &single, 0, 0).unwrap();
        assert_eq!(b(w(1, 0), BasisKind::Standard), q(-1, 2));
        assert_eq!(b(w(0, 1), BasisKind::Standard), qi(-1));
        assert_eq!(b(w(0, 1), BasisKind::Verma), q(-1, 2));
        assert_eq!(b(w(3, 2), BasisKind::Verma), q(-1, 2));
        assert!(matches!(
            difference_bound(&d, &w(1, 0), BasisKind::Standard, &single, 1, 0),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn condition_examples() {
        let d = a2();
        let cap = ChargeCap::Finite(1);
        let ok = |wt, m: &QPMonomial| satisfies_conditions(&d, &wt, BasisKind::Standard, cap, m);
        let single = mono(vec![vec![(1, q(-1, 2))], vec![]]);
        assert!(ok(w(1, 0), &single));
        assert!(!ok(w(0, 1), &single));
        assert!(!ok(w(1, 0), &mono(vec![vec![(1, q(-1, 2)), (1, qi(-1))], vec![]])));
        assert!(ok(w(1, 0), &mono(vec![vec![(1, q(-1, 2)), (1, q(-3, 2))], vec![]])));
        // charge above the cap
        assert!(!ok(w(1, 0), &mono(vec![vec![(2, qi(-1))], vec![]])));
        // color 2 has integral modes only
        assert!(!ok(w(1, 0), &mono(vec![vec![(1, q(-1, 2))], vec![(1, q(-1, 2))]])));
    }

    #[test]
    fn enumeration_examples() {
        let d = a2();
        let basis = enumerate_basis(&d, &w(1, 0), BasisKind::Standard, ChargeCap::Finite(1), q(1, 2));
        assert_eq!(basis.len(), 3);
        assert!(basis.contains(&QPMonomial::empty(2)));
        assert!(basis.contains(&mono(vec![vec![(1, q(-1, 2))], vec![]])));
        assert!(basis.contains(&mono(vec![vec![(1, q(-1, 2))], vec![(1, qi(0))]])));

        let upto1 = enumerate_basis(&d, &w(1, 0), BasisKind::Standard, ChargeCap::Finite(1), qi(1));
        // P = ((1),(0)), ((0),(1)), ((1),(1)) and ((2),(1)) each reach energy 1 once
        assert_eq!(upto1.iter().filter(|m| m.total_energy() == qi(1)).count(), 4);

        let ground = enumerate_basis(&d, &w(1, 0), BasisKind::Standard, ChargeCap::Finite(1), qi(0));
        assert_eq!(ground, vec![QPMonomial::empty(2)]);
    }

    #[test]
    fn enumeration_is_monotone_and_valid() {
        for series in [RootSeries::A, RootSeries::D] {
            let d = TwistedRootDatum::build(series, 2).unwrap();
            for (kind, cap) in [(BasisKind::Standard, ChargeCap::Finite(2)), (BasisKind::Verma, ChargeCap::Unbounded)] {
                let wt = w(1, 1);
                let small = enumerate_basis(&d, &wt, kind, cap, q(3, 2));
                let large = enumerate_basis(&d, &wt, kind, cap, qi(3));
                for m in &small {
                    assert!(large.contains(m));
                }
                for m in &large {
                    assert!(satisfies_conditions(&d, &wt, kind, cap, m));
                    for (i, c) in m.colors.iter().enumerate() {
                        assert!(c.iter().all(|p| on_lattice(&p.mode, &d.mu[i])));
                    }
                }
                let mut dedup = large.clone();
                dedup.sort_by_key(|m| m.to_string());
                dedup.dedup();
                assert_eq!(dedup.len(), large.len());
            }
        }
    }

    /// Oracle: every canonical monomial in a box, filtered by the conditions,
    /// agrees with the pruned enumeration. At `qmax = 3/2` on A2 the energy
    /// floors allow at most two particles per color, charges <= 3 and modes
    /// in [-2, 1].
    #[test]
    fn enumeration_matches_box_search() {
        let d = a2();
        let qmax = q(3, 2);
        let color_lists = |mu: Q| -> Vec<Vec<(u32, Q)>> {
            let modes: Vec<Q> = (-4i64..=2).map(|t| q(t, 2)).filter(|m| on_lattice(m, &mu)).collect();
            let single: Vec<(u32, Q)> = (1..=3u32).flat_map(|c| modes.iter().map(move |&m| (c, m))).collect();
            let mut lists = vec![vec![]];
            for &a in &single {
                lists.push(vec![a]);
                for &b in &single {
                    lists.push(vec![a, b]);
                }
            }
            lists
        };
        let c1 = color_lists(d.mu[0]);
        let c2 = color_lists(d.mu[1]);
        for (wt, kind, cap) in [
            (w(1, 0), BasisKind::Standard, ChargeCap::Finite(1)),
            (w(0, 1), BasisKind::Standard, ChargeCap::Finite(1)),
            (w(1, 1), BasisKind::Standard, ChargeCap::Finite(2)),
            (w(0, 2), BasisKind::Verma, ChargeCap::Unbounded),
        ] {
            let mut got: Vec<String> = enumerate_basis(&d, &wt, kind, cap, qmax).iter().map(|m| m.to_string()).collect();
            got.sort();
            let mut want = Vec::new();
            for a in &c1 {
                for b in &c2 {
                    if let Ok(m) = QPMonomial::new(vec![a.clone(), b.clone()]) {
                        if m.total_energy() <= qmax && satisfies_conditions(&d, &wt, kind, cap, &m) {
                            want.push(m.to_string());
                        }
                    }
                }
            }
            want.sort();
            assert_eq!(got, want, "{wt} {kind:?}");
        }
    }

    #[test]
    fn tally_examples() {
        let d = a2();
        let empty: Vec<QPMonomial> = vec![];
        assert!(tally(&empty, 2, qi(1), 2, energy_weight).unwrap().is_empty());
        let one = tally(&[QPMonomial::empty(2)], 2, qi(1), 2, energy_weight).unwrap();
        assert_eq!(one.coefficient(qi(0), &[qi(0), qi(0)]), BigInt::one());
        let basis = enumerate_basis(&d, &w(1, 0), BasisKind::Standard, ChargeCap::Finite(1), q(1, 2));
        let s = tally(&basis, 2, q(1, 2), 2, energy_weight).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.coefficient(q(1, 2), &[qi(1), qi(0)]), BigInt::one());
        assert_eq!(s.coefficient(q(1, 2), &[qi(1), qi(1)]), BigInt::one());
    }

    #[test]
    fn charge_data_views() {
        let m = mono(vec![vec![(3, qi(-5)), (1, qi(-1))], vec![(2, qi(-2)), (2, qi(-4))]]);
        assert_eq!(m.charge_type(0), vec![3, 1]);
        assert_eq!(m.dual_charge_type(0), vec![2, 1, 1]);
        assert_eq!(m.color_type(), vec![4, 4]);
        assert_eq!(m.particle_counts(), vec![2, 2]);
        assert_eq!(m.p_vector(), vec![vec![1, 0, 1], vec![0, 2]]);
        assert_eq!(m.total_energy(), qi(12));
        assert!(QPMonomial::new(vec![vec![(1, qi(-1)), (2, qi(-1))]]).is_err());
        assert!(QPMonomial::new(vec![vec![(1, qi(-2)), (1, qi(-1))]]).is_err());
    }
}
