//! Folded root data for `A_{2l-1}` and `D_{l+1}` under their order-two diagram
//! automorphism.
//!
//! Simple roots are indexed from 0 internally; node `i` (0-based) of the folded
//! diagram is the orbit of finite node `i+1` in the usual numbering. For
//! series A the automorphism is `i <-> 2l-i`; for series D it swaps the two
//! fork nodes `l` and `l+1`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{q, qi, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootSeries {
    A,
    D,
}

impl fmt::Display for RootSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSeries::A => f.write_str("A"),
            RootSeries::D => f.write_str("D"),
        }
    }
}

impl std::str::FromStr for RootSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(RootSeries::A),
            "D" | "d" => Ok(RootSeries::D),
            other => Err(Error::Precondition(format!("unknown series `{other}` (expected A or D)"))),
        }
    }
}

/// Projection of one orbit of positive roots: `pi_0(alpha) = sum a_i alpha_i(0)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitProjection {
    pub a: Vec<i64>,
    pub halfnorm: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedRootDatum {
    pub series: RootSeries,
    /// Number of orbits of simple roots.
    pub l: usize,
    pub rk_g: usize,
    /// The diagram automorphism on 0-based finite nodes.
    pub nu: Vec<usize>,
    pub cartan: Vec<Vec<i64>>,
    pub gram0: Matrix,
    pub mu: Vec<Q>,
    /// 0-based index of the special node `j`.
    pub j: usize,
    pub gamma_coords: Vec<Q>,
    pub positive_roots: Vec<Vec<i64>>,
    pub pos_orbit_projections: Vec<OrbitProjection>,
    eigen_lower_bound: Q,
}

/// `Lambda = k0 Lambda_0 + kj Lambda_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RectangularWeight {
    pub k0: u32,
    pub kj: u32,
}

impl RectangularWeight {
    pub fn new(k0: u32, kj: u32) -> Result<Self> {
        if k0 + kj == 0 {
            return Err(Error::InvalidWeight);
        }
        Ok(Self { k0, kj })
    }

    pub fn level(&self) -> u32 {
        self.k0 + self.kj
    }

    /// All rectangular weights of level `k`, ordered by decreasing `k0`.
    pub fn all_of_level(k: u32) -> Vec<Self> {
        (0..=k).rev().map(|k0| Self { k0, kj: k - k0 }).collect()
    }
}

impl fmt::Display for RectangularWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}L0+{}Lj", self.k0, self.kj)
    }
}

impl TwistedRootDatum {
    pub fn build(series: RootSeries, l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidRank(l));
        }
        let rk_g = match series {
            RootSeries::A => 2 * l - 1,
            RootSeries::D => l + 1,
        };
        let nu: Vec<usize> = match series {
            RootSeries::A => (0..rk_g).map(|a| rk_g - 1 - a).collect(),
            RootSeries::D => (0..rk_g)
                .map(|a| match a {
                    a if a == l - 1 => l,
                    a if a == l => l - 1,
                    a => a,
                })
                .collect(),
        };
        let cartan = finite_cartan(series, rk_g);
        // orbit representative (0-based folded node) of each finite node
        let rep: Vec<usize> = (0..rk_g).map(|a| a.min(nu[a])).collect();

        let mut gram0 = vec![vec![Q::zero(); l]; l];
        for (i, row) in gram0.iter_mut().enumerate() {
            for (r, entry) in row.iter_mut().enumerate() {
                let (a, na) = (i, nu[i]);
                let (b, nb) = (r, nu[r]);
                let s = cartan[a][b] + cartan[a][nb] + cartan[na][b] + cartan[na][nb];
                *entry = q(s, 4);
            }
        }
        let mu: Vec<Q> = (0..l).map(|i| gram0[i][i] / qi(2)).collect();
        let j = match series {
            RootSeries::A => 0,
            RootSeries::D => l - 1,
        };
        let mut rhs = vec![Q::zero(); l];
        rhs[j] = mu[j];
        let gamma_coords = linalg::solve(&gram0, &rhs).expect("folded Gram matrix is nonsingular");

        let positive_roots = positive_roots(&cartan);
        let pos_orbit_projections = fold_orbits(&positive_roots, &nu, &rep, &gram0, l);
        let eigen_lower_bound = linalg::min_eigenvalue_lower_bound(&gram0);

        Ok(Self {
            series,
            l,
            rk_g,
            nu,
            cartan,
            gram0,
            mu,
            j,
            gamma_coords,
            positive_roots,
            pos_orbit_projections,
            eigen_lower_bound,
        })
    }

    /// 1-based index of the special node as used in the usual labelling.
    pub fn j_node(&self) -> usize {
        self.j + 1
    }

    /// One entry per orbit of positive roots, sorted by `a` then half-norm.
    pub fn orbit_projections(&self) -> &[OrbitProjection] {
        &self.pos_orbit_projections
    }

    /// One entry per positive root of `g`, without identifying `nu`-orbits.
    /// Only used as a deliberately wrong variant of the product side.
    pub fn all_root_projections(&self) -> Vec<OrbitProjection> {
        let rep: Vec<usize> = (0..self.rk_g).map(|a| a.min(self.nu[a])).collect();
        let mut out: Vec<OrbitProjection> = self
            .positive_roots
            .iter()
            .map(|root| project(root, &rep, &self.gram0, self.l))
            .collect();
        out.sort();
        out
    }

    pub fn two_element_orbit_count(&self) -> usize {
        self.positive_roots
            .iter()
            .filter(|r| apply_nu(r, &self.nu) != **r)
            .count()
            / 2
    }

    /// `(<alpha_1(0), Lambda>, ..., <alpha_l(0), Lambda>)`.
    pub fn weight_pairing(&self, w: &RectangularWeight) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.l];
        v[self.j] = qi(w.kj as i64) * self.mu[self.j];
        v
    }

    /// Coordinates `c` of a weight in the basis `{alpha_i(0)}` given its
    /// pairings, i.e. the solution of `gram0 c = pairings`.
    pub fn dual_coordinates(&self, pairings: &[Q]) -> Vec<Q> {
        linalg::solve(&self.gram0, pairings).expect("folded Gram matrix is nonsingular")
    }

    /// Rational lower bound on the smallest eigenvalue of `gram0`.
    pub fn eigen_lower_bound(&self) -> Q {
        self.eigen_lower_bound
    }

    /// All `v` in `Z^l` with `(level/2) v^T G v + v . linear <= qmax`, sorted
    /// lexicographically.
    pub fn lattice_ball(&self, level: u32, linear: &[Q], qmax: Q) -> Vec<Vec<i64>> {
        let radius = self.lattice_ball_radius(level, linear, qmax);
        let half_level = qi(level as i64) / qi(2);
        let mut out = Vec::new();
        let mut v = vec![-radius; self.l];
        loop {
            let vq: Vec<Q> = v.iter().map(|&x| qi(x)).collect();
            let value = half_level * linalg::quadratic_form(&self.gram0, &vq) + linalg::dot(&vq, linear);
            if value <= qmax {
                out.push(v.clone());
            }
            // odometer over the box
            let mut idx = self.l;
            loop {
                if idx == 0 {
                    return out;
                }
                idx -= 1;
                if v[idx] < radius {
                    v[idx] += 1;
                    break;
                }
                v[idx] = -radius;
            }
        }
    }

    /// Integer `B` with every solution of the lattice-ball inequality inside
    /// `|v_i| <= B`. With `lam` a lower eigenvalue bound and `L = |linear|_1`,
    /// solutions satisfy `(level lam / 2) x^2 - L x - qmax <= 0` for `x = |v|_2`,
    /// so any `B` past the vertex where that quadratic is positive works.
    pub fn lattice_ball_radius(&self, level: u32, linear: &[Q], qmax: Q) -> i64 {
        let a = qi(level as i64) * self.eigen_lower_bound / qi(2);
        let b: Q = linear.iter().map(|x| x.abs()).sum();
        let vertex = (b / (a * qi(2))).ceil().to_integer();
        let mut radius = vertex.max(0);
        while a * qi(radius) * qi(radius) - b * qi(radius) - qmax <= Q::zero() {
            radius += 1;
        }
        radius
    }
}

fn finite_cartan(series: RootSeries, n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for (a, row) in c.iter_mut().enumerate() {
        row[a] = 2;
    }
    let mut link = |a: usize, b: usize| {
        c[a][b] = -1;
        c[b][a] = -1;
    };
    match series {
        RootSeries::A => {
            for a in 0..n - 1 {
                link(a, a + 1);
            }
        }
        RootSeries::D => {
            // chain 0 - 1 - ... - (n-3), fork (n-3) - (n-2) and (n-3) - (n-1)
            for a in 0..n - 2 {
                link(a, a + 1);
            }
            link(n - 3, n - 1);
        }
    }
    c
}

/// Positive roots of a simply-laced root system as coefficient vectors in the
/// simple-root basis, grown by adding simple roots along strings.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let pairing = |v: &[i64], b: usize| -> i64 { (0..n).map(|a| v[a] * cartan[a][b]).sum() };
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<i64>> = (0..n)
        .map(|a| {
            let mut e = vec![0; n];
            e[a] = 1;
            e
        })
        .collect();
    seen.extend(frontier.iter().cloned());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for root in &frontier {
            for b in 0..n {
                // simply laced: beta + alpha_b is a root iff <beta, alpha_b> = -1
                if pairing(root, b) == -1 {
                    let mut up = root.clone();
                    up[b] += 1;
                    if seen.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

fn apply_nu(root: &[i64], nu: &[usize]) -> Vec<i64> {
    let mut out = vec![0; root.len()];
    for (a, &c) in root.iter().enumerate() {
        out[nu[a]] = c;
    }
    out
}

fn project(root: &[i64], rep: &[usize], gram0: &Matrix, l: usize) -> OrbitProjection {
    let mut a = vec![0i64; l];
    for (node, &c) in root.iter().enumerate() {
        a[rep[node]] += c;
    }
    let av: Vec<Q> = a.iter().map(|&x| qi(x)).collect();
    let halfnorm = linalg::quadratic_form(gram0, &av) / qi(2);
    OrbitProjection { a, halfnorm }
}

fn fold_orbits(roots: &[Vec<i64>], nu: &[usize], rep: &[usize], gram0: &Matrix, l: usize) -> Vec<OrbitProjection> {
    let mut reps: BTreeSet<Vec<i64>> = BTreeSet::new();
    for root in roots {
        let image = apply_nu(root, nu);
        reps.insert(root.clone().min(image));
    }
    let mut out: Vec<OrbitProjection> = reps.iter().map(|r| project(r, rep, gram0, l)).collect();
    out.sort();
    out
}

impl OrbitProjection {
    pub fn is_unit(&self) -> bool {
        self.halfnorm == Q::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[Q]]) -> Matrix {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn builds_a2() {
        let d = TwistedRootDatum::build(RootSeries::A, 2).unwrap();
        assert_eq!(d.rk_g, 3);
        assert_eq!(d.mu, vec![q(1, 2), qi(1)]);
        assert_eq!(d.gram0, mat(&[&[qi(1), qi(-1)], &[qi(-1), qi(2)]]));
        assert_eq!(d.j_node(), 1);
    }

    #[test]
    fn builds_d2() {
        let d = TwistedRootDatum::build(RootSeries::D, 2).unwrap();
        assert_eq!(d.rk_g, 3);
        assert_eq!(d.mu, vec![qi(1), q(1, 2)]);
        assert_eq!(d.gram0, mat(&[&[qi(2), qi(-1)], &[qi(-1), qi(1)]]));
        assert_eq!(d.j_node(), 2);
    }

    #[test]
    fn a3_gram_matches_a5_twisted_exponent() {
        let d = TwistedRootDatum::build(RootSeries::A, 3).unwrap();
        assert_eq!(d.gram0[0][1], q(-1, 2));
        assert_eq!(d.gram0[1][2], qi(-1));
        assert_eq!(d.gram0[2][2], qi(2));
        assert_eq!(d.mu, vec![q(1, 2), q(1, 2), qi(1)]);
    }

    #[test]
    fn rejects_small_rank() {
        assert_eq!(TwistedRootDatum::build(RootSeries::A, 1), Err(Error::InvalidRank(1)));
        assert_eq!(TwistedRootDatum::build(RootSeries::D, 0), Err(Error::InvalidRank(0)));
    }

    #[test]
    fn orbit_tables() {
        let a2 = TwistedRootDatum::build(RootSeries::A, 2).unwrap();
        let got: Vec<(Vec<i64>, Q)> = a2.orbit_projections().iter().map(|o| (o.a.clone(), o.halfnorm)).collect();
        assert_eq!(
            got,
            vec![
                (vec![0, 1], qi(1)),
                (vec![1, 0], q(1, 2)),
                (vec![1, 1], q(1, 2)),
                (vec![2, 1], qi(1)),
            ]
        );
        let d2 = TwistedRootDatum::build(RootSeries::D, 2).unwrap();
        let got: Vec<(Vec<i64>, Q)> = d2.orbit_projections().iter().map(|o| (o.a.clone(), o.halfnorm)).collect();
        assert_eq!(
            got,
            vec![
                (vec![0, 1], q(1, 2)),
                (vec![1, 0], qi(1)),
                (vec![1, 1], q(1, 2)),
                (vec![1, 2], qi(1)),
            ]
        );
        let a3 = TwistedRootDatum::build(RootSeries::A, 3).unwrap();
        assert_eq!(a3.positive_roots.len(), 15);
        assert_eq!(a3.two_element_orbit_count(), 6);
        assert_eq!(a3.orbit_projections().len(), 9);
    }

    #[test]
    fn orbit_counts_across_ranks() {
        for l in 2..=6 {
            let a = TwistedRootDatum::build(RootSeries::A, l).unwrap();
            assert_eq!(a.positive_roots.len(), l * (2 * l - 1));
            assert_eq!(a.orbit_projections().len(), l * l);
            let d = TwistedRootDatum::build(RootSeries::D, l).unwrap();
            assert_eq!(d.positive_roots.len(), l * (l + 1));
            assert_eq!(
                d.orbit_projections().len(),
                d.positive_roots.len() - d.two_element_orbit_count()
            );
        }
    }

    #[test]
    fn folding_and_gamma_invariants() {
        for series in [RootSeries::A, RootSeries::D] {
            for l in 2..=5 {
                let d = TwistedRootDatum::build(series, l).unwrap();
                for a in 0..d.rk_g {
                    assert_eq!(d.nu[d.nu[a]], a);
                    for b in 0..d.rk_g {
                        assert_eq!(d.cartan[d.nu[a]][d.nu[b]], d.cartan[a][b]);
                    }
                }
                assert!(linalg::is_positive_definite(&d.gram0));
                for (i, m) in d.mu.iter().enumerate() {
                    let expected = match (series, i == l - 1) {
                        (RootSeries::A, false) | (RootSeries::D, true) => q(1, 2),
                        _ => qi(1),
                    };
                    assert_eq!(*m, expected, "{series}{l} mu_{i}");
                }
                let back = linalg::mat_vec(&d.gram0, &d.gamma_coords);
                for (i, x) in back.iter().enumerate() {
                    let want = if i == d.j { d.mu[d.j] } else { Q::zero() };
                    assert_eq!(*x, want);
                }
            }
        }
    }

    #[test]
    fn weight_pairings() {
        let a2 = TwistedRootDatum::build(RootSeries::A, 2).unwrap();
        let d2 = TwistedRootDatum::build(RootSeries::D, 2).unwrap();
        let w = |k0, kj| RectangularWeight::new(k0, kj).unwrap();
        assert_eq!(a2.weight_pairing(&w(1, 0)), vec![qi(0), qi(0)]);
        assert_eq!(a2.weight_pairing(&w(0, 2)), vec![qi(1), qi(0)]);
        assert_eq!(d2.weight_pairing(&w(1, 1)), vec![qi(0), q(1, 2)]);
        assert_eq!(RectangularWeight::new(0, 0), Err(Error::InvalidWeight));
    }

    #[test]
    fn dual_coordinate_examples() {
        let a2 = TwistedRootDatum::build(RootSeries::A, 2).unwrap();
        let d2 = TwistedRootDatum::build(RootSeries::D, 2).unwrap();
        assert_eq!(a2.dual_coordinates(&[qi(1), qi(-1)]), vec![qi(1), qi(0)]);
        assert_eq!(a2.dual_coordinates(&[qi(1), qi(0)]), vec![qi(2), qi(1)]);
        assert_eq!(d2.dual_coordinates(&[qi(0), q(1, 2)]), vec![q(1, 2), qi(1)]);
    }

    #[test]
    fn lattice_ball_examples() {
        let a2 = TwistedRootDatum::build(RootSeries::A, 2).unwrap();
        let d2 = TwistedRootDatum::build(RootSeries::D, 2).unwrap();
        let zero = [qi(0), qi(0)];
        assert_eq!(a2.lattice_ball(1, &zero, qi(0)), vec![vec![0, 0]]);
        // (1,1) is the projection of alpha_1 + alpha_2, half-norm 1/2
        assert_eq!(
            a2.lattice_ball(1, &zero, q(1, 2)),
            vec![vec![-1, -1], vec![-1, 0], vec![0, 0], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(d2.lattice_ball(2, &zero, q(1, 2)), vec![vec![0, 0]]);
        assert_eq!(d2.lattice_ball(2, &zero, qi(1)), vec![vec![-1, -1], vec![0, -1], vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    /// Oracle: plain box scan with a radius far beyond any solution.
    #[test]
    fn lattice_ball_matches_box_scan() {
        for series in [RootSeries::A, RootSeries::D] {
            let d = TwistedRootDatum::build(series, 2).unwrap();
            for level in 1..=3u32 {
                for linear in [[qi(0), qi(0)], [q(1, 2), qi(0)], [qi(-1), q(3, 2)]] {
                    for qn in 0..=8 {
                        let qmax = q(qn, 2);
                        let mut want = Vec::new();
                        for a in -30i64..=30 {
                            for b in -30i64..=30 {
                                let v = [qi(a), qi(b)];
                                let val = qi(level as i64) / qi(2) * linalg::quadratic_form(&d.gram0, &v)
                                    + linalg::dot(&v, &linear);
                                if val <= qmax {
                                    want.push(vec![a, b]);
                                }
                            }
                        }
                        let got = d.lattice_ball(level, &linear, qmax);
                        assert_eq!(got, want, "{series} level {level} linear {linear:?} qmax {qmax}");
                        let r = d.lattice_ball_radius(level, &linear, qmax);
                        assert!(r <= 30, "radius {r} exceeds the oracle box");
                    }
                }
            }
        }
    }
}
