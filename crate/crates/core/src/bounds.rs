//! Hodge numbers of hypersurfaces in projective space, Morse-type bounds
//! from critical-copy counts, and the partial-sum and total bounds on
//! Betti numbers with their exact proof ingredients.

use serde::{Deserialize, Serialize};

use crate::arith::binomial;
use crate::complex::{self, Ambient, BettiVector};
use crate::critical::{CriticalAnalysis, IndexHistogram};
use crate::error::{Error, Result};
use crate::lattice::LatticePolytope;
use crate::signs::SignDistribution;
use crate::triangulation::Triangulation;

/// Hodge numbers `h[p][q]` of a smooth degree-`m` hypersurface in `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeTable {
    pub n: usize,
    pub m: i64,
    pub h: Vec<Vec<i128>>,
}

/// `#{a in Z^(n+1) : 0 < a_i < m, sum a_i = (q+1) m}` by inclusion-exclusion.
pub fn primitive_hodge(n: usize, m: i64, q: usize) -> i128 {
    let parts = n as i64 + 1;
    // b_i = a_i - 1 in [0, m-2], sum b = target
    let target = (q as i64 + 1) * m - parts;
    if target < 0 || m < 2 {
        return 0;
    }
    (0..=parts)
        .map(|j| {
            let rest = target - j * (m - 1);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * binomial(parts, j) * binomial(rest + parts - 1, parts - 1)
        })
        .sum()
}

pub fn hodge_numbers(n: usize, m: i64) -> Result<HodgeTable> {
    if n < 2 || m < 1 {
        return Err(Error::InvalidParameter(format!("hodge numbers need n >= 2 and m >= 1, got n={n}, m={m}")));
    }
    let mut h = vec![vec![0i128; n]; n];
    for (p, row) in h.iter_mut().enumerate() {
        row[p] = 1;
    }
    for q in 0..n {
        let p = n - 1 - q;
        h[p][q] = primitive_hodge(n, m, q) + i128::from(p == q);
    }
    Ok(HodgeTable { n, m, h })
}

impl HodgeTable {
    pub fn get(&self, p: usize, q: usize) -> i128 {
        self.h.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    /// `h^{i, n-1-i}` for `i = 0..n`.
    pub fn middle_row(&self) -> Vec<i128> {
        (0..self.n).map(|i| self.get(i, self.n - 1 - i)).collect()
    }

    /// Betti numbers `b_j = sum_{p+q=j} h^{p,q}`, `j = 0..=2(n-1)`.
    pub fn betti(&self) -> Vec<i128> {
        (0..=2 * (self.n - 1))
            .map(|j| (0..self.n).filter(|&p| j >= p && j - p < self.n).map(|p| self.get(p, j - p)).sum())
            .collect()
    }

    pub fn betti_total(&self) -> i128 {
        self.betti().iter().sum()
    }

    pub fn euler(&self) -> i128 {
        self.betti().iter().enumerate().map(|(j, &b)| if j % 2 == 0 { b } else { -b }).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    /// The inequality only holds up to lower-order terms; reported, never failed.
    AsymptoticOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: i128,
    pub rhs: i128,
    pub slack: i128,
    pub exact: bool,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, lhs: i128, rhs: i128, exact: bool) -> Self {
        let verdict = match (exact, lhs <= rhs) {
            (false, _) => Verdict::AsymptoticOnly,
            (true, true) => Verdict::Holds,
            (true, false) => Verdict::Violated,
        };
        BoundReport { name: name.into(), lhs, rhs, slack: rhs - lhs, exact, verdict }
    }

    /// Hard failure: an exact inequality that does not hold.
    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    pub fn within(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// `b_i <= min(c_i^- + c_{n-i}^+, c_{n-i-1}^- + c_{i+1}^+)` per `i`.
pub fn morse_bounds(hist: &IndexHistogram, betti: &BettiVector) -> Vec<BoundReport> {
    let n = hist.paired.len();
    (0..n)
        .map(|i| {
            let rhs = hist.paired[i].min(hist.paired[n - 1 - i]) as i128;
            BoundReport::new(format!("morse b_{i}"), betti.0.get(i).copied().unwrap_or(0) as i128, rhs, false)
        })
        .collect()
}

/// Weight `(k+n-1-i)! / ((k-1-i)! n!)` of `b_i` in the partial sum of order `k`.
pub fn partial_sum_weight(n: usize, k: usize, i: usize) -> i128 {
    binomial((k + n - 1 - i) as i64, n as i64)
}

fn degree_of(tri: &Triangulation) -> Result<i64> {
    tri.polytope().as_standard_simplex().ok_or_else(|| Error::IncompatibleAmbient {
        ambient: "projective".into(),
        reason: "polytope is not a dilated standard simplex".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem41Report {
    pub k: usize,
    pub betti: Vec<usize>,
    /// Weighted Betti sum against weighted Hodge sum.
    pub main: BoundReport,
    /// `sum C(k-1,i) s_i(tau/2) <= l*(k Delta_{m/2})`.
    pub ingredient: BoundReport,
    /// `s_1(tau/2) - n s_0(tau/2) <= l*(2 Delta_{m/2}) - (n+1) l*(Delta_{m/2})`.
    pub b1_ingredient: BoundReport,
    /// `b_1 <= h^{1,n-2}`.
    pub b1: Option<BoundReport>,
}

/// Partial-sum bound of order `k` for the projective patchwork of a
/// triangulation with all vertices even.
pub fn theorem41_report(tri: &Triangulation, signs: &SignDistribution, k: usize) -> Result<Theorem41Report> {
    let n = tri.dim();
    if !tri.is_t2() {
        return Err(Error::NotT2);
    }
    if k < 1 || k + 1 > n.max(2) {
        return Err(Error::InvalidParameter(format!("order k={k} outside 1..={}", n.max(2) - 1)));
    }
    let m = degree_of(tri)?;
    let c = complex::build(tri, signs, &Ambient::Projective { m })?;
    let betti = c.betti_z2();
    let hodge = hodge_numbers(n, m)?;
    let mid = hodge.middle_row();
    let lhs: i128 = (0..k).map(|i| partial_sum_weight(n, k, i) * betti.0[i] as i128).sum();
    let rhs: i128 = (0..k).map(|i| partial_sum_weight(n, k, i) * mid[i]).sum();
    let half = tri.halved()?;
    let s = half.interior_face_counts().0;
    let small = LatticePolytope::standard_simplex(n, m / 2);
    let ing_lhs: i128 = (0..k).map(|i| binomial(k as i64 - 1, i as i64) * s[i] as i128).sum();
    let ingredient = BoundReport::new(format!("interior points, order {k}"), ing_lhs, small.interior_count(k as i64) as i128, true);
    let b1_ingredient = BoundReport::new(
        "edges minus n times vertices",
        s[1] as i128 - n as i128 * s[0] as i128,
        small.interior_count(2) as i128 - (n as i128 + 1) * small.interior_count(1) as i128,
        true,
    );
    let b1 = (n >= 2).then(|| BoundReport::new("b_1 against h^{1,n-2}", betti.0.get(1).copied().unwrap_or(0) as i128, hodge.get(1, n - 2), false));
    Ok(Theorem41Report {
        k,
        betti: betti.0.clone(),
        main: BoundReport::new(format!("weighted Betti sum, order {k}"), lhs, rhs, false),
        ingredient,
        b1_ingredient,
        b1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalsReport {
    pub betti: Vec<usize>,
    pub histogram: IndexHistogram,
    /// `#cells + 2 D <= vol(tau/2)`, `D` the interior even points that are not vertices.
    pub cell_count: BoundReport,
    /// Interior vertex stars without a bad cell (must be 0).
    pub star_audit: BoundReport,
    /// Total real Betti number against total complex Betti number.
    pub smith_thom: BoundReport,
    /// Total real Betti number against the paired critical-copy count.
    pub morse_total: BoundReport,
}

pub fn totals_report(tri: &Triangulation, signs: &SignDistribution, analysis: &CriticalAnalysis) -> Result<TotalsReport> {
    let n = tri.dim();
    if !tri.is_t2() {
        return Err(Error::NotT2);
    }
    let m = degree_of(tri)?;
    let c = complex::build(tri, signs, &Ambient::Projective { m })?;
    let betti = c.betti_z2();
    let half = tri.halved()?;
    let missing = half
        .polytope()
        .lattice_points()
        .iter()
        .filter(|p| half.polytope().contains_interior(p.coords()) && half.point_index(p).is_none())
        .count();
    let volume: i128 = half.polytope().normalized_volume().try_into().map_err(|_| Error::InvalidInput("volume overflow".into()))?;
    let cell_count = BoundReport::new("cells plus twice the missing interior points", (tri.cells().len() + 2 * missing) as i128, volume, n >= 2);
    let stars = analysis.audit_vertex_stars(signs);
    let star_audit = BoundReport::new("vertex stars without a bad cell", stars.violations.len() as i128, 0, n >= 3);
    let hodge = hodge_numbers(n.max(2), m)?;
    let real_total = betti.total() as i128;
    let histogram = analysis.index_histogram(signs)?;
    Ok(TotalsReport {
        betti: betti.0.clone(),
        smith_thom: BoundReport::new("Smith-Thom", real_total, hodge.betti_total(), true),
        morse_total: BoundReport::new("total Betti against critical copies", real_total, histogram.paired_total() as i128, false),
        histogram,
        cell_count,
        star_audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dimension of the degree-`d` part of `C[x_0..x_n] / (x_i^(m-1))`,
    /// by listing monomials.
    fn jacobian_ring_dim(n: usize, m: i64, d: i64) -> i128 {
        fn rec(left: usize, max: i64, d: i64) -> i128 {
            if left == 0 {
                return i128::from(d == 0);
            }
            (0..=max.min(d)).map(|e| rec(left - 1, max, d - e)).sum()
        }
        if d < 0 {
            return 0;
        }
        rec(n + 1, m - 2, d)
    }

    #[test]
    fn hodge_matches_monomial_oracle() {
        for n in 2..=4 {
            for m in 2..=5 {
                let t = hodge_numbers(n, m).unwrap();
                for q in 0..n {
                    let oracle = jacobian_ring_dim(n, m, (q as i64 + 1) * m - n as i64 - 1);
                    assert_eq!(primitive_hodge(n, m, q), oracle, "n={n} m={m} q={q}");
                    assert_eq!(t.get(q, n - 1 - q), t.get(n - 1 - q, q));
                }
                // h^{n-1,0} = l*(Delta_m^n)
                let l = LatticePolytope::standard_simplex(n, m).interior_count(1) as i128;
                assert_eq!(t.get(n - 1, 0), l);
                // chi of a degree-m hypersurface in P^n
                let mm = m as i128;
                let chi = ((1 - mm).pow(n as u32 + 1) - 1) / mm + n as i128 + 1;
                assert_eq!(t.euler(), chi, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn hodge_anchors() {
        assert_eq!(hodge_numbers(2, 4).unwrap().get(1, 0), 3);
        let k3 = hodge_numbers(3, 4).unwrap();
        assert_eq!(primitive_hodge(3, 4, 1), 19);
        assert_eq!(k3.get(1, 1), 20);
        assert_eq!(k3.get(2, 0), 1);
        assert_eq!(k3.betti_total(), 24);
        let conic = hodge_numbers(2, 2).unwrap();
        assert_eq!(conic.middle_row(), vec![0, 0]);
        assert!(hodge_numbers(1, 3).is_err());
    }

    #[test]
    fn report_verdicts() {
        assert_eq!(BoundReport::new("a", 1, 2, true).verdict, Verdict::Holds);
        assert_eq!(BoundReport::new("a", 3, 2, true).verdict, Verdict::Violated);
        let r = BoundReport::new("a", 3, 2, false);
        assert_eq!(r.verdict, Verdict::AsymptoticOnly);
        assert!(!r.failed() && !r.within());
        assert_eq!(r.slack, -1);
        assert_eq!(partial_sum_weight(2, 1, 0), 1);
        assert_eq!(partial_sum_weight(3, 2, 0), 4);
    }

    #[test]
    fn morse_bound_uses_both_pairings() {
        let hist = IndexHistogram {
            origin: vec![-9, -10, -11],
            s: vec![0, 1, 1, 1],
            s_bar: vec![0, 1, 1, 1],
            paired: vec![8, 16, 24],
            c_plus_max: vec![0, 0, 0, 0],
            c_minus_max: vec![0, 0, 0, 0],
        };
        let b = BettiVector(vec![2, 0, 2]);
        let r = morse_bounds(&hist, &b);
        assert_eq!(r.iter().map(|x| x.rhs).collect::<Vec<_>>(), vec![8, 16, 8]);
        let empty = IndexHistogram { paired: vec![0, 0], ..hist };
        assert!(morse_bounds(&empty, &BettiVector(vec![0, 0])).iter().all(|x| x.rhs == 0));
    }
}
