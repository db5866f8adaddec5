//! Randomized exact checks over regular triangulations with random signs.
//!
//! Each instance is a regular triangulation `tau` of `m Delta^n` (random
//! integer heights on a random subset of its lattice points) together with
//! its dilation `2 tau` and random signs on it. Every check here is exact;
//! a single violation fails the suite.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::binomial;
use crate::complex::{build_with, dehn_sommerville_residuals, euler_characteristic, glued_face_counts, Ambient};
use crate::critical::{Audit, CriticalAnalysis};
use crate::error::Result;
use crate::lattice::{LatticePoint, LatticePolytope};
use crate::par::{self, Mode};
use crate::signs::SignDistribution;
use crate::triangulation::{regular_from_heights, Triangulation};

/// Names of the check families, in report order.
pub const CHECKS: [&str; 12] = [
    "interior-count-inequality",
    "primitive-identity",
    "interior-vertex-bounds",
    "dehn-sommerville",
    "refinement-monotone",
    "critical-copies",
    "index-bounds",
    "sign-visibility",
    "facet-pairs",
    "incidence",
    "vertex-stars",
    "pipeline",
];

/// How an instance picks its points and heights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Profile {
    /// Every lattice point, lifted to a noisy paraboloid so all stay vertices.
    Maximal,
    /// A random point subset containing an interior point, paraboloid lift.
    InteriorSubset,
    /// A random point subset with uniform random heights; some points may
    /// end up above the lower hull.
    RandomSubset,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub m: i64,
    pub profile: Profile,
    /// Triangulation of `m Delta^n`.
    pub base: Triangulation,
    /// `2 base`, the input the sign-dependent checks run on.
    pub doubled: Triangulation,
    pub signs: SignDistribution,
    /// A triangulation and a lattice point of its polytope that is not one
    /// of its vertices, for the refinement check.
    pub coarse: Option<(Triangulation, LatticePoint)>,
}

/// Point budget per dimension keeps the brute-force lower hull cheap.
fn point_budget(n: usize) -> usize {
    match n {
        1 | 2 => 28,
        _ => 20,
    }
}

/// `1000 |p|^2` plus noise below 500. Any lattice point sits at least 1000
/// below the paraboloid's chords through other lattice points, so the noise
/// never lifts a point off the lower hull.
fn paraboloid(rng: &mut ChaCha8Rng, points: &[LatticePoint]) -> Vec<i64> {
    points.iter().map(|p| 1000 * p.0.iter().map(|x| x * x).sum::<i64>() + rng.gen_range(0..500)).collect()
}

fn triangulate(rng: &mut ChaCha8Rng, points: &[LatticePoint], convex: bool) -> Result<(Triangulation, Vec<i64>)> {
    loop {
        let heights = if convex { paraboloid(rng, points) } else { points.iter().map(|_| rng.gen_range(0..1_000_000)).collect() };
        if let Some(t) = regular_from_heights(points, &heights)? {
            return Ok((t, heights));
        }
    }
}

pub fn random_instance(seed: u64, n: usize, m: i64, profile: Profile) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polytope = LatticePolytope::standard_simplex(n, m);
    let corners = polytope.vertices().to_vec();
    let mut others: Vec<LatticePoint> = polytope.lattice_points().into_iter().filter(|p| !corners.contains(p)).collect();
    others.shuffle(&mut rng);
    let budget = point_budget(n).saturating_sub(corners.len());
    let keep = match profile {
        Profile::Maximal => others.len(),
        _ if others.len() <= budget => others.len(),
        _ => rng.gen_range(budget / 2..=budget),
    };
    let mut chosen: Vec<LatticePoint> = others[..keep].to_vec();
    if profile == Profile::InteriorSubset && !chosen.iter().any(|p| polytope.contains_interior(p.coords())) {
        if let Some(p) = others[keep..].iter().find(|p| polytope.contains_interior(p.coords())) {
            chosen.pop();
            chosen.push(p.clone());
        }
    }
    let mut points = corners.clone();
    points.extend(chosen.iter().cloned());
    let convex = profile != Profile::RandomSubset;
    let (base, heights) = triangulate(&mut rng, &points, convex)?;
    let doubled = base.dilate(2);
    let signs = SignDistribution::new((0..doubled.points().len()).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect())?;

    // refinement pair: a missing point if there is one, else drop a vertex
    let missing = others.iter().find(|p| base.point_index(p).is_none()).cloned();
    let coarse = match missing {
        Some(p) => Some((base.clone(), p)),
        None if !chosen.is_empty() => {
            let k = rng.gen_range(0..chosen.len());
            let dropped = chosen[k].clone();
            let (pts, hs): (Vec<LatticePoint>, Vec<i64>) =
                points.iter().cloned().zip(heights.iter().copied()).filter(|(p, _)| *p != dropped).unzip();
            regular_from_heights(&pts, &hs)?.map(|t| (t, dropped))
        }
        None => None,
    };
    Ok(Instance { seed, m, profile, base, doubled, signs, coarse })
}

fn check(audit: &mut Audit, ok: bool, msg: impl FnOnce() -> String) {
    audit.checked += 1;
    if !ok {
        audit.violations.push(msg());
    }
}

/// Run every check family on one instance.
pub fn check_instance(inst: &Instance, mode: Mode) -> Result<BTreeMap<&'static str, Audit>> {
    let mut out: BTreeMap<&'static str, Audit> = CHECKS.iter().map(|&c| (c, Audit::default())).collect();
    let tag = |s: &str| format!("seed {}: {s}", inst.seed);
    let tau = &inst.base;
    let n = tau.dim();
    let poly = tau.polytope();
    let s = tau.interior_face_counts().0;
    let lstar: Vec<i128> = (0..=n as i64 + 1).map(|k| if k == 0 { 0 } else { poly.interior_count(k) as i128 }).collect();

    let a = out.get_mut("interior-count-inequality").unwrap();
    for k in 1..=n + 1 {
        let rhs: i128 = (0..k).map(|i| binomial(k as i64 - 1, i as i64) * s[i] as i128).sum();
        check(a, lstar[k] >= rhs, || tag(&format!("k={k}: l* = {} < {rhs}", lstar[k])));
    }

    if tau.is_primitive() {
        let a = out.get_mut("primitive-identity").unwrap();
        for k in 1..=n + 1 {
            let rhs: i128 = (1..=k)
                .map(|j| {
                    let sign = if (j + k) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(k as i64 - 1, j as i64 - 1) * lstar[j]
                })
                .sum();
            check(a, s[k - 1] as i128 == rhs, || tag(&format!("k={k}: s = {} but alternating sum {rhs}", s[k - 1])));
        }
    }

    let a = out.get_mut("interior-vertex-bounds").unwrap();
    check(a, s[0] as i128 <= lstar[1], || tag(&format!("s0 = {} > l* = {}", s[0], lstar[1])));
    if n >= 2 {
        check(a, s[1] as i128 <= lstar[2] - lstar[1], || tag(&format!("s1 = {} > {}", s[1], lstar[2] - lstar[1])));
    }

    let a = out.get_mut("dehn-sommerville").unwrap();
    let f = glued_face_counts(tau, &Ambient::Projective { m: inst.m })?;
    let r = dehn_sommerville_residuals(&f);
    check(a, r.iter().all(|x| *x == 0), || tag(&format!("glued counts {f:?}, residuals {r:?}")));

    if let Some((coarse, p)) = &inst.coarse {
        let a = out.get_mut("refinement-monotone").unwrap();
        let finer = coarse.refine_add_vertex(p)?;
        let c = coarse.interior_face_counts().0;
        let t = finer.interior_face_counts().0;
        let before = c.get(1).copied().unwrap_or(0) as i64 - n as i64 * c[0] as i64;
        let after = t.get(1).copied().unwrap_or(0) as i64 - n as i64 * t[0] as i64;
        check(a, after >= before, || tag(&format!("adding {p:?}: s1 - n s0 went {before} -> {after}")));
    }

    let t2 = &inst.doubled;
    let analysis = CriticalAnalysis::auto_with(mode, t2)?;
    out.get_mut("critical-copies").unwrap().merge(analysis.audit_critical_copies(&inst.signs));
    out.get_mut("index-bounds").unwrap().merge(analysis.audit_index_bounds());
    out.get_mut("sign-visibility").unwrap().merge(analysis.audit_sign_visibility(&inst.signs));
    out.get_mut("facet-pairs").unwrap().merge(analysis.audit_facet_pairs());
    out.get_mut("incidence").unwrap().merge(analysis.audit_incidence());
    if n >= 3 {
        out.get_mut("vertex-stars").unwrap().merge(analysis.audit_vertex_stars(&inst.signs));
    }

    let a = out.get_mut("pipeline").unwrap();
    let ambient = Ambient::Projective { m: 2 * inst.m };
    let complex = build_with(mode, t2, &inst.signs, &ambient)?;
    let betti = complex.betti_z2_with(mode);
    let chi = euler_characteristic(t2, &inst.signs, &ambient)?;
    check(a, complex.boundary_squared_vanishes(), || tag("boundary of boundary is nonzero"));
    check(a, betti.euler() == chi, || tag(&format!("betti {:?} but chi {chi}", betti.0)));
    check(a, complex.euler_from_cells() == chi, || tag(&format!("cell count chi {} vs {chi}", complex.euler_from_cells())));
    check(a, betti.0.first().copied().unwrap_or(0) == complex.connected_components(), || {
        tag(&format!("b0 {:?} vs {} components", betti.0.first(), complex.connected_components()))
    });

    for audit in out.values_mut() {
        for v in &mut audit.violations {
            if !v.starts_with("seed ") {
                *v = tag(v);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub instances: usize,
    pub seed: u64,
    pub max_n: usize,
    pub max_m: i64,
    pub mode: Mode,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { instances: 800, seed: 0x5eed, max_n: 3, max_m: 6, mode: Mode::default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub instances: usize,
    /// Instances per dimension.
    pub by_dim: BTreeMap<usize, usize>,
    /// Instances on which each family ran at least one check.
    pub covered: BTreeMap<String, usize>,
    pub audits: BTreeMap<String, Audit>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.audits.values().all(Audit::ok)
    }

    pub fn absorb(&mut self, dim: usize, audits: BTreeMap<&'static str, Audit>) {
        self.instances += 1;
        *self.by_dim.entry(dim).or_default() += 1;
        for (name, a) in audits {
            if a.checked > 0 {
                *self.covered.entry(name.to_string()).or_default() += 1;
            }
            self.audits.entry(name.to_string()).or_default().merge(a);
        }
    }

    /// One line per family.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for name in CHECKS {
            let a = self.audits.get(name).cloned().unwrap_or_default();
            let covered = self.covered.get(name).copied().unwrap_or(0);
            out += &format!(
                "{:<26} {:>4} instances {:>8} checks {:>3} violations\n",
                name,
                covered,
                a.checked,
                a.violations.len()
            );
        }
        out
    }
}

/// Shape of instance `i`: profiles rotate so that every check family gets
/// a comparable share of applicable instances. Degrees run over `2..=max_m`.
pub fn instance_shape(cfg: &SuiteConfig, i: usize) -> (usize, i64, Profile) {
    let top = cfg.max_n.max(1);
    let low = top.min(2);
    let (n, profile, lo, hi) = match i % 4 {
        0 => (low, Profile::Maximal, 2, cfg.max_m),
        // full lattices of m Delta^3 grow fast; keep the lower hull cheap
        1 => (top, Profile::Maximal, 2, if top >= 3 { cfg.max_m.min(3) } else { cfg.max_m }),
        2 => (top, Profile::InteriorSubset, n_interior_degree(top), cfg.max_m),
        _ => (if (i / 4) % 2 == 0 { low } else { top }, Profile::RandomSubset, 2, cfg.max_m),
    };
    let hi = hi.max(lo);
    let m = lo + ((i / 4) as i64) % (hi - lo + 1);
    (n, m, profile)
}

/// Smallest degree whose simplex has an interior lattice point.
fn n_interior_degree(n: usize) -> i64 {
    n as i64 + 1
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let results = par::map_range_with(cfg.mode, 0..cfg.instances, |i| {
        let (n, m, profile) = instance_shape(cfg, i);
        let inst = random_instance(cfg.seed.wrapping_add(i as u64), n, m, profile)?;
        // instances run in parallel, so each runs its own checks sequentially
        check_instance(&inst, Mode::Sequential).map(|a| (n, a))
    });
    let mut report = SuiteReport::default();
    for r in results {
        let (n, audits) = r?;
        report.absorb(n, audits);
    }
    Ok(report)
}
