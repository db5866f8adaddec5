//! The analysis pipeline behind `patchwork analyze`: runs the requested
//! stages on a problem and collects every exact check that failed.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::bounds::{morse_bounds, theorem41_report, totals_report, BoundReport, Theorem41Report, TotalsReport};
use crate::complex::{build_with, euler_characteristic, mixed_census, Ambient};
use crate::critical::{find_generic_origin, Audit, CriticalAnalysis, IndexHistogram};
use crate::error::{Error, Result};
use crate::io::Problem;
use crate::par::Mode;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub betti: bool,
    pub chi: bool,
    pub census: bool,
    pub critical: bool,
    /// Orders of the partial-sum report; also triggers the totals report.
    pub bounds: Vec<usize>,
    pub mode: Mode,
}

impl Options {
    /// Betti numbers and Euler characteristic, the default stages.
    pub fn basic() -> Self {
        Options { betti: true, chi: true, ..Options::default() }
    }

    fn any(&self) -> bool {
        self.betti || self.chi || self.census || self.critical || !self.bounds.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub construction: Option<String>,
    pub dim: usize,
    pub points: usize,
    pub cells: usize,
    pub ambient: Ambient,
    pub all_even: bool,
    /// Whether the shipped heights certify convexity; absent without heights.
    pub convex: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub cell_counts: Vec<usize>,
    pub betti: Vec<usize>,
    pub components: usize,
    /// Components with a cell on the boundary of the polytope (affine only).
    pub boundary_components: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub face_dim: usize,
    pub carrier_dim: usize,
    pub base: usize,
    pub copies: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Critical {
    pub histogram: IndexHistogram,
    pub audits: BTreeMap<String, Audit>,
    pub morse: Vec<BoundReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub topology: Option<Topology>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Vec<CensusRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical: Option<Critical>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub partial_sums: Vec<Theorem41Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub totals: Option<TotalsReport>,
    /// Exact checks that failed; empty means success.
    pub failures: Vec<String>,
}

pub fn analyze(problem: &Problem, opts: &Options) -> Result<Report> {
    let opts = if opts.any() { opts.clone() } else { Options { mode: opts.mode, ..Options::basic() } };
    let tri = &problem.triangulation;
    let signs = &problem.signs;
    let ambient = &problem.ambient;
    let n = tri.dim();
    let validation = tri.validate();
    if !validation.ok() {
        return Err(Error::InvalidInput(format!("not a triangulation: {}", validation.violations.join("; "))));
    }
    signs.check_total(tri)?;
    let mut failures = Vec::new();
    let convex = problem.heights.as_ref().map(|h| tri.certify_convexity(h)).transpose()?;
    if convex == Some(false) {
        failures.push("the heights do not certify convexity".to_string());
    }
    let summary = Summary {
        construction: problem.construction.clone(),
        dim: n,
        points: tri.points().len(),
        cells: tri.cells().len(),
        ambient: ambient.clone(),
        all_even: tri.is_t2(),
        convex,
    };

    let complex = build_with(opts.mode, tri, signs, ambient)?;
    if !complex.boundary_squared_vanishes() {
        failures.push("boundary of boundary is nonzero".into());
    }
    let betti = complex.betti_z2_with(opts.mode);
    let components = complex.connected_components();
    let chi = euler_characteristic(tri, signs, ambient)?;
    if opts.betti || opts.chi {
        if betti.0.first().copied().unwrap_or(0) != components {
            failures.push(format!("b_0 = {:?} but {components} components", betti.0.first()));
        }
        if betti.euler() != chi || complex.euler_from_cells() != chi {
            failures.push(format!(
                "Euler characteristic {chi} from multiplicities, {} from cells, {} from Betti numbers",
                complex.euler_from_cells(),
                betti.euler()
            ));
        }
    }
    let topology = opts.betti.then(|| Topology {
        cell_counts: complex.cell_counts(),
        betti: betti.0.clone(),
        components,
        boundary_components: matches!(ambient, Ambient::Affine).then(|| complex.components_touching_boundary(tri)),
    });

    let census = opts.census.then(|| {
        mixed_census(tri, signs)
            .into_iter()
            .map(|((face_dim, carrier_dim), (base, copies))| CensusRow { face_dim, carrier_dim, base, copies })
            .collect()
    });

    let needs_analysis = opts.critical || !opts.bounds.is_empty();
    let origin = match &problem.origin {
        Some(o) => o.clone(),
        None if needs_analysis => find_generic_origin(tri)?,
        None => crate::critical::Origin(crate::lattice::LatticePoint::origin(n)),
    };
    let analysis = if needs_analysis { Some(CriticalAnalysis::with_mode(opts.mode, tri, origin)?) } else { None };

    let critical = match (&analysis, opts.critical) {
        (Some(a), true) => {
            let mut audits = BTreeMap::new();
            audits.insert("index-bounds".to_string(), a.audit_index_bounds());
            audits.insert("sign-visibility".to_string(), a.audit_sign_visibility(signs));
            audits.insert("facet-pairs".to_string(), a.audit_facet_pairs());
            audits.insert("incidence".to_string(), a.audit_incidence());
            if tri.is_t2() {
                audits.insert("critical-copies".to_string(), a.audit_critical_copies(signs));
                if n >= 3 {
                    audits.insert("vertex-stars".to_string(), a.audit_vertex_stars(signs));
                }
            }
            for (name, audit) in &audits {
                for v in &audit.violations {
                    failures.push(format!("{name}: {v}"));
                }
            }
            let histogram = a.index_histogram(signs)?;
            let morse = morse_bounds(&histogram, &betti);
            Some(Critical { histogram, audits, morse })
        }
        _ => None,
    };

    let mut partial_sums = Vec::new();
    for &k in &opts.bounds {
        let r = theorem41_report(tri, signs, k)?;
        for b in [&r.main, &r.ingredient, &r.b1_ingredient].into_iter().chain(r.b1.as_ref()) {
            if b.failed() {
                failures.push(format!("{}: {} > {}", b.name, b.lhs, b.rhs));
            }
        }
        partial_sums.push(r);
    }
    let totals = match (&analysis, opts.bounds.is_empty()) {
        (Some(a), false) => {
            let t = totals_report(tri, signs, a)?;
            for b in [&t.cell_count, &t.star_audit, &t.smith_thom, &t.morse_total] {
                if b.failed() {
                    failures.push(format!("{}: {} > {}", b.name, b.lhs, b.rhs));
                }
            }
            Some(t)
        }
        _ => None,
    };

    Ok(Report {
        summary,
        topology,
        euler: opts.chi.then_some(chi),
        census,
        critical,
        partial_sums,
        totals,
        failures,
    })
}

fn bound_line(out: &mut String, b: &BoundReport) {
    let verdict = match b.verdict {
        crate::bounds::Verdict::Holds => "holds",
        crate::bounds::Verdict::Violated => "VIOLATED",
        crate::bounds::Verdict::AsymptoticOnly => "asymptotic",
    };
    let _ = writeln!(out, "  {:<46} {:>10} <= {:<10} slack {:>8}  {verdict}", b.name, b.lhs, b.rhs, b.slack);
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let s = &self.summary;
        if let Some(c) = &s.construction {
            let _ = writeln!(out, "construction    {c}");
        }
        let _ = writeln!(out, "dimension       {}", s.dim);
        let _ = writeln!(out, "points / cells  {} / {}", s.points, s.cells);
        let _ = writeln!(out, "ambient         {}", s.ambient.name());
        let _ = writeln!(out, "all even        {}", s.all_even);
        if let Some(c) = s.convex {
            let _ = writeln!(out, "convex          {c}");
        }
        if let Some(t) = &self.topology {
            let _ = writeln!(out, "cells by dim    {:?}", t.cell_counts);
            let _ = writeln!(out, "betti (Z/2)     {:?}", t.betti);
            let _ = writeln!(out, "components      {}", t.components);
            if let Some(b) = t.boundary_components {
                let _ = writeln!(out, "on boundary     {b}");
            }
        }
        if let Some(chi) = self.euler {
            let _ = writeln!(out, "euler           {chi}");
        }
        if let Some(rows) = &self.census {
            let _ = writeln!(out, "mixed faces     dim  carrier  base  copies");
            for r in rows {
                let _ = writeln!(out, "                {:>3}  {:>7}  {:>4}  {:>6}", r.face_dim, r.carrier_dim, r.base, r.copies);
            }
        }
        if let Some(c) = &self.critical {
            let h = &c.histogram;
            let _ = writeln!(out, "origin          {:?}", h.origin);
            let _ = writeln!(out, "S by index      {:?}", &h.s[1..]);
            let _ = writeln!(out, "S-bar by index  {:?}", &h.s_bar[1..]);
            let _ = writeln!(out, "paired c        {:?}", h.paired);
            for (name, a) in &c.audits {
                let _ = writeln!(out, "audit {:<20} {:>7} checked {:>3} violations", name, a.checked, a.violations.len());
            }
            for b in &c.morse {
                bound_line(&mut out, b);
            }
        }
        for r in &self.partial_sums {
            let _ = writeln!(out, "partial sums, order {}", r.k);
            for b in [&r.main, &r.ingredient, &r.b1_ingredient].into_iter().chain(r.b1.as_ref()) {
                bound_line(&mut out, b);
            }
        }
        if let Some(t) = &self.totals {
            let _ = writeln!(out, "totals");
            for b in [&t.cell_count, &t.star_audit, &t.smith_thom, &t.morse_total] {
                bound_line(&mut out, b);
            }
        }
        if self.failures.is_empty() {
            let _ = writeln!(out, "result          ok");
        } else {
            for f in &self.failures {
                let _ = writeln!(out, "FAILED          {f}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{lemma56, prop51};
    use crate::signs::SignDistribution;

    #[test]
    fn lemma56_report() {
        let p: Problem = lemma56().unwrap().into();
        let r = analyze(&p, &Options { census: true, ..Options::basic() }).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.euler, Some(-18));
        assert_eq!(r.topology.as_ref().unwrap().betti, vec![1, 20, 1]);
        assert_eq!(r.summary.convex, Some(true));
        assert!(r.table().contains("euler           -18"));
    }

    #[test]
    fn full_report_on_projective_input() {
        let p: Problem = prop51(2, 4).unwrap().into();
        let opts = Options { critical: true, bounds: vec![1], ..Options::basic() };
        let r = analyze(&p, &opts).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.topology.unwrap().betti, vec![2, 2]);
        assert_eq!(r.partial_sums.len(), 1);
        assert!(r.totals.is_some());
        let json = serde_json::to_string(&r.critical).unwrap();
        assert!(json.contains("\"paired\""));
    }

    #[test]
    fn all_plus_signs_give_nothing() {
        let mut p: Problem = prop51(3, 4).unwrap().into();
        p.signs = SignDistribution::new(vec![1; p.triangulation.points().len()]).unwrap();
        let r = analyze(&p, &Options::default()).unwrap();
        assert!(r.ok());
        assert_eq!(r.topology.unwrap().betti, vec![0, 0, 0]);
        assert_eq!(r.euler, Some(0));
    }

    #[test]
    fn bad_heights_are_a_failure() {
        let mut p: Problem = lemma56().unwrap().into();
        let h = p.heights.as_mut().unwrap();
        for x in h.0.iter_mut() {
            *x = -x.clone();
        }
        let r = analyze(&p, &Options::basic()).unwrap();
        assert!(!r.ok());
    }
}
