//! Figures: SVG pictures of planar patchworks and OFF meshes of surfaces.
//!
//! Both writers are deterministic: every element is emitted from sorted
//! collections, so fixed inputs give identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::complex::{Ambient, PatchworkComplex};
use crate::error::{Error, Result};
use crate::signs::{is_mixed, SignDistribution};
use crate::triangulation::Triangulation;

const UNIT: i64 = 20;
const MARGIN: i64 = 20;

/// Which reflection copies an SVG shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Copies {
    /// The base triangulation only.
    Base,
    /// All four quadrant copies.
    #[default]
    All,
}

/// Doubled coordinates, so edge midpoints stay integral.
type P2 = (i64, i64);

pub fn svg(tri: &Triangulation, signs: &SignDistribution, copies: Copies) -> Result<String> {
    if tri.dim() != 2 {
        return Err(Error::UnsupportedDimension(tri.dim()));
    }
    signs.check_total(tri)?;
    let masks: Vec<u32> = match copies {
        Copies::Base => vec![0],
        Copies::All => (0..4).collect(),
    };
    let pt = |v: usize, eps: u32| -> P2 {
        let p = tri.points()[v].reflected(eps);
        (2 * p.0[0], 2 * p.0[1])
    };
    let mut edges: BTreeSet<(P2, P2)> = BTreeSet::new();
    let mut vertices: BTreeMap<P2, i8> = BTreeMap::new();
    let mut curve: BTreeSet<(P2, P2)> = BTreeSet::new();
    for &eps in &masks {
        for (v, p) in tri.points().iter().enumerate() {
            vertices.insert(pt(v, eps), signs.in_copy(v, p, eps));
        }
        for e in tri.faces(1) {
            let (a, b) = (pt(e[0], eps), pt(e[1], eps));
            edges.insert((a.min(b), a.max(b)));
        }
        for f in tri.faces(2) {
            if !is_mixed(tri, signs, f, eps) {
                continue;
            }
            let mids: Vec<P2> = [[f[0], f[1]], [f[0], f[2]], [f[1], f[2]]]
                .iter()
                .filter(|e| is_mixed(tri, signs, &e[..], eps))
                .map(|e| {
                    let (a, b) = (pt(e[0], eps), pt(e[1], eps));
                    ((a.0 + b.0) / 2, (a.1 + b.1) / 2)
                })
                .collect();
            if let [a, b] = mids[..] {
                curve.insert((a.min(b), a.max(b)));
            }
        }
    }
    let xs = vertices.keys().map(|p| p.0);
    let ys = vertices.keys().map(|p| p.1);
    let (xmin, xmax) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
    let (ymin, ymax) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
    // doubled coordinates, so half a unit per step
    let px = |p: P2| (MARGIN + (p.0 - xmin) * UNIT / 2, MARGIN + (ymax - p.1) * UNIT / 2);
    let width = 2 * MARGIN + (xmax - xmin) * UNIT / 2;
    let height = 2 * MARGIN + (ymax - ymin) * UNIT / 2;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r##"<g id="triangulation" stroke="#999999" stroke-width="1" fill="none">"##);
    for (a, b) in &edges {
        let ((x1, y1), (x2, y2)) = (px(*a), px(*b));
        let _ = writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="curve" stroke="#000000" stroke-width="3" fill="none">"##);
    for (a, b) in &curve {
        let ((x1, y1), (x2, y2)) = (px(*a), px(*b));
        let _ = writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="vertices" stroke="#000000" stroke-width="1">"##);
    for (p, s) in &vertices {
        let (cx, cy) = px(*p);
        let fill = if *s > 0 { "#000000" } else { "#ffffff" };
        let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{fill}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

/// A triangle mesh of a surface complex. Vertices sit at the 0-cells (mixed
/// edge midpoints), the 1-cells and the 2-cells (simplex barycenters, each in
/// its canonical copy); every 2-cell is split into triangles through its
/// center and edge points. Glued complexes can join two vertices by several
/// 1-cells, and the extra points keep those apart, so a recount of
/// `V - E + F` from the faces alone gives the Euler characteristic.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn from_complex(tri: &Triangulation, complex: &PatchworkComplex) -> Result<Mesh> {
        if complex.ambient_dim() != 3 {
            return Err(Error::UnsupportedDimension(complex.ambient_dim()));
        }
        let center = |c: &crate::complex::Cell| {
            let k = c.face.len() as f64;
            let mut acc = [0.0; 3];
            for &v in &c.face {
                let p = tri.points()[v].reflected(c.copy);
                for i in 0..3 {
                    acc[i] += p.0[i] as f64 / k;
                }
            }
            acc
        };
        let n0 = complex.cells(0).len();
        let n1 = complex.cells(1).len();
        let vertices: Vec<[f64; 3]> = (0..3).flat_map(|d| complex.cells(d).iter().map(center)).collect();
        let mut faces = Vec::new();
        for i in 0..complex.cells(2).len() {
            let mid = n0 + n1 + i;
            for (a, e, b) in polygon(complex, i)? {
                faces.push(vec![mid, a, n0 + e]);
                faces.push(vec![mid, n0 + e, b]);
            }
        }
        Ok(Mesh { vertices, faces })
    }

    pub fn edge_count(&self) -> usize {
        let mut edges = BTreeSet::new();
        for f in &self.faces {
            for k in 0..f.len() {
                let (a, b) = (f[k], f[(k + 1) % f.len()]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges.len()
    }

    pub fn euler(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    pub fn to_off(&self) -> String {
        let mut out = String::from("OFF\n");
        let _ = writeln!(out, "{} {} {}", self.vertices.len(), self.faces.len(), self.edge_count());
        for v in &self.vertices {
            let _ = writeln!(out, "{} {} {}", v[0], v[1], v[2]);
        }
        for f in &self.faces {
            let idx: Vec<String> = f.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{} {}", f.len(), idx.join(" "));
        }
        out
    }
}

/// Boundary walk of a 2-cell as `(vertex, edge, next vertex)` steps.
fn polygon(complex: &PatchworkComplex, cell: usize) -> Result<Vec<(usize, usize, usize)>> {
    let edges: Vec<(usize, [usize; 2])> = complex
        .boundary(2, cell)
        .iter()
        .map(|&e| {
            let b = complex.boundary(1, e as usize);
            (e as usize, [b[0] as usize, b[1] as usize])
        })
        .collect();
    let broken = || Error::InvalidInput(format!("2-cell {cell} has no simple boundary cycle"));
    let first = edges.first().ok_or_else(broken)?.1[0];
    let mut steps = Vec::new();
    let mut used = vec![false; edges.len()];
    let mut seen = BTreeSet::from([first]);
    let mut last = first;
    while let Some(k) = (0..edges.len()).find(|&k| !used[k] && edges[k].1.contains(&last)) {
        used[k] = true;
        let (e, [a, b]) = edges[k];
        let next = if a == last { b } else { a };
        steps.push((last, e, next));
        if next == first {
            break;
        }
        if !seen.insert(next) {
            return Err(broken());
        }
        last = next;
    }
    if used.iter().any(|u| !u) || last == first && steps.len() < 2 {
        return Err(broken());
    }
    Ok(steps)
}

/// OFF export of the glued surface of a 3-dimensional patchwork.
pub fn off(tri: &Triangulation, signs: &SignDistribution, ambient: &Ambient) -> Result<String> {
    if tri.dim() != 3 {
        return Err(Error::UnsupportedDimension(tri.dim()));
    }
    let complex = crate::complex::build(tri, signs, ambient)?;
    Ok(Mesh::from_complex(tri, &complex)?.to_off())
}
