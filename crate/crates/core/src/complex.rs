//! The patchworked hypersurface as a cell complex.
//!
//! A mixed `k`-face of the symmetric triangulation (one with vertices of
//! both signs) contributes a `(k-1)`-cell: the convex hull of the
//! midpoints of its mixed edges, a product of two simplices. Its boundary
//! cells are its mixed facets. Faces of the symmetric triangulation are
//! keyed by `(base face, copy mask)` with the copy reduced to the face's
//! free coordinates, and the ambient space identifies further keys.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Mode};
use crate::signs::{is_mixed, SignDistribution};
use crate::triangulation::{free_mask, Face, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Ambient {
    Affine,
    /// Projective space; the polytope must be `m` times the standard simplex.
    Projective { m: i64 },
    /// Product of projective lines; the polytope must be the box with these sides.
    P1power { sides: Vec<i64> },
}

impl Ambient {
    pub fn name(&self) -> &'static str {
        match self {
            Ambient::Affine => "affine",
            Ambient::Projective { .. } => "projective",
            Ambient::P1power { .. } => "p1power",
        }
    }

    /// Check the ambient against the triangulated polytope.
    pub fn check(&self, tri: &Triangulation) -> Result<()> {
        let err = |reason: String| Err(Error::IncompatibleAmbient { ambient: self.name().into(), reason });
        match self {
            Ambient::Affine => Ok(()),
            Ambient::Projective { m } => match tri.polytope().as_standard_simplex() {
                Some(k) if k == *m => Ok(()),
                Some(k) => err(format!("polytope is the simplex of degree {k}, not {m}")),
                None => err("polytope is not a dilated standard simplex".into()),
            },
            Ambient::P1power { sides } => {
                match tri.polytope().as_box() {
                    Some(b) if &b == sides => {}
                    Some(b) => return err(format!("polytope is the box {b:?}, not {sides:?}")),
                    None => return err("polytope is not a coordinate box".into()),
                }
                if let Some(s) = sides.iter().find(|s| *s % 2 != 0) {
                    return err(format!("side {s} is odd, so opposite facets carry different signs"));
                }
                Ok(())
            }
        }
    }

    /// Canonical copy mask of the face `face` in copy `eps` after identification.
    pub fn canonical_copy(&self, tri: &Triangulation, face: &[usize], eps: u32) -> u32 {
        let pts = tri.face_points(face);
        let free = free_mask(&pts);
        let eps = eps & free;
        match self {
            Ambient::Affine => eps,
            Ambient::Projective { m } => {
                if pts.iter().all(|p| p.0.iter().sum::<i64>() == *m) {
                    eps.min(!eps & free)
                } else {
                    eps
                }
            }
            Ambient::P1power { sides } => {
                let at_top = (0..sides.len())
                    .filter(|&i| pts.iter().all(|p| p.0[i] == sides[i]))
                    .fold(0u32, |acc, i| acc | 1 << i);
                eps & !at_top
            }
        }
    }

    /// Number of copies identified into one cell, for a face with the given points.
    fn orbit_size(&self, tri: &Triangulation, face: &[usize]) -> usize {
        let pts = tri.face_points(face);
        match self {
            Ambient::Affine => 1,
            Ambient::Projective { m } => {
                if pts.iter().all(|p| p.0.iter().sum::<i64>() == *m) {
                    2
                } else {
                    1
                }
            }
            Ambient::P1power { sides } => {
                1 << (0..sides.len()).filter(|&i| pts.iter().all(|p| p.0[i] == sides[i])).count()
            }
        }
    }
}

/// A cell of the complex: a mixed face of the base triangulation in a reflection copy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub face: Face,
    pub copy: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchworkComplex {
    n: usize,
    /// Cells by dimension `0..n`.
    cells: Vec<Vec<Cell>>,
    /// `boundary[d][i]`: indices into `cells[d - 1]` of the boundary of `cells[d][i]`,
    /// reduced mod 2.
    boundary: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn euler(&self) -> i64 {
        self.0.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

pub fn build(tri: &Triangulation, signs: &SignDistribution, ambient: &Ambient) -> Result<PatchworkComplex> {
    build_with(Mode::Parallel, tri, signs, ambient)
}

pub fn build_with(mode: Mode, tri: &Triangulation, signs: &SignDistribution, ambient: &Ambient) -> Result<PatchworkComplex> {
    signs.check_total(tri)?;
    ambient.check(tri)?;
    let n = tri.dim();
    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(n);
    let mut index: Vec<HashMap<Cell, u32>> = Vec::with_capacity(n);
    for k in 1..=n {
        let per_face = par::map_with(mode, tri.faces(k), |f| {
            let free = free_mask(&tri.face_points(f));
            let mut out: Vec<Cell> = (0..=free)
                .filter(|e| e & !free == 0)
                .filter(|&e| ambient.canonical_copy(tri, f, e) == e && is_mixed(tri, signs, f, e))
                .map(|e| Cell { face: f.clone(), copy: e })
                .collect();
            out.sort();
            out
        });
        let list: Vec<Cell> = per_face.into_iter().flatten().collect();
        index.push(list.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect());
        cells.push(list);
    }
    let mut boundary: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    if n > 0 {
        boundary[0] = vec![Vec::new(); cells[0].len()];
    }
    for d in 1..n {
        let lower = &index[d - 1];
        boundary[d] = par::map_with(mode, &cells[d], |c| {
            let mut b: Vec<u32> = Vec::new();
            for skip in 0..c.face.len() {
                let g: Face = c.face.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let e = ambient.canonical_copy(tri, &g, c.copy);
                if let Some(&j) = lower.get(&Cell { face: g, copy: e }) {
                    b.push(j);
                }
            }
            reduce_mod2(b)
        });
    }
    Ok(PatchworkComplex { n, cells, boundary })
}

fn reduce_mod2(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    out
}

fn symdiff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Rank over GF(2) of the matrix whose rows are the given sorted support sets.
/// Sparse elimination keyed on each row's largest column.
pub fn gf2_rank(rows: &[Vec<u32>]) -> usize {
    let mut pivots: HashMap<u32, Vec<u32>> = HashMap::new();
    for row in rows {
        let mut r = row.clone();
        while let Some(&top) = r.last() {
            match pivots.get(&top) {
                Some(p) => r = symdiff(&r, p),
                None => {
                    pivots.insert(top, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

impl PatchworkComplex {
    /// Dimension of the ambient polytope; cells have dimension below this.
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn cells(&self, d: usize) -> &[Cell] {
        self.cells.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn boundary(&self, d: usize, i: usize) -> &[u32] {
        &self.boundary[d][i]
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    /// Alternating sum of cell counts.
    pub fn euler_from_cells(&self) -> i64 {
        self.cells.iter().enumerate().map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    /// `true` when the boundary of every boundary vanishes mod 2.
    pub fn boundary_squared_vanishes(&self) -> bool {
        (2..self.n).all(|d| {
            self.boundary[d].iter().all(|b| {
                let all: Vec<u32> = b.iter().flat_map(|&j| self.boundary[d - 1][j as usize].iter().copied()).collect();
                reduce_mod2(all).is_empty()
            })
        })
    }

    pub fn betti_z2(&self) -> BettiVector {
        self.betti_z2_with(Mode::Parallel)
    }

    pub fn betti_z2_with(&self, mode: Mode) -> BettiVector {
        let dims: Vec<usize> = (0..self.n).collect();
        // rank of the boundary map out of dimension d
        let ranks = par::map_with(mode, &dims, |&d| if d == 0 { 0 } else { gf2_rank(&self.boundary[d]) });
        BettiVector(
            (0..self.n)
                .map(|d| self.cells[d].len() - ranks[d] - ranks.get(d + 1).copied().unwrap_or(0))
                .collect(),
        )
    }

    /// Components of the 1-skeleton via union-find.
    pub fn connected_components(&self) -> usize {
        let labels = self.component_labels();
        labels.iter().enumerate().filter(|(i, l)| *i == **l).count()
    }

    /// Component representative of every 0-cell.
    pub fn component_labels(&self) -> Vec<usize> {
        let Some(vertices) = self.cells.first() else { return Vec::new() };
        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        if self.n > 1 {
            for b in &self.boundary[1] {
                if let [a, c] = b[..] {
                    let ra = find(&mut parent, a as usize);
                    let rc = find(&mut parent, c as usize);
                    if ra != rc {
                        parent[ra.max(rc)] = ra.min(rc);
                    }
                }
            }
        }
        (0..vertices.len()).map(|i| find(&mut parent, i)).collect()
    }

    /// Number of components with a cell on the boundary of the polytope.
    /// Cells on the boundary have 0-cells there too, so 0-cells suffice.
    pub fn components_touching_boundary(&self, tri: &Triangulation) -> usize {
        let labels = self.component_labels();
        let mut hit = BTreeSet::new();
        for (cell, label) in self.cells(0).iter().zip(&labels) {
            let pts = tri.face_points(&cell.face);
            if tri.polytope().carrier_dim(pts.iter().map(|p| p.coords())) < tri.dim() {
                hit.insert(*label);
            }
        }
        hit.len()
    }

    /// Serializable dump of the cells (reflected vertex coordinates) and boundary lists.
    pub fn dump(&self, tri: &Triangulation) -> ComplexDump {
        ComplexDump {
            format: "patchwork-complex/1".into(),
            ambient_dim: self.n,
            cells: self
                .cells
                .iter()
                .map(|cs| {
                    cs.iter()
                        .map(|c| CellDump {
                            vertices: c.face.iter().map(|&v| tri.points()[v].reflected(c.copy).0).collect(),
                            copy: c.copy,
                        })
                        .collect()
                })
                .collect(),
            boundary: self.boundary.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellDump {
    pub vertices: Vec<Vec<i64>>,
    pub copy: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexDump {
    pub format: String,
    pub ambient_dim: usize,
    pub cells: Vec<Vec<CellDump>>,
    pub boundary: Vec<Vec<Vec<u32>>>,
}

/// Euler characteristic by counting copies: each base mixed `k`-face
/// contributes `(-1)^(k-1)` times the number of its distinct mixed copies.
pub fn euler_characteristic(tri: &Triangulation, signs: &SignDistribution, ambient: &Ambient) -> Result<i64> {
    signs.check_total(tri)?;
    ambient.check(tri)?;
    let mut chi = 0i64;
    for k in 1..=tri.dim() {
        let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
        for f in tri.faces(k) {
            let free = free_mask(&tri.face_points(f));
            let mixed = (0..=free).filter(|e| e & !free == 0 && is_mixed(tri, signs, f, *e)).count();
            chi += sign * (mixed / ambient.orbit_size(tri, f)) as i64;
        }
    }
    Ok(chi)
}

/// Counts of all faces of the symmetric triangulation after identification,
/// by dimension `0..=n`.
pub fn glued_face_counts(tri: &Triangulation, ambient: &Ambient) -> Result<Vec<usize>> {
    ambient.check(tri)?;
    Ok((0..=tri.dim())
        .map(|k| {
            tri.faces(k)
                .iter()
                .map(|f| {
                    let free = free_mask(&tri.face_points(f));
                    (0..=free).filter(|&e| e & !free == 0 && ambient.canonical_copy(tri, f, e) == e).count()
                })
                .sum()
        })
        .collect())
}

/// Residuals `f_k - sum_{i>=k} (-1)^(i+n) C(i+1,k+1) f_i` for `k = 0..n`,
/// which vanish on a closed triangulated `n`-manifold.
pub fn dehn_sommerville_residuals(f: &[usize]) -> Vec<i128> {
    let n = f.len() - 1;
    (0..=n)
        .map(|k| {
            let rhs: i128 = (k..=n)
                .map(|i| {
                    let s = if (i + n) % 2 == 0 { 1 } else { -1 };
                    s * crate::arith::binomial(i as i64 + 1, k as i64 + 1) * f[i] as i128
                })
                .sum();
            f[k] as i128 - rhs
        })
        .collect()
}

/// Mixed base faces keyed by `(face dimension, dimension of the carrying
/// polytope face)`; values count base faces and their mixed copies.
pub fn mixed_census(tri: &Triangulation, signs: &SignDistribution) -> BTreeMap<(usize, usize), (usize, usize)> {
    let mut out = BTreeMap::new();
    for k in 1..=tri.dim() {
        for f in tri.faces(k) {
            let pts = tri.face_points(f);
            let free = free_mask(&pts);
            let copies = (0..=free).filter(|e| e & !free == 0 && is_mixed(tri, signs, f, *e)).count();
            if copies == 0 {
                continue;
            }
            let carrier = tri.polytope().carrier_dim(pts.iter().map(|p| p.coords()));
            let e = out.entry((k, carrier)).or_insert((0, 0));
            e.0 += usize::from(is_mixed(tri, signs, f, 0));
            e.1 += copies;
        }
    }
    out
}
