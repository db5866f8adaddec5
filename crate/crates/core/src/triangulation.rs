//! Triangulations of lattice polytopes.
//!
//! A [`Triangulation`] stores its vertices in lexicographic order and its
//! maximal cells as sorted vertex-index tuples. Faces are sorted index
//! tuples as well; the face lattice (faces by dimension, stars, interior
//! flags) is built on first use and cached.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, det_big, det_sign};
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolytope, LatticeSimplex};

/// Sorted vertex indices of a simplex of a triangulation.
pub type Face = Vec<usize>;

#[derive(Debug, Default)]
struct FaceLattice {
    by_dim: Vec<Vec<Face>>,
    star: HashMap<Face, Vec<usize>>,
    interior: HashMap<Face, bool>,
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    polytope: LatticePolytope,
    points: Vec<LatticePoint>,
    cells: Vec<Face>,
    lattice: OnceLock<std::sync::Arc<FaceLattice>>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.polytope == other.polytope && self.points == other.points && self.cells == other.cells
    }
}

impl Eq for Triangulation {}

/// Convex piecewise-linear lift candidate: one exact height per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightFunction(pub Vec<BigRational>);

impl HeightFunction {
    pub fn from_ints(values: &[i64]) -> Self {
        HeightFunction(values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
    }

    /// Add the affine function `x -> linear . x + constant`.
    pub fn add_affine(&self, points: &[LatticePoint], linear: &[i64], constant: i64) -> Self {
        HeightFunction(
            self.0
                .iter()
                .zip(points)
                .map(|(h, p)| {
                    h + BigRational::from_integer(BigInt::from(arith::dot(linear, p.coords()) + constant as i128))
                })
                .collect(),
        )
    }
}

/// `s[i]`: number of `i`-faces whose relative interior lies in the open polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceCountVector(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub total_volume: BigInt,
    pub polytope_volume: BigInt,
    pub pairwise_checked: bool,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }
}

impl Triangulation {
    /// Build from points and cells given as indices into `points`.
    /// Points are re-sorted lexicographically and cells re-indexed.
    pub fn new(polytope: LatticePolytope, points: Vec<LatticePoint>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let n = polytope.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].cmp(&points[b]));
        let mut remap = vec![0; points.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let sorted: Vec<LatticePoint> = order.iter().map(|&i| points[i].clone()).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate points".into()));
        }
        let mut new_cells = Vec::with_capacity(cells.len());
        for c in cells {
            if c.len() != n + 1 {
                return Err(Error::InvalidInput(format!("cell {c:?} does not have {} vertices", n + 1)));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= sorted.len()) {
                return Err(Error::InvalidInput(format!("vertex index {bad} out of range")));
            }
            let mut nc: Vec<usize> = c.iter().map(|&i| remap[i]).collect();
            nc.sort_unstable();
            if nc.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("cell {c:?} repeats a vertex")));
            }
            new_cells.push(nc);
        }
        new_cells.sort();
        Ok(Triangulation { polytope, points: sorted, cells: new_cells, lattice: OnceLock::new() })
    }

    /// Build from cells given by their vertex coordinates.
    pub fn from_point_cells(polytope: LatticePolytope, cells: Vec<Vec<LatticePoint>>) -> Result<Self> {
        let pts: BTreeSet<LatticePoint> = cells.iter().flatten().cloned().collect();
        let points: Vec<LatticePoint> = pts.into_iter().collect();
        let idx: HashMap<&LatticePoint, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let cells = cells.iter().map(|c| c.iter().map(|p| idx[p]).collect()).collect();
        let points = points.clone();
        Self::new(polytope, points, cells)
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn cells(&self) -> &[Face] {
        &self.cells
    }

    pub fn point_index(&self, p: &LatticePoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn face_points(&self, face: &[usize]) -> Vec<&LatticePoint> {
        face.iter().map(|&i| &self.points[i]).collect()
    }

    pub fn simplex(&self, face: &[usize]) -> LatticeSimplex {
        LatticeSimplex::new(face.iter().map(|&i| self.points[i].clone()).collect())
            .expect("faces of a valid triangulation are simplices")
    }

    pub fn cell_volume(&self, cell: usize) -> BigInt {
        let c = &self.cells[cell];
        let v0 = &self.points[c[0]];
        let edges: Vec<Vec<i64>> = c[1..].iter().map(|&i| self.points[i].sub(v0)).collect();
        arith::det(&edges).abs()
    }

    /// Facets of a cell; entry `j` is the facet opposite the cell's `j`-th vertex.
    pub fn cell_facets(&self, cell: usize) -> Vec<Face> {
        let c = &self.cells[cell];
        (0..c.len())
            .map(|j| c.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect())
            .collect()
    }

    fn lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| std::sync::Arc::new(self.build_lattice()))
    }

    fn build_lattice(&self) -> FaceLattice {
        let n = self.dim();
        let mut star: HashMap<Face, Vec<usize>> = HashMap::new();
        for (ci, c) in self.cells.iter().enumerate() {
            for mask in 1u32..(1 << c.len()) {
                let f: Face = (0..c.len()).filter(|&i| mask >> i & 1 == 1).map(|i| c[i]).collect();
                star.entry(f).or_default().push(ci);
            }
        }
        let mut by_dim = vec![Vec::new(); n + 1];
        let mut interior = HashMap::with_capacity(star.len());
        for f in star.keys() {
            by_dim[f.len() - 1].push(f.clone());
            let pts: Vec<&[i64]> = f.iter().map(|&i| self.points[i].coords()).collect();
            let on_boundary = self
                .polytope
                .facets()
                .iter()
                .any(|h| pts.iter().all(|p| h.eval(p) == 0));
            interior.insert(f.clone(), !on_boundary);
        }
        for v in by_dim.iter_mut() {
            v.sort();
        }
        FaceLattice { by_dim, star, interior }
    }

    /// All `k`-faces, sorted.
    pub fn faces(&self, k: usize) -> &[Face] {
        self.lattice().by_dim.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Cells containing the face.
    pub fn star(&self, face: &[usize]) -> &[usize] {
        self.lattice().star.get(face).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_interior_face(&self, face: &[usize]) -> bool {
        self.lattice().interior.get(face).copied().unwrap_or(false)
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(true)
    }

    /// Structural validation. The volume-sum and facet-matching checks
    /// always run; pairwise proper intersection is `O(cells^2)` and runs
    /// only when `pairwise` is set.
    pub fn validate_with(&self, pairwise: bool) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.dim();
        let polytope_volume = self.polytope.normalized_volume();
        for p in &self.points {
            if !self.polytope.contains(p.coords()) {
                violations.push(format!("vertex {p:?} lies outside the polytope"));
            }
        }
        let mut used = vec![false; self.points.len()];
        let mut total = BigInt::zero();
        for (ci, c) in self.cells.iter().enumerate() {
            for &v in c {
                used[v] = true;
            }
            let vol = self.cell_volume(ci);
            if vol.is_zero() {
                violations.push(format!("cell {ci} is degenerate"));
            }
            total += vol;
        }
        if let Some(i) = used.iter().position(|u| !u) {
            violations.push(format!("vertex {:?} is used by no cell", self.points[i]));
        }
        if total != polytope_volume {
            violations.push(format!(
                "cells cover normalized volume {total}, polytope has {polytope_volume}"
            ));
        }
        if violations.is_empty() && n > 0 {
            for f in self.faces(n - 1) {
                let star = self.star(f);
                let interior = self.is_interior_face(f);
                match (interior, star.len()) {
                    (false, 1) => {}
                    (true, 2) => {
                        let s0 = self.side_of_facet(f, star[0]);
                        let s1 = self.side_of_facet(f, star[1]);
                        if s0 == s1 {
                            violations.push(format!("cells {} and {} overlap across facet {f:?}", star[0], star[1]));
                        }
                    }
                    (_, k) => violations.push(format!(
                        "facet {f:?} ({}) lies in {k} cells",
                        if interior { "interior" } else { "boundary" }
                    )),
                }
            }
        }
        if pairwise {
            'outer: for a in 0..self.cells.len() {
                for b in a + 1..self.cells.len() {
                    if let Some(msg) = self.improper_pair(a, b) {
                        violations.push(msg);
                        break 'outer;
                    }
                }
            }
        }
        ValidationReport { violations, total_volume: total, polytope_volume, pairwise_checked: pairwise }
    }

    /// Orientation of the cell's vertex opposite to `facet`, relative to the facet.
    fn side_of_facet(&self, facet: &[usize], cell: usize) -> i32 {
        let apex = self.cells[cell].iter().find(|v| !facet.contains(v)).copied().unwrap();
        orientation(&self.face_points(facet), &self.points[apex])
    }

    fn improper_pair(&self, a: usize, b: usize) -> Option<String> {
        let ca = &self.cells[a];
        let cb = &self.cells[b];
        let sa = self.simplex(ca);
        let sb = self.simplex(cb);
        for (s, other, name) in [(&sa, cb, b), (&sb, ca, a)] {
            for &v in other {
                let own = if name == b { ca } else { cb };
                if !own.contains(&v) && s.contains(self.points[v].coords()) {
                    return Some(format!("non-face intersection: vertex {:?} of cell {name} lies in another cell", self.points[v]));
                }
            }
        }
        let n = self.dim();
        let all: Vec<usize> = ca.iter().chain(cb.iter()).copied().collect::<BTreeSet<_>>().into_iter().collect();
        for hyper in crate::lattice::subsets_of_size(&all, n) {
            let refs: Vec<&[i64]> = hyper.iter().map(|&i| self.points[i].coords()).collect();
            let Some(normal) = arith::hyperplane_normal(&refs) else { continue };
            let level = arith::dot(&normal, refs[0]);
            let side = |c: &Face| {
                let vals: Vec<i128> = c.iter().map(|&i| arith::dot(&normal, self.points[i].coords()) - level).collect();
                (vals.iter().all(|&v| v <= 0), vals.iter().all(|&v| v >= 0))
            };
            let (a_le, a_ge) = side(ca);
            let (b_le, b_ge) = side(cb);
            if (a_le && b_ge) || (a_ge && b_le) {
                return None;
            }
        }
        Some(format!("non-face intersection: interiors of cells {a} and {b} overlap"))
    }

    /// Strict local convexity of the lift across every interior facet.
    pub fn certify_convexity(&self, heights: &HeightFunction) -> Result<bool> {
        if heights.0.len() < self.points.len() {
            return Err(Error::MissingHeight(heights.0.len()));
        }
        let n = self.dim();
        if n == 0 {
            return Ok(true);
        }
        let denom_lcm = heights.0.iter().fold(BigInt::one(), |acc, h| acc.lcm(h.denom()));
        let scaled: Vec<BigInt> = heights.0.iter().map(|h| (h * BigRational::from_integer(denom_lcm.clone())).to_integer()).collect();
        for f in self.faces(n - 1) {
            let star = self.star(f);
            if star.len() != 2 {
                continue;
            }
            let a = star[0];
            let b = star[1];
            let w = self.cells[b].iter().find(|v| !f.contains(v)).copied().unwrap();
            if lift_sign(&self.points, &scaled, &self.cells[a], w) <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn dilate(&self, factor: i64) -> Triangulation {
        Triangulation {
            polytope: self.polytope.dilate(factor),
            points: self.points.iter().map(|p| p.scaled(factor)).collect(),
            cells: self.cells.clone(),
            lattice: OnceLock::new(),
        }
    }

    pub fn interior_face_counts(&self) -> FaceCountVector {
        FaceCountVector(
            (0..=self.dim())
                .map(|k| self.faces(k).iter().filter(|f| self.is_interior_face(f)).count())
                .collect(),
        )
    }

    pub fn is_primitive(&self) -> bool {
        (0..self.cells.len()).all(|c| self.cell_volume(c).is_one())
    }

    pub fn is_maximal(&self) -> bool {
        self.polytope.lattice_points().len() == self.points.len()
    }

    /// Insert `p` as a new vertex: every cell whose closure contains `p` is
    /// replaced by the cones from `p` over its facets not containing `p`.
    pub fn refine_add_vertex(&self, p: &LatticePoint) -> Result<Triangulation> {
        if !self.polytope.contains(p.coords()) {
            return Err(Error::OutsidePolytope(p.0.clone()));
        }
        if self.point_index(p).is_some() {
            return Err(Error::AlreadyVertex(p.0.clone()));
        }
        let mut points = self.points.clone();
        points.push(p.clone());
        let new = points.len() - 1;
        let mut cells = Vec::new();
        for (ci, c) in self.cells.iter().enumerate() {
            if !self.simplex(c).contains(p.coords()) {
                cells.push(c.clone());
                continue;
            }
            for facet in self.cell_facets(ci) {
                if !self.simplex(&facet).contains(p.coords()) {
                    let mut nc = facet.clone();
                    nc.push(new);
                    cells.push(nc);
                }
            }
        }
        Triangulation::new(self.polytope.clone(), points, cells)
    }

    pub fn symmetric_extension(&self) -> Result<SymmetricTriangulation> {
        if self.points.iter().any(|p| p.coords().iter().any(|&x| x < 0)) {
            return Err(Error::NotInPositiveOrthant);
        }
        let mut faces = Vec::new();
        for k in 0..=self.dim() {
            for f in self.faces(k) {
                let free = free_mask(&self.face_points(f));
                faces.push(SymmetricFace { face: f.clone(), free_mask: free, multiplicity: 1 << free.count_ones() });
            }
        }
        Ok(SymmetricTriangulation { n: self.dim(), faces })
    }

    /// Half-scale triangulation when every vertex is even.
    pub fn halved(&self) -> Result<Triangulation> {
        if !self.points.iter().all(LatticePoint::is_even) {
            return Err(Error::NotT2);
        }
        let pts: Vec<LatticePoint> = self.points.iter().map(|p| LatticePoint(p.0.iter().map(|x| x / 2).collect())).collect();
        let poly = LatticePolytope::new(self.polytope.vertices().iter().map(|p| LatticePoint(p.0.iter().map(|x| x / 2).collect())).collect())?;
        Ok(Triangulation { polytope: poly, points: pts, cells: self.cells.clone(), lattice: OnceLock::new() })
    }

    pub fn is_t2(&self) -> bool {
        self.points.iter().all(LatticePoint::is_even)
    }

    /// True when `cell` is twice a primitive simplex.
    pub fn is_double_primitive(&self, cell: usize) -> bool {
        let c = &self.cells[cell];
        c.iter().all(|&i| self.points[i].is_even())
            && self.cell_volume(cell) == BigInt::from(1u64 << self.dim())
    }
}

/// Bit `i` set iff some point has a nonzero `i`-th coordinate.
pub fn free_mask(points: &[&LatticePoint]) -> u32 {
    let n = points[0].dim();
    (0..n).filter(|&i| points.iter().any(|p| p.0[i] != 0)).fold(0, |m, i| m | 1 << i)
}

/// Sign of the orientation determinant of `facet` (n points in R^n) and `q`.
pub fn orientation(facet: &[&LatticePoint], q: &LatticePoint) -> i32 {
    let rows: Vec<Vec<i64>> = facet.iter().map(|p| p.sub(q)).collect();
    det_sign(&rows)
}

/// Sign of `h(w) - l(w)` where `l` is the affine interpolant of the heights on `cell`.
fn lift_sign(points: &[LatticePoint], heights: &[BigInt], cell: &[usize], w: usize) -> i32 {
    let n = points[0].dim();
    let row = |i: usize| -> Vec<BigInt> {
        let mut r: Vec<BigInt> = points[i].coords().iter().map(|&x| BigInt::from(x)).collect();
        r.push(BigInt::one());
        r.push(heights[i].clone());
        r
    };
    let mut full: Vec<Vec<BigInt>> = cell.iter().map(|&i| row(i)).collect();
    full.push(row(w));
    let base: Vec<Vec<BigInt>> = full[..n + 1].iter().map(|r| r[..n + 1].to_vec()).collect();
    arith::sign_of(&det_big(full)) * arith::sign_of(&det_big(base))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricFace {
    pub face: Face,
    /// Coordinates in which the face has a nonzero point; reflecting in
    /// any other coordinate maps the face to itself.
    pub free_mask: u32,
    /// Number of distinct reflected copies, `2^(n - z)`.
    pub multiplicity: u32,
}

/// The reflection-symmetric extension of a triangulation in the positive orthant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricTriangulation {
    pub n: usize,
    pub faces: Vec<SymmetricFace>,
}

impl SymmetricTriangulation {
    pub fn copy_count(&self) -> usize {
        1 << self.n
    }

    /// Reflection masks giving the distinct copies of a face.
    pub fn copies(free_mask: u32) -> impl Iterator<Item = u32> {
        (0..=free_mask).filter(move |m| m & !free_mask == 0)
    }

    pub fn face_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.n + 1];
        for f in &self.faces {
            out[f.face.len() - 1] += f.multiplicity as usize;
        }
        out
    }
}

/// Regular triangulation of `conv(points)` induced by lifting point `i` to
/// `heights[i]`: the lower convex hull, projected. Points not on the lower
/// hull are dropped. Returns `Ok(None)` when the heights are not generic
/// (a lower facet is not a simplex).
pub fn regular_from_heights(points: &[LatticePoint], heights: &[i64]) -> Result<Option<Triangulation>> {
    let n = points.first().map(|p| p.dim()).ok_or(Error::NotFullDimensional)?;
    let polytope = LatticePolytope::new(points.to_vec())?;
    let lifted: Vec<Vec<i64>> = points
        .iter()
        .zip(heights)
        .map(|(p, &h)| {
            let mut r = p.0.clone();
            r.push(1);
            r.push(h);
            r
        })
        .collect();
    let mut cells = Vec::new();
    for subset in crate::lattice::subsets_of_size(&(0..points.len()).collect::<Vec<_>>(), n + 1) {
        let base: Vec<Vec<i64>> = subset.iter().map(|&i| lifted[i][..n + 1].to_vec()).collect();
        let base_sign = det_sign(&base);
        if base_sign == 0 {
            continue;
        }
        let mut rows: Vec<Vec<i64>> = subset.iter().map(|&i| lifted[i].clone()).collect();
        rows.push(vec![]);
        let mut lower = true;
        let mut degenerate = false;
        for q in 0..points.len() {
            if subset.contains(&q) {
                continue;
            }
            rows[n + 1] = lifted[q].clone();
            let s = det_sign(&rows) * base_sign;
            if s < 0 {
                lower = false;
                break;
            }
            if s == 0 {
                degenerate = true;
            }
        }
        if lower {
            if degenerate {
                return Ok(None);
            }
            cells.push(subset);
        }
    }
    let used: BTreeMap<usize, usize> = cells.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().enumerate().map(|(new, old)| (old, new)).collect();
    let pts: Vec<LatticePoint> = used.keys().map(|&i| points[i].clone()).collect();
    let cells: Vec<Vec<usize>> = cells.into_iter().map(|c| c.into_iter().map(|i| used[&i]).collect()).collect();
    Triangulation::new(polytope, pts, cells).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    fn segment_split(heights: &[i64]) -> (Triangulation, HeightFunction) {
        let poly = LatticePolytope::standard_simplex(1, 2);
        let t = Triangulation::new(poly, vec![p(&[0]), p(&[1]), p(&[2])], vec![vec![0, 1], vec![1, 2]]).unwrap();
        (t, HeightFunction::from_ints(heights))
    }

    /// Standard primitive triangulation of 2 * unit triangle (4 triangles).
    fn delta22() -> Triangulation {
        let poly = LatticePolytope::standard_simplex(2, 2);
        Triangulation::from_point_cells(
            poly,
            vec![
                vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])],
                vec![p(&[1, 0]), p(&[2, 0]), p(&[1, 1])],
                vec![p(&[0, 1]), p(&[1, 1]), p(&[0, 2])],
                vec![p(&[1, 0]), p(&[1, 1]), p(&[0, 1])],
            ],
        )
        .unwrap()
    }

    #[test]
    fn validate_accepts_and_rejects() {
        let unit = Triangulation::new(
            LatticePolytope::standard_simplex(2, 1),
            vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert!(unit.validate().ok());
        assert!(delta22().validate().ok());
        // two triangles sharing the area near (0,0) improperly
        let bad = Triangulation::from_point_cells(
            LatticePolytope::standard_simplex(2, 2),
            vec![
                vec![p(&[0, 0]), p(&[2, 0]), p(&[1, 1])],
                vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 2])],
            ],
        )
        .unwrap();
        let r = bad.validate();
        assert!(!r.ok());
        let r2 = bad.validate_with(true);
        assert!(r2.violations.iter().any(|v| v.contains("non-face")), "{:?}", r2.violations);
    }

    #[test]
    fn convexity_certificates() {
        let (t, h) = segment_split(&[0, 0, 0]);
        assert!(!t.certify_convexity(&h).unwrap());
        let (t, h) = segment_split(&[1, 0, 1]);
        assert!(t.certify_convexity(&h).unwrap());
        let shifted = h.add_affine(t.points(), &[5], -3);
        assert!(t.certify_convexity(&shifted).unwrap());
        assert_eq!(t.certify_convexity(&HeightFunction::from_ints(&[1])), Err(Error::MissingHeight(1)));
        let unit = Triangulation::new(
            LatticePolytope::standard_simplex(2, 1),
            vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert!(unit.certify_convexity(&HeightFunction::from_ints(&[7, -2, 3])).unwrap());
    }

    #[test]
    fn dilation_scales_volume() {
        let unit = Triangulation::new(
            LatticePolytope::standard_simplex(2, 1),
            vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(unit.dilate(1), unit);
        let d = unit.dilate(2);
        assert_eq!(d.points(), &[p(&[0, 0]), p(&[0, 2]), p(&[2, 0])]);
        assert_eq!(d.cell_volume(0).to_i64(), Some(4));
        assert!(d.validate().ok());
    }

    #[test]
    fn face_counts_and_predicates() {
        let unit = Triangulation::new(
            LatticePolytope::standard_simplex(2, 1),
            vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(unit.interior_face_counts().0, vec![0, 0, 1]);
        assert!(unit.is_primitive() && unit.is_maximal());
        let t = delta22();
        assert_eq!(t.interior_face_counts().0, vec![0, 3, 4]);
        let coarse = unit.dilate(2);
        assert!(!coarse.is_primitive() && !coarse.is_maximal());
    }

    #[test]
    fn refinement_cone_construction() {
        let single = Triangulation::new(
            LatticePolytope::standard_simplex(2, 2),
            vec![p(&[0, 0]), p(&[2, 0]), p(&[0, 2])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        // (1,1) lies on the hypotenuse: the cell splits in two
        let r = single.refine_add_vertex(&p(&[1, 1])).unwrap();
        assert_eq!(r.cells().len(), 2);
        assert!(r.validate().ok());
        let big = Triangulation::new(
            LatticePolytope::standard_simplex(2, 3),
            vec![p(&[0, 0]), p(&[3, 0]), p(&[0, 3])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let before = big.interior_face_counts().0[1];
        let r = big.refine_add_vertex(&p(&[1, 1])).unwrap();
        assert_eq!(r.cells().len(), 3);
        assert_eq!(r.interior_face_counts().0[1], before + 3);
        assert!(matches!(big.refine_add_vertex(&p(&[5, 5])), Err(Error::OutsidePolytope(_))));
        assert!(matches!(big.refine_add_vertex(&p(&[0, 0])), Err(Error::AlreadyVertex(_))));
    }

    #[test]
    fn symmetric_multiplicities() {
        let seg = Triangulation::new(LatticePolytope::standard_simplex(1, 2), vec![p(&[0]), p(&[2])], vec![vec![0, 1]]).unwrap();
        let s = seg.symmetric_extension().unwrap();
        assert_eq!(s.copy_count(), 2);
        let origin = s.faces.iter().find(|f| f.face == vec![0]).unwrap();
        assert_eq!(origin.multiplicity, 1);
        let unit = Triangulation::new(
            LatticePolytope::standard_simplex(2, 1),
            vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let s = unit.symmetric_extension().unwrap();
        assert_eq!(s.copy_count(), 4);
        let mult = |f: Vec<usize>| s.faces.iter().find(|x| x.face == f).unwrap().multiplicity;
        assert_eq!(mult(vec![0]), 1);
        // (0,0)-(1,0) lies on the x-axis
        let i = unit.point_index(&p(&[1, 0])).unwrap();
        assert_eq!(mult(vec![0, i]), 2);
        assert_eq!(mult(vec![0, 1, 2]), 4);
    }

    #[test]
    fn regular_triangulation_from_heights() {
        let pts = LatticePolytope::standard_simplex(2, 2).lattice_points();
        // strictly convex heights x^2 + y^2 + xy-ish
        let h: Vec<i64> = pts.iter().map(|q| q.0[0] * q.0[0] + q.0[1] * q.0[1] + q.0[0] * q.0[1]).collect();
        let t = regular_from_heights(&pts, &h).unwrap().unwrap();
        assert!(t.validate().ok());
        assert_eq!(t.cells().len(), 4);
        let hf = HeightFunction::from_ints(
            &t.points().iter().map(|q| q.0[0] * q.0[0] + q.0[1] * q.0[1] + q.0[0] * q.0[1]).collect::<Vec<_>>(),
        );
        assert!(t.certify_convexity(&hf).unwrap());
        // flat heights are not generic
        assert!(regular_from_heights(&pts, &vec![0; pts.len()]).unwrap().is_none());
    }
}
