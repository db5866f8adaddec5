//! Lattice points, simplices and polytopes with exact predicates.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, affine_dim, det, dot, hyperplane_normal};
use crate::error::{Error, Result};
use crate::par;

/// An integer point. Ordering is lexicographic on coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        LatticePoint(coords.into())
    }

    pub fn origin(n: usize) -> Self {
        LatticePoint(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn scaled(&self, k: i64) -> Self {
        LatticePoint(self.0.iter().map(|x| x * k).collect())
    }

    /// Reflect in every coordinate hyperplane whose bit is set in `mask`.
    pub fn reflected(&self, mask: u32) -> Self {
        LatticePoint(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &x)| if mask >> i & 1 == 1 { -x } else { x })
                .collect(),
        )
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|x| x % 2 == 0)
    }

    pub fn sub(&self, other: &LatticePoint) -> Vec<i64> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(v: [i64; N]) -> Self {
        LatticePoint(v.to_vec())
    }
}

/// A point with exact rational coordinates in reduced form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(pub Vec<BigRational>);

impl RationalPoint {
    pub fn barycenter(points: &[&LatticePoint]) -> Self {
        let k = BigInt::from(points.len());
        let n = points[0].dim();
        RationalPoint(
            (0..n)
                .map(|i| {
                    let s: i64 = points.iter().map(|p| p.0[i]).sum();
                    BigRational::new(BigInt::from(s), k.clone())
                })
                .collect(),
        )
    }
}

/// `normal . x <= offset`, with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i128,
}

impl Halfspace {
    pub fn eval(&self, p: &[i64]) -> i128 {
        self.offset - dot(&self.normal, p)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn subsets_of_size<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    combinations(items.len(), k)
        .into_iter()
        .map(|c| c.into_iter().map(|i| items[i].clone()).collect())
        .collect()
}

/// Scan every integer point of the box `[lo, hi]`.
fn scan_box<F>(lo: &[i64], hi: &[i64], keep: F) -> Vec<LatticePoint>
where
    F: Fn(&[i64]) -> bool + Sync + Send,
{
    let n = lo.len();
    if n == 0 {
        return if keep(&[]) { vec![LatticePoint(vec![])] } else { vec![] };
    }
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return vec![];
    }
    let first: Vec<i64> = (lo[0]..=hi[0]).collect();
    let chunks = par::map(&first, |&x0| {
        let mut found = Vec::new();
        let mut cur: Vec<i64> = lo.to_vec();
        cur[0] = x0;
        loop {
            if keep(&cur) {
                found.push(LatticePoint(cur.clone()));
            }
            let mut i = n - 1;
            loop {
                if i == 0 {
                    return found;
                }
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i];
                i -= 1;
            }
        }
    });
    chunks.into_iter().flatten().collect()
}

/// A simplex with integer vertices, stored in lexicographic vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSimplex {
    vertices: Vec<LatticePoint>,
    // rows of the edge matrix with a nonsingular k x k minor
    pivot_rows: Vec<usize>,
}

impl LatticeSimplex {
    pub fn new(mut vertices: Vec<LatticePoint>) -> Result<Self> {
        let n = vertices.first().map(|v| v.dim()).ok_or(Error::Degenerate)?;
        if let Some(bad) = vertices.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        vertices.sort();
        vertices.dedup();
        let k = vertices.len() - 1;
        if k > n {
            return Err(Error::Degenerate);
        }
        let edges: Vec<Vec<i64>> = vertices[1..].iter().map(|v| v.sub(&vertices[0])).collect();
        let pivot_rows = combinations(n, k)
            .into_iter()
            .find(|rows| {
                let m: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|&r| edges.iter().map(|e| e[r]).collect())
                    .collect();
                !det(&m).is_zero()
            })
            .ok_or(Error::Degenerate)?;
        Ok(LatticeSimplex { vertices, pivot_rows })
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn dilate(&self, k: i64) -> Self {
        LatticeSimplex {
            vertices: self.vertices.iter().map(|v| v.scaled(k)).collect(),
            pivot_rows: self.pivot_rows.clone(),
        }
    }

    /// `n!` times the Euclidean volume; 1 iff the simplex is primitive.
    pub fn normalized_volume(&self) -> Result<BigInt> {
        if self.dim() != self.ambient_dim() {
            return Err(Error::NotFullDimensional);
        }
        let edges: Vec<Vec<i64>> =
            self.vertices[1..].iter().map(|v| v.sub(&self.vertices[0])).collect();
        Ok(det(&edges).abs())
    }

    /// Barycentric coordinates `numerators / denominator` (denominator > 0),
    /// or `None` if `p` is outside the affine hull.
    pub fn barycentric(&self, p: &[i64]) -> Option<(Vec<BigInt>, BigInt)> {
        let k = self.dim();
        let v0 = &self.vertices[0];
        let edges: Vec<Vec<i64>> = self.vertices[1..].iter().map(|v| v.sub(v0)).collect();
        let rhs: Vec<i64> = p.iter().zip(&v0.0).map(|(a, b)| a - b).collect();
        let minor = |replace: Option<usize>| -> Vec<Vec<i64>> {
            self.pivot_rows
                .iter()
                .map(|&r| {
                    (0..k)
                        .map(|c| if Some(c) == replace { rhs[r] } else { edges[c][r] })
                        .collect()
                })
                .collect()
        };
        let mut denom = det(&minor(None));
        let mut nums: Vec<BigInt> = (0..k).map(|c| det(&minor(Some(c)))).collect();
        for (r, &target) in rhs.iter().enumerate() {
            let lhs: BigInt = (0..k).map(|c| &nums[c] * BigInt::from(edges[c][r])).sum();
            if lhs != &denom * BigInt::from(target) {
                return None;
            }
        }
        if denom.is_negative() {
            denom = -denom;
            for x in nums.iter_mut() {
                *x = -x.clone();
            }
        }
        let first = &denom - nums.iter().sum::<BigInt>();
        let mut all = Vec::with_capacity(k + 1);
        all.push(first);
        all.extend(nums);
        Some((all, denom))
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.barycentric(p)
            .is_some_and(|(nums, _)| nums.iter().all(|x| !x.is_negative()))
    }

    pub fn contains_relint(&self, p: &[i64]) -> bool {
        self.barycentric(p)
            .is_some_and(|(nums, _)| nums.iter().all(|x| x.is_positive()))
    }

    fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let n = self.ambient_dim();
        let lo = (0..n).map(|i| self.vertices.iter().map(|v| v.0[i]).min().unwrap()).collect();
        let hi = (0..n).map(|i| self.vertices.iter().map(|v| v.0[i]).max().unwrap()).collect();
        (lo, hi)
    }

    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box();
        scan_box(&lo, &hi, |p| self.contains(p))
    }

    /// No integer point besides the vertices.
    pub fn is_empty(&self) -> bool {
        self.lattice_points().len() == self.vertices.len()
    }

    /// Integer points in the relative interior of `k` times the simplex.
    pub fn interior_count(&self, k: i64) -> usize {
        let s = self.dilate(k);
        let (lo, hi) = s.bounding_box();
        scan_box(&lo, &hi, |p| s.contains_relint(p)).len()
    }
}

/// A full-dimensional convex lattice polytope given by its vertices, with
/// the facet description computed at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolytope {
    vertices: Vec<LatticePoint>,
    facets: Vec<Halfspace>,
}

impl LatticePolytope {
    /// Convex hull of `points`; redundant (non-vertex) points are dropped.
    pub fn new(points: Vec<LatticePoint>) -> Result<Self> {
        let n = points.first().map(|p| p.dim()).ok_or(Error::NotFullDimensional)?;
        if let Some(bad) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        let mut pts = points;
        pts.sort();
        pts.dedup();
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.coords()).collect();
        if affine_dim(&refs) != Some(n) {
            return Err(Error::NotFullDimensional);
        }
        let facets = if n == 0 { vec![] } else { facets_of(&pts) };
        let vertices: Vec<LatticePoint> = pts
            .into_iter()
            .filter(|p| {
                let normals: Vec<Vec<i64>> = facets
                    .iter()
                    .filter(|f| f.eval(p.coords()) == 0)
                    .map(|f| f.normal.clone())
                    .collect();
                arith::rank(&normals) == n
            })
            .collect();
        Ok(LatticePolytope { vertices, facets })
    }

    /// The standard simplex of size `m` in dimension `n`.
    pub fn standard_simplex(n: usize, m: i64) -> Self {
        let mut pts = vec![LatticePoint::origin(n)];
        for i in 0..n {
            let mut c = vec![0; n];
            c[i] = m;
            pts.push(LatticePoint(c));
        }
        Self::new(pts).expect("standard simplex is full-dimensional")
    }

    /// The box `[0, m_1] x ... x [0, m_n]`.
    pub fn lattice_box(sides: &[i64]) -> Self {
        let n = sides.len();
        let pts = (0..1u32 << n)
            .map(|mask| {
                LatticePoint(
                    (0..n).map(|i| if mask >> i & 1 == 1 { sides[i] } else { 0 }).collect(),
                )
            })
            .collect();
        Self::new(pts).expect("box is full-dimensional")
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn dilate(&self, k: i64) -> Self {
        LatticePolytope {
            vertices: self.vertices.iter().map(|v| v.scaled(k)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Halfspace { normal: f.normal.clone(), offset: f.offset * k as i128 })
                .collect(),
        }
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(p) >= 0)
    }

    pub fn contains_interior(&self, p: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(p) > 0)
    }

    /// Indices of the facets containing every point of `points`.
    pub fn supporting_facets<'a>(&self, points: impl IntoIterator<Item = &'a [i64]> + Clone) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| points.clone().into_iter().all(|p| self.facets[i].eval(p) == 0))
            .collect()
    }

    /// Dimension of the smallest face of the polytope containing `points`.
    pub fn carrier_dim<'a>(&self, points: impl IntoIterator<Item = &'a [i64]> + Clone) -> usize {
        let fs = self.supporting_facets(points);
        let on_all: Vec<&[i64]> = self
            .vertices
            .iter()
            .map(|v| v.coords())
            .filter(|v| fs.iter().all(|&i| self.facets[i].eval(v) == 0))
            .collect();
        affine_dim(&on_all).unwrap_or(0)
    }

    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let n = self.dim();
        let lo = (0..n).map(|i| self.vertices.iter().map(|v| v.0[i]).min().unwrap()).collect();
        let hi = (0..n).map(|i| self.vertices.iter().map(|v| v.0[i]).max().unwrap()).collect();
        (lo, hi)
    }

    /// All integer points of the closed polytope, sorted.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box();
        scan_box(&lo, &hi, |p| self.contains(p))
    }

    /// `l*(k P)`: integer points in the interior of the `k`-th dilate.
    pub fn interior_count(&self, k: i64) -> usize {
        let d = self.dilate(k);
        let (lo, hi) = d.bounding_box();
        scan_box(&lo, &hi, |p| d.contains_interior(p)).len()
    }

    /// `n!` times the volume.
    pub fn normalized_volume(&self) -> BigInt {
        pulling_triangulation(&self.vertices, &self.facets)
            .iter()
            .map(|cell| {
                let v0 = &self.vertices[cell[0]];
                let edges: Vec<Vec<i64>> =
                    cell[1..].iter().map(|&i| self.vertices[i].sub(v0)).collect();
                det(&edges).abs()
            })
            .sum()
    }

    /// True when this is `[0,m]^n`-free `m * standard simplex`; returns `m`.
    pub fn as_standard_simplex(&self) -> Option<i64> {
        let n = self.dim();
        if self.vertices.len() != n + 1 {
            return None;
        }
        let m = self.vertices.iter().map(|v| v.0.iter().sum::<i64>()).max()?;
        (*self == Self::standard_simplex(n, m)).then_some(m)
    }

    /// Side lengths when this is a box `[0,m_1] x ... x [0,m_n]`.
    pub fn as_box(&self) -> Option<Vec<i64>> {
        let n = self.dim();
        let (lo, hi) = self.bounding_box();
        if lo.iter().any(|&x| x != 0) || self.vertices.len() != 1 << n {
            return None;
        }
        (*self == Self::lattice_box(&hi)).then_some(hi)
    }
}

fn facets_of(points: &[LatticePoint]) -> Vec<Halfspace> {
    let n = points[0].dim();
    let mut out = BTreeSet::new();
    for subset in combinations(points.len(), n) {
        let refs: Vec<&[i64]> = subset.iter().map(|&i| points[i].coords()).collect();
        let Some(normal) = hyperplane_normal(&refs) else {
            continue;
        };
        let level = dot(&normal, refs[0]);
        let vals: Vec<i128> = points.iter().map(|p| dot(&normal, p.coords())).collect();
        if vals.iter().all(|&v| v <= level) {
            out.insert(Halfspace { normal, offset: level });
        } else if vals.iter().all(|&v| v >= level) {
            out.insert(Halfspace { normal: normal.iter().map(|x| -x).collect(), offset: -level });
        }
    }
    out.into_iter().collect()
}

/// Pulling triangulation of a convex polytope with vertex list `vertices`
/// (any order) and facet halfspaces `facets`. The apex of every face is its
/// lexicographically smallest vertex, so the triangulations of two
/// polytopes agree on any common face.
pub fn pulling_triangulation(vertices: &[LatticePoint], facets: &[Halfspace]) -> Vec<Vec<usize>> {
    let n = vertices[0].dim();
    let facet_sets: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| (0..vertices.len()).filter(|&i| f.eval(vertices[i].coords()) == 0).collect())
        .collect();
    let all: Vec<usize> = (0..vertices.len()).collect();
    let mut out = pull(vertices, &facet_sets, &all, n);
    for c in out.iter_mut() {
        c.sort_unstable();
    }
    out.sort();
    out
}

pub(crate) fn pull(points: &[LatticePoint], facet_sets: &[Vec<usize>], face: &[usize], dim: usize) -> Vec<Vec<usize>> {
    let apex = *face.iter().min_by(|&&a, &&b| points[a].cmp(&points[b])).unwrap();
    if dim == 0 {
        return vec![vec![apex]];
    }
    let mut subfaces = BTreeSet::new();
    for fs in facet_sets {
        let s: Vec<usize> = face.iter().copied().filter(|i| fs.contains(i)).collect();
        if s.len() < dim || s.contains(&apex) || s.len() == face.len() {
            continue;
        }
        let refs: Vec<&[i64]> = s.iter().map(|&i| points[i].coords()).collect();
        if affine_dim(&refs) == Some(dim - 1) {
            subfaces.insert(s);
        }
    }
    let mut out = Vec::new();
    for s in subfaces {
        for mut simplex in pull(points, facet_sets, &s, dim - 1) {
            simplex.push(apex);
            out.push(simplex);
        }
    }
    out
}
