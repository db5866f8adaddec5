//! Combinatorial critical points: O-visibility, O-index, roots, the
//! simplices behind and in front of a face, and real critical copies.
//!
//! For a cell `T` and a vertex `v` of `T`, write `F_v` for the facet of `T`
//! opposite `v`. `F_v` is visible from `O` when `O` and `v` lie strictly on
//! opposite sides of its hyperplane. The root of `T` is then the set of
//! vertices whose opposite facet is not visible, and the co-root the set
//! of vertices whose opposite facet is visible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, binomial};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::par::{self, Mode};
use crate::signs::SignDistribution;
use crate::triangulation::{Face, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin(pub LatticePoint);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityRecord {
    pub cell: usize,
    /// `visible[j]`: the facet opposite the cell's `j`-th vertex is visible.
    pub visible: Vec<bool>,
    pub o_index: usize,
    pub root: Vec<usize>,
    pub coroot: Vec<usize>,
}

/// Hyperplane of `F_v` with the sign convention that `v` is on the positive side.
struct FacetFunctional {
    normal: Vec<i64>,
    level: i128,
}

impl FacetFunctional {
    fn new(tri: &Triangulation, facet: &[usize], apex: usize) -> Self {
        let pts: Vec<&[i64]> = facet.iter().map(|&i| tri.points()[i].coords()).collect();
        let mut normal = arith::hyperplane_normal(&pts).expect("cell facets span hyperplanes");
        let mut level = arith::dot(&normal, pts[0]);
        if arith::dot(&normal, tri.points()[apex].coords()) < level {
            normal.iter_mut().for_each(|x| *x = -*x);
            level = -level;
        }
        FacetFunctional { normal, level }
    }

    fn eval(&self, p: &[i64]) -> i128 {
        arith::dot(&self.normal, p) - self.level
    }
}

pub fn is_generic(tri: &Triangulation, origin: &LatticePoint) -> bool {
    let n = tri.dim();
    if tri.polytope().contains(origin.coords()) {
        return false;
    }
    if n == 0 {
        return true;
    }
    tri.faces(n - 1).iter().all(|f| {
        let pts: Vec<&[i64]> = f.iter().map(|&i| tri.points()[i].coords()).collect();
        match arith::hyperplane_normal(&pts) {
            Some(normal) => arith::dot(&normal, origin.coords()) != arith::dot(&normal, pts[0]),
            None => true,
        }
    })
}

/// A generic origin deep in the negative orthant: staggered offsets below
/// the minimum vertex coordinate, with seeded random perturbation on retry.
pub fn find_generic_origin(tri: &Triangulation) -> Result<Origin> {
    const RETRIES: usize = 64;
    let n = tri.dim();
    let vmin = tri.points().iter().flat_map(|p| p.0.iter().copied()).min().unwrap_or(0);
    let (lo, hi) = tri.polytope().bounding_box();
    let m = lo.iter().zip(&hi).map(|(a, b)| b - a).max().unwrap_or(0);
    let base: Vec<i64> = (1..=n as i64).map(|i| vmin - m - i).collect();
    let candidate = LatticePoint(base.clone());
    if is_generic(tri, &candidate) {
        return Ok(Origin(candidate));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for attempt in 1..=RETRIES {
        let spread = 8 * attempt as i64;
        let mut offsets: Vec<i64> = Vec::with_capacity(n);
        while offsets.len() < n {
            let o = rng.gen_range(0..spread.max(n as i64 * 2));
            if !offsets.contains(&o) {
                offsets.push(o);
            }
        }
        let p = LatticePoint(base.iter().zip(&offsets).map(|(b, o)| b - o).collect());
        if is_generic(tri, &p) {
            return Ok(Origin(p));
        }
    }
    Err(Error::OriginSearchFailed(RETRIES))
}

/// Visibility data for every cell of a triangulation from a fixed origin.
#[derive(Debug, Clone)]
pub struct CriticalAnalysis<'a> {
    tri: &'a Triangulation,
    origin: Origin,
    records: Vec<VisibilityRecord>,
}

pub fn visibility(tri: &Triangulation, cell: usize, origin: &Origin) -> Result<VisibilityRecord> {
    let c = &tri.cells()[cell];
    let facets = tri.cell_facets(cell);
    let mut visible = Vec::with_capacity(c.len());
    for (j, f) in facets.iter().enumerate() {
        let h = FacetFunctional::new(tri, f, c[j]);
        let side = h.eval(origin.0.coords());
        if side == 0 {
            return Err(Error::NonGenericOrigin(format!("{:?} lies on the hyperplane of facet {f:?}", origin.0)));
        }
        visible.push(side < 0);
    }
    let o_index = visible.iter().filter(|&&v| v).count();
    let root = c.iter().zip(&visible).filter(|(_, &v)| !v).map(|(&i, _)| i).collect();
    let coroot = c.iter().zip(&visible).filter(|(_, &v)| v).map(|(&i, _)| i).collect();
    Ok(VisibilityRecord { cell, visible, o_index, root, coroot })
}

/// Number of reflection copies in which the root is monochrome and the
/// co-root carries the opposite sign.
pub fn real_critical_copies(tri: &Triangulation, rec: &VisibilityRecord, signs: &SignDistribution) -> usize {
    let n = tri.dim();
    (0u32..1 << n).filter(|&eps| is_critical_copy(tri, rec, signs, eps)).count()
}

pub fn is_critical_copy(tri: &Triangulation, rec: &VisibilityRecord, signs: &SignDistribution, eps: u32) -> bool {
    let sign = |v: usize| signs.in_copy(v, &tri.points()[v], eps);
    let r = sign(rec.root[0]);
    rec.root.iter().all(|&v| sign(v) == r) && rec.coroot.iter().all(|&v| sign(v) == -r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexHistogram {
    pub origin: Vec<i64>,
    /// `s[i]`: cells of O-index `i` (entry 0 unused).
    pub s: Vec<usize>,
    /// `s_bar[i]`: cells of O-index `i` with at least one real critical copy.
    pub s_bar: Vec<usize>,
    /// `paired[i] = c_i^- + c_{n-i}^+` for `i = 0..n`: critical copies of cells of index `n - i`.
    pub paired: Vec<usize>,
    /// Upper bounds: `c_i^+` counts only copies of index-`i` cells,
    /// `c_i^-` only copies of index-`(n - i)` cells.
    pub c_plus_max: Vec<usize>,
    pub c_minus_max: Vec<usize>,
}

impl IndexHistogram {
    /// Sum of `c_i^- + c_{n-i}^+` over `i`, the Morse-side bound on total Betti number.
    pub fn paired_total(&self) -> usize {
        self.paired.iter().sum()
    }
}

impl<'a> CriticalAnalysis<'a> {
    pub fn new(tri: &'a Triangulation, origin: Origin) -> Result<Self> {
        Self::with_mode(Mode::Parallel, tri, origin)
    }

    pub fn with_mode(mode: Mode, tri: &'a Triangulation, origin: Origin) -> Result<Self> {
        if !is_generic(tri, &origin.0) {
            return Err(Error::NonGenericOrigin(format!("{:?}", origin.0)));
        }
        let ids: Vec<usize> = (0..tri.cells().len()).collect();
        let records = par::map_with(mode, &ids, |&c| visibility(tri, c, &origin)).into_iter().collect::<Result<Vec<_>>>()?;
        Ok(CriticalAnalysis { tri, origin, records })
    }

    /// Analysis from [`find_generic_origin`].
    pub fn auto(tri: &'a Triangulation) -> Result<Self> {
        Self::new(tri, find_generic_origin(tri)?)
    }

    pub fn auto_with(mode: Mode, tri: &'a Triangulation) -> Result<Self> {
        Self::with_mode(mode, tri, find_generic_origin(tri)?)
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn records(&self) -> &[VisibilityRecord] {
        &self.records
    }

    pub fn record(&self, cell: usize) -> &VisibilityRecord {
        &self.records[cell]
    }

    /// Star cell entered by `X + t(X - O)` (`away = true`) or `X - t(X - O)`,
    /// `X` the barycenter of `face`, for small `t > 0`.
    fn step_cell(&self, face: &[usize], away: bool) -> Result<usize> {
        if !self.tri.is_interior_face(face) {
            return Err(Error::FaceNotInterior);
        }
        let k1 = face.len() as i64;
        let n = self.tri.dim();
        // scaled barycenter (k+1) X and scaled direction (k+1)(X - O)
        let sum: Vec<i64> = (0..n).map(|i| face.iter().map(|&v| self.tri.points()[v].0[i]).sum()).collect();
        let dir: Vec<i64> = (0..n)
            .map(|i| (sum[i] - k1 * self.origin.0 .0[i]) * if away { 1 } else { -1 })
            .collect();
        let mut found = None;
        for &cell in self.tri.star(face) {
            let c = &self.tri.cells()[cell];
            let facets = self.tri.cell_facets(cell);
            let inside = facets.iter().enumerate().all(|(j, f)| {
                let h = FacetFunctional::new(self.tri, f, c[j]);
                let value = arith::dot(&h.normal, &sum) - k1 as i128 * h.level;
                let deriv = arith::dot(&h.normal, &dir);
                value > 0 || (value == 0 && deriv > 0)
            });
            if inside {
                if found.is_some() {
                    return Err(Error::NonGenericOrigin(format!("ray from {face:?} enters two cells")));
                }
                found = Some(cell);
            }
        }
        found.ok_or_else(|| Error::NonGenericOrigin(format!("ray from {face:?} enters no cell")))
    }

    pub fn behind(&self, face: &[usize]) -> Result<usize> {
        self.step_cell(face, true)
    }

    pub fn in_front(&self, face: &[usize]) -> Result<usize> {
        self.step_cell(face, false)
    }

    pub fn index_histogram(&self, signs: &SignDistribution) -> Result<IndexHistogram> {
        signs.check_total(self.tri)?;
        let n = self.tri.dim();
        let crit: Vec<usize> = par::map(&self.records, |r| real_critical_copies(self.tri, r, signs));
        let mut s = vec![0; n + 1];
        let mut s_bar = vec![0; n + 1];
        let mut copies_by_index = vec![0; n + 1];
        for (r, &c) in self.records.iter().zip(&crit) {
            s[r.o_index] += 1;
            if c > 0 {
                s_bar[r.o_index] += 1;
            }
            copies_by_index[r.o_index] += c;
        }
        Ok(IndexHistogram {
            origin: self.origin.0 .0.clone(),
            s,
            s_bar,
            paired: (0..n).map(|i| copies_by_index[n - i]).collect(),
            c_plus_max: (0..=n).map(|i| copies_by_index[i]).collect(),
            c_minus_max: (0..=n).map(|i| copies_by_index[n - i]).collect(),
        })
    }

    /// Interior `k`-faces of `cell` that are intersections of its visible
    /// (`visible = true`) or non-visible facets, i.e. the faces it claims as
    /// the cell behind (in front of) them.
    pub fn claimed_faces(&self, cell: usize, k: usize, visible: bool) -> Vec<Face> {
        let n = self.tri.dim();
        let rec = &self.records[cell];
        let pool = if visible { &rec.coroot } else { &rec.root };
        if n < k || pool.len() < n - k {
            return Vec::new();
        }
        let c = &self.tri.cells()[cell];
        crate::lattice::subsets_of_size(pool, n - k)
            .into_iter()
            .map(|drop| c.iter().copied().filter(|v| !drop.contains(v)).collect::<Face>())
            .collect()
    }
}

/// Outcome of one family of exact checks: instances examined and violations found.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Audit {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.violations.len() < 16 {
            self.violations.push(msg);
        }
    }

    pub fn merge(&mut self, other: Audit) {
        self.checked += other.checked;
        for v in other.violations {
            self.fail(v);
        }
    }
}

fn interior_faces(tri: &Triangulation, k: usize) -> impl Iterator<Item = &Face> {
    tri.faces(k).iter().filter(move |f| tri.is_interior_face(f))
}

impl CriticalAnalysis<'_> {
    /// Index bounds on the cells behind and in front of each interior face,
    /// and that they differ.
    pub fn audit_index_bounds(&self) -> Audit {
        let n = self.tri.dim();
        let mut a = Audit::default();
        for k in 0..n {
            for f in interior_faces(self.tri, k) {
                a.checked += 1;
                match (self.behind(f), self.in_front(f)) {
                    (Ok(b), Ok(fr)) => {
                        let ib = self.records[b].o_index;
                        let ifr = self.records[fr].o_index;
                        if b == fr {
                            a.fail(format!("face {f:?}: behind and in front coincide"));
                        }
                        if ib < n - k || ifr > k + 1 {
                            a.fail(format!("face {f:?} (k={k}): index behind {ib}, in front {ifr}"));
                        }
                        if k == 0 && (ib != n || ifr != 1) {
                            a.fail(format!("vertex {f:?}: index behind {ib}, in front {ifr}"));
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => a.fail(format!("face {f:?}: {e}")),
                }
            }
        }
        a
    }

    /// Monochrome interior faces whose neighbour has a critical copy force its index.
    /// Checked copy by copy.
    pub fn audit_sign_visibility(&self, signs: &SignDistribution) -> Audit {
        let n = self.tri.dim();
        let pts = self.tri.points();
        let mut a = Audit::default();
        for k in 0..n {
            for f in interior_faces(self.tri, k) {
                let (Ok(b), Ok(fr)) = (self.behind(f), self.in_front(f)) else {
                    a.fail(format!("face {f:?}: ray step failed"));
                    continue;
                };
                for eps in 0u32..1 << n {
                    let s0 = signs.in_copy(f[0], &pts[f[0]], eps);
                    if !f.iter().all(|&v| signs.in_copy(v, &pts[v], eps) == s0) {
                        continue;
                    }
                    a.checked += 1;
                    if is_critical_copy(self.tri, &self.records[b], signs, eps) && self.records[b].o_index != n - k {
                        a.fail(format!("face {f:?} copy {eps}: behind has index {}", self.records[b].o_index));
                    }
                    if is_critical_copy(self.tri, &self.records[fr], signs, eps) && self.records[fr].o_index != k + 1 {
                        a.fail(format!("face {f:?} copy {eps}: in front has index {}", self.records[fr].o_index));
                    }
                }
            }
        }
        a
    }

    /// For `n > 2`: across an interior facet whose two cells are both twice a
    /// primitive simplex, the cell behind has index 1 and the one in front
    /// index `n` never simultaneously.
    pub fn audit_facet_pairs(&self) -> Audit {
        let n = self.tri.dim();
        let mut a = Audit::default();
        if n <= 2 {
            return a;
        }
        for f in interior_faces(self.tri, n - 1) {
            let (Ok(b), Ok(fr)) = (self.behind(f), self.in_front(f)) else {
                a.fail(format!("facet {f:?}: ray step failed"));
                continue;
            };
            if !(self.tri.is_double_primitive(b) && self.tri.is_double_primitive(fr)) {
                continue;
            }
            a.checked += 1;
            if self.records[b].o_index == 1 && self.records[fr].o_index == n {
                a.fail(format!("facet {f:?}: behind index 1 and in front index {n}"));
            }
        }
        a
    }

    /// Two-sided incidence audit: each interior `k`-face has exactly one cell
    /// behind it, which claims it among the intersections of its visible
    /// facets; each claimed interior face has the claiming cell behind it.
    /// Dually for in front and non-visible facets. Also checks that the
    /// interior claims add up to `s_k`.
    pub fn audit_incidence(&self) -> Audit {
        let n = self.tri.dim();
        let counts = self.tri.interior_face_counts().0;
        let mut a = Audit::default();
        for k in 0..=n {
            for visible in [true, false] {
                let mut total = 0;
                for cell in 0..self.tri.cells().len() {
                    let claims = self.claimed_faces(cell, k, visible);
                    let j = if visible { self.records[cell].o_index } else { n + 1 - self.records[cell].o_index };
                    if claims.len() as i128 != binomial(j as i64, (n - k) as i64) {
                        a.fail(format!("cell {cell}: {} claims of {k}-faces, expected C({j},{})", claims.len(), n - k));
                    }
                    for f in claims.iter().filter(|f| self.tri.is_interior_face(f)) {
                        a.checked += 1;
                        total += 1;
                        let got = if visible { self.behind(f) } else { self.in_front(f) };
                        if got.as_ref().ok() != Some(&cell) {
                            a.fail(format!("cell {cell} claims {f:?} but the ray step gives {got:?}"));
                        }
                    }
                }
                if total != counts[k] {
                    a.fail(format!("k={k}: {total} interior claims, s_k = {}", counts[k]));
                }
            }
        }
        a
    }

    /// Every interior vertex star holds a cell with no real critical copy
    /// or a cell that is not twice a primitive simplex. Meant for
    /// triangulations with all vertices even and `n >= 3`.
    pub fn audit_vertex_stars(&self, signs: &SignDistribution) -> Audit {
        let mut a = Audit::default();
        for f in interior_faces(self.tri, 0) {
            a.checked += 1;
            let good = self.tri.star(f).iter().any(|&c| {
                !self.tri.is_double_primitive(c) || real_critical_copies(self.tri, &self.records[c], signs) == 0
            });
            if !good {
                a.fail(format!("vertex {:?}: every star cell is twice primitive with critical copies", self.tri.points()[f[0]]));
            }
        }
        a
    }

    /// Every cell has 0 or `2^n` real critical copies (all vertices even).
    pub fn audit_critical_copies(&self, signs: &SignDistribution) -> Audit {
        let full = 1usize << self.tri.dim();
        let mut a = Audit::default();
        for r in &self.records {
            a.checked += 1;
            let c = real_critical_copies(self.tri, r, signs);
            if c != 0 && c != full {
                a.fail(format!("cell {}: {c} real critical copies", r.cell));
            }
        }
        a
    }
}
