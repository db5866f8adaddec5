//! Generators for the signed triangulations used to show the bounds are sharp.
//!
//! Each generator returns a [`Construction`]: triangulation, heights
//! certifying convexity (when available), signs and ambient space.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::complex::Ambient;
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolytope};
use crate::signs::SignDistribution;
use crate::triangulation::{HeightFunction, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum ConstructionSpec {
    Prop51 { n: usize, m: i64 },
    Prop53 { m: i64 },
    Thm54 { n: usize, m: i64 },
    Lemma56,
    Prop57 { k: [i64; 3] },
}

impl ConstructionSpec {
    pub fn build(&self) -> Result<Construction> {
        match *self {
            ConstructionSpec::Prop51 { n, m } => prop51(n, m),
            ConstructionSpec::Prop53 { m } => prop53(m),
            ConstructionSpec::Thm54 { n, m } => thm54(n, m),
            ConstructionSpec::Lemma56 => lemma56(),
            ConstructionSpec::Prop57 { k } => prop57(k[0], k[1], k[2]),
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionSpec::Prop51 { n, m } => write!(f, "prop51 n={n} m={m}"),
            ConstructionSpec::Prop53 { m } => write!(f, "prop53 m={m}"),
            ConstructionSpec::Thm54 { n, m } => write!(f, "thm54 n={n} m={m}"),
            ConstructionSpec::Lemma56 => write!(f, "lemma56"),
            ConstructionSpec::Prop57 { k } => write!(f, "prop57 k={},{},{}", k[0], k[1], k[2]),
        }
    }
}

/// Parses `prop51:n,m`, `prop53:m`, `thm54:n,m`, `lemma56`, `prop57:k1,k2,k3`.
impl FromStr for ConstructionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<i64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse::<i64>().map_err(|_| Error::InvalidParameter(format!("bad number {a:?}"))))
                .collect::<Result<_>>()?
        };
        let want = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} takes {k} parameters, got {}", nums.len())))
            }
        };
        let dim = |x: i64| usize::try_from(x).map_err(|_| Error::InvalidParameter(format!("dimension {x} is negative")));
        match name {
            "prop51" => want(2).and(Ok(ConstructionSpec::Prop51 { n: dim(nums[0])?, m: nums[1] })),
            "prop53" => want(1).and(Ok(ConstructionSpec::Prop53 { m: nums[0] })),
            "thm54" => want(2).and(Ok(ConstructionSpec::Thm54 { n: dim(nums[0])?, m: nums[1] })),
            "lemma56" => want(0).and(Ok(ConstructionSpec::Lemma56)),
            "prop57" => {
                if nums.len() == 1 {
                    Ok(ConstructionSpec::Prop57 { k: [nums[0]; 3] })
                } else {
                    want(3).and(Ok(ConstructionSpec::Prop57 { k: [nums[0], nums[1], nums[2]] }))
                }
            }
            other => Err(Error::InvalidParameter(format!("unknown construction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub triangulation: Triangulation,
    /// Heights indexed like the triangulation's vertices.
    pub heights: Option<HeightFunction>,
    pub signs: SignDistribution,
    pub ambient: Ambient,
}

impl Construction {
    /// Whether the shipped heights certify convexity.
    pub fn certified(&self) -> bool {
        match &self.heights {
            Some(h) => self.triangulation.certify_convexity(h).unwrap_or(false),
            None => false,
        }
    }
}

fn check_even(m: i64) -> Result<()> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidParameter(format!("degree {m} must be a positive even integer")));
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Assemble a triangulation from cells given by coordinates, with heights
/// and signs given as functions of the vertex.
fn assemble(
    spec: ConstructionSpec,
    polytope: LatticePolytope,
    cells: Vec<Vec<LatticePoint>>,
    height: impl Fn(&LatticePoint) -> BigRational,
    sign: impl Fn(&LatticePoint) -> i8,
    ambient: Ambient,
) -> Result<Construction> {
    let triangulation = Triangulation::from_point_cells(polytope, cells)?;
    let heights = HeightFunction(triangulation.points().iter().map(&height).collect());
    let signs = SignDistribution::from_fn(&triangulation, sign)?;
    Ok(Construction { spec, triangulation, heights: Some(heights), signs, ambient })
}

fn int(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Hyperplane-slice subdivision of the simplex of size `m/2`, refined by the
/// alcove triangulation in suffix-sum coordinates, checkerboard signs,
/// dilated by 2.
pub fn prop51(n: usize, m: i64) -> Result<Construction> {
    check_even(m)?;
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let half = m / 2;
    // y_j = x_j + ... + x_n, so the simplex is half >= y_1 >= ... >= y_n >= 0
    let to_y = |x: &[i64]| -> Vec<i64> { (0..n).map(|j| x[j..].iter().sum()).collect() };
    let to_x = |y: &[i64]| -> Vec<i64> { (0..n).map(|j| y[j] - y.get(j + 1).copied().unwrap_or(0)).collect() };
    let small = LatticePolytope::standard_simplex(n, half);
    let ys: HashSet<Vec<i64>> = small.lattice_points().iter().map(|p| to_y(p.coords())).collect();
    let mut cells = Vec::new();
    let mut ordered: Vec<&Vec<i64>> = ys.iter().collect();
    ordered.sort();
    for z in ordered {
        for perm in permutations(n) {
            let mut cur = z.clone();
            let mut chain = vec![cur.clone()];
            for &i in &perm {
                cur[i] += 1;
                chain.push(cur.clone());
            }
            if chain.iter().all(|y| ys.contains(y)) {
                cells.push(chain.iter().map(|y| LatticePoint(to_x(y)).scaled(2)).collect());
            }
        }
    }
    let height = move |p: &LatticePoint| {
        let x: Vec<i64> = p.0.iter().map(|c| c / 2).collect();
        let mut y = vec![0i64];
        y.extend((0..n).map(|j| x[j..].iter().sum::<i64>()));
        let mut h: i128 = 0;
        for i in 0..=n {
            for j in i + 1..=n {
                h += ((y[i] - y[j]) as i128).pow(2);
            }
        }
        int(h)
    };
    let sign = |p: &LatticePoint| if (p.0.iter().sum::<i64>() / 2) % 2 == 0 { 1 } else { -1 };
    assemble(
        ConstructionSpec::Prop51 { n, m },
        LatticePolytope::standard_simplex(n, m),
        cells,
        height,
        sign,
        Ambient::Projective { m },
    )
}

/// `D g(T / D)` where `g` is the piecewise-linear interpolation of `t^2`
/// at the integers.
fn scaled_bend(t: i64, d: i64) -> i128 {
    let j = t.div_euclid(d) as i128;
    (2 * j + 1) * t as i128 - d as i128 * j * (j + 1)
}

struct SimplexSlices {
    /// Vertices of each coarse cell, in `x` coordinates (half scale).
    cells: Vec<Vec<LatticePoint>>,
    /// The unique interior lattice point of each cell.
    centers: Vec<LatticePoint>,
}

/// Cells of the subdivision of `half * Pi^n` (vertices `0` and `1 + e_j`)
/// by the hyperplanes `a_j = k` and `sum a = k`, where `x = (sum a) 1 + a`.
fn slices(n: usize, half: i64) -> SimplexSlices {
    let to_x = |a: &[i64]| -> LatticePoint {
        let s: i64 = a.iter().sum();
        LatticePoint(a.iter().map(|ai| s + ai).collect())
    };
    let corners = LatticePolytope::standard_simplex(n, half).lattice_points();
    let mut cells = Vec::new();
    let mut centers = Vec::new();
    for z in &corners {
        let base: i64 = z.0.iter().sum();
        for t in 0..n as i64 {
            if base + t + 1 > half {
                break;
            }
            let verts: Vec<LatticePoint> = (0u32..1 << n)
                .filter(|mask| {
                    let ones = mask.count_ones() as i64;
                    ones == t || ones == t + 1
                })
                .map(|mask| {
                    let a: Vec<i64> = (0..n).map(|i| z.0[i] + i64::from(mask >> i & 1 == 1)).collect();
                    to_x(&a)
                })
                .collect();
            let center = LatticePoint((0..n).map(|i| base + z.0[i] + t + 1).collect());
            cells.push(verts);
            centers.push(center);
        }
    }
    SimplexSlices { cells, centers }
}

/// Cone from the center of each cell over its pulled boundary.
fn cone_refinement(slices: &SimplexSlices) -> Result<Vec<Vec<LatticePoint>>> {
    let mut out = Vec::new();
    for (verts, center) in slices.cells.iter().zip(&slices.centers) {
        let cell = LatticePolytope::new(verts.clone())?;
        let pts = cell.vertices();
        let n = cell.dim();
        let facet_sets: Vec<Vec<usize>> = cell
            .facets()
            .iter()
            .map(|f| (0..pts.len()).filter(|&i| f.eval(pts[i].coords()) == 0).collect())
            .collect();
        for fs in &facet_sets {
            let pieces = if fs.len() == n { vec![fs.clone()] } else { crate::lattice::pull(pts, &facet_sets, fs, n - 1) };
            for piece in pieces {
                let mut simplex: Vec<LatticePoint> = piece.iter().map(|&i| pts[i].clone()).collect();
                simplex.push(center.clone());
                out.push(simplex);
            }
        }
    }
    Ok(out)
}

/// Heights for the cone refinement: a convex function bending along the
/// slicing hyperplanes, lowered at the centers; for `n >= 4` the coarse
/// vertices are also lowered by rapidly decreasing amounts in
/// lexicographic order so the facets are pulled.
fn slice_heights<'a>(
    n: usize,
    centers: &'a BTreeSet<LatticePoint>,
    order: &'a BTreeMap<LatticePoint, usize>,
) -> impl Fn(&LatticePoint) -> BigRational + 'a {
    let d = n as i64 + 1;
    move |p: &LatticePoint| {
        let x: Vec<i64> = p.0.iter().map(|c| c / 2).collect();
        let sum: i64 = x.iter().sum();
        // d a_i = d x_i - sum x, d A = sum x
        let mut base = scaled_bend(sum, d);
        for &xi in &x {
            base += scaled_bend(d * xi - sum, d);
        }
        let mut h = int(4 * base);
        if centers.contains(p) {
            h -= int(1);
        } else if n >= 4 {
            let rank = order[p] as u32;
            h -= BigRational::new(BigInt::from(1), BigInt::from(2).pow(8 * (rank + 1)) * 4);
        }
        h
    }
}

fn slice_construction(spec: ConstructionSpec, n: usize, m: i64) -> Result<Construction> {
    check_even(m)?;
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let half = m / 2;
    let sl = slices(n, half);
    let cells: Vec<Vec<LatticePoint>> = cone_refinement(&sl)?
        .into_iter()
        .map(|c| c.into_iter().map(|p| p.scaled(2)).collect())
        .collect();
    let centers: BTreeSet<LatticePoint> = sl.centers.iter().map(|c| c.scaled(2)).collect();
    let coarse: BTreeSet<LatticePoint> = sl.cells.iter().flatten().map(|c| c.scaled(2)).collect();
    let order: BTreeMap<LatticePoint, usize> = coarse.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut pi = vec![LatticePoint::origin(n)];
    pi.extend((0..n).map(|j| LatticePoint((0..n).map(|i| if i == j { 2 * m } else { m }).collect())));
    let polytope = LatticePolytope::new(pi)?;
    let heights = slice_heights(n, &centers, &order);
    let sign = |p: &LatticePoint| if centers.contains(p) { -1 } else { 1 };
    assemble(spec, polytope, cells, heights, sign, Ambient::Affine)
}

/// Cones from the interior point of each slice cell of `(m/2) Pi^n`;
/// `+` on the slice vertices, `-` on the cone apices; dilated by 2.
pub fn thm54(n: usize, m: i64) -> Result<Construction> {
    slice_construction(ConstructionSpec::Thm54 { n, m }, n, m)
}

/// The planar case with triangle `(0,0), (2,1), (1,2)`. Each coarse
/// triangle holds exactly one further lattice point, so its primitive
/// refinement is unique; this is checked.
pub fn prop53(m: i64) -> Result<Construction> {
    check_even(m)?;
    for cell in slices(2, m / 2).cells {
        let count = LatticePolytope::new(cell.clone())?.lattice_points().len();
        if count != 4 {
            return Err(Error::InvalidInput(format!("coarse triangle {cell:?} has {count} lattice points, not 4")));
        }
    }
    slice_construction(ConstructionSpec::Prop53 { m }, 2, m)
}

/// Tetrahedra of the signed cube block, in local coordinates.
const BLOCK: [[[i64; 3]; 4]; 6] = [
    [[0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2]],
    [[2, 0, 0], [2, 0, 2], [0, 0, 2], [2, 2, 2]],
    [[0, 2, 0], [0, 2, 2], [0, 0, 2], [2, 2, 2]],
    [[0, 0, 2], [2, 2, 0], [2, 0, 0], [0, 2, 0]],
    [[0, 0, 2], [2, 2, 0], [2, 0, 0], [2, 2, 2]],
    [[0, 0, 2], [2, 2, 0], [0, 2, 0], [2, 2, 2]],
];

const BLOCK_MINUS: [[i64; 3]; 3] = [[2, 0, 0], [0, 2, 0], [2, 2, 2]];

/// Convexity certificate for the block: heights of the corners of `{0,2}^3`
/// indexed by `x/2 + 2 y/2 + 4 z/2`.
const BLOCK_HEIGHTS: [i64; 8] = [3, 3, 0, 1, 0, 3, 0, 0];

fn block_sign(local: &[i64]) -> i8 {
    if BLOCK_MINUS.iter().any(|v| v[..] == *local) {
        -1
    } else {
        1
    }
}

fn block_height(local: &[i64]) -> i64 {
    BLOCK_HEIGHTS[(local[0] / 2 + local[1] + 2 * local[2]) as usize]
}

/// The signed six-tetrahedron triangulation of `[0,2]^3`, in `(P^1)^3`.
pub fn lemma56() -> Result<Construction> {
    prop57_inner(ConstructionSpec::Lemma56, [1, 1, 1])
}

/// Box `[0,2k_1] x [0,2k_2] x [0,2k_3]` tiled by mirrored copies of the
/// lemma56 block: block `b` is reflected in every axis where `b` is odd.
pub fn prop57(k1: i64, k2: i64, k3: i64) -> Result<Construction> {
    prop57_inner(ConstructionSpec::Prop57 { k: [k1, k2, k3] }, [k1, k2, k3])
}

fn prop57_inner(spec: ConstructionSpec, k: [i64; 3]) -> Result<Construction> {
    if k.iter().any(|&x| x < 1) {
        return Err(Error::InvalidParameter(format!("block counts {k:?} must be positive")));
    }
    // local coordinates of a global point in its (mirrored) block
    let fold = |x: &[i64]| -> Vec<i64> {
        (0..3)
            .map(|c| {
                let b = (x[c] / 2).min(k[c] - 1);
                let off = x[c] - 2 * b;
                if b % 2 == 0 {
                    off
                } else {
                    2 - off
                }
            })
            .collect()
    };
    let mut cells = Vec::new();
    for b0 in 0..k[0] {
        for b1 in 0..k[1] {
            for b2 in 0..k[2] {
                let b = [b0, b1, b2];
                for tet in BLOCK {
                    cells.push(
                        tet.iter()
                            .map(|u| {
                                LatticePoint((0..3).map(|c| if b[c] % 2 == 0 { 2 * b[c] + u[c] } else { 2 * b[c] + 2 - u[c] }).collect())
                            })
                            .collect(),
                    );
                }
            }
        }
    }
    let sides: Vec<i64> = k.iter().map(|x| 2 * x).collect();
    // a convex bend between blocks dominates the block heights
    let height = |p: &LatticePoint| {
        let local = fold(&p.0);
        let between: i128 = p.0.iter().map(|&x| ((x / 2) as i128).pow(2)).sum();
        int(block_height(&local) as i128 + 16 * between)
    };
    let sign = |p: &LatticePoint| block_sign(&fold(&p.0));
    assemble(spec, LatticePolytope::lattice_box(&sides), cells, height, sign, Ambient::P1power { sides })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!("prop51:2,4".parse::<ConstructionSpec>().unwrap(), ConstructionSpec::Prop51 { n: 2, m: 4 });
        assert_eq!("prop57:2".parse::<ConstructionSpec>().unwrap(), ConstructionSpec::Prop57 { k: [2, 2, 2] });
        assert_eq!("lemma56".parse::<ConstructionSpec>().unwrap(), ConstructionSpec::Lemma56);
        assert!("prop53:1,2".parse::<ConstructionSpec>().is_err());
        assert!("nope".parse::<ConstructionSpec>().is_err());
    }

    #[test]
    fn parity_is_enforced() {
        assert!(prop51(2, 3).is_err());
        assert!(prop53(5).is_err());
        assert!(thm54(3, 0).is_err());
        assert!(prop57(0, 1, 1).is_err());
    }

    #[test]
    fn prop51_shape() {
        let c = prop51(2, 4).unwrap();
        let t = &c.triangulation;
        assert!(t.validate().ok());
        assert!(t.is_t2());
        assert!(c.certified());
        assert_eq!(t.cells().len(), 4);
        assert!(t.halved().unwrap().is_primitive());
        let one = prop51(1, 2).unwrap();
        assert_eq!(one.triangulation.points(), &[LatticePoint(vec![0]), LatticePoint(vec![2])]);
        assert_eq!(one.signs.as_slice(), &[1, -1]);
    }

    #[test]
    fn lemma56_block() {
        let c = lemma56().unwrap();
        let t = &c.triangulation;
        let r = t.validate();
        assert!(r.ok(), "{:?}", r.violations);
        assert_eq!(r.total_volume, BigInt::from(48));
        assert_eq!(t.cells().len(), 6);
        assert!(c.certified());
        assert_eq!(c.signs.as_slice().iter().filter(|&&s| s < 0).count(), 3);
    }

    #[test]
    fn prop53_every_cell_has_one_minus() {
        for m in [2, 4] {
            let c = prop53(m).unwrap();
            let t = &c.triangulation;
            assert!(t.validate().ok());
            assert!(c.certified());
            assert!(t.halved().unwrap().is_primitive() && t.halved().unwrap().is_maximal());
            for cell in t.cells() {
                assert_eq!(cell.iter().filter(|&&v| c.signs.get(v) < 0).count(), 1);
            }
            for (i, p) in t.points().iter().enumerate() {
                if c.signs.get(i) < 0 {
                    assert!(t.polytope().contains_interior(p.coords()));
                }
            }
        }
    }

    #[test]
    fn prop57_tiles_blocks() {
        let c = prop57(2, 1, 2).unwrap();
        let t = &c.triangulation;
        assert!(t.validate().ok());
        assert_eq!(t.cells().len(), 24);
        assert!(c.certified());
        let x = crate::complex::euler_characteristic(t, &c.signs, &c.ambient).unwrap();
        assert_eq!(x, -18 * 4);
    }

    #[test]
    fn sharp_betti_numbers() {
        use crate::complex::build;
        let b = |c: &Construction| build(&c.triangulation, &c.signs, &c.ambient).unwrap().betti_z2().0;
        assert_eq!(b(&prop51(2, 6).unwrap()), vec![3, 3]);
        assert_eq!(b(&prop51(3, 4).unwrap()), vec![2, 0, 2]);
        assert_eq!(b(&lemma56().unwrap()), vec![1, 20, 1]);
        assert_eq!(b(&prop53(4).unwrap())[0], 16);
        assert_eq!(b(&thm54(3, 2).unwrap())[0], 8);
    }

    #[test]
    fn lemma56_mixed_census() {
        let c = lemma56().unwrap();
        let census = crate::complex::mixed_census(&c.triangulation, &c.signs);
        let total = |k: usize| census.iter().filter(|((d, _), _)| *d == k).map(|(_, v)| v.0).sum::<usize>();
        assert_eq!(total(3), 6);
        assert_eq!(total(2), 18);
        assert_eq!(total(1), 12);
        assert_eq!(census.get(&(2, 2)).map(|v| v.0), Some(12));
        assert_eq!(census.get(&(1, 2)).map(|v| v.0), Some(3));
        assert_eq!(census.get(&(1, 1)).map(|v| v.0), Some(9));
    }

    #[test]
    fn off_hyperplane_points_are_cell_centers() {
        for (n, half) in [(2, 3), (3, 2), (4, 2)] {
            let sl = slices(n, half);
            let d = n as i64 + 1;
            let mut pi = vec![LatticePoint::origin(n)];
            pi.extend((0..n).map(|j| LatticePoint((0..n).map(|i| if i == j { 2 * half } else { half }).collect())));
            let whole = LatticePolytope::new(pi).unwrap();
            let cells: Vec<LatticePolytope> = sl.cells.iter().map(|c| LatticePolytope::new(c.clone()).unwrap()).collect();
            let mut found = BTreeSet::new();
            for p in whole.lattice_points() {
                if p.0.iter().sum::<i64>() % d == 0 {
                    continue;
                }
                let inside: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].contains_interior(p.coords())).collect();
                assert_eq!(inside.len(), 1, "{p:?}");
                assert_eq!(sl.centers[inside[0]], p);
                assert!(found.insert(inside[0]));
            }
            assert_eq!(found.len(), cells.len());
        }
    }

    #[test]
    fn prop53_components_avoid_boundary() {
        for m in [2, 4, 6] {
            let c = prop53(m).unwrap();
            let cx = crate::complex::build(&c.triangulation, &c.signs, &c.ambient).unwrap();
            assert_eq!(cx.connected_components(), (m * m) as usize);
            assert_eq!(cx.components_touching_boundary(&c.triangulation), 0);
        }
    }
}
