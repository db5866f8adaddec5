use patchwork::arith::binomial;
use patchwork::complex::{build, dehn_sommerville_residuals, glued_face_counts, Ambient};
use patchwork::constructions::prop51;
use patchwork::lattice::{LatticePoint, LatticePolytope, LatticeSimplex};
use patchwork::signs::SignDistribution;
use patchwork::triangulation::{regular_from_heights, Triangulation};
use patchwork::verify::{random_instance, Profile};
use proptest::prelude::*;

/// Alcove triangulation of `m Delta^n`: primitive, all lattice points used.
fn alcove(n: usize, m: i64) -> Triangulation {
    prop51(n, 2 * m).unwrap().triangulation.halved().unwrap()
}

fn alternating_sum(poly: &LatticePolytope, k: usize) -> i128 {
    (1..=k)
        .map(|j| {
            let sign = if (j + k) % 2 == 0 { 1 } else { -1 };
            sign * binomial(k as i64 - 1, j as i64 - 1) * poly.interior_count(j as i64) as i128
        })
        .sum()
}

#[test]
fn primitive_triangulations_satisfy_the_alternating_identity() {
    for n in [2, 3] {
        for m in 1..=5 {
            let t = alcove(n, m);
            assert!(t.is_primitive() && t.is_maximal());
            let s = t.interior_face_counts().0;
            for k in 1..=n + 1 {
                assert_eq!(s[k - 1] as i128, alternating_sum(t.polytope(), k), "n={n} m={m} k={k}");
            }
        }
    }
}

#[test]
fn interior_vertex_count_of_planar_primitive_triangulations() {
    for m in 3..=5 {
        let t = alcove(2, m);
        assert_eq!(t.interior_face_counts().0[0] as i64, (m - 1) * (m - 2) / 2);
    }
    let t = alcove(2, 2);
    assert_eq!(t.interior_face_counts().0, vec![0, 3, 4]);
}

#[test]
fn glued_projective_triangulations_are_closed_manifolds() {
    for n in [2, 3] {
        for m in 1..=4 {
            let t = alcove(n, m);
            let f = glued_face_counts(&t, &Ambient::Projective { m }).unwrap();
            assert!(dehn_sommerville_residuals(&f).iter().all(|r| *r == 0), "n={n} m={m} f={f:?}");
            // the quotient is RP^n
            let chi: i64 = f.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            assert_eq!(chi, if n % 2 == 0 { 1 } else { 0 });
        }
    }
}

#[test]
fn affine_patchworks_of_even_inputs_are_reflection_invariant() {
    let inst = random_instance(11, 2, 4, Profile::Maximal).unwrap();
    let t = &inst.doubled;
    let c = build(t, &inst.signs, &Ambient::Affine).unwrap();
    for eps in 0..4u32 {
        for d in 0..2 {
            let mut moved: Vec<_> = c
                .cells(d)
                .iter()
                .map(|cell| {
                    let free = patchwork::triangulation::free_mask(&t.face_points(&cell.face));
                    (cell.face.clone(), (cell.copy ^ eps) & free)
                })
                .collect();
            let mut orig: Vec<_> = c.cells(d).iter().map(|cell| (cell.face.clone(), cell.copy)).collect();
            moved.sort();
            orig.sort();
            assert_eq!(moved, orig);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Interior points of dilated empty simplices: at least `C(k-1, i)`,
    /// with equality for primitive ones.
    #[test]
    fn empty_simplex_dilates(
        n in 2usize..=4,
        coords in proptest::collection::vec(0i64..=2, 20),
        take in 2usize..=5,
    ) {
        let i = (take - 1).min(n);
        let verts: Vec<LatticePoint> = (0..=i).map(|v| LatticePoint(coords[v * 4..v * 4 + n].to_vec())).collect();
        let Ok(sigma) = LatticeSimplex::new(verts) else { return Ok(()) };
        prop_assume!(sigma.dim() == i && sigma.is_empty());
        let primitive = i == n && sigma.normalized_volume().is_ok_and(|v| v == num_bigint::BigInt::from(1));
        for k in 1..=(i as i64 + 2).min(6) {
            let got = sigma.interior_count(k) as i128;
            let want = binomial(k - 1, i as i64);
            prop_assert!(got >= want, "k={} got {} want {}", k, got, want);
            if primitive {
                prop_assert_eq!(got, want);
            }
        }
    }

    /// Certificates do not care about added affine functions.
    #[test]
    fn convexity_is_affine_invariant(seed in 0u64..1000, a in -50i64..50, b in -50i64..50, c in -1000i64..1000) {
        let pts: Vec<LatticePoint> = LatticePolytope::standard_simplex(2, 3).lattice_points();
        let mut state = seed;
        let heights: Vec<i64> = pts.iter().map(|_| { state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (state >> 40) as i64 }).collect();
        if let Some(t) = regular_from_heights(&pts, &heights).unwrap() {
            let h: Vec<i64> = t.points().iter().map(|p| heights[pts.iter().position(|q| q == p).unwrap()]).collect();
            let h = patchwork::triangulation::HeightFunction::from_ints(&h);
            prop_assert!(t.certify_convexity(&h).unwrap());
            let shifted = h.add_affine(t.points(), &[a, b], c);
            prop_assert!(t.certify_convexity(&shifted).unwrap());
        }
    }
}

#[test]
fn global_sign_change_keeps_topology() {
    let c = prop51(2, 4).unwrap();
    let t = &c.triangulation;
    let flipped = SignDistribution::new(c.signs.as_slice().iter().map(|s| -s).collect()).unwrap();
    let a = build(t, &c.signs, &c.ambient).unwrap().betti_z2();
    let b = build(t, &flipped, &c.ambient).unwrap().betti_z2();
    // a global sign change does not move the zero set
    assert_eq!(a, b);
}
