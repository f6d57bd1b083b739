use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use torifan_core::arrows::{critical_arrows, verify_certificate};
use torifan_core::linalg::{rat, Rat};
use torifan_core::*;

fn lv(v: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(v)
}

fn rv(v: &[(i64, i64)]) -> RationalVector {
    RationalVector::new(v.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn skew() -> Cone {
    Cone::from_rays_i64(Side::N, &[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]).unwrap()
}

fn unit_square() -> Cone {
    Cone::from_rays_i64(Side::N, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap()
}

#[test]
fn skew_cone_end_to_end() {
    let s = skew();
    let a = dual_cone(&s).unwrap();
    assert_eq!(a.rays(), &[lv(&[0, 0, 1]), lv(&[0, 2, -1]), lv(&[4, 0, -1])]);

    let w = lv(&[1, 2, 2]);
    let l = level_polyhedron(&a, &w, &rat(1, 1)).unwrap();
    assert_eq!(
        l.vertices,
        vec![rv(&[(0, 1), (0, 1), (1, 2)]), rv(&[(0, 1), (1, 1), (-1, 2)]), rv(&[(2, 1), (0, 1), (-1, 2)])]
    );
    assert!(interior_lattice_point(&a, &w).unwrap().is_none());

    let theta = theta_and_diameter(&a).unwrap();
    let search = critical_arrows(&s, &w, &theta.diameter_sq).unwrap();
    let vectors: Vec<RationalVector> = search.certificates.iter().map(|c| c.arrow.vector.clone()).collect();
    let edge_vectors = [rv(&[(2, 1), (0, 1), (-1, 1)]), rv(&[(0, 1), (1, 1), (-1, 1)]), rv(&[(2, 1), (-1, 1), (0, 1)])];
    let hits = edge_vectors
        .iter()
        .filter(|e| vectors.contains(e) || vectors.contains(&e.scale(&rat(-1, 1))))
        .count();
    assert!(hits >= 2);
    assert_eq!(search.dim_bound, 1);
    for c in &search.certificates {
        verify_certificate(&s, c, Some(&theta.diameter_sq)).unwrap();
    }

    let delta = delta_fan(&s).unwrap();
    assert!(delta.fan.has_ray(&w));
    let rec = classify_divisors(&s, &[w]).unwrap();
    assert!(!rec[0].bgs_essential);
    assert!(!rec[0].sufficient_condition);
}

#[test]
fn critical_tails_stay_outside_xi() {
    for (s, w) in [
        (Cone::from_rays_i64(Side::N, &[&[1, 0], &[1, 2]]).unwrap(), lv(&[1, 1])),
        (skew(), lv(&[1, 2, 2])),
    ] {
        let a = dual_cone(&s).unwrap();
        let theta = theta_and_diameter(&a).unwrap();
        let search = critical_arrows(&s, &w, &theta.diameter_sq).unwrap();
        assert!(!search.certificates.is_empty());
        for c in &search.certificates {
            let tail = &c.arrow.tail;
            let l = tail
                .coords()
                .iter()
                .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            let l = u32::try_from(l).unwrap();
            let lo: Vec<Rat> = tail.coords().to_vec();
            let grid = xi_grid_oracle(&theta, &c.tie_breaker.chamber_witness, l, &lo, &lo).unwrap();
            assert!(!grid.contains(tail), "tail {tail} is in Xi");
        }
    }
}

#[test]
fn unit_square_cone() {
    let s = unit_square();
    let hb = hilbert_basis(&s).unwrap();
    assert_eq!(hb.elements(), s.rays());
    let m = minimal_s_sigma(&s, None).unwrap();
    assert!(m.certified);
    assert!(m.contains(&lv(&[1, 1, 2])));
    let rec = classify_divisors(&s, &[lv(&[1, 1, 2])]).unwrap();
    assert_eq!(rec[0].essential, Some(true));
    assert!(!rec[0].bgs_essential);
}

#[test]
fn unit_square_triangulations_are_crepant() {
    let s = unit_square();
    let hb = hilbert_basis(&s).unwrap();
    for diag in [[lv(&[0, 0, 1]), lv(&[1, 1, 1])], [lv(&[1, 0, 1]), lv(&[0, 1, 1])]] {
        let cones: Vec<Cone> = s
            .rays()
            .iter()
            .filter(|r| !diag.contains(r))
            .map(|r| Cone::from_generators(Side::N, 3, &[diag[0].clone(), diag[1].clone(), r.clone()]).unwrap())
            .collect();
        let f = Fan::new(Side::N, 3, cones).unwrap();
        assert!(validate_subdivision(&f, &s));
        assert!(is_crepant(&f, &s).unwrap());
        assert!(is_moderate(&f, &s).unwrap());
        for r in f.rays() {
            assert!(hb.contains(&r));
        }
    }
}

#[test]
fn a1_minimal_resolution_is_moderate() {
    let s = Cone::from_rays_i64(Side::N, &[&[1, 0], &[1, 2]]).unwrap();
    let hb = hilbert_basis(&s).unwrap();
    let f = delta_fan(&s).unwrap().fan;
    assert!(is_moderate(&f, &s).unwrap());
    assert!(convex_moderate_check(&f, &s, hb.elements()).unwrap());
    assert!(psi_functional(&f.maximal_cones()[0]).unwrap().vector.coords().iter().any(|x| !x.is_zero()));
}
