//! Level slices `Λ_(=c) = A_ℝ ∩ {w = c}` of the dual cone, their projections
//! to `M̄`, and the interior lattice point test.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::{self, Cone};
use crate::error::{Error, Result};
use crate::lattice::{primitive_of, LatticeVector, QuotientLattice, RationalVector, Side};
use crate::linalg::{Int, Rat};
use crate::lp::Constraint;
use crate::polyhedron;

#[derive(Clone, Debug)]
pub struct LevelPolyhedron {
    pub ambient_dual: Cone,
    pub weight: LatticeVector,
    pub level: Rat,
    pub vertices: Vec<RationalVector>,
    pub recession_generators: Vec<LatticeVector>,
    pub bounded: bool,
}

impl LevelPolyhedron {
    /// Membership in `Λ_(=c)`.
    pub fn contains(&self, x: &RationalVector) -> bool {
        self.weight.dot_rat(x) == self.level && self.ambient_dual.contains(x)
    }

    pub fn dim(&self) -> usize {
        self.ambient_dual.dim()
    }
}

fn check_weight(a: &Cone, w: &LatticeVector) -> Result<()> {
    if w.dim() != a.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim(),
            found: w.dim(),
        });
    }
    if w.is_zero() || a.rays().iter().any(|r| r.dot(w).is_negative()) {
        return Err(Error::NotInCone);
    }
    Ok(())
}

/// `A_ℝ ∩ {w = c}`: the rays of `A` meeting the hyperplane give the vertices,
/// those in `w⊥` the recession cone.
pub fn level_polyhedron(a: &Cone, w: &LatticeVector, c: &Rat) -> Result<LevelPolyhedron> {
    check_weight(a, w)?;
    if !c.is_positive() {
        return Err(Error::NonPositiveLevel);
    }
    let mut vertices = Vec::new();
    let mut recession = Vec::new();
    for r in a.rays() {
        let h = r.dot(w);
        if h.is_zero() {
            recession.push(r.clone());
        } else {
            vertices.push(r.to_rational().scale(&(c / Rat::from_integer(h))));
        }
    }
    vertices.sort();
    Ok(LevelPolyhedron {
        ambient_dual: a.clone(),
        weight: w.clone(),
        level: c.clone(),
        vertices,
        bounded: recession.is_empty(),
        recession_generators: recession,
    })
}

pub fn scale_level(l: &LevelPolyhedron, c2: &Rat) -> Result<LevelPolyhedron> {
    if !c2.is_positive() {
        return Err(Error::NonPositiveLevel);
    }
    let f = c2 / &l.level;
    let mut out = l.clone();
    out.level = c2.clone();
    out.vertices = l.vertices.iter().map(|v| v.scale(&f)).collect();
    Ok(out)
}

/// The image of a level slice in `M̄_ℝ`.
#[derive(Clone, Debug)]
pub struct ProjectedSlice {
    pub quotient: QuotientLattice,
    pub polytope_vertices: Vec<RationalVector>,
    /// For each projected vertex, a vertex of the slice mapping onto it.
    pub vertex_lifts: Vec<(RationalVector, RationalVector)>,
}

impl ProjectedSlice {
    pub fn lift_of(&self, v: &RationalVector) -> Option<&RationalVector> {
        self.vertex_lifts.iter().find(|(p, _)| p == v).map(|(_, l)| l)
    }

    pub fn diameter_sq(&self) -> Rat {
        diameter_sq(&self.polytope_vertices)
    }
}

pub(crate) fn diameter_sq(pts: &[RationalVector]) -> Rat {
    let mut best = Rat::zero();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = a.sub(b).norm_sq();
            if d > best {
                best = d;
            }
        }
    }
    best
}

/// Extreme points of a finite point set, via the homogenized cone.
pub(crate) fn hull_vertices(pts: &[RationalVector]) -> Vec<RationalVector> {
    let mut uniq: Vec<RationalVector> = pts.to_vec();
    uniq.sort();
    uniq.dedup();
    if uniq.len() <= 1 {
        return uniq;
    }
    let n = uniq[0].dim();
    let gens: Vec<LatticeVector> = uniq
        .iter()
        .map(|p| {
            let l = p.coords().iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
            let lr = Rat::from_integer(l.clone());
            let mut v: Vec<Int> = p.coords().iter().map(|x| (x * &lr).to_integer()).collect();
            v.push(l);
            LatticeVector::new(v)
        })
        .collect();
    let hom = Cone::from_generators(Side::M, n + 1, &gens).expect("pointed homogenization");
    let mut out: Vec<RationalVector> = hom
        .rays()
        .iter()
        .map(|r| {
            let t = Rat::from_integer(r[n].clone());
            RationalVector::new(r.coords()[..n].iter().map(|x| Rat::from_integer(x.clone()) / &t).collect())
        })
        .collect();
    out.sort();
    out
}

pub fn project_slice(l: &LevelPolyhedron, mu: &Cone) -> Result<ProjectedSlice> {
    let sigma = cone::dual_cone(&l.ambient_dual)?;
    let expected = cone::minimal_face_containing(&sigma, &l.weight.to_rational())?;
    if &expected != mu {
        return Err(Error::NotAFace);
    }
    let q = QuotientLattice::new(l.ambient_dual.ambient_dim(), mu.rays())?;
    let projected: Vec<RationalVector> = l.vertices.iter().map(|v| q.project_rat(v)).collect();
    let polytope_vertices = hull_vertices(&projected);
    let vertex_lifts = polytope_vertices
        .iter()
        .map(|p| {
            // vertices are sorted, so this is the lexicographically least lift
            let lift = l
                .vertices
                .iter()
                .zip(&projected)
                .find(|(_, pv)| *pv == p)
                .map(|(v, _)| v.clone())
                .expect("every hull vertex is the image of a vertex");
            (p.clone(), lift)
        })
        .collect();
    Ok(ProjectedSlice {
        quotient: q,
        polytope_vertices,
        vertex_lifts,
    })
}

/// The constraint system `(a, w) = 1`, `(a, v) ≥ 1` for the rays `v` of `σ`.
pub(crate) fn interior_constraints(a: &Cone, w: &LatticeVector) -> Vec<Constraint> {
    let mut cons = vec![Constraint::eq(polyhedron::ratvec(w), Rat::one())];
    // the facets of A are the rays of σ
    for v in a.facets() {
        cons.push(Constraint::ge(polyhedron::ratvec(v), Rat::one()));
    }
    cons
}

/// A point of `(A_ℝ)° ∩ M` with `(a, w) = 1`, the lexicographically least
/// one in the search box.
pub fn interior_lattice_point(a: &Cone, w: &LatticeVector) -> Result<Option<LatticeVector>> {
    check_weight(a, w)?;
    if primitive_of(w)? != *w {
        return Err(Error::NotPrimitive);
    }
    polyhedron::integer_point(a.ambient_dim(), &interior_constraints(a, w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayTest {
    /// True certifies that the ray through `w` is in the fan; false is inconclusive.
    pub holds: bool,
    pub witness: Option<LatticeVector>,
}

pub fn ray_sufficient_test(sigma: &Cone, w: &LatticeVector) -> Result<RayTest> {
    let a = cone::dual_cone(sigma)?;
    ray_sufficient_test_with_dual(sigma, &a, w)
}

pub(crate) fn ray_sufficient_test_with_dual(sigma: &Cone, a: &Cone, w: &LatticeVector) -> Result<RayTest> {
    if w.dim() != sigma.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.ambient_dim(),
            found: w.dim(),
        });
    }
    if !sigma.contains_lattice(w) || w.is_zero() {
        return Err(Error::NotInCone);
    }
    let witness = interior_lattice_point(a, w)?;
    Ok(RayTest {
        holds: witness.is_some(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::box_points;
    use crate::linalg::{rat, solve_rat, to_rat};
    use proptest::prelude::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    fn rv(v: &[(i64, i64)]) -> RationalVector {
        RationalVector::new(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn paper_sigma() -> Cone {
        Cone::from_rays_i64(Side::N, &[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]).unwrap()
    }

    fn a1() -> Cone {
        Cone::from_rays_i64(Side::N, &[&[1, 0], &[1, 2]]).unwrap()
    }

    #[test]
    fn level_examples() {
        let a = cone::dual_cone(&paper_sigma()).unwrap();
        let l = level_polyhedron(&a, &lv(&[1, 2, 2]), &rat(1, 1)).unwrap();
        let mut expect = vec![rv(&[(0, 1), (0, 1), (1, 2)]), rv(&[(2, 1), (0, 1), (-1, 2)]), rv(&[(0, 1), (1, 1), (-1, 2)])];
        expect.sort();
        assert_eq!(l.vertices, expect);
        assert!(l.bounded);

        let oct = Cone::orthant(Side::M, 3);
        let l = level_polyhedron(&oct, &lv(&[1, 1, 1]), &rat(1, 1)).unwrap();
        assert_eq!(l.vertices.len(), 3);
        assert!(l.vertices.contains(&rv(&[(1, 1), (0, 1), (0, 1)])));

        let a = cone::dual_cone(&a1()).unwrap();
        let l = level_polyhedron(&a, &lv(&[1, 1]), &rat(1, 1)).unwrap();
        assert_eq!(l.vertices, vec![rv(&[(0, 1), (1, 1)]), rv(&[(2, 1), (-1, 1)])]);

        assert!(matches!(level_polyhedron(&a, &lv(&[1, 1]), &rat(0, 1)), Err(Error::NonPositiveLevel)));
        assert!(matches!(level_polyhedron(&a, &lv(&[-1, 1]), &rat(1, 1)), Err(Error::NotInCone)));
    }

    #[test]
    fn scaling_examples() {
        let a = cone::dual_cone(&paper_sigma()).unwrap();
        let l = level_polyhedron(&a, &lv(&[1, 2, 2]), &rat(1, 1)).unwrap();
        assert_eq!(scale_level(&l, &rat(1, 1)).unwrap().vertices, l.vertices);
        let mut expect = vec![rv(&[(0, 1), (0, 1), (1, 1)]), rv(&[(4, 1), (0, 1), (-1, 1)]), rv(&[(0, 1), (2, 1), (-1, 1)])];
        expect.sort();
        assert_eq!(scale_level(&l, &rat(2, 1)).unwrap().vertices, expect);

        let a = cone::dual_cone(&a1()).unwrap();
        let l = level_polyhedron(&a, &lv(&[1, 1]), &rat(1, 1)).unwrap();
        let h = scale_level(&l, &rat(1, 2)).unwrap();
        assert_eq!(h.vertices, vec![rv(&[(0, 1), (1, 2)]), rv(&[(1, 1), (-1, 2)])]);
        assert!(scale_level(&l, &rat(-1, 1)).is_err());
    }

    #[test]
    fn projection_examples() {
        let sigma = Cone::orthant(Side::N, 2);
        let a = cone::dual_cone(&sigma).unwrap();
        let w = lv(&[1, 0]);
        let l = level_polyhedron(&a, &w, &rat(1, 1)).unwrap();
        assert_eq!(l.recession_generators, vec![lv(&[0, 1])]);
        let mu = cone::minimal_face_containing(&sigma, &w.to_rational()).unwrap();
        let p = project_slice(&l, &mu).unwrap();
        assert_eq!(p.quotient.rank(), 1);
        assert_eq!(p.polytope_vertices.len(), 1);
        assert_eq!(p.polytope_vertices[0].coords()[0].abs(), rat(1, 1));
        assert_eq!(p.vertex_lifts[0].1, rv(&[(1, 1), (0, 1)]));

        let sigma = Cone::orthant(Side::N, 3);
        let a = cone::dual_cone(&sigma).unwrap();
        let w = lv(&[1, 1, 0]);
        let l = level_polyhedron(&a, &w, &rat(1, 1)).unwrap();
        assert!(!l.bounded);
        let mu = cone::minimal_face_containing(&sigma, &w.to_rational()).unwrap();
        let p = project_slice(&l, &mu).unwrap();
        assert_eq!(p.quotient.rank(), 2);
        assert_eq!(p.polytope_vertices.len(), 2);
        for (pv, lift) in &p.vertex_lifts {
            assert!(l.vertices.contains(lift));
            assert_eq!(&p.quotient.project_rat(lift), pv);
        }

        // interior weight: identity
        let w = lv(&[1, 1, 1]);
        let l = level_polyhedron(&a, &w, &rat(1, 1)).unwrap();
        let p = project_slice(&l, &sigma).unwrap();
        assert_eq!(p.polytope_vertices, l.vertices);
        assert!(project_slice(&l, &mu).is_err());
    }

    #[test]
    fn interior_point_examples() {
        let sigma = paper_sigma();
        let a = cone::dual_cone(&sigma).unwrap();
        assert_eq!(interior_lattice_point(&a, &lv(&[1, 2, 2])).unwrap(), None);
        let t = ray_sufficient_test(&sigma, &lv(&[1, 2, 2])).unwrap();
        assert!(!t.holds);

        let a = cone::dual_cone(&a1()).unwrap();
        assert_eq!(interior_lattice_point(&a, &lv(&[1, 1])).unwrap(), Some(lv(&[1, 0])));
        assert!(ray_sufficient_test(&a1(), &lv(&[1, 1])).unwrap().holds);

        let oct = Cone::orthant(Side::N, 3);
        let a = cone::dual_cone(&oct).unwrap();
        assert_eq!(interior_lattice_point(&a, &lv(&[1, 1, 1])).unwrap(), None);
        let t = ray_sufficient_test(&oct, &lv(&[1, 0, 0])).unwrap();
        assert!(t.holds);
        let x = t.witness.unwrap();
        assert_eq!(x.dot(&lv(&[1, 0, 0])), Int::one());
        assert!(a.contains_relative_interior(&x.to_rational()));

        assert!(matches!(interior_lattice_point(&a, &lv(&[2, 2, 2])), Err(Error::NotPrimitive)));
        assert!(matches!(ray_sufficient_test(&oct, &lv(&[-1, 0, 0])), Err(Error::NotInCone)));
    }

    /// Vertices of `{facets ≥ 0, w = c}` as basic feasible solutions.
    fn basic_solutions(a: &Cone, w: &LatticeVector, c: &Rat) -> Vec<RationalVector> {
        let d = a.ambient_dim();
        let mut out = Vec::new();
        for idx in cone::combinations(a.facets().len(), d - 1) {
            let mut rows: Vec<Vec<Rat>> = idx.iter().map(|&i| to_rat(a.facets()[i].coords())).collect();
            rows.push(to_rat(w.coords()));
            let mut rhs = vec![Rat::zero(); d - 1];
            rhs.push(c.clone());
            if crate::linalg::rank_rat(&rows) < d {
                continue;
            }
            let x = RationalVector::new(solve_rat(&rows, &rhs, d).unwrap());
            if a.contains(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    fn arb_sigma(d: usize) -> impl Strategy<Value = Cone> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, d), d..d + 2).prop_filter_map(
            "full-dimensional",
            move |gens| {
                let gens: Vec<LatticeVector> = gens.iter().map(|g| lv(g)).collect();
                Cone::from_generators(Side::N, d, &gens)
                    .ok()
                    .filter(|c| c.is_full_dimensional())
            },
        )
    }

    fn arb_case() -> impl Strategy<Value = (Cone, LatticeVector)> {
        (2usize..=3)
            .prop_flat_map(arb_sigma)
            .prop_flat_map(|s| {
                let n = s.rays().len();
                (Just(s), proptest::collection::vec(0i64..=2, n))
            })
            .prop_filter_map("nonzero weight", |(s, coeffs)| {
                let mut w = LatticeVector::zero(s.ambient_dim());
                for (r, k) in s.rays().iter().zip(&coeffs) {
                    w = w.add(&r.scale(&Int::from(*k)));
                }
                if w.is_zero() {
                    return None;
                }
                let w = primitive_of(&w).ok()?;
                Some((s, w))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn level_structure((sigma, w) in arb_case(), num in 1i64..5, den in 1i64..4) {
            let a = cone::dual_cone(&sigma).unwrap();
            let c = rat(num, den);
            let l = level_polyhedron(&a, &w, &c).unwrap();
            for v in &l.vertices {
                prop_assert!(l.contains(v));
            }
            prop_assert_eq!(&l.vertices, &basic_solutions(&a, &w, &c));
            let mu = cone::minimal_face_containing(&sigma, &w.to_rational()).unwrap();
            let rec = cone::dual_face(&sigma, &mu).unwrap();
            prop_assert_eq!(l.recession_generators.as_slice(), rec.rays());
            prop_assert_eq!(l.bounded, mu == sigma);

            // same set as the H-description, recovered by an independent conversion
            let mut cons: Vec<Constraint> = a.facets().iter().map(|f| Constraint::ge(to_rat(f.coords()), Rat::zero())).collect();
            cons.push(Constraint::eq(to_rat(w.coords()), c.clone()));
            let p = polyhedron::Polyhedron::from_constraints(a.ambient_dim(), &cons).unwrap();
            prop_assert_eq!(&p.vertices, &l.vertices);
            prop_assert_eq!(&p.rays, &l.recession_generators);

            let s = project_slice(&l, &mu).unwrap();
            prop_assert!(!s.polytope_vertices.is_empty());
            for (pv, lift) in &s.vertex_lifts {
                prop_assert!(l.vertices.contains(lift));
                prop_assert_eq!(&s.quotient.project_rat(lift), pv);
            }
            for r in &l.recession_generators {
                prop_assert!(s.quotient.project(r).is_zero());
            }

            let half = scale_level(&l, &(&c / rat(2, 1))).unwrap();
            prop_assert_eq!(&half.vertices, &level_polyhedron(&a, &w, &(&c / rat(2, 1))).unwrap().vertices);
        }

        #[test]
        fn interior_point_matches_brute_force((sigma, w) in arb_case()) {
            let a = cone::dual_cone(&sigma).unwrap();
            let got = interior_lattice_point(&a, &w).unwrap();
            let d = a.ambient_dim();
            let lo = vec![Int::from(-12); d];
            let hi = vec![Int::from(12); d];
            let brute = box_points(&lo, &hi)
                .into_iter()
                .map(LatticeVector::new)
                .find(|x| x.dot(&w) == Int::one() && a.facets().iter().all(|v| v.dot(x) >= Int::one()));
            if let Some(x) = &got {
                prop_assert_eq!(x.dot(&w), Int::one());
                prop_assert!(a.contains_relative_interior(&x.to_rational()));
            }
            if brute.is_some() {
                prop_assert!(got.is_some());
            }
            if got.is_none() {
                prop_assert!(brute.is_none());
            }
        }
    }
}
