//! Hilbert bases of `B = σ ∩ N` and `A = σ∨ ∩ M`, the cone order, the
//! minimal elements of `S_σ` and the divisor classification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Zero};

use crate::cone::{self, Cone};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::linalg::{self, Int, Rat};

/// Lattice points `Σ λᵢ gᵢ`, `0 ≤ λᵢ < 1`, of the span lattice of the
/// linearly independent vectors `gens`.
pub fn parallelepiped_points(gens: &[LatticeVector], ambient: usize) -> Vec<LatticeVector> {
    let k = gens.len();
    if k == 0 {
        return vec![LatticeVector::zero(ambient)];
    }
    let rows: Vec<Vec<Int>> = gens.iter().map(|g| g.coords().to_vec()).collect();
    let basis = linalg::saturated_span(&rows, ambient);
    let bt: Vec<Vec<Rat>> = linalg::transpose(&basis, ambient)
        .iter()
        .map(|r| linalg::to_rat(r))
        .collect();
    // coordinates of each generator in the span basis, as rows of G
    let g: Vec<Vec<Int>> = gens
        .iter()
        .map(|x| {
            linalg::solve_rat(&bt, &linalg::to_rat(x.coords()), k)
                .expect("generator in span")
                .iter()
                .map(|c| c.to_integer())
                .collect()
        })
        .collect();
    // λ = y G⁻¹: solve Gᵀ λ = y
    let gt: Vec<Vec<Rat>> = linalg::transpose(&g, k).iter().map(|r| linalg::to_rat(r)).collect();
    let reduce = |y: Vec<Int>| -> Vec<Int> {
        let lambda = linalg::solve_rat(&gt, &linalg::to_rat(&y), k).expect("basis");
        let mut y = y;
        for (l, gi) in lambda.iter().zip(&g) {
            let f = l.floor().to_integer();
            if !f.is_zero() {
                for (a, b) in y.iter_mut().zip(gi) {
                    *a -= &f * b;
                }
            }
        }
        y
    };
    let start = vec![Int::zero(); k];
    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(y) = queue.pop_front() {
        for j in 0..k {
            let mut z = y.clone();
            z[j] += Int::one();
            let z = reduce(z);
            if seen.insert(z.clone()) {
                queue.push_back(z);
            }
        }
    }
    seen.into_iter()
        .map(|y| LatticeVector::new(linalg::combine_int(&basis, &y, ambient)))
        .collect()
}

/// The unique minimal generating set of the monoid of lattice points of a cone.
#[derive(Clone, Debug)]
pub struct HilbertBasis {
    cone: Cone,
    elements: Vec<LatticeVector>,
}

impl HilbertBasis {
    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn elements(&self) -> &[LatticeVector] {
        &self.elements
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.elements.binary_search(v).is_ok()
    }
}

pub fn hilbert_basis(c: &Cone) -> Result<HilbertBasis> {
    let d = c.ambient_dim();
    let mut cands: BTreeSet<LatticeVector> = c.rays().iter().cloned().collect();
    for simplex in c.triangulate() {
        cands.extend(parallelepiped_points(&simplex, d).into_iter().filter(|p| !p.is_zero()));
    }
    let ell = height_functional(c);
    let mut by_height: Vec<(Int, LatticeVector)> = cands.into_iter().map(|p| (ell.dot(&p), p)).collect();
    by_height.sort();
    let mut elements: Vec<LatticeVector> = Vec::new();
    for (i, (h, p)) in by_height.iter().enumerate() {
        let reducible = by_height[..i]
            .iter()
            .take_while(|(hq, _)| hq < h)
            .any(|(_, q)| c.contains_lattice(&p.sub(q)));
        if !reducible {
            elements.push(p.clone());
        }
    }
    elements.sort();
    Ok(HilbertBasis {
        cone: c.clone(),
        elements,
    })
}

/// A lattice functional strictly positive on `c ∖ {0}`.
pub(crate) fn height_functional(c: &Cone) -> LatticeVector {
    c.facet_sum()
}

/// `w ≤ w2` in the order defined by `c`.
pub fn cone_leq(c: &Cone, w: &LatticeVector, w2: &LatticeVector) -> bool {
    c.contains_lattice(&w2.sub(w))
}

/// The minimal elements of `S_σ` with heights up to a bound.
#[derive(Clone, Debug)]
pub struct SSigmaMinimal {
    pub elements: Vec<LatticeVector>,
    /// True when no minimal element can lie above `bound`.
    pub certified: bool,
    pub functional: LatticeVector,
    pub bound: Int,
}

impl SSigmaMinimal {
    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.elements.contains(v)
    }
}

/// Membership in `S_σ`: the minimal face containing `p` is singular.
pub fn in_s_sigma(sigma: &Cone, p: &LatticeVector) -> bool {
    if p.is_zero() || !sigma.contains_lattice(p) {
        return false;
    }
    let tight = sigma.tight_facets(&p.to_rational());
    !sigma.face_of_facets(&tight).is_smooth()
}

/// Minimal elements of `S_σ` with `ℓ(p) ≤ L`, `ℓ` the sum of the facet normals.
///
/// A minimal element `p` in the relative interior of a face `τ` has all
/// coefficients at most one with respect to any simplex of a triangulation of
/// `τ` containing it (otherwise `p - gᵢ` is a smaller element of `τ°`), so the
/// closed fundamental parallelepipeds of the singular faces hold every
/// candidate; `certified` records whether the height bound cut any of them.
pub fn minimal_s_sigma(sigma: &Cone, height_bound: Option<Int>) -> Result<SSigmaMinimal> {
    if !sigma.is_full_dimensional() {
        return Err(Error::Degenerate);
    }
    let d = sigma.ambient_dim();
    let ell = height_functional(sigma);
    let bound = height_bound.unwrap_or_else(|| Int::from(2) * ell.dot(&sigma.interior_point()));
    let mut cands: BTreeSet<LatticeVector> = BTreeSet::new();
    for tau in sigma.faces() {
        if tau.is_smooth() {
            continue;
        }
        for simplex in tau.triangulate() {
            for p in parallelepiped_points(&simplex, d) {
                let lambda = simplex_coords(&simplex, &p);
                let free: Vec<usize> = (0..simplex.len()).filter(|&i| lambda[i].is_zero()).collect();
                for mask in 0u64..(1u64 << free.len()) {
                    let mut q = p.clone();
                    for (b, &i) in free.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            q = q.add(&simplex[i]);
                        }
                    }
                    if !q.is_zero() {
                        cands.insert(q);
                    }
                }
            }
        }
    }
    let mut face_cache: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    let mut members: Vec<(Int, LatticeVector)> = Vec::new();
    let mut certified = true;
    for p in cands {
        let tight = sigma.tight_facets(&p.to_rational());
        let singular = *face_cache
            .entry(tight.clone())
            .or_insert_with(|| !sigma.face_of_facets(&tight).is_smooth());
        if !singular {
            continue;
        }
        let h = ell.dot(&p);
        if h > bound {
            certified = false;
            continue;
        }
        members.push((h, p));
    }
    members.sort();
    let mut elements: Vec<LatticeVector> = Vec::new();
    for (_, p) in &members {
        if !elements.iter().any(|m| cone_leq(sigma, m, p)) {
            elements.push(p.clone());
        }
    }
    elements.sort();
    Ok(SSigmaMinimal {
        elements,
        certified,
        functional: ell,
        bound,
    })
}

fn simplex_coords(simplex: &[LatticeVector], p: &LatticeVector) -> Vec<Rat> {
    let d = p.dim();
    let cols: Vec<Vec<Rat>> = linalg::transpose(
        &simplex.iter().map(|g| linalg::to_rat(g.coords())).collect::<Vec<_>>(),
        d,
    );
    linalg::solve_rat(&cols, &linalg::to_rat(p.coords()), simplex.len()).expect("point in span")
}

/// Per-ray classification of a toric divisor over the variety of `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorRecord {
    pub ray_primitive: LatticeVector,
    pub is_ray_of_sigma: bool,
    pub in_hilbert_basis_b: bool,
    pub bgs_essential: bool,
    /// `None` when the minimal-element search was not certified.
    pub essential: Option<bool>,
    pub sufficient_condition: bool,
    pub arrow_dim_bound: Option<usize>,
    pub in_delta: Option<bool>,
}

pub fn classify_divisors(sigma: &Cone, rays: &[LatticeVector]) -> Result<Vec<DivisorRecord>> {
    classify_divisors_bounded(sigma, rays, None)
}

/// As [`classify_divisors`], with the height bound passed to [`minimal_s_sigma`].
pub fn classify_divisors_bounded(sigma: &Cone, rays: &[LatticeVector], height_bound: Option<Int>) -> Result<Vec<DivisorRecord>> {
    let hb = hilbert_basis(sigma)?;
    let ss = minimal_s_sigma(sigma, height_bound)?;
    let a = cone::dual_cone(sigma)?;
    rays.iter()
        .map(|r| {
            if r.dim() != sigma.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: sigma.ambient_dim(),
                    found: r.dim(),
                });
            }
            if !sigma.contains_lattice(r) {
                return Err(Error::NotInCone);
            }
            if crate::lattice::primitive_of(r)? != *r {
                return Err(Error::NotPrimitive);
            }
            let in_hb = hb.contains(r);
            let essential = if ss.contains(r) {
                Some(true)
            } else if ss.certified {
                Some(false)
            } else {
                None
            };
            let test = crate::level::ray_sufficient_test_with_dual(sigma, &a, r)?;
            Ok(DivisorRecord {
                ray_primitive: r.clone(),
                is_ray_of_sigma: sigma.rays().contains(r),
                in_hilbert_basis_b: in_hb,
                bgs_essential: in_hb,
                essential,
                sufficient_condition: test.holds,
                arrow_dim_bound: None,
                in_delta: None,
            })
        })
        .collect()
}

/// All lattice points of `c` with `ell ≤ bound`, by box enumeration; used as
/// a reference in tests and small searches.
pub fn lattice_points_below(c: &Cone, ell: &LatticeVector, bound: &Int) -> Vec<LatticeVector> {
    let d = c.ambient_dim();
    let b = Rat::from_integer(bound.clone());
    let mut lo = vec![Rat::zero(); d];
    let mut hi = vec![Rat::zero(); d];
    for r in c.rays() {
        let t = &b / Rat::from_integer(ell.dot(r));
        for k in 0..d {
            let x = Rat::from_integer(r[k].clone()) * &t;
            if x < lo[k] {
                lo[k] = x.clone();
            }
            if x > hi[k] {
                hi[k] = x;
            }
        }
    }
    let lo: Vec<Int> = lo.iter().map(|x| x.floor().to_integer()).collect();
    let hi: Vec<Int> = hi.iter().map(|x| x.ceil().to_integer()).collect();
    crate::lattice::box_points(&lo, &hi)
        .into_iter()
        .map(LatticeVector::new)
        .filter(|p| c.contains_lattice(p) && &ell.dot(p) <= bound)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Side;
    use proptest::prelude::*;

    fn cone(rays: &[&[i64]]) -> Cone {
        Cone::from_rays_i64(Side::N, rays).unwrap()
    }

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    fn set(v: &[&[i64]]) -> Vec<LatticeVector> {
        let mut s: Vec<LatticeVector> = v.iter().map(|x| lv(x)).collect();
        s.sort();
        s
    }

    /// Irreducible nonzero lattice points below a height bound.
    fn brute_hilbert(c: &Cone, bound: &Int) -> Vec<LatticeVector> {
        let ell = c.facet_sum();
        let pts: Vec<LatticeVector> = lattice_points_below(c, &ell, bound)
            .into_iter()
            .filter(|p| !p.is_zero())
            .collect();
        let mut out: Vec<LatticeVector> = pts
            .iter()
            .filter(|p| !pts.iter().any(|q| q != *p && c.contains_lattice(&p.sub(q))))
            .cloned()
            .collect();
        out.sort();
        out
    }

    fn brute_minimal_s(sigma: &Cone, bound: &Int) -> Vec<LatticeVector> {
        let ell = sigma.facet_sum();
        let s: Vec<LatticeVector> = lattice_points_below(sigma, &ell, bound)
            .into_iter()
            .filter(|p| in_s_sigma(sigma, p))
            .collect();
        let mut out: Vec<LatticeVector> = s
            .iter()
            .filter(|p| !s.iter().any(|q| q != *p && cone_leq(sigma, q, p)))
            .cloned()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn hilbert_examples() {
        let oct = Cone::orthant(Side::N, 3);
        assert_eq!(hilbert_basis(&oct).unwrap().elements(), set(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).as_slice());
        let a1 = cone(&[&[1, 0], &[1, 2]]);
        assert_eq!(hilbert_basis(&a1).unwrap().elements(), set(&[&[1, 0], &[1, 1], &[1, 2]]).as_slice());
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(hilbert_basis(&sq).unwrap().elements(), sq.rays());
        let paper_dual = cone::dual_cone(&cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]])).unwrap();
        let ha = hilbert_basis(&paper_dual).unwrap();
        assert!(ha.contains(&lv(&[0, 0, 1])));
        assert!(ha.contains(&lv(&[4, 0, -1])));
    }

    #[test]
    fn order_examples() {
        let sigma = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]);
        assert!(cone_leq(&sigma, &lv(&[1, 2, 2]), &lv(&[1, 2, 2])));
        assert!(cone_leq(&sigma, &lv(&[1, 1, 2]), &lv(&[1, 2, 2])));
        let oct = Cone::orthant(Side::N, 3);
        assert!(!cone_leq(&oct, &lv(&[1, 0, 0]), &lv(&[0, 1, 0])));
    }

    #[test]
    fn minimal_s_examples() {
        let oct = Cone::orthant(Side::N, 3);
        let r = minimal_s_sigma(&oct, None).unwrap();
        assert!(r.elements.is_empty());
        assert!(r.certified);

        let a1 = cone(&[&[1, 0], &[1, 2]]);
        let r = minimal_s_sigma(&a1, None).unwrap();
        assert_eq!(r.elements, set(&[&[1, 1]]));
        assert!(r.certified);

        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let r = minimal_s_sigma(&sq, None).unwrap();
        assert!(r.contains(&lv(&[1, 1, 2])));
        assert!(r.certified);
        assert_eq!(r.elements, brute_minimal_s(&sq, &r.bound));

        // a bound below the candidates is reported as uncertified
        let r = minimal_s_sigma(&sq, Some(Int::from(1))).unwrap();
        assert!(!r.certified);
        assert!(r.elements.is_empty());
    }

    #[test]
    fn classification_examples() {
        let sigma = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]);
        let recs = classify_divisors(&sigma, &[lv(&[1, 2, 2]), lv(&[1, 0, 0])]).unwrap();
        assert!(!recs[0].in_hilbert_basis_b && !recs[0].bgs_essential);
        assert!(!recs[0].sufficient_condition);
        assert!(recs[1].bgs_essential && recs[1].is_ray_of_sigma);
        assert_eq!(recs[1].essential, Some(false));

        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let recs = classify_divisors(&sq, &[lv(&[1, 1, 2])]).unwrap();
        assert!(!recs[0].bgs_essential);
        assert_eq!(recs[0].essential, Some(true));
        assert!(!recs[0].is_ray_of_sigma);

        assert!(matches!(classify_divisors(&sq, &[lv(&[1, 0, 0])]), Err(Error::NotInCone)));
        assert!(matches!(classify_divisors(&sq, &[lv(&[2, 2, 4])]), Err(Error::NotPrimitive)));
    }

    fn arb_cone(d: usize) -> impl Strategy<Value = Cone> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, d), d..d + 2).prop_filter_map(
            "strongly convex nondegenerate",
            move |gens| {
                let gens: Vec<LatticeVector> = gens.iter().map(|g| lv(g)).collect();
                Cone::from_generators(Side::N, d, &gens)
                    .ok()
                    .filter(|c| c.is_full_dimensional())
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hilbert_matches_brute_force(c in (2usize..=3).prop_flat_map(arb_cone)) {
            let hb = hilbert_basis(&c).unwrap();
            let bound = Int::from(2) * c.facet_sum().dot(&c.interior_point());
            let brute = brute_hilbert(&c, &bound);
            prop_assert_eq!(hb.elements(), brute.as_slice());
            for (i, a) in hb.elements().iter().enumerate() {
                for b in &hb.elements()[i + 1..] {
                    prop_assert!(!cone_leq(&c, a, b) && !cone_leq(&c, b, a));
                }
            }
        }

        #[test]
        fn minimal_s_matches_brute_force(c in (2usize..=3).prop_flat_map(arb_cone)) {
            let r = minimal_s_sigma(&c, None).unwrap();
            prop_assert!(r.certified);
            prop_assert_eq!(&r.elements, &brute_minimal_s(&c, &r.bound));
            for (i, a) in r.elements.iter().enumerate() {
                for b in &r.elements[i + 1..] {
                    prop_assert!(!cone_leq(&c, a, b) && !cone_leq(&c, b, a));
                }
            }
        }
    }
}
