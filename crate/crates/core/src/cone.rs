//! Strongly convex rational polyhedral cones with both representations.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RationalVector, Side};
use crate::linalg::{self, Int, Rat};

/// Fixed-width bitset used for zero sets in the double description loop.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Bits(pub(crate) Vec<u64>);

impl Bits {
    pub(crate) fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    pub(crate) fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    pub(crate) fn or_assign(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a |= b);
    }
    pub(crate) fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub(crate) fn contains_all(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| 64 * k + b)
        })
    }
}

/// Extreme rays of the pointed cone `{z ∈ ℝⁿ : a·z ≥ 0 for every row a}`.
/// The rows must have rank `n`.
fn extreme_rays(rows: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    if n == 0 {
        return Vec::new();
    }
    let m = rows.len();
    // greedy choice of n independent rows
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut chosen_rows: Vec<Vec<Int>> = Vec::with_capacity(n);
    for (i, r) in rows.iter().enumerate() {
        chosen_rows.push(r.clone());
        if linalg::rank_int(&chosen_rows) == chosen_rows.len() {
            chosen.push(i);
            if chosen.len() == n {
                break;
            }
        } else {
            chosen_rows.pop();
        }
    }
    assert_eq!(chosen.len(), n, "inequality system is not of full rank");
    let a: Vec<Vec<Rat>> = chosen_rows.iter().map(|r| linalg::to_rat(r)).collect();
    let mut rays: Vec<(Vec<Int>, Bits)> = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[k] = Rat::one();
        let z = linalg::solve_rat(&a, &e, n).expect("independent rows");
        let mut zs = Bits::new(m);
        for (j, &row) in chosen.iter().enumerate() {
            if j != k {
                zs.set(row);
            }
        }
        rays.push((linalg::primitive_from_rat(&z), zs));
    }
    let done: BTreeSet<usize> = chosen.iter().copied().collect();
    for (j, a) in rows.iter().enumerate() {
        if done.contains(&j) {
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|(r, _)| linalg::dot_int(a, r)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for ((_, z), v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    z.set(j);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<(Vec<Int>, Bits)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                if common.count() + 2 < n {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, (_, z))| i == p || i == q || !z.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let (vp, vq) = (&vals[p], &vals[q]);
                let new: Vec<Int> = rays[q]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(x, y)| vp * x - vq * y)
                    .collect();
                let mut z = common;
                z.set(j);
                next.push((linalg::make_primitive(&new), z));
            }
        }
        for (i, (r, mut z)) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                z.set(j);
            }
            next.push((r, z));
        }
        rays = next;
    }
    rays.into_iter().map(|(r, _)| r).collect()
}

/// A strongly convex rational polyhedral cone in `M_ℝ` or `N_ℝ`.
///
/// `rays` are the primitive extreme ray generators; `facets` are primitive
/// inner normals chosen inside the linear span of the cone, so that for a
/// lower-dimensional cone they are unique; `equations` is a basis of the
/// integer annihilator of the span.
#[derive(Clone)]
pub struct Cone {
    side: Side,
    ambient: usize,
    dim: usize,
    rays: Vec<LatticeVector>,
    facets: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.ambient == other.ambient && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone[{:?}; ", self.side)?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

fn sorted_unique(mut v: Vec<LatticeVector>) -> Vec<LatticeVector> {
    v.sort();
    v.dedup();
    v
}

impl Cone {
    pub fn zero(side: Side, ambient: usize) -> Cone {
        let equations = (0..ambient)
            .map(|i| {
                let mut e = LatticeVector::zero(ambient).into_coords();
                e[i] = Int::one();
                LatticeVector::new(e)
            })
            .collect();
        Cone {
            side,
            ambient,
            dim: 0,
            rays: Vec::new(),
            facets: Vec::new(),
            equations,
        }
    }

    /// The cone spanned by `gens`; zero generators are ignored.
    pub fn from_generators(side: Side, ambient: usize, gens: &[LatticeVector]) -> Result<Cone> {
        for g in gens {
            if g.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: g.dim(),
                });
            }
        }
        let gens: Vec<Vec<Int>> = sorted_unique(
            gens.iter()
                .filter(|g| !g.is_zero())
                .map(|g| LatticeVector::new(linalg::make_primitive(g.coords())))
                .collect(),
        )
        .into_iter()
        .map(LatticeVector::into_coords)
        .collect();
        if gens.is_empty() {
            return Ok(Cone::zero(side, ambient));
        }
        let basis = linalg::saturated_span(&gens, ambient);
        let r = basis.len();
        let equations: Vec<LatticeVector> = linalg::integer_kernel(&gens, ambient)
            .into_iter()
            .map(LatticeVector::new)
            .collect();
        let local: Vec<Vec<Int>> = gens
            .iter()
            .map(|g| basis.iter().map(|b| linalg::dot_int(b, g)).collect())
            .collect();
        if linalg::rank_int(&local) < r {
            return Err(Error::Invariant("generator image lost rank".into()));
        }
        let facets: Vec<LatticeVector> = sorted_unique(
            extreme_rays(&local, r)
                .into_iter()
                .map(|z| LatticeVector::new(linalg::make_primitive(&linalg::combine_int(&basis, &z, ambient))))
                .collect(),
        );
        let facet_rows: Vec<Vec<Int>> = facets.iter().map(|f| f.coords().to_vec()).collect();
        if linalg::rank_int(&facet_rows) < r {
            return Err(Error::NotStronglyConvex);
        }
        let rays = sorted_unique(
            gens.iter()
                .filter(|g| {
                    let tight: Vec<Vec<Int>> = facet_rows
                        .iter()
                        .filter(|f| linalg::dot_int(f, g).is_zero())
                        .cloned()
                        .collect();
                    linalg::rank_int(&tight) + 1 == r
                })
                .map(|g| LatticeVector::new(g.clone()))
                .collect(),
        );
        Ok(Cone {
            side,
            ambient,
            dim: r,
            rays,
            facets,
            equations,
        })
    }

    /// `{x : a·x ≥ 0 for a ∈ ineqs, e·x = 0 for e ∈ eqs}`; errors when this set contains a line.
    pub fn from_inequalities(
        side: Side,
        ambient: usize,
        ineqs: &[LatticeVector],
        eqs: &[LatticeVector],
    ) -> Result<Cone> {
        for v in ineqs.iter().chain(eqs) {
            if v.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: v.dim(),
                });
            }
        }
        let eq_rows: Vec<Vec<Int>> = eqs.iter().map(|e| e.coords().to_vec()).collect();
        let kernel = linalg::integer_kernel(&eq_rows, ambient);
        let k = kernel.len();
        if k == 0 {
            return Ok(Cone::zero(side, ambient));
        }
        let local: Vec<Vec<Int>> = ineqs
            .iter()
            .map(|a| kernel.iter().map(|kr| linalg::dot_int(kr, a.coords())).collect())
            .filter(|row: &Vec<Int>| !linalg::is_zero_int(row))
            .collect();
        if linalg::rank_int(&local) < k {
            return Err(Error::NotStronglyConvex);
        }
        let gens: Vec<LatticeVector> = extreme_rays(&local, k)
            .into_iter()
            .map(|z| LatticeVector::new(linalg::combine_int(&kernel, &z, ambient)))
            .collect();
        Cone::from_generators(side, ambient, &gens)
    }

    /// Convenience constructor from small integer tuples.
    pub fn from_rays_i64(side: Side, rays: &[&[i64]]) -> Result<Cone> {
        let ambient = rays.first().map_or(0, |r| r.len());
        let gens: Vec<LatticeVector> = rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        Cone::from_generators(side, ambient, &gens)
    }

    /// The positive orthant spanned by the standard basis.
    pub fn orthant(side: Side, ambient: usize) -> Cone {
        let gens: Vec<LatticeVector> = (0..ambient)
            .map(|i| {
                let mut e = vec![Int::zero(); ambient];
                e[i] = Int::one();
                LatticeVector::new(e)
            })
            .collect();
        Cone::from_generators(side, ambient, &gens).expect("orthant is strongly convex")
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        x.dim() == self.ambient
            && self.equations.iter().all(|e| e.dot_rat(x).is_zero())
            && self.facets.iter().all(|f| !f.dot_rat(x).is_negative())
    }

    pub fn contains_lattice(&self, x: &LatticeVector) -> bool {
        x.dim() == self.ambient
            && self.equations.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|f| !f.dot(x).is_negative())
    }

    /// Membership in the relative interior.
    pub fn contains_relative_interior(&self, x: &RationalVector) -> bool {
        x.dim() == self.ambient
            && self.equations.iter().all(|e| e.dot_rat(x).is_zero())
            && self.facets.iter().all(|f| f.dot_rat(x).is_positive())
    }

    /// Sum of the ray generators; lies in the relative interior.
    pub fn interior_point(&self) -> LatticeVector {
        self.rays
            .iter()
            .fold(LatticeVector::zero(self.ambient), |acc, r| acc.add(r))
    }

    /// Sum of the facet normals; strictly positive on the cone minus the origin.
    pub fn facet_sum(&self) -> LatticeVector {
        self.facets
            .iter()
            .fold(LatticeVector::zero(self.ambient), |acc, f| acc.add(f))
    }

    /// Indices of facets vanishing at `x`.
    pub fn tight_facets(&self, x: &RationalVector) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| self.facets[i].dot_rat(x).is_zero())
            .collect()
    }

    /// The face cut out by the given facets.
    pub fn face_of_facets(&self, facet_ids: &[usize]) -> Cone {
        let rays: Vec<LatticeVector> = self
            .rays
            .iter()
            .filter(|r| facet_ids.iter().all(|&i| self.facets[i].dot(r).is_zero()))
            .cloned()
            .collect();
        Cone::from_generators(self.side, self.ambient, &rays).expect("faces of a strongly convex cone")
    }

    /// Every face including the zero face and the cone itself.
    pub fn faces(&self) -> Vec<Cone> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let all: Vec<usize> = (0..self.rays.len()).collect();
        let mut stack = vec![all.clone()];
        seen.insert(all);
        while let Some(rs) = stack.pop() {
            for f in &self.facets {
                let sub: Vec<usize> = rs
                    .iter()
                    .copied()
                    .filter(|&i| f.dot(&self.rays[i]).is_zero())
                    .collect();
                if sub.len() < rs.len() && seen.insert(sub.clone()) {
                    stack.push(sub);
                }
            }
        }
        seen.into_iter()
            .map(|rs| {
                let gens: Vec<LatticeVector> = rs.iter().map(|&i| self.rays[i].clone()).collect();
                Cone::from_generators(self.side, self.ambient, &gens).expect("face")
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        if self.side != other.side || self.ambient != other.ambient {
            return false;
        }
        if !self.rays.iter().all(|r| other.contains_lattice(r)) {
            return false;
        }
        let tight: Vec<usize> = (0..other.facets.len())
            .filter(|&i| self.rays.iter().all(|r| other.facets[i].dot(r).is_zero()))
            .collect();
        other.face_of_facets(&tight).rays == self.rays
    }

    pub fn intersection(&self, other: &Cone) -> Result<Cone> {
        let ineqs: Vec<LatticeVector> = self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<LatticeVector> = self.equations.iter().chain(&other.equations).cloned().collect();
        Cone::from_inequalities(self.side, self.ambient, &ineqs, &eqs)
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// Simplicial with ray generators extending to a lattice basis.
    pub fn is_smooth(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        if self.dim == 0 {
            return true;
        }
        let mut g = Int::zero();
        for cols in combinations(self.ambient, self.dim) {
            let m: Vec<Vec<Int>> = self
                .rays
                .iter()
                .map(|r| cols.iter().map(|&c| r.coords()[c].clone()).collect())
                .collect();
            g = num_integer::Integer::gcd(&g, &linalg::det_int(&m));
            if g.is_one() {
                return true;
            }
        }
        g.is_one()
    }

    /// Pulling triangulation; each simplex is a list of `dim` rays.
    pub fn triangulate(&self) -> Vec<Vec<LatticeVector>> {
        if self.is_simplicial() {
            return vec![self.rays.clone()];
        }
        let apex = &self.rays[0];
        let mut out = Vec::new();
        for (i, f) in self.facets.iter().enumerate() {
            if f.dot(apex).is_zero() {
                continue;
            }
            for mut simplex in self.face_of_facets(&[i]).triangulate() {
                simplex.insert(0, apex.clone());
                out.push(simplex);
            }
        }
        out
    }

    /// Coordinates of a vector of the span in a basis of the span lattice.
    fn span_coords(&self, basis: &[Vec<Int>], v: &LatticeVector) -> Vec<Rat> {
        let bt: Vec<Vec<Rat>> = linalg::transpose(basis, self.ambient)
            .iter()
            .map(|r| linalg::to_rat(r))
            .collect();
        linalg::solve_rat(&bt, &linalg::to_rat(v.coords()), basis.len()).expect("vector in span")
    }

    /// Normalized volume of `{x ∈ cone : ell(x) ≤ 1}` relative to the span
    /// lattice, times `dim!`. `ell` must be positive on every ray.
    pub fn volume(&self, ell: &LatticeVector) -> Rat {
        if self.dim == 0 {
            return Rat::one();
        }
        let gens: Vec<Vec<Int>> = self.rays.iter().map(|r| r.coords().to_vec()).collect();
        let basis = linalg::saturated_span(&gens, self.ambient);
        let mut total = Rat::zero();
        for simplex in self.triangulate() {
            let m: Vec<Vec<Rat>> = simplex.iter().map(|g| self.span_coords(&basis, g)).collect();
            let mut v = linalg::det_rat(&m).abs();
            for g in &simplex {
                v /= Rat::from_integer(ell.dot(g));
            }
            total += v;
        }
        total
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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

/// `{a : (a, w) ≥ 0 ∀ w ∈ c}`; requires a full-dimensional cone so that the
/// dual is strongly convex.
pub fn dual_cone(c: &Cone) -> Result<Cone> {
    if !c.is_full_dimensional() {
        return Err(Error::Degenerate);
    }
    Ok(Cone {
        side: c.side.dual(),
        ambient: c.ambient,
        dim: c.ambient,
        rays: c.facets.clone(),
        facets: c.rays.clone(),
        equations: Vec::new(),
    })
}

pub fn minimal_face_containing(c: &Cone, w: &RationalVector) -> Result<Cone> {
    if w.dim() != c.ambient {
        return Err(Error::DimensionMismatch {
            expected: c.ambient,
            found: w.dim(),
        });
    }
    if !c.contains(w) {
        return Err(Error::NotInCone);
    }
    Ok(c.face_of_facets(&c.tight_facets(w)))
}

/// `σ∨ ∩ μ⊥` for a face `μ` of a full-dimensional `σ`.
pub fn dual_face(sigma: &Cone, mu: &Cone) -> Result<Cone> {
    if !sigma.is_full_dimensional() {
        return Err(Error::Degenerate);
    }
    if !mu.is_face_of(sigma) {
        return Err(Error::NotAFace);
    }
    let normals: Vec<LatticeVector> = sigma
        .facets
        .iter()
        .filter(|f| mu.rays.iter().all(|r| f.dot(r).is_zero()))
        .cloned()
        .collect();
    Cone::from_generators(sigma.side.dual(), sigma.ambient, &normals)
}

pub fn is_smooth(c: &Cone) -> bool {
    c.is_smooth()
}

pub fn is_simplicial(c: &Cone) -> bool {
    c.is_simplicial()
}

#[cfg(test)]
mod tests {
    use super::*;
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

    #[test]
    fn dual_examples() {
        let oct = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(dual_cone(&oct).unwrap().rays(), set(&[&[1, 0], &[0, 1]]).as_slice());

        let sigma = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]);
        let a = dual_cone(&sigma).unwrap();
        assert_eq!(a.side(), Side::M);
        assert_eq!(a.rays(), set(&[&[0, 0, 1], &[4, 0, -1], &[0, 2, -1]]).as_slice());

        let a1 = cone(&[&[1, 0], &[1, 2]]);
        assert_eq!(dual_cone(&a1).unwrap().rays(), set(&[&[0, 1], &[2, -1]]).as_slice());
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = cone(&[&[1, 0], &[1, 1], &[2, 4], &[1, 2]]);
        assert_eq!(c.rays(), set(&[&[1, 0], &[1, 2]]).as_slice());
        assert!(matches!(
            Cone::from_rays_i64(Side::N, &[&[1, 0], &[-1, 0]]),
            Err(Error::NotStronglyConvex)
        ));
        assert!(matches!(
            Cone::from_rays_i64(Side::N, &[&[1, 0], &[0, 1], &[-1, -1]]),
            Err(Error::NotStronglyConvex)
        ));
    }

    #[test]
    fn lower_dimensional_cone() {
        let c = cone(&[&[1, 0, 0], &[1, 1, 0]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.equations().len(), 1);
        assert!(c.contains(&lv(&[2, 1, 0]).to_rational()));
        assert!(!c.contains(&lv(&[2, 1, 1]).to_rational()));
        assert!(!c.contains(&lv(&[0, 1, 0]).to_rational()));
        assert_eq!(c.facets().len(), 2);
        for f in c.facets() {
            assert!(f.coords()[2].is_zero());
        }
    }

    #[test]
    fn minimal_face_examples() {
        let sigma = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]);
        let w = lv(&[1, 2, 2]).to_rational();
        assert_eq!(minimal_face_containing(&sigma, &w).unwrap(), sigma);

        let oct = Cone::orthant(Side::N, 3);
        let f = minimal_face_containing(&oct, &lv(&[1, 1, 0]).to_rational()).unwrap();
        assert_eq!(f.rays(), set(&[&[1, 0, 0], &[0, 1, 0]]).as_slice());

        let f = minimal_face_containing(&sigma, &lv(&[1, 2, 4]).to_rational()).unwrap();
        assert_eq!(f.rays(), set(&[&[1, 2, 4]]).as_slice());

        assert!(matches!(
            minimal_face_containing(&oct, &lv(&[-1, 0, 0]).to_rational()),
            Err(Error::NotInCone)
        ));
    }

    #[test]
    fn dual_face_examples() {
        let sigma = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]);
        assert!(dual_face(&sigma, &sigma).unwrap().is_zero());

        let oct = Cone::orthant(Side::N, 3);
        let mu = cone(&[&[1, 0, 0]]);
        let d = dual_face(&oct, &mu).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.rays(), set(&[&[0, 1, 0], &[0, 0, 1]]).as_slice());

        let a1 = cone(&[&[1, 0], &[1, 2]]);
        let d = dual_face(&a1, &cone(&[&[1, 0]])).unwrap();
        assert_eq!(d.rays(), set(&[&[0, 1]]).as_slice());

        assert!(matches!(dual_face(&a1, &cone(&[&[1, 1]])), Err(Error::NotAFace)));
    }

    #[test]
    fn smoothness_examples() {
        assert!(cone(&[&[1, 0], &[0, 1]]).is_smooth());
        let a1 = cone(&[&[1, 0], &[1, 2]]);
        assert!(a1.is_simplicial());
        assert!(!a1.is_smooth());
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert!(!sq.is_simplicial());
        assert!(!sq.is_smooth());
        // a smooth 2-dimensional face in 3-space
        assert!(cone(&[&[1, 0, 1], &[0, 1, 1]]).is_smooth());
        assert!(!cone(&[&[1, 1, 0], &[1, -1, 0]]).is_smooth());
    }

    #[test]
    fn faces_of_square_cone() {
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let faces = sq.faces();
        // 1 + 4 + 4 + 1
        assert_eq!(faces.len(), 10);
        for f in &faces {
            assert!(f.is_face_of(&sq));
        }
        assert!(!cone(&[&[0, 0, 1], &[1, 1, 1]]).is_face_of(&sq));
    }

    #[test]
    fn triangulation_and_volume() {
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(sq.triangulate().len(), 2);
        let ell = lv(&[0, 0, 1]);
        assert_eq!(sq.volume(&ell), linalg::rat(2, 1));
        let a1 = cone(&[&[1, 0], &[1, 2]]);
        assert_eq!(a1.volume(&lv(&[1, 0])), linalg::rat(2, 1));
    }

    fn arb_cone(d: usize) -> impl Strategy<Value = Cone> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, d), d..d + 3).prop_filter_map(
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
        #[test]
        fn double_dual_is_identity(c in (2usize..=4).prop_flat_map(arb_cone)) {
            let dd = dual_cone(&dual_cone(&c).unwrap()).unwrap();
            prop_assert_eq!(dd.rays(), c.rays());
            prop_assert_eq!(dd.facets(), c.facets());
        }

        #[test]
        fn representations_agree(c in (2usize..=3).prop_flat_map(arb_cone)) {
            for r in c.rays() {
                for f in c.facets() {
                    prop_assert!(!f.dot(r).is_negative());
                }
                let tight: Vec<Vec<Int>> = c.facets().iter().filter(|f| f.dot(r).is_zero()).map(|f| f.coords().to_vec()).collect();
                prop_assert_eq!(linalg::rank_int(&tight), c.dim() - 1);
            }
            let again = Cone::from_inequalities(Side::N, c.ambient_dim(), c.facets(), &[]).unwrap();
            prop_assert_eq!(again.rays(), c.rays());
        }

        #[test]
        fn face_dimensions_complement(c in (2usize..=3).prop_flat_map(arb_cone)) {
            for mu in c.faces() {
                let star = dual_face(&c, &mu).unwrap();
                prop_assert_eq!(mu.dim() + star.dim(), c.ambient_dim());
            }
        }

        #[test]
        fn minimal_face_tight_set(c in (2usize..=3).prop_flat_map(arb_cone), coeffs in proptest::collection::vec(0i64..3, 6)) {
            let mut w = LatticeVector::zero(c.ambient_dim());
            for (r, k) in c.rays().iter().zip(&coeffs) {
                w = w.add(&r.scale(&Int::from(*k)));
            }
            let w = w.to_rational();
            let f = minimal_face_containing(&c, &w).unwrap();
            prop_assert!(f.contains_relative_interior(&w));
            let tight = c.tight_facets(&w);
            for (i, fac) in c.facets().iter().enumerate() {
                let vanishes = f.rays().iter().all(|r| fac.dot(r).is_zero());
                prop_assert_eq!(vanishes, tight.contains(&i));
            }
        }
    }
}
