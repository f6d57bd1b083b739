//! Fans, subdivisions of a cone and the moderate/crepant tests.

use num_traits::{One, Signed, Zero};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RationalVector, Side};
use crate::linalg::{self, Int, Rat};

/// A fan stored by its maximal cones; faces are produced on demand.
#[derive(Clone, Debug)]
pub struct Fan {
    side: Side,
    ambient: usize,
    cones: Vec<Cone>,
    support: Option<Cone>,
}

impl Fan {
    /// Drops cones that are faces of other members.
    pub fn new(side: Side, ambient: usize, cones: Vec<Cone>) -> Result<Fan> {
        for c in &cones {
            if c.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: c.ambient_dim(),
                });
            }
            if c.side() != side {
                return Err(Error::InvalidSubdivision("cones on different lattice sides".into()));
            }
        }
        let mut uniq: Vec<Cone> = Vec::new();
        for c in cones {
            if !uniq.contains(&c) {
                uniq.push(c);
            }
        }
        let maximal: Vec<Cone> = uniq
            .iter()
            .filter(|c| !uniq.iter().any(|d| d != *c && c.is_face_of(d)))
            .cloned()
            .collect();
        let mut maximal = maximal;
        maximal.sort_by(|a, b| a.rays().cmp(b.rays()));
        Ok(Fan {
            side,
            ambient,
            cones: maximal,
            support: None,
        })
    }

    /// Pairwise distinct full-dimensional cones are never faces of each other.
    pub(crate) fn from_full_dimensional(side: Side, ambient: usize, mut cones: Vec<Cone>) -> Fan {
        cones.sort_by(|a, b| a.rays().cmp(b.rays()));
        cones.dedup();
        Fan {
            side,
            ambient,
            cones,
            support: None,
        }
    }

    /// The fan of all faces of `c`.
    pub fn trivial(c: &Cone) -> Fan {
        Fan {
            side: c.side(),
            ambient: c.ambient_dim(),
            cones: vec![c.clone()],
            support: Some(c.clone()),
        }
    }

    pub fn with_support(mut self, base: Cone) -> Fan {
        self.support = Some(base);
        self
    }

    pub fn support(&self) -> Option<&Cone> {
        self.support.as_ref()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Every cone of the fan, each face listed once, sorted by dimension then rays.
    pub fn all_cones(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = Vec::new();
        for c in &self.cones {
            for f in c.faces() {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.rays().cmp(b.rays())));
        out
    }

    /// Primitive generators of the one-dimensional cones, sorted.
    pub fn rays(&self) -> Vec<LatticeVector> {
        let mut rs: Vec<LatticeVector> = self.cones.iter().flat_map(|c| c.rays().to_vec()).collect();
        rs.sort();
        rs.dedup();
        rs
    }

    pub fn has_ray(&self, v: &LatticeVector) -> bool {
        match crate::lattice::primitive_of(v) {
            Ok(p) => self.cones.iter().any(|c| c.rays().contains(&p)),
            Err(_) => false,
        }
    }

    /// The cones of the fan of full dimension.
    pub fn full_dimensional_cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(|c| c.is_full_dimensional())
    }
}

/// Checks the fan axioms and `|fan| = base`; the error names the first violation.
pub fn check_subdivision(fan: &Fan, base: &Cone) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidSubdivision(m));
    if fan.ambient != base.ambient_dim() || fan.side != base.side() {
        return bad("fan and base live in different lattices".into());
    }
    if fan.cones.is_empty() {
        return bad("empty fan".into());
    }
    for c in &fan.cones {
        if let Some(r) = c.rays().iter().find(|r| !base.contains_lattice(r)) {
            return bad(format!("ray {r} of {c:?} lies outside the base"));
        }
        if c.dim() != base.dim() {
            return bad(format!("maximal cone {c:?} has dimension {} < {}", c.dim(), base.dim()));
        }
    }
    for (i, a) in fan.cones.iter().enumerate() {
        for b in &fan.cones[i + 1..] {
            let meet = a.intersection(b)?;
            if !meet.is_face_of(a) || !meet.is_face_of(b) {
                return bad(format!("{a:?} and {b:?} meet in {meet:?}, which is not a common face"));
            }
        }
    }
    let ell = base.facet_sum();
    let total: Rat = fan.cones.iter().map(|c| c.volume(&ell)).sum();
    let want = base.volume(&ell);
    if total != want {
        return bad(format!("support mismatch: covered volume {total} != {want}"));
    }
    Ok(())
}

pub fn validate_subdivision(fan: &Fan, base: &Cone) -> bool {
    check_subdivision(fan, base).is_ok()
}

/// The linear function `ψ_τ` equal to one on each primitive ray generator of `τ`.
#[derive(Clone, Debug)]
pub struct SupportFunctional {
    pub cone: Cone,
    pub vector: RationalVector,
}

impl SupportFunctional {
    pub fn eval(&self, w: &LatticeVector) -> Rat {
        w.dot_rat(&self.vector)
    }
}

pub fn psi_functional(tau: &Cone) -> Result<SupportFunctional> {
    if !tau.is_full_dimensional() {
        return Err(Error::Degenerate);
    }
    if !tau.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let d = tau.ambient_dim();
    let a: Vec<Vec<Rat>> = tau.rays().iter().map(|r| linalg::to_rat(r.coords())).collect();
    let ones = vec![Rat::one(); d];
    let x = linalg::solve_rat(&a, &ones, d).ok_or(Error::Invariant("singular ray matrix".into()))?;
    Ok(SupportFunctional {
        cone: tau.clone(),
        vector: RationalVector::new(x),
    })
}

/// Every full-dimensional cone is smooth and its `ψ_τ` is positive on the
/// base rays.
pub fn is_moderate(fan: &Fan, base: &Cone) -> Result<bool> {
    check_subdivision(fan, base)?;
    for tau in fan.full_dimensional_cones() {
        if !tau.is_smooth() {
            return Ok(false);
        }
        let psi = psi_functional(tau)?;
        if base.rays().iter().any(|v| !psi.eval(v).is_positive()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m ∈ M_ℚ` with `(m, v) = 1` on every base ray, when one exists.
pub fn gorenstein_functional(base: &Cone) -> Option<RationalVector> {
    let d = base.ambient_dim();
    let a: Vec<Vec<Rat>> = base.rays().iter().map(|r| linalg::to_rat(r.coords())).collect();
    let ones = vec![Rat::one(); a.len()];
    linalg::solve_rat(&a, &ones, d).map(RationalVector::new)
}

pub fn is_crepant(fan: &Fan, base: &Cone) -> Result<bool> {
    check_subdivision(fan, base)?;
    let Some(m) = gorenstein_functional(base) else {
        return Ok(false);
    };
    Ok(fan.rays().iter().all(|r| r.dot_rat(&m).is_one()))
}

/// For every full-dimensional cone `τ`, the simplex `τ ∩ {ψ_τ = 1}` lies on a
/// single facet of `C = conv(hilbert_basis) + base`, and `τ` is smooth.
pub fn convex_moderate_check(fan: &Fan, base: &Cone, hilbert_basis: &[LatticeVector]) -> Result<bool> {
    check_subdivision(fan, base)?;
    let d = base.ambient_dim();
    let lift = |v: &LatticeVector, t: i64| {
        let mut c = v.coords().to_vec();
        c.push(Int::from(t));
        LatticeVector::new(c)
    };
    let gens: Vec<LatticeVector> = hilbert_basis
        .iter()
        .filter(|h| !h.is_zero())
        .map(|h| lift(h, 1))
        .chain(base.rays().iter().map(|v| lift(v, 0)))
        .collect();
    let hull = Cone::from_generators(base.side(), d + 1, &gens)?;
    let bounded: Vec<&LatticeVector> = hull
        .facets()
        .iter()
        .filter(|f| !linalg::is_zero_int(&f.coords()[..d]))
        .collect();
    for tau in fan.full_dimensional_cones() {
        if !tau.is_smooth() {
            return Ok(false);
        }
        let pts: Vec<LatticeVector> = tau.rays().iter().map(|r| lift(r, 1)).collect();
        if !pts.iter().all(|p| hull.contains_lattice(p)) {
            return Ok(false);
        }
        if !bounded.iter().any(|f| pts.iter().all(|p| f.dot(p).is_zero())) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stellar subdivision of a simplicial fan at the lattice point `p`.
pub fn star_subdivide(fan: &Fan, p: &LatticeVector) -> Result<Fan> {
    let p = crate::lattice::primitive_of(p)?;
    let mut out = Vec::new();
    for c in &fan.cones {
        if !c.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if !c.contains_lattice(&p) || c.rays().contains(&p) {
            out.push(c.clone());
            continue;
        }
        let lambda = simplicial_coords(c, &p.to_rational());
        for (i, l) in lambda.iter().enumerate() {
            if l.is_positive() {
                let mut gens = c.rays().to_vec();
                gens[i] = p.clone();
                out.push(Cone::from_generators(fan.side, fan.ambient, &gens)?);
            }
        }
    }
    let f = Fan::new(fan.side, fan.ambient, out)?;
    Ok(match &fan.support {
        Some(s) => f.with_support(s.clone()),
        None => f,
    })
}

/// Coefficients of `x` in the ray basis of a simplicial cone.
pub fn simplicial_coords(c: &Cone, x: &RationalVector) -> Vec<Rat> {
    let k = c.rays().len();
    let cols: Vec<Vec<Rat>> = linalg::transpose(
        &c.rays().iter().map(|r| linalg::to_rat(r.coords())).collect::<Vec<_>>(),
        c.ambient_dim(),
    );
    linalg::solve_rat(&cols, x.coords(), k).expect("point in the span")
}

/// A nonzero lattice point of the half-open parallelepiped of a simplicial
/// full-dimensional cone, when the cone is not smooth.
fn parallelepiped_point(c: &Cone) -> Option<LatticeVector> {
    crate::monoid::parallelepiped_points(c.rays(), c.ambient_dim())
        .into_iter()
        .find(|p| !p.is_zero())
}

/// Refines a simplicial fan until every cone is smooth.
pub fn resolve_simplicial(fan: &Fan) -> Result<Fan> {
    let mut f = fan.clone();
    loop {
        let Some(p) = f
            .cones
            .iter()
            .find(|c| !c.is_smooth())
            .and_then(parallelepiped_point)
        else {
            return Ok(f);
        };
        f = star_subdivide(&f, &p)?;
    }
}

/// Triangulation of `base` without new rays, as a fan.
pub fn triangulation_fan(base: &Cone) -> Result<Fan> {
    let cones: Vec<Cone> = base
        .triangulate()
        .iter()
        .map(|s| Cone::from_generators(base.side(), base.ambient_dim(), s))
        .collect::<Result<_>>()?;
    Ok(Fan::new(base.side(), base.ambient_dim(), cones)?.with_support(base.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn cone(rays: &[&[i64]]) -> Cone {
        Cone::from_rays_i64(Side::N, rays).unwrap()
    }

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    fn fan(cones: Vec<Cone>) -> Fan {
        let d = cones[0].ambient_dim();
        Fan::new(Side::N, d, cones).unwrap()
    }

    fn a1_resolution() -> (Fan, Cone) {
        let base = cone(&[&[1, 0], &[1, 2]]);
        (fan(vec![cone(&[&[1, 0], &[1, 1]]), cone(&[&[1, 1], &[1, 2]])]), base)
    }

    #[test]
    fn subdivision_examples() {
        let sigma = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]);
        assert!(validate_subdivision(&Fan::trivial(&sigma), &sigma));

        let (f, base) = a1_resolution();
        assert!(validate_subdivision(&f, &base));
        assert_eq!(f.all_cones().len(), 6);

        let overlapping = fan(vec![cone(&[&[1, 0], &[1, 2]]), cone(&[&[1, 1], &[1, 2]])]);
        assert_eq!(overlapping.maximal_cones().len(), 2);
        assert!(!validate_subdivision(&overlapping, &base));

        let gap = fan(vec![cone(&[&[1, 0], &[1, 1]])]);
        assert!(matches!(check_subdivision(&gap, &base), Err(Error::InvalidSubdivision(_))));

        let crossing = Fan {
            side: Side::N,
            ambient: 2,
            cones: vec![cone(&[&[1, 0], &[1, 1]]), cone(&[&[2, 1], &[1, 2]])],
            support: None,
        };
        assert!(!validate_subdivision(&crossing, &base));
    }

    #[test]
    fn psi_examples() {
        let oct = Cone::orthant(Side::N, 3);
        assert_eq!(psi_functional(&oct).unwrap().vector, lv(&[1, 1, 1]).to_rational());
        assert_eq!(psi_functional(&cone(&[&[1, 0], &[1, 2]])).unwrap().vector, lv(&[1, 0]).to_rational());
        assert_eq!(psi_functional(&cone(&[&[1, 0], &[1, 1]])).unwrap().vector, lv(&[1, 0]).to_rational());
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert!(matches!(psi_functional(&sq), Err(Error::NotSimplicial)));
    }

    #[test]
    fn moderate_examples() {
        let oct = Cone::orthant(Side::N, 3);
        assert!(is_moderate(&Fan::trivial(&oct), &oct).unwrap());
        let (f, base) = a1_resolution();
        assert!(is_moderate(&f, &base).unwrap());
        let hb = vec![lv(&[1, 0]), lv(&[1, 1]), lv(&[1, 2])];
        assert!(convex_moderate_check(&f, &base, &hb).unwrap());
        assert!(convex_moderate_check(&Fan::trivial(&oct), &oct, &[lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])]).unwrap());

        // a smooth subdivision through (1,2,2) of the 3-dimensional example
        let sigma = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 4]]);
        let starred = star_subdivide(&Fan::trivial(&sigma), &lv(&[1, 2, 2])).unwrap();
        let smooth = resolve_simplicial(&starred).unwrap();
        assert!(validate_subdivision(&smooth, &sigma));
        assert!(smooth.has_ray(&lv(&[1, 2, 2])));
        assert!(smooth.maximal_cones().iter().all(|c| c.is_smooth()));
        assert!(!is_moderate(&smooth, &sigma).unwrap());
        let hb_sigma = crate::monoid::hilbert_basis(&sigma).unwrap();
        assert!(!convex_moderate_check(&smooth, &sigma, hb_sigma.elements()).unwrap());
    }

    #[test]
    fn crepant_examples() {
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let t1 = fan(vec![
            cone(&[&[0, 0, 1], &[1, 0, 1], &[1, 1, 1]]),
            cone(&[&[0, 0, 1], &[0, 1, 1], &[1, 1, 1]]),
        ]);
        let t2 = fan(vec![
            cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1]]),
            cone(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]),
        ]);
        for t in [&t1, &t2] {
            assert!(is_crepant(t, &sq).unwrap());
            assert!(is_moderate(t, &sq).unwrap());
        }
        let (f, base) = a1_resolution();
        assert!(is_crepant(&f, &base).unwrap());
        // an interior ray off the Gorenstein line
        let off = star_subdivide(&f, &lv(&[2, 1])).unwrap();
        assert!(!is_crepant(&off, &base).unwrap());
        assert_eq!(gorenstein_functional(&base), Some(RationalVector::new(vec![rat(1, 1), rat(0, 1)])));
    }

    #[test]
    fn triangulations_are_subdivisions() {
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let t = triangulation_fan(&sq).unwrap();
        assert_eq!(t.maximal_cones().len(), 2);
        assert!(validate_subdivision(&t, &sq));
    }
}
