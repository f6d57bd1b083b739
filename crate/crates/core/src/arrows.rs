//! Tie-breakers, critical arrows and the resulting bound on the dimension of
//! the smallest cone of `Δ` containing a weight.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::cone::{self, Cone};
use crate::error::{Error, Result};
use crate::lattice::{lattice_ball, primitive_of, LatticeVector, QuotientLattice, RationalVector};
use crate::level::{self, LevelPolyhedron};
use crate::linalg::{self, Int, Rat};
use crate::lp::Constraint;
use crate::polyhedron;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub head: RationalVector,
    pub tail: RationalVector,
    pub vector: RationalVector,
    pub integral: bool,
    pub level: Rat,
}

impl Arrow {
    pub fn new(head: RationalVector, tail: RationalVector, level: Rat) -> Arrow {
        let vector = head.sub(&tail);
        Arrow {
            integral: vector.is_integral(),
            head,
            tail,
            vector,
            level,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieBreaker {
    pub weight: LatticeVector,
    pub vector: RationalVector,
    /// `weight + vector`, a point of the chamber selected by the tie-breaker.
    pub chamber_witness: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCheck {
    pub level: Rat,
    pub has_point: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniqueMinProof {
    pub tail_value: Rat,
    /// Values of the tie-breaker at the other vertices of the slice.
    pub other_vertex_values: Vec<Rat>,
    /// Values on the recession generators; all positive.
    pub recession_values: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalCertificate {
    pub arrow: Arrow,
    pub tie_breaker: TieBreaker,
    pub level_c: Rat,
    pub no_lower_point_proof: Vec<LevelCheck>,
    pub unique_min_proof: UniqueMinProof,
}

fn check_weight(sigma: &Cone, w: &LatticeVector) -> Result<()> {
    if w.dim() != sigma.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.ambient_dim(),
            found: w.dim(),
        });
    }
    if w.is_zero() || !sigma.contains_lattice(w) {
        return Err(Error::NotInCone);
    }
    if primitive_of(w)? != *w {
        return Err(Error::NotPrimitive);
    }
    Ok(())
}

fn sign_normalized(m: &LatticeVector) -> LatticeVector {
    let p = primitive_of(m).expect("nonzero");
    if p.coords().iter().find(|x| !x.is_zero()).unwrap().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Tie-breakers of `w` for the refinement by all `m⊥` with `|m|² ≤ diameter_sq`,
/// one per chamber around `w`. Any bound at least `D²` gives valid tie-breakers.
pub fn tie_breakers(sigma: &Cone, w: &LatticeVector, diameter_sq: &Rat) -> Result<Vec<TieBreaker>> {
    check_weight(sigma, w)?;
    let d = sigma.ambient_dim();
    let ball: Vec<LatticeVector> = lattice_ball(d, diameter_sq).into_iter().filter(|m| !m.is_zero()).collect();
    let through: Vec<LatticeVector> = ball
        .iter()
        .filter(|m| m.dot(w).is_zero())
        .map(sign_normalized)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let tight: Vec<LatticeVector> = sigma.facets().iter().filter(|f| f.dot(w).is_zero()).cloned().collect();
    let wr = w.to_rational();
    if through.is_empty() && tight.is_empty() {
        return Ok(vec![TieBreaker {
            weight: w.clone(),
            vector: RationalVector::zero(d),
            chamber_witness: wr,
        }]);
    }

    // split the tangent cone of σ at w, cut by w⊥ and the coordinate orthants,
    // until no hyperplane through w crosses a piece
    let side = sigma.side();
    let eqs = [w.clone()];
    let mut stack = Vec::new();
    for mask in 0..(1usize << d) {
        let mut ineqs = tight.clone();
        for k in 0..d {
            let mut e = vec![0i64; d];
            e[k] = if mask >> k & 1 == 1 { -1 } else { 1 };
            ineqs.push(LatticeVector::from_i64(&e));
        }
        let c = Cone::from_inequalities(side, d, &ineqs, &eqs)?;
        if c.dim() + 1 == d {
            stack.push(c);
        }
    }
    let mut chambers: BTreeMap<Vec<bool>, LatticeVector> = BTreeMap::new();
    while let Some(c) = stack.pop() {
        let cut = through.iter().find(|m| {
            c.rays().iter().any(|r| m.dot(r).is_positive()) && c.rays().iter().any(|r| m.dot(r).is_negative())
        });
        match cut {
            Some(m) => {
                for h in [m.clone(), m.neg()] {
                    let mut ineqs = c.facets().to_vec();
                    ineqs.push(h);
                    let piece = Cone::from_inequalities(side, d, &ineqs, c.equations())?;
                    if piece.dim() + 1 == d {
                        stack.push(piece);
                    }
                }
            }
            None => {
                let x = c.interior_point();
                let signs: Vec<bool> = through.iter().map(|m| m.dot(&x).is_positive()).collect();
                let acc = chambers.entry(signs).or_insert_with(|| LatticeVector::zero(d));
                *acc = acc.add(&x);
            }
        }
    }
    let found: Vec<RationalVector> = chambers.into_values().map(|x| x.to_rational()).collect();

    let mut out = Vec::with_capacity(found.len());
    for b in found {
        let mut delta = Rat::one();
        for m in ball.iter().chain(sigma.facets()) {
            let mw = Rat::from_integer(m.dot(w));
            let mb = m.dot_rat(&b);
            if mw.is_zero() || mb.is_zero() {
                continue;
            }
            let cap = mw.abs() / (Rat::from_integer(Int::from(2)) * mb.abs());
            if cap < delta {
                delta = cap;
            }
        }
        let b = b.scale(&delta);
        out.push(TieBreaker {
            weight: w.clone(),
            chamber_witness: wr.add(&b),
            vector: b,
        });
    }
    out.sort_by(|a, b| a.vector.cmp(&b.vector));
    Ok(out)
}

/// The face of the slice on which the tie-breaker is smallest: `None` when it
/// is unbounded below, otherwise a minimizing vertex and whether it is the
/// only minimizer.
pub fn b_min_vertex(l: &LevelPolyhedron, tb: &TieBreaker) -> Result<Option<(RationalVector, bool)>> {
    if l.weight != tb.weight {
        return Err(Error::LevelMismatch);
    }
    let b = &tb.vector;
    let rec: Vec<Rat> = l.recession_generators.iter().map(|r| r.dot_rat(b)).collect();
    if rec.iter().any(|x| x.is_negative()) {
        return Ok(None);
    }
    let values: Vec<Rat> = l.vertices.iter().map(|v| v.dot(b)).collect();
    let Some(best) = values.iter().min().cloned() else {
        return Ok(None);
    };
    let at_min = values.iter().filter(|v| **v == best).count();
    let pos = values.iter().position(|v| *v == best).unwrap();
    let unique = at_min == 1 && rec.iter().all(|x| x.is_positive());
    Ok(Some((l.vertices[pos].clone(), unique)))
}

fn unique_min_proof(l: &LevelPolyhedron, tb: &TieBreaker, tail: &RationalVector) -> Result<UniqueMinProof> {
    match b_min_vertex(l, tb)? {
        Some((v, true)) if &v == tail => Ok(UniqueMinProof {
            tail_value: tail.dot(&tb.vector),
            other_vertex_values: l.vertices.iter().filter(|x| *x != tail).map(|x| x.dot(&tb.vector)).collect(),
            recession_values: l.recession_generators.iter().map(|r| r.dot_rat(&tb.vector)).collect(),
        }),
        _ => Err(Error::NonUniqueMinimum),
    }
}

/// Lattice translates `tail + z`, `z ∈ ℤᵈ`, of `A_ℝ` at weight value `level`.
fn translate_point(a: &Cone, w: &LatticeVector, tail: &RationalVector, drop: &Int) -> Result<Option<LatticeVector>> {
    let mut cons = Vec::new();
    for g in a.facets() {
        cons.push(Constraint::ge(polyhedron::ratvec(g), -g.dot_rat(tail)));
    }
    cons.push(Constraint::eq(polyhedron::ratvec(w), -Rat::from_integer(drop.clone())));
    polyhedron::integer_point(a.ambient_dim(), &cons)
}

/// Critical arrows with tail at the tie-breaker minimum, at the smallest level
/// where an integral arrow starts there.
pub fn critical_arrows_at(
    sigma: &Cone,
    w: &LatticeVector,
    tb: &TieBreaker,
    search_norm_bound: Option<&Rat>,
) -> Result<Vec<CriticalCertificate>> {
    check_weight(sigma, w)?;
    let a = cone::dual_cone(sigma)?;
    let l1 = level::level_polyhedron(&a, w, &Rat::one())?;
    let p = match b_min_vertex(&l1, tb)? {
        Some((p, true)) => p,
        _ => return Err(Error::NonUniqueMinimum),
    };
    let mu = cone::minimal_face_containing(sigma, &w.to_rational())?;
    if mu.dim() == 1 {
        return Ok(Vec::new());
    }
    let q = QuotientLattice::new(sigma.ambient_dim(), mu.rays())?;
    let r = q.rank();
    let wbar = q.descend_weight(w);
    let pu: Vec<Rat> = mu.rays().iter().map(|u| u.dot_rat(&p)).collect();
    let level_of = |y: &LatticeVector| -> Option<Rat> {
        let v = q.lift(y);
        let mut c = Rat::zero();
        for (u, pu) in mu.rays().iter().zip(&pu) {
            let vu = Rat::from_integer(u.dot(&v));
            if pu.is_zero() {
                if vu.is_negative() {
                    return None;
                }
            } else {
                let need = -vu / pu;
                if need > c {
                    c = need;
                }
            }
        }
        Some(c)
    };
    let candidates = |bound: &Rat| -> Vec<(LatticeVector, Rat)> {
        lattice_ball(r, bound)
            .into_iter()
            .filter(|y| !y.is_zero() && y.dot(&wbar).is_zero())
            .filter_map(|y| level_of(&y).map(|c| (y, c)))
            .collect()
    };
    let pool = match search_norm_bound {
        Some(b) => candidates(b),
        None => {
            let diam = level::project_slice(&l1, &mu)?.diameter_sq();
            let mut radius = Rat::one();
            loop {
                let found = candidates(&radius);
                if let Some(c1) = found.iter().map(|(_, c)| c.clone()).min() {
                    let e2 = &c1 * &c1 * &diam;
                    break if e2 > radius { candidates(&e2) } else { found };
                }
                radius *= Rat::from_integer(Int::from(4));
                if radius > Rat::from_integer(Int::from(1i64 << 40)) {
                    return Err(Error::NoCandidates);
                }
            }
        }
    };
    let Some(cstar) = pool.iter().map(|(_, c)| c.clone()).min() else {
        return Err(Error::NoCandidates);
    };
    if !cstar.is_positive() {
        return Err(Error::Invariant("nonzero arrow direction at level zero".into()));
    }
    let tail = p.scale(&cstar);

    let mut lower = Vec::new();
    let top = cstar.floor().to_integer();
    let mut n = Int::one();
    while n <= top {
        if translate_point(&a, w, &tail, &n)?.is_some() {
            return Ok(Vec::new());
        }
        lower.push(LevelCheck {
            level: &cstar - Rat::from_integer(n.clone()),
            has_point: false,
        });
        n += Int::one();
    }
    let lc = level::scale_level(&l1, &cstar)?;
    let proof = unique_min_proof(&lc, tb, &tail)?;

    let kernel = q.kernel_basis();
    let mut out = Vec::new();
    for (y, c) in pool {
        if c != cstar {
            continue;
        }
        let head0 = tail.add(&q.lift(&y).to_rational());
        let head = if kernel.is_empty() {
            head0
        } else {
            // shift by a kernel lattice vector into A
            let cons: Vec<Constraint> = a
                .facets()
                .iter()
                .map(|g| {
                    let row: Vec<Rat> = kernel.iter().map(|k| Rat::from_integer(g.dot(k))).collect();
                    Constraint::ge(row, -g.dot_rat(&head0))
                })
                .collect();
            let z = polyhedron::integer_point(kernel.len(), &cons)?
                .ok_or_else(|| Error::Invariant("no lattice lift of an arrow head".into()))?;
            let shift = linalg::combine_int(
                &kernel.iter().map(|k| k.coords().to_vec()).collect::<Vec<_>>(),
                z.coords(),
                sigma.ambient_dim(),
            );
            head0.add(&LatticeVector::new(shift).to_rational())
        };
        out.push(CriticalCertificate {
            arrow: Arrow::new(head, tail.clone(), cstar.clone()),
            tie_breaker: tb.clone(),
            level_c: cstar.clone(),
            no_lower_point_proof: lower.clone(),
            unique_min_proof: proof.clone(),
        });
    }
    Ok(out)
}

/// Re-checks the four defining conditions of a critical arrow from scratch.
/// With `diameter_sq` the tie-breaker is also checked against the chambers of
/// the refinement by all `m⊥`, `|m|² ≤ diameter_sq`.
pub fn verify_certificate(sigma: &Cone, cert: &CriticalCertificate, diameter_sq: Option<&Rat>) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidCertificate(m.to_string()));
    let tb = &cert.tie_breaker;
    let w = &tb.weight;
    check_weight(sigma, w).map_err(|e| Error::InvalidCertificate(e.to_string()))?;
    let wr = w.to_rational();
    if !wr.dot(&tb.vector).is_zero() {
        return bad("tie-breaker is not orthogonal to the weight");
    }
    if tb.chamber_witness != wr.add(&tb.vector) {
        return bad("chamber witness differs from weight plus tie-breaker");
    }
    if !sigma.contains_relative_interior(&tb.chamber_witness) {
        return bad("tie-breaker leaves the interior of the cone");
    }
    if let Some(d2) = diameter_sq {
        for m in lattice_ball(sigma.ambient_dim(), d2) {
            let at_w = m.dot(w);
            let at_x = m.dot_rat(&tb.chamber_witness);
            let ok = if at_w.is_zero() {
                !at_x.is_zero()
            } else {
                at_x.signum() == Rat::from_integer(at_w.signum())
            };
            if !m.is_zero() && !ok {
                return bad("tie-breaker crosses a wall of the refinement");
            }
        }
    }

    let arrow = &cert.arrow;
    let c = &cert.level_c;
    if !c.is_positive() {
        return bad("level is not positive");
    }
    if arrow.head == arrow.tail || arrow.vector != arrow.head.sub(&arrow.tail) {
        return bad("malformed arrow");
    }
    // (1)
    if !arrow.vector.is_integral() || !arrow.integral {
        return bad("arrow is not integral");
    }
    // (2)
    let a = cone::dual_cone(sigma)?;
    for x in [&arrow.head, &arrow.tail] {
        if !a.contains(x) || &w.dot_rat(x) != c {
            return bad("arrow end outside the level slice");
        }
    }
    // (3): points congruent to the tail have weight value in c + ℤ
    let top = c.floor().to_integer();
    let mut n = Int::one();
    while n <= top {
        let target = c - Rat::from_integer(n.clone());
        let mut cons: Vec<Constraint> = a
            .facets()
            .iter()
            .map(|g| Constraint::ge(polyhedron::ratvec(g), -g.dot_rat(&arrow.tail)))
            .collect();
        cons.push(Constraint::eq(polyhedron::ratvec(w), &target - w.dot_rat(&arrow.tail)));
        if polyhedron::integer_point(sigma.ambient_dim(), &cons)?.is_some() {
            return bad("an arrow-integral point lies below the level");
        }
        n += Int::one();
    }
    // (4)
    let lc = level::level_polyhedron(&a, w, c)?;
    if lc.recession_generators.iter().any(|r| !r.dot_rat(&tb.vector).is_positive()) {
        return bad("tie-breaker is not bounded below with a unique minimum");
    }
    let tv = arrow.tail.dot(&tb.vector);
    if !lc.vertices.contains(&arrow.tail) {
        return bad("tail is not a vertex of the slice");
    }
    if lc.vertices.iter().any(|v| v != &arrow.tail && v.dot(&tb.vector) <= tv) {
        return bad("tail is not the unique minimum of the tie-breaker");
    }
    Ok(())
}

/// `dim μ − rank{v̄_α}` for the smallest face `μ` of `σ` containing `w`.
pub fn min_cone_dim_bound(sigma: &Cone, w: &LatticeVector, certificates: &[CriticalCertificate]) -> Result<usize> {
    check_weight(sigma, w)?;
    let mu = cone::minimal_face_containing(sigma, &w.to_rational())?;
    let q = QuotientLattice::new(sigma.ambient_dim(), mu.rays())?;
    let mut rows = Vec::new();
    for c in certificates {
        if &c.tie_breaker.weight != w {
            return Err(Error::InvalidCertificate("certificate for another weight".into()));
        }
        if !w.dot_rat(&c.arrow.vector).is_zero() {
            return Err(Error::InvalidCertificate("arrow vector not orthogonal to the weight".into()));
        }
        rows.push(q.project_rat(&c.arrow.vector).into_coords());
    }
    Ok(mu.dim() - linalg::rank_rat(&rows))
}

/// Everything found for one weight.
#[derive(Clone, Debug)]
pub struct ArrowSearch {
    pub tie_breakers: Vec<TieBreaker>,
    pub certificates: Vec<CriticalCertificate>,
    pub dim_bound: usize,
}

/// Runs the search over every tie-breaker, once per distinct minimizing vertex.
pub fn critical_arrows(sigma: &Cone, w: &LatticeVector, diameter_sq: &Rat) -> Result<ArrowSearch> {
    critical_arrows_bounded(sigma, w, diameter_sq, None)
}

/// As [`critical_arrows`], with an optional fixed bound on `|ȳ|²` for the
/// arrow directions instead of the adaptive one.
pub fn critical_arrows_bounded(
    sigma: &Cone,
    w: &LatticeVector,
    diameter_sq: &Rat,
    search_norm_bound: Option<&Rat>,
) -> Result<ArrowSearch> {
    let tbs = tie_breakers(sigma, w, diameter_sq)?;
    let a = cone::dual_cone(sigma)?;
    let l1 = level::level_polyhedron(&a, w, &Rat::one())?;
    let mut seen: BTreeSet<RationalVector> = BTreeSet::new();
    let mut certificates: Vec<CriticalCertificate> = Vec::new();
    for tb in &tbs {
        let Some((p, true)) = b_min_vertex(&l1, tb)? else {
            continue;
        };
        if !seen.insert(p) {
            continue;
        }
        for cert in critical_arrows_at(sigma, w, tb, search_norm_bound)? {
            if !certificates.iter().any(|c| c.arrow == cert.arrow) {
                certificates.push(cert);
            }
        }
    }
    let dim_bound = min_cone_dim_bound(sigma, w, &certificates)?;
    Ok(ArrowSearch {
        tie_breakers: tbs,
        certificates,
        dim_bound,
    })
}
