//! `Θ`, the diameter `D`, the refinement `Δ*` and the fan `Δ` obtained by
//! merging chambers with equal `Ξ_w`.
//!
//! Cells of `A_ℝ` are labelled through the coordinates `y_j(x) = (x, v_j)`
//! against the rays `v_j` of `σ`: label `2k` means `y_j = k`, label `2k + 1`
//! means `k < y_j < k + 1`. A cell lies in `A_ℝ + m` exactly when
//! `label_j ≥ 2 y_j(m)` for all `j`, so every translate by a lattice vector is
//! a union of cells.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cone::{self, Bits, Cone};
use crate::error::{Error, Result};
use crate::fan::{self, Fan};
use crate::lattice::{lattice_ball, primitive_of, LatticeVector, RationalVector, Side};
use crate::linalg::{self, Int, Rat};
use crate::lp::{self, Constraint};
use crate::monoid::{hilbert_basis, HilbertBasis};

/// Default cap on label vectors and on chambers.
pub const DEFAULT_CELL_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct ThetaData {
    pub dual: Cone,
    pub hilbert_a: HilbertBasis,
    /// The rays `v_j` of `σ`, i.e. the facet normals of `A_ℝ`.
    pub sigma_rays: Vec<LatticeVector>,
    /// `K_j`; every point of `A_ℝ ∖ Θ` has `y_j < K_j`.
    pub label_bounds: Vec<i64>,
    /// Labels of the cells of `A_ℝ ∖ Θ`, sorted.
    pub complement_cells: Vec<Vec<i64>>,
    /// Vertices of the closure of `A_ℝ ∖ Θ`.
    pub complement_vertices: Vec<RationalVector>,
    pub diameter_sq: Rat,
    pub m_le_d: Vec<LatticeVector>,
    /// Vectors `m` of `M_{≤D}` whose translate meets `A_ℝ ∖ Θ`, with the cells it covers.
    relevant: Vec<(LatticeVector, Bits)>,
}

fn small(x: &Int) -> Result<i64> {
    x.to_i64()
        .ok_or(Error::BudgetExceeded { needed: usize::MAX, budget: i64::MAX as usize })
}

fn floor_label(y: &Rat) -> i64 {
    let f = y.floor();
    let k = f.to_integer().to_i64().unwrap_or(i64::MAX / 4);
    if &f == y {
        2 * k
    } else {
        2 * k + 1
    }
}

impl ThetaData {
    fn y_values(&self, x: &LatticeVector) -> Vec<Int> {
        self.sigma_rays.iter().map(|v| v.dot(x)).collect()
    }

    /// Label of the cell containing `x`, if `x ∈ A_ℝ ∖ Θ`.
    pub fn cell_of(&self, x: &RationalVector) -> Option<usize> {
        let labels: Vec<i64> = self.sigma_rays.iter().map(|v| floor_label(&v.dot_rat(x))).collect();
        self.complement_cells.binary_search(&labels).ok()
    }

    pub fn in_theta(&self, x: &RationalVector) -> bool {
        self.hilbert_a
            .elements()
            .iter()
            .any(|a| self.dual.contains(&x.sub(&a.to_rational())))
    }

    /// The elements of `M_{≤D}` that can change `Ξ_w`.
    pub fn relevant_vectors(&self) -> Vec<LatticeVector> {
        self.relevant.iter().map(|(m, _)| m.clone()).collect()
    }

    /// Cells of `A_ℝ ∖ Θ` inside `A_ℝ + m`.
    pub fn covered_by(&self, m: &LatticeVector) -> Vec<usize> {
        let y = self.y_values(m);
        (0..self.complement_cells.len())
            .filter(|&c| {
                self.complement_cells[c]
                    .iter()
                    .zip(&y)
                    .all(|(l, y)| Int::from(*l) >= Int::from(2) * y)
            })
            .collect()
    }

    /// Bounding box of `A_ℝ ∖ Θ`.
    pub fn window(&self) -> (Vec<Rat>, Vec<Rat>) {
        let d = self.dual.ambient_dim();
        let mut lo = vec![Rat::zero(); d];
        let mut hi = vec![Rat::zero(); d];
        for v in &self.complement_vertices {
            for k in 0..d {
                if v[k] < lo[k] {
                    lo[k] = v[k].clone();
                }
                if v[k] > hi[k] {
                    hi[k] = v[k].clone();
                }
            }
        }
        (lo, hi)
    }
}

pub fn theta_and_diameter(a: &Cone) -> Result<ThetaData> {
    theta_with_budget(a, DEFAULT_CELL_BUDGET)
}

pub fn theta_with_budget(a: &Cone, budget: usize) -> Result<ThetaData> {
    if !a.is_full_dimensional() {
        return Err(Error::Degenerate);
    }
    let d = a.ambient_dim();
    let hb = hilbert_basis(a)?;
    let vs: Vec<LatticeVector> = a.facets().to_vec();
    let n = vs.len();
    let mut bounds = Vec::with_capacity(n);
    for v in &vs {
        let k: Int = a.rays().iter().map(|g| g.dot(v)).sum();
        bounds.push(small(&k)?);
    }
    let total = bounds
        .iter()
        .try_fold(1usize, |acc, k| acc.checked_mul(2 * *k as usize))
        .unwrap_or(usize::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let hy: Vec<Vec<i64>> = hb
        .elements()
        .iter()
        .map(|h| vs.iter().map(|v| small(&v.dot(h))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let cells: Vec<Vec<i64>> = realizable_labels(&vs, &bounds, d)
        .into_iter()
        .filter(|label| hy.iter().all(|y| label.iter().zip(y).any(|(l, y)| *l < 2 * y)))
        .collect();
    let mut cells = cells;
    cells.sort();
    let cell_set: HashSet<Vec<i64>> = cells.iter().cloned().collect();

    let vertices = complement_vertices(&vs, &bounds, &cell_set, d);
    let mut diameter_sq = Rat::zero();
    for (i, p) in vertices.iter().enumerate() {
        for q in &vertices[i + 1..] {
            let dd = p.sub(q).norm_sq();
            if dd > diameter_sq {
                diameter_sq = dd;
            }
        }
    }
    let m_le_d = lattice_ball(d, &diameter_sq);

    let mut relevant = Vec::new();
    for m in &m_le_d {
        if m.is_zero() {
            continue;
        }
        let y: Vec<Int> = vs.iter().map(|v| v.dot(m)).collect();
        if y.iter().zip(&bounds).any(|(y, k)| y >= &Int::from(*k)) {
            continue;
        }
        let y: Vec<i64> = y.iter().map(|x| x.to_i64().expect("bounded above and below")).collect();
        let mut bits = Bits::new(cells.len());
        let mut any = false;
        for (c, l) in cells.iter().enumerate() {
            if l.iter().zip(&y).all(|(l, y)| *l >= 2 * y) {
                bits.set(c);
                any = true;
            }
        }
        if any {
            relevant.push((m.clone(), bits));
        }
    }

    Ok(ThetaData {
        dual: a.clone(),
        hilbert_a: hb,
        sigma_rays: vs,
        label_bounds: bounds,
        complement_cells: cells,
        complement_vertices: vertices,
        diameter_sq,
        m_le_d,
        relevant,
    })
}

/// Every label vector in `Π [0, 2K_j)` met by some `x`. Labels are free on a
/// basis `S` of the rays; each other `y_j` is affine in `y_S`, so its range
/// over a box cell is a point or an open interval.
fn realizable_labels(vs: &[LatticeVector], bounds: &[i64], d: usize) -> Vec<Vec<i64>> {
    let n = vs.len();
    let basis = cone::combinations(n, d)
        .into_iter()
        .find(|s| linalg::rank_rat(&s.iter().map(|&j| linalg::to_rat(vs[j].coords())).collect::<Vec<_>>()) == d)
        .expect("full-dimensional cone");
    let others: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
    let cols: Vec<Vec<Rat>> = linalg::transpose(
        &basis.iter().map(|&k| linalg::to_rat(vs[k].coords())).collect::<Vec<_>>(),
        d,
    );
    let coeffs: Vec<Vec<Rat>> = others
        .iter()
        .map(|&j| linalg::solve_rat(&cols, &linalg::to_rat(vs[j].coords()), d).expect("basis spans"))
        .collect();

    let mut out = Vec::new();
    let mut lb = vec![0i64; d];
    loop {
        let mut options: Vec<Vec<i64>> = Vec::with_capacity(others.len());
        for (c, &j) in coeffs.iter().zip(&others) {
            let (mut lo, mut hi, mut open) = (Rat::zero(), Rat::zero(), false);
            for (ck, &l) in c.iter().zip(&lb) {
                if ck.is_zero() {
                    continue;
                }
                let a = Rat::from_integer(Int::from(l.div_euclid(2)));
                let b = if l % 2 == 1 { open = true; &a + Rat::one() } else { a.clone() };
                if ck.is_positive() {
                    lo += ck * &a;
                    hi += ck * &b;
                } else {
                    lo += ck * &b;
                    hi += ck * &a;
                }
            }
            let opts: Vec<i64> = (0..2 * bounds[j])
                .filter(|&l| {
                    let k = Rat::from_integer(Int::from(l.div_euclid(2)));
                    match (open, l % 2 == 1) {
                        (false, _) => floor_label(&lo) == l,
                        (true, false) => lo < k && k < hi,
                        (true, true) => k < hi && &k + Rat::one() > lo,
                    }
                })
                .collect();
            options.push(opts);
        }
        if options.iter().all(|o| !o.is_empty()) {
            let mut idx = vec![0usize; others.len()];
            loop {
                let mut label = vec![0i64; n];
                for (&k, &l) in basis.iter().zip(&lb) {
                    label[k] = l;
                }
                for ((&j, o), &i) in others.iter().zip(&options).zip(&idx) {
                    label[j] = o[i];
                }
                // one dependent coordinate is decided by its range alone
                if others.len() <= 1 || realizable(vs, &label, d) {
                    out.push(label);
                }
                let mut t = 0;
                while t < idx.len() {
                    idx[t] += 1;
                    if idx[t] < options[t].len() {
                        break;
                    }
                    idx[t] = 0;
                    t += 1;
                }
                if t == idx.len() {
                    break;
                }
            }
        }
        let mut k = 0;
        while k < d {
            lb[k] += 1;
            if lb[k] < 2 * bounds[basis[k]] {
                break;
            }
            lb[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    out
}

/// Whether some `x` realizes the label vector.
fn realizable(vs: &[LatticeVector], label: &[i64], d: usize) -> bool {
    let mut cons = Vec::new();
    let mut has_open = false;
    for (v, &l) in vs.iter().zip(label) {
        let mut row = linalg::to_rat(v.coords());
        let k = Rat::from_integer(Int::from(l.div_euclid(2)));
        if l % 2 == 0 {
            row.push(Rat::zero());
            cons.push(Constraint::eq(row, k));
        } else {
            has_open = true;
            let mut lower = row.clone();
            lower.push(-Rat::one());
            cons.push(Constraint::ge(lower, k.clone()));
            let mut upper: Vec<Rat> = row.iter().map(|x| -x).collect();
            upper.push(-Rat::one());
            cons.push(Constraint::ge(upper, -(k + Rat::one())));
        }
    }
    let mut t = vec![Rat::zero(); d + 1];
    t[d] = Rat::one();
    cons.push(Constraint::le(t.clone(), Rat::one()));
    if !has_open {
        return lp::feasible(&cons, d + 1).is_some();
    }
    match lp::maximize(&t, &cons, d + 1).optimal() {
        Some((v, _)) => v.is_positive(),
        None => false,
    }
}

/// Points where `d` independent hyperplanes `y_j = k` meet, kept when they
/// lie in the closure of a complement cell.
fn complement_vertices(vs: &[LatticeVector], bounds: &[i64], cells: &HashSet<Vec<i64>>, d: usize) -> Vec<RationalVector> {
    let n = vs.len();
    let mut out: BTreeSet<RationalVector> = BTreeSet::new();
    for subset in cone::combinations(n, d) {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&j| linalg::to_rat(vs[j].coords())).collect();
        if linalg::rank_rat(&rows) < d {
            continue;
        }
        let mut k = vec![0i64; d];
        loop {
            let rhs: Vec<Rat> = k.iter().map(|&x| Rat::from_integer(Int::from(x))).collect();
            let x = RationalVector::new(linalg::solve_rat(&rows, &rhs, d).expect("independent rows"));
            let ys: Vec<Rat> = vs.iter().map(|v| v.dot_rat(&x)).collect();
            let inside = ys
                .iter()
                .zip(bounds)
                .all(|(y, k)| !y.is_negative() && *y <= Rat::from_integer(Int::from(*k)));
            if inside && !out.contains(&x) {
                let pi: Vec<i64> = ys.iter().map(floor_label).collect();
                if closure_meets(&pi, bounds, cells) {
                    out.insert(x);
                }
            }
            let mut i = 0;
            while i < d {
                k[i] += 1;
                if k[i] <= bounds[subset[i]] {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    out.into_iter().collect()
}

/// Whether the point with label `pi` lies in the closure of a listed cell.
fn closure_meets(pi: &[i64], bounds: &[i64], cells: &HashSet<Vec<i64>>) -> bool {
    let options: Vec<Vec<i64>> = pi
        .iter()
        .zip(bounds)
        .map(|(&p, &k)| {
            if p % 2 == 1 {
                vec![p]
            } else {
                [p - 1, p, p + 1]
                    .into_iter()
                    .filter(|&l| l >= 0 && l < 2 * k)
                    .collect()
            }
        })
        .collect();
    if options.iter().any(|o| o.is_empty()) {
        return false;
    }
    let mut idx = vec![0usize; pi.len()];
    loop {
        let l: Vec<i64> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
        if cells.contains(&l) {
            return true;
        }
        let mut j = 0;
        while j < idx.len() {
            idx[j] += 1;
            if idx[j] < options[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == idx.len() {
            return false;
        }
    }
}

/// Primitive normals of hyperplanes `m⊥` cutting through the interior of
/// `sigma`, one per hyperplane.
pub fn cutting_hyperplanes(sigma: &Cone, ms: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut out: BTreeSet<LatticeVector> = BTreeSet::new();
    for m in ms {
        if m.is_zero() {
            continue;
        }
        let p = primitive_of(m).expect("nonzero");
        let p = if p.coords().iter().find(|x| !x.is_zero()).unwrap().is_negative() {
            p.neg()
        } else {
            p
        };
        let pos = sigma.rays().iter().any(|r| p.dot(r).is_positive());
        let neg = sigma.rays().iter().any(|r| p.dot(r).is_negative());
        if pos && neg {
            out.insert(p);
        }
    }
    out.into_iter().collect()
}

/// Full-dimensional cells of `sigma` cut by the hyperplanes.
pub fn arrangement_chambers(sigma: &Cone, hyperplanes: &[LatticeVector], budget: usize) -> Result<Vec<Cone>> {
    let d = sigma.ambient_dim();
    let mut chambers = vec![sigma.clone()];
    for h in hyperplanes {
        let next: Vec<Result<Vec<Cone>>> = chambers
            .par_iter()
            .map(|c| {
                let pos = c.rays().iter().any(|r| h.dot(r).is_positive());
                let neg = c.rays().iter().any(|r| h.dot(r).is_negative());
                if !(pos && neg) {
                    return Ok(vec![c.clone()]);
                }
                let mut f = c.facets().to_vec();
                f.push(h.clone());
                let plus = Cone::from_inequalities(Side::N, d, &f, &[])?;
                f.pop();
                f.push(h.neg());
                let minus = Cone::from_inequalities(Side::N, d, &f, &[])?;
                Ok(vec![plus, minus])
            })
            .collect();
        let mut flat = Vec::with_capacity(chambers.len() * 2);
        for r in next {
            flat.extend(r?);
        }
        if flat.len() > budget {
            return Err(Error::BudgetExceeded { needed: flat.len(), budget });
        }
        chambers = flat;
    }
    Ok(chambers)
}

/// The refinement of `sigma` by all hyperplanes `m⊥`, `m ∈ m_le_d`.
pub fn delta_star(sigma: &Cone, m_le_d: &[LatticeVector]) -> Result<Fan> {
    let hyps = cutting_hyperplanes(sigma, m_le_d);
    let chambers = arrangement_chambers(sigma, &hyps, DEFAULT_CELL_BUDGET)?;
    Ok(Fan::from_full_dimensional(Side::N, sigma.ambient_dim(), chambers).with_support(sigma.clone()))
}

/// `Ξ_w ∖ Θ` as a set of complement cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiFingerprint {
    /// The vectors of `M_{≤D}` that can matter and are positive on `w`.
    pub positive_set: Vec<LatticeVector>,
    pub covered_cells: Vec<usize>,
}

fn fingerprint_bits(theta: &ThetaData, w: &RationalVector) -> Result<Bits> {
    let mut bits = Bits::new(theta.complement_cells.len());
    for (m, cover) in &theta.relevant {
        let s = m.dot_rat(w);
        if s.is_zero() {
            return Err(Error::NonGeneral(m.to_string()));
        }
        if s.is_positive() {
            bits.or_assign(cover);
        }
    }
    Ok(bits)
}

pub fn xi_fingerprint(w: &RationalVector, theta: &ThetaData) -> Result<XiFingerprint> {
    let bits = fingerprint_bits(theta, w)?;
    Ok(XiFingerprint {
        positive_set: theta
            .relevant
            .iter()
            .filter(|(m, _)| m.dot_rat(w).is_positive())
            .map(|(m, _)| m.clone())
            .collect(),
        covered_cells: bits.ones().filter(|&c| c < theta.complement_cells.len()).collect(),
    })
}

/// `Ξ_w ∩ (1/l)M` inside a box, by direct testing of every grid point.
pub fn xi_grid_oracle(theta: &ThetaData, w: &RationalVector, l: u32, lo: &[Rat], hi: &[Rat]) -> Result<Vec<RationalVector>> {
    if let Some(m) = theta.m_le_d.iter().find(|m| !m.is_zero() && m.dot_rat(w).is_zero()) {
        return Err(Error::NonGeneral(m.to_string()));
    }
    let lr = Rat::from_integer(Int::from(l));
    let zlo: Vec<Int> = lo.iter().map(|x| (x * &lr).ceil().to_integer()).collect();
    let zhi: Vec<Int> = hi.iter().map(|x| (x * &lr).floor().to_integer()).collect();
    // everything is compared through the integers (l·x, v_j)
    let li = Int::from(l);
    let scaled = |m: &LatticeVector| -> Vec<Int> { theta.y_values(m).into_iter().map(|y| y * &li).collect() };
    let shifts: Vec<Vec<Int>> = theta
        .hilbert_a
        .elements()
        .iter()
        .chain(theta.m_le_d.iter().filter(|m| m.dot_rat(w).is_positive()))
        .map(scaled)
        .collect();
    let mut out = Vec::new();
    for z in crate::lattice::box_points(&zlo, &zhi) {
        let y: Vec<Int> = theta.sigma_rays.iter().map(|v| linalg::dot_int(v.coords(), &z)).collect();
        if y.iter().any(|t| t.is_negative()) {
            continue;
        }
        if shifts.iter().any(|s| y.iter().zip(s).all(|(a, b)| a >= b)) {
            out.push(RationalVector::new(z.iter().map(|c| Rat::from_integer(c.clone()) / &lr).collect()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DeltaFan {
    pub fan: Fan,
    pub theta: ThetaData,
    pub hyperplanes: usize,
    pub chambers: usize,
    pub distinct_fingerprints: usize,
}

pub fn delta_fan(sigma: &Cone) -> Result<DeltaFan> {
    delta_fan_with_budget(sigma, DEFAULT_CELL_BUDGET)
}

/// Splits `sigma` by relevant hyperplanes until `Ξ_w` is constant on every
/// piece, then merges pieces with equal `Ξ_w`; each merged group must be a
/// convex cone.
pub fn delta_fan_with_budget(sigma: &Cone, budget: usize) -> Result<DeltaFan> {
    if !sigma.is_full_dimensional() {
        return Err(Error::Degenerate);
    }
    let a = cone::dual_cone(sigma)?;
    let theta = theta_with_budget(&a, budget)?;
    let d = sigma.ambient_dim();
    let ncells = theta.complement_cells.len();

    let mut pieces: Vec<(Cone, Bits)> = Vec::new();
    let mut used: BTreeSet<LatticeVector> = BTreeSet::new();
    let mut stack = vec![sigma.clone()];
    while let Some(c) = stack.pop() {
        // `lower` collects translates positive on all of c, `upper` those positive somewhere
        let mut lower = Bits::new(ncells);
        let mut upper = Bits::new(ncells);
        let mut cutting = Vec::new();
        for (i, (m, cover)) in theta.relevant.iter().enumerate() {
            let pos = c.rays().iter().any(|r| m.dot(r).is_positive());
            let neg = c.rays().iter().any(|r| m.dot(r).is_negative());
            if pos {
                upper.or_assign(cover);
                if neg {
                    cutting.push(i);
                } else {
                    lower.or_assign(cover);
                }
            }
        }
        if lower == upper {
            pieces.push((c, lower));
        } else {
            let i = *cutting
                .iter()
                .find(|&&i| !lower.contains_all(&theta.relevant[i].1))
                .expect("a cutting translate accounts for the difference");
            let h = primitive_of(&theta.relevant[i].0)?;
            used.insert(if h < h.neg() { h.neg() } else { h.clone() });
            let mut f = c.facets().to_vec();
            f.push(h.clone());
            stack.push(Cone::from_inequalities(Side::N, d, &f, &[])?);
            f.pop();
            f.push(h.neg());
            stack.push(Cone::from_inequalities(Side::N, d, &f, &[])?);
        }
        if pieces.len() + stack.len() > budget {
            return Err(Error::BudgetExceeded {
                needed: pieces.len() + stack.len(),
                budget,
            });
        }
    }

    let mut groups: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, (_, bits)) in pieces.iter().enumerate() {
        groups.entry(bits.0.clone()).or_default().push(i);
    }
    let ell = sigma.facet_sum();
    let hulls: Vec<Result<Cone>> = groups
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|members| {
            let gens: Vec<LatticeVector> = members.iter().flat_map(|&i| pieces[i].0.rays().to_vec()).collect();
            let hull = Cone::from_generators(Side::N, d, &gens)?;
            let parts: Rat = members.iter().map(|&i| pieces[i].0.volume(&ell)).sum();
            if hull.volume(&ell) != parts {
                return Err(Error::Invariant(format!(
                    "pieces with equal fingerprints do not form a convex cone (hull {hull:?})"
                )));
            }
            Ok(hull)
        })
        .collect();
    let cones = hulls.into_iter().collect::<Result<Vec<_>>>()?;
    let distinct = cones.len();
    let out = Fan::new(Side::N, d, cones)?.with_support(sigma.clone());
    fan::check_subdivision(&out, sigma).map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(DeltaFan {
        fan: out,
        theta,
        hyperplanes: used.len(),
        chambers: pieces.len(),
        distinct_fingerprints: distinct,
    })
}
