//! The dual lattices `M` and `N`, identified with `ℤᵈ` through a fixed basis,
//! together with their pairing, quotients and bounded enumeration.

use std::fmt;
use std::ops::Deref;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Int, Rat};

/// Which of the two dual lattices a vector or cone lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// The character lattice `M` (the side of `σ∨`).
    M,
    /// The cocharacter lattice `N` (the side of `σ`).
    N,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::M => Side::N,
            Side::N => Side::M,
        }
    }
}

/// An integer vector of `M` or `N` in the fixed basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<Int>);

/// A rational point of `M_ℝ` or `N_ℝ`; `BigRational` keeps every entry reduced
/// with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVector(Vec<Rat>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![Int::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Int> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_int(&self.0)
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(linalg::to_rat(&self.0))
    }

    pub fn norm_sq(&self) -> Int {
        linalg::norm_sq_int(&self.0)
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Int) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Integer pairing `(self, other)`; panics on a length mismatch.
    pub fn dot(&self, other: &LatticeVector) -> Int {
        linalg::dot_int(&self.0, &other.0)
    }

    pub fn dot_rat(&self, other: &RationalVector) -> Rat {
        linalg::dot_int_rat(&self.0, &other.0)
    }
}

impl RationalVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RationalVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        RationalVector(vec![Rat::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        linalg::is_integral(&self.0)
    }

    /// The integer vector, when every coordinate is an integer.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.is_integral()
            .then(|| LatticeVector(self.0.iter().map(|x| x.to_integer()).collect()))
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector(linalg::add_rat(&self.0, &other.0))
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(linalg::sub_rat(&self.0, &other.0))
    }

    pub fn scale(&self, c: &Rat) -> RationalVector {
        RationalVector(linalg::scale_rat(&self.0, c))
    }

    pub fn dot(&self, other: &RationalVector) -> Rat {
        linalg::dot_rat(&self.0, &other.0)
    }

    pub fn norm_sq(&self) -> Rat {
        linalg::norm_sq_rat(&self.0)
    }
}

impl Deref for LatticeVector {
    type Target = [Int];
    fn deref(&self) -> &[Int] {
        &self.0
    }
}

impl Deref for RationalVector {
    type Target = [Rat];
    fn deref(&self) -> &[Rat] {
        &self.0
    }
}

impl From<Vec<Int>> for LatticeVector {
    fn from(v: Vec<Int>) -> Self {
        LatticeVector(v)
    }
}

impl From<Vec<Rat>> for RationalVector {
    fn from(v: Vec<Rat>) -> Self {
        RationalVector(v)
    }
}

impl From<&LatticeVector> for RationalVector {
    fn from(v: &LatticeVector) -> Self {
        v.to_rational()
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// The natural pairing `(a, w)` of `a ∈ M_ℝ` with `w ∈ N_ℝ`.
pub fn pairing(a: &RationalVector, w: &RationalVector) -> Result<Rat> {
    check_dims(a.dim(), w.dim())?;
    Ok(a.dot(w))
}

/// Divides `v` by the gcd of its coordinates.
pub fn primitive_of(v: &LatticeVector) -> Result<LatticeVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticeVector(linalg::make_primitive(&v.0)))
}

/// `M̄ = M / (μ⊥ ∩ M)` for a linear subspace `⟨μ⟩ ⊂ N_ℝ`, with `M̄ ≅ ℤʳ`.
#[derive(Clone, Debug)]
pub struct QuotientLattice {
    ambient: usize,
    /// Basis of the saturated sublattice `μ⊥ ∩ M`.
    kernel_basis: Vec<LatticeVector>,
    /// `r × d` integer matrix sending `M` onto `ℤʳ`.
    projection: Vec<Vec<Int>>,
    /// `d × r` integer matrix choosing a lift of each class.
    section: Vec<Vec<Int>>,
}

impl QuotientLattice {
    /// Builds the quotient for the subspace spanned by `mu_generators ⊂ N`.
    pub fn new(ambient: usize, mu_generators: &[LatticeVector]) -> Result<Self> {
        for g in mu_generators {
            check_dims(ambient, g.dim())?;
        }
        let rows: Vec<Vec<Int>> = mu_generators.iter().map(|g| g.0.clone()).collect();
        let h = linalg::column_hermite(&rows, ambient);
        let r = h.rank;
        if r == ambient {
            let id: Vec<Vec<Int>> = (0..ambient)
                .map(|i| (0..ambient).map(|j| Int::from((i == j) as i64)).collect())
                .collect();
            return Ok(QuotientLattice {
                ambient,
                kernel_basis: Vec::new(),
                projection: id.clone(),
                section: id,
            });
        }
        let kernel_basis = (r..ambient)
            .map(|c| LatticeVector(h.transform.iter().map(|row| row[c].clone()).collect()))
            .collect();
        let projection = h.inverse[..r].to_vec();
        let section = h.transform.iter().map(|row| row[..r].to_vec()).collect();
        Ok(QuotientLattice {
            ambient,
            kernel_basis,
            projection,
            section,
        })
    }

    /// The quotient by the zero subspace of `N` is trivial; by all of `N` it is `M`.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.projection.len()
    }

    pub fn kernel_basis(&self) -> &[LatticeVector] {
        &self.kernel_basis
    }

    pub fn project(&self, x: &LatticeVector) -> LatticeVector {
        LatticeVector(linalg::mat_vec_int(&self.projection, &x.0))
    }

    pub fn project_rat(&self, x: &RationalVector) -> RationalVector {
        RationalVector(linalg::mat_vec_rat(&self.projection, &x.0))
    }

    pub fn lift(&self, y: &LatticeVector) -> LatticeVector {
        LatticeVector(linalg::mat_vec_int(&self.section, &y.0))
    }

    pub fn lift_rat(&self, y: &RationalVector) -> RationalVector {
        RationalVector(linalg::mat_vec_rat(&self.section, &y.0))
    }

    /// A vector `w ∈ ⟨μ⟩ ⊂ N` as a linear form on `M̄`, in quotient coordinates.
    pub fn descend_weight(&self, w: &LatticeVector) -> LatticeVector {
        let st = linalg::transpose(&self.section, self.rank());
        LatticeVector(linalg::mat_vec_int(&st, &w.0))
    }
}

/// All `m ∈ M` with `|m|² ≤ radius_sq`, sorted lexicographically.
pub fn lattice_ball(dim: usize, radius_sq: &Rat) -> Vec<LatticeVector> {
    if radius_sq.is_negative() {
        return Vec::new();
    }
    let bound = linalg::isqrt_floor(radius_sq);
    let limit = radius_sq.floor().to_integer();
    let mut out = Vec::new();
    let mut cur = vec![-bound.clone(); dim];
    if dim == 0 {
        return vec![LatticeVector(Vec::new())];
    }
    loop {
        if linalg::norm_sq_int(&cur) <= limit {
            out.push(LatticeVector(cur.clone()));
        }
        // odometer increment
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < bound {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -bound.clone();
                }
                break;
            }
        }
    }
}

/// Enumerates the integer points of the box `∏ [lo_i, hi_i]` in lexicographic order.
pub(crate) fn box_points(lo: &[Int], hi: &[Int]) -> Vec<Vec<Int>> {
    let dim = lo.len();
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    loop {
        out.push(cur.clone());
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                for (j, c) in cur.iter_mut().enumerate().skip(i + 1) {
                    *c = lo[j].clone();
                }
                break;
            }
        }
    }
}
