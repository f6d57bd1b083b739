//! Pointed rational polyhedra through their homogenization, and integer
//! feasibility over them.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::Cone;
use crate::error::Result;
use crate::lattice::{LatticeVector, RationalVector, Side};
use crate::linalg::{self, Int, Rat};
use crate::lp::{self, Constraint, Rel};

/// `conv(vertices) + cone(rays)`.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    pub ambient: usize,
    pub vertices: Vec<RationalVector>,
    pub rays: Vec<LatticeVector>,
}

fn integer_row(coeffs: &[Rat], rhs: &Rat) -> LatticeVector {
    let l = coeffs
        .iter()
        .chain(std::iter::once(rhs))
        .fold(Int::one(), |l, x| l.lcm(x.denom()));
    let lr = Rat::from_integer(l);
    let mut row: Vec<Int> = coeffs.iter().map(|c| (c * &lr).to_integer()).collect();
    row.push(-(rhs * &lr).to_integer());
    LatticeVector::new(row)
}

impl Polyhedron {
    /// Vertices and recession rays of `{x : cons}`; errors when the set contains a line.
    pub fn from_constraints(n: usize, cons: &[Constraint]) -> Result<Polyhedron> {
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for c in cons {
            let row = integer_row(&c.coeffs, &c.rhs);
            match c.rel {
                Rel::Ge => ineqs.push(row),
                Rel::Le => ineqs.push(row.neg()),
                Rel::Eq => eqs.push(row),
            }
        }
        let mut t = vec![Int::zero(); n + 1];
        t[n] = Int::one();
        ineqs.push(LatticeVector::new(t));
        let hom = Cone::from_inequalities(Side::N, n + 1, &ineqs, &eqs)?;
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in hom.rays() {
            let t = &r.coords()[n];
            if t.is_zero() {
                rays.push(LatticeVector::new(r.coords()[..n].to_vec()));
            } else {
                let tr = Rat::from_integer(t.clone());
                vertices.push(RationalVector::new(
                    r.coords()[..n].iter().map(|x| Rat::from_integer(x.clone()) / &tr).collect(),
                ));
            }
        }
        vertices.sort();
        rays.sort();
        Ok(Polyhedron {
            ambient: n,
            vertices,
            rays,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// A box that meets every nonempty set of the form `(P ∩ ℤⁿ)`: any lattice
    /// point can be pushed back by integer multiples of the recession rays.
    pub fn integer_box(&self) -> Option<(Vec<Int>, Vec<Int>)> {
        if self.is_empty() {
            return None;
        }
        let n = self.ambient;
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for k in 0..n {
            let mut a = self.vertices.iter().map(|v| v[k].clone()).min().unwrap();
            let mut b = self.vertices.iter().map(|v| v[k].clone()).max().unwrap();
            for r in &self.rays {
                let x = Rat::from_integer(r[k].clone());
                if x.is_negative() {
                    a += x;
                } else {
                    b += x;
                }
            }
            lo.push(a.floor().to_integer());
            hi.push(b.ceil().to_integer());
        }
        Some((lo, hi))
    }

    /// Squared diameter of `conv(vertices)`.
    pub fn vertex_diameter_sq(&self) -> Rat {
        let mut best = Rat::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let d = a.sub(b).norm_sq();
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

/// The lexicographically least integer point of the polyhedron `{x : cons}`
/// inside its reduction box, if the polyhedron has any integer point at all.
pub fn integer_point(n: usize, cons: &[Constraint]) -> Result<Option<LatticeVector>> {
    let poly = Polyhedron::from_constraints(n, cons)?;
    let Some((lo, hi)) = poly.integer_box() else {
        return Ok(None);
    };
    Ok(lp::lex_min_integer_point(cons, n, &lo, &hi).map(LatticeVector::new))
}

pub(crate) fn ratvec(v: &LatticeVector) -> Vec<Rat> {
    linalg::to_rat(v.coords())
}
