//! Exact dense linear algebra over `BigInt` and `BigRational`.
//!
//! Matrices are plain row-major `Vec<Vec<_>>`; every routine here is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_of(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairing of an integer vector with a rational vector.
pub fn dot_int_rat(a: &[Int], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, y)| y * x)
        .sum()
}

pub fn to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(rat_of).collect()
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides by the content; the zero vector is returned unchanged.
pub fn make_primitive(v: &[Int]) -> Vec<Int> {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators of a rational vector and returns the primitive
/// integer vector on the same ray.
pub fn primitive_from_rat(v: &[Rat]) -> Vec<Int> {
    let l = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<Int> = v.iter().map(|x| (x * rat_of(&l)).to_integer()).collect();
    make_primitive(&scaled)
}

pub fn is_zero_int(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn norm_sq_int(v: &[Int]) -> Int {
    v.iter().map(|x| x * x).sum()
}

pub fn norm_sq_rat(v: &[Rat]) -> Rat {
    v.iter().map(|x| x * x).sum()
}

pub fn sub_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_rat(v: &[Rat], c: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x * c).collect()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Row echelon form by Gaussian elimination; returns the reduced rows and
/// pivot columns.
fn echelon(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    match rows.first() {
        None => 0,
        Some(r0) => echelon(rows, r0.len()).1.len(),
    }
}

pub fn rank_int(rows: &[Vec<Int>]) -> usize {
    let r: Vec<Vec<Rat>> = rows.iter().map(|v| to_rat(v)).collect();
    rank_rat(&r)
}

/// Solves `A x = b` for some `x`; `None` when inconsistent. Free variables
/// are set to zero.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = echelon(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &c) in m.iter().zip(&pivots) {
        x[c] = row[ncols].clone();
    }
    Some(x)
}

/// Determinant of a square integer matrix (Bareiss fraction-free elimination).
pub fn det_int(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &a[c][j] * &f;
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Unimodular column reduction `A U = [H | 0]`.
#[derive(Clone, Debug)]
pub struct ColumnHermite {
    /// Rank of `A`; columns `rank..n` of `transform` span the integer kernel.
    pub rank: usize,
    /// Unimodular `n × n` matrix `U` (row-major).
    pub transform: Vec<Vec<Int>>,
    /// `U⁻¹`.
    pub inverse: Vec<Vec<Int>>,
}

fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Column-style Hermite reduction of an integer matrix with `ncols` columns.
pub fn column_hermite(a: &[Vec<Int>], ncols: usize) -> ColumnHermite {
    let n = ncols;
    let mut m: Vec<Vec<Int>> = a.to_vec();
    let mut u: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut uinv = u.clone();
    let mut piv = 0;
    for row in 0..m.len() {
        if piv == n {
            break;
        }
        for q in piv + 1..n {
            let b = m[row][q].clone();
            if b.is_zero() {
                continue;
            }
            let a = m[row][piv].clone();
            let (g, s, t) = ext_gcd(&a, &b);
            let bg = &b / &g;
            let ag = &a / &g;
            // new_p = s*col_p + t*col_q ; new_q = -(b/g)*col_p + (a/g)*col_q
            for r in m.iter_mut() {
                let (cp, cq) = (r[piv].clone(), r[q].clone());
                r[piv] = &s * &cp + &t * &cq;
                r[q] = -&bg * &cp + &ag * &cq;
            }
            for r in u.iter_mut() {
                let (cp, cq) = (r[piv].clone(), r[q].clone());
                r[piv] = &s * &cp + &t * &cq;
                r[q] = -&bg * &cp + &ag * &cq;
            }
            // inverse rows: new_p = (a/g) row_p + (b/g) row_q ; new_q = -t row_p + s row_q
            let (rp, rq) = (uinv[piv].clone(), uinv[q].clone());
            uinv[piv] = rp.iter().zip(&rq).map(|(x, y)| &ag * x + &bg * y).collect();
            uinv[q] = rp.iter().zip(&rq).map(|(x, y)| -&t * x + &s * y).collect();
        }
        if !m[row][piv].is_zero() {
            piv += 1;
        }
    }
    ColumnHermite {
        rank: piv,
        transform: u,
        inverse: uinv,
    }
}

/// Basis of the saturated integer kernel `{x ∈ ℤⁿ : A x = 0}`.
pub fn integer_kernel(a: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let h = column_hermite(a, ncols);
    (h.rank..ncols)
        .map(|c| h.transform.iter().map(|row| row[c].clone()).collect())
        .collect()
}

/// Basis of the lattice `span(rows) ∩ ℤⁿ` (saturated).
pub fn saturated_span(rows: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let eqs = integer_kernel(rows, ncols);
    integer_kernel(&eqs, ncols)
}

pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// `Σ coeffs[i] · rows[i]` for integer rows.
pub fn combine_int(rows: &[Vec<Int>], coeffs: &[Int], ncols: usize) -> Vec<Int> {
    let mut out = vec![Int::zero(); ncols];
    for (r, c) in rows.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(r) {
            *o += c * x;
        }
    }
    out
}

pub fn combine_rat(rows: &[Vec<Int>], coeffs: &[Rat], ncols: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); ncols];
    for (r, c) in rows.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(r) {
            if !x.is_zero() {
                *o += c * rat_of(x);
            }
        }
    }
    out
}

/// Matrix-vector product of an integer matrix with a rational vector.
pub fn mat_vec_rat(m: &[Vec<Int>], v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| dot_int_rat(row, v)).collect()
}

pub fn mat_vec_int(m: &[Vec<Int>], v: &[Int]) -> Vec<Int> {
    m.iter().map(|row| dot_int(row, v)).collect()
}

/// Integer square root rounded down.
pub fn isqrt_floor(r: &Rat) -> Int {
    if !r.is_positive() {
        return Int::zero();
    }
    let f = r.floor().to_integer();
    num_integer::Roots::sqrt(&f)
}

pub fn sign(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
