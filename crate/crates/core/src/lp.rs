//! Exact linear programming over `BigRational` (two-phase simplex with
//! Bland's rule) and a small lexicographic integer feasibility search.

use num_traits::{One, Signed, Zero};

use crate::linalg::{Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// `coeffs · x  rel  rhs`; every variable is free.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Rel, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn ge(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Self::new(coeffs, Rel::Ge, rhs)
    }

    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Self::new(coeffs, Rel::Le, rhs)
    }

    pub fn eq(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Self::new(coeffs, Rel::Eq, rhs)
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        let lhs: Rat = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.rel {
            Rel::Le => lhs <= self.rhs,
            Rel::Ge => lhs >= self.rhs,
            Rel::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn optimal(self) -> Option<(Rat, Vec<Rat>)> {
        match self {
            LpResult::Optimal { value, x } => Some((value, x)),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, obj: &mut [Rat], r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let t = &prow[j] * &f;
                row[j] -= t;
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &j in &nz {
                let t = &prow[j] * &f;
                obj[j] -= t;
            }
        }
        self.basis[r] = c;
    }

    /// Reduced cost row for `cost` (last entry is minus the objective value).
    fn reduced(&self, cost: &[Rat]) -> Vec<Rat> {
        let mut obj: Vec<Rat> = cost.to_vec();
        obj.push(Rat::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= cb * x;
                }
            }
        }
        obj
    }

    /// Minimizes; returns false when unbounded.
    fn run(&mut self, obj: &mut [Rat], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let Some(c) = (0..self.ncols).find(|&j| allowed(j) && obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(obj, r, c);
        }
    }
}

/// Minimizes `obj · x` subject to `cons` over free variables `x ∈ ℚⁿ`.
pub fn minimize(obj: &[Rat], cons: &[Constraint], n: usize) -> LpResult {
    // columns: x⁺ (0..n), x⁻ (n..2n), slacks, artificials
    let nslack = cons.iter().filter(|c| c.rel != Rel::Eq).count();
    let mut rows_spec = Vec::with_capacity(cons.len());
    for c in cons {
        let (mut a, mut rel, mut b) = (c.coeffs.clone(), c.rel, c.rhs.clone());
        if b.is_negative() {
            a.iter_mut().for_each(|x| *x = -x.clone());
            b = -b;
            rel = match rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
        }
        rows_spec.push((a, rel, b));
    }
    let nart = rows_spec.iter().filter(|(_, r, _)| *r != Rel::Le).count();
    let art0 = 2 * n + nslack;
    let ncols = art0 + nart;
    let mut rows = Vec::with_capacity(rows_spec.len());
    let mut basis = Vec::with_capacity(rows_spec.len());
    let (mut s, mut t) = (2 * n, art0);
    for (a, rel, b) in rows_spec {
        let mut row = vec![Rat::zero(); ncols + 1];
        for (j, x) in a.iter().enumerate() {
            if !x.is_zero() {
                row[j] = x.clone();
                row[n + j] = -x.clone();
            }
        }
        row[ncols] = b;
        match rel {
            Rel::Le => {
                row[s] = Rat::one();
                basis.push(s);
                s += 1;
            }
            Rel::Ge => {
                row[s] = -Rat::one();
                s += 1;
                row[t] = Rat::one();
                basis.push(t);
                t += 1;
            }
            Rel::Eq => {
                row[t] = Rat::one();
                basis.push(t);
                t += 1;
            }
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, ncols };

    if nart > 0 {
        let mut cost = vec![Rat::zero(); ncols];
        for c in cost.iter_mut().skip(art0) {
            *c = Rat::one();
        }
        let mut o = tab.reduced(&cost);
        tab.run(&mut o, &|_| true);
        if !o[ncols].is_zero() {
            return LpResult::Infeasible;
        }
        // drive remaining artificials out of the basis
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art0 {
                if let Some(j) = (0..art0).find(|&j| !tab.rows[i][j].is_zero()) {
                    let mut dummy = vec![Rat::zero(); ncols + 1];
                    tab.pivot(&mut dummy, i, j);
                } else {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![Rat::zero(); ncols];
    for (j, c) in obj.iter().enumerate() {
        cost[j] = c.clone();
        cost[n + j] = -c.clone();
    }
    let mut o = tab.reduced(&cost);
    if !tab.run(&mut o, &|j| j < art0) {
        return LpResult::Unbounded;
    }
    let mut z = vec![Rat::zero(); ncols];
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        z[b] = row[ncols].clone();
    }
    let x: Vec<Rat> = (0..n).map(|j| &z[j] - &z[n + j]).collect();
    let value = obj.iter().zip(&x).map(|(a, b)| a * b).sum();
    LpResult::Optimal { value, x }
}

pub fn maximize(obj: &[Rat], cons: &[Constraint], n: usize) -> LpResult {
    let neg: Vec<Rat> = obj.iter().map(|x| -x).collect();
    match minimize(&neg, cons, n) {
        LpResult::Optimal { value, x } => LpResult::Optimal { value: -value, x },
        other => other,
    }
}

pub fn feasible(cons: &[Constraint], n: usize) -> Option<Vec<Rat>> {
    minimize(&vec![Rat::zero(); n], cons, n).optimal().map(|(_, x)| x)
}

fn unit(n: usize, k: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[k] = Rat::one();
    v
}

/// The lexicographically least integer point of `{x : cons} ∩ [lo, hi]`.
///
/// Coordinates are fixed one at a time; the range of each is read off two
/// LP relaxations with the earlier coordinates substituted.
pub fn lex_min_integer_point(cons: &[Constraint], n: usize, lo: &[Int], hi: &[Int]) -> Option<Vec<Int>> {
    let mut all: Vec<Constraint> = cons.to_vec();
    for k in 0..n {
        all.push(Constraint::ge(unit(n, k), Rat::from_integer(lo[k].clone())));
        all.push(Constraint::le(unit(n, k), Rat::from_integer(hi[k].clone())));
    }
    let mut prefix = Vec::with_capacity(n);
    if search(&all, n, &mut prefix) {
        Some(prefix)
    } else {
        None
    }
}

fn restrict(cons: &[Constraint], prefix: &[Int]) -> Vec<Constraint> {
    let k = prefix.len();
    cons.iter()
        .map(|c| {
            let mut rhs = c.rhs.clone();
            for (a, v) in c.coeffs[..k].iter().zip(prefix) {
                if !a.is_zero() && !v.is_zero() {
                    rhs -= a * Rat::from_integer(v.clone());
                }
            }
            Constraint::new(c.coeffs[k..].to_vec(), c.rel, rhs)
        })
        .collect()
}

fn search(cons: &[Constraint], n: usize, prefix: &mut Vec<Int>) -> bool {
    let k = prefix.len();
    if k == n {
        let x: Vec<Rat> = prefix.iter().map(|v| Rat::from_integer(v.clone())).collect();
        return cons.iter().all(|c| c.holds(&x));
    }
    let sub = restrict(cons, prefix);
    let m = n - k;
    let e = unit(m, 0);
    let Some((lo, _)) = minimize(&e, &sub, m).optimal() else {
        return false;
    };
    let Some((hi, _)) = maximize(&e, &sub, m).optimal() else {
        return false;
    };
    let (lo, hi) = (lo.ceil().to_integer(), hi.floor().to_integer());
    let mut v = lo;
    while v <= hi {
        prefix.push(v.clone());
        if m == 1 || search(cons, n, prefix) {
            return true;
        }
        prefix.pop();
        v += 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn small_lp() {
        // max x + y st x + 2y <= 4, 3x + y <= 6, x,y >= 0  → (8/5, 6/5), value 14/5
        let cons = vec![
            Constraint::le(r(&[1, 2]), rat(4, 1)),
            Constraint::le(r(&[3, 1]), rat(6, 1)),
            Constraint::ge(r(&[1, 0]), rat(0, 1)),
            Constraint::ge(r(&[0, 1]), rat(0, 1)),
        ];
        let (v, x) = maximize(&r(&[1, 1]), &cons, 2).optimal().unwrap();
        assert_eq!(v, rat(14, 5));
        assert_eq!(x, vec![rat(8, 5), rat(6, 5)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let cons = vec![Constraint::ge(r(&[1]), rat(2, 1)), Constraint::le(r(&[1]), rat(1, 1))];
        assert_eq!(minimize(&r(&[1]), &cons, 1), LpResult::Infeasible);
        let cons = vec![Constraint::ge(r(&[1, -1]), rat(0, 1))];
        assert_eq!(maximize(&r(&[1, 1]), &cons, 2), LpResult::Unbounded);
    }

    #[test]
    fn equality_and_negative_rhs() {
        let cons = vec![
            Constraint::eq(r(&[1, 1]), rat(-3, 1)),
            Constraint::ge(r(&[1, 0]), rat(-5, 1)),
            Constraint::ge(r(&[0, 1]), rat(-5, 1)),
        ];
        let (v, x) = minimize(&r(&[1, 0]), &cons, 2).optimal().unwrap();
        assert_eq!(v, rat(-5, 1));
        assert_eq!(x, vec![rat(-5, 1), rat(2, 1)]);
    }

    #[test]
    fn redundant_equalities() {
        let cons = vec![
            Constraint::eq(r(&[1, 1]), rat(2, 1)),
            Constraint::eq(r(&[2, 2]), rat(4, 1)),
            Constraint::ge(r(&[1, 0]), rat(0, 1)),
            Constraint::ge(r(&[0, 1]), rat(0, 1)),
        ];
        let (v, _) = maximize(&r(&[1, 0]), &cons, 2).optimal().unwrap();
        assert_eq!(v, rat(2, 1));
    }

    #[test]
    fn integer_search() {
        // 2x + 2y = 3 has no integer point
        let cons = vec![Constraint::eq(r(&[2, 2]), rat(3, 1))];
        let b = vec![int(-5), int(-5)];
        let t = vec![int(5), int(5)];
        assert!(lex_min_integer_point(&cons, 2, &b, &t).is_none());
        // x + y = 1, x >= y  → lex-min is (1, 0)
        let cons = vec![Constraint::eq(r(&[1, 1]), rat(1, 1)), Constraint::ge(r(&[1, -1]), rat(0, 1))];
        assert_eq!(lex_min_integer_point(&cons, 2, &b, &t), Some(vec![int(1), int(0)]));
        // thin strip 3x - 3y in [1, 2] has none
        let cons = vec![Constraint::ge(r(&[3, -3]), rat(1, 1)), Constraint::le(r(&[3, -3]), rat(2, 1))];
        assert!(lex_min_integer_point(&cons, 2, &b, &t).is_none());
    }
}
