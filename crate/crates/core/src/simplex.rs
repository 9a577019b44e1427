//! Dense two-phase simplex over exact rationals.
//!
//! Sized for the small systems that arise here (tens of rows and
//! columns). Bland's rule guarantees termination; all pivoting is exact,
//! so feasibility verdicts are certificates, not approximations.

use crate::matrix::RatMat;
use crate::rat::Rat;
use num::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    /// Optimal solution of min c.z subject to A z = b, z >= 0.
    Optimal(Vec<Rat>),
    Unbounded,
}

pub fn solve(a: &RatMat, b: &[Rat], c: &[Rat]) -> LpOutcome {
    let m = a.rows;
    let n = a.cols;
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);

    // Working tableau: rows x (n + m + 1); the artificial columns come
    // after the structural ones, the rightmost column is b. Rows are
    // flipped so b >= 0.
    let mut t = vec![vec![Rat::zero(); n + m + 1]; m];
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            t[i][j] = if flip { -&a[(i, j)] } else { a[(i, j)].clone() };
        }
        t[i][n + i] = Rat::one();
        t[i][n + m] = if flip { -&b[i] } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n + i).collect();

    // Phase 1: minimize the sum of artificials, priced against the
    // artificial starting basis (cost 1 on each artificial column).
    let mut obj = vec![Rat::zero(); n + m + 1];
    for i in 0..m {
        obj[n + i] = Rat::one();
    }
    for i in 0..m {
        for j in 0..=n + m {
            let v = t[i][j].clone();
            obj[j] -= v;
        }
    }
    if run_simplex(&mut t, &mut basis, &mut obj, n + m).is_none() {
        // Phase 1 is bounded below by 0, so this cannot happen.
        unreachable!("phase 1 unbounded");
    }
    let phase1_value = -obj[n + m].clone();
    if !phase1_value.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive any residual zero-level artificials out of the basis.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, &mut obj, i, j);
            }
            // If no structural pivot exists the row is redundant; the
            // artificial stays basic at level zero, which is harmless as
            // long as its column is never re-entered (it is not: phase 2
            // prices only structural columns).
        }
    }

    // Phase 2 with the real objective, priced on structural columns.
    let mut obj2 = vec![Rat::zero(); n + m + 1];
    obj2[..n].clone_from_slice(c);
    for i in 0..m {
        if basis[i] < n && !obj2[basis[i]].is_zero() {
            let f = obj2[basis[i]].clone();
            for j in 0..=n + m {
                let v = &f * &t[i][j];
                obj2[j] -= v;
            }
        }
    }
    if run_simplex(&mut t, &mut basis, &mut obj2, n).is_none() {
        return LpOutcome::Unbounded;
    }

    let mut z = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            z[basis[i]] = t[i][n + m].clone();
        }
    }
    LpOutcome::Optimal(z)
}

/// Bland's rule iterations; prices columns [0, col_limit). Returns None
/// when an entering column proves unboundedness.
fn run_simplex(
    t: &mut [Vec<Rat>],
    basis: &mut [usize],
    obj: &mut [Rat],
    col_limit: usize,
) -> Option<()> {
    let m = t.len();
    let width = obj.len() - 1;
    loop {
        let Some(enter) = (0..col_limit).find(|&j| obj[j].is_negative()) else {
            return Some(());
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let row = leave?;
        pivot_rows(t, obj, row, enter);
        basis[row] = enter;
    }
}

fn pivot(t: &mut [Vec<Rat>], basis: &mut [usize], obj: &mut [Rat], row: usize, col: usize) {
    pivot_rows(t, obj, row, col);
    basis[row] = col;
}

fn pivot_rows(t: &mut [Vec<Rat>], obj: &mut [Rat], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            let d = &f * pv;
            *v -= d;
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for (v, pv) in obj.iter_mut().zip(&pivot_row) {
            let d = &f * pv;
            *v -= d;
        }
    }
}

/// Decides exact feasibility of the strict system `rows . x > 0`
/// componentwise, via the equivalent slab `rows . x >= 1` (the cone is
/// invariant under positive scaling). Returns a rational witness.
pub fn strict_cone_witness(rows: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let m = rows.len();
    let d = rows.first()?.len();
    // Variables: x = u - v (u, v >= 0), slack s with rows.x - s = 1.
    let mut a = RatMat::zeros(m, 2 * d + m);
    for i in 0..m {
        for k in 0..d {
            a[(i, k)] = rows[i][k].clone();
            a[(i, d + k)] = -&rows[i][k];
        }
        a[(i, 2 * d + i)] = -Rat::one();
    }
    let b = vec![Rat::one(); m];
    let c = vec![Rat::zero(); 2 * d + m];
    match solve(&a, &b, &c) {
        LpOutcome::Optimal(z) => {
            Some((0..d).map(|k| &z[k] - &z[d + k]).collect())
        }
        _ => None,
    }
}

/// Minimizes a linear objective over the bounded slab
/// `rows . x >= 1, -box_bound <= x_k <= box_bound`; used to harvest
/// distinct vertices of a sign cone.
pub fn slab_vertex(rows: &[Vec<Rat>], objective: &[Rat], box_bound: i64) -> Option<Vec<Rat>> {
    let m = rows.len();
    let d = objective.len();
    let r = Rat::from_integer(box_bound.into());
    // Variables: u, v (x = u - v), cone slack s, box slacks p, q.
    let cols = 2 * d + m + 2 * d;
    let mut a = RatMat::zeros(m + 2 * d, cols);
    let mut b = Vec::with_capacity(m + 2 * d);
    for i in 0..m {
        for k in 0..d {
            a[(i, k)] = rows[i][k].clone();
            a[(i, d + k)] = -&rows[i][k];
        }
        a[(i, 2 * d + i)] = -Rat::one();
        b.push(Rat::one());
    }
    for k in 0..d {
        a[(m + k, k)] = Rat::one();
        a[(m + k, 2 * d + m + k)] = Rat::one();
        b.push(r.clone());
        a[(m + d + k, d + k)] = Rat::one();
        a[(m + d + k, 2 * d + m + d + k)] = Rat::one();
        b.push(r.clone());
    }
    let mut c = vec![Rat::zero(); cols];
    for k in 0..d {
        c[k] = objective[k].clone();
        c[d + k] = -&objective[k];
    }
    match solve(&a, &b, &c) {
        LpOutcome::Optimal(z) => Some((0..d).map(|k| &z[k] - &z[d + k]).collect()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn basic_lp() {
        // min -x1 - x2 s.t. x1 + x2 + s = 1: optimum -1.
        let a = RatMat::from_rows(vec![vec![rat_int(1), rat_int(1), rat_int(1)]]).unwrap();
        let out = solve(&a, &[rat_int(1)], &[rat_int(-1), rat_int(-1), rat_int(0)]);
        match out {
            LpOutcome::Optimal(z) => assert_eq!(&z[0] + &z[1], rat_int(1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x1 = -1 with x1 >= 0.
        let a = RatMat::from_rows(vec![vec![rat_int(1)]]).unwrap();
        assert_eq!(solve(&a, &[rat_int(-1)], &[rat_int(0)]), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // min -x1 s.t. x1 - x2 = 0.
        let a = RatMat::from_rows(vec![vec![rat_int(1), rat_int(-1)]]).unwrap();
        assert_eq!(
            solve(&a, &[rat_int(0)], &[rat_int(-1), rat_int(0)]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn cone_witness_found() {
        // x > 0 and -x + y > 0 in the plane.
        let rows = vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(-1), rat_int(1)],
        ];
        let x = strict_cone_witness(&rows).unwrap();
        assert!(x[0].is_positive());
        assert!((&x[1] - &x[0]).is_positive());
    }

    #[test]
    fn empty_cone_rejected() {
        // x > 0 and -x > 0.
        let rows = vec![vec![rat_int(1)], vec![rat_int(-1)]];
        assert!(strict_cone_witness(&rows).is_none());
    }

    #[test]
    fn slab_vertices_vary_with_objective() {
        let rows = vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ];
        let v1 = slab_vertex(&rows, &[rat_int(1), rat_int(0)], 10).unwrap();
        let v2 = slab_vertex(&rows, &[rat_int(-1), rat_int(0)], 10).unwrap();
        assert_eq!(v1[0], rat_int(1));
        assert_eq!(v2[0], rat_int(10));
        assert!(v1[1] >= rat(1, 1));
    }
}
