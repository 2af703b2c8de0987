//! Smith normal form over the concrete PIDs, with transformation matrices.

use num_bigint::BigInt;
use num_traits::One;

use crate::rings::matrix::{Mat, MatOps};
use crate::rings::pid::Pid;

/// `u · a · v = d`, with `d` diagonal and `d[0] | d[1] | …` on the first
/// `rank` entries. `v_inv` is tracked alongside `v` so kernel coordinates can
/// be read off without inverting anything afterwards.
#[derive(Debug, Clone)]
pub struct Snf<P: Pid> {
    pub d: Mat<P::E>,
    pub u: Mat<P::E>,
    pub v: Mat<P::E>,
    pub v_inv: Mat<P::E>,
    pub rank: usize,
}

impl<P: Pid> Snf<P> {
    pub fn diagonal(&self) -> Vec<P::E> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Columns of `v` spanning the kernel of the original matrix.
    pub fn kernel_columns(&self) -> std::ops::Range<usize> {
        self.rank..self.v.cols()
    }
}

fn min_entry<P: Pid>(pid: &P, a: &Mat<P::E>, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), num_bigint::BigUint)> = None;
    for (i, j) in cells {
        let x = &a[(i, j)];
        if pid.is_zero(x) {
            continue;
        }
        let s = pid.size(x);
        if best.as_ref().is_none_or(|(_, bs)| s < *bs) {
            best = Some(((i, j), s));
        }
    }
    best.map(|(c, _)| c)
}

struct Transforms<E> {
    u: Mat<E>,
    v: Mat<E>,
    v_inv: Mat<E>,
}

/// Diagonalizes `a` in place and returns the rank, updating `tr` alongside.
fn eliminate<P: Pid>(pid: &P, a: &mut Mat<P::E>, mut tr: Option<&mut Transforms<P::E>>) -> usize {
    let (m, n) = a.shape();
    let swap = |a: &mut Mat<P::E>, t: usize, (pi, pj): (usize, usize), tr: Option<&mut Transforms<P::E>>| {
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(tr) = tr {
            tr.u.swap_rows(t, pi);
            tr.v.swap_cols(t, pj);
            tr.v_inv.swap_rows(t, pj);
        }
    };
    let mut t = 0;
    while t < m.min(n) {
        let cells = (t..m).flat_map(|i| (t..n).map(move |j| (i, j)));
        let Some(pivot) = min_entry(pid, a, cells) else {
            break;
        };
        swap(a, t, pivot, tr.as_deref_mut());

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if pid.is_zero(&a[(i, t)]) {
                    continue;
                }
                let (q, r) = pid.div_rem(&a[(i, t)], &a[(t, t)]);
                let nq = pid.neg(&q);
                a.add_row_multiple(pid, i, t, &nq);
                if let Some(tr) = tr.as_deref_mut() {
                    tr.u.add_row_multiple(pid, i, t, &nq);
                }
                dirty |= !pid.is_zero(&r);
            }
            for j in t + 1..n {
                if pid.is_zero(&a[(t, j)]) {
                    continue;
                }
                let (q, r) = pid.div_rem(&a[(t, j)], &a[(t, t)]);
                let nq = pid.neg(&q);
                a.add_col_multiple(pid, j, t, &nq);
                if let Some(tr) = tr.as_deref_mut() {
                    tr.v.add_col_multiple(pid, j, t, &nq);
                    tr.v_inv.add_row_multiple(pid, t, j, &q);
                }
                dirty |= !pid.is_zero(&r);
            }
            if dirty {
                let cells = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                let pivot = min_entry(pid, a, cells).expect("pivot row or column is nonzero");
                swap(a, t, pivot, tr.as_deref_mut());
                continue;
            }
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| pid.exact_div(&a[(i, j)], &pivot).is_none()));
            match offender {
                Some(i) => {
                    let one = pid.one();
                    a.add_row_multiple(pid, t, i, &one);
                    if let Some(tr) = tr.as_deref_mut() {
                        tr.u.add_row_multiple(pid, t, i, &one);
                    }
                }
                None => break,
            }
        }

        let (_, unit) = pid.normalize(&a[(t, t)]);
        a.scale_row(pid, t, &unit);
        if let Some(tr) = tr.as_deref_mut() {
            tr.u.scale_row(pid, t, &unit);
        }
        t += 1;
    }
    t
}

pub fn smith_normal_form<P: Pid>(pid: &P, input: &Mat<P::E>) -> Snf<P> {
    let (m, n) = input.shape();
    let mut a = input.clone();
    let mut tr = Transforms { u: Mat::identity(pid, m), v: Mat::identity(pid, n), v_inv: Mat::identity(pid, n) };
    let rank = eliminate(pid, &mut a, Some(&mut tr));
    Snf { d: a, u: tr.u, v: tr.v, v_inv: tr.v_inv, rank }
}

/// The invariant factors alone, without tracking any change of basis.
pub fn smith_diagonal<P: Pid>(pid: &P, input: &Mat<P::E>) -> Vec<P::E> {
    let mut a = input.clone();
    let rank = eliminate(pid, &mut a, None);
    (0..rank).map(|i| a[(i, i)].clone()).collect()
}

/// Solves `a · x = b`, returning one solution when it exists.
pub fn solve<P: Pid>(pid: &P, a: &Mat<P::E>, b: &[P::E]) -> Option<Vec<P::E>> {
    let snf = smith_normal_form(pid, a);
    let ub = snf.u.apply(pid, b);
    let mut y = vec![pid.zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < snf.rank {
            y[i] = pid.exact_div(c, &snf.d[(i, i)])?;
        } else if !pid.is_zero(c) {
            return None;
        }
    }
    Some(snf.v.apply(pid, &y))
}

/// Free rank and torsion divisors of `target / image(a)`.
pub fn cokernel_divisors<P: Pid>(pid: &P, a: &Mat<P::E>) -> (usize, Vec<BigInt>) {
    let diagonal = smith_diagonal(pid, a);
    let torsion = diagonal.iter().map(|x| pid.divisor(x)).filter(|d| !d.is_one()).collect();
    (a.rows() - diagonal.len(), torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::pid::{Integers, LocalIntegers, PadicPrecision};
    use num_rational::BigRational;

    fn zm(rows: &[&[i64]]) -> Mat<BigInt> {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols).unwrap()
    }

    fn check_identity<P: Pid>(pid: &P, a: &Mat<P::E>, s: &Snf<P>) {
        assert_eq!(s.u.mul(pid, a).unwrap().mul(pid, &s.v).unwrap(), s.d);
        let id: Mat<P::E> = Mat::identity(pid, a.cols());
        assert_eq!(s.v.mul(pid, &s.v_inv).unwrap(), id);
    }

    #[test]
    fn two_by_two_over_integers() {
        // Hand reduction: [[2,4],[6,8]] -> [[2,0],[0,-4]] -> diag(2,4).
        let a = zm(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&Integers, &a);
        check_identity(&Integers, &a, &s);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn empty_matrix() {
        let a: Mat<BigInt> = Mat::filled(0, 0, BigInt::from(0));
        let s = smith_normal_form(&Integers, &a);
        assert_eq!(s.rank, 0);
        assert_eq!(s.u.shape(), (0, 0));
        assert_eq!(s.v.shape(), (0, 0));
        let wide: Mat<BigInt> = Mat::filled(0, 3, BigInt::from(0));
        let s = smith_normal_form(&Integers, &wide);
        assert_eq!((s.rank, s.v.shape()), (0, (3, 3)));
    }

    #[test]
    fn local_pivot_is_prime_power() {
        let z5 = LocalIntegers { p: 5.into() };
        let a = Mat::from_rows(vec![vec![BigRational::new(5.into(), 3.into())]], 1).unwrap();
        let s = smith_normal_form(&z5, &a);
        check_identity(&z5, &a, &s);
        assert_eq!(s.d[(0, 0)], BigRational::from_integer(5.into()));
    }

    #[test]
    fn divisor_chain_is_enforced() {
        let a = zm(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&Integers, &a);
        check_identity(&Integers, &a, &s);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(cokernel_divisors(&Integers, &a), (0, vec![BigInt::from(6)]));
    }

    #[test]
    fn padic_rank_ignores_precision_noise() {
        let zp = PadicPrecision::new(5.into(), 3);
        let a = zm(&[&[125 % 125, 25], &[0, 0]]);
        let s = smith_normal_form(&zp, &a);
        assert_eq!(s.rank, 1);
        assert_eq!(s.d[(0, 0)], BigInt::from(25));
    }

    #[test]
    fn solve_finds_integer_preimage() {
        let a = zm(&[&[2, 4], &[6, 8]]);
        let b = vec![BigInt::from(2), BigInt::from(2)];
        let x = solve(&Integers, &a, &b).unwrap();
        assert_eq!(a.apply(&Integers, &x), b);
        assert!(solve(&Integers, &a, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }
}
