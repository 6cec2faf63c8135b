use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, Zero};

use super::echelon::Echelon;
use super::RatMatrix;
use crate::ncpoly::Coeff;

/// Nearest point of the grid `Z/den`. Rounding a matrix onto one grid keeps a
/// common denominator, which exact elimination needs to stay small.
pub fn round_to_grid(x: f64, den: u64) -> Coeff {
    assert!(x.is_finite(), "cannot round {x}");
    assert!(den >= 1);
    let num = num_bigint::BigInt::from_f64((x * den as f64).round()).expect("finite");
    Coeff::new(num, BigInt::from(den))
}

/// Best rational approximation of `x` with denominator at most `max_den`, by
/// continued fractions (last convergent or semiconvergent within the bound).
pub fn rationalize(x: f64, max_den: u64) -> Coeff {
    assert!(x.is_finite(), "cannot rationalize {x}");
    assert!(max_den >= 1);
    let neg = x < 0.0;
    let exact = Coeff::from_float(x.abs()).expect("finite");
    let bound = BigInt::from(max_den);
    // convergents p/q of the exact binary value
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    let best = loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > bound {
            // largest semiconvergent within the bound, if closer than p1/q1
            let k = (&bound - &q0) / &q1;
            let ps = &k * &p1 + &p0;
            let qs = &k * &q1 + &q0;
            let c1 = Coeff::new(p1.clone(), q1.clone());
            if k.is_positive() {
                let cs = Coeff::new(ps, qs);
                if (&cs - &exact).abs() < (&c1 - &exact).abs() {
                    break cs;
                }
            }
            break c1;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = &rest - Coeff::from_integer(a);
        if frac.is_zero() {
            break Coeff::new(p1.clone(), q1.clone());
        }
        rest = frac.recip();
    };
    if neg {
        -best
    } else {
        best
    }
}

/// Solves `a·x = b` exactly; `None` if `a` is singular.
pub(crate) fn solve_dense(mut a: RatMatrix, mut b: Vec<Coeff>) -> Option<Vec<Coeff>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                if !a[col][c].is_zero() {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    let mut x = vec![Coeff::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            if !a[r][c].is_zero() {
                s -= &a[r][c] * &x[c];
            }
        }
        x[r] = s / &a[r][r];
    }
    Some(x)
}

/// Orthogonal projection of `x` onto `{z : a·z = b}` in exact arithmetic.
///
/// Rows of `a` are sparse (column index → value) and may be dependent;
/// returns `None` when the system is inconsistent.
pub fn project_affine(x: &[Coeff], a: &[BTreeMap<usize, Coeff>], b: &[Coeff]) -> Option<Vec<Coeff>> {
    assert_eq!(a.len(), b.len());
    // Augmented rows with the right-hand side at key 0 and variables at key j+1,
    // so a pure right-hand-side remainder exposes inconsistency.
    let mut ech: Echelon<usize> = Echelon::new(false);
    let mut rows = Vec::new();
    for (row, rhs) in a.iter().zip(b) {
        let mut aug: BTreeMap<usize, Coeff> = row.iter().map(|(&j, v)| (j + 1, v.clone())).collect();
        if !rhs.is_zero() {
            aug.insert(0, -rhs);
        }
        aug.retain(|_, v| !v.is_zero());
        let red = ech.reduce(&aug).remainder;
        if let Some((&top, _)) = red.last_key_value() {
            if top == 0 {
                return None;
            }
            ech.insert(&aug);
            rows.push(aug);
        }
    }
    if rows.is_empty() {
        return Some(x.to_vec());
    }
    let m = rows.len();
    // residual r_i = row_i·x - b_i  (aug stores -b at key 0)
    let resid: Vec<Coeff> = rows
        .iter()
        .map(|r| {
            r.iter().fold(Coeff::zero(), |acc, (&k, v)| if k == 0 { acc + v } else { acc + v * &x[k - 1] })
        })
        .collect();
    if resid.iter().all(Zero::is_zero) {
        return Some(x.to_vec());
    }
    let mut gram = vec![vec![Coeff::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let (small, large) = if rows[i].len() <= rows[j].len() { (&rows[i], &rows[j]) } else { (&rows[j], &rows[i]) };
            let mut s = Coeff::zero();
            for (k, v) in small {
                if *k == 0 {
                    continue;
                }
                if let Some(w) = large.get(k) {
                    s += v * w;
                }
            }
            gram[i][j] = s.clone();
            gram[j][i] = s;
        }
    }
    let lambda = solve_dense(gram, resid)?;
    let mut out = x.to_vec();
    for (row, l) in rows.iter().zip(&lambda) {
        if l.is_zero() {
            continue;
        }
        for (&k, v) in row {
            if k > 0 {
                out[k - 1] -= l * v;
            }
        }
    }
    Some(out)
}
