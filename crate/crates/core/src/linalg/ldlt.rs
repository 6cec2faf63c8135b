use num_traits::{Signed, Zero};

use super::RatMatrix;
use crate::ncpoly::Coeff;

/// Result of an exact symmetric factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsdCheck {
    pub psd: bool,
    pub rank: usize,
    /// Present when `psd`: the diagonal of `D` in `PᵀAP = LDLᵀ`.
    pub pivots: Vec<Coeff>,
}

/// Decides `A ⪰ 0` exactly by `LDLᵀ` with diagonal pivoting.
///
/// At each step the largest remaining diagonal entry is the pivot. A negative
/// pivot, or a zero diagonal with a nonzero entry in its row, proves `A` is
/// not positive semidefinite. Non-symmetric input is reported as not PSD.
pub fn ldlt_psd(a: &RatMatrix) -> PsdCheck {
    let n = a.len();
    let fail = PsdCheck { psd: false, rank: 0, pivots: Vec::new() };
    if a.iter().any(|r| r.len() != n) {
        return fail;
    }
    for i in 0..n {
        for j in i + 1..n {
            if a[i][j] != a[j][i] {
                return fail;
            }
        }
    }
    let mut m = a.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|x, y| m[*x.1][*x.1].cmp(&m[*y.1][*y.1]))
            .expect("nonempty");
        let d = m[p][p].clone();
        if d.is_negative() {
            return PsdCheck { rank: pivots.len(), ..fail };
        }
        if d.is_zero() {
            // all remaining diagonals are zero; PSD iff the remaining block vanishes
            let ok = active.iter().all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
            return if ok { PsdCheck { psd: true, rank: pivots.len(), pivots } } else { PsdCheck { rank: pivots.len(), ..fail } };
        }
        active.swap_remove(pos);
        for &i in &active {
            if m[i][p].is_zero() {
                continue;
            }
            let l = &m[i][p] / &d;
            for &j in &active {
                if m[p][j].is_zero() {
                    continue;
                }
                let delta = &l * &m[p][j];
                m[i][j] -= delta;
            }
        }
        pivots.push(d);
    }
    PsdCheck { psd: true, rank: pivots.len(), pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{int, rat};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn small_cases() {
        assert!(ldlt_psd(&m(&[&[2, 1], &[1, 2]])).psd);
        assert!(!ldlt_psd(&m(&[&[1, 2], &[2, 1]])).psd);
        let singular = ldlt_psd(&m(&[&[1, 1], &[1, 1]]));
        assert!(singular.psd);
        assert_eq!(singular.rank, 1);
        assert!(!ldlt_psd(&m(&[&[0, 1], &[1, 0]])).psd);
        assert!(ldlt_psd(&m(&[&[0, 0], &[0, 0]])).psd);
        assert!(!ldlt_psd(&m(&[&[1, 2], &[0, 1]])).psd);
        assert!(!ldlt_psd(&m(&[&[-1]])).psd);
        assert!(ldlt_psd(&Vec::new()).psd);
    }

    #[test]
    fn gram_matrices_are_psd() {
        // G = VᵀV for a fixed rational V
        let v = [[rat(1, 2), int(-3), int(0)], [int(2), rat(5, 7), int(1)]];
        let g: RatMatrix = (0..3)
            .map(|i| (0..3).map(|j| &v[0][i] * &v[0][j] + &v[1][i] * &v[1][j]).collect())
            .collect();
        let c = ldlt_psd(&g);
        assert!(c.psd);
        assert_eq!(c.rank, 2);
        let mut bad = g.clone();
        bad[2][2] -= rat(1, 1000);
        assert!(!ldlt_psd(&bad).psd);
    }
}
