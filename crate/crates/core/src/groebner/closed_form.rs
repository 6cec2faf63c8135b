//! The closed-form basis printed for `Hom(K_n, K_m)` and a diff against a
//! computed basis.
//!
//! Outputs are 0-based and the last output `m-1` is the eliminated one, so
//! "v ∈ [m-1]" becomes `v in 0..m-1`. The pair families are unambiguous. The
//! triple family's side conditions on `c` are read as: per input `t` the
//! value `c[t][l]` is constant over `l < m-3`, exactly two of the three inputs
//! take `2` there, and for each `l ∈ {m-3, m-2}` exactly one input takes `2`.
//! The result is only ever reported, never asserted.

use super::basis::GroebnerBasis;
use crate::ncpoly::{Coeff, GeneratorId, NCPolynomial, Word};

fn x(i: usize, a: usize) -> NCPolynomial {
    NCPolynomial::generator(i, a)
}

fn word(gs: &[(usize, usize)]) -> Word {
    Word::from_letters(gs.iter().map(|&(i, a)| GeneratorId::new(i, a)))
}

fn mono(gs: &[(usize, usize)], c: i64) -> NCPolynomial {
    NCPolynomial::monomial(word(gs), Coeff::from_integer(c.into()))
}

/// `1 - Σ_u (x_iu + x_ju) + Σ_{u≠v} (x_iu x_jv + x_ju x_iv)`.
fn pair_quadratic(i: usize, j: usize, m: usize) -> NCPolynomial {
    let mut p = NCPolynomial::one();
    for u in 0..m - 1 {
        p = &p - &(&x(i, u) + &x(j, u));
        for v in 0..m - 1 {
            if u != v {
                p = &p + &(&mono(&[(i, u), (j, v)], 1) + &mono(&[(j, u), (i, v)], 1));
            }
        }
    }
    p
}

/// Pair relations: completeness, idempotents, same-output and same-input
/// products, and the two mixed pair relations.
pub fn closed_form_pairs(n: usize, m: usize) -> Vec<NCPolynomial> {
    assert!(m >= 4, "the printed family concerns m >= 4");
    let r = m - 1;
    let mut out = Vec::new();
    for i in 0..n {
        let mut c = -NCPolynomial::one();
        for v in 0..m {
            c = &c + &x(i, v);
        }
        out.push(c);
        for v in 0..r {
            out.push(&mono(&[(i, v), (i, v)], 1) - &x(i, v));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for v in 0..r {
                    out.push(mono(&[(i, v), (j, v)], 1));
                }
            }
        }
        for u in 0..r {
            for v in 0..r {
                if u != v {
                    out.push(mono(&[(i, u), (i, v)], 1));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            out.push(pair_quadratic(i, j, m));
            let mut p = pair_quadratic(i, j, m);
            for u in 0..r {
                for v in 0..r {
                    for w in 0..r {
                        if u != v && v != w && u != w && w != m - 3 {
                            p = &p - &mono(&[(i, u), (j, v), (i, w)], 1);
                        }
                    }
                }
            }
            for u in 0..m - 3 {
                for v in 0..r {
                    if v != u {
                        p = &p - &mono(&[(i, u), (j, v), (i, u)], 1);
                    }
                }
                p = &p + &mono(&[(i, m - 2), (j, u), (i, m - 3)], 1);
            }
            out.push(p);
        }
    }
    out
}

/// Triple relations under the reading described in the module docs.
pub fn closed_form_triples(n: usize, m: usize) -> Vec<NCPolynomial> {
    assert!(m >= 4);
    let r = m - 1;
    let mut out = Vec::new();
    // c[t][l] for t in {i,j,k}: low block value per t, then one "2" for l = m-3 and l = m-2.
    let low_patterns: [[i64; 3]; 3] = [[2, 2, 1], [2, 1, 2], [1, 2, 2]];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                for low in &low_patterns {
                    for hi_a in 0..3 {
                        for hi_b in 0..3 {
                            let mut c = vec![vec![1i64; r]; 3];
                            for t in 0..3 {
                                for l in 0..m - 3 {
                                    c[t][l] = low[t];
                                }
                            }
                            c[hi_a][m - 3] = 2;
                            c[hi_b][m - 2] = 2;
                            out.push(triple(i, j, k, m, r, &c));
                        }
                    }
                }
            }
        }
    }
    out
}

fn triple(i: usize, j: usize, k: usize, m: usize, r: usize, c: &[Vec<i64>]) -> NCPolynomial {
    let mut p = NCPolynomial::constant(Coeff::from_integer(2.into()));
    for u in 0..r {
        p = &p - &(&(&mono(&[(i, u)], c[0][u]) + &mono(&[(j, u)], c[1][u])) + &mono(&[(k, u)], c[2][u]));
        for v in 0..r {
            if u == v {
                continue;
            }
            let cij = if c[0][u] == 2 && c[1][u] == 2 { 2 } else { 1 };
            let cik = if c[0][u] == 2 && c[2][u] == 2 { 2 } else { 1 };
            p = &p + &(&mono(&[(i, u), (j, v)], cij) + &mono(&[(i, u), (k, v)], cik));
            p = &p - &mono(&[(i, u), (j, v), (k, u)], 1);
            for w in 0..r {
                if w != u && w != v && w != m - 3 {
                    p = &p - &mono(&[(i, u), (j, v), (k, w)], 1);
                }
            }
        }
    }
    for u in 0..m - 3 {
        p = &p + &mono(&[(i, m - 2), (j, u), (k, m - 3)], 1);
    }
    p
}

/// Outcome of comparing the printed family with a computed basis.
#[derive(Clone, Debug, Default)]
pub struct ClosedFormDiff {
    /// Printed relations (monic) that are not basis elements.
    pub printed_not_in_basis: Vec<NCPolynomial>,
    /// Printed relations whose normal form is nonzero, i.e. not in the ideal.
    pub printed_not_in_ideal: Vec<NCPolynomial>,
    /// Basis elements not matched by any printed relation.
    pub basis_not_printed: Vec<NCPolynomial>,
}

impl ClosedFormDiff {
    pub fn is_empty(&self) -> bool {
        self.printed_not_in_basis.is_empty() && self.printed_not_in_ideal.is_empty() && self.basis_not_printed.is_empty()
    }
}

pub fn compare_with_printed(gb: &GroebnerBasis, printed: &[NCPolynomial]) -> ClosedFormDiff {
    let mut diff = ClosedFormDiff::default();
    let mut printed_monic: Vec<NCPolynomial> = printed.iter().filter(|p| !p.is_zero()).map(NCPolynomial::monic).collect();
    printed_monic.sort_by(|a, b| a.leading_word().cmp(&b.leading_word()).then_with(|| a.to_string().cmp(&b.to_string())));
    printed_monic.dedup();
    for p in &printed_monic {
        if !gb.elements().contains(p) {
            diff.printed_not_in_basis.push(p.clone());
        }
        if !gb.normal_form(p).remainder.is_zero() {
            diff.printed_not_in_ideal.push(p.clone());
        }
    }
    for e in gb.elements() {
        if !printed_monic.contains(e) {
            diff.basis_not_printed.push(e.clone());
        }
    }
    diff
}
