use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A CNF formula; literal `+v` / `-v` for variable `v ∈ 1..=n_vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CNFFormula {
    pub n_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CNFFormula {
    /// Validates the clause convention: nonempty clauses, literals in range,
    /// and no variable twice in one clause (neither repeated nor negated).
    pub fn new(n_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for (ci, c) in clauses.iter().enumerate() {
            check_clause(c, n_vars).map_err(|msg| Error::InvalidInput(format!("clause {ci}: {msg}")))?;
        }
        Ok(CNFFormula { n_vars, clauses })
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_3cnf(&self) -> bool {
        self.clauses.iter().all(|c| c.len() == 3)
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// Exhaustive search over all `2^n_vars` assignments.
    pub fn brute_force_sat(&self) -> Option<Vec<bool>> {
        assert!(self.n_vars <= 24, "brute force limited to 24 variables");
        (0u32..1 << self.n_vars)
            .map(|bits| (0..self.n_vars).map(|v| bits >> v & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.satisfied_by(a))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.n_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }
}

fn check_clause(c: &[i32], n_vars: usize) -> std::result::Result<(), String> {
    if c.is_empty() {
        return Err("empty clause".into());
    }
    for (k, &l) in c.iter().enumerate() {
        let v = l.unsigned_abs() as usize;
        if l == 0 || v > n_vars {
            return Err(format!("literal {l} out of range 1..={n_vars}"));
        }
        if let Some(&other) = c[..k].iter().find(|&&o| o.unsigned_abs() as usize == v) {
            return Err(if other == l {
                format!("variable {v} repeated")
            } else {
                format!("variable {v} appears with both signs")
            });
        }
    }
    Ok(())
}

/// DIMACS CNF: `c` comments, a `p cnf <vars> <clauses>` header, clauses as
/// whitespace-separated literals terminated by `0` (they may span lines).
/// Without a header the variable count is the largest variable used.
pub fn parse_dimacs_cnf(text: &str) -> Result<CNFFormula> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut starts: Vec<usize> = Vec::new();
    let mut cur: Vec<i32> = Vec::new();
    let mut cur_line = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if let Some(rest) = t.strip_prefix('p') {
            if header.is_some() {
                return Err(Error::parse(ln, "second problem line"));
            }
            let f: Vec<&str> = rest.split_whitespace().collect();
            if f.len() != 3 || f[0] != "cnf" {
                return Err(Error::parse(ln, "expected 'p cnf <vars> <clauses>'"));
            }
            let nv = f[1].parse().map_err(|_| Error::parse(ln, format!("bad variable count '{}'", f[1])))?;
            let nc = f[2].parse().map_err(|_| Error::parse(ln, format!("bad clause count '{}'", f[2])))?;
            header = Some((nv, nc, ln));
            continue;
        }
        for tok in t.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| Error::parse(ln, format!("bad literal '{tok}'")))?;
            if cur.is_empty() {
                cur_line = ln;
            }
            if l == 0 {
                if cur.is_empty() {
                    return Err(Error::parse(ln, "empty clause"));
                }
                clauses.push(std::mem::take(&mut cur));
                starts.push(cur_line);
            } else {
                cur.push(l);
            }
        }
    }
    if !cur.is_empty() {
        return Err(Error::parse(cur_line, "clause not terminated by 0"));
    }
    let n_vars = match header {
        Some((nv, nc, ln)) => {
            if nc != clauses.len() {
                return Err(Error::parse(ln, format!("header announces {nc} clauses, found {}", clauses.len())));
            }
            nv
        }
        None => clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0),
    };
    for (c, &ln) in clauses.iter().zip(&starts) {
        check_clause(c, n_vars).map_err(|msg| Error::parse(ln, msg))?;
    }
    Ok(CNFFormula { n_vars, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let f = parse_dimacs_cnf("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, 2, 3]]);
        let f = parse_dimacs_cnf("c two\np cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
        assert_eq!(f.n_clauses(), 2);
        let f = parse_dimacs_cnf("1 -2\n 3 0 2 0\n").unwrap();
        assert_eq!((f.n_vars, f.clauses.clone()), (3, vec![vec![1, -2, 3], vec![2]]));
        assert_eq!(parse_dimacs_cnf(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn rejects_convention_violations() {
        match parse_dimacs_cnf("p cnf 2 1\n1 -1 2 0\n") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("both signs"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_dimacs_cnf("p cnf 2 1\n1 1 0\n").is_err());
        assert!(parse_dimacs_cnf("p cnf 2 1\n1 3 0\n").is_err());
        assert!(parse_dimacs_cnf("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_dimacs_cnf("p cnf 2 1\n1 2\n").is_err());
        assert!(parse_dimacs_cnf("p cnf 2 1\n1 x 0\n").is_err());
        assert!(CNFFormula::new(2, vec![vec![]]).is_err());
    }

    #[test]
    fn brute_force() {
        let all8: Vec<Vec<i32>> = (0..8).map(|s| (1..=3).map(|v| if s >> (v - 1) & 1 == 1 { -v } else { v }).collect()).collect();
        assert!(CNFFormula::new(3, all8.clone()).unwrap().brute_force_sat().is_none());
        assert!(CNFFormula::new(3, all8[..7].to_vec()).unwrap().brute_force_sat().is_some());
    }
}
