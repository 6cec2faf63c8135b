//! Certificate text format:
//!
//! ```text
//! certificate words=N relations=L
//! word <index> <word>          one per basis word, in order
//! S <row> <col> <p/q>          upper triangle, nonzero entries
//! f <relation> <polynomial>    nonzero left coefficients
//! g <relation> <polynomial>    nonzero right coefficients
//! ```
//!
//! Words use the polynomial syntax with `1` for the empty word. Lines
//! starting with `#` are comments.

use std::fmt::Write as _;

use num_traits::Zero;

use super::RefutationCertificate;
use crate::error::{Error, Result};
use crate::ncpoly::{parse_poly_at_line, Coeff, NCPolynomial, Word};

pub fn write_certificate(cert: &RefutationCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "certificate words={} relations={}", cert.words.len(), cert.f.len());
    for (i, w) in cert.words.iter().enumerate() {
        let _ = writeln!(s, "word {i} {w}");
    }
    for (u, row) in cert.s.iter().enumerate() {
        for (v, c) in row.iter().enumerate().skip(u) {
            if !c.is_zero() {
                let _ = writeln!(s, "S {u} {v} {c}");
            }
        }
    }
    for (tag, polys) in [("f", &cert.f), ("g", &cert.g)] {
        for (l, p) in polys.iter().enumerate() {
            if !p.is_zero() {
                let _ = writeln!(s, "{tag} {l} {p}");
            }
        }
    }
    s
}

fn field<'a>(it: &mut impl Iterator<Item = &'a str>, line: usize, what: &str) -> Result<&'a str> {
    it.next().ok_or_else(|| Error::parse(line, format!("missing {what}")))
}

fn index(tok: &str, line: usize, bound: usize, what: &str) -> Result<usize> {
    let i: usize = tok.parse().map_err(|_| Error::parse(line, format!("bad {what} '{tok}'")))?;
    if i >= bound {
        return Err(Error::parse(line, format!("{what} {i} out of range (< {bound})")));
    }
    Ok(i)
}

fn header_value(tok: Option<&str>, key: &str, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {key}=")))?;
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("expected {key}=<count>, found '{tok}'")))
}

pub fn read_certificate(text: &str) -> Result<RefutationCertificate> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty certificate"))?;
    let mut h = header.split_whitespace();
    if h.next() != Some("certificate") {
        return Err(Error::parse(hl, "expected 'certificate' header"));
    }
    let n = header_value(h.next(), "words", hl)?;
    let l = header_value(h.next(), "relations", hl)?;
    let mut words: Vec<Option<Word>> = vec![None; n];
    let mut s = vec![vec![Coeff::zero(); n]; n];
    let mut f = vec![NCPolynomial::zero(); l];
    let mut g = vec![NCPolynomial::zero(); l];
    for (ln, line) in lines {
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let mut it = rest.split_whitespace();
        match tag {
            "word" => {
                let i = index(field(&mut it, ln, "word index")?, ln, n, "word index")?;
                let body = rest.trim_start()[rest.trim_start().find(char::is_whitespace).unwrap_or(rest.len())..].trim();
                let p = parse_poly_at_line(body, ln)?;
                let w = match p.terms().collect::<Vec<_>>().as_slice() {
                    [(w, c)] if c == &&Coeff::from_integer(1.into()) => (*w).clone(),
                    _ => return Err(Error::parse(ln, "a basis word must be a single monomial with coefficient 1")),
                };
                if words[i].replace(w).is_some() {
                    return Err(Error::parse(ln, format!("word {i} given twice")));
                }
            }
            "S" => {
                let u = index(field(&mut it, ln, "row")?, ln, n, "row")?;
                let v = index(field(&mut it, ln, "column")?, ln, n, "column")?;
                let tok = field(&mut it, ln, "value")?;
                let c: Coeff = tok.parse().map_err(|_| Error::parse(ln, format!("bad rational '{tok}'")))?;
                if it.next().is_some() {
                    return Err(Error::parse(ln, "trailing tokens"));
                }
                s[u][v] = c.clone();
                s[v][u] = c;
            }
            "f" | "g" => {
                let li = index(field(&mut it, ln, "relation index")?, ln, l, "relation index")?;
                let body = rest.trim_start()[rest.trim_start().find(char::is_whitespace).unwrap_or(rest.len())..].trim();
                let p = parse_poly_at_line(body, ln)?;
                let dst = if tag == "f" { &mut f } else { &mut g };
                dst[li] = p;
            }
            _ => return Err(Error::parse(ln, format!("unknown record '{tag}'"))),
        }
    }
    let words = words
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::parse(hl, format!("word {i} missing"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RefutationCertificate { words, s, f, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{parse_poly, rat, GeneratorId};

    fn sample() -> RefutationCertificate {
        RefutationCertificate {
            words: vec![Word::one(), Word::letter(GeneratorId::new(0, 1))],
            s: vec![vec![rat(1, 2), rat(-1, 3)], vec![rat(-1, 3), rat(2, 1)]],
            f: vec![parse_poly("x[0,0] - 2/3").unwrap(), NCPolynomial::zero()],
            g: vec![NCPolynomial::zero(), parse_poly("x[0,1]*x[0,0]").unwrap()],
        }
    }

    #[test]
    fn round_trip() {
        let c = sample();
        assert_eq!(read_certificate(&write_certificate(&c)).unwrap(), c);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = write_certificate(&sample()).replace("S 0 1 -1/3", "S 0 7 -1/3");
        match read_certificate(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        assert!(read_certificate("certificate words=1 relations=0\n").is_err());
        assert!(read_certificate("certificate words=1 relations=0\nword 0 2*x[0,0]\n").is_err());
    }
}
