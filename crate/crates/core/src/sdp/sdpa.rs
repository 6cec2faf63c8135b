//! SDPA sparse format. The file describes the SDPA pair
//! `max ⟨F0, Y⟩ s.t. ⟨F_i, Y⟩ = c_i, Y ⪰ 0`, so this module writes
//! `F0 = -C`, `F_i = A_i`, `c_i = b_i`; importing undoes the sign.

use std::fmt::Write as _;

use super::{DenseSDP, Entry};
use crate::error::{Error, Result};

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn export_sdpa(sdp: &DenseSDP) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", sdp.n_constraints());
    let _ = writeln!(s, "{}", sdp.block_dims().len());
    let dims: Vec<String> = sdp.block_dims().iter().map(usize::to_string).collect();
    let _ = writeln!(s, "{}", dims.join(" "));
    let rhs: Vec<String> = sdp.rhs().iter().map(|&v| num(v)).collect();
    let _ = writeln!(s, "{}", rhs.join(" "));
    let mut line = |k: usize, e: &Entry, v: f64| {
        let _ = writeln!(s, "{k} {} {} {} {}", e.block + 1, e.row + 1, e.col + 1, num(v));
    };
    for e in sdp.objective() {
        line(0, e, -e.value);
    }
    for (i, a) in sdp.constraints().iter().enumerate() {
        for e in a {
            line(i + 1, e, e.value);
        }
    }
    s
}

pub fn import_sdpa(text: &str) -> Result<DenseSDP> {
    // header values may share lines and use separators `,(){}`
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with(['"', '*']));
    let mut header_tokens: Vec<(usize, String)> = Vec::new();
    let clean = |l: &str| l.replace([',', '(', ')', '{', '}'], " ");
    let mut m: Option<usize> = None;
    let mut nb: Option<usize> = None;
    let mut dims: Vec<usize> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut rest_start = None;
    for (ln, l) in lines.by_ref() {
        for t in clean(l).split_whitespace() {
            header_tokens.push((ln + 1, t.to_string()));
        }
        let mut it = header_tokens.iter();
        let parse_usize = |(ln, t): &(usize, String)| t.parse::<usize>().map_err(|_| Error::parse(*ln, format!("bad integer '{t}'")));
        if let Some(tok) = it.next() {
            m = Some(parse_usize(tok)?);
        }
        if let Some(tok) = it.next() {
            nb = Some(parse_usize(tok)?);
        }
        if let (Some(mm), Some(n)) = (m, nb) {
            let rest: Vec<_> = it.collect();
            if rest.len() >= n + mm {
                dims = rest[..n]
                    .iter()
                    .map(|(ln, t)| {
                        t.parse::<i64>()
                            .map_err(|_| Error::parse(*ln, format!("bad block size '{t}'")))
                            .map(|d| d.unsigned_abs() as usize)
                    })
                    .collect::<Result<_>>()?;
                rhs = rest[n..n + mm]
                    .iter()
                    .map(|(ln, t)| t.parse::<f64>().map_err(|_| Error::parse(*ln, format!("bad number '{t}'"))))
                    .collect::<Result<_>>()?;
                if rest.len() > n + mm {
                    return Err(Error::parse(ln + 1, "unexpected tokens after right-hand side"));
                }
                rest_start = Some(());
                break;
            }
        }
    }
    if rest_start.is_none() {
        return Err(Error::parse(1, "incomplete SDPA header"));
    }
    let m = m.expect("header parsed");
    let mut cons: Vec<Vec<Entry>> = vec![Vec::new(); m];
    let mut obj = Vec::new();
    for (ln, l) in lines {
        let toks: Vec<String> = clean(l).split_whitespace().map(str::to_string).collect();
        if toks.len() != 5 {
            return Err(Error::parse(ln + 1, "expected '<matrix> <block> <row> <col> <value>'"));
        }
        let ix = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(ln + 1, format!("bad index '{t}'")));
        let (k, b, i, j) = (ix(&toks[0])?, ix(&toks[1])?, ix(&toks[2])?, ix(&toks[3])?);
        let v: f64 = toks[4].parse().map_err(|_| Error::parse(ln + 1, format!("bad value '{}'", toks[4])))?;
        if b == 0 || i == 0 || j == 0 || k > m {
            return Err(Error::parse(ln + 1, "index out of range"));
        }
        let e = Entry { block: b - 1, row: i - 1, col: j - 1, value: v };
        if k == 0 {
            obj.push(Entry { value: -v, ..e });
        } else {
            cons[k - 1].push(e);
        }
    }
    DenseSDP::new(dims, cons, rhs, obj)
}
