//! Text form: a header line `gb order=deglex d_max=N complete=true|false count=K`
//! followed by one polynomial per line in the ncpoly syntax.

use std::fmt::Write as _;

use super::basis::GroebnerBasis;
use crate::error::{Error, Result};
use crate::ncpoly::{parse_poly_at_line, MonomialOrder};

pub fn write_basis(gb: &GroebnerBasis) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "gb order={} d_max={} complete={} count={}",
        gb.order(),
        gb.degree_bound(),
        gb.is_complete(),
        gb.len()
    );
    for e in gb.elements() {
        let _ = writeln!(s, "{e}");
    }
    s
}

pub fn read_basis(text: &str) -> Result<GroebnerBasis> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty basis file"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("gb") {
        return Err(Error::parse(hline + 1, "expected 'gb' header"));
    }
    let mut d_max = None;
    let mut complete = None;
    let mut count = None;
    let mut order = None;
    for f in fields {
        let (k, v) = f.split_once('=').ok_or_else(|| Error::parse(hline + 1, format!("bad header field '{f}'")))?;
        let bad = || Error::parse(hline + 1, format!("bad value in '{f}'"));
        match k {
            "order" if v == "deglex" => order = Some(MonomialOrder::GradedLex),
            "d_max" => d_max = Some(v.parse::<usize>().map_err(|_| bad())?),
            "complete" => complete = Some(v.parse::<bool>().map_err(|_| bad())?),
            "count" => count = Some(v.parse::<usize>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    let missing = |name: &str| Error::parse(hline + 1, format!("header lacks {name}"));
    let order = order.ok_or_else(|| missing("order"))?;
    let d_max = d_max.ok_or_else(|| missing("d_max"))?;
    let complete = complete.ok_or_else(|| missing("complete"))?;
    let count = count.ok_or_else(|| missing("count"))?;
    let mut elements = Vec::with_capacity(count);
    for (ln, line) in lines {
        let p = parse_poly_at_line(line, ln + 1)?;
        if p.is_zero() {
            return Err(Error::parse(ln + 1, "zero basis element"));
        }
        elements.push(p.monic());
    }
    if elements.len() != count {
        return Err(Error::parse(hline + 1, format!("header count {count} but {} elements", elements.len())));
    }
    Ok(GroebnerBasis::from_parts(elements, order, d_max, complete))
}
