//! `syncgame <inputs> <outputs>` followed by one `forbid i j a b` line per
//! losing quadruple (0-based). `#` starts a comment line.

use std::fmt::Write as _;

use super::SynchronousGame;
use crate::error::{Error, Result};

pub fn write_game(game: &SynchronousGame) -> String {
    let mut s = format!("syncgame {} {}\n", game.n_inputs(), game.n_outputs());
    for &(i, j, a, b) in game.forbidden() {
        let _ = writeln!(s, "forbid {i} {j} {a} {b}");
    }
    s
}

/// Parses a game file; every synchrony quadruple must be listed.
pub fn read_game(text: &str) -> Result<SynchronousGame> {
    let mut header: Option<(usize, usize)> = None;
    let mut quads = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad integer '{t}'")));
        match toks[0] {
            "syncgame" if header.is_none() => {
                if toks.len() != 3 {
                    return Err(Error::parse(ln, "expected 'syncgame <inputs> <outputs>'"));
                }
                header = Some((num(toks[1])?, num(toks[2])?));
            }
            "forbid" => {
                let (ni, no) = header.ok_or_else(|| Error::parse(ln, "forbid line before header"))?;
                if toks.len() != 5 {
                    return Err(Error::parse(ln, "expected 'forbid i j a b'"));
                }
                let q = (num(toks[1])?, num(toks[2])?, num(toks[3])?, num(toks[4])?);
                if q.0 >= ni || q.1 >= ni || q.2 >= no || q.3 >= no {
                    return Err(Error::parse(ln, "index out of range"));
                }
                quads.push(q);
            }
            other => return Err(Error::parse(ln, format!("unexpected '{other}'"))),
        }
    }
    let (ni, no) = header.ok_or_else(|| Error::parse(1, "missing 'syncgame' header"))?;
    let listed: std::collections::BTreeSet<_> = quads.iter().copied().collect();
    for i in 0..ni {
        for a in 0..no {
            for b in 0..no {
                if a != b && !listed.contains(&(i, i, a, b)) {
                    return Err(Error::InvalidInput(format!("synchrony quadruple ({i}, {i}, {a}, {b}) missing")));
                }
            }
        }
    }
    SynchronousGame::new(ni, no, quads)
}
