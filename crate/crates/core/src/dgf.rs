//! DGF: the plain-text digraph format.
//!
//! ```text
//! # comment
//! n 3
//! e 1 2
//! e 2 3 0.5
//! ```
//!
//! Endpoints are 1-indexed; the weight defaults to 1.

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::graph::Digraph;

pub fn read_dgf(text: &str) -> Result<Digraph> {
    let mut order: Option<usize> = None;
    let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let rest: Vec<&str> = fields.collect();
        match (order, tag) {
            (None, "n") => {
                let [v] = rest[..] else {
                    return Err(parse_err("expected 'n <order>'".into()));
                };
                let n: usize = v
                    .parse()
                    .map_err(|_| parse_err(format!("invalid order '{v}'")))?;
                if n == 0 {
                    return Err(parse_err("order must be positive".into()));
                }
                order = Some(n);
            }
            (None, _) => return Err(parse_err("first line must be 'n <order>'".into())),
            (Some(_), "n") => return Err(parse_err("order declared twice".into())),
            (Some(n), "e") => {
                if rest.len() != 2 && rest.len() != 3 {
                    return Err(parse_err("expected 'e <i> <j> [<weight>]'".into()));
                }
                let endpoint = |s: &str| -> Result<usize> {
                    let v: usize = s
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex '{s}'")))?;
                    if v == 0 || v > n {
                        return Err(parse_err(format!("vertex {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let i = endpoint(rest[0])?;
                let j = endpoint(rest[1])?;
                let w = match rest.get(2) {
                    Some(s) => s
                        .parse::<f64>()
                        .map_err(|_| parse_err(format!("invalid weight '{s}'")))?,
                    None => 1.0,
                };
                if i == j {
                    return Err(Error::LoopArc(i));
                }
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::InvalidWeight { i, j, weight: w });
                }
                arcs.push((i, j, w));
            }
            (Some(_), other) => return Err(parse_err(format!("unknown record '{other}'"))),
        }
    }
    let n = order.ok_or(Error::Parse {
        line: 0,
        msg: "missing 'n <order>' line".into(),
    })?;
    Digraph::from_weighted_arcs(n, &arcs)
}

/// Arcs in row-major order; unit weights are written without a weight field.
pub fn write_dgf(g: &Digraph) -> String {
    let mut out = format!("n {}\n", g.order());
    for (i, j, w) in g.arcs() {
        if w == 1.0 {
            out.push_str(&format!("e {} {}\n", i + 1, j + 1));
        } else {
            out.push_str(&format!("e {} {} {}\n", i + 1, j + 1, g17(w)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_examples() {
        let c3 = read_dgf("n 3\ne 1 2\ne 2 3\ne 3 1\n").unwrap();
        assert_eq!(c3, Digraph::dicycle(3).unwrap());
        let g = read_dgf("n 2\ne 1 2 0.5\ne 2 1 0.5\n").unwrap();
        assert_eq!(g.weight(0, 1), 0.5);
        assert_eq!(g.weight(1, 0), 0.5);
        assert!(matches!(read_dgf("n 2\ne 1 1\n"), Err(Error::LoopArc(0))));
    }

    #[test]
    fn comments_and_exponents() {
        let g = read_dgf("# header\n\nn 2\n# arc\ne 2 1 2.5e-1\n").unwrap();
        assert_eq!(g.weight(1, 0), 0.25);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(read_dgf("e 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_dgf("n 2\ne 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_dgf("n 2\ne 1 3\n"), Err(Error::Parse { .. })));
        assert!(matches!(read_dgf("n 2\ne 1 2 x\n"), Err(Error::Parse { .. })));
        assert!(matches!(read_dgf("n 2\nx 1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            read_dgf("n 2\ne 1 2 1.5\n"),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            read_dgf("n 2\ne 1 2\ne 1 2 0.5\n"),
            Err(Error::DuplicateArc(0, 1))
        ));
        assert!(read_dgf("# nothing\n").is_err());
        assert!(read_dgf("n 0\n").is_err());
    }

    #[test]
    fn writes_row_major() {
        let g = Digraph::from_weighted_arcs(3, &[(2, 0, 1.0), (0, 1, 0.1)]).unwrap();
        assert_eq!(write_dgf(&g), "n 3\ne 1 2 0.10000000000000001\ne 3 1\n");
    }
}
