//! Plain-text graph interchange and point files.
//!
//! A graph file starts with a header line `n m`, followed by `m` lines
//! `u v length` with 0-based vertex indices. Lengths are written in the
//! shortest form that parses back to the same `f64`. Blank lines and lines
//! starting with `#` are ignored on input.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub fn write_graph<W: Write>(g: &WeightedGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.edge_count())?;
    for (u, v, l) in g.edges() {
        writeln!(out, "{u} {v} {l}")?;
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str, line: usize) -> Result<T> {
    let field = field.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} '{field}'"),
    })
}

/// Reads a graph; the result is always sparse, whatever its density.
pub fn read_graph<R: BufRead>(input: R) -> Result<WeightedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match header {
            None => {
                let n = parse_field(fields.next(), "vertex count", line_no)?;
                let m = parse_field(fields.next(), "edge count", line_no)?;
                header = Some((n, m));
            }
            Some(_) => {
                let u: usize = parse_field(fields.next(), "vertex u", line_no)?;
                let v: usize = parse_field(fields.next(), "vertex v", line_no)?;
                let l: f64 = parse_field(fields.next(), "length", line_no)?;
                edges.push((u, v, l));
            }
        }
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: "trailing fields".into(),
            });
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: 0,
        message: "empty graph file".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    WeightedGraph::from_edges(n, edges)
}

/// `index,x,y`.
pub fn write_points_csv<W: Write>(points: &[[f64; 2]], mut out: W) -> Result<()> {
    writeln!(out, "index,x,y")?;
    for (i, p) in points.iter().enumerate() {
        writeln!(out, "{i},{},{}", p[0], p[1])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::gen_grid;
    use proptest::prelude::*;

    #[test]
    fn reads_hand_written_file() {
        let text = "# triangle\n3 3\n0 1 1\n1 2 2.5\n\n0 2 4e0\n";
        let g = read_graph(text.as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.length(1, 2), Some(2.5));
        assert_eq!(g.length(2, 0), Some(4.0));
    }

    #[test]
    fn rejects_malformed_files() {
        for bad in [
            "",
            "3\n",
            "2 1\n0 1\n",
            "2 1\n0 1 x\n",
            "2 2\n0 1 1\n",
            "2 1\n0 1 1 9\n",
            "3 1\n0 1 1\n",
            "2 1\n0 1 -1\n",
        ] {
            assert!(read_graph(bad.as_bytes()).is_err(), "accepted {bad:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn grid_round_trips_exactly(m in 2usize..7, seed in any::<u64>()) {
            let g = gen_grid(m, seed).unwrap();
            let mut buf = Vec::new();
            write_graph(&g, &mut buf).unwrap();
            let back = read_graph(buf.as_slice()).unwrap();
            prop_assert_eq!(g.edges().collect::<Vec<_>>(), back.edges().collect::<Vec<_>>());
        }
    }
}
