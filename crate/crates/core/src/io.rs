//! Text formats.
//!
//! * Hypergraph: line 1 `n m`, then `m` lines `w k v1 ... vk` (0-based ids).
//! * Bipartite edge list: lines `left right`.
//! * Point cloud: CSV, one point per row, optional header.
//! * Cut function: line 1 `k`, then `2^k` lines `bitmask value`.
//!
//! Blank lines and lines starting with `#` are ignored by every reader.
//! Reals are written with Rust's shortest round-trip formatting.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::diffusion::DiffusionTrace;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::laplacian::SubgradientCertificate;
use crate::partition::SweepResult;
use crate::potentials::CutFunction;

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|r| match r {
            Ok((_, l)) => {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

fn parse<T: FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} '{token}'"),
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_hypergraph<R: BufRead>(reader: R) -> Result<Hypergraph> {
    let mut lines = content_lines(reader);
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty hypergraph file".into(),
    })??;
    let mut tokens = header.split_whitespace();
    let n: usize = parse(tokens.next(), line, "vertex count")?;
    let m: usize = parse(tokens.next(), line, "hyperedge count")?;
    let mut edges = Vec::with_capacity(m);
    for item in lines.by_ref().take(m) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let w: f64 = parse(tokens.next(), line, "weight")?;
        let k: usize = parse(tokens.next(), line, "hyperedge size")?;
        let vertices = (0..k)
            .map(|_| parse::<usize>(tokens.next(), line, "vertex id"))
            .collect::<Result<Vec<_>>>()?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line,
                message: format!("more than {k} vertex ids"),
            });
        }
        edges.push((vertices, w));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line,
            message: format!("header promises {m} hyperedges, found {}", edges.len()),
        });
    }
    if let Some(extra) = lines.next() {
        let (line, _) = extra?;
        return Err(Error::Parse {
            line,
            message: "unexpected content after the last hyperedge".into(),
        });
    }
    Hypergraph::build(n, edges)
}

pub fn read_hypergraph_file(path: &Path) -> Result<Hypergraph> {
    read_hypergraph(open(path)?)
}

pub fn write_hypergraph<W: Write>(mut out: W, graph: &Hypergraph) -> Result<()> {
    writeln!(out, "{} {}", graph.num_vertices(), graph.num_edges())?;
    for (edge, w) in graph.edges().iter().zip(graph.weights()) {
        write!(out, "{w} {}", edge.len())?;
        for v in edge {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_hypergraph_file(path: &Path, graph: &Hypergraph) -> Result<()> {
    let mut out = create(path)?;
    write_hypergraph(&mut out, graph)?;
    out.flush()?;
    Ok(())
}

/// A bipartite edge list grouped by right node.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteEdges {
    /// `1 + ` the largest left id.
    pub num_left: usize,
    /// Left neighbours of every right node, in ascending right id.
    pub right_adjacency: Vec<Vec<usize>>,
}

pub fn read_bipartite<R: BufRead>(reader: R) -> Result<BipartiteEdges> {
    let mut pairs = Vec::new();
    for item in content_lines(reader) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let left: usize = parse(tokens.next(), line, "left id")?;
        let right: usize = parse(tokens.next(), line, "right id")?;
        pairs.push((right, left));
    }
    let num_left = pairs.iter().map(|&(_, l)| l + 1).max().unwrap_or(0);
    pairs.sort_unstable();
    let mut right_adjacency: Vec<Vec<usize>> = Vec::new();
    let mut current = None;
    for (right, left) in pairs {
        if current != Some(right) {
            right_adjacency.push(Vec::new());
            current = Some(right);
        }
        right_adjacency.last_mut().expect("group opened").push(left);
    }
    Ok(BipartiteEdges {
        num_left,
        right_adjacency,
    })
}

pub fn read_points<R: BufRead>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for item in content_lines(reader) {
        let (line, text) = item?;
        let row: std::result::Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse::<f64>()).collect();
        match row {
            Ok(p) => {
                if let Some(first) = points.first() {
                    if first.len() != p.len() {
                        return Err(Error::Parse {
                            line,
                            message: format!("expected {} coordinates, got {}", first.len(), p.len()),
                        });
                    }
                }
                points.push(p);
            }
            Err(_) if points.is_empty() && line == 1 => {}
            Err(_) => {
                return Err(Error::Parse {
                    line,
                    message: "non-numeric coordinate".into(),
                })
            }
        }
    }
    Ok(points)
}

pub fn read_cut_function<R: BufRead>(reader: R) -> Result<CutFunction> {
    let mut lines = content_lines(reader);
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty cut function file".into(),
    })??;
    let k: usize = parse(header.split_whitespace().next(), line, "ground set size")?;
    if !(1..=crate::potentials::MAX_CUT_FUNCTION_SIZE).contains(&k) {
        return Err(Error::InvalidCutFunction(format!("ground set size {k} out of range")));
    }
    let mut values = vec![f64::NAN; 1 << k];
    for item in lines {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let mask: usize = parse(tokens.next(), line, "bitmask")?;
        let value: f64 = parse(tokens.next(), line, "value")?;
        if mask >= values.len() {
            return Err(Error::Parse {
                line,
                message: format!("bitmask {mask} exceeds 2^{k} - 1"),
            });
        }
        values[mask] = value;
    }
    if let Some(missing) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::InvalidCutFunction(format!("no value for bitmask {missing}")));
    }
    CutFunction::new(k, values)
}

/// A vertex vector given either as one value per line or as `vertex,value`
/// rows (unlisted vertices are 0). A non-numeric first line is a header.
pub fn read_vector<R: BufRead>(reader: R, n: usize) -> Result<Vec<f64>> {
    let mut dense = Vec::new();
    let mut sparse = vec![0.0; n];
    let mut saw_pairs = false;
    for item in content_lines(reader) {
        let (line, text) = item?;
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        match fields.as_slice() {
            [v] => match v.parse::<f64>() {
                Ok(v) => dense.push(v),
                Err(_) if line == 1 => {}
                Err(_) => return Err(parse::<f64>(Some(v), line, "value").unwrap_err()),
            },
            [vertex, value] => {
                let Ok(vertex) = vertex.parse::<usize>() else {
                    if line == 1 {
                        continue;
                    }
                    return Err(parse::<usize>(Some(vertex), line, "vertex id").unwrap_err());
                };
                let value: f64 = parse(Some(value), line, "value")?;
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
                sparse[vertex] = value;
                saw_pairs = true;
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "expected 'value' or 'vertex,value'".into(),
                })
            }
        }
    }
    if saw_pairs && !dense.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "mixed dense and sparse rows".into(),
        });
    }
    if saw_pairs {
        return Ok(sparse);
    }
    if dense.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: dense.len(),
        });
    }
    Ok(dense)
}

pub fn read_vector_file(path: &Path, n: usize) -> Result<Vec<f64>> {
    read_vector(open(path)?, n)
}

pub fn read_points_file(path: &Path) -> Result<Vec<Vec<f64>>> {
    read_points(open(path)?)
}

pub fn read_bipartite_file(path: &Path) -> Result<BipartiteEdges> {
    read_bipartite(open(path)?)
}

pub fn read_cut_function_file(path: &Path) -> Result<CutFunction> {
    read_cut_function(open(path)?)
}

/// `vertex,value`.
pub fn write_vector<W: Write>(mut out: W, x: &[f64]) -> Result<()> {
    writeln!(out, "vertex,value")?;
    for (v, value) in x.iter().enumerate() {
        writeln!(out, "{v},{value}")?;
    }
    Ok(())
}

/// `t,objective`, with `t` counted from 1.
pub fn write_objective<W: Write>(mut out: W, history: &[f64]) -> Result<()> {
    writeln!(out, "t,objective")?;
    for (t, value) in history.iter().enumerate() {
        writeln!(out, "{},{value}", t + 1)?;
    }
    Ok(())
}

/// `t,potential,variance,rayleigh,dual_gap`.
pub fn write_trace<W: Write>(mut out: W, trace: &DiffusionTrace) -> Result<()> {
    writeln!(out, "t,potential,variance,rayleigh,dual_gap")?;
    for r in &trace.records {
        writeln!(out, "{},{},{},{},{}", r.t, r.potential, r.variance, r.rayleigh, r.dual_gap)?;
    }
    Ok(())
}

/// `t,vertex,value` for every stored iterate.
pub fn write_iterates<W: Write>(mut out: W, trace: &DiffusionTrace) -> Result<()> {
    writeln!(out, "t,vertex,value")?;
    for (t, x) in &trace.iterates {
        for (v, value) in x.iter().enumerate() {
            writeln!(out, "{t},{v},{value}")?;
        }
    }
    Ok(())
}

/// `rank,vertex,phi`, rank counted from 1.
pub fn write_sweep_profile<W: Write>(mut out: W, sweep: &SweepResult) -> Result<()> {
    writeln!(out, "rank,vertex,phi")?;
    for (i, phi) in sweep.profile.iter().enumerate() {
        writeln!(out, "{},{},{phi}", i + 1, sweep.ordering[i])?;
    }
    Ok(())
}

/// `vertex,z_value`, then one `edge,f,vertex,y` block per hyperedge.
pub fn write_certificate<W: Write>(mut out: W, graph: &Hypergraph, cert: &SubgradientCertificate) -> Result<()> {
    writeln!(out, "vertex,z_value")?;
    for (v, z) in cert.z.iter().enumerate() {
        writeln!(out, "{v},{z}")?;
    }
    writeln!(out)?;
    writeln!(out, "edge,f,vertex,y")?;
    for (e, (y, f)) in cert.witnesses.iter().zip(&cert.edge_values).enumerate() {
        for (v, yv) in graph.edge(e).iter().zip(y) {
            writeln!(out, "{e},{f},{v},{yv}")?;
        }
    }
    Ok(())
}

/// `key = value` lines.
pub fn write_metadata<W: Write>(mut out: W, entries: &[(&str, String)]) -> Result<()> {
    for (k, v) in entries {
        writeln!(out, "{k} = {v}")?;
    }
    Ok(())
}

/// Runs `f` against a buffered file at `path`.
pub fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut out = create(path)?;
    f(&mut out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergraph_round_trip() {
        let text = "# comment\n4 2\n1.5 3 0 1 2\n0.1 2 3 2\n";
        let g = read_hypergraph(text.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_hypergraph(&mut buf, &g).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "4 2\n1.5 3 0 1 2\n0.1 2 2 3\n");
        let again = read_hypergraph(buf.as_slice()).unwrap();
        assert_eq!(again.weights(), g.weights());
        assert_eq!(again.edges(), g.edges());
    }

    #[test]
    fn hypergraph_errors() {
        assert!(matches!(read_hypergraph("2 1\n1 2 0\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_hypergraph("2 2\n1 2 0 1\n".as_bytes()), Err(Error::Parse { .. })));
        assert!(matches!(
            read_hypergraph("2 1\n1 2 0 5\n".as_bytes()),
            Err(Error::VertexOutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn bipartite_groups() {
        let b = read_bipartite("0 7\n2 7\n1 3\n0 3\n".as_bytes()).unwrap();
        assert_eq!(b.num_left, 3);
        assert_eq!(b.right_adjacency, vec![vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn points_with_header() {
        let p = read_points("x,y\n1,2\n3.5,-1\n".as_bytes()).unwrap();
        assert_eq!(p, vec![vec![1.0, 2.0], vec![3.5, -1.0]]);
        assert!(read_points("1,2\n3\n".as_bytes()).is_err());
    }

    #[test]
    fn cut_function_file() {
        let c = read_cut_function("2\n0 0\n1 1\n2 1\n3 0\n".as_bytes()).unwrap();
        assert_eq!(c.table(), &[0.0, 1.0, 1.0, 0.0]);
        assert!(read_cut_function("2\n0 0\n1 1\n3 0\n".as_bytes()).is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(read_vector("1\n-2\n0.5\n".as_bytes(), 3).unwrap(), vec![1.0, -2.0, 0.5]);
        assert_eq!(read_vector("vertex,value\n2,1.5\n".as_bytes(), 3).unwrap(), vec![0.0, 0.0, 1.5]);
        assert!(read_vector("1\n".as_bytes(), 3).is_err());
    }
}
