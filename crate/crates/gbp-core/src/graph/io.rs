//! Edge-list and Matrix Market readers plus the canonical edge-list writer.
//!
//! Edge-list dialect: one whitespace-separated pair of non-negative integer
//! labels per line; lines starting with `#` or `%` are comments. Labels are
//! remapped to dense 0-based indices in first-appearance order. A
//! `# vertices N` comment line (emitted by the writer for generated graphs
//! whose labels are exactly `0..n-1`) pre-registers vertices `0..N-1` so
//! graphs with isolated vertices survive a round trip.
//!
//! Matrix Market: only `matrix coordinate pattern` headers with `symmetric`
//! or `general` symmetry are accepted; the size line fixes the vertex count,
//! entries are 1-based and become labels `1..=n`.

use super::Graph;
use crate::error::Error;
use crate::Result;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Input format accepted by [`load_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    MatrixMarket,
}

impl Graph {
    pub fn load(path: &Path, format: GraphFormat) -> Result<Self> {
        let file = File::open(path)?;
        let reader = BufReader::new(file);
        match format {
            GraphFormat::EdgeList => Self::read_edge_list(reader),
            GraphFormat::MatrixMarket => Self::read_matrix_market(reader),
        }
    }

    /// Picks the format from the file extension: `.mtx` is Matrix Market,
    /// anything else is an edge list.
    pub fn load_auto(path: &Path) -> Result<Self> {
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") => GraphFormat::MatrixMarket,
            _ => GraphFormat::EdgeList,
        };
        Self::load(path, format)
    }

    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut labels: Vec<u64> = Vec::new();
        let mut index_of: HashMap<u64, u32> = HashMap::new();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut declared_n: Option<usize> = None;

        let intern = |label: u64, labels: &mut Vec<u64>, index_of: &mut HashMap<u64, u32>| {
            *index_of.entry(label).or_insert_with(|| {
                labels.push(label);
                (labels.len() - 1) as u32
            })
        };

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('#') || trimmed.starts_with('%') {
                if let Some(rest) = trimmed.strip_prefix("# vertices") {
                    let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: "malformed '# vertices N' directive".into(),
                    })?;
                    for v in 0..n as u64 {
                        intern(v, &mut labels, &mut index_of);
                    }
                    declared_n = Some(n);
                }
                continue;
            }
            let mut it = trimmed.split_whitespace();
            let (a, b) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected two vertex labels, got '{trimmed}'"),
                    })
                }
            };
            let parse = |tok: &str| -> Result<u64> {
                tok.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("'{tok}' is not a non-negative integer label"),
                })
            };
            let (la, lb) = (parse(a)?, parse(b)?);
            if let Some(n) = declared_n {
                if la >= n as u64 || lb >= n as u64 {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("label outside declared vertex range 0..{n}"),
                    });
                }
            }
            let u = intern(la, &mut labels, &mut index_of);
            let v = intern(lb, &mut labels, &mut index_of);
            edges.push((u, v));
        }

        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Graph::from_edges(labels.len(), &edges)?.with_labels(labels))
    }

    pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();

        let (_, header) = lines.next().ok_or(Error::EmptyGraph)?;
        let header = header?;
        let head: Vec<String> = header.split_whitespace().map(|t| t.to_lowercase()).collect();
        let ok = head.len() == 5
            && head[0] == "%%matrixmarket"
            && head[1] == "matrix"
            && head[2] == "coordinate"
            && head[3] == "pattern"
            && (head[4] == "symmetric" || head[4] == "general");
        if !ok {
            return Err(Error::Parse {
                line: 1,
                msg: "only 'matrix coordinate pattern symmetric/general' headers are accepted".into(),
            });
        }

        let mut n = 0usize;
        let mut expected_entries = 0usize;
        let mut size_seen = false;
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for (lineno, line) in lines {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let nums: Vec<&str> = trimmed.split_whitespace().collect();
            if !size_seen {
                if nums.len() != 3 {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: "size line must be 'rows cols entries'".into(),
                    });
                }
                let rows: usize = nums[0].parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: "bad row count".into(),
                })?;
                let cols: usize = nums[1].parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: "bad column count".into(),
                })?;
                expected_entries = nums[2].parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: "bad entry count".into(),
                })?;
                if rows != cols {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: "adjacency matrix must be square".into(),
                    });
                }
                n = rows;
                size_seen = true;
                continue;
            }
            if nums.len() != 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "entry lines must be 'u v'".into(),
                });
            }
            let u: usize = nums[0].parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: "bad vertex index".into(),
            })?;
            let v: usize = nums[1].parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: "bad vertex index".into(),
            })?;
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("index out of range 1..={n}"),
                });
            }
            edges.push((u as u32 - 1, v as u32 - 1));
        }
        if !size_seen || n == 0 {
            return Err(Error::EmptyGraph);
        }
        if edges.len() != expected_entries {
            return Err(Error::Parse {
                line: 0,
                msg: format!(
                    "entry count mismatch: header says {expected_entries}, found {}",
                    edges.len()
                ),
            });
        }
        let labels: Vec<u64> = (1..=n as u64).collect();
        Ok(Graph::from_edges(n, &edges)?.with_labels(labels))
    }

    /// Canonical edge list: one `u v` pair of original labels per line in
    /// internal order. Emits a `# vertices N` directive when labels are the
    /// dense identity, so isolated vertices round-trip.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> Result<()> {
        let n = self.vertex_count();
        let dense_identity = (0..n as u32).all(|v| self.label_of(v) == v as u64);
        if dense_identity {
            writeln!(w, "# vertices {n}")?;
        }
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", self.label_of(u), self.label_of(v))?;
        }
        Ok(())
    }

    pub fn save_edge_list(&self, path: &Path) -> Result<()> {
        let mut file = File::create(path)?;
        self.write_edge_list(&mut file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn from_str(s: &str) -> Result<Graph> {
        Graph::read_edge_list(Cursor::new(s))
    }

    #[test]
    fn edge_list_path5() {
        let g = from_str("1 2\n2 3\n3 4\n4 5\n").unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.label_of(0), 1);
        assert_eq!(g.vertex_of_label(5), Some(4));
    }

    #[test]
    fn edge_list_duplicate_and_reverse_collapse() {
        let g = from_str("1 2\n2 1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_list_comments_and_blanks() {
        let g = from_str("# a comment\n% another\n\n7 9\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.label_of(0), 7);
    }

    #[test]
    fn edge_list_malformed_line_reports_position() {
        match from_str("1 2\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn edge_list_empty_is_an_error() {
        match from_str("# nothing here\n") {
            Err(Error::EmptyGraph) => {}
            other => panic!("expected empty-graph error, got {other:?}"),
        }
    }

    #[test]
    fn vertices_directive_keeps_isolated_vertices() {
        let g = from_str("# vertices 4\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn round_trip_preserves_graph() {
        let g = from_str("10 20\n20 30\n30 10\n5 6\n").unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let h = Graph::read_edge_list(Cursor::new(buf)).unwrap();
        assert_eq!(g.vertex_count(), h.vertex_count());
        assert_eq!(g.edge_count(), h.edge_count());
        for v in 0..g.vertex_count() as u32 {
            assert_eq!(g.label_of(v), h.label_of(v));
            assert_eq!(g.neighbors(v), h.neighbors(v));
        }
    }

    #[test]
    fn matrix_market_symmetric() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n% comment\n4 4 3\n2 1\n3 2\n4 3\n";
        let g = Graph::read_matrix_market(Cursor::new(text)).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.label_of(0), 1);
    }

    #[test]
    fn matrix_market_rejects_non_pattern() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 0.5\n";
        match Graph::read_matrix_market(Cursor::new(text)) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected header rejection, got {other:?}"),
        }
    }

    #[test]
    fn matrix_market_isolated_vertices_survive() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n5 5 1\n1 2\n";
        let g = Graph::read_matrix_market(Cursor::new(text)).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.connected_components().1, 4);
    }
}
